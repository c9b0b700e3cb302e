"""
Moment-cumulant formulas for real (and complex) infinitesimal freeness.

Classical part::

    τ(a₁⋯aₙ) = Σ_{π ∈ NC(n)} κ_π

Infinitesimal part, real case::

    τ′(a₁⋯aₙ) = Σ_π ∂κ_π + Σ_{σ} κ_{σ/2}

with σ running over the symmetric annular set. Each conjugate pair of
cycles of σ contributes one cumulant, read along the cycle, with letters
at negative points transposed. The annular sum restricted to permutations
whose cycles all meet both circles is the spatial derivative κ̇ₙ; the
complex case drops the annular sum altogether.

All arithmetic is exact.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .annular import AnnularSymPermutation, conjugate_pairs, enumerate_sncd, enumerate_sncd_all_through
from .distribution import CumulantTable, Distribution
from .noncrossing import NCPartition, enumerate_nc, mobius_to_top
from .polynomial import Poly, series_derivative, series_div, series_mul
from .words import Word

__all__ = [
    "Template",
    "nc_blocks",
    "sigma_template",
    "tau_pi",
    "dtau_pi",
    "kappa_pi",
    "dkappa_pi",
    "delta_kappa_pi",
    "nabla_kappa_pi",
    "kappa_sigma_half",
    "kappa_dot",
    "kappa_from_moments",
    "infinitesimal_cumulants_from_distribution",
    "complex_infinitesimal_cumulants_from_distribution",
    "tau_from_cumulants",
    "tau_prime_from_cumulants",
    "complex_tau_prime_from_cumulants",
    "distribution_from_cumulants",
    "kappa_dot_polynomial",
    "kappa_dot_moment_polynomial",
    "moment_cumulant_polynomials",
    "kappa_dot_series",
]

# A reading template lists, per factor, the (0-based position, transpose) pairs.
Template = tuple[tuple[tuple[int, bool], ...], ...]


@lru_cache(maxsize=None)
def nc_blocks(n: int) -> tuple[tuple[tuple[tuple[int, ...], ...], Fraction], ...]:
    """(0-based blocks, μ(π, 1ₙ)) for every π in NC(n)."""
    out = []
    for p in enumerate_nc(n):
        blocks = tuple(tuple(k - 1 for k in b) for b in p.blocks)
        out.append((blocks, mobius_to_top(p)))
    return tuple(out)


def _blocks(pi) -> tuple[tuple[int, ...], ...]:
    if isinstance(pi, NCPartition):
        return tuple(tuple(k - 1 for k in b) for b in pi.blocks)
    return tuple(pi)


def sigma_template(sigma) -> Template:
    """One factor per conjugate pair: its representative cycle, read in order."""
    out = []
    for pair in conjugate_pairs(sigma):
        out.append(tuple((abs(k) - 1, k < 0) for k in pair.representative))
    return tuple(out)


@lru_cache(maxsize=None)
def _annular_templates(n: int, all_through: bool) -> tuple[Template, ...]:
    if n < 2:
        return ()
    sigmas = enumerate_sncd_all_through(n) if all_through else enumerate_sncd(n)
    return tuple(sigma_template(s) for s in sigmas)


def _read(word: Word, factor: Sequence[tuple[int, bool]]) -> Word:
    return Word(word[i].t if flip else word[i] for i, flip in factor)


# -- products over partitions


def tau_pi(pi, word: Word, dist: Distribution) -> Fraction:
    """Product over blocks of τ of the sub-word on that block."""
    return math.prod((dist.tau_of(word.pick(b)) for b in _blocks(pi)), start=Fraction(1))


def dtau_pi(pi, word: Word, dist: Distribution) -> Fraction:
    """∂τ_π: one block carries τ′, summed over the choice of block."""
    blocks = _blocks(pi)
    vals = [dist.tau_of(word.pick(b)) for b in blocks]
    total = Fraction(0)
    for i, b in enumerate(blocks):
        rest = math.prod(vals[:i] + vals[i + 1:], start=Fraction(1))
        if rest:
            total += dist.tau_prime_of(word.pick(b)) * rest
    return total


def kappa_pi(pi, word: Word, table: CumulantTable) -> Fraction:
    return math.prod((table.kappa_of(word.pick(b)) for b in _blocks(pi)), start=Fraction(1))


def _one_block_replaced(blocks, word, table, replace) -> Fraction:
    vals = [table.kappa_of(word.pick(b)) for b in blocks]
    total = Fraction(0)
    for i, b in enumerate(blocks):
        rest = math.prod(vals[:i] + vals[i + 1:], start=Fraction(1))
        if rest:
            total += replace(word.pick(b)) * rest
    return total


def dkappa_pi(pi, word: Word, table: CumulantTable) -> Fraction:
    """∂κ_π: one block carries κ′."""
    return _one_block_replaced(_blocks(pi), word, table, table.kappa_prime_of)


def delta_kappa_pi(pi, word: Word, table: CumulantTable) -> Fraction:
    """δκ_π: one block carries κ̇ (zero on singletons)."""
    return _one_block_replaced(_blocks(pi), word, table, lambda w: kappa_dot(w, table))


def nabla_kappa_pi(pi, word: Word, table: CumulantTable) -> Fraction:
    return dkappa_pi(pi, word, table) + delta_kappa_pi(pi, word, table)


def _kappa_template(template: Template, word: Word, table: CumulantTable) -> Fraction:
    out = Fraction(1)
    for factor in template:
        out *= table.kappa_of(_read(word, factor))
        if not out:
            break
    return out


def kappa_sigma_half(sigma, word: Word, table: CumulantTable) -> Fraction:
    """κ_{σ/2}: product over conjugate pairs of the cumulant read along a cycle."""
    if not (table.tracial and table.transpose_symmetric):
        raise ValueError("κ_{σ/2} needs a tracial, transpose-symmetric table")
    s = sigma.perm if isinstance(sigma, AnnularSymPermutation) else sigma
    if s.n != len(word):
        raise ValueError("word length does not match σ")
    return _kappa_template(sigma_template(sigma), word, table)


def kappa_dot(word: Word, table: CumulantTable) -> Fraction:
    """Spatial derivative κ̇ₙ: κ_{σ/2} summed over all-through σ (0 for n = 1)."""
    n = len(word)
    if n < 1:
        raise ValueError("κ̇ needs at least one argument")
    return sum((_kappa_template(t, word, table) for t in _annular_templates(n, True)), Fraction(0))


def _annular_sum(word: Word, table: CumulantTable) -> Fraction:
    return sum((_kappa_template(t, word, table) for t in _annular_templates(len(word), False)), Fraction(0))


# -- moments -> cumulants


def _flags(obj) -> dict:
    return dict(
        degree=obj.degree,
        generators=obj.generators,
        tracial=obj.tracial,
        transpose_symmetric=obj.transpose_symmetric,
        symmetric=obj.symmetric,
    )


def kappa_from_moments(dist: Distribution) -> CumulantTable:
    """Free cumulants by Möbius inversion over NC(n)."""
    kappa = {}
    for w in dist.all_words():
        kappa[w] = sum((mu * tau_pi(b, w, dist) for b, mu in nc_blocks(len(w))), Fraction(0))
    return CumulantTable(**_flags(dist), kappa=kappa)


def _nabla_from_moments(word: Word, dist: Distribution) -> Fraction:
    return sum((mu * dtau_pi(b, word, dist) for b, mu in nc_blocks(len(word)) if mu), Fraction(0))


def infinitesimal_cumulants_from_distribution(dist: Distribution,
                                              classical: CumulantTable | None = None) -> CumulantTable:
    """κ and real κ′, with κ′ₙ = Σ_π μ(π, 1ₙ) ∂τ_π − κ̇ₙ."""
    base = classical or kappa_from_moments(dist)
    kprime = {w: _nabla_from_moments(w, dist) - kappa_dot(w, base) for w in dist.all_words()}
    return CumulantTable(**_flags(dist), kappa=base.kappa, kappa_prime=kprime)


def complex_infinitesimal_cumulants_from_distribution(dist: Distribution,
                                                      classical: CumulantTable | None = None) -> CumulantTable:
    """κ and the complex κ′ = Σ_π μ(π, 1ₙ) ∂τ_π."""
    base = classical or kappa_from_moments(dist)
    kprime = {w: _nabla_from_moments(w, dist) for w in dist.all_words()}
    return CumulantTable(**_flags(dist), kappa=base.kappa, kappa_prime=kprime, mode="complex")


# -- cumulants -> moments


def tau_from_cumulants(word: Word, table: CumulantTable) -> Fraction:
    if not word:
        return Fraction(1)
    return sum((kappa_pi(b, word, table) for b, _ in nc_blocks(len(word))), Fraction(0))


def complex_tau_prime_from_cumulants(word: Word, table: CumulantTable) -> Fraction:
    if not word:
        return Fraction(0)
    return sum((dkappa_pi(b, word, table) for b, _ in nc_blocks(len(word))), Fraction(0))


def tau_prime_from_cumulants(word: Word, table: CumulantTable) -> Fraction:
    """τ′ = Σ_π ∂κ_π + Σ_σ κ_{σ/2}."""
    if not word:
        return Fraction(0)
    return complex_tau_prime_from_cumulants(word, table) + _annular_sum(word, table)


def distribution_from_cumulants(table: CumulantTable, degree: int | None = None,
                                labels=None) -> Distribution:
    """Rebuild (τ, τ′) on every canonical word, honouring the table's mode."""
    top = table.degree if degree is None else degree
    words = table.all_words(top)
    tau = {w: tau_from_cumulants(w, table) for w in words}
    if table.mode == "complex":
        tau_prime = {w: complex_tau_prime_from_cumulants(w, table) for w in words}
    else:
        tau_prime = {w: tau_prime_from_cumulants(w, table) for w in words}
    flags = _flags(table)
    flags["degree"] = top
    return Distribution(**flags, tau=tau, tau_prime=tau_prime, labels=labels)


# -- single symmetric variable


def _cycle_type(template: Template) -> tuple[int, ...]:
    return tuple(sorted(len(f) for f in template))


def kappa_dot_polynomial(n: int) -> Poly:
    """κ̇ₙ of one self-transpose variable as a polynomial in κ₂..κₙ.

    >>> str(kappa_dot_polynomial(4))
    '6κ4 + κ2^2'
    """
    if not 2 <= n <= 10:
        raise ValueError("κ̇ polynomials are available for 2 <= n <= 10")
    counts: dict[tuple[int, ...], int] = {}
    for t in _annular_templates(n, True):
        ct = _cycle_type(t)
        counts[ct] = counts.get(ct, 0) + 1
    out = Poly()
    for ct, c in counts.items():
        exps: dict[str, int] = {}
        for size in ct:
            exps[f"κ{size}"] = exps.get(f"κ{size}", 0) + 1
        out = out + Poly.monomial(c, exps)
    return out


@lru_cache(maxsize=None)
def moment_cumulant_polynomials(n: int) -> Poly:
    """κₙ of one variable as a polynomial in the moments m₁..mₙ."""
    out = Poly()
    for blocks, mu in nc_blocks(n):
        exps: dict[str, int] = {}
        for b in blocks:
            exps[f"m{len(b)}"] = exps.get(f"m{len(b)}", 0) + 1
        out = out + Poly.monomial(mu, exps)
    return out


def kappa_dot_moment_polynomial(n: int) -> Poly:
    """κ̇ₙ of one self-transpose variable expanded in its moments."""
    poly = kappa_dot_polynomial(n)
    return poly.substitute({f"κ{k}": moment_cumulant_polynomials(k) for k in range(2, n + 1)})


def kappa_dot_series(kappas: Sequence[Fraction], order: int) -> list[Fraction]:
    """Coefficients of ½ x² C″(x) / (C(x) − x C′(x)) with C = 1 + Σ κₙ xⁿ.

    ``kappas[k]`` is κ_k for k >= 1; entry 0 is ignored.
    """
    c = [Fraction(1)] + [Fraction(k) for k in kappas[1:order + 3]]
    c += [Fraction(0)] * (order + 3 - len(c))
    c1 = series_derivative(c)
    c2 = series_derivative(c1)
    num = [Fraction(0), Fraction(0)] + [x / 2 for x in c2]
    x_c1 = [Fraction(0)] + c1
    den = [a - b for a, b in zip(c, x_c1 + [Fraction(0)] * len(c))]
    return series_div(num, den, order)
