"""
Free products of infinitesimal distributions and freeness checks.

The joint distribution of free subalgebras is built from cumulants: κ and
κ′ agree with the marginals on single-label tuples and vanish on mixed
ones. Moments are then rebuilt from the moment-cumulant formulas, so the
annular correction is computed from the joint κ and is generally nonzero
on mixed words.

The checks evaluate functionals on centred elements by expanding products
of ``w − τ(w)·1`` linearly.
"""
from __future__ import annotations

import dataclasses
import itertools
from fractions import Fraction
from typing import Iterable, Mapping

from .cumulants import distribution_from_cumulants, infinitesimal_cumulants_from_distribution
from .distribution import CumulantTable, Distribution
from .words import Letter, Word

__all__ = [
    "Element",
    "MarginalFamily",
    "FreenessReport",
    "free_product",
    "center",
    "check_definition",
    "check_cyclic_form",
    "mixed_cumulants",
]

# A formal linear combination of words; the empty word is the unit.
Element = dict[Word, Fraction]


@dataclasses.dataclass(frozen=True)
class MarginalFamily:
    """Labelled marginals; each marginal uses its own generator numbering."""

    marginals: tuple[tuple[str, Distribution | CumulantTable], ...]

    def __post_init__(self):
        object.__setattr__(self, "marginals", tuple((str(l), m) for l, m in self.marginals))
        labels = [l for l, _ in self.marginals]
        if len(set(labels)) != len(labels):
            raise ValueError("marginal labels must be distinct")
        for l, m in self.marginals:
            if not (m.tracial and m.transpose_symmetric):
                raise ValueError(f"marginal {l!r} must be tracial and transpose-symmetric")

    @classmethod
    def of(cls, *items: tuple[str, Distribution | CumulantTable]) -> "MarginalFamily":
        return cls(tuple(items))

    def generator_map(self) -> list[dict[int, int]]:
        """For each marginal, local generator -> joint generator."""
        out, nxt = [], 1
        for _, m in self.marginals:
            mp = {}
            for g in m.generators:
                mp[g] = nxt
                nxt += 1
            out.append(mp)
        return out


def _relabel(word: Word, mp: Mapping[int, int]) -> Word:
    return Word(Letter(mp[x.gen], x.transposed) for x in word)


def free_product(family: MarginalFamily, degree: int) -> Distribution:
    """Joint (τ, τ′) of the marginals, free with respect to each other."""
    maps = family.generator_map()
    tables = []
    for _, m in family.marginals:
        if m.degree < degree:
            raise ValueError(f"marginal known only to degree {m.degree} < {degree}")
        if isinstance(m, Distribution):
            m = infinitesimal_cumulants_from_distribution(m.restricted(degree))
        tables.append(m)
    modes = {t.mode for t in tables}
    if len(modes) != 1:
        raise ValueError("marginal cumulant tables mix real and complex modes")
    owner: dict[int, int] = {}
    inverse: list[dict[int, int]] = []
    symmetric = set()
    labels = {}
    for i, ((label, m), mp) in enumerate(zip(family.marginals, maps)):
        inverse.append({v: k for k, v in mp.items()})
        for g, j in mp.items():
            owner[j] = i
            labels[j] = label
            if g in m.symmetric:
                symmetric.add(j)
    gens = tuple(sorted(owner))
    shell = CumulantTable(degree=degree, generators=gens, symmetric=frozenset(symmetric), mode=modes.pop())
    kappa, kappa_prime = {}, {}
    for w in shell.all_words():
        parts = {owner[x.gen] for x in w}
        if len(parts) == 1:
            i = parts.pop()
            local = _relabel(w, inverse[i])
            kappa[w] = tables[i].kappa_of(local)
            kappa_prime[w] = tables[i].kappa_prime_of(local)
        else:
            kappa[w] = kappa_prime[w] = Fraction(0)
    joint = dataclasses.replace(shell, kappa=kappa, kappa_prime=kappa_prime)
    return distribution_from_cumulants(joint, labels=labels)


def mixed_cumulants(dist: Distribution, labeling: Mapping[int, str] | None = None,
                    degree: int | None = None) -> dict[Word, tuple[Fraction, Fraction]]:
    """(κ, κ′) on every canonical mixed word up to ``degree``."""
    labeling = _labels(dist, labeling)
    top = dist.degree if degree is None else degree
    table = infinitesimal_cumulants_from_distribution(dist.restricted(top))
    out = {}
    for w in table.all_words():
        if len({labeling[x.gen] for x in w}) > 1:
            out[w] = (table.kappa_of(w), table.kappa_prime_of(w))
    return out


# -- formal elements


def center(word: Word, dist: Distribution) -> Element:
    """``w − τ(w)·1``."""
    out: Element = {Word(word): Fraction(1)}
    c = dist.tau_of(word)
    if c:
        out[Word()] = -c
    return out


def _mul(a: Element, b: Element) -> Element:
    out: Element = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            w = w1 + w2
            out[w] = out.get(w, 0) + c1 * c2
    return {w: c for w, c in out.items() if c}


def _prod(elems: Iterable[Element]) -> Element:
    out: Element = {Word(): Fraction(1)}
    for e in elems:
        out = _mul(out, e)
    return out


def _transpose(a: Element) -> Element:
    return {w.transpose(): c for w, c in a.items()}


def _tau(a: Element, dist: Distribution) -> Fraction:
    return sum((c * dist.tau_of(w) for w, c in a.items()), Fraction(0))


def _tau_prime(a: Element, dist: Distribution) -> Fraction:
    return sum((c * dist.tau_prime_of(w) for w, c in a.items()), Fraction(0))


# -- checks


@dataclasses.dataclass
class FreenessReport:
    checked: int = 0
    violations: list[tuple[str, str, Fraction, Fraction]] = dataclasses.field(default_factory=list)
    bounds: str = ""

    @property
    def passed(self) -> bool:
        return not self.violations

    def compare(self, condition: str, what: str, lhs: Fraction, rhs: Fraction) -> None:
        self.checked += 1
        if lhs != rhs:
            self.violations.append((condition, what, lhs, rhs))

    def summary(self) -> str:
        head = f"{'PASS' if self.passed else 'FAIL'}: {self.checked} identities checked ({self.bounds})"
        lines = [head]
        for cond, what, lhs, rhs in self.violations[:20]:
            lines.append(f"  ({cond}) {what}: {lhs} != {rhs}")
        return "\n".join(lines)


def _labels(dist: Distribution, labeling: Mapping[int, str] | None) -> dict[int, str]:
    if labeling is None:
        labeling = dist.labels or {g: str(g) for g in dist.generators}
    labeling = {int(g): str(l) for g, l in labeling.items()}
    missing = set(dist.generators) - set(labeling)
    if missing:
        raise ValueError(f"generators without a label: {sorted(missing)}")
    return labeling


def _monomials(dist: Distribution, labeling: Mapping[int, str], max_letters: int) -> dict[str, list[Word]]:
    by_label: dict[str, list[Letter]] = {}
    for x in dist.alphabet():
        by_label.setdefault(labeling[x.gen], []).append(x)
    out = {}
    for label, letters in by_label.items():
        out[label] = [Word(p) for k in range(1, max_letters + 1) for p in itertools.product(letters, repeat=k)]
    return out


def _sequences(dist, labeling, degree, max_length, max_letters, cyclic):
    monos = _monomials(dist, labeling, max_letters)
    labels = sorted(monos)

    def rec(seq: list[tuple[str, Word]], used: int):
        if seq:
            if not cyclic or len(seq) == 1 or seq[0][0] != seq[-1][0]:
                yield list(seq)
        if len(seq) == max_length:
            return
        for label in labels:
            if seq and seq[-1][0] == label:
                continue
            for w in monos[label]:
                if used + len(w) <= degree:
                    seq.append((label, w))
                    yield from rec(seq, used + len(w))
                    seq.pop()

    yield from rec([], 0)


def _describe(seq) -> str:
    return " | ".join(f"[{w}]" for _, w in seq)


def check_definition(dist: Distribution, labeling: Mapping[int, str] | None = None,
                     degree: int | None = None, max_length: int = 6, max_letters: int = 3) -> FreenessReport:
    """Check the four defining identities on centred alternating products.

    Each argument is a centred monomial of at most ``max_letters`` letters
    from one subalgebra; products have at most ``max_length`` factors and
    total degree at most ``degree``.
    """
    labeling = _labels(dist, labeling)
    degree = dist.degree if degree is None else degree
    rep = FreenessReport(bounds=f"length <= {max_length}, letters per factor <= {max_letters}, degree <= {degree}")
    for seq in _sequences(dist, labeling, degree, max_length, max_letters, cyclic=False):
        a = [center(w, dist) for _, w in seq]
        n = len(a)
        whole = _prod(a)
        what = _describe(seq)
        rep.compare("i", what, _tau(whole, dist), Fraction(0))
        if n == 2:
            rep.compare("ii", what, _tau_prime(whole, dist), Fraction(0))
        elif n >= 3:
            time_term = _tau(_mul(a[0], a[-1]), dist) * _tau_prime(_prod(a[1:-1]), dist)
            if n % 2:
                k = (n + 1) // 2
                space = _tau(_prod([a[0], _transpose(a[k - 1]), a[-1]]), dist)
                for i in range(2, k):
                    space *= _tau(_mul(a[i - 1], _transpose(a[k + i - 2])), dist)
                cond = "iii"
            else:
                k = n // 2
                space = Fraction(1)
                for i in range(1, k + 1):
                    space *= _tau(_mul(a[i - 1], _transpose(a[k + i - 1])), dist)
                cond = "iv"
            rep.compare(cond, what, _tau_prime(whole, dist), time_term + space)
    return rep


def check_cyclic_form(dist: Distribution, labeling: Mapping[int, str] | None = None,
                      degree: int | None = None, max_length: int = 6, max_letters: int = 3) -> FreenessReport:
    """Check the tracial form on centred cyclically alternating products."""
    if not dist.tracial:
        raise ValueError("the cyclic form needs a tracial distribution")
    labeling = _labels(dist, labeling)
    degree = dist.degree if degree is None else degree
    rep = FreenessReport(bounds=f"length <= {max_length}, letters per factor <= {max_letters}, degree <= {degree}")
    for seq in _sequences(dist, labeling, degree, max_length, max_letters, cyclic=True):
        n = len(seq)
        if n < 2:
            continue
        a = [center(w, dist) for _, w in seq]
        lhs = _tau_prime(_prod(a), dist)
        if n == 2 or n % 2:
            rep.compare("odd-or-2", _describe(seq), lhs, Fraction(0))
        else:
            k = n // 2
            rhs = Fraction(1)
            for i in range(1, k + 1):
                rhs *= _tau(_mul(a[i - 1], _transpose(a[k + i - 1])), dist)
            rep.compare("even", _describe(seq), lhs, rhs)
    return rep
