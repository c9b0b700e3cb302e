"""
Cumulants whose entries are products of consecutive letters.

A grouping (m₁, …, m_r) splits a₁⋯a_m into A₁ = a₁⋯a_{m₁}, A₂, …; M is
the set of right endpoints of the intervals. For the first-order
infinitesimal cumulant of the grouped entries::

    κ′_r(A₁..A_r) = Σ_{π ∈ NC(m), K(π) separates M} ∂κ_π
                  + Σ_{σ annular, K^δ(σ) separates ±M} κ_{σ/2}

The complex version keeps only the first sum, over π ∨ γ_m⃗ = 1_m.
"""
from __future__ import annotations

import dataclasses
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .annular import (AnnularSymPermutation, enumerate_sncd, kdelta, relative_kreweras, signed_join)
from .cumulants import dkappa_pi, kappa_pi, kappa_sigma_half
from .distribution import CumulantTable
from .noncrossing import NCPartition, Partition, blow_up, enumerate_nc, join, kreweras
from .perm import Perm, Permutation, SignedPermutation, gamma_vec, mirror, restrict_first_return, separates
from .words import Word

__all__ = [
    "GroupingSpec",
    "product_cumulant",
    "product_cumulant_prime",
    "complex_product_cumulant_prime",
    "surviving_partitions",
    "surviving_annular",
    "DecompositionReport",
    "decomposition_check",
]

MAX_M = 8


@dataclasses.dataclass(frozen=True)
class GroupingSpec:
    """Interval sizes (m₁, …, m_r) of a grouping of m letters."""

    m_parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(x) for x in self.m_parts)
        if not parts or any(x < 1 for x in parts):
            raise ValueError("grouping parts must be positive")
        object.__setattr__(self, "m_parts", parts)

    @classmethod
    def parse(cls, text: str) -> "GroupingSpec":
        return cls(tuple(int(x) for x in text.split(",") if x.strip()))

    @property
    def r(self) -> int:
        return len(self.m_parts)

    @property
    def m(self) -> int:
        return sum(self.m_parts)

    @cached_property
    def endpoints(self) -> tuple[int, ...]:
        """M = (m₁, m₁+m₂, …, m)."""
        out, acc = [], 0
        for x in self.m_parts:
            acc += x
            out.append(acc)
        return tuple(out)

    @property
    def signed_endpoints(self) -> tuple[int, ...]:
        return self.endpoints + tuple(-k for k in self.endpoints)

    def psi(self, k: int) -> int:
        """k -> m₁+⋯+m_k, extended oddly to negative k."""
        return self.endpoints[k - 1] if k > 0 else -self.endpoints[-k - 1]

    @cached_property
    def intervals(self) -> tuple[tuple[int, ...], ...]:
        starts = (0,) + self.endpoints[:-1]
        return tuple(tuple(range(s + 1, e + 1)) for s, e in zip(starts, self.endpoints))

    @cached_property
    def gamma(self) -> Permutation:
        return gamma_vec(*self.m_parts)

    @cached_property
    def interval_partition(self) -> Partition:
        return Partition(self.m, self.intervals)

    def group(self, word: Word) -> list[Word]:
        if len(word) != self.m:
            raise ValueError(f"expected {self.m} letters, got {len(word)}")
        return [word.pick(k - 1 for k in iv) for iv in self.intervals]


def _check_size(g: GroupingSpec) -> None:
    from .noncrossing import CapExceeded, cap

    if g.m > cap(MAX_M):
        raise CapExceeded(f"product formula needs m <= {cap(MAX_M)}, got {g.m}")


@lru_cache(maxsize=None)
def _connected_partitions(g: GroupingSpec) -> tuple[NCPartition, ...]:
    top = Partition.coarsest(g.m)
    return tuple(p for p in enumerate_nc(g.m) if join(p, g.interval_partition) == top)


@lru_cache(maxsize=None)
def surviving_partitions(g: GroupingSpec) -> tuple[NCPartition, ...]:
    """π ∈ NC(m) whose Kreweras complement separates M."""
    _check_size(g)
    return tuple(p for p in enumerate_nc(g.m) if separates(kreweras(p).as_permutation(), g.endpoints))


@lru_cache(maxsize=None)
def surviving_annular(g: GroupingSpec) -> tuple[AnnularSymPermutation, ...]:
    """σ in the annular set whose K^δ(σ) separates ±M."""
    _check_size(g)
    if g.m < 2:
        return ()
    pts = g.signed_endpoints
    return tuple(s for s in enumerate_sncd(g.m) if separates(kdelta(s), pts))


def product_cumulant(g: GroupingSpec, word: Word, table: CumulantTable) -> Fraction:
    """κ_r(A₁, …, A_r) = Σ_{ρ ∨ γ_m⃗ = 1} κ_ρ."""
    _check_size(g)
    g.group(word)
    return sum((kappa_pi(p, word, table) for p in _connected_partitions(g)), Fraction(0))


def product_cumulant_prime(g: GroupingSpec, word: Word, table: CumulantTable) -> Fraction:
    """Real infinitesimal cumulant of the grouped entries."""
    g.group(word)
    first = sum((dkappa_pi(p, word, table) for p in surviving_partitions(g)), Fraction(0))
    second = sum((kappa_sigma_half(s, word, table) for s in surviving_annular(g)), Fraction(0))
    return first + second


def complex_product_cumulant_prime(g: GroupingSpec, word: Word, table: CumulantTable) -> Fraction:
    """Complex version: Σ_{π ∨ γ_m⃗ = 1} ∂κ_π."""
    _check_size(g)
    g.group(word)
    return sum((dkappa_pi(p, word, table) for p in _connected_partitions(g)), Fraction(0))


# -- index-set decompositions used in the proof of the product rule


@dataclasses.dataclass
class DecompositionReport:
    m_parts: tuple[int, ...]
    checks: dict[str, bool] = dataclasses.field(default_factory=dict)
    sizes: dict[str, int] = dataclasses.field(default_factory=dict)
    failures: list[str] = dataclasses.field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks[name] = ok
        if not ok:
            self.failures.append(f"{name}: {detail}" if detail else name)


def _has_through(p: Perm) -> bool:
    return any(any(k > 0 for k in c) and any(k < 0 for k in c) for c in p.cycles())


def _u_partition(pi_m: NCPartition, block: tuple[int, ...]) -> frozenset[frozenset[int]]:
    """Cycles of πδπ⁻¹δ with the block V joined to -V."""
    out = []
    for b in pi_m.blocks:
        if b == block:
            out.append(frozenset(b) | frozenset(-k for k in b))
        else:
            out.append(frozenset(b))
            out.append(frozenset(-k for k in b))
    return frozenset(out)


def _tilde_n2(g: GroupingSpec) -> set[NCPartition]:
    out = set()
    top = NCPartition.coarsest(g.r)
    for pi in enumerate_nc(g.r):
        if pi == top:
            continue
        pi_m = blow_up(pi, g.m_parts)
        pi_perm = pi_m.as_permutation()
        for rho in enumerate_nc(g.m):
            if rho.refines(pi_m) and separates(rho.as_permutation().inverse() * pi_perm, g.endpoints):
                out.add(rho)
    return out


def _tilde_s2(g: GroupingSpec, sigmas: Sequence[AnnularSymPermutation]) -> tuple[set[str], list[str]]:
    """Elements admitting exactly one witness (π ≠ 1_r, V); also those with several."""
    top = NCPartition.coarsest(g.r)
    witnesses: dict[str, int] = {}
    pts = g.signed_endpoints
    for pi in enumerate_nc(g.r):
        if pi == top:
            continue
        pi_m = blow_up(pi, g.m_parts)
        pi_perm = pi_m.as_permutation()
        beta = mirror(pi_perm)
        bound = beta.length() + 2
        targets = {_u_partition(pi_m, block) for block in pi_m.blocks}
        for s in sigmas:
            rel = relative_kreweras(s.perm, pi_perm)
            if s.perm.length() + rel.length() != bound or not separates(rel, pts):
                continue
            if frozenset(signed_join(s.perm, beta)) in targets:
                witnesses[str(s)] = witnesses.get(str(s), 0) + 1
    unique = {k for k, c in witnesses.items() if c == 1}
    multiple = sorted(k for k, c in witnesses.items() if c > 1)
    return unique, multiple


def decomposition_check(m_parts: Sequence[int]) -> DecompositionReport:
    """Verify the splittings of NC(m) and of the annular set on [±m]."""
    g = GroupingSpec(tuple(m_parts))
    if g.m > 6:
        raise ValueError("decomposition checks are limited to m <= 6")
    rep = DecompositionReport(g.m_parts)
    M = g.endpoints
    pm = g.signed_endpoints

    ncs = enumerate_nc(g.m)
    n1 = {p for p in ncs if separates(kreweras(p).as_permutation(), M)}
    n2 = {p for p in ncs if not restrict_first_return(kreweras(p).as_permutation(), M).is_identity()}
    rep.sizes.update(NC=len(ncs), N1=len(n1), N2=len(n2))
    rep.record("NC = N1 ⊔ N2", not (n1 & n2) and (n1 | n2) == set(ncs))
    connected = set(_connected_partitions(g))
    rep.record("N1 = {π : π ∨ γ = 1}", n1 == connected)

    tn2 = _tilde_n2(g)
    rep.sizes["N2~"] = len(tn2)
    rep.record("N2 = N2~", tn2 == n2, f"{len(n2 ^ tn2)} elements differ")

    sigmas = enumerate_sncd(g.m) if g.m >= 2 else []
    s1, s2, s3 = set(), set(), set()
    for s in sigmas:
        restricted = restrict_first_return(kdelta(s), pm)
        if restricted.is_identity():
            s1.add(str(s))
        elif _has_through(restricted):
            s3.add(str(s))
        else:
            s2.add(str(s))
    rep.sizes.update(S=len(sigmas), S1=len(s1), S2=len(s2), S3=len(s3))
    rep.record("S = S1 ⊔ S2 ⊔ S3", len(s1) + len(s2) + len(s3) == len(sigmas))
    rep.record("S1 = surviving annular terms", s1 == {str(s) for s in surviving_annular(g)} if g.m >= 2 else True)

    ts2, multiple = _tilde_s2(g, sigmas)
    rep.sizes["S2~"] = len(ts2)
    rep.record("S2 = S2~", ts2 == s2, f"{len(s2 ^ ts2)} elements differ")
    rep.record("S2~ witnesses unique", not multiple, ", ".join(multiple[:5]))
    return rep
