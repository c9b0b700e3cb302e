"""
Symmetric non-crossing permutations of the (n, -n) annulus.

A permutation σ of [±n] belongs to the set when

* some cycle meets both [n] and [-n] (σ joined with the two circles is
  everything),
* ``#σ + #(σ⁻¹ γ δ γ⁻¹ δ) = 2n`` (planarity on the annulus), and
* ``σδ`` is a fixed-point free involution.

Enumeration runs over all pairings q of [±n] with σ = qδ and filters the
two metric conditions with numpy. Elements are returned sorted by their
cycle-notation string.

>>> [str(s) for s in enumerate_sncd_all_through(2)]
['(1,-2)(-1,2)']
"""
from __future__ import annotations

import dataclasses
import itertools
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .noncrossing import CapExceeded, NCPartition, Partition, cap
from .perm import Perm, Permutation, SignedPermutation, delta, embed, gamma, gamma_signed

__all__ = [
    "AnnularSymPermutation",
    "ConjugatePair",
    "is_sncd",
    "is_through",
    "enumerate_sncd",
    "enumerate_sncd_all_through",
    "pairings",
    "kdelta",
    "conjugate_pairs",
    "spoke",
    "classify",
    "relative_kreweras",
    "signed_join",
]


def is_through(cycle: Iterable[int], n: int | None = None) -> bool:
    """True iff the cycle has both a positive and a negative point."""
    cyc = tuple(cycle)
    return any(k > 0 for k in cyc) and any(k < 0 for k in cyc)


def signed_join(*perms: Perm) -> list[frozenset[int]]:
    """Connected components of the union of the cycle structures."""
    parent: dict[int, int] = {}

    def find(k: int) -> int:
        parent.setdefault(k, k)
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for p in perms:
        for k in p.domain:
            a, b = find(k), find(p(k))
            if a != b:
                parent[a] = b
    groups: dict[int, set[int]] = {}
    for k in parent:
        groups.setdefault(find(k), set()).add(k)
    return sorted((frozenset(g) for g in groups.values()), key=lambda g: min(g, key=abs))


def is_sncd(sigma: SignedPermutation) -> bool:
    """Membership test for the symmetric annular set, by definition."""
    n = sigma.n
    if n < 2:
        return False
    d = delta(n)
    q = sigma * d
    if any(q(k) == k or q(q(k)) != k for k in q.domain):
        return False
    gs = gamma_signed(n)
    if sigma.num_cycles() + (sigma.inverse() * gs).num_cycles() != 2 * n:
        return False
    return any(is_through(c) for c in sigma.cycles())


@dataclasses.dataclass(frozen=True)
class AnnularSymPermutation:
    """A validated element of the symmetric annular set."""

    perm: SignedPermutation

    @classmethod
    def of(cls, perm: SignedPermutation) -> "AnnularSymPermutation":
        if not is_sncd(perm):
            raise ValueError(f"{perm} is not a symmetric non-crossing annular permutation")
        return cls(perm)

    @classmethod
    def parse(cls, n: int, text: str) -> "AnnularSymPermutation":
        return cls.of(SignedPermutation.parse(n, text))

    @property
    def n(self) -> int:
        return self.perm.n

    def __call__(self, k: int) -> int:
        return self.perm(k)

    def cycles(self) -> list[tuple[int, ...]]:
        return self.perm.cycles()

    def is_pairing(self) -> bool:
        return all(len(c) == 2 for c in self.perm.cycles())

    def all_through(self) -> bool:
        return all(is_through(c) for c in self.perm.cycles())

    def __str__(self) -> str:
        return str(self.perm)


# -- array encoding: k > 0 -> k - 1, -k -> n + k - 1


def _encode(n: int, k: int) -> int:
    return k - 1 if k > 0 else n - k - 1


def _decode(n: int, i: int) -> int:
    return i + 1 if i < n else -(i - n + 1)


@lru_cache(maxsize=None)
def _tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    pts = [_decode(n, i) for i in range(2 * n)]
    d = np.array([_encode(n, -k) for k in pts], dtype=np.int8)
    gs = gamma_signed(n)
    g = np.array([_encode(n, gs(k)) for k in pts], dtype=np.int8)
    return d, g


def _all_pairings(size: int) -> np.ndarray:
    """Every fixed-point free involution of range(size) as rows."""
    q = np.full((1, size), -1, dtype=np.int8)
    rem = np.arange(size, dtype=np.int8)[None, :]
    while rem.shape[1]:
        r = rem.shape[1]
        first = rem[:, 0]
        new_q, new_rem = [], []
        rows = np.arange(q.shape[0])
        for j in range(1, r):
            partner = rem[:, j]
            qq = q.copy()
            qq[rows, first] = partner
            qq[rows, partner] = first
            keep = [c for c in range(1, r) if c != j]
            new_q.append(qq)
            new_rem.append(rem[:, keep])
        q = np.concatenate(new_q)
        rem = np.concatenate(new_rem)
    return q


def _orbit_minmax(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise smallest and largest index in each point's cycle."""
    size = p.shape[1]
    lo = np.broadcast_to(np.arange(size, dtype=np.int8), p.shape).copy()
    hi = lo.copy()
    jump = p.copy()
    steps = 1
    while steps < size:
        lo = np.minimum(lo, np.take_along_axis(lo, jump, axis=1))
        hi = np.maximum(hi, np.take_along_axis(hi, jump, axis=1))
        jump = np.take_along_axis(jump, jump, axis=1)
        steps *= 2
    return lo, hi


def _count_cycles(p: np.ndarray) -> np.ndarray:
    lo, _ = _orbit_minmax(p)
    return (lo == np.arange(p.shape[1])).sum(axis=1)


def _filter(n: int, q: np.ndarray) -> np.ndarray:
    d, g = _tables(n)
    sigma = q[:, d]
    # σ⁻¹ = δq, so σ⁻¹γ'(i) = δ(q(γ'(i)))
    kinv = d[q[:, g]]
    genus_ok = _count_cycles(sigma) + _count_cycles(kinv) == 2 * n
    lo, hi = _orbit_minmax(sigma)
    through = ((lo < n) & (hi >= n)).any(axis=1)
    return sigma[genus_ok & through]


def _rows_to_perms(n: int, rows: np.ndarray) -> list[SignedPermutation]:
    pts = [_decode(n, i) for i in range(2 * n)]
    out = []
    for row in rows.tolist():
        out.append(SignedPermutation(n, {pts[i]: pts[j] for i, j in enumerate(row)}))
    return out


@lru_cache(maxsize=None)
def _sncd(n: int) -> tuple[AnnularSymPermutation, ...]:
    q = _all_pairings(2 * n)
    chunks = [_filter(n, q[i:i + 250_000]) for i in range(0, len(q), 250_000)]
    perms = _rows_to_perms(n, np.concatenate(chunks))
    return tuple(sorted((AnnularSymPermutation(p) for p in perms), key=str))


def enumerate_sncd(n: int) -> list[AnnularSymPermutation]:
    """The symmetric annular set on [±n] (empty for n = 1)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return []
    if n > cap(8):
        raise CapExceeded(f"annular enumeration at n={n} exceeds the limit")
    return list(_sncd(n))


def pairings(n: int) -> list[AnnularSymPermutation]:
    """Elements of the annular set that are themselves pairings."""
    return [s for s in enumerate_sncd(n) if s.is_pairing()]


def _cyclic_intervals(n: int, t: int) -> Iterable[list[list[int]]]:
    for cuts in itertools.combinations(range(1, n + 1), t):
        blocks = []
        for a, b in zip(cuts, cuts[1:] + (cuts[0] + n,)):
            blocks.append([(k - 1) % n + 1 for k in range(a, b)])
        yield blocks


@lru_cache(maxsize=None)
def _all_through_structured(n: int) -> tuple[AnnularSymPermutation, ...]:
    # Every cycle is (a..b, -d..-c) with both halves cyclic intervals; the
    # positive and negative interval partitions coincide up to sign.
    found: dict[str, AnnularSymPermutation] = {}

    def add(cyc: list[list[int]]):
        sigma = SignedPermutation.from_cycles(n, cyc)
        if is_sncd(sigma) and all(is_through(c) for c in sigma.cycles()):
            found.setdefault(str(sigma), AnnularSymPermutation(sigma))

    for a in range(n):
        for d in range(n):
            pos = [(a + i) % n + 1 for i in range(n)]
            neg = [-((d - i) % n + 1) for i in range(n)]
            add([pos + neg])
    for t in range(2, n + 1):
        for blocks in _cyclic_intervals(n, t):
            for shift in range(t):
                for sign in (1, -1):
                    cyc = []
                    for i, b in enumerate(blocks):
                        partner = blocks[(shift + sign * i) % t]
                        cyc.append(b + [-k for k in reversed(partner)])
                    add(cyc)
    return tuple(sorted(found.values(), key=str))


def enumerate_sncd_all_through(n: int, method: str = "auto") -> list[AnnularSymPermutation]:
    """Elements in which every cycle meets both halves.

    ``method="filter"`` filters the full enumeration; ``"structured"``
    builds candidates from cyclic interval partitions and checks each one
    against the definition. ``"auto"`` filters up to n = 8.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return []
    if method == "auto":
        method = "filter" if n <= 8 else "structured"
    if method == "filter":
        return [s for s in enumerate_sncd(n) if s.all_through()]
    if method == "structured":
        if n > cap(10):
            raise CapExceeded(f"all-through enumeration at n={n} exceeds the limit")
        return list(_all_through_structured(n))
    raise ValueError(f"unknown method {method!r}")


def _as_perm(sigma) -> SignedPermutation:
    return sigma.perm if isinstance(sigma, AnnularSymPermutation) else sigma


def kdelta(sigma, n: int | None = None) -> SignedPermutation:
    """``δ γ_n⁻¹ δ σ⁻¹ γ_n`` with γ_n fixing the negative half."""
    s = _as_perm(sigma)
    n = s.n if n is None else n
    d = delta(n)
    g = embed(gamma(n))
    return d * g.inverse() * d * s.inverse() * g


def relative_kreweras(tau, rho: Permutation | SignedPermutation) -> SignedPermutation:
    """``δ ρ⁻¹ δ τ⁻¹ ρ``; a permutation of [m] is embedded first."""
    t = _as_perm(tau)
    r = embed(rho) if isinstance(rho, Permutation) else rho
    d = delta(t.n)
    return d * r.inverse() * d * t.inverse() * r


@dataclasses.dataclass(frozen=True)
class ConjugatePair:
    """A cycle c of σ and its partner δ c⁻¹ δ."""

    first: tuple[int, ...]
    second: tuple[int, ...]

    @property
    def self_conjugate(self) -> bool:
        return self.first == self.second

    @property
    def representative(self) -> tuple[int, ...]:
        """The member whose smallest positive point is smallest."""

        def key(c):
            pos = [k for k in c if k > 0]
            return min(pos) if pos else float("inf")

        return min((self.first, self.second), key=key)


def _rotate(c: Sequence[int]) -> tuple[int, ...]:
    i = min(range(len(c)), key=lambda j: (abs(c[j]), c[j] < 0))
    return tuple(c[i:]) + tuple(c[:i])


def conjugate_pairs(sigma) -> list[ConjugatePair]:
    """Group the cycles of σ into conjugate pairs {c, δc⁻¹δ}."""
    s = _as_perm(sigma)
    q = s * delta(s.n)
    if any(q(k) == k or q(q(k)) != k for k in q.domain):
        raise ValueError("σδ is not a pairing")
    if not is_sncd(s):
        raise ValueError(f"{s} is not in the symmetric annular set")
    cyc = s.cycles()
    index = {c: i for i, c in enumerate(cyc)}
    done = set()
    out = []
    for c in cyc:
        if c in done:
            continue
        partner = _rotate(tuple(-k for k in reversed(c)))
        if partner not in index:
            raise ValueError(f"cycle {c} has no conjugate partner")
        done.update((c, partner))
        out.append(ConjugatePair(c, partner))
    return out


def spoke(n: int) -> AnnularSymPermutation:
    """The pairing k <-> -(k + n/2) (indices mod n) for even n.

    >>> str(spoke(4))
    '(1,-3)(-1,3)(2,-4)(-2,4)'
    """
    if n < 2 or n % 2:
        raise ValueError("spoke diagrams need an even n >= 2")
    cyc = [(k, -((k + n // 2 - 1) % n + 1)) for k in range(1, n + 1)]
    return AnnularSymPermutation(SignedPermutation.from_cycles(n, cyc))


def classify(sigma) -> tuple[NCPartition, tuple[int, ...]]:
    """Return (π, V): V is the positive part of the through cycles and the
    other blocks of π are the cycles of σ inside [n]."""
    s = _as_perm(sigma)
    through = sorted(k for c in s.cycles() if is_through(c) for k in c if k > 0)
    inner = [c for c in s.cycles() if not is_through(c) and c[0] > 0]
    block = tuple(through)
    return NCPartition(s.n, tuple(inner) + (block,)), block
