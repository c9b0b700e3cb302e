"""
Set partitions of [n] and the non-crossing lattice NC(n).

Partitions are stored as sorted tuples of sorted blocks. The permutation
view lists each block as one increasing cycle.

>>> p = NCPartition.parse(4, "{1,4}{2,3}")
>>> str(kreweras(p))
'{1,3}{2}{4}'
>>> mobius_to_top(NCPartition.finest(4))
Fraction(-5, 1)
"""
from __future__ import annotations

import dataclasses
import math
import os
import re
import warnings
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .perm import Perm, Permutation, gamma

__all__ = [
    "CapExceeded",
    "Partition",
    "NCPartition",
    "catalan",
    "cap",
    "is_noncrossing",
    "enumerate_nc",
    "enumerate_set_partitions",
    "kreweras",
    "mobius_to_top",
    "join",
    "blow_up",
]


class CapExceeded(ValueError):
    """Requested size is above the configured enumeration limit."""


def cap(default: int) -> int:
    """Enumeration limit, overridable through ``INFNC_MAX_N``."""
    raw = os.environ.get("INFNC_MAX_N")
    if raw is None:
        return default
    value = int(raw)
    if value != default:
        warnings.warn(f"INFNC_MAX_N={value} overrides the default limit {default}", stacklevel=3)
    return value


def catalan(n: int) -> int:
    """
    >>> [catalan(n) for n in range(8)]
    [1, 1, 2, 5, 14, 42, 132, 429]
    """
    return math.comb(2 * n, n) // (n + 1)


@dataclasses.dataclass(frozen=True, eq=False)
class Partition:
    """A set partition of [n]."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    # NC and general partitions with equal blocks compare equal
    def __eq__(self, other: object) -> bool:
        return isinstance(other, Partition) and (self.n, self.blocks) == (other.n, other.blocks)

    def __hash__(self) -> int:
        return hash((self.n, self.blocks))

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks if b))
        seen = [k for b in blocks for k in b]
        if sorted(seen) != list(range(1, self.n + 1)):
            raise ValueError(f"blocks do not partition 1..{self.n}: {self.blocks}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]):
        return cls(n, tuple(tuple(b) for b in blocks))

    @classmethod
    def from_perm(cls, p: Perm):
        return cls(len(p.domain), tuple(p.cycles()))

    @classmethod
    def parse(cls, n: int, text: str):
        bodies = re.findall(r"\{([^{}]*)\}", text)
        if re.sub(r"\{[^{}]*\}", "", text).strip():
            raise ValueError(f"malformed partition: {text!r}")
        return cls(n, tuple(tuple(int(x) for x in b.split(",")) for b in bodies if b.strip()))

    @classmethod
    def finest(cls, n: int):
        return cls(n, tuple((k,) for k in range(1, n + 1)))

    @classmethod
    def coarsest(cls, n: int):
        return cls(n, (tuple(range(1, n + 1)),))

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return "".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)

    def block_of(self, k: int) -> tuple[int, ...]:
        for b in self.blocks:
            if k in b:
                return b
        raise KeyError(k)

    def as_permutation(self) -> Permutation:
        img = {}
        for b in self.blocks:
            for a, c in zip(b, b[1:] + b[:1]):
                img[a] = c
        return Permutation(self.n, img)

    def refines(self, other: "Partition") -> bool:
        """True iff every block of self lies inside a block of other."""
        owner = {k: i for i, b in enumerate(other.blocks) for k in b}
        return all(len({owner[k] for k in b}) == 1 for b in self.blocks)

    def is_top(self) -> bool:
        return len(self.blocks) == 1

    def is_noncrossing(self) -> bool:
        return is_noncrossing(self)


@dataclasses.dataclass(frozen=True, eq=False)
class NCPartition(Partition):
    """A non-crossing partition of [n]."""

    def __post_init__(self):
        super().__post_init__()
        if not _blocks_noncrossing(self.blocks):
            raise ValueError(f"partition {self} is crossing")


def _blocks_noncrossing(blocks: Sequence[Sequence[int]]) -> bool:
    owner = {k: i for i, b in enumerate(blocks) for k in b}
    stack: list[int] = []
    last = {i: b[-1] for i, b in enumerate(blocks)}
    for k in sorted(owner):
        i = owner[k]
        if stack and stack[-1] == i:
            pass
        elif i in stack:
            return False
        else:
            stack.append(i)
        if k == last[i]:
            stack.pop()
    return True


def is_noncrossing(p: Partition) -> bool:
    """Genus test: ``|π| + |π⁻¹γ_n| = n − 1``."""
    perm = p.as_permutation()
    return perm.length() + (perm.inverse() * gamma(p.n)).length() == p.n - 1


def enumerate_set_partitions(n: int) -> Iterator[Partition]:
    """All set partitions of [n] in restricted-growth-string order."""

    def rec(k: int, rgs: list[int], nblocks: int):
        if k > n:
            blocks: list[list[int]] = [[] for _ in range(nblocks)]
            for pos, b in enumerate(rgs, 1):
                blocks[b].append(pos)
            yield Partition(n, tuple(map(tuple, blocks)))
            return
        for b in range(nblocks + 1):
            rgs.append(b)
            yield from rec(k + 1, rgs, max(nblocks, b + 1))
            rgs.pop()

    yield from rec(1, [], 0)


@lru_cache(maxsize=None)
def _nc_list(n: int) -> tuple[NCPartition, ...]:
    out = []

    # stack of open block labels; joining a block closes every block above it
    def rec(k: int, blocks: list[list[int]], stack: list[int]):
        if k > n:
            out.append(NCPartition(n, tuple(map(tuple, blocks))))
            return
        for label in sorted(stack):
            pos = stack.index(label)
            saved = stack[pos + 1:]
            del stack[pos + 1:]
            blocks[label].append(k)
            rec(k + 1, blocks, stack)
            blocks[label].pop()
            stack.extend(saved)
        blocks.append([k])
        stack.append(len(blocks) - 1)
        rec(k + 1, blocks, stack)
        stack.pop()
        blocks.pop()

    rec(1, [], [])
    return tuple(out)


def enumerate_nc(n: int) -> list[NCPartition]:
    """NC(n) in lexicographic restricted-growth-string order.

    >>> [str(p) for p in enumerate_nc(3)]
    ['{1,2,3}', '{1,2}{3}', '{1,3}{2}', '{1}{2,3}', '{1}{2}{3}']
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap(12):
        raise CapExceeded(f"NC({n}) exceeds the enumeration limit")
    return list(_nc_list(n))


def kreweras(p: Partition) -> NCPartition:
    """Kreweras complement, the cycles of ``π⁻¹γ_n``."""
    perm = p.as_permutation()
    return NCPartition(p.n, tuple((perm.inverse() * gamma(p.n)).cycles()))


def mobius_to_top(p: Partition) -> Fraction:
    """``μ(π, 1_n)`` as a product over the blocks of the Kreweras complement."""
    out = 1
    for b in kreweras(p).blocks:
        out *= (-1) ** (len(b) - 1) * catalan(len(b) - 1)
    return Fraction(out)


def join(p: Partition, q: Partition) -> Partition:
    """Join in the lattice of all set partitions (connected components)."""
    if p.n != q.n:
        raise ValueError("partitions of different sets")
    parent = list(range(p.n + 1))

    def find(k: int) -> int:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for b in p.blocks + q.blocks:
        for k in b[1:]:
            parent[find(k)] = find(b[0])
    groups: dict[int, list[int]] = {}
    for k in range(1, p.n + 1):
        groups.setdefault(find(k), []).append(k)
    return Partition(p.n, tuple(map(tuple, groups.values())))


def blow_up(p: Partition, parts: Sequence[int]) -> NCPartition:
    """Replace each point k of p by the k-th interval of the given sizes."""
    if len(parts) != p.n:
        raise ValueError("one part size per point is required")
    starts = [1]
    for m in parts:
        starts.append(starts[-1] + m)
    blocks = []
    for b in p.blocks:
        blocks.append(tuple(x for k in b for x in range(starts[k - 1], starts[k])))
    return NCPartition(starts[-1] - 1, tuple(blocks))
