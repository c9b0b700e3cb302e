"""
Permutations of [n] = {1..n} and of [±n] = {±1..±n}.

Elements are plain nonzero integers, so the sign carries the ± structure.
Composition follows the functional convention ``(p * q)(k) = p(q(k))``.

>>> g = gamma(3)
>>> str(g)
'(1,2,3)'
>>> str(embed(g) * delta(3))
'(1,-1,2,-2,3,-3)'
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Perm",
    "Permutation",
    "SignedPermutation",
    "compose",
    "cycles",
    "length",
    "delta",
    "gamma",
    "gamma_signed",
    "gamma_vec",
    "standard_elements",
    "embed",
    "mirror",
    "restrict_first_return",
    "separates",
    "parse_cycles",
]


def _leader_key(k: int) -> tuple[int, int]:
    # smallest absolute value first, positive before negative
    return (abs(k), k < 0)


class Perm:
    """A bijection of a finite set of nonzero integers.

    Instances are immutable and hashable.
    """

    __slots__ = ("_img", "_hash")

    def __init__(self, images: Mapping[int, int]):
        img = dict(images)
        if sorted(img.values()) != sorted(img):
            raise ValueError("images do not define a bijection of the domain")
        if 0 in img:
            raise ValueError("0 is not a valid point")
        self._img = img
        self._hash = None

    def _check(self, other: "Perm") -> None:
        if type(self) is not type(other) or self._img.keys() != other._img.keys():
            raise ValueError("permutations act on different domains")

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self._img)

    @property
    def images(self) -> dict[int, int]:
        return dict(self._img)

    def __call__(self, k: int) -> int:
        return self._img[k]

    def __mul__(self, other: "Perm") -> "Perm":
        self._check(other)
        o = other._img
        s = self._img
        return self._new({k: s[o[k]] for k in o})

    def inverse(self) -> "Perm":
        return self._new({v: k for k, v in self._img.items()})

    def _new(self, img: dict[int, int]) -> "Perm":
        out = object.__new__(type(self))
        out._img = img
        out._hash = None
        for slot in getattr(type(self), "__slots__", ()):
            if slot not in ("_img", "_hash"):
                object.__setattr__(out, slot, getattr(self, slot))
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self._img == other._img

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._img.items()))
        return self._hash

    def is_identity(self) -> bool:
        return all(k == v for k, v in self._img.items())

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycles, each starting at its leader, sorted by leader.

        The leader is the element of smallest absolute value, with the
        positive one preferred on ties.
        """
        seen: set[int] = set()
        out = []
        for start in sorted(self._img, key=_leader_key):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            k = self._img[start]
            while k != start:
                cyc.append(k)
                seen.add(k)
                k = self._img[k]
            out.append(tuple(cyc))
        return out

    def num_cycles(self) -> int:
        return len(self.cycles())

    def length(self) -> int:
        return len(self._img) - self.num_cycles()

    def __str__(self) -> str:
        return "".join("(" + ",".join(map(str, c)) + ")" for c in self.cycles())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"


class Permutation(Perm):
    """A permutation of [n]."""

    __slots__ = ("n",)

    def __init__(self, n: int, images: Mapping[int, int] | None = None):
        if n < 1:
            raise ValueError("n must be positive")
        img = {k: k for k in range(1, n + 1)}
        if images:
            img.update(images)
        if set(img) != set(range(1, n + 1)):
            raise ValueError(f"images must act on 1..{n}")
        super().__init__(img)
        object.__setattr__(self, "n", n)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(n)

    @classmethod
    def from_cycles(cls, n: int, cyc: Iterable[Sequence[int]]) -> "Permutation":
        return cls(n, _cycles_to_images(cyc))

    @classmethod
    def parse(cls, n: int, text: str) -> "Permutation":
        return cls.from_cycles(n, parse_cycles(text))


class SignedPermutation(Perm):
    """A permutation of [±n]."""

    __slots__ = ("n",)

    def __init__(self, n: int, images: Mapping[int, int] | None = None):
        if n < 1:
            raise ValueError("n must be positive")
        img = {k: k for k in range(-n, n + 1) if k}
        if images:
            img.update(images)
        if len(img) != 2 * n:
            raise ValueError(f"images must act on ±1..±{n}")
        super().__init__(img)
        object.__setattr__(self, "n", n)

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(n)

    @classmethod
    def from_cycles(cls, n: int, cyc: Iterable[Sequence[int]]) -> "SignedPermutation":
        return cls(n, _cycles_to_images(cyc))

    @classmethod
    def parse(cls, n: int, text: str) -> "SignedPermutation":
        return cls.from_cycles(n, parse_cycles(text))


def _cycles_to_images(cyc: Iterable[Sequence[int]]) -> dict[int, int]:
    img: dict[int, int] = {}
    for c in cyc:
        for a, b in zip(c, tuple(c[1:]) + (c[0],)):
            if a in img:
                raise ValueError(f"point {a} appears twice")
            img[a] = b
    return img


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[tuple[int, ...]]:
    """Parse cycle notation such as ``"(1,-4)(2,3)"``.

    >>> parse_cycles("(1,-4)(2,3)")
    [(1, -4), (2, 3)]
    """
    text = text.strip()
    if text in ("", "()", "id"):
        return []
    if _CYCLE.sub("", text).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    out = []
    for body in _CYCLE.findall(text):
        if not body.strip():
            continue
        out.append(tuple(int(x) for x in body.split(",")))
    return out


def compose(p: Perm, q: Perm) -> Perm:
    """``p∘q``, applying q first."""
    return p * q


def cycles(p: Perm) -> list[tuple[int, ...]]:
    return p.cycles()


def length(p: Perm) -> int:
    """Domain size minus number of cycles (the Cayley distance to id)."""
    return p.length()


def delta(n: int) -> SignedPermutation:
    """The involution k -> -k on [±n]."""
    return SignedPermutation(n, {k: -k for k in range(-n, n + 1) if k})


def gamma(n: int) -> Permutation:
    """The long cycle (1,2,...,n)."""
    return Permutation(n, {k: k % n + 1 for k in range(1, n + 1)})


def embed(p: Permutation) -> SignedPermutation:
    """Extend a permutation of [n] to [±n], fixing every negative point."""
    return SignedPermutation(p.n, p.images)


def mirror(p: Permutation) -> SignedPermutation:
    """p on the positive half and its reflected inverse on the negative half.

    This is ``p δ p⁻¹ δ`` with p embedded, i.e. k -> p(k), -k -> -p⁻¹(k).

    >>> str(mirror(gamma(3)))
    '(1,2,3)(-1,-3,-2)'
    """
    img = {}
    for k, v in p.images.items():
        img[k] = v
        img[-v] = -k
    return SignedPermutation(p.n, img)


def gamma_signed(n: int) -> SignedPermutation:
    """``γ_n δ γ_n⁻¹ δ`` = (1,...,n)(-n,...,-1)."""
    return mirror(gamma(n))


def standard_elements(n: int) -> tuple[SignedPermutation, SignedPermutation, SignedPermutation]:
    """``(δ, γ_n embedded, γ_n δ γ_n⁻¹ δ)`` on [±n]."""
    return delta(n), embed(gamma(n)), gamma_signed(n)


def gamma_vec(*parts: int) -> Permutation:
    """Product of consecutive interval cycles of the given sizes.

    >>> str(gamma_vec(2, 2))
    '(1,2)(3,4)'
    """
    if len(parts) == 1 and not isinstance(parts[0], int):
        parts = tuple(parts[0])
    if not parts or any(m < 1 for m in parts):
        raise ValueError("parts must be positive")
    img = {}
    start = 1
    for m in parts:
        for k in range(start, start + m):
            img[k] = k + 1 if k < start + m - 1 else start
        start += m
    return Permutation(start - 1, img)


def restrict_first_return(p: Perm, points: Iterable[int]) -> Perm:
    """The first return map of p on a subset of its domain."""
    pts = set(points)
    if not pts:
        raise ValueError("restriction set must be nonempty")
    if not pts <= p.domain:
        raise ValueError("restriction set is not inside the domain")
    img = {}
    for a in pts:
        k = p(a)
        while k not in pts:
            k = p(k)
        img[a] = k
    return Perm(img)


def separates(p: Perm, points: Iterable[int]) -> bool:
    """True iff no two of the points lie in a common cycle of p."""
    return restrict_first_return(p, points).is_identity()
