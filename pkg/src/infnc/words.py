"""
Letters, words and their canonical representatives.

A letter is a generator index with a transpose flag, written ``3`` or
``3t``. The transpose of a word reverses it and flips every flag.

>>> w = Word.parse("1 2t")
>>> str(w.transpose())
'2 1t'
>>> str(canonicalize(Word.parse("2 1"), tracial=True))
'1 2'
"""
from __future__ import annotations

from typing import Iterable, NamedTuple

__all__ = ["Letter", "Word", "canonicalize"]


class Letter(NamedTuple):
    gen: int
    transposed: bool = False

    @property
    def t(self) -> "Letter":
        return Letter(self.gen, not self.transposed)

    @classmethod
    def parse(cls, text: str) -> "Letter":
        text = text.strip()
        flag = text.endswith("t")
        gen = int(text[:-1] if flag else text)
        if gen < 1:
            raise ValueError(f"generator index must be positive: {text!r}")
        return cls(gen, flag)

    def __str__(self) -> str:
        return f"{self.gen}t" if self.transposed else str(self.gen)


class Word(tuple):
    """An immutable sequence of letters; the empty word is the unit."""

    def __new__(cls, letters: Iterable = ()):
        return super().__new__(cls, (x if isinstance(x, Letter) else Letter(*x) for x in letters))

    @classmethod
    def parse(cls, text: str) -> "Word":
        return cls(Letter.parse(tok) for tok in text.split())

    @classmethod
    def of(cls, *gens: int) -> "Word":
        """Word of untransposed generators."""
        return cls(Letter(g) for g in gens)

    def __str__(self) -> str:
        return " ".join(map(str, self))

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __add__(self, other) -> "Word":
        return Word(tuple(self) + tuple(other))

    def __getitem__(self, item):
        out = super().__getitem__(item)
        return Word(out) if isinstance(item, slice) else out

    def transpose(self) -> "Word":
        return Word(x.t for x in reversed(self))

    def rotations(self) -> list["Word"]:
        if not self:
            return [self]
        return [self[i:] + self[:i] for i in range(len(self))]

    def pick(self, positions: Iterable[int]) -> "Word":
        """Letters at the given 0-based positions, in the given order."""
        return Word(self[i] for i in positions)

    def gens(self) -> set[int]:
        return {x.gen for x in self}


def canonicalize(word: Word, tracial: bool = False, transpose_symmetric: bool = False,
                 symmetric: Iterable[int] = ()) -> Word:
    """Smallest equivalent word under the allowed symmetries.

    Letters of self-transpose generators lose their flag first. Traciality
    allows cyclic rotation; transpose symmetry allows w -> wᵗ. Words with
    fewer transposed letters come first, then lexicographic order.

    >>> str(canonicalize(Word.parse("1t 2t"), transpose_symmetric=True))
    '2 1'
    """
    sym = set(symmetric)
    w = Word(Letter(x.gen, False) if x.gen in sym else x for x in word)
    cands = w.rotations() if tracial else [w]
    if transpose_symmetric:
        cands += [c.transpose() for c in cands]
        if sym:
            cands = [Word(Letter(x.gen, False) if x.gen in sym else x for x in c) for c in cands]
    return min(cands, key=lambda c: (sum(x.transposed for x in c), c))
