"""
Exact infinitesimal distributions and cumulant tables.

Both are finite tables of rationals keyed by canonical words. Lookups
canonicalize their argument; tables built from user data must already be
keyed canonically.

JSON layout::

    {"degree": 4, "tracial": true, "transpose_symmetric": true,
     "tau": {"1 1": "1", ...}, "tau_prime": {"1 1": "1", ...}}

Optional fields: ``"symmetric"`` (generators equal to their own
transpose; defaults to every generator never written with ``t``),
``"generators"`` and ``"labels"`` (generator -> subalgebra label).
"""
from __future__ import annotations

import dataclasses
import itertools
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

from .words import Letter, Word, canonicalize

__all__ = [
    "MissingValue",
    "WordTable",
    "Distribution",
    "CumulantTable",
    "format_rational",
    "parse_rational",
]


class MissingValue(KeyError):
    """A required moment or cumulant is absent from a table."""


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        raise ValueError("floats are not accepted; write rationals as 'p/q'")
    return Fraction(str(value).strip())


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclasses.dataclass(frozen=True)
class WordTable:
    """Shared symmetry handling for tables keyed by words."""

    degree: int
    generators: tuple[int, ...]
    tracial: bool = True
    transpose_symmetric: bool = True
    symmetric: frozenset[int] = frozenset()
    sparse: bool = False

    def canonical(self, word: Word) -> Word:
        return canonicalize(word, self.tracial, self.transpose_symmetric, self.symmetric)

    def alphabet(self) -> list[Letter]:
        out = []
        for g in self.generators:
            out.append(Letter(g))
            if g not in self.symmetric:
                out.append(Letter(g, True))
        return out

    def words(self, n: int) -> list[Word]:
        """Canonical words of length n over the alphabet, sorted."""
        if n == 0:
            return [Word()]
        return sorted({self.canonical(Word(w)) for w in itertools.product(self.alphabet(), repeat=n)})

    def all_words(self, degree: int | None = None) -> list[Word]:
        top = self.degree if degree is None else degree
        return [w for n in range(1, top + 1) for w in self.words(n)]

    def _lookup(self, table: Mapping[Word, Fraction], word: Word, what: str) -> Fraction:
        if len(word) > self.degree:
            raise MissingValue(f"{what}({word}) is beyond degree {self.degree}")
        key = self.canonical(Word(word))
        try:
            return table[key]
        except KeyError:
            if self.sparse:
                return Fraction(0)
            raise MissingValue(f"{what}({key}) is missing") from None

    def _check_keys(self, table: Mapping[Word, Fraction], what: str) -> None:
        for w in table:
            if len(w) > self.degree:
                raise ValueError(f"{what} key {w!r} exceeds degree {self.degree}")
            if w != self.canonical(w):
                raise ValueError(f"{what} key '{w}' is not canonical; use '{self.canonical(w)}'")
            if not w.gens() <= set(self.generators):
                raise ValueError(f"{what} key '{w}' uses an undeclared generator")

    def _flags_json(self) -> dict:
        return {
            "degree": self.degree,
            "tracial": self.tracial,
            "transpose_symmetric": self.transpose_symmetric,
            "generators": list(self.generators),
            "symmetric": sorted(self.symmetric),
        }


def _table_json(table: Mapping[Word, Fraction]) -> dict[str, str]:
    return {str(w): format_rational(v) for w, v in sorted(table.items())}


def _flags_from_json(data: Mapping, keys: Iterable[str], sparse: bool) -> dict:
    words = [Word.parse(k) for k in keys if k.strip()]
    gens = set(data.get("generators", ()))
    for w in words:
        gens |= w.gens()
    if "symmetric" in data:
        symmetric = frozenset(int(g) for g in data["symmetric"])
    else:
        transposed = {x.gen for w in words for x in w if x.transposed}
        symmetric = frozenset(gens - transposed)
    return dict(
        degree=int(data["degree"]),
        generators=tuple(sorted(int(g) for g in gens | symmetric)),
        tracial=bool(data.get("tracial", True)),
        transpose_symmetric=bool(data.get("transpose_symmetric", True)),
        symmetric=symmetric,
        sparse=sparse,
    )


def _parse_table(raw: Mapping[str, object]) -> dict[Word, Fraction]:
    out = {}
    for k, v in raw.items():
        if not k.strip():
            continue
        out[Word.parse(k)] = parse_rational(v)
    return out


@dataclasses.dataclass(frozen=True)
class Distribution(WordTable):
    """The pair (τ, τ′) on words up to ``degree``."""

    tau: Mapping[Word, Fraction] = dataclasses.field(default_factory=dict)
    tau_prime: Mapping[Word, Fraction] = dataclasses.field(default_factory=dict)
    labels: Mapping[int, str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "tau", {Word(k): Fraction(v) for k, v in self.tau.items() if len(k)})
        object.__setattr__(self, "tau_prime", {Word(k): Fraction(v) for k, v in self.tau_prime.items() if len(k)})
        object.__setattr__(self, "symmetric", frozenset(self.symmetric))
        self._check_keys(self.tau, "tau")
        self._check_keys(self.tau_prime, "tau_prime")

    def tau_of(self, word: Word) -> Fraction:
        if not word:
            return Fraction(1)
        return self._lookup(self.tau, word, "tau")

    def tau_prime_of(self, word: Word) -> Fraction:
        if not word:
            return Fraction(0)
        return self._lookup(self.tau_prime, word, "tau_prime")

    def is_complete(self) -> bool:
        try:
            for w in self.all_words():
                self.tau_of(w)
                self.tau_prime_of(w)
        except MissingValue:
            return False
        return True

    def restricted(self, degree: int) -> "Distribution":
        return dataclasses.replace(
            self,
            degree=degree,
            tau={w: v for w, v in self.tau.items() if len(w) <= degree},
            tau_prime={w: v for w, v in self.tau_prime.items() if len(w) <= degree},
        )

    def to_json(self) -> dict:
        out = self._flags_json()
        out["tau"] = _table_json(self.tau)
        out["tau_prime"] = _table_json(self.tau_prime)
        if self.labels:
            out["labels"] = {str(g): lab for g, lab in sorted(self.labels.items())}
        return out

    @classmethod
    def from_json(cls, data: Mapping, sparse: bool = False) -> "Distribution":
        tau = data.get("tau", {})
        tau_prime = data.get("tau_prime", {})
        flags = _flags_from_json(data, list(tau) + list(tau_prime), sparse)
        labels = data.get("labels")
        return cls(
            **flags,
            tau=_parse_table(tau),
            tau_prime=_parse_table(tau_prime),
            labels={int(g): str(v) for g, v in labels.items()} if labels else None,
        )

    @classmethod
    def load(cls, path: str | Path, sparse: bool = False) -> "Distribution":
        with open(path) as fh:
            return cls.from_json(json.load(fh), sparse=sparse)

    def dump(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")


@dataclasses.dataclass(frozen=True)
class CumulantTable(WordTable):
    """Free cumulants κ and infinitesimal cumulants κ′ on letter tuples.

    ``mode`` is ``"real"`` for the real infinitesimal cumulants and
    ``"complex"`` when κ′ omits the annular correction.
    """

    kappa: Mapping[Word, Fraction] = dataclasses.field(default_factory=dict)
    kappa_prime: Mapping[Word, Fraction] = dataclasses.field(default_factory=dict)
    mode: str = "real"

    def __post_init__(self):
        object.__setattr__(self, "kappa", {Word(k): Fraction(v) for k, v in self.kappa.items()})
        object.__setattr__(self, "kappa_prime", {Word(k): Fraction(v) for k, v in self.kappa_prime.items()})
        object.__setattr__(self, "symmetric", frozenset(self.symmetric))
        if self.mode not in ("real", "complex"):
            raise ValueError(f"unknown mode {self.mode!r}")
        self._check_keys(self.kappa, "kappa")
        self._check_keys(self.kappa_prime, "kappa_prime")

    def kappa_of(self, word: Word) -> Fraction:
        return self._lookup(self.kappa, word, "kappa")

    def kappa_prime_of(self, word: Word) -> Fraction:
        return self._lookup(self.kappa_prime, word, "kappa_prime")

    def to_json(self) -> dict:
        out = self._flags_json()
        out["mode"] = self.mode
        out["kappa"] = _table_json(self.kappa)
        out["kappa_prime"] = _table_json(self.kappa_prime)
        return out

    @classmethod
    def from_json(cls, data: Mapping, sparse: bool = False) -> "CumulantTable":
        kappa = data.get("kappa", {})
        kappa_prime = data.get("kappa_prime", {})
        flags = _flags_from_json(data, list(kappa) + list(kappa_prime), sparse)
        return cls(**flags, kappa=_parse_table(kappa), kappa_prime=_parse_table(kappa_prime),
                   mode=data.get("mode", "real"))
