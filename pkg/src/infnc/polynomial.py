"""
Sparse multivariate polynomials and truncated power series over Fraction.

>>> k2 = Poly.var("κ2")
>>> str(6 * Poly.var("κ4") + k2 * k2)
'6κ4 + κ2^2'
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence

__all__ = ["Poly", "series_mul", "series_div", "series_derivative"]

Monomial = tuple[tuple[str, int], ...]


def _var_key(name: str):
    m = re.match(r"(\D*)(\d*)$", name)
    return (m.group(1), int(m.group(2) or 0))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda ve: _var_key(ve[0])))


class Poly:
    """Immutable polynomial: a map from monomials to nonzero coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(mono)] = c
        self.terms = clean

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): 1})

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): c})

    @classmethod
    def monomial(cls, coeff, exps: Mapping[str, int]) -> "Poly":
        mono = tuple(sorted(((v, e) for v, e in exps.items() if e), key=lambda ve: _var_key(ve[0])))
        return cls({mono: coeff})

    def _coerce(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly.const(other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, (Poly, int, Fraction)) and self.terms == self._coerce(other).terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def substitute(self, values: Mapping[str, "Poly | Fraction | int"]) -> "Poly":
        out = Poly()
        for mono, c in self.terms.items():
            term = Poly.const(c)
            for v, e in mono:
                term = term * (self._coerce(values[v]) ** e if v in values else Poly.var(v) ** e)
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = Fraction(c)
            for v, e in mono:
                term *= Fraction(values[v]) ** e
            total += term
        return total

    def _order(self):
        # higher total degree of leading variables first, as tables are usually written
        def key(item):
            mono, _ = item
            return tuple(-_var_key(v)[1] * 100 - e for v, e in mono) + (len(mono),)

        return sorted(self.terms.items(), key=key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self._order():
            body = "".join(v if e == 1 else f"{v}^{e}" for v, e in mono)
            mag = abs(c)
            coef = "" if (mag == 1 and body) else (str(mag) if mag.denominator == 1 else f"({mag})")
            sign = "-" if c < 0 else "+"
            parts.append((sign, coef + body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


def series_mul(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[:order + 1]):
        if x:
            for j, y in enumerate(b[:order + 1 - i]):
                out[i + j] += x * y
    return out


def series_div(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    """a / b truncated at x^order; b must have a nonzero constant term."""
    if not b or b[0] == 0:
        raise ZeroDivisionError("series divisor needs a nonzero constant term")
    a = list(a) + [Fraction(0)] * (order + 1)
    b = list(b) + [Fraction(0)] * (order + 1)
    out = []
    for n in range(order + 1):
        s = Fraction(a[n]) - sum(out[i] * b[n - i] for i in range(n))
        out.append(s / b[0])
    return out


def series_derivative(a: Sequence[Fraction]) -> list[Fraction]:
    return [k * Fraction(a[k]) for k in range(1, len(a))]
