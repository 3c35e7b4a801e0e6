"""Multivariate polynomials over ordered simplex variables.

A :class:`MultiPoly` lives in the variables ``s_first, ..., s_{first+nvars-1}``
with ``0 <= s_first <= s_{first+1} <= ...``.  Integrating out the lowest
variable from 0 up to the next one (:func:`mp_integrate_step`) and closing the
last variable against ``exp(-rate*s)`` on ``[0, inf)``
(:func:`mp_laplace_terminal`) is all the embedded-chain formulas need.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Mapping


class MultiPoly:
    __slots__ = ("nvars", "first", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], object] | None = None, first: int = 1):
        if nvars < 1:
            raise ValueError("a MultiPoly needs at least one variable")
        canon = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {nvars} variables")
            c = Fraction(c)
            if c:
                canon[exps] = canon.get(exps, 0) + c
        self.nvars = nvars
        self.first = first
        self.terms = {e: c for e, c in canon.items() if c}

    @classmethod
    def const(cls, nvars: int, c=1, first: int = 1) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c}, first)

    @classmethod
    def var(cls, nvars: int, index: int, first: int = 1) -> "MultiPoly":
        """The variable ``s_index`` (labels start at ``first``)."""
        e = [0] * nvars
        e[index - first] = 1
        return cls(nvars, {tuple(e): 1}, first)

    @classmethod
    def linear(cls, coeffs, first: int = 1) -> "MultiPoly":
        """``sum_l coeffs[l] * s_{first+l}``."""
        nvars = len(coeffs)
        terms = {}
        for l, c in enumerate(coeffs):
            e = [0] * nvars
            e[l] = 1
            terms[tuple(e)] = c
        return cls(nvars, terms, first)

    def _check(self, other: "MultiPoly"):
        if (self.nvars, self.first) != (other.nvars, other.first):
            raise ValueError(
                f"variable mismatch: s_{self.first}..({self.nvars}) vs s_{other.first}..({other.nvars})"
            )

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.nvars, self.first, self.terms) == (other.nvars, other.first, other.terms)

    def __repr__(self):
        return f"MultiPoly(nvars={self.nvars}, first={self.first}, terms={self.terms})"

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.nvars, out, self.first)

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = Fraction(other)
            return MultiPoly(self.nvars, {e: v * c for e, v in self.terms.items()}, self.first)
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, out, self.first)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        return mp_pow(self, k)

    def shift(self, exps) -> "MultiPoly":
        """Multiply by the monomial ``prod s_l^exps[l]``."""
        return MultiPoly(
            self.nvars,
            {tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()},
            self.first,
        )

    def differentiate(self, index: int) -> "MultiPoly":
        """Partial derivative in ``s_index``."""
        j = index - self.first
        if not 0 <= j < self.nvars:
            raise ValueError(f"s_{index} is not a variable of this polynomial")
        out = {}
        for e, c in self.terms.items():
            if e[j]:
                d = list(e)
                d[j] -= 1
                out[tuple(d)] = out.get(tuple(d), 0) + c * e[j]
        return MultiPoly(self.nvars, out, self.first)


def mp_add(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a + b


def mp_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a * b


def mp_pow(a: MultiPoly, k: int) -> MultiPoly:
    """``a**k`` by repeated squaring."""
    if k < 0:
        raise ValueError("negative power")
    out = MultiPoly.const(a.nvars, 1, a.first)
    base = a
    while k:
        if k & 1:
            out = out * base
        k >>= 1
        if k:
            base = base * base
    return out


def mp_integrate_step(a: MultiPoly, var: int) -> MultiPoly:
    """``int_0^{s_{var+1}} a ds_var`` where ``s_var`` must be the lowest variable.

    The result lives in ``s_{var+1}, ...``; integrating the only variable of a
    univariate polynomial yields a univariate polynomial in ``s_{var+1}``.
    """
    if var != a.first:
        raise ValueError(f"can only integrate the lowest variable s_{a.first}, not s_{var}")
    out: dict[tuple[int, ...], Fraction] = {}
    for e, c in a.terms.items():
        head, rest = e[0], e[1:]
        if rest:
            key = (rest[0] + head + 1,) + rest[1:]
        else:
            key = (head + 1,)
        out[key] = out.get(key, 0) + c / (head + 1)
    return MultiPoly(max(a.nvars - 1, 1), out, a.first + 1)


def mp_laplace_terminal(a: MultiPoly, rate) -> Fraction:
    """``int_0^inf exp(-rate*s) a(s) ds`` for univariate ``a``."""
    rate = Fraction(rate)
    if rate <= 0:
        raise ValueError("rate must be positive")
    if a.nvars != 1:
        raise ValueError("terminal integral needs a univariate polynomial")
    return sum((c * Fraction(factorial(e[0]), rate ** (e[0] + 1)) for e, c in a.terms.items()), Fraction(0))
