"""Exact exp-polynomials ``f(t) = sum_r p_r(t) e^{r t}``.

Rates ``r`` and the coefficients of each ``p_r`` are Fractions.  Values are
immutable and kept in canonical form (no zero polynomial under any rate, no
trailing zero coefficients), so ``==`` is structural equality.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import factorial
from numbers import Rational
from typing import Mapping, Sequence

_ZERO = Fraction(0)


def _trim(coeffs) -> tuple[Fraction, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for j, v in enumerate(b):
        out[j] += v
    return out


def _poly_mul(a, b):
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _scalar(c) -> Fraction:
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact scalar expected, got {type(c).__name__}")


class ExpPoly:
    """Finite sum of ``c * t^j * exp(r*t)`` terms with exact rational c, r."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        canon = {}
        for rate, coeffs in (terms or {}).items():
            c = _trim(Fraction(v) for v in coeffs)
            if c:
                canon[Fraction(rate)] = c
        self._terms = dict(sorted(canon.items()))
        self._hash = None

    # constructors

    @classmethod
    def const(cls, c) -> "ExpPoly":
        return cls({0: [c]})

    @classmethod
    def t(cls, power: int = 1, coeff=1) -> "ExpPoly":
        """``coeff * t^power``."""
        return cls({0: [0] * power + [coeff]})

    @classmethod
    def exp(cls, rate, coeff=1) -> "ExpPoly":
        """``coeff * exp(rate*t)``."""
        return cls({rate: [coeff]})

    @classmethod
    def poly(cls, coeffs: Sequence, rate=0) -> "ExpPoly":
        """``(c_0 + c_1 t + ...) * exp(rate*t)``."""
        return cls({rate: coeffs})

    # structure

    @property
    def terms(self) -> dict[Fraction, tuple[Fraction, ...]]:
        return dict(self._terms)

    @property
    def rates(self) -> list[Fraction]:
        return list(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((len(c) - 1 for c in self._terms.values()), default=-1)

    def coeff(self, rate, power: int = 0) -> Fraction:
        c = self._terms.get(Fraction(rate), ())
        return c[power] if power < len(c) else _ZERO

    def __eq__(self, other):
        if isinstance(other, ExpPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self == ExpPoly.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # ring operations

    def _coerce(self, other) -> "ExpPoly":
        if isinstance(other, ExpPoly):
            return other
        return ExpPoly.const(_scalar(other))

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for r, c in other._terms.items():
            out[r] = _poly_add(out[r], c) if r in out else c
        return ExpPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly({r: [-v for v in c] for r, c in self._terms.items()})

    def __sub__(self, other):
        try:
            return self + (-self._coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            try:
                c = _scalar(other)
            except TypeError:
                return NotImplemented
            return self.scale(c)
        out: dict[Fraction, list] = {}
        for r1, c1 in self._terms.items():
            for r2, c2 in other._terms.items():
                r = r1 + r2
                prod = _poly_mul(c1, c2)
                out[r] = _poly_add(out[r], prod) if r in out else prod
        return ExpPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scale(1 / _scalar(c))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not exp-polynomials")
        out, base = ExpPoly.const(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "ExpPoly":
        c = _scalar(c)
        return ExpPoly({r: [v * c for v in p] for r, p in self._terms.items()})

    def shift_rate(self, dr) -> "ExpPoly":
        """Multiply by ``exp(dr*t)``."""
        dr = Fraction(dr)
        return ExpPoly({r + dr: c for r, c in self._terms.items()})

    # calculus

    def integrate(self) -> "ExpPoly":
        """Antiderivative vanishing at 0: ``F(t) = int_0^t f(s) ds``."""
        out: dict[Fraction, list] = {}
        const = _ZERO
        for r, c in self._terms.items():
            if r == 0:
                p = [_ZERO] + [v / (j + 1) for j, v in enumerate(c)]
                out[r] = _poly_add(out.get(r, []), p)
                continue
            # int s^j e^{rs} = e^{rs} sum_i (-1)^(j-i) j!/(i! r^(j-i+1)) s^i
            p = [_ZERO] * len(c)
            for j, v in enumerate(c):
                if v == 0:
                    continue
                for i in range(j + 1):
                    p[i] += v * (-1) ** (j - i) * Fraction(factorial(j), factorial(i)) / r ** (j - i + 1)
            out[r] = p
            const -= p[0]
        if const:
            out[_ZERO] = _poly_add(out.get(_ZERO, []), [const])
        return ExpPoly(out)

    def differentiate(self) -> "ExpPoly":
        out = {}
        for r, c in self._terms.items():
            d = [r * v for v in c]
            for j in range(1, len(c)):
                d[j - 1] += j * c[j]
            out[r] = d
        return ExpPoly(out)

    def limit_at_infinity(self) -> Fraction | None:
        """Limit as ``t -> inf``; ``None`` when the function does not converge."""
        for r, c in self._terms.items():
            if r > 0 or (r == 0 and len(c) > 1):
                return None
        return self.coeff(0)

    # evaluation

    def __call__(self, t: float) -> float:
        """Double-precision value; terms summed by ascending rate."""
        t = float(t)
        parts = []
        for r, c in self._terms.items():
            e = math.exp(float(r) * t)
            for j, v in enumerate(c):
                if v:
                    parts.append(float(v) * t**j * e)
        return math.fsum(parts)

    def evaluate(self, t: float) -> float:
        return self(t)

    def at_zero(self) -> Fraction:
        """Exact value at ``t = 0``."""
        return sum((c[0] for c in self._terms.values()), _ZERO)

    # rendering

    def render(self) -> str:
        """Human-readable sum of ``c * t^j * exp(r*t)`` with exact c and r."""
        if not self._terms:
            return "0"
        pieces = []
        for r, c in self._terms.items():
            for j, v in enumerate(c):
                if v == 0:
                    continue
                factors = [str(v)]
                if j == 1:
                    factors.append("t")
                elif j > 1:
                    factors.append(f"t^{j}")
                if r != 0:
                    factors.append(f"exp({r}*t)")
                pieces.append(" * ".join(factors))
        text = " + ".join(pieces)
        return text.replace("+ -", "- ")

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"ExpPoly({self.render()})"


def ep_add(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    return a + b


def ep_mul(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    return a * b


def ep_scale(a: ExpPoly, c) -> ExpPoly:
    return a.scale(c)


def ep_integrate(a: ExpPoly) -> ExpPoly:
    return a.integrate()


def ep_differentiate(a: ExpPoly) -> ExpPoly:
    return a.differentiate()


def ep_eval(a: ExpPoly, t: float) -> float:
    return a(t)


def ep_limit_at_infinity(a: ExpPoly) -> Fraction | None:
    return a.limit_at_infinity()
