"""Exact moments of the embedded growth-collapse chain.

    Y(m) = sum_{k=1}^m f(T_k) (1 - Z_k) prod_{k < l <= m} Z_l
    X(m) = f(T_m) - Y(m)          (= T_m - Y(m) for f(s) = s)

Each moment is a finite sum over compositions ``q`` of ``n``, over the number
``i`` of Poisson points falling before the last added point, of simplex
integrals

    int_0^inf e^{-lam s_k} int_0^{s_k} ... (s_1 + sum_l m_{q_l}(s_{l+1} - s_l))^i prod_l f(s_l)^{p_l}

which are evaluated exactly with :mod:`gcmoments.mvpoly`.  The integrals do
not depend on ``m``, so they are cached and shared across chain indices.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .combinatorics import MomentSequence, c_pq, compositions, cumulants_from_moments
from .growth import IDENTITY, as_rate
from .mvpoly import MultiPoly, mp_integrate_step, mp_laplace_terminal

DEFAULT_MAX_ORDER = 4
DEFAULT_MAX_INDEX = 30


@dataclass(frozen=True)
class EmbeddedSpec:
    """Rate, chain index, cut-off law (``None`` = uniform) and growth ``f``."""

    lam: Fraction
    m: int
    cutoff: MomentSequence | None = None
    f: tuple[Fraction, ...] = IDENTITY
    max_order: int = DEFAULT_MAX_ORDER
    max_index: int = DEFAULT_MAX_INDEX

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rate(self.lam))
        f = [Fraction(c) for c in self.f]
        while f and f[-1] == 0:
            f.pop()
        object.__setattr__(self, "f", tuple(f))
        if self.m < 1:
            raise ValueError(f"chain index m must be >= 1, got {self.m}")
        if self.m > self.max_index:
            raise ValueError(f"m={self.m} exceeds max_index={self.max_index}")
        if self.max_order > DEFAULT_MAX_ORDER or self.max_index > DEFAULT_MAX_INDEX:
            warnings.warn(
                "raising the embedded-chain caps makes the exact expansion grow quickly",
                RuntimeWarning,
                stacklevel=3,
            )

    def moments(self, order: int) -> MomentSequence:
        if order > self.max_order:
            raise ValueError(f"order {order} exceeds max_order={self.max_order}")
        if self.cutoff is None:
            return MomentSequence.uniform(order)
        if self.cutoff.order < order:
            raise ValueError(f"cut-off moments known up to order {self.cutoff.order}, need {order}")
        return self.cutoff

    def with_index(self, m: int) -> "EmbeddedSpec":
        return EmbeddedSpec(self.lam, m, self.cutoff, self.f, self.max_order, self.max_index)


def _linear_form(ms: tuple[Fraction, ...], cuts: tuple[int, ...]) -> MultiPoly:
    # s_1 + sum_{l<k} m_{q_l} (s_{l+1} - s_l), written in the basis s_1..s_k
    k = len(cuts) - 1
    coeffs = [ms[cuts[l - 1]] - ms[cuts[l]] for l in range(1, k)] + [ms[cuts[k - 1]]]
    return MultiPoly.linear(coeffs)


@lru_cache(maxsize=None)
def _growth_factor(f: tuple[Fraction, ...], cuts: tuple[int, ...]) -> MultiPoly:
    # prod_l f(s_l)^{p_l}
    k = len(cuts) - 1
    out = MultiPoly.const(k)
    for l in range(k):
        fl = MultiPoly(k, {tuple(j if v == l else 0 for v in range(k)): c for j, c in enumerate(f)})
        for _ in range(cuts[l + 1] - cuts[l]):
            out = out * fl
    return out


@lru_cache(maxsize=None)
def _linear_power(ms: tuple[Fraction, ...], cuts: tuple[int, ...], i: int) -> MultiPoly:
    if i == 0:
        return MultiPoly.const(len(cuts) - 1)
    return _linear_power(ms, cuts, i - 1) * _linear_form(ms, cuts)


@lru_cache(maxsize=None)
def simplex_integral(lam: Fraction, f: tuple, ms: tuple, cuts: tuple[int, ...], i: int) -> Fraction:
    """Exact value of the ordered-simplex integral for one (composition, i) stratum."""
    poly = _linear_power(ms, cuts, i) * _growth_factor(f, cuts)
    for var in range(1, len(cuts) - 1):
        poly = mp_integrate_step(poly, var)
    return mp_laplace_terminal(poly, lam)


def _stratum_weights(ms: MomentSequence, cuts: tuple[int, ...], boundary: bool) -> Fraction:
    # prod_l E[(1-Z)^{p_l} Z^{q_{l-1}}] / p_l!, last factor swapped on the boundary
    w = Fraction(1)
    k = len(cuts) - 1
    for l in range(1, k + 1):
        a, b = cuts[l - 1], cuts[l]
        if boundary and l == k:
            w *= (-1) ** a * ms[b]
        else:
            w *= c_pq(ms, b - a, a)
        w /= factorial(b - a)
    return w


def _check_order(spec: EmbeddedSpec, n: int) -> MomentSequence:
    if n < 1:
        raise ValueError(f"moment order must be >= 1, got {n}")
    return spec.moments(n)


def moment_Y_embedded(spec: EmbeddedSpec, n: int) -> Fraction:
    """``E[Y(m)^n]`` exactly."""
    ms = _check_order(spec, n)
    lam, m = spec.lam, spec.m
    mv = ms.values
    total = Fraction(0)
    for k in range(1, min(n, m) + 1):
        for comp in compositions(n, k):
            w = _stratum_weights(ms, comp.cuts, boundary=False)
            if not w:
                continue
            for i in range(m - k + 1):
                tail = ms[n] ** (m - i - k)
                if tail:
                    total += w * tail * lam ** (k + i) / factorial(i) * simplex_integral(lam, spec.f, mv, comp.cuts, i)
    return total * factorial(n)


def moment_X_embedded(spec: EmbeddedSpec, n: int) -> Fraction:
    """``E[X(m)^n]`` for ``X(m) = f(T_m) - Y(m)``.

    Strata where the last added point is not ``T_m`` contribute ``(-1)^n``
    times their ``Y(m)`` value; when it is ``T_m`` (``i = m - k``) its factor
    ``f(T_m) Z_m`` replaces ``f(T_m)(1 - Z_m)``.
    """
    ms = _check_order(spec, n)
    lam, m = spec.lam, spec.m
    mv = ms.values
    inner = Fraction(0)
    edge = Fraction(0)
    for k in range(1, min(n, m) + 1):
        for comp in compositions(n, k):
            w = _stratum_weights(ms, comp.cuts, boundary=False)
            if w:
                for i in range(m - k):
                    tail = ms[n] ** (m - i - k)
                    if tail:
                        inner += w * tail * lam ** (k + i) / factorial(i) * simplex_integral(lam, spec.f, mv, comp.cuts, i)
            wb = _stratum_weights(ms, comp.cuts, boundary=True)
            if wb:
                edge += wb * lam**m / factorial(m - k) * simplex_integral(lam, spec.f, mv, comp.cuts, m - k)
    return ((-1) ** n * inner + edge) * factorial(n)


_MOMENT = {"Y": moment_Y_embedded, "X": moment_X_embedded}


@dataclass(frozen=True)
class EmbeddedCumulants:
    chain: str
    m: int
    moments: list[Fraction]
    cumulants: list[Fraction]
    skewness: float
    kurtosis: float


def shape_stats(kappa) -> tuple[float, float]:
    """Skewness ``k3/k2^1.5`` and excess kurtosis ``k4/k2^2``; NaN if undefined."""
    k2 = kappa[1] if len(kappa) > 1 else 0
    if k2 == 0:
        return math.nan, math.nan
    skew = float(kappa[2]) / float(k2) ** 1.5 if len(kappa) > 2 else math.nan
    kurt = float(kappa[3] / k2**2) if len(kappa) > 3 else math.nan
    return skew, kurt


def cumulants_embedded(spec: EmbeddedSpec, n: int, chain: str = "Y") -> EmbeddedCumulants:
    """Exact moments and cumulants of ``Y(m)`` or ``X(m)`` up to order ``n``."""
    try:
        moment = _MOMENT[chain]
    except KeyError:
        raise ValueError(f"chain must be 'Y' or 'X', got {chain!r}") from None
    mu = [moment(spec, j) for j in range(1, n + 1)]
    kappa = cumulants_from_moments(mu)
    if len(kappa) > 1 and kappa[1] == 0:
        warnings.warn(f"degenerate {chain}({spec.m}): zero variance", RuntimeWarning, stacklevel=2)
    skew, kurt = shape_stats(kappa)
    return EmbeddedCumulants(chain, spec.m, mu, kappa, skew, kurt)


def moment_table(lam, m_values, n_max: int, cutoff: MomentSequence | None = None, f=IDENTITY) -> list[dict]:
    """One row per chain index with moments and cumulants of ``Y(m)`` and ``X(m)``.

    Moments and cumulants stay exact Fractions; skewness and kurtosis are floats.
    """
    rows = []
    for m in m_values:
        spec = EmbeddedSpec(lam, m, cutoff, f)
        y = cumulants_embedded(spec, n_max, "Y")
        x = cumulants_embedded(spec, n_max, "X")
        row: dict = {"m": m}
        for j in range(n_max):
            row[f"moment_Y_{j + 1}"] = y.moments[j]
        for j in range(n_max):
            row[f"moment_X_{j + 1}"] = x.moments[j]
        for j in range(n_max):
            row[f"kappa_Y_{j + 1}"] = y.cumulants[j]
        for j in range(n_max):
            row[f"kappa_X_{j + 1}"] = x.cumulants[j]
        row.update(skewness_Y=y.skewness, kurtosis_Y=y.kurtosis, skewness_X=x.skewness, kurtosis_X=x.kurtosis)
        rows.append(row)
    return rows
