"""Exact moments and cumulants of growth-collapse processes in continuous time.

The jump part is

    Y_t = sum_{k <= N_t} f(T_k) (1 - Z_k) prod_{k < l <= N_t} Z_l

for a rate-``lam`` Poisson process with jump times ``T_k`` and i.i.d. cut-offs
``Z_k``.  The growth-collapse process itself is ``X_t = t - Y_t`` (``f(s) = s``).
All results are :class:`~gcmoments.exppoly.ExpPoly` functions of ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Sequence

from .combinatorics import (
    MomentSequence,
    c_pq,
    compositions,
    cumulants_from_moments,
    moments_from_cumulants,
)
from .exppoly import ExpPoly

DEFAULT_MAX_ORDER = 8
IDENTITY = (Fraction(0), Fraction(1))


def as_rate(lam) -> Fraction:
    """Exact positive rate from an int, Fraction or string such as ``"7/3"``."""
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    return lam


@dataclass(frozen=True)
class GrowthSpec:
    """Poisson rate, growth integrand ``f`` and cut-off law.

    ``f`` is given by its polynomial coefficients ``(c_0, c_1, ...)``.
    ``cutoff=None`` means Uniform[0, 1] cut-offs of any order.
    """

    lam: Fraction
    f: tuple[Fraction, ...] = IDENTITY
    cutoff: MomentSequence | None = None
    max_order: int = DEFAULT_MAX_ORDER

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rate(self.lam))
        f = list(Fraction(c) for c in self.f)
        while f and f[-1] == 0:
            f.pop()
        object.__setattr__(self, "f", tuple(f))
        if self.cutoff is not None and self.cutoff[0] != 1:
            raise ValueError("cut-off moment sequence must have m_0 = 1")

    @property
    def uniform(self) -> bool:
        return self.cutoff is None or self.cutoff.is_uniform()

    def moments(self, order: int) -> MomentSequence:
        """Cut-off moments through ``order`` (domain error if not available)."""
        if self.cutoff is None:
            return MomentSequence.uniform(order)
        if self.cutoff.order < order:
            raise ValueError(f"cut-off moments known up to order {self.cutoff.order}, need {order}")
        return self.cutoff

    def check_order(self, n: int):
        if n < 0:
            raise ValueError(f"moment order must be nonnegative, got {n}")
        if n > self.max_order:
            raise ValueError(f"order {n} exceeds max_order={self.max_order}")


@lru_cache(maxsize=256)
def moment_Y(spec: GrowthSpec, n: int) -> ExpPoly:
    """``E[Y_t^n]`` as an exact exp-polynomial.

    Sums over compositions ``0 = q_0 < ... < q_k = n`` of the nested integral
    ``int_0^t int_0^{s_k} ... prod_l f(s_l)^{p_l} exp(lam s_l (m_{q_{l-1}} - m_{q_l}))``
    weighted by ``lam^k prod_l E[(1-Z)^{p_l} Z^{q_{l-1}}] / p_l!``, times
    ``n! exp(lam t (m_n - 1))``.
    """
    spec.check_order(n)
    if n == 0:
        return ExpPoly.const(1)
    ms = spec.moments(n)
    lam = spec.lam
    f = ExpPoly.poly(spec.f)
    fpow = [ExpPoly.const(1)]
    for _ in range(n):
        fpow.append(fpow[-1] * f)

    # nested integrals only depend on the cut prefix
    prefix: dict[tuple[int, ...], ExpPoly] = {(0,): ExpPoly.const(1)}

    def nested(cuts):
        if cuts not in prefix:
            a, b = cuts[-2], cuts[-1]
            integrand = (nested(cuts[:-1]) * fpow[b - a]).shift_rate(lam * (ms[a] - ms[b]))
            prefix[cuts] = integrand.integrate()
        return prefix[cuts]

    total = ExpPoly()
    for k in range(1, n + 1):
        for comp in compositions(n, k):
            weight = lam**k
            for a, p in zip(comp.cuts, comp.parts):
                weight *= c_pq(ms, p, a) / factorial(p)
            if weight:
                total = total + nested(comp.cuts) * weight
    return (total * factorial(n)).shift_rate(lam * (ms[n] - 1))


def _require_linear_growth(spec: GrowthSpec):
    if spec.f != IDENTITY:
        raise ValueError("X_t = t - Y_t needs the growth integrand f(s) = s")


@lru_cache(maxsize=64)
def moments_X(spec: GrowthSpec, n: int) -> tuple[ExpPoly, ...]:
    """``(E[X_t^0], ..., E[X_t^n])`` via the binomial recursion on ``t - Y_t``."""
    _require_linear_growth(spec)
    spec.check_order(n)
    out = [ExpPoly.const(1)]
    for j in range(1, n + 1):
        acc = moment_Y(spec, j)
        for k in range(j):
            acc = acc - ExpPoly.t(j - k) * out[k] * (comb(j, k) * (-1) ** k)
        out.append(acc * (-1) ** j)
    return tuple(out)


def moment_X(spec: GrowthSpec, n: int) -> ExpPoly:
    """``E[X_t^n]`` for ``X_t = t - Y_t``."""
    return moments_X(spec, n)[n]


def moment_X_closed(lam, n: int) -> ExpPoly:
    """Closed form of ``E[X_t^n]`` under uniform cut-offs:
    ``(n+1)!/lam^n sum_k (-1)^k (k+1)^(n-1) C(n,k) exp(-k lam t/(k+1))``.
    """
    lam = as_rate(lam)
    if n < 0:
        raise ValueError("n must be nonnegative")
    scale = Fraction(factorial(n + 1)) / lam**n
    terms = {}
    for k in range(n + 1):
        terms[-k * lam / (k + 1)] = [scale * (-1) ** k * Fraction(k + 1) ** (n - 1) * comb(n, k)]
    return ExpPoly(terms)


def cumulants_X(spec: GrowthSpec, n: int) -> list[ExpPoly]:
    """``kappa^(1)(t), ..., kappa^(n)(t)`` of ``X_t``."""
    if n < 1:
        raise ValueError("need n >= 1")
    return cumulants_from_moments(list(moments_X(spec, n)[1:]))


def ode_residual(lam, n: int, moment: Callable[[int], ExpPoly] | None = None) -> ExpPoly:
    """``d/dt E[X^n] - n E[X^(n-1)] + (lam n/(n+1)) E[X^n]``; zero for the true moments.

    ``moment`` defaults to the closed form; pass another family to test it.
    """
    lam = as_rate(lam)
    if n < 1:
        raise ValueError("need n >= 1")
    if moment is None:
        moment = lambda j: moment_X_closed(lam, j)  # noqa: E731
    mn = moment(n)
    return mn.differentiate() - moment(n - 1) * n + mn * (lam * n / (n + 1))


def stationary_moments(lam, n: int) -> list[Fraction]:
    """Gamma(2, lam) raw moments ``(j+1)!/lam^j`` for ``j = 0..n``."""
    lam = as_rate(lam)
    return [Fraction(factorial(j + 1)) / lam**j for j in range(n + 1)]


def stationary_cumulants(lam, n: int) -> list[Fraction]:
    """Cumulants of the stationary law, ``kappa_j = 2 (j-1)!/lam^j``."""
    return cumulants_from_moments(stationary_moments(lam, n)[1:])


def shot_noise_cumulants(jump_moments: Sequence, g_integrals: Sequence, n: int) -> list:
    """``kappa_k = E[J^k] * int_0^t g^k(s,t) lam ds`` for ``k = 1..n``."""
    if n < 1:
        raise ValueError("need n >= 1")
    if len(jump_moments) < n or len(g_integrals) < n:
        raise ValueError(
            f"need {n} jump moments and {n} kernel integrals, "
            f"got {len(jump_moments)} and {len(g_integrals)}"
        )
    return [g_integrals[k] * jump_moments[k] for k in range(n)]


def shot_noise_moments(jump_moments: Sequence, g_integrals: Sequence, n: int) -> list:
    """Raw moments ``E[S_t^1..S_t^n]`` of Poisson shot noise.

    ``g_integrals[k-1]`` is ``int_0^t g(s,t)^k lam(ds)`` (a scalar or an
    ExpPoly in ``t``), ``jump_moments[k-1]`` is ``E[J^k]``.
    """
    return moments_from_cumulants(shot_noise_cumulants(jump_moments, g_integrals, n))


@dataclass(frozen=True)
class MomentReport:
    n: int
    moment_Y: ExpPoly
    moment_X: ExpPoly
    cumulants: list[ExpPoly] = field(default_factory=list)
    stationary: list[Fraction] = field(default_factory=list)


def moment_report(spec: GrowthSpec, n: int) -> MomentReport:
    """Everything known analytically about ``Y_t`` and ``X_t`` at order ``n``."""
    return MomentReport(
        n=n,
        moment_Y=moment_Y(spec, n),
        moment_X=moment_X(spec, n),
        cumulants=cumulants_X(spec, n) if n >= 1 else [],
        stationary=stationary_moments(spec.lam, n) if spec.uniform else [],
    )
