"""Compositions, Bell polynomials and the moment/cumulant algebra.

Every partition sum is evaluated in composition form: a sum over the set
partitions of {1..n} into k blocks of a symmetric function of the block sizes
equals ``n!/k!`` times a sum over ordered compositions ``p_1 + ... + p_k = n``
weighted by ``1/(p_1! ... p_k!)``.  This needs 2^(n-1) terms instead of
Bell(n).

The moment/cumulant helpers only use ``+`` and ``*`` on their inputs, so they
work on Fractions, floats and :class:`gcmoments.exppoly.ExpPoly` alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Composition:
    """Cut points ``0 = q_0 < q_1 < ... < q_k = n`` of a composition of n."""

    n: int
    cuts: tuple[int, ...]

    def __post_init__(self):
        c = self.cuts
        if len(c) < 2 or c[0] != 0 or c[-1] != self.n:
            raise ValueError(f"cuts must run from 0 to {self.n}: {c}")
        if any(b <= a for a, b in zip(c, c[1:])):
            raise ValueError(f"cuts must be strictly increasing: {c}")

    @property
    def k(self) -> int:
        return len(self.cuts) - 1

    @property
    def parts(self) -> tuple[int, ...]:
        c = self.cuts
        return tuple(b - a for a, b in zip(c, c[1:]))


def compositions(n: int, k: int) -> list[Composition]:
    """All compositions of ``n`` into ``k`` positive parts.

    Ordered lexicographically on the interior cut set ``(q_1, ..., q_{k-1})``.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    return [Composition(n, (0, *inner, n)) for inner in combinations(range(1, n), k - 1)]


@lru_cache(maxsize=None)
def _weighted_compositions(n: int) -> tuple[tuple[int, tuple[int, ...], Fraction], ...]:
    # (k, parts, n!/(k! prod p_l!)) for every composition of n
    out = []
    for k in range(1, n + 1):
        for c in compositions(n, k):
            denom = factorial(k)
            for p in c.parts:
                denom *= factorial(p)
            out.append((k, c.parts, Fraction(factorial(n), denom)))
    return tuple(out)


def _partition_sum(x: Sequence, n: int, block_weight=None):
    """Sum over set partitions of {1..n} of ``w(k) * prod x[|block| - 1]``."""
    total = None
    for k, parts, mult in _weighted_compositions(n):
        coef = mult if block_weight is None else mult * block_weight(k)
        if coef == 0:
            continue
        term = x[parts[0] - 1]
        for p in parts[1:]:
            term = term * x[p - 1]
        term = term * coef
        total = term if total is None else total + term
    return total


def bell_polynomial(x: Sequence):
    """Complete Bell polynomial ``B_n(x_1, ..., x_n)`` with ``n = len(x)``.

    >>> bell_polynomial([1, 1, 1])
    Fraction(5, 1)
    """
    n = len(x)
    if n == 0:
        raise ValueError("bell_polynomial needs at least one argument")
    return _partition_sum(x, n)


def moments_from_cumulants(kappa: Sequence) -> list:
    """Raw moments ``E[X^j] = B_j(kappa_1..kappa_j)`` for ``j = 1..len(kappa)``."""
    if len(kappa) == 0:
        raise ValueError("empty cumulant list")
    return [bell_polynomial(kappa[:j]) for j in range(1, len(kappa) + 1)]


def cumulants_from_moments(mu: Sequence) -> list:
    """Cumulants from raw moments ``mu = (E[X], ..., E[X^n])``.

    ``kappa_n = sum_k (k-1)! (-1)^(k-1) sum_{partitions into k blocks} prod mu_|block|``.
    """
    if len(mu) == 0:
        raise ValueError("empty moment list")

    def weight(k):
        return (-1) ** (k - 1) * factorial(k - 1)

    return [_partition_sum(mu, j, weight) for j in range(1, len(mu) + 1)]


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k)."""
    if n < 0 or k < 0:
        raise ValueError("stirling2 needs n, k >= 0")
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


class MomentSequence:
    """Raw moments ``m_q = E[Z^q]``, ``q = 0..N``, of a cut-off law, held exactly.

    ``unit_interval=True`` asserts that the law lives on [0, 1], which is
    checked through ``0 <= m_{q+1} <= m_q <= 1``.
    """

    def __init__(self, values: Iterable, unit_interval: bool = False):
        vals = tuple(Fraction(v) for v in values)
        if not vals or vals[0] != 1:
            raise ValueError("moment sequence must start with m_0 = 1")
        if unit_interval:
            for a, b in zip(vals, vals[1:]):
                if not 0 <= b <= a <= 1:
                    raise ValueError("not the moment sequence of a [0,1]-valued law")
        self.values = vals
        self.unit_interval = unit_interval

    @classmethod
    def uniform(cls, order: int) -> "MomentSequence":
        """Uniform[0, 1] cut-off: ``m_q = 1/(q+1)`` for ``q <= order``."""
        return cls([Fraction(1, q + 1) for q in range(order + 1)], unit_interval=True)

    @property
    def order(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, q: int) -> Fraction:
        if q > self.order:
            raise ValueError(f"moment of order {q} requested, sequence stops at {self.order}")
        return self.values[q]

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        return isinstance(other, MomentSequence) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"MomentSequence({[str(v) for v in self.values]})"

    def is_uniform(self) -> bool:
        return all(v == Fraction(1, q + 1) for q, v in enumerate(self.values))


def c_pq(ms: MomentSequence, p: int, q: int) -> Fraction:
    """Mixed moment ``E[(1-Z)^p Z^q] = sum_k C(p,k) (-1)^k m_{q+k}``."""
    if p < 0 or q < 0:
        raise ValueError("p and q must be nonnegative")
    if p + q > ms.order:
        raise ValueError(f"C_{{{p},{q}}} needs moments up to order {p + q}, have {ms.order}")
    return sum((comb(p, k) * (-1) ** k * ms[q + k] for k in range(p + 1)), Fraction(0))
