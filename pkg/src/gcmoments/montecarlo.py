"""Monte Carlo oracle for growth-collapse processes and their embedded chains.

Samples are split into fixed batches.  Batch ``b`` draws from its own Philox
stream keyed by ``(seed, b)``, and per-batch power sums are merged in batch
order, so results are bit-identical whatever the number of worker threads.
The same batches give batch-means standard errors.
"""

from __future__ import annotations

import logging
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .combinatorics import cumulants_from_moments

log = logging.getLogger(__name__)

THREADS_ENV = "GC_MOMENTS_THREADS"
DEFAULT_BATCHES = 100

Sampler = Callable[[np.random.Generator, tuple], np.ndarray]


def uniform_cutoff(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.random(shape)


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings.

    ``grid`` holds evaluation times for :func:`simulate_gc` and chain indices
    for :func:`simulate_embedded`.  ``method`` is ``"sum"`` (explicit sum
    formula) or ``"recursion"`` (grow at slope 1, multiply by U at jumps).
    """

    lam: float
    grid: Sequence[float]
    samples: int
    seed: int = 0
    n: int = 4
    method: str = "recursion"
    batches: int = DEFAULT_BATCHES
    cutoff: Sampler = uniform_cutoff
    threads: int | None = None

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if len(self.grid) == 0:
            raise ValueError("empty evaluation grid")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.method not in ("sum", "recursion"):
            raise ValueError(f"unknown method {self.method!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class EstimatedMoments:
    """Raw moments and cumulants per grid point with batch-means standard errors.

    Arrays have shape ``(len(grid), n)``; column ``j`` is order ``j + 1``.
    """

    grid: np.ndarray
    moments: np.ndarray
    moment_se: np.ndarray
    cumulants: np.ndarray
    cumulant_se: np.ndarray
    samples: int
    batches: int = field(default=DEFAULT_BATCHES)


def batch_rng(seed: int, batch: int) -> np.random.Generator:
    """Independent counter-based stream for one batch."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(batch,))))


def _batch_sizes(samples: int, batches: int) -> list[int]:
    if samples < batches:
        warnings.warn(f"{samples} samples < {batches} batches; using {samples} batches", RuntimeWarning, stacklevel=3)
        batches = samples
    q, r = divmod(samples, batches)
    return [q + (b < r) for b in range(batches)]


def _workers(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, os.cpu_count() or 1))
    return max(1, threads)


def _run_batches(fn, sizes, threads):
    workers = min(_workers(threads), len(sizes))
    if workers == 1:
        return [fn(b, s) for b, s in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(len(sizes)), sizes))


# path generation


def jump_times(rng: np.random.Generator, lam: float, horizon: float, size: int) -> np.ndarray:
    """Poisson jump times on ``[0, horizon]`` from exponential interarrivals.

    Returns a ``(size, K)`` array padded with ``inf`` beyond each path's last jump.
    """
    cols = max(4, int(lam * horizon + 6 * math.sqrt(lam * horizon + 1) + 4))
    times = np.cumsum(rng.exponential(1.0 / lam, size=(size, cols)), axis=1)
    while np.any(times[:, -1] <= horizon):
        more = np.cumsum(rng.exponential(1.0 / lam, size=(size, cols)), axis=1) + times[:, -1:]
        times = np.concatenate([times, more], axis=1)
    times[times > horizon] = np.inf
    keep = np.isfinite(times).any(axis=0)
    return times[:, keep] if keep.any() else times[:, :0]


def gc_paths_sum(times: np.ndarray, cuts: np.ndarray, grid) -> np.ndarray:
    """``X_t = t - sum_{T_k <= t} T_k (1 - U_k) prod_{k < l, T_l <= t} U_l`` on the grid."""
    out = np.empty((times.shape[0], len(grid)))
    for g, t in enumerate(grid):
        alive = times <= t
        u = np.where(alive, cuts, 1.0)
        # prod_{l > k} u_l via reversed cumulative product
        after = np.ones_like(u)
        if u.shape[1] > 1:
            after[:, :-1] = np.cumprod(u[:, :0:-1], axis=1)[:, ::-1]
        contrib = np.where(alive, times * (1.0 - cuts) * after, 0.0)
        out[:, g] = t - contrib.sum(axis=1)
    return out


def gc_paths_recursion(times: np.ndarray, cuts: np.ndarray, grid) -> np.ndarray:
    """Same paths by the jump recursion ``X(T_k) = U_k (X(T_{k-1}) + T_k - T_{k-1})``."""
    grid = np.asarray(grid, dtype=float)
    n = times.shape[0]
    out = np.broadcast_to(grid, (n, len(grid))).copy()
    x = np.zeros(n)
    prev = np.zeros(n)
    for j in range(times.shape[1]):
        tj = times[:, j]
        live = np.isfinite(tj)
        x = np.where(live, cuts[:, j] * (x + np.where(live, tj, prev) - prev), x)
        prev = np.where(live, tj, prev)
        hit = tj[:, None] <= grid[None, :]
        out = np.where(hit, x[:, None] + grid[None, :] - tj[:, None], out)
    return out


def embedded_paths(rng: np.random.Generator, lam: float, m_max: int, size: int, cutoff: Sampler = uniform_cutoff):
    """``(Y, X, T)`` for chain indices ``1..m_max``, each of shape ``(size, m_max)``."""
    t = np.cumsum(rng.exponential(1.0 / lam, size=(size, m_max)), axis=1)
    u = cutoff(rng, (size, m_max))
    y = np.empty_like(t)
    acc = np.zeros(size)
    for k in range(m_max):
        acc = u[:, k] * acc + t[:, k] * (1.0 - u[:, k])
        y[:, k] = acc
    return y, t - y, t


# estimation


def _power_sums(values: np.ndarray, n: int) -> np.ndarray:
    # (n, G) array of sum_i v_i^j for j = 1..n
    out = np.empty((n, values.shape[1]))
    p = np.ones_like(values)
    for j in range(n):
        p = p * values
        out[j] = p.sum(axis=0)
    return out


def _cumulants(raw: np.ndarray) -> np.ndarray:
    # raw: (..., n) raw moments -> cumulants along the last axis
    flat = raw.reshape(-1, raw.shape[-1])
    out = np.array([cumulants_from_moments([float(v) for v in row]) for row in flat], dtype=float)
    return out.reshape(raw.shape)


def estimate_cumulants(power_sums: np.ndarray, counts: Sequence[int], n: int | None = None):
    """Plug-in moments/cumulants with batch-means standard errors.

    ``power_sums`` has shape ``(batches, n, G)`` holding per-batch sums of
    ``v^j``; ``counts`` holds the batch sizes.  Returns
    ``(moments, moment_se, cumulants, cumulant_se)``, each of shape ``(G, n)``.
    """
    ps = np.asarray(power_sums, dtype=float)
    counts = np.asarray(counts, dtype=float)
    if n is not None:
        ps = ps[:, :n]
    nb = ps.shape[0]
    if counts.sum() < 2:
        raise ValueError("need at least two samples")
    total = ps.sum(axis=0) / counts.sum()  # (n, G)
    moments = total.T
    cumulants = _cumulants(moments)
    per_batch = np.transpose(ps / counts[:, None, None], (0, 2, 1))  # (B, G, n)
    if nb < 2:
        nan = np.full_like(moments, np.nan)
        return moments, nan, cumulants, nan
    kb = _cumulants(per_batch)
    scale = 1.0 / math.sqrt(nb)
    moment_se = per_batch.std(axis=0, ddof=1) * scale
    cumulant_se = kb.std(axis=0, ddof=1) * scale
    return moments, moment_se, cumulants, cumulant_se


def _estimate(results, sizes, grid, n, batches) -> EstimatedMoments:
    ps = np.stack(results)
    mu, mu_se, ka, ka_se = estimate_cumulants(ps, sizes, n)
    return EstimatedMoments(np.asarray(grid, dtype=float), mu, mu_se, ka, ka_se, int(sum(sizes)), len(sizes))


def simulate_gc_batch(config: SimConfig, batch: int, size: int, method: str | None = None) -> np.ndarray:
    """Per-path ``X_t`` on the grid for one batch, shape ``(size, len(grid))``."""
    rng = batch_rng(config.seed, batch)
    times = jump_times(rng, config.lam, float(config.grid[-1]), size)
    cuts = config.cutoff(rng, times.shape)
    method = method or config.method
    if method == "sum":
        return gc_paths_sum(times, cuts, config.grid)
    return gc_paths_recursion(times, cuts, config.grid)


def simulate_gc(config: SimConfig) -> EstimatedMoments:
    """Moments and cumulants of ``X_t`` at every grid time."""
    if config.grid[0] < 0:
        raise ValueError("evaluation times must be nonnegative")
    sizes = _batch_sizes(config.samples, config.batches)
    log.debug("simulate_gc: %d samples in %d batches", config.samples, len(sizes))

    def run(b, size):
        return _power_sums(simulate_gc_batch(config, b, size), config.n)

    return _estimate(_run_batches(run, sizes, config.threads), sizes, config.grid, config.n, len(sizes))


@dataclass
class EmbeddedEstimate:
    Y: EstimatedMoments
    X: EstimatedMoments


def simulate_embedded(config: SimConfig) -> EmbeddedEstimate:
    """Moments and cumulants of ``Y(m)`` and ``X(m) = T_m - Y(m)`` for ``m`` in the grid."""
    idx = [int(m) for m in config.grid]
    if idx[0] < 1 or any(i != m for i, m in zip(idx, config.grid)):
        raise ValueError("chain indices must be integers >= 1")
    sizes = _batch_sizes(config.samples, config.batches)
    cols = np.asarray(idx) - 1

    def run(b, size):
        y, x, _ = embedded_paths(batch_rng(config.seed, b), config.lam, idx[-1], size, config.cutoff)
        return _power_sums(y[:, cols], config.n), _power_sums(x[:, cols], config.n)

    results = _run_batches(run, sizes, config.threads)
    ys = [r[0] for r in results]
    xs = [r[1] for r in results]
    return EmbeddedEstimate(
        Y=_estimate(ys, sizes, idx, config.n, len(sizes)),
        X=_estimate(xs, sizes, idx, config.n, len(sizes)),
    )


# analytic vs simulated


@dataclass
class ComparisonRow:
    grid: float
    analytic: float
    estimate: float
    stderr: float
    z: float
    passed: bool


@dataclass
class ComparisonReport:
    rows: list[ComparisonRow]
    sigma: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def max_abs_z(self) -> float:
        return max((abs(r.z) for r in self.rows), default=0.0)


def compare(analytic, grid: Sequence[float], estimate: Sequence[float], stderr: Sequence[float], sigma: float = 4.0) -> ComparisonReport:
    """z-scores of estimates against analytic values on a common grid.

    ``analytic`` is a callable of the grid value (e.g. an ExpPoly) or a
    sequence aligned with ``grid``.
    """
    grid = list(grid)
    if len(estimate) != len(grid) or len(stderr) != len(grid):
        raise ValueError("grid, estimates and standard errors must have the same length")
    if callable(analytic):
        values = [float(analytic(g)) for g in grid]
    else:
        values = [float(v) for v in analytic]
        if len(values) != len(grid):
            raise ValueError("analytic values do not match the grid")
    rows = []
    for g, a, e, se in zip(grid, values, estimate, stderr):
        diff = float(e) - a
        if se > 0:
            z = diff / float(se)
        else:
            z = 0.0 if diff == 0 else math.copysign(math.inf, diff)
        rows.append(ComparisonRow(float(g), a, float(e), float(se), z, abs(z) <= sigma))
    return ComparisonReport(rows, sigma)
