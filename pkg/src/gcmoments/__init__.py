"""Exact moments and cumulants of Markovian growth-collapse processes.

The analytic side works in exact rational arithmetic: moment functions of time
are :class:`ExpPoly` values, embedded-chain moments are Fractions.  The Monte
Carlo side (:mod:`gcmoments.montecarlo`) checks them statistically.
"""

from .combinatorics import (
    Composition,
    MomentSequence,
    bell_polynomial,
    c_pq,
    compositions,
    cumulants_from_moments,
    moments_from_cumulants,
    stirling2,
)
from .embedded import (
    EmbeddedSpec,
    cumulants_embedded,
    moment_table,
    moment_X_embedded,
    moment_Y_embedded,
)
from .exppoly import ExpPoly
from .growth import (
    GrowthSpec,
    MomentReport,
    cumulants_X,
    moment_report,
    moment_X,
    moment_X_closed,
    moment_Y,
    ode_residual,
    shot_noise_cumulants,
    shot_noise_moments,
    stationary_cumulants,
    stationary_moments,
)
from .mvpoly import MultiPoly

__version__ = "0.1.0"
