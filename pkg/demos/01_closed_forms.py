"""Moments of a growth-collapse process with uniform cut-offs.

X_t grows at unit speed and, at the jumps of a rate-lambda Poisson process,
drops to a uniform fraction of its value.  Its moments are exact
exp-polynomials in t.  Here we build them by summing over compositions, check
them against the one-line closed form, and watch them settle on the Gamma(2)
limit.
"""

from fractions import Fraction

from gcmoments import GrowthSpec, cumulants_X, moment_X, moment_X_closed, ode_residual
from gcmoments.exppoly import ep_limit_at_infinity

lam = Fraction(2)
spec = GrowthSpec(lam)

for n in range(1, 5):
    engine = moment_X(spec, n)
    assert engine == moment_X_closed(lam, n)
    assert ode_residual(lam, n).is_zero()
    print(f"E[X_t^{n}] = {engine.render()}")
    print(f"    -> {ep_limit_at_infinity(engine)} as t -> oo")

print()
for j, k in enumerate(cumulants_X(spec, 4), start=1):
    print(f"kappa_{j}(oo) = {ep_limit_at_infinity(k)}")

print()
print("   t     mean      var     skew")
k1, k2, k3 = cumulants_X(spec, 3)
for t in [0.25, 0.5, 1, 2, 4, 8]:
    print(f"{t:5}  {k1(t):7.4f}  {k2(t):7.4f}  {k3(t) / k2(t) ** 1.5:7.4f}")
