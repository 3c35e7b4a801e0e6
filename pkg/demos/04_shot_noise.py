"""Shot noise moments from Bell polynomials.

S_t = sum_k J_k g(T_k, t) over a Poisson process has cumulants
E[J^k] * int_0^t g(s, t)^k lambda ds.  With the exponential kernel
g(s, t) = exp(-(t - s)) and Exp(1) marks, both factors are explicit.
"""

from fractions import Fraction
from math import factorial

from gcmoments import ExpPoly, shot_noise_cumulants, shot_noise_moments

lam = Fraction(3)
n = 4
marks = [factorial(k) for k in range(1, n + 1)]
# int_0^t lam exp(-k (t - s)) ds = (lam / k) (1 - exp(-k t))
kernel = [(1 - ExpPoly.exp(-k)) * (lam / k) for k in range(1, n + 1)]

for k, c in enumerate(shot_noise_cumulants(marks, kernel, n), start=1):
    print(f"kappa_{k}(t) = {c.render()}")
print()
for k, m in enumerate(shot_noise_moments(marks, kernel, n), start=1):
    print(f"E[S_t^{k}] at t = 1, 10: {m(1.0):.6f}, {m(10.0):.6f}")
