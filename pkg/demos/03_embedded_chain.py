"""The process seen at its jump times.

Y(m) collects the collapsed mass up to the m-th jump and X(m) = T_m - Y(m)
is what is left right after it.  Moments are exact rationals for each m.
X(m) forgets its start quickly, approaching an Exp(lambda) law.
"""

from fractions import Fraction

from gcmoments import moment_table

lam = Fraction(2)
rows = moment_table(lam, [1, 2, 3, 5, 10, 20, 30], 4)

print("  m   E[Y(m)]    E[X(m)]  E[X(m)^2]  skew X  kurt X")
for r in rows:
    print(
        f"{r['m']:3}  {float(r['moment_Y_1']):8.5f}  {float(r['moment_X_1']):8.5f}"
        f"  {float(r['moment_X_2']):8.5f}  {r['skewness_X']:6.3f}  {r['kurtosis_X']:6.3f}"
    )

print()
print("exact third moments of Y(m):")
for r in rows[:4]:
    print(f"  m={r['m']}: {r['moment_Y_3']}")
