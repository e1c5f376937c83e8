"""Edge-weight laws: exact CDF/quantile access and model assumptions.

Every law exposes F, the generalized inverse min{x : F(x) >= u}, support
endpoints and atom masses.  The quantile is exact at float resolution:
F(q(u)) >= u while the float just below q(u) fails.
"""

import numpy as np

from fpplab import (
    FiniteAtomic,
    Mixture,
    Pareto,
    TwoPoint,
    Uniform,
    check_assumptions,
)

tp = TwoPoint(1.0, 2.0, 0.5)
print("two-point law, mass 1/2 at 1 and at 2")
print("  F(1) =", tp.cdf(1.0), "  q(0.5) =", tp.quantile(0.5), "  q(0.75) =", tp.quantile(0.75))

mix = Mixture([Uniform(0.0, 1.0), FiniteAtomic([2.0], [1.0])], [0.5, 0.5])
print("uniform/atom mixture")
print("  F(0.5) =", mix.cdf(0.5), "  F(2) =", mix.cdf(2.0))
print("  q(0.75) =", mix.quantile(0.75), " (the atom at 2 absorbs the upper half)")

u = Uniform(0.0, 1.0)
q = u.quantile(0.3)
print("generalized inverse at float resolution:")
print("  F(q(0.3)) =", u.cdf(q), ">= 0.3;  F(prev float) =", u.cdf(np.nextafter(q, -np.inf)))

print()
print("model assumptions (finite x^2 log x moment; atom at 0 below p_c):")
for law in (Pareto(1.0, 3.0), Pareto(1.0, 2.0), FiniteAtomic([0.0, 1.0], [0.6, 0.4]), u):
    rep = check_assumptions(law, d=2)
    print(f"  {law!r}")
    print(f"    2log moment: {rep.has_2log_moment}, mass at 0: {rep.atom_at_zero_mass:g}, "
          f"geodesic condition: {rep.satisfies_geodesic_condition}")
