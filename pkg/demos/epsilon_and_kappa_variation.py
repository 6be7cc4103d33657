"""
Epsilon-variation and kappa-variation
=====================================

The epsilon-variation is the smallest Jordan variation of any function
within epsilon of f in the sup norm.  On the real line it is solved by the
taut string; on finite metric spaces by a shortest path over the tube.
The kappa-variation replaces interval lengths by kappa(length).
"""

from modvar import KappaSpec, MetricSpace, SampledFunction, epsilon_variation, evar_profile
from modvar import kappa_nu_bound_check, kappa_variation
from modvar.corpus import alternating_grid, gen_dirichlet, midpoint_space, two_point_space
from modvar.functions import Grid

# The alternating sequence 0, 1, 0, 1 on the real line.
grid = Grid.from_points(range(4))
alt = SampledFunction(grid, MetricSpace.real(), [0.0, 1.0, 0.0, 1.0])
for r in evar_profile(alt, [0.1, 0.2, 0.4, 0.5]):
    print(f"eps = {r.eps:.1f}  V_eps = {r.value:.6f}  witness = {r.witness.values[:, 0]}")

# On a two-point space there is nothing between x and y, so the tube only
# helps once it swallows the whole space.
grid = alternating_grid(9)
two = gen_dirichlet(two_point_space(1.0), "x", "y", grid)
mid = gen_dirichlet(midpoint_space(1.0), "x", "y", grid)
for eps in (0.3, 0.5, 1.0):
    print(f"eps = {eps}: two-point {epsilon_variation(two, eps).value}, "
          f"with midpoint {epsilon_variation(mid, eps).value}")

# kappa-variation of a short burst of oscillation under three concave kappa
# families.  Short intervals are cheap under a concave kappa, so the optimal
# partition isolates the burst.
m = 10
burst = SampledFunction(Grid.from_points(range(m)), MetricSpace.real(),
                       [0, 0, 0, 0, 1, 0, 1, 0, 0, 0.0])
for spec in (KappaSpec("entropy"), KappaSpec("power", alpha=0.5), KappaSpec("logrec")):
    res = kappa_variation(burst, None, spec)
    check = kappa_nu_bound_check(burst, None, spec, 5)
    print(f"{spec.family:8s} V = {res.value:.4f}  partition = {res.partition}  "
          f"iterations = {res.iterations}  bound holds = {check['holds']}")
