"""
Joint modulus of variation on small grids
=========================================

Builds a few sampled functions, computes nu_n profiles and shows how the
profile separates regulated-looking data from Dirichlet-type data.
"""

import numpy as np

from modvar import MetricSpace, SampledFunction, nu, nu_profile, regularity_profile
from modvar.corpus import alternating_grid, gen_dirichlet, two_point_space
from modvar.functions import Grid

# A step function on the real line: three plateaus, total variation 3.
grid = Grid.from_points(range(30))
step = SampledFunction(grid, MetricSpace.real(), np.repeat([0.0, 1.0, 3.0], 10))
print("step profile     ", nu_profile(step, None, 6).values)

# The profile freezes at the Jordan variation once n passes the number of jumps.
value, pairs = nu(step, None, 2)
print("nu_2 witness     ", value, pairs)

# A Dirichlet-type function alternates between two points at every grid node,
# so every extra pair adds the full distance.
sp = two_point_space(0.5)
dirichlet = gen_dirichlet(sp, "x", "y", alternating_grid(21))
prof = nu_profile(dirichlet, None, 10)
print("dirichlet profile", prof.values)
print("nu_n / n         ", prof.normalized())

# The growth classifier reads the normalized profile.
print("verdict (step)     ", regularity_profile(step, None, 1001, theta=1e-3).verdict)
print("verdict (dirichlet)", regularity_profile(dirichlet, None, 20).verdict)

# Joint modulus against a companion: f and g move together, so the joint
# modulus is much smaller than either single-function modulus.
t = np.linspace(0, 1, 25)
f = SampledFunction(Grid.from_points(range(25)), MetricSpace.real(), np.sin(12 * t))
g = SampledFunction(f.grid, f.space, np.sin(12 * t) + 0.01 * t)
print("nu_5(f)   ", nu(f, None, 5)[0])
print("nu_5(f, g)", nu(f, g, 5)[0])
