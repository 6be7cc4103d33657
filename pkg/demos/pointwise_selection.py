"""
Pointwise selection from a converging Dirichlet sequence
========================================================

f_j alternates between x + r_j and y - r_j with r_j -> 0, paired with the
fixed companion g = D_{x,y}.  The joint modulus nu_n(f_j, g) stays below
2 n r_j, its tail maximum shrinks, and the extraction returns a tail of the
sequence together with a limit that satisfies nu_n(f, g) <= mu_n.
"""

import numpy as np

from modvar import (FunctionSequence, check_cauchy_condition, estimate_mu, extract_subsequence,
                    nu_profile, verify_postcondition)
from modvar.corpus import (gen_dirichlet, gen_factorial_step, real_converging_dirichlet, sharpness_grid,
                           two_point_space)

inst = real_converging_dirichlet(51, m=41, settle=30)

# Tail estimates of mu_n for a few window starts.
for J0 in (0, 10, 25, 40):
    print(f"J0 = {J0:2d}  mu_1..5 = {np.round(estimate_mu(inst.f, inst.g, 5, J0).values, 4)}")

res = extract_subsequence(inst.f, inst.g, delta=1e-3, J0=25, n_max=10)
print("selected indices", res.indices)
mu = estimate_mu(inst.f, inst.g, 10, 25)
post = verify_postcondition(res, inst.limit, mu, None, inst.g)
print("nu_n(limit, g)  ", post["nu_limit"])
print("postcondition   ", post["holds"])

# Factorial steps on a grid of spacing 1/504: members from j = 7 on agree with
# the Dirichlet function there, so the Cauchy quantity vanishes for late
# windows, while the early members stay n apart from D in nu_n.
sp = two_point_space(1.0)
grid = sharpness_grid(4, 10)
seq = FunctionSequence([gen_factorial_step(sp, "x", "y", j, grid) for j in range(1, 9)])
print("Cauchy verdict  ", check_cauchy_condition(seq, 10, range(8))["verdict"])
D = gen_dirichlet(sp, "x", "y", grid)
print("nu_n(f_1, D)    ", nu_profile(seq[0], D, 10).values)
