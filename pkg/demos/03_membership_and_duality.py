"""
Membership through the representation, and the dual cones
=========================================================

A slice-form representation decides membership by a feasibility margin: fix
the point, maximize a uniform shift of all blocks.  Dual cones come out as
projections of lifted sets, so they are decided by a projection distance and
sampled by maximizing random linear functionals.
"""

import numpy as np

from hypercone import (build_orthant, build_orthant_dual, build_psd_deriv_dual, dual_pairing_min,
                       elem_sym, member, orthant_margin, sample_members, svec)

rng = np.random.default_rng(1)

# the representation and the oracle agree on random points
rep = build_orthant(5, 2)
for _ in range(5):
    x = rng.uniform(-1, 1) + rng.standard_normal(5)
    print(f"oracle {orthant_margin(x, 2).decision:<8} representation {member(rep, x).decision}")

# the dual of the top relaxation {e_1 >= 0} is the ray through 1
top = build_orthant_dual(4, 3)
print("2*1 in dual:", member(top, 2 * np.ones(4)).decision,
      "  (1.5,1,1,1) in dual:", member(top, [1.5, 1, 1, 1]).decision)

# the gradient of e_{n-k} at an interior point is a dual member
x = np.array([1.0, 2.0, 0.5, 3.0])
# d e_3 / d x_i = e_2 of the remaining coordinates
grad = np.array([elem_sym(np.delete(x, i), 2) for i in range(4)])
print("gradient of e_3 in dual of orthant(4,1):", member(build_orthant_dual(4, 1), grad / np.linalg.norm(grad)).decision)

# pairing: sampled dual members against primal members from the oracle
duals = sample_members(build_orthant_dual(4, 1), rng, 40, np.ones(4))
primals = []
while len(primals) < 200:
    x = rng.uniform(0, 2) + rng.standard_normal(4)
    if orthant_margin(x, 1).margin >= 0:
        primals.append(x)
print(f"min <w, x> over 40 x 200 pairs: {dual_pairing_min(duals, primals):.2e}")

# the diagonal of a dual matrix cone is the dual of the vector cone
W = sample_members(build_psd_deriv_dual(3, 1), rng, 3, svec(np.eye(3)))
for w in W:
    d = w[[0, 3, 5]]
    print("diagonal of a dual matrix member:", np.round(d, 3), "->",
          member(build_orthant_dual(3, 1), d).decision)
