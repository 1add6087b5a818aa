"""
Derivative relaxations and their polynomial oracles
===================================================

The k-th relaxation of the nonnegative orthant keeps only the first n-k
elementary symmetric inequalities.  The oracle module evaluates those
inequalities directly, without any optimization.
"""

import numpy as np

from hypercone import check_main_identity, check_polar_identity, elem_sym, orthant_margin, psd_deriv_margin

# e_k of the all-ones vector is a binomial coefficient
print("e_2(1,1,1,1) =", elem_sym(np.ones(4), 2))

# (2, 2, -1) sits on the boundary of the first relaxation in R^3:
# e_1 = 3 but e_2 = 4 - 2 - 2 = 0
x = np.array([2.0, 2.0, -1.0])
for k in range(4):
    v = orthant_margin(x, k)
    print(f"k={k}: margin={v.margin:+.3f} binding e_{v.binding_index} -> {v.decision}")

# the same point as a rotated diagonal matrix gives the same verdict
rng = np.random.default_rng(0)
Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
print("rotated matrix, k=1:", psd_deriv_margin(Q @ np.diag(x) @ Q.T, 1).decision)

# the relaxations grow with k: every margin is nondecreasing in k
y = rng.standard_normal(6)
print("margins along k:", np.round([orthant_margin(y, k).margin for k in range(7)], 3))

# the two polynomial identities behind the recursions, checked at random points
worst = max(check_main_identity(rng.uniform(-2, 2, n), rng.uniform(-2, 2)) for n in range(2, 9) for _ in range(20))
print(f"restriction identity, worst relative error {worst:.1e}")
worst = max(check_polar_identity(rng.uniform(-2, 2, n), k) for n in range(2, 9) for k in range(n))
print(f"polar identity, worst relative error {worst:.1e}")
