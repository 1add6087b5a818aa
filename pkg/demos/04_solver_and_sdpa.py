"""
The interior-point solver and the SDPA file format
==================================================

Any representation becomes an optimization problem once an objective and
some equalities are attached.  Problems round-trip through the SDPA sparse
format, so they can be handed to other solvers.
"""

import os
import tempfile

import numpy as np

from hypercone import (AffineMatrixMap, AffineScalar, SdpProblem, build_orthant, read_sdpa, solve,
                       write_sdpa)
from hypercone.lmi import problem_from_representation, sym_pairs, svec_len

rng = np.random.default_rng(2)

# smallest eigenvalue as an SDP: min <C, X> over tr X = 1, X PSD
n = 6
G = rng.standard_normal((n, n))
C = G + G.T
X = AffineMatrixMap.symmetric_variable(n, 0)
objective = AffineScalar.linear(range(svec_len(n)), [C[i, j] * (1.0 if i == j else 2.0) for i, j in sym_pairs(n)])
problem = SdpProblem(svec_len(n), [X], [X.trace() - 1.0], objective)
report = solve(problem)
print(f"{report.status}: {report.objective_value:.10f}  eigvalsh: {np.linalg.eigvalsh(C)[0]:.10f}"
      f"  ({report.iterations} iterations)")

# an optimization over a relaxation: min x_1 over orthant(3,1) with sum 1.
# Along x_2 = x_3 the constraint is (1 - x_1)(3 x_1 + 1) / 4 >= 0, so -1/3.
rep = build_orthant(3, 1)
p = problem_from_representation(rep, AffineScalar.var(0), "min", [AffineScalar.linear(range(3), [1, 1, 1], -1.0)])
r = solve(p)
print(f"min x_1 = {r.objective_value:.8f} at", np.round(r.primal_point[:3], 6))

# round trip through an SDPA file and solve again
path = os.path.join(tempfile.mkdtemp(), "orthant31.dat-s")
write_sdpa(p, path)
print(open(path).read().splitlines()[0])
print("re-solved from file:", f"{solve(read_sdpa(path)).objective_value:.8f}")

# infeasible and unbounded problems are reported as such
Y = AffineMatrixMap.symmetric_variable(3, 0)
print("PSD with tr Y = -1:", solve(SdpProblem(6, [Y], [Y.trace() + 1.0], AffineScalar())).status)
print("min -tr Y over PSD:", solve(SdpProblem(6, [Y], [], -Y.trace())).status)
