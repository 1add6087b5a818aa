"""
Building semidefinite representations and counting their size
==============================================================

Each relaxation is built by a chain of lifts.  The derivative step restricts
to the complement of the all-ones vector and drops one dimension; the polar
step keeps k and drops one dimension; matrix cones go through a Schur-Horn
lift to the vector case.  The size report lists every level of the chain.
"""

import numpy as np

from hypercone import ConeSpec, build_psd_deriv, build_schur_horn, size_report

# a short chain: orthant(4,1) is one restriction away from the 3x3 PSD cone
print(size_report(ConeSpec("orthant", 4, 1, "deriv")).table())
print()

# the Schur-Horn lift costs 2n^2 - n - 3; for n = 4 that is 25
print("Schur-Horn lift sizes:", [build_schur_horn(n).size() for n in range(2, 8)])

# psd_deriv(4,1) = 3 (inner PSD block) + 25 (lift) = 28
print(size_report(ConeSpec("psd", 4, 1, "deriv")).table())
print()

# the top relaxation psd_deriv(n,n-1) is the halfspace tr X >= 0.  Following
# the derivative chain all the way down is cubic in n; the halfspace costs 1.
ns = range(2, 13)
deriv = [build_psd_deriv(n, n - 1, "deriv").size() for n in ns]
polar = [build_psd_deriv(n, n - 1, "polar").size() for n in ns]
print("n     ", list(ns))
print("deriv ", deriv)
print("polar ", polar)
print("third differences of the derivative curve:", np.diff(deriv, 3))

# with the automatic strategy every (n, k) stays below about 2 min(k, n-k) n^2
ratios = [build_psd_deriv(n, k).size() / (min(k, n - k) * n * n) for n in ns for k in range(1, n)]
print(f"largest size / (min(k,n-k) n^2) for n <= 12: {max(ratios):.3f}")
