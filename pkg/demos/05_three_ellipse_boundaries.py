"""
The 3-ellipse and its relaxations
=================================

An 8x8 symmetric pencil in (x, y, z) whose z = 1 slice is the set of points
with distance sum at most 8 to the foci (0,0), (0,4), (3,0).  The script
maximizes 200 linear functionals over the slice of each relaxation k = 0..3
and of the matching dual cones, and writes the optima as CSV files for
plotting.  Output goes to demos/output/.
"""

import csv
import os

import numpy as np

from hypercone import ConeSpec, SpectrahedralDeriv, spectrahedral_margin, three_ellipse_pencil
from hypercone.cli import boundary_rows

P = three_ellipse_pencil()
out = os.path.join(os.path.dirname(os.path.abspath(__file__)), "output")
os.makedirs(out, exist_ok=True)

# (3, 0) is a focus, so it lies on the curve: det vanishes there
M = P.matrix([3.0, 0.0, 1.0])
print(f"|det E(3,0,1)| / |E|^8 = {abs(np.linalg.det(M)) / np.linalg.norm(M, 2) ** 8:.1e}")
print(f"lambda_min E(0,0,1) = {np.linalg.eigvalsh(P.matrix([0, 0, 1]))[0]:.4f}")

count = 200
fields = ["theta", "dir_x", "dir_y", "x", "y", "objective", "status"]
for dual in (False, True):
    for k in range(4):
        spec = SpectrahedralDeriv(P, k)
        if dual:
            spec = ConeSpec("dual", inner=spec)
        rows = list(boundary_rows(spec, count))
        name = f"three_ellipse_{'dual_' if dual else ''}k{k}.csv"
        with open(os.path.join(out, name), "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=fields)
            w.writeheader()
            w.writerows(rows)
        pts = np.array([[r["x"], r["y"]] for r in rows])
        line = f"{name:<28} x in [{pts[:, 0].min():6.2f}, {pts[:, 0].max():6.2f}]  y in [{pts[:, 1].min():6.2f}, {pts[:, 1].max():6.2f}]"
        if not dual:
            worst = max(abs(spectrahedral_margin(P, k, [a, b, 1.0]).margin) for a, b in pts)
            line += f"  max |margin| {worst:.1e}"
        print(line)
