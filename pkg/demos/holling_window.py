"""Holling IV with the nullcline tied to h10: the Hopf window and the search for a double-zero point.

Run: python3 demos/holling_window.py
"""

import numpy as np

from preyloc import holling4_bt, holling4_hopf_branch, holling4_hopf_window

h10 = 1.0
rep = holling4_hopf_window(h10, n_samples=5)
print(f"h10 = {h10}: x_min = {rep.x_min:.4f}, x_max = {rep.x_max:.4f}, nullcline reaches zero at {rep.x_hi:.4f}")
for label, rows in (("left", rep.left), ("inside", rep.inside), ("right", rep.right)):
    print(f"  {label}:")
    for x, q in rows:
        print(f"    x = {x:.4f}  y0 = {q.y0:+.4f}  delta0 = {q.delta_eff0:+.4f}  beta0 = {q.beta0:+.4f}  det = {q.det:+.5f}")

print("\nbranch at x = 0.25:", holling4_hopf_branch(h10, 0.25))

failures = []
grid = np.linspace(0.02, 0.3, 8)
points = holling4_bt(grid, failures)
print(f"\ndouble-zero search on {len(grid)} prey values: {len(points)} admissible points")
for x0, reason in failures[:3]:
    print(f"  x0 = {x0:.3f}: {reason}")
