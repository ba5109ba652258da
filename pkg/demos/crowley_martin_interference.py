"""Predator interference moves the Hopf point along the ascending branch but never past the vertex.

Run: python3 demos/crowley_martin_interference.py
"""

import numpy as np

from preyloc import ModelInstance, cm_hopf_x, crowley_martin_c0, crowley_martin_hopf, nullcline_profile

m = ModelInstance.create("CrowleyMartin", rho=1, k=2, a=4, b=1, c=0.01, gamma=1, d=1)
x_v = m["x_v"]
print(f"vertex x_v = {x_v} (the same for every c)")

# critical interference as a function of prey density: positive only left of the vertex
for x in np.linspace(0.05, 1.5, 8):
    print(f"  x = {x:.3f}  c0 = {crowley_martin_c0(4, 1, 1, 1, x):+.5f}")

print("\nHopf prey coordinate as interference vanishes:")
for c in (1e-1, 1e-2, 1e-3, 1e-4):
    roots = cm_hopf_x(m, c)
    print(f"  c = {c:.0e}: x* = {roots[-1]:.6f}  (x_v - x* = {x_v - roots[-1]:.2e}); all roots {np.round(roots, 5)}")

point = crowley_martin_hopf(m, 0.3)
print(f"\nat x = 0.3: c0 = {point.critical_param_value:.6f}, gamma solved = {point.model['gamma']:.6f}")
print(f"trace = {point.spectral.trace:.2e}, det = {point.spectral.det:.4f}, branch = {point.verdict.branch}")
print("admissible interval:", (nullcline_profile(point.model).x_lo, nullcline_profile(point.model).x_hi))
