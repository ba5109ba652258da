"""The discrete Crowley-Martin map: Neimark-Sacker points on the descending branch, and one at the vertex.

At the vertex the map's prey diagonal entry is exactly 1, yet the determinant
can still reach 1: with gamma solved, c* = a r/((1 + r) h) puts a complex pair
on the unit circle there. Points slightly left of the vertex are then
ascending-branch Neimark-Sacker points.

Run: python3 demos/discrete_vertex_ns.py
"""

from preyloc import ModelInstance, confirm_bifurcation, ns_locus, ns_points_at, spectral_summary
from preyloc.spectral import condition_equilibrium

m = ModelInstance.create("DiscreteCrowleyMartin", rho=1, k=2, a=1, b=1, c=0.1, gamma=1, d=1)
x_v = m["x_v"]

print("Neimark-Sacker points with c = 0.1 (gamma solved along the nullcline):")
for p in ns_points_at(m):
    print(f"  x* = {p.x_star:.6f}  branch = {p.verdict.branch}  |trace| = {abs(p.spectral.trace):.4f}")

r = (1 - x_v / 2) / (1 + x_v)
h = (1 - x_v / 2) * (1 + x_v)
c_star = r / ((1 + r) * h)
mv = m.with_params(c=c_star)
cond, state = condition_equilibrium(mv, x_v)
s = spectral_summary(cond, state)
print(f"\nvertex: c* = {c_star:.6f}, J00 = {s.J11:.15f}, det = {s.det:.15f}, |lambda| = {[abs(v) for v in s.eigenvalues]}")

print("\nlocus in c over x in (0.4, 0.6):")
ascending = []
for p in ns_locus(m, "c", x_range=(0.4, 0.6), panels=9):
    print(f"  x* = {p.x_star:.4f}  c = {p.critical_param_value:.6f}  branch = {p.verdict.branch}")
    if p.verdict.branch == "ascending":
        ascending.append(p)

if ascending:
    conf = confirm_bifurcation(ascending[-1])
    print(f"\nsimulating around x* = {ascending[-1].x_star:.4f}:")
    print(f"  c = {conf.below.param_value:.6f}: {conf.below.verdict.kind}")
    print(f"  c = {conf.above.param_value:.6f}: {conf.above.verdict.kind}")
