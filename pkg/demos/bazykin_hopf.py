"""Build a Bazykin Hopf point, check where it sits on the prey nullcline, and watch the cycle appear.

Run: python3 demos/bazykin_hopf.py
"""

from preyloc import bazykin_hopf, confirm_bifurcation, hopf_transversality, nullcline_profile

point = bazykin_hopf(k0=1.0, b=1.0, x0=1.0, r=1.0, sigma=1.0)
m = point.model
profile = nullcline_profile(m)

print("parameters:", dict(m.params.values))
print(f"Hopf at x* = {point.x_star}, critical a = {point.critical_param_value}")
print(f"trace = {point.spectral.trace:.3e}, det = {point.spectral.det:.4f}")
print(f"vertex x_v = {m['x_v']}, branch = {point.verdict.branch}")
print("branches:", profile.branches)

rate = hopf_transversality(point)
print(f"d Re(lambda)/da = {rate:.4f}: oscillations expected for a {'above' if rate > 0 else 'below'} the critical value")

conf = confirm_bifurcation(point)
print(f"a = {conf.below.param_value:.4f}: {conf.below.verdict.kind}")
print(f"a = {conf.above.param_value:.4f}: {conf.above.verdict.kind} (amplitude {conf.above.verdict.amplitude:.3f})")
