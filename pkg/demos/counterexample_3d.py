"""A 3x3 generator whose eventual strong positivity is destroyed along A + sB.

Prints the verdict for a few values of s, the eigencurve through the
boundary point s = 4 and a positive rank-one perturbation that destroys
eventual positivity.
"""

import numpy as np

from evpos import classify_semigroup, destroyer_scan, eigencurve
from evpos.models import example_counterexample_3d

A, B = example_counterexample_3d()
print("spectrum of A:", np.round(np.linalg.eigvalsh(A)[::-1], 12))

for s in (0.0, 2.0, 3.9, 4.0, 4.05, 4.2):
    rep = classify_semigroup(A + s * B)
    print(f"s = {s:5.2f}: {rep.verdict.value:28s} min P entry = {rep.projection_min_entry:+.3e}")

print("\neigencurve (gauge: third component = 1)")
for p in eigencurve(A, B, np.linspace(3.8, 4.2, 5), gauge=2, gauge_value=1.0):
    print(f"s = {p.s:4.2f}  lambda = {p.lambda_s:.6f}  lambda' = {p.dlambda_ds:.6f}  "
          f"u = {np.round(p.u_s, 6)}")

scan = destroyer_scan(A)
w = scan.witness
print(f"\ndestroyer at mu = {w['mu']}: B = {np.round(w['destroyer'].matrix(), 4).tolist()}")
print("perturbed dominant projection:\n", np.round(w["projection"], 4))
