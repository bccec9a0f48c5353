"""Reflection model on [-1, 1]: an arbitrarily small rank-one perturbation
makes the trajectory of f_eps eventually negative."""

import numpy as np

from evpos.models import (
    boundary_value_formula,
    demo_small_perturbation,
    example_reflection_interval,
)

model = example_reflection_interval(65)
eps = 0.02
for alpha in (0.0, 0.1, 1.0):
    rep = demo_small_perturbation(model, alpha, eps, t_grid=np.linspace(0, 200, 9))
    if alpha == 0:
        print(f"alpha = 0: positivity time of f_eps = {rep.positivity_time:.4g}")
        continue
    print(f"alpha = {alpha}: (R(alpha, A) f)(-1) = {rep.boundary_value:+.6f} "
          f"(continuum {boundary_value_formula(alpha, eps):+.6f}), limit {rep.limit_value:+.6f}")
    for t, lo, hi in zip(rep.times, rep.min_entries, rep.max_entries):
        print(f"   t = {t:6.1f}  min = {lo:+.6f}  max = {hi:+.6f}")
