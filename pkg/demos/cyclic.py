"""Bordered cyclic generator: strong positivity is lost under any non-positive
perturbation of the off-diagonal, eventual strong positivity is not."""

import numpy as np

from evpos import classify_semigroup, is_metzler
from evpos.linalg import expm
from evpos.models import example_cyclic

for d in (3, 5):
    A, B = example_cyclic(d)
    print(f"d = {d}: spectrum {np.round(np.linalg.eigvalsh(A), 12)}")
    print("   min entry of e^{tA}:",
          {t: float(expm(A, t).min().round(6)) for t in (0.1, 1.0, 10.0)})
    for eps in (0.01, 0.1, 0.5):
        M = A + eps * B
        print(f"   eps = {eps}: Metzler = {is_metzler(M)}, "
              f"verdict = {classify_semigroup(M).verdict.value}")
