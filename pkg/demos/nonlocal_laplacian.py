"""Laplacian with non-local boundary conditions: not positive, but eventually
strongly positive; discretization compared with the kernel formula."""

import numpy as np

from evpos import classify_semigroup, is_metzler
from evpos.models import example_nonlocal_laplacian


def f(x):
    return np.cos(3 * x) + x ** 2


for n in (17, 33, 65, 129):
    m = example_nonlocal_laplacian(n)
    G = m.operator_A
    R0 = np.linalg.inv(-G)
    err = np.max(np.abs(R0 @ f(m.grid) - m.oracle(f, m.grid)))
    print(f"n = {n:4d}: s = {np.max(np.linalg.eigvals(G).real):+.6f}, "
          f"||R(0)||_W = {m.weighted_norm(R0):.6f}, kernel error = {err:.3e}, "
          f"Metzler = {is_metzler(G)}, verdict = {classify_semigroup(G).verdict.value}")
