"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import sys

import numpy as np
import pytest

import oracles
from evpos.errors import PerturbedSpectrum
from evpos.linalg import operator_norm
from evpos.models import (
    boundary_value_formula,
    build_f_epsilon,
    demo_hilbert_quantitative,
    demo_small_perturbation,
    example_counterexample_3d,
    example_cyclic,
    example_nonlocal_laplacian,
    example_reflection_interval,
)
from evpos.perturbation import (
    check_quantitative_theorem,
    eigencurve,
    eigenvalue_radius,
    halfplane_sup_norm,
    openness_probe,
    random_perturbation,
)
from evpos.positivity import Verdict, classify_semigroup, is_metzler, positivity_time
from evpos.rank_one import Rank1, destroyer_scan, resolvent_rank1, resolvent_rank1_eigen, \
    semigroup_rank1

ESP = Verdict.EVENTUALLY_STRONGLY_POSITIVE
NEP = Verdict.NOT_EVENTUALLY_POSITIVE
SEED = 20240531


def _conclude(capsys, number, title, checks):
    """Print one PASS/FAIL line for a criterion and assert all its checks."""
    failed = [name for name, ok in checks.items() if not ok]
    status = "FAIL" if failed else "PASS"
    detail = f" (failed: {', '.join(failed)})" if failed else ""
    with capsys.disabled():
        print(f"\n{status} criterion {number:2d}: {title}{detail}")
    assert not failed, failed


def _rel(X, Y):
    return operator_norm(X - Y) / operator_norm(Y)


def test_criterion_01_spectrum(capsys):
    A, _ = example_counterexample_3d()
    w, V = np.linalg.eig(A)
    order = np.argsort(-w.real)
    w, V = w[order], V[:, order]
    expected = [np.ones(3) / np.sqrt(3), np.array([1.0, -1.0, 0.0]) / np.sqrt(2),
                np.array([1.0, 1.0, -2.0]) / np.sqrt(6)]
    checks = {"eigenvalues": np.max(np.abs(w - [0, -1, -9])) <= 1e-10}
    for i, u in enumerate(expected):
        x = np.real(V[:, i])
        x = x / np.linalg.norm(x)
        checks[f"u{i + 1}"] = min(np.max(np.abs(x - u)), np.max(np.abs(x + u))) <= 1e-8
    _conclude(capsys, 1, "spectrum {0, -1, -9} and eigenvectors of the 3x3 generator", checks)


def test_criterion_02_perturbed_spectrum(capsys):
    A, B = example_counterexample_3d()
    M = A + 4 * B
    w = np.sort(np.linalg.eigvals(M).real)
    ref = np.sort([3.0, -(9 + np.sqrt(65)) / 2, -(9 - np.sqrt(65)) / 2])
    v = np.array([0.0, 3.0, 1.0])
    checks = {"eigenvalues": np.max(np.abs(w - ref)) <= 1e-10,
              "real": np.max(np.abs(np.linalg.eigvals(M).imag)) <= 1e-10,
              "eigenvector residual": np.max(np.abs(M @ v - 3 * v)) <= 1e-10}
    _conclude(capsys, 2, "spectrum of A + 4B and eigenvector (0, 3, 1)", checks)


def test_criterion_03_eigencurve_derivatives(capsys):
    A, B = example_counterexample_3d()

    def point(s):
        return eigencurve(A, B, [s], gauge=2, gauge_value=1.0)[0]

    p = point(4.0)
    h = 1e-3
    lo, hi = point(4.0 - h), point(4.0 + h)
    fd_lam = (hi.lambda_s - lo.lambda_s) / (2 * h)
    fd_u = (hi.u_s - lo.u_s) / (2 * h)
    du_exact = np.array([-3 / 40, 3 / 8, 0.0])
    checks = {"Rayleigh lambda'(4) = 9/10": abs(p.dlambda_ds - 0.9) <= 1e-12,
              "finite-difference lambda'(4)": abs(fd_lam - 0.9) <= 1e-5,
              "u'(4) exact": np.max(np.abs(p.du_ds - du_exact)) <= 1e-5,
              "u'(4) finite difference": np.max(np.abs(fd_u - du_exact)) <= 1e-5,
              "solver u' vs finite difference": np.max(np.abs(fd_u - p.du_ds)) <= 1e-5}
    _conclude(capsys, 3, "eigencurve derivatives at s = 4", checks)


def test_criterion_04_classification_flip(capsys):
    A, B = example_counterexample_3d()
    checks = {}
    for s in (0.0, 2.0, 3.9):
        checks[f"s={s} ESP"] = classify_semigroup(A + s * B).verdict == ESP
    for s in (4.05, 4.2):
        checks[f"s={s} NEP"] = classify_semigroup(A + s * B).verdict == NEP
    _conclude(capsys, 4, "classification flip along A + sB", checks)


def test_criterion_05_rank_one_formulas(capsys):
    rng = np.random.default_rng(SEED)
    worst = {"general": 0.0, "eigen": 0.0, "semigroup": 0.0}
    n_sg = 0
    agree = True
    singular_seen = 0
    while n_sg < 500:
        n = int(rng.integers(2, 9))
        A, v, lam0 = oracles.random_with_real_eigenpair(rng, n)
        phi = rng.normal(size=n)
        P = np.outer(v, phi)
        spec = np.linalg.eigvals(A + P)
        lam = complex(np.max(spec.real) + rng.uniform(0.5, 2.0), rng.normal())
        ref = oracles.direct_resolvent(A + P, lam)
        worst["general"] = max(worst["general"], _rel(resolvent_rank1(A, lam, Rank1(phi, v)), ref))
        worst["eigen"] = max(worst["eigen"],
                             _rel(resolvent_rank1_eigen(A, lam, phi, v, lam0), ref))
        # singular case: lam on the perturbed spectrum <=> <phi, R(lam, A) v> = 1
        new = [z for z in spec if np.min(np.abs(np.linalg.eigvals(A) - z)) > 0.1]
        if new:
            z = new[0]
            c = phi @ oracles.direct_resolvent(A, z) @ v
            try:
                resolvent_rank1(A, z, Rank1(phi, v))
                raised = False
            except PerturbedSpectrum:
                raised = True
            agree &= raised == (abs(1 - c) < 1e-8 * (1 + abs(c)))
            singular_seen += raised
            # and off the perturbed spectrum nothing is raised
            agree &= abs(1 - phi @ oracles.direct_resolvent(A, lam) @ v) > 1e-8
        mu = phi @ v + lam0
        if np.min(np.abs(np.linalg.eigvals(A) - mu)) < 0.1:
            continue  # near-collision: the closed form is ill-conditioned there
        t = float(rng.uniform(0.1, 3.0))
        F = semigroup_rank1(A, t, phi, v, lam0)
        worst["semigroup"] = max(worst["semigroup"], _rel(F, oracles.expm(A + P, t)))
        n_sg += 1
    checks = {f"{k} max rel err {e:.1e}": e <= 1e-9 for k, e in worst.items()}
    checks["singular-case detection"] = bool(agree)
    checks[f"singular cases exercised ({singular_seen})"] = singular_seen >= 100
    _conclude(capsys, 5, "rank-one resolvent and semigroup formulas on 500 instances", checks)


def test_criterion_06_radius_soundness(capsys):
    rng = np.random.default_rng(SEED + 6)
    violations = trials = 0
    while trials < 500:
        n = int(rng.integers(2, 7))
        A, _, lam0 = oracles.random_with_real_eigenpair(rng, n)
        dist = np.sort(np.abs(np.linalg.eigvals(A) - lam0))
        if dist[1] < 0.05:
            continue
        r = 0.5 * dist[1]
        eps = eigenvalue_radius(A, lam0, r)
        for _ in range(5):
            B = random_perturbation(n, rng.uniform(0.0, 1.0) * eps, rng)
            w = np.linalg.eigvals(A + B)
            inside = w[np.abs(w - lam0) < r]
            ok = inside.size == 1 and abs(inside[0].imag) <= 1e-10 * max(1, abs(inside[0]))
            violations += not ok
            trials += 1
    _conclude(capsys, 6, f"radius soundness on {trials} trials ({violations} violations)",
              {"zero violations": violations == 0})


def test_criterion_07_quantitative_theorem(capsys):
    A, _ = example_counterexample_3d()
    lam1 = 0.5
    M = halfplane_sup_norm(A, lam1)
    rng = np.random.default_rng(SEED + 7)
    violations = 0
    sA = np.max(np.linalg.eigvalsh(A))
    for _ in range(100):
        K = random_perturbation(3, 0.9 / M, rng, nonneg=True)
        rep = check_quantitative_theorem(A, K, lam1)
        sAK = np.max(np.linalg.eigvals(A + K).real)
        mesh = sAK + (lam1 - sAK) * np.arange(1, 33) / 33
        positive = all(np.min(oracles.direct_resolvent(A + K, lam).real) > 0 for lam in mesh)
        ok = rep.holds and sA < sAK < lam1 and positive
        violations += not ok
    checks = {"M = 2": abs(M - 2.0) <= 1e-12, "zero violations": violations == 0}
    _conclude(capsys, 7, f"half-plane theorem on 100 positive K ({violations} violations)",
              checks)


def test_criterion_08_reflection_model(capsys):
    rng = np.random.default_rng(SEED + 8)
    checks = {}
    m = example_reflection_interval(65)
    f = rng.normal(size=m.n)
    err = max(np.max(np.abs(np.linalg.solve(lam * np.eye(m.n) - m.operator_A, f)
                            - m.oracle(lam, f))) for lam in (0.3, 1.0, 2.5))
    checks["resolvent vs closed form"] = err <= 1e-10
    eps = 0.3
    for lam in (0.5, 1.0, 2.0):
        errs = []
        for n in (33, 65, 129):
            mn = example_reflection_interval(n)
            g = np.linalg.solve(lam * np.eye(n) - mn.operator_A, build_f_epsilon(mn, eps))
            errs.append(abs(g[0] - boundary_value_formula(lam, eps)))
        orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
        checks[f"boundary value order >= 1 at lam={lam}"] = bool(np.all(orders >= 1))
    fe = build_f_epsilon(m, 0.02)
    K = m.extras["K"]
    for alpha in (0.1, 1.0):
        limit = alpha * m.oracle(alpha, fe)[0]
        rep = demo_small_perturbation(m, alpha, 0.02)
        traj = np.exp(-200 * alpha) * (oracles.expm(m.operator_A + alpha * K, 200.0) @ fe)
        checks[f"alpha={alpha} negative limit"] = limit < 0
        checks[f"alpha={alpha} oracle at t=200"] = np.max(np.abs(traj - limit)) <= 1e-6
        checks[f"alpha={alpha} closed form at t=200"] = rep.terminal_error <= 1e-6 \
            and abs(rep.limit_value - limit) <= 1e-10 and rep.positivity_lost
    _conclude(capsys, 8, "reflection-interval model", checks)


def test_criterion_09_nonlocal_laplacian(capsys):
    checks = {}

    def f(x):
        return np.cos(3 * x) + x ** 2

    for n in (32, 64, 128):
        m = example_nonlocal_laplacian(n)
        G = m.operator_A
        checks[f"s < 0 (n={n})"] = np.max(np.linalg.eigvals(G).real) < 0
        R0 = np.linalg.inv(-G)
        checks[f"||R(0)|| <= 1 + 10/n (n={n})"] = m.weighted_norm(R0) <= 1 + 10 / n
        rep = classify_semigroup(G)
        checks[f"ESP and not Metzler (n={n})"] = rep.verdict == ESP and not is_metzler(G)
    # convergence study on nested grids (h halves exactly), compared at the
    # interior nodes shared by all levels
    errs = []
    for n in (33, 65, 129):
        m = example_nonlocal_laplacian(n)
        idx = np.arange(0, n, (n - 1) // 32)
        x = m.grid[idx]
        inner = (x > 0.1) & (x < 0.9)
        e = np.abs(np.linalg.solve(-m.operator_A, f(m.grid)) - m.oracle(f, m.grid))[idx]
        errs.append(np.max(e[inner]))
    orders = np.log2(np.array(errs[:-1]) / errs[1:])
    checks[f"kernel oracle order >= 2 ({', '.join(f'{o:.4f}' for o in orders)})"] = \
        bool(np.all(orders >= 2))
    m = example_nonlocal_laplacian(64)
    rng = np.random.default_rng(SEED + 9)
    kept = 0
    for _ in range(20):
        B = random_perturbation(m.n, 0.5, rng, nonneg=True, symmetric=True)
        kept += demo_hilbert_quantitative(m, B).verdict == ESP.value
    checks["verdict kept under 20 perturbations"] = kept == 20
    _conclude(capsys, 9, "non-local Laplacian", checks)


def test_criterion_10_cyclic(capsys):
    A, B = example_cyclic(3)
    M = np.rint(np.sqrt(2) * A).astype(np.int64)
    even = np.array([[1, 1, 0], [1, 1, 0], [0, 0, 2]])  # 2 A^2
    checks = {"scaled integer matrix": np.max(np.abs(np.sqrt(2) * A - M)) <= 1e-12}
    for k in (1, 2, 3):
        # (sqrt 2 A)^m = 2^{m/2} A^m
        checks[f"A^{2 * k}"] = np.array_equal(np.linalg.matrix_power(M, 2 * k), 2 ** (k - 1) * even)
        checks[f"A^{2 * k + 1}"] = np.array_equal(np.linalg.matrix_power(M, 2 * k + 1), 2 ** k * M)
        checks[f"A^{2 * k} float"] = np.max(np.abs(np.linalg.matrix_power(A, 2 * k)
                                                   - even / 2)) <= 1e-12
    for t in (0.1, 1.0, 10.0):
        checks[f"e^(tA) >> 0 at t={t}"] = np.min(oracles.expm(A, t)) > 0
    P = A + 0.01 * B
    checks["perturbed not Metzler"] = not is_metzler(P)
    checks["perturbed ESP"] = classify_semigroup(P).verdict == ESP
    _conclude(capsys, 10, "bordered cyclic example", checks)


def test_criterion_11_openness(capsys):
    A, _ = example_counterexample_3d()
    res = openness_probe(A, n_trials=200, scale=0.5, seed=SEED)
    _conclude(capsys, 11, f"openness probes at half radius (fraction {res.fraction:.3f})",
              {"fraction = 1.0": res.fraction == 1.0})


def test_criterion_12_destroyer(capsys):
    A, _ = example_counterexample_3d()
    scan = destroyer_scan(A)
    checks = {"destroyer found": scan.found}
    if scan.found:
        w = scan.witness
        Bm = w["destroyer"].matrix()
        Q = w["projection"]
        checks["destroyer >= 0, rank one"] = bool(np.all(Bm >= 0)) \
            and np.linalg.matrix_rank(Bm) == 1
        checks["mixed-sign projection"] = Q.min() < 0 < Q.max()
        checks["oracle projection mixed sign"] = (lambda P: P.min() < 0 < P.max())(
            np.real(oracles.eigen_projection(A + Bm, w["mu"])))
        checks["positivity time not found"] = positivity_time(A + Bm, w["witness_vector"]) is None
    rng = np.random.default_rng(SEED + 12)
    found = 0
    for _ in range(50):
        n = int(rng.integers(2, 6))
        G = rng.uniform(0.0, 1.0, size=(n, n))
        np.fill_diagonal(G, rng.normal(size=n) * 2)
        found += destroyer_scan(G, mu_offsets=[0.5, 1.0, 2.0], phi_basis=np.eye(n)).found
    checks["no destroyer for 50 Metzler generators"] = found == 0
    _conclude(capsys, 12, "destroyer existence and Metzler immunity", checks)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
