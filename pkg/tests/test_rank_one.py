import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from evpos.errors import (
    NotAnEigenvector,
    NotEventuallyStronglyPositive,
    PerturbedSpectrum,
    PreconditionFailed,
    SingularResolvent,
    SpectralCollision,
)
from evpos.linalg import operator_norm, resolvent, spectral_projection
from evpos.models import example_cyclic, example_reflection_interval, build_f_epsilon
from evpos.positivity import Verdict, classify_semigroup, positivity_time
from evpos.rank_one import (
    Rank1,
    build_destroyer,
    destroyer_projection,
    destroyer_scan,
    resolvent_rank1,
    resolvent_rank1_eigen,
    semigroup_rank1,
)


def _rel(X, Y):
    return operator_norm(X - Y) / operator_norm(Y)


class TestRank1Type:
    def test_matrix_action_and_norm(self, rng):
        phi, v = rng.normal(size=4), rng.normal(size=4)
        p = Rank1(phi, v, 2.0)
        x = rng.normal(size=4)
        assert np.allclose(p.matrix() @ x, 2.0 * (phi @ x) * v)
        assert np.allclose(p(x), p.matrix() @ x)
        assert p.norm == pytest.approx(operator_norm(p.matrix()), rel=1e-12)

    def test_json_round_trip(self):
        p = Rank1([1.0, 0.5], [0.0, 2.0], 3.0)
        q = Rank1.from_dict(json.loads(json.dumps(p.to_dict())))
        assert np.array_equal(q.matrix(), p.matrix())

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            Rank1([1.0], [1.0, 2.0])


class TestResolventRank1:
    def test_zero_perturbation(self, A3):
        p = Rank1(np.zeros(3), np.ones(3))
        assert np.allclose(resolvent_rank1(A3, 1.0, p), resolvent(A3, 1.0))

    def test_scalar_by_hand(self):
        R = resolvent_rank1(np.zeros((1, 1)), 2.0, Rank1([1.0], [1.0]))
        assert R[0, 0] == pytest.approx(1.0)

    def test_random_against_direct_inverse(self, rng):
        for _ in range(50):
            A = rng.normal(size=(5, 5))
            p = Rank1(rng.normal(size=5), rng.normal(size=5))
            lam = np.max(np.linalg.eigvals(A).real) + 2.0
            R = resolvent_rank1(A, lam, p)
            ref = oracles.direct_resolvent(A + p.matrix(), lam)
            assert _rel(R, ref) <= 1e-10

    def test_singular_case(self, rng):
        A = rng.normal(size=(4, 4))
        p = Rank1(rng.normal(size=4), rng.normal(size=4))
        lam = np.linalg.eigvals(A + p.matrix())[0]
        with pytest.raises(PerturbedSpectrum):
            resolvent_rank1(A, lam, p)

    def test_conditioning_blows_up_towards_perturbed_spectrum(self, rng):
        A = np.diag([0.0, -1.0, -2.0])
        p = Rank1(np.array([1.0, 1.0, 1.0]), np.array([1.0, 0.5, 0.25]))
        root = np.max(np.linalg.eigvals(A + p.matrix()).real)
        last = 0.0
        for d in (1e-1, 1e-2, 1e-3, 1e-4):
            lam = root + d
            c = p.phi @ resolvent(A, lam) @ p.v
            cond = np.linalg.cond(lam * np.eye(3) - A - p.matrix())
            assert abs(1 - c) < 2 * d * 10
            assert cond > last
            last = cond


class TestResolventRank1Eigen:
    def test_matches_general_formula(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 9))
            A, v, lam0 = oracles.random_with_real_eigenpair(rng, n)
            phi = rng.normal(size=n)
            lam = np.max(np.abs(np.linalg.eigvals(A))) + 1.0 + abs(phi @ v)
            R1 = resolvent_rank1_eigen(A, lam, phi, v, lam0)
            R2 = resolvent_rank1(A, lam, Rank1(phi, v))
            assert _rel(R1, R2) <= 1e-9

    def test_zero_functional(self, A3):
        R = resolvent_rank1_eigen(A3, 1.0, np.zeros(3), np.ones(3), 0.0)
        assert np.allclose(R, resolvent(A3, 1.0))

    def test_reflection_model_boundary_formula(self):
        # R(lam, A + alpha K) f = R f + alpha/(lam - alpha) (R f)(-1) 1
        m = example_reflection_interval(33)
        f = build_f_epsilon(m, 0.25)
        alpha, lam = 0.3, 1.2
        e0 = np.zeros(m.n)
        e0[0] = 1.0
        R = resolvent_rank1_eigen(m.operator_A, lam, alpha * e0, np.ones(m.n), 0.0)
        Rf = resolvent(m.operator_A, lam) @ f
        assert np.allclose(R @ f, Rf + alpha / (lam - alpha) * Rf[0], atol=1e-12)

    def test_not_an_eigenvector(self, A3):
        with pytest.raises(NotAnEigenvector):
            resolvent_rank1_eigen(A3, 1.0, np.ones(3), np.array([1.0, 0.0, 0.0]), 0.0)

    def test_perturbed_spectrum(self, A3):
        with pytest.raises(PerturbedSpectrum):
            resolvent_rank1_eigen(A3, 3.0, np.ones(3), np.ones(3), 0.0)


class TestSemigroupRank1:
    def test_trivial_cases(self, A3):
        v = np.ones(3)
        phi = np.array([0.2, 0.1, 0.0])
        assert np.allclose(semigroup_rank1(A3, 0.0, phi, v, 0.0), np.eye(3), atol=1e-14)
        assert np.allclose(semigroup_rank1(A3, 1.5, phi, v, 0.0),
                           oracles.expm(A3 + np.outer(v, phi), 1.5), atol=1e-12)
        # phi = 0 puts mu = lam0 on the spectrum: no limit is taken
        with pytest.raises(SpectralCollision):
            semigroup_rank1(A3, 1.5, np.zeros(3), v, 0.0)

    def test_random_against_expm(self, rng):
        for _ in range(30):
            A, v, lam0 = oracles.random_with_real_eigenpair(rng, 5)
            phi = rng.normal(size=5)
            mu = phi @ v + lam0
            if np.min(np.abs(np.linalg.eigvals(A) - mu)) < 0.1:
                continue
            for t in (0.1, 1.0, 5.0):
                F = semigroup_rank1(A, t, phi, v, lam0)
                ref = oracles.expm(A + np.outer(v, phi), t)
                assert _rel(F, ref) <= 1e-9

    def test_semigroup_law(self, rng):
        A, v, lam0 = oracles.random_with_real_eigenpair(rng, 4, lam0=-0.5)
        phi = rng.uniform(size=4)
        for s, t in ((0.2, 0.7), (1.0, 2.5)):
            lhs = semigroup_rank1(A, s, phi, v, lam0) @ semigroup_rank1(A, t, phi, v, lam0)
            rhs = semigroup_rank1(A, s + t, phi, v, lam0)
            assert _rel(lhs, rhs) <= 1e-8

    def test_collision(self, A3):
        # <phi, v> + 0 = -1 is an eigenvalue of A
        with pytest.raises(SpectralCollision):
            semigroup_rank1(A3, 1.0, -np.ones(3) / 3, np.ones(3), 0.0)

    def test_negative_time(self, A3):
        with pytest.raises(PreconditionFailed):
            semigroup_rank1(A3, -1.0, np.ones(3), np.ones(3), 0.0)


class TestDestroyer:
    def test_construction_on_example(self, A3):
        B = build_destroyer(A3, 1.0, [0.0, 1.0, 0.0])
        assert B.alpha == pytest.approx(1.0)
        assert np.allclose(B.v, 1.0)
        w = np.linalg.eigvals(A3 + B.matrix())
        assert np.max(w.real) == pytest.approx(1.0, abs=1e-12)

    def test_projection_matches_contour(self, A3):
        for mu, phi in ((1.0, [0, 1, 0]), (4.0, [1, 0, 0]), (2.5, [1, 2, 0.5])):
            B = build_destroyer(A3, mu, phi)
            Q = destroyer_projection(A3, mu, B)
            P = spectral_projection(A3 + B.matrix(), mu, 0.5)
            assert np.max(np.abs(Q - P)) <= 1e-8

    def test_mixed_sign_projection_means_failure(self, A3):
        B = build_destroyer(A3, 4.0, [1.0, 0.0, 0.0])
        q = resolvent(A3, 4.0).T @ B.phi
        assert q.min() < 0 < q.max()
        assert classify_semigroup(A3 + B.matrix()).verdict == Verdict.NOT_EVENTUALLY_POSITIVE

    def test_preconditions(self, A3):
        with pytest.raises(PreconditionFailed):
            build_destroyer(A3, -0.5, [1.0, 0, 0])
        with pytest.raises(PreconditionFailed):
            build_destroyer(A3, 1.0, [1.0, -1.0, 0])
        with pytest.raises(NotEventuallyStronglyPositive):
            build_destroyer(np.diag([0.0, -1.0]), 1.0, [1.0, 1.0])

    def test_scan_on_example(self, A3):
        scan = destroyer_scan(A3)
        assert scan.found
        Q = scan.witness["projection"]
        assert Q.min() < 0 < Q.max()
        B = scan.witness["destroyer"].matrix()
        assert np.all(B >= 0)
        assert positivity_time(A3 + B, scan.witness["witness_vector"]) is None
        json.dumps(scan.to_dict())

    def test_scan_small_grid_finds_nothing_on_example(self, A3):
        # R(mu, A) >= 0 for mu <= 3; the sign change of R(mu, A)_{12} is at mu = 3
        assert not destroyer_scan(A3, [0.5, 1.0, 2.0]).found
        for mu in (0.5, 1.0, 2.0, 2.9):
            R = resolvent(A3, mu)
            assert R[0, 1] == pytest.approx((3 - mu) / (mu * (mu + 1) * (mu + 9)), rel=1e-10)

    @pytest.mark.parametrize("d", [3, 4, 6])
    def test_scan_on_metzler_cyclic(self, d):
        A, _ = example_cyclic(d)
        assert not destroyer_scan(A).found

    def test_destroyer_soundness(self, rng):
        # every returned destroyer yields a trajectory that never becomes positive
        for _ in range(10):
            A = rng.uniform(0.1, 1.0, size=(4, 4))
            A[0, 1] = -0.3
            if classify_semigroup(A).verdict != Verdict.EVENTUALLY_STRONGLY_POSITIVE:
                continue
            scan = destroyer_scan(A)
            if scan.found:
                B = scan.witness["destroyer"].matrix()
                assert positivity_time(A + B, scan.witness["witness_vector"]) is None


@given(st.integers(2, 6), st.integers(0, 2 ** 32 - 1))
def test_sherman_morrison_property(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n))
    p = Rank1(rng.normal(size=n), rng.normal(size=n))
    lam = complex(rng.normal() * 2, rng.normal() * 2)
    try:
        R = resolvent_rank1(A, lam, p)
    except (PerturbedSpectrum, SingularResolvent):
        return
    M = lam * np.eye(n) - A - p.matrix()
    if np.linalg.cond(M) > 1e8:
        return
    assert _rel(R, np.linalg.inv(M)) <= 1e-7
