"""Concrete generators: small explicit matrices and two discretized operators.

Each builder is deterministic.  The discretized models carry an independent
closed-form oracle so that their numerics can be checked against exact
formulas:

* the reflection model on ``[-1, 1]``: ``A = 0`` on constants and
  ``-2I - S`` (``S`` the reflection ``f(x) -> f(-x)``) on mean-zero
  functions, perturbed by the point evaluation at ``-1``;
* the Laplacian ``-u''`` on ``(0, 1)`` with the non-local boundary
  conditions ``u'(0) = -u'(1) = u(0) + u(1)``.
"""

from __future__ import annotations

import csv
import io as _io
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import (
    BadGridSize,
    DimensionTooSmall,
    EpsilonOutOfRange,
    NonPositiveParameters,
    NormTooLarge,
    PerturbedSpectrum,
    PreconditionFailed,
)
from .io import jsonable
from .linalg import DEFAULT_TOL, Tolerances, expm, operator_norm, resolvent
from .positivity import (
    ConeVector,
    Verdict,
    _relative_min,
    classify_semigroup,
    is_metzler,
    positivity_time,
)
from .rank_one import resolvent_rank1_eigen, semigroup_rank1


@dataclass
class DiscretizedModel:
    """A generator on a grid together with its quadrature and exact oracle.

    ``extras`` holds model specific pieces (the reflection permutation, the
    averaging projection, the un-negated Laplacian, ...).
    """

    name: str
    n: int
    grid: np.ndarray
    operator_A: np.ndarray
    cone_u: ConeVector
    quadrature_weights: np.ndarray
    oracle: Callable = None
    extras: dict = field(default_factory=dict)

    def inner(self, f, g) -> float:
        """Trapezoid-weighted inner product."""
        return float(np.sum(self.quadrature_weights * f * g))

    def weighted_norm(self, M) -> float:
        """Operator norm of ``M`` in the trapezoid-weighted L2 space."""
        r = np.sqrt(self.quadrature_weights)
        return operator_norm(r[:, None] * M / r[None, :])


def trapezoid_weights(x) -> np.ndarray:
    """Composite trapezoid weights on the (possibly non-uniform) nodes ``x``."""
    dx = np.diff(x)
    w = np.zeros(len(x))
    w[:-1] += dx / 2
    w[1:] += dx / 2
    return w


# --- three-dimensional counterexample ----------------------------------------

def example_counterexample_3d():
    """Symmetric 3x3 generator with spectrum ``{0, -1, -9}`` and the direction ``B = e2 e2^T``.

    ``e^{tA}`` is eventually strongly positive but not positive; along
    ``A + sB`` the dominant eigenvector loses strict positivity at ``s = 4``
    (eigenvector ``(0, 3, 1)`` for eigenvalue 3) and positivity is lost
    altogether just beyond.
    """
    A = np.array([[-2.0, -1.0, 3.0],
                  [-1.0, -2.0, 3.0],
                  [3.0, 3.0, -6.0]])
    B = np.zeros((3, 3))
    B[1, 1] = 1.0
    return A, B


def example_positive_family(a, s) -> np.ndarray:
    """``C_{a,s}``: ``s`` in the centre, ``a`` everywhere else.

    ``a >= 0`` is accepted (``a = 0`` recovers ``s B``); ``s`` must be
    positive.
    """
    if not (a >= 0 and s > 0):
        raise NonPositiveParameters(f"need a >= 0 and s > 0, got a={a!r}, s={s!r}")
    C = np.full((3, 3), float(a))
    C[1, 1] = float(s)
    return C


def positive_family_threshold(s=4.05, a_max=1.0, iterations=50,
                              tol: Tolerances = DEFAULT_TOL) -> float:
    """Largest ``a`` (found by bisection) for which ``A + C_{a,s}`` stays not eventually positive.

    ``A`` is the 3x3 counterexample.  Every ``a`` in ``[0, threshold)`` gives
    a strongly positive ``C_{a,s}`` whose sum with ``A`` is not eventually
    positive (for ``a > 0``).
    """
    A, _ = example_counterexample_3d()

    def bad(a):
        return classify_semigroup(A + example_positive_family(a, s), tol).verdict \
            == Verdict.NOT_EVENTUALLY_POSITIVE

    if not bad(0.0):
        raise PreconditionFailed(f"A + sB is not certified non-eventually-positive at s={s}")
    if bad(a_max):
        return float(a_max)
    lo, hi = 0.0, float(a_max)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if bad(mid):
            lo = mid
        else:
            hi = mid
    return lo


# --- reflection model on [-1, 1] ------------------------------------------

def example_reflection_interval(n=65) -> DiscretizedModel:
    """Reflection model on ``n`` (odd) equispaced nodes of ``[-1, 1]``.

    ``phi`` is the trapezoid functional (``<phi, 1> = 2``),
    ``Pi = 1 phi / 2`` the averaging projection, ``S`` the reflection
    permutation and ``A = (-2I - S)(I - Pi)``; hence ``A 1 = 0`` and ``A``
    acts as ``-2I - S`` on ``ker phi``.  The construction is exact on the
    grid, and ``oracle(lam, f)`` evaluates the closed-form resolvent
    ``Pi f / lam + ((lam + 2) I - S)(I - Pi) f / ((lam + 2)^2 - 1)``.
    The perturbation direction ``K = 1 delta_{-1}`` is ``extras["K"]``.
    """
    if not isinstance(n, (int, np.integer)) or n < 3 or n % 2 == 0:
        raise BadGridSize(f"n must be an odd integer >= 3, got {n!r}")
    x = np.linspace(-1.0, 1.0, n)
    phi = trapezoid_weights(x)
    ones = np.ones(n)
    Pi = np.outer(ones, phi) / 2.0
    S = np.eye(n)[::-1]
    eye = np.eye(n)
    A = (-2.0 * eye - S) @ (eye - Pi)
    K = np.zeros((n, n))
    K[:, 0] = 1.0

    def oracle(lam, f):
        f = np.asarray(f, dtype=float)
        g = f - Pi @ f
        return Pi @ f / lam + ((lam + 2.0) * g - S @ g) / ((lam + 2.0) ** 2 - 1.0)

    return DiscretizedModel("reflection-interval", int(n), x, A, ConeVector(ones, ones),
                            phi, oracle, {"phi": phi, "Pi": Pi, "S": S, "K": K})


def build_f_epsilon(model: DiscretizedModel, eps) -> np.ndarray:
    """Ramp supported on ``[1 - 2 eps, 1]`` rising linearly to 1 at ``x = 1``.

    In the continuum ``f(1) = 1``, ``f(-1) = 0`` and the integral is ``eps``;
    on the grid the integral is exact up to the trapezoid error of the kink.
    """
    if not 0 < eps < 1:
        raise EpsilonOutOfRange(f"eps must lie in (0, 1), got {eps!r}")
    x = model.grid
    return np.clip((x - (1.0 - 2.0 * eps)) / (2.0 * eps), 0.0, None)


def boundary_value_formula(lam, eps) -> float:
    """Continuum value of ``(R(lam, A) f_eps)(-1)`` for the reflection model."""
    return 0.5 * eps * (1.0 / lam - 1.0 / (lam + 3.0)) - 1.0 / ((lam + 2.0) ** 2 - 1.0)


@dataclass
class SmallPerturbationReport:
    """Trajectory of ``e^{-t alpha} e^{t(A + alpha K)} f_eps`` in the reflection model."""

    alpha: float
    epsilon: float
    boundary_value: float
    limit_value: float
    spectral_bound: float
    pole_detected: bool
    times: list
    min_entries: list
    max_entries: list
    terminal_error: float
    positivity_lost: bool
    positivity_time: float = None

    def to_dict(self) -> dict:
        return jsonable(asdict(self))

    def to_csv(self) -> str:
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "min_entry", "max_entry"])
        for row in zip(self.times, self.min_entries, self.max_entries):
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def demo_small_perturbation(model: DiscretizedModel, alpha, eps, t_grid=None,
                            tol: Tolerances = DEFAULT_TOL) -> SmallPerturbationReport:
    """Loss of eventual positivity under the small perturbation ``alpha K``.

    With ``v = 1`` (``A v = 0``) and ``phi = alpha delta_{-1}``, the closed
    forms give ``s(A + alpha K) = alpha`` and
    ``e^{-t alpha} e^{t(A + alpha K)} f -> alpha (R(alpha, A) f)(-1) 1``.  When
    ``(R(alpha, A) f_eps)(-1) < 0`` the limit is strictly negative, so the
    trajectory is eventually entrywise negative.  For ``alpha = 0`` the
    unperturbed trajectory is reported together with its positivity time.
    """
    if model.name != "reflection-interval":
        raise PreconditionFailed("demo_small_perturbation needs the reflection model")
    if alpha < 0:
        raise PreconditionFailed("alpha must be nonnegative")
    A = model.operator_A
    n = model.n
    f = build_f_epsilon(model, eps)
    t_grid = np.linspace(0.0, 200.0, 41) if t_grid is None else np.asarray(t_grid, float)
    ones = np.ones(n)
    e0 = np.zeros(n)
    e0[0] = 1.0
    if alpha == 0:
        traj = [expm(A, t, tol=tol) @ f for t in t_grid]
        limit = model.extras["Pi"] @ f
        return SmallPerturbationReport(
            0.0, float(eps), float("nan"), float(limit[0]), 0.0, False, list(t_grid),
            [float(x.min()) for x in traj], [float(x.max()) for x in traj],
            float(np.max(np.abs(traj[-1] - limit))), bool(traj[-1].max() < 0),
            positivity_time(A, f, tol=tol))
    rf = float((resolvent(A, alpha, tol) @ f)[0])
    if not rf < 0:
        raise PreconditionFailed(f"(R(alpha, A) f_eps)(-1) = {rf:.6g} is not negative; "
                                 "decrease eps", boundary_value=rf)
    phi = alpha * e0
    # the perturbed resolvent has its pole exactly at lam = alpha
    try:
        resolvent_rank1_eigen(A, alpha, phi, ones, 0.0, tol)
        pole = False
    except PerturbedSpectrum:
        pole = True
    sb = float(np.max(np.linalg.eigvals(A + alpha * model.extras["K"]).real))
    traj = [np.exp(-t * alpha) * (semigroup_rank1(A, t, phi, ones, 0.0, tol) @ f)
            for t in t_grid]
    limit = alpha * rf
    return SmallPerturbationReport(
        float(alpha), float(eps), rf, limit, sb, pole, list(t_grid),
        [float(x.min()) for x in traj], [float(x.max()) for x in traj],
        float(np.max(np.abs(traj[-1] - limit))), bool(traj[-1].max() < 0))


# --- cyclic example ----------------------------------------------------------

def example_cyclic(d=3):
    """Bordered generator ``A`` (last row and column ``1/sqrt(d-1)``) and direction ``B``.

    ``A`` is Metzler with ``e^{tA} >> 0`` for ``t > 0`` and spectrum
    ``{-1, 0, 1}``.  ``B`` has ``-1/sqrt(d-1)`` at positions (0, 1) and
    (1, 0), so ``A + eps B`` is not Metzler for any ``eps > 0``.
    """
    if not isinstance(d, (int, np.integer)) or d < 3:
        raise DimensionTooSmall(f"d must be an integer >= 3, got {d!r}")
    c = 1.0 / np.sqrt(d - 1)
    A = np.zeros((d, d))
    A[-1, :-1] = c
    A[:-1, -1] = c
    B = np.zeros((d, d))
    B[0, 1] = B[1, 0] = -c
    return A, B


# --- non-local Laplacian on (0, 1) -------------------------------------------

def _laplacian_kernel_oracle(n_fine):
    def oracle(f, x):
        """``(R(0, -A) f)(x) = 1/2 int_0^x (F(1) - F(y)) dy + 1/2 int_x^1 F(y) dy``."""
        y = np.linspace(0.0, 1.0, n_fine)
        F = cumulative_trapezoid(f(y), y, initial=0.0)
        G1 = cumulative_trapezoid(F[-1] - F, y, initial=0.0)
        G2 = cumulative_trapezoid(F, y, initial=0.0)
        g = 0.5 * G1 + 0.5 * (G2[-1] - G2)
        return np.interp(x, y, g)
    return oracle


def example_nonlocal_laplacian(n=64, n_fine=2 ** 14 + 1) -> DiscretizedModel:
    """Generator ``u -> u''`` with ``u'(0) = -u'(1) = u(0) + u(1)`` on ``n`` nodes.

    Central differences on ``x_i = i/(n-1)``; the ghost values from the two
    boundary relations give the boundary rows
    ``(2u_0 - 2u_1 + 2h(u_0 + u_N))/h^2`` and
    ``(2u_N - 2u_{N-1} + 2h(u_0 + u_N))/h^2`` of the positive operator
    ``L ~ -d^2/dx^2`` (``extras["laplacian"]``).  ``operator_A = -L`` is the
    semigroup generator; its only negative off-diagonal entries are the two
    corners ``-2/h``.  ``W L`` is symmetric for the trapezoid weights ``W``.
    ``oracle(f, x)`` evaluates the kernel formula for ``R(0, -A) f = L^{-1} f``
    with a fine independent trapezoid rule.
    """
    if not isinstance(n, (int, np.integer)) or n < 8:
        raise BadGridSize(f"n must be an integer >= 8, got {n!r}")
    x = np.linspace(0.0, 1.0, n)
    h = 1.0 / (n - 1)
    L = (2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)) / h ** 2
    L[0, 1] = L[-1, -2] = -2.0 / h ** 2
    for row in (0, n - 1):
        L[row, 0] += 2.0 / h
        L[row, -1] += 2.0 / h
    w = trapezoid_weights(x)
    ones = np.ones(n)
    return DiscretizedModel("nonlocal-laplacian", int(n), x, -L, ConeVector(ones, ones),
                            w, _laplacian_kernel_oracle(n_fine), {"laplacian": L})


def symmetrize(model: DiscretizedModel, M=None) -> np.ndarray:
    """``W^{1/2} M W^{-1/2}`` (default ``M`` = the generator)."""
    M = model.operator_A if M is None else M
    r = np.sqrt(model.quadrature_weights)
    return r[:, None] * M / r[None, :]


@dataclass
class HilbertReport:
    """Outcome of perturbing the non-local Laplacian generator by a positive ``B``."""

    verdict: str
    metzler: bool
    spectral_bound: float
    unperturbed_spectral_bound: float
    lambda1: float
    norm_B: float
    eigenvector_margin: float
    positivity_times: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return jsonable(asdict(self))


def demo_hilbert_quantitative(model: DiscretizedModel, B=None, lam1=0.0, probes=(),
                              n_check=32, tol: Tolerances = DEFAULT_TOL) -> HilbertReport:
    """Positive symmetric perturbations of the non-local Laplacian generator.

    ``B`` is given in the weighted frame, i.e. as a symmetric nonnegative
    matrix acting on ``W^{1/2} u``; it is applied as ``W^{-1/2} B W^{1/2}``,
    which is nonnegative with the same weighted norm.  Requires
    ``R(lam, G) >> 0`` on ``n_check`` interior points of ``(s(G), lam1)``
    (``G`` the generator) and ``||B|| < lam1 - s(G)``.  ``probes`` is a list
    of node indices; for each, the positivity time of the unit vector at that
    node is reported.

    At ``lam1 = 0`` itself the discrete ``R(0, G)`` is only positive: the
    kernel vanishes at the corners ``(0, 1)`` and ``(1, 0)``.
    """
    if model.name != "nonlocal-laplacian":
        raise PreconditionFailed("demo_hilbert_quantitative needs the non-local Laplacian")
    G = model.operator_A
    n = model.n
    Bs = np.zeros((n, n)) if B is None else np.asarray(B, dtype=float)
    if Bs.shape != (n, n):
        raise PreconditionFailed("B has the wrong shape")
    if np.any(Bs < -tol.pos) or not np.allclose(Bs, Bs.T, atol=tol.spec):
        raise PreconditionFailed("B must be symmetric and nonnegative")
    s = float(np.max(np.linalg.eigvals(G).real))
    if not lam1 > s:
        raise PreconditionFailed(f"lambda1={lam1!r} must exceed s(G)={s!r}")
    for lam in s + (lam1 - s) * np.arange(1, n_check + 1) / (n_check + 1):
        if _relative_min(resolvent(G, lam, tol)) <= tol.pos:
            raise PreconditionFailed("R(lambda, G) is not strongly positive below lambda1",
                                     lam=float(lam))
    nb = operator_norm(Bs)
    if not nb < lam1 - s:
        raise NormTooLarge(f"||B|| = {nb:.6g} is not below lambda1 - s = {lam1 - s:.6g}",
                           norm=nb)
    r = np.sqrt(model.quadrature_weights)
    GB = G + Bs * r[None, :] / r[:, None]
    rep = classify_semigroup(GB, tol)
    w, V = np.linalg.eig(GB)
    k = int(np.argmax(w.real))
    v = np.real(V[:, k])
    v = v / v[np.argmax(np.abs(v))]
    times = []
    if probes:
        big = tol.with_(expm_cap=1e7)
        gap = np.sort(w.real)[-1] - np.sort(w.real)[-2]
        for i in probes:
            f = np.zeros(n)
            f[i] = 1.0
            times.append({"node": int(i),
                          "time": positivity_time(GB, f, t_max=10.0 / gap, tol=big)})
    return HilbertReport(rep.verdict.value, is_metzler(GB, tol.pos), float(w[k].real), s,
                         float(lam1), nb, float(v.min()), times)
