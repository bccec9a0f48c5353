"""Quantitative perturbation theory for dominant eigenvalues and resolvents.

Perturbation radii from resolvent norms on contours, truncated Neumann
series with tail bounds, certificates for positive and diagonal
perturbations, half-plane resolvent bounds, eigenvalue-curve continuation
and randomized openness probes.
"""

from __future__ import annotations

import io as _io
import csv
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from .errors import (
    ConvergenceFailure,
    ContourTooClose,
    EigenvalueCollision,
    NormTooLarge,
    NotDiagonal,
    NotSimple,
    PreconditionFailed,
    SeriesDiverges,
    SpectralBoundViolation,
)
from .io import jsonable
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    eigensystem,
    operator_norm,
    resolvent,
    spectral_projection,
)
from .positivity import (
    Verdict,
    _dominant,
    _real_part,
    _relative_min,
    classify_resolvent_at,
    classify_semigroup,
    neumann_extension_check,
)


@dataclass
class PerturbationCertificate:
    """Outcome of a perturbation certification around an isolated eigenvalue.

    ``lambda_B`` is the unique eigenvalue of ``A + B`` in the disk
    ``|lambda - lambda0| < radius_r``; ``projection_PB`` is its spectral
    projection and ``projection_drift = ||P_B - P_0||``.  When set,
    ``resolvent_positive_up_to`` is a point ``lambda_1`` such that
    ``R(lambda, A + B)`` is certified entrywise positive on
    ``(lambda_B, lambda_1]``.
    """

    lambda0: float
    radius_r: float
    epsilon: float
    lambda_B: float
    simple: bool
    projection_PB: np.ndarray
    projection_drift: float
    resolvent_positive_up_to: float = None
    perturbation_norm: float = 0.0
    margins: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return jsonable(asdict(self))


@dataclass
class EigenCurvePoint:
    s: float
    lambda_s: float
    u_s: np.ndarray
    dlambda_ds: float
    du_ds: np.ndarray

    def to_dict(self) -> dict:
        return jsonable(asdict(self))


# --- radii and series ----------------------------------------------------

def _sigma_min(A, lam):
    n = A.shape[0]
    return float(np.linalg.svd(lam * np.eye(n) - A, compute_uv=False)[-1])


def _check_isolated(A, lam0, r, tol):
    w = np.linalg.eigvals(A)
    dist = np.abs(w - lam0)
    scale = max(operator_norm(A), r)
    if np.min(np.abs(dist - r)) <= tol.spec * scale:
        raise ContourTooClose("an eigenvalue lies on the contour", lambda0=complex(lam0), r=r)
    inside = np.flatnonzero(dist < r)
    if inside.size != 1:
        raise NotSimple(f"{inside.size} eigenvalues inside the disk, expected one",
                        lambda0=complex(lam0), r=r)
    return w, int(inside[0])


def eigenvalue_radius(A, lam0, r, n_nodes=256, tol: Tolerances = DEFAULT_TOL) -> float:
    """Admissible perturbation norm ``min_{|lam - lam0| = r} ||R(lam, A)||^-1``.

    ``||R(lam, A)||^-1`` is the smallest singular value of ``lam I - A``.  It
    is sampled at ``n_nodes`` points of the circle and the smallest sampled
    minima are polished with a bounded scalar minimisation, so the result is
    the contour minimum up to optimiser tolerance rather than a sampled
    over-estimate.  Any ``B`` with ``||B|| < epsilon`` leaves exactly one
    eigenvalue of ``A + B`` in the disk (real and simple for real ``A, B``
    and real ``lam0``).
    """
    A = as_matrix(A)
    if not r > 0:
        raise PreconditionFailed("r must be positive")
    _check_isolated(A, lam0, r, tol)
    theta = 2 * np.pi * np.arange(n_nodes) / n_nodes
    vals = np.array([_sigma_min(A, lam0 + r * np.exp(1j * t)) for t in theta])
    best = float(vals.min())
    h = 2 * np.pi / n_nodes
    is_min = (vals <= np.roll(vals, 1)) & (vals <= np.roll(vals, -1))
    cands = np.flatnonzero(is_min)
    cands = cands[np.argsort(vals[cands])][:4]
    for k in cands:
        res = minimize_scalar(lambda t: _sigma_min(A, lam0 + r * np.exp(1j * t)),
                              bounds=(theta[k] - h, theta[k] + h), method="bounded",
                              options={"xatol": 1e-12})
        best = min(best, float(res.fun))
    return best


def neumann_resolvent(A, B, lam, k_max=60, tol: Tolerances = DEFAULT_TOL):
    """``R(lam, A + B)`` as the truncated series ``R sum_{k<=k_max} (B R)^k``.

    Returns ``(S, bound)`` where ``bound = ||R|| q^{k_max+1} / (1 - q)`` with
    ``q = ||B R(lam, A)||`` bounds the spectral-norm distance to the exact
    resolvent.  Raises :class:`SeriesDiverges` when ``q >= 1``.
    """
    A = as_matrix(A)
    B = as_matrix(B, "B")
    if B.shape != A.shape:
        raise PreconditionFailed("A and B must have the same shape")
    R = resolvent(A, lam, tol)
    BR = B @ R
    q = operator_norm(BR)
    if q >= 1:
        raise SeriesDiverges(f"||B R(lam, A)|| = {q:.6g} >= 1", q=q)
    term = np.eye(A.shape[0], dtype=BR.dtype)
    total = term.copy()
    for _ in range(k_max):
        term = term @ BR
        total = total + term
    S = R @ total
    bound = operator_norm(R) * q ** (k_max + 1) / (1 - q)
    return S, float(bound)


# --- certificates ----------------------------------------------------------

def _locate(A, lam0, r, tol):
    w = np.linalg.eigvals(A)
    inside = np.flatnonzero(np.abs(w - lam0) < r)
    if inside.size != 1:
        raise ConvergenceFailure(f"{inside.size} eigenvalues of the perturbed matrix in the disk")
    lamB = w[inside[0]]
    scale = max(operator_norm(A), 1.0)
    real = bool(abs(lamB.imag) <= tol.spec * scale)
    others = np.delete(w, inside[0])
    simple = bool(not others.size or np.min(np.abs(others - lamB)) > tol.cluster * scale)
    return (float(lamB.real) if real else complex(lamB)), real, simple


def certify_resolvent_perturbation(A, lam0, r, B, n_nodes=256,
                                   tol: Tolerances = DEFAULT_TOL) -> PerturbationCertificate:
    """Certify that a small positive ``B`` keeps the resolvent eventually strongly positive.

    Checks the hypotheses (``R(., A)`` eventually strongly positive at
    ``lam0``, ``R(lam0 + r, A) >> 0``, ``B >= 0`` and
    ``||B|| < eigenvalue_radius(A, lam0, r)``), then locates the perturbed
    eigenvalue ``lambda_B``, verifies ``R(lam0 + r, A + B) >= R(lam0 + r, A)``
    and certifies ``R(., A + B) >> 0`` on ``(lambda_B, lam0 + r]`` with
    :func:`~evpos.positivity.neumann_extension_check`.
    """
    A = _real_part(as_matrix(A), tol.pos)
    B = _real_part(as_matrix(B, "B"), tol.pos)
    if B.shape != A.shape:
        raise PreconditionFailed("A and B must have the same shape")
    if np.any(B < -tol.pos):
        raise PreconditionFailed("B must be entrywise nonnegative")
    report = classify_resolvent_at(A, lam0, tol)
    if report.verdict != Verdict.EVENTUALLY_STRONGLY_POSITIVE:
        raise PreconditionFailed("R(., A) is not eventually strongly positive at lambda0",
                                 verdict=report.verdict.value)
    lam1 = lam0 + r
    R1 = np.real(resolvent(A, lam1, tol))
    if _relative_min(R1) <= tol.pos:
        raise PreconditionFailed("R(lambda0 + r, A) is not entrywise strictly positive",
                                 r=r, min_entry=_relative_min(R1))
    eps = eigenvalue_radius(A, lam0, r, n_nodes, tol)
    nb = operator_norm(B)
    if not nb < eps:
        raise NormTooLarge(f"||B|| = {nb:.6g} is not below epsilon = {eps:.6g}",
                           norm=nb, epsilon=eps)
    AB = A + B
    lamB, real, simple = _locate(AB, lam0, r, tol)
    P0 = spectral_projection(A, lam0, r, tol=tol)
    PB = spectral_projection(AB, lam0, r, tol=tol)
    R1B = np.real(resolvent(AB, lam1, tol))
    mono = float(np.min(R1B - R1) / np.max(np.abs(R1)))
    certified = None
    if real and simple and neumann_extension_check(AB, lamB, lam1, tol=tol):
        certified = float(lam1)
    return PerturbationCertificate(
        lambda0=float(lam0), radius_r=float(r), epsilon=eps, lambda_B=lamB,
        simple=simple, projection_PB=PB, projection_drift=operator_norm(PB - P0),
        resolvent_positive_up_to=certified, perturbation_norm=nb,
        margins={"monotonicity": mono, "resolvent_min_entry": _relative_min(R1B),
                 "projection_min_entry": _relative_min(PB), "real": real})


def certify_multiplication_perturbation(A, lam0, r, B, n_nodes=256,
                                        tol: Tolerances = DEFAULT_TOL) -> PerturbationCertificate:
    """Certificate for a real diagonal (multiplication) perturbation ``B``.

    ``B + ||B|| I`` is nonnegative and shifts the spectrum by exactly
    ``||B|| = max |b_ii|``.  The shifted perturbation is certified with
    :func:`certify_resolvent_perturbation` on the radius ``r/3`` and the
    result is shifted back.  Requires ``||B|| < min(r/3, eps~/2)`` where
    ``eps~`` is the smaller admissible norm of the radii ``r/3`` and ``r``.
    """
    A = _real_part(as_matrix(A), tol.pos)
    B = as_matrix(B, "B")
    if np.iscomplexobj(B):
        raise NotDiagonal("B must be real")
    if B.shape != A.shape:
        raise PreconditionFailed("A and B must have the same shape")
    off = B - np.diag(np.diag(B))
    if np.max(np.abs(off)) > tol.pos * max(1.0, np.max(np.abs(B))):
        raise NotDiagonal("B must be diagonal")
    b = float(np.max(np.abs(np.diag(B))))
    eps_tilde = min(eigenvalue_radius(A, lam0, r / 3, n_nodes, tol),
                    eigenvalue_radius(A, lam0, r, n_nodes, tol))
    eps = min(r / 3, eps_tilde / 2)
    if not b < eps:
        raise NormTooLarge(f"||B|| = {b:.6g} is not below {eps:.6g}", norm=b, epsilon=eps)
    n = A.shape[0]
    shifted = certify_resolvent_perturbation(A, lam0, r / 3, B + b * np.eye(n), n_nodes, tol)
    AB = A + B
    lamB, real, simple = _locate(AB, lam0, r, tol)
    PB = spectral_projection(AB, lam0, r, tol=tol)
    P0 = spectral_projection(A, lam0, r, tol=tol)
    up_to = shifted.resolvent_positive_up_to
    margins = dict(shifted.margins)
    margins["shifted_lambda_B"] = shifted.lambda_B
    margins["real"] = real
    return PerturbationCertificate(
        lambda0=float(lam0), radius_r=float(r), epsilon=eps,
        lambda_B=shifted.lambda_B - b, simple=simple and shifted.simple,
        projection_PB=PB, projection_drift=operator_norm(PB - P0),
        resolvent_positive_up_to=None if up_to is None else up_to - b,
        perturbation_norm=b, margins=margins)


# --- half-plane bounds and the quantitative theorem -------------------------

def _is_symmetric(A, tol):
    return np.allclose(A, A.conj().T, rtol=0, atol=tol.spec * max(operator_norm(A), 1.0))


def halfplane_sup_norm(A, lam1, strategy="auto", n_points=2001, full_output=False,
                       tol: Tolerances = DEFAULT_TOL):
    """``M = sup_{Re lam >= lam1} ||R(lam, A)||``.

    ``strategy="symmetric"`` returns the exact value ``1/(lam1 - s(A))`` for
    (numerically) symmetric ``A``.  ``strategy="sampled"`` maximises the
    norm along the boundary line ``Re lam = lam1`` (the resolvent is analytic
    in the half-plane and decays at infinity, so the supremum sits on the
    line) over a truncated, polished grid; the result is a lower estimate.
    ``"auto"`` picks the closed form when it applies.  With
    ``full_output=True`` a dict of diagnostics is returned as well.
    """
    A = as_matrix(A)
    s = float(np.max(np.linalg.eigvals(A).real))
    if not lam1 > s:
        raise SpectralBoundViolation(f"lambda1={lam1!r} must exceed s(A)={s!r}",
                                     lam1=lam1, spectral_bound=s)
    sym = _is_symmetric(A, tol)
    if strategy == "auto":
        strategy = "symmetric" if sym else "sampled"
    if strategy == "symmetric":
        if not sym:
            raise PreconditionFailed("the symmetric strategy needs a symmetric matrix")
        M = 1.0 / (lam1 - s)
        info = {"strategy": "symmetric", "exact": True}
    elif strategy == "sampled":
        nA = operator_norm(A)
        Y = 10.0 * (nA + abs(lam1) + 1.0)
        y = Y * np.sinh(np.linspace(-4, 4, n_points)) / np.sinh(4)

        def norm_at(yy):
            return 1.0 / _sigma_min(A, lam1 + 1j * yy)

        vals = np.array([norm_at(yy) for yy in y])
        k = int(np.argmax(vals))
        lo, hi = y[max(k - 1, 0)], y[min(k + 1, n_points - 1)]
        res = minimize_scalar(lambda yy: -norm_at(yy), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        M = max(float(vals[k]), float(-res.fun))
        tail = 1.0 / (np.hypot(lam1, Y) - nA) if np.hypot(lam1, Y) > nA else np.inf
        info = {"strategy": "sampled", "exact": False, "lower_estimate": True,
                "argmax_imag": float(res.x if -res.fun >= vals[k] else y[k]),
                "truncation": float(Y), "tail_bound": float(tail)}
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    info["M"] = M
    return (M, info) if full_output else M


@dataclass
class QuantitativeReport:
    """Numerical check of the half-plane perturbation theorem for ``A + K``."""

    M: float
    norm_K: float
    spectral_bound_A: float
    spectral_bound_AK: float
    real_spectral_bound_AK: float
    lambda1: float
    bound_below_lambda1: bool
    resolvent_positive: bool
    min_resolvent_entry: float
    bound_not_decreased: bool
    strict_increase: bool

    @property
    def holds(self) -> bool:
        return (self.bound_below_lambda1 and self.resolvent_positive
                and self.bound_not_decreased and self.strict_increase)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["holds"] = self.holds
        return jsonable(d)


def _interior_mesh(a, b, n):
    return a + (b - a) * np.arange(1, n + 1) / (n + 1)


def check_quantitative_theorem(A, K, lam1, u=None, n_mesh=32, strategy="auto",
                               tol: Tolerances = DEFAULT_TOL) -> QuantitativeReport:
    """Check the conclusions of the half-plane theorem for a positive ``K``.

    Hypotheses: ``R(lam, A) >> 0`` on sampled ``lam in (s(A), lam1)`` and
    ``||K|| < 1/M`` with ``M`` from :func:`halfplane_sup_norm`.  Verified
    conclusions: ``s(A + K) < lam1``; ``R(lam, A + K) >> 0`` on an
    ``n_mesh``-point interior mesh of ``(s_R(A + K), lam1)``;
    ``s_R(A + K) >= s(A)``, strictly when ``K != 0``.  ``s_R`` is the largest
    real eigenvalue.  Strong positivity is measured against ``u``
    (default all ones).
    """
    A = _real_part(as_matrix(A), tol.pos)
    K = _real_part(as_matrix(K, "K"), tol.pos)
    n = A.shape[0]
    if K.shape != A.shape:
        raise PreconditionFailed("A and K must have the same shape")
    if np.any(K < -tol.pos):
        raise PreconditionFailed("K must be entrywise nonnegative")
    u = np.ones(n) if u is None else np.asarray(u, float)
    if not np.all(u > 0):
        raise PreconditionFailed("u must be entrywise strictly positive")
    M = halfplane_sup_norm(A, lam1, strategy=strategy, tol=tol)
    nK = operator_norm(K)
    if not nK < 1.0 / M:
        raise NormTooLarge(f"||K|| = {nK:.6g} is not below 1/M = {1 / M:.6g}", norm=nK, M=M)
    sA = float(np.max(np.linalg.eigvals(A).real))
    for lam in _interior_mesh(sA, lam1, n_mesh):
        if _relative_min(np.real(resolvent(A, lam, tol)) / u[:, None]) <= tol.pos:
            raise PreconditionFailed("R(lambda, A) is not strongly positive on (s(A), lambda1)",
                                     lam=float(lam))
    w = np.linalg.eigvals(A + K)
    sAK = float(np.max(w.real))
    scale = max(operator_norm(A + K), 1.0)
    real_w = w[np.abs(w.imag) <= tol.spec * scale].real
    sRAK = float(real_w.max()) if real_w.size else -np.inf
    mins = [_relative_min(np.real(resolvent(A + K, lam, tol)) / u[:, None])
            for lam in _interior_mesh(sRAK, lam1, n_mesh)]
    mres = float(min(mins))
    slack = tol.spec * scale
    nonzero = bool(np.any(K > tol.pos))
    return QuantitativeReport(
        M=M, norm_K=nK, spectral_bound_A=sA, spectral_bound_AK=sAK,
        real_spectral_bound_AK=sRAK, lambda1=float(lam1),
        bound_below_lambda1=sAK < lam1, resolvent_positive=mres > tol.pos,
        min_resolvent_entry=mres, bound_not_decreased=sRAK >= sA - slack,
        strict_increase=(sRAK > sA + slack) if nonzero else True)


# --- eigenvalue curves -------------------------------------------------------

def eigencurve(A, B, s_grid, gauge=None, gauge_value=None, index=-1,
               tol: Tolerances = DEFAULT_TOL) -> list:
    """Follow an eigenpair of the symmetric family ``A + sB`` along ``s_grid``.

    The starting eigenvalue is the ``index``-th in ascending order (default:
    the largest).  At later grid points the eigenvector with maximal overlap
    with the previous one is selected.  Eigenvectors are gauge fixed by
    holding component ``gauge`` at ``gauge_value``; the defaults are the
    largest-magnitude component at the first point and the value it has in
    the unit-norm eigenvector.  ``lambda'(s)`` is the Rayleigh quotient
    ``<B u, u> / <u, u>`` and ``u'(s)`` solves
    ``(A + sB - lambda I) u' = (lambda' I - B) u`` with ``u'[gauge] = 0``.
    """
    A = _real_part(as_matrix(A), tol.pos)
    B = _real_part(as_matrix(B, "B"), tol.pos)
    if B.shape != A.shape:
        raise PreconditionFailed("A and B must have the same shape")
    if not (_is_symmetric(A, tol) and _is_symmetric(B, tol)):
        raise PreconditionFailed("A and B must be symmetric")
    s_grid = np.atleast_1d(np.asarray(s_grid, float))
    n = A.shape[0]
    points = []
    prev = None
    for s in s_grid:
        C = A + s * B
        w, V = scipy.linalg.eigh(C)
        if prev is None:
            j = index % n
        else:
            j = int(np.argmax(np.abs(V.T @ prev)))
        lam = float(w[j])
        gaps = np.abs(np.delete(w, j) - lam)
        if gaps.size and gaps.min() <= 1e-6 * max(operator_norm(C), 1.0):
            raise EigenvalueCollision(f"eigenvalue collision at s={s:g}", s=float(s))
        x = V[:, j]
        if prev is None:
            if gauge is None:
                gauge = int(np.argmax(np.abs(x)))
            if gauge_value is None:
                gauge_value = abs(x[gauge])
        if abs(x[gauge]) <= 1e-12:
            raise PreconditionFailed(f"gauge component {gauge} vanishes at s={s:g}")
        u = x * (gauge_value / x[gauge])
        dlam = float(u @ B @ u / (u @ u))
        e = np.zeros(n)
        e[gauge] = 1.0
        lhs = np.vstack([C - lam * np.eye(n), e])
        rhs = np.concatenate([dlam * u - B @ u, [0.0]])
        du = np.linalg.lstsq(lhs, rhs, rcond=None)[0]
        points.append(EigenCurvePoint(float(s), lam, u, dlam, du))
        prev = x
    return points


def eigencurve_to_csv(points) -> str:
    """CSV text with columns ``s, lambda, dlambda, u_1..u_d``."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    d = len(points[0].u_s) if points else 0
    writer.writerow(["s", "lambda", "dlambda"] + [f"u_{i + 1}" for i in range(d)])
    for p in points:
        writer.writerow([repr(float(p.s)), repr(float(p.lambda_s)), repr(float(p.dlambda_ds))]
                        + [repr(float(x)) for x in p.u_s])
    return buf.getvalue()


# --- random perturbations, openness and continuity -------------------------

def random_perturbation(n, norm, rng, nonneg=False, symmetric=False) -> np.ndarray:
    """Random ``n x n`` matrix rescaled to spectral norm ``norm``.

    Entries are i.i.d. uniform on ``[-1, 1]`` (``[0, 1]`` when ``nonneg``);
    ``symmetric`` averages with the transpose before rescaling.
    """
    X = rng.uniform(0.0 if nonneg else -1.0, 1.0, size=(n, n))
    if symmetric:
        X = 0.5 * (X + X.T)
    nx = operator_norm(X)
    return X * (norm / nx) if nx > 0 else X


def openness_radius(A, tol: Tolerances = DEFAULT_TOL, n_nodes=256, n_line=2001) -> float:
    """Norm below which every real perturbation keeps eventual strong positivity.

    With ``s = s(A)``, ``r`` a third of the dominance gap, ``C`` the largest
    ``||R(lam, A)||`` on the circle ``|lam - s| = r`` and on the line
    ``Re lam = s - r``, and ``p`` the smallest entry of the dominant
    projection ``P_0``, returns ``p / (C (r C + p))``.  Below it the
    perturbed matrix keeps a single real dominant eigenvalue inside the
    circle, and ``||P_B - P_0|| < p`` forces ``P_B >> 0``.
    """
    A = _real_part(as_matrix(A), tol.pos)
    dom = _dominant(A, tol)
    if dom.P is None or not dom.pmin > tol.pos or not dom.gap > 0:
        raise PreconditionFailed("the dominant projection must be entrywise positive")
    s = dom.lam
    nA = operator_norm(A)
    r = dom.gap / 3 if np.isfinite(dom.gap) else 1.0
    theta = 2 * np.pi * np.arange(n_nodes) / n_nodes
    circle = [1.0 / _sigma_min(A, s + r * np.exp(1j * t)) for t in theta]
    Y = 10.0 * (nA + abs(s) + r + 1.0)
    ys = Y * np.sinh(np.linspace(-4, 4, n_line)) / np.sinh(4)
    line = [1.0 / _sigma_min(A, s - r + 1j * y) for y in ys]
    C = max(max(circle), max(line))
    p = float(np.min(dom.P))
    return p / (C * (r * C + p))


@dataclass
class ProbeResult:
    fraction: float
    epsilon: float
    scale: float
    n_trials: int
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return jsonable(asdict(self))


def openness_probe(A, n_trials=200, scale=0.5, seed=0, epsilon=None,
                   tol: Tolerances = DEFAULT_TOL) -> ProbeResult:
    """Fraction of random perturbations of norm ``scale * epsilon`` keeping the verdict.

    ``epsilon`` defaults to :func:`openness_radius`.  A perturbation keeps
    the verdict when the perturbed matrix is again classified eventually
    strongly positive, or positive with an entrywise positive dominant
    projection (a Metzler matrix with that property is eventually strongly
    positive too).  For ``scale <= 1`` the fraction is 1.
    """
    A = _real_part(as_matrix(A), tol.pos)
    eps = openness_radius(A, tol) if epsilon is None else float(epsilon)
    rng = np.random.default_rng(seed)
    n = A.shape[0]
    ok = 0
    failures = []
    for i in range(n_trials):
        B = random_perturbation(n, scale * eps, rng)
        rep = classify_semigroup(A + B, tol)
        good = rep.verdict == Verdict.EVENTUALLY_STRONGLY_POSITIVE or (
            rep.verdict == Verdict.POSITIVE and rep.projection_min_entry > tol.pos)
        if good:
            ok += 1
        else:
            failures.append({"trial": i, "verdict": rep.verdict.value})
    frac = ok / n_trials if n_trials else 1.0
    return ProbeResult(frac, eps, float(scale), int(n_trials), failures)


def projection_continuity(A, direction, scales, tol: Tolerances = DEFAULT_TOL) -> list:
    """Drift of the dominant eigenvalue and projection along ``A + c * direction``.

    Returns ``(||c D||, |lambda_B - lambda_0|, ||P_B - P_0||)`` for each
    scale ``c``.
    """
    A = _real_part(as_matrix(A), tol.pos)
    D = _real_part(as_matrix(direction, "direction"), tol.pos)
    dom = _dominant(A, tol)
    if dom.P is None:
        raise NotSimple(dom.problem or "dominant eigenvalue is not simple")
    out = []
    for c in scales:
        B = c * D
        if not np.any(B):
            out.append((0.0, 0.0, 0.0))
            continue
        es = eigensystem(A + B, tol)
        j = 0  # dominant eigenvalue of the perturbed matrix
        if es.clustered[j]:
            raise NotSimple("perturbed eigenvalue is clustered", scale=float(c))
        PB = np.real(es.projection(j))
        out.append((operator_norm(B), float(abs(es.eigenvalues[j] - dom.lam)),
                    operator_norm(PB - dom.P)))
    return out
