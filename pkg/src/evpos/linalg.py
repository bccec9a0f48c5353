"""Dense linear algebra primitives.

Resolvents, matrix exponentials (two independent routes), eigensystems with
left and right eigenvectors, spectral norms and contour-integral spectral
projections.  Matrices are plain :class:`numpy.ndarray` objects; every entry
point validates its input with :func:`as_matrix`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .errors import (
    ContourTooClose,
    ConvergenceFailure,
    InvalidMatrix,
    Overflow,
    SingularResolvent,
)


@dataclass(frozen=True)
class Tolerances:
    """Numerical margins used by every predicate in the package.

    Attributes
    ----------
    rtol : float
        Residual tolerance for linear solves.
    spec : float
        Relative tolerance for spectral equalities (scaled by ``||A||``).
    pos : float
        Positivity margin: an entry counts as ``>= 0`` when it is ``>= -pos``
        and as strictly positive when it is ``> pos``.
    cluster : float
        Eigenvalues closer than ``cluster * ||A||`` form a cluster.
    cond_max : float
        Condition number above which ``lambda*I - A`` is treated as singular.
    expm_cap : float
        Largest ``||t*A||`` accepted by :func:`expm`.
    """

    rtol: float = 1e-12
    spec: float = 1e-8
    pos: float = 1e-10
    cluster: float = 1e-7
    cond_max: float = 1e13
    expm_cap: float = 1e4

    def with_(self, **changes) -> "Tolerances":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


DEFAULT_TOL = Tolerances()


def as_matrix(A, name="A") -> np.ndarray:
    """Return ``A`` as a square, finite 2-d array (real if it has no imaginary part)."""
    M = np.asarray(A)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise InvalidMatrix(f"{name} must be a non-empty square matrix, got shape {M.shape}")
    if not np.issubdtype(M.dtype, np.number):
        raise InvalidMatrix(f"{name} must be numeric")
    if np.iscomplexobj(M):
        M = M.astype(complex)
        if not np.any(M.imag):
            M = M.real.copy()
    else:
        M = M.astype(float)
    if not np.all(np.isfinite(M)):
        raise InvalidMatrix(f"{name} has non-finite entries")
    return M


def _real_if_close(X, scale=1.0):
    if np.iscomplexobj(X) and np.max(np.abs(X.imag), initial=0.0) <= 1e-13 * max(scale, 1.0):
        return X.real.copy()
    return X


def operator_norm(M) -> float:
    """Spectral norm (largest singular value)."""
    M = np.atleast_2d(np.asarray(M))
    if not np.all(np.isfinite(M)):
        raise InvalidMatrix("matrix has non-finite entries")
    return float(np.linalg.norm(M, 2))


def spectral_bound(A) -> float:
    """Largest real part of the spectrum."""
    return float(np.max(np.linalg.eigvals(as_matrix(A)).real))


def resolvent(A, lam, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``R(lam, A) = (lam*I - A)^{-1}``.

    Raises :class:`SingularResolvent` when ``lam*I - A`` is numerically
    singular, which signals that ``lam`` lies (within tolerance) in the
    spectrum of ``A``.
    """
    A = as_matrix(A)
    n = A.shape[0]
    M = lam * np.eye(n) - A
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > tol.cond_max:
        raise SingularResolvent(
            f"lambda={lam!r} is numerically in the spectrum (cond={cond:.3g})",
            lam=complex(lam), cond=float(cond) if np.isfinite(cond) else None,
        )
    return np.linalg.solve(M, np.eye(n, dtype=M.dtype))


# --- matrix exponential ---------------------------------------------------

_TAYLOR_DEGREE = 18


def _expm_squaring(X):
    # ||X / 2^s||_1 <= 1/2; the Taylor remainder at degree 18 is below 1e-22
    norm = np.linalg.norm(X, 1)
    s = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    Y = X / (2.0 ** s)
    n = X.shape[0]
    E = np.eye(n, dtype=X.dtype)
    term = np.eye(n, dtype=X.dtype)
    for k in range(1, _TAYLOR_DEGREE + 1):
        term = term @ Y / k
        E = E + term
    for _ in range(s):
        E = E @ E
    return E


def _expm_eigen(X, max_cond=1e8):
    w, V = np.linalg.eig(X)
    cond = np.linalg.cond(V)
    if not np.isfinite(cond) or cond > max_cond:
        raise ConvergenceFailure(
            f"eigenvector basis too ill-conditioned for the eigen route (cond={cond:.3g})")
    return (V * np.exp(w)) @ np.linalg.inv(V)


def expm(A, t=1.0, method="squaring", tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Matrix exponential ``e^{tA}``.

    Parameters
    ----------
    A : array_like
        Square matrix.
    t : float
        Time; must be finite.
    method : {"squaring", "eigen"}
        ``"squaring"`` is scaling and squaring of a truncated Taylor series
        and works for every matrix.  ``"eigen"`` uses ``V diag(e^{t w}) V^-1``
        and refuses ill-conditioned eigenvector bases.  The two routes share
        no code and serve as mutual checks.
    """
    A = as_matrix(A)
    if not np.isfinite(t):
        raise InvalidMatrix("t must be finite")
    X = t * A
    if np.linalg.norm(X, 1) > tol.expm_cap:
        raise Overflow(f"||tA|| exceeds the cap {tol.expm_cap:g}", t=float(t))
    if method == "squaring":
        E = _expm_squaring(X)
    elif method == "eigen":
        E = _expm_eigen(X)
    else:
        raise ValueError(f"unknown method {method!r}")
    if not np.iscomplexobj(A):
        E = E.real if np.iscomplexobj(E) else E
    if not np.all(np.isfinite(E)):
        raise Overflow("matrix exponential overflowed", t=float(t))
    return E


# --- eigensystems ---------------------------------------------------------

def _phase_fix(v):
    # unit norm, largest-modulus entry made real and positive
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


@dataclass
class EigenSystem:
    """Eigenvalues with unit right/left eigenvectors, sorted by descending real part.

    ``right[:, i]`` satisfies ``A v = lambda_i v`` and ``left[:, i]`` satisfies
    ``A^H w = conj(lambda_i) w``.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    clustered: np.ndarray
    condition: np.ndarray
    norm: float = field(default=0.0)

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def spectral_bound(self) -> float:
        return float(self.eigenvalues[0].real)

    def projection(self, i: int) -> np.ndarray:
        """Rank-one spectral projection ``v w^H / (w^H v)`` of eigenvalue ``i``.

        Only meaningful for algebraically simple eigenvalues; see
        ``clustered`` and ``condition``.
        """
        v = self.right[:, i]
        w = self.left[:, i]
        P = np.outer(v, w.conj()) / (w.conj() @ v)
        return _real_if_close(P)

    def vector(self, i: int) -> np.ndarray:
        return _real_if_close(self.right[:, i])

    def left_vector(self, i: int) -> np.ndarray:
        return _real_if_close(self.left[:, i])


def eigensystem(A, tol: Tolerances = DEFAULT_TOL) -> EigenSystem:
    """Full eigensystem of ``A`` with clustering and conditioning diagnostics."""
    A = as_matrix(A)
    try:
        w, vl, vr = scipy.linalg.eig(A, left=True, right=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(f"eigenvalue iteration failed: {exc}") from exc
    # descending real part, ties broken by descending imaginary part
    order = np.lexsort((-w.imag, -w.real))
    w = w[order]
    vr = np.column_stack([_phase_fix(vr[:, i]) for i in order])
    vl = np.column_stack([_phase_fix(vl[:, i]) for i in order])
    norm = operator_norm(A)
    thresh = tol.cluster * max(norm, np.finfo(float).tiny)
    dist = np.abs(w[:, None] - w[None, :])
    np.fill_diagonal(dist, np.inf)
    clustered = np.min(dist, axis=1) <= thresh if len(w) > 1 else np.zeros(1, bool)
    overlap = np.abs(np.einsum("ij,ij->j", vl.conj(), vr))
    with np.errstate(divide="ignore"):
        condition = np.where(overlap > 0, 1.0 / overlap, np.inf)
    return EigenSystem(w, vr, vl, clustered, condition, norm)


# --- contour integrals ----------------------------------------------------

def spectral_projection(A, center, radius, n_nodes=128,
                        tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Riesz projection for the spectrum inside ``|lambda - center| < radius``.

    Trapezoid rule on ``n_nodes`` equispaced points of the circle, which
    converges geometrically for the analytic integrand.  The circle must keep
    a distance of at least ``tol.spec * max(||A||, radius)`` from the
    spectrum, otherwise :class:`ContourTooClose` is raised.
    """
    A = as_matrix(A)
    if radius <= 0:
        raise ValueError("radius must be positive")
    n = A.shape[0]
    w = np.linalg.eigvals(A)
    gap = np.min(np.abs(np.abs(w - center) - radius))
    if gap <= tol.spec * max(operator_norm(A), radius):
        raise ContourTooClose(
            f"an eigenvalue lies within {gap:.3g} of the contour",
            center=complex(center), radius=float(radius))
    theta = 2 * np.pi * np.arange(n_nodes) / n_nodes
    z = radius * np.exp(1j * theta)
    P = np.zeros((n, n), dtype=complex)
    eye = np.eye(n)
    for zk in z:
        P += zk * np.linalg.solve((center + zk) * eye - A, eye)
    P /= n_nodes
    if not np.iscomplexobj(A) and np.imag(center) == 0:
        P = P.real
    return P
