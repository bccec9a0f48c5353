"""Closed forms for rank-one perturbations and the positivity destroyer.

A rank-one operator is stored as a functional ``phi`` (row vector), a vector
``v`` and a scalar ``alpha``; it acts as ``x -> alpha * <phi, x> * v`` and
its matrix is ``alpha * outer(v, phi)``.  Both spellings ``v (x) phi`` and
``phi (x) v`` found in the literature denote this same operator here.
``<phi, x>`` is the bilinear pairing ``phi @ x`` (no conjugation).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NotAnEigenvector,
    NotEventuallyStronglyPositive,
    PerturbedSpectrum,
    PreconditionFailed,
    SpectralCollision,
    ZeroPairing,
)
from .io import jsonable, vector_from_json, vector_to_json
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, expm, operator_norm, resolvent


@dataclass
class Rank1:
    phi: np.ndarray
    v: np.ndarray
    alpha: float = 1.0

    def __post_init__(self):
        self.phi = np.asarray(self.phi)
        self.v = np.asarray(self.v)
        if self.phi.shape != self.v.shape or self.phi.ndim != 1:
            raise ValueError("phi and v must be vectors of equal length")

    def matrix(self) -> np.ndarray:
        return self.alpha * np.outer(self.v, self.phi)

    def __call__(self, x):
        return self.alpha * (self.phi @ x) * self.v

    @property
    def norm(self) -> float:
        return abs(self.alpha) * float(np.linalg.norm(self.phi) * np.linalg.norm(self.v))

    def to_dict(self) -> dict:
        return {"phi": vector_to_json(self.phi), "v": vector_to_json(self.v),
                "alpha": jsonable(self.alpha)}

    @classmethod
    def from_dict(cls, d) -> "Rank1":
        alpha = d.get("alpha", 1.0)
        if isinstance(alpha, list):
            alpha = complex(*alpha)
        return cls(vector_from_json(d["phi"]), vector_from_json(d["v"]), alpha)


def _scale(A):
    return max(operator_norm(A), 1.0)


def _check_eigenvector(A, v, lam0, tol):
    res = np.linalg.norm(A @ v - lam0 * v)
    if not np.any(v) or res > tol.spec * max(_scale(A), abs(lam0)) * np.linalg.norm(v):
        raise NotAnEigenvector(f"A v - lam0 v has norm {res:.3g}", residual=float(res))


def resolvent_rank1(A, lam, p: Rank1, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Resolvent of ``A + p`` from the resolvent of ``A``.

    With ``c = <phi, R(lam, A) w>`` (``w`` the vector of ``p``)::

        R(lam, A + p) = R + R (w phi) R / (1 - c)

    ``lam`` is in the resolvent set of ``A + p`` iff ``c != 1``; when
    ``|1 - c| < tol * (1 + |c|)`` :class:`PerturbedSpectrum` is raised.
    """
    A = as_matrix(A)
    R = resolvent(A, lam, tol)
    phi = p.alpha * p.phi
    Rw = R @ p.v
    c = phi @ Rw
    if abs(1 - c) < tol.spec * (1 + abs(c)):
        raise PerturbedSpectrum(f"<phi, R(lam,A) w> = {c!r} is 1 within tolerance",
                                lam=complex(lam), pairing=complex(c))
    return R + np.outer(Rw, phi @ R) / (1 - c)


def resolvent_rank1_eigen(A, lam, phi, v, lam0, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Resolvent of ``A + v phi`` when ``A v = lam0 v``.

    ``R(lam, A + v phi) = R + (v phi) R / ((lam - lam0) - <phi, v>)``; the
    perturbed operator has ``lam`` in its spectrum iff
    ``lam - lam0 == <phi, v>``.
    """
    A = as_matrix(A)
    phi = np.asarray(phi)
    v = np.asarray(v)
    _check_eigenvector(A, v, lam0, tol)
    R = resolvent(A, lam, tol)
    pair = phi @ v
    d = (lam - lam0) - pair
    if abs(d) < tol.spec * (1 + abs(lam - lam0) + abs(pair)):
        raise PerturbedSpectrum(f"lam - lam0 equals <phi, v> = {pair!r}",
                                lam=complex(lam), pairing=complex(pair))
    return R + np.outer(v, phi @ R) / d


def semigroup_rank1(A, t, phi, v, lam0, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``e^{t(A + v phi)}`` when ``A v = lam0 v``.

    With ``mu = <phi, v> + lam0``::

        e^{t(A + v phi)} = e^{tA} + (v phi)(e^{t mu} I - e^{tA}) R(mu, A)

    Requires ``mu`` outside the spectrum of ``A`` (else
    :class:`SpectralCollision`); no limit is taken at a collision.
    """
    A = as_matrix(A)
    phi = np.asarray(phi)
    v = np.asarray(v)
    if t < 0:
        raise PreconditionFailed("t must be nonnegative")
    _check_eigenvector(A, v, lam0, tol)
    mu = phi @ v + lam0
    w = np.linalg.eigvals(A)
    if np.min(np.abs(w - mu)) <= tol.spec * _scale(A):
        raise SpectralCollision(f"<phi, v> + lam0 = {mu!r} is an eigenvalue of A",
                                mu=complex(mu))
    E = expm(A, t, tol=tol)
    R = resolvent(A, mu, tol)
    n = A.shape[0]
    M = np.exp(t * mu) * np.eye(n) - E
    F = E + np.outer(v, phi @ M @ R)
    if not np.iscomplexobj(A) and not np.iscomplexobj(phi) and not np.iscomplexobj(v) \
            and np.isreal(mu):
        F = np.real(F)
    return F


# --- destroying eventual positivity --------------------------------------

def _positive_dominant(A, tol):
    from .positivity import _dominant, _real_part

    A = _real_part(as_matrix(A), tol.pos)
    dom = _dominant(A, tol)
    if dom.P is None or not dom.pmin > tol.pos:
        raise NotEventuallyStronglyPositive(
            "the spectral bound must be a dominant simple eigenvalue with positive projection")
    return A, dom


def _positive_eigenvector(A, s):
    w, V = np.linalg.eig(A)
    v = np.real(V[:, int(np.argmin(np.abs(w - s)))])
    v = v / v[np.argmax(np.abs(v))]
    return v


def build_destroyer(A, mu, phi, tol: Tolerances = DEFAULT_TOL) -> Rank1:
    """Positive rank-one ``B = alpha * phi (x) v`` that moves the spectral bound to ``mu``.

    ``v`` is the positive eigenvector for ``s(A)`` (normalised to max entry 1)
    and ``alpha = (mu - s(A)) / <phi, v>``.  Then ``s(A + B) = mu`` is a
    simple pole with spectral projection ``alpha * v (R(mu, A)^T phi)^T``
    (see :func:`destroyer_projection`); if ``R(mu, A)^T phi`` has a negative
    entry, ``A + B`` is not eventually positive.
    """
    A, dom = _positive_dominant(A, tol)
    s = dom.lam
    if not mu > s:
        raise PreconditionFailed(f"mu={mu!r} must exceed s(A)={s!r}")
    phi = np.asarray(phi, dtype=float)
    if np.any(phi < -tol.pos) or not np.any(phi > tol.pos):
        raise PreconditionFailed("phi must be a nonzero nonnegative functional")
    # shift so that the spectral bound is 0
    v = _positive_eigenvector(A - s * np.eye(A.shape[0]), 0.0)
    pairing = phi @ v
    if pairing <= tol.pos:
        raise ZeroPairing(f"<phi, v> = {pairing!r}")
    return Rank1(phi, v, (mu - s) / pairing)


def destroyer_projection(A, mu, B: Rank1, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Spectral projection of ``A + B`` at ``mu`` for ``B`` from :func:`build_destroyer`."""
    A = as_matrix(A)
    q = resolvent(A, mu, tol).T @ B.phi
    return B.alpha * np.outer(B.v, q)


@dataclass
class DestroyerScan:
    """Sign patterns of ``R(mu, A)^T phi`` over a grid of ``mu`` and functionals.

    ``witness`` (when ``found``) holds the first mixed-sign case: ``mu``, the
    functional index, the destroyer ``B``, its spectral projection ``Q`` and
    a nonnegative vector ``f`` with ``<q, f> < 0`` whose trajectory under
    ``A + B`` ends up negative.
    """

    spectral_bound: float
    entries: list = field(default_factory=list)
    witness: dict = None

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_dict(self) -> dict:
        w = None
        if self.witness is not None:
            w = dict(self.witness)
            w["destroyer"] = w["destroyer"].to_dict()
        return jsonable({"spectral_bound": self.spectral_bound, "found": self.found,
                         "entries": self.entries, "witness": w})


def default_mu_offsets(A) -> np.ndarray:
    """Offsets ``0.5, 1, 2, ...`` above ``s(A)`` up to ``16 * max(||A - s I||, 1)``.

    Far above the spectrum ``R(mu, A) = I/mu + A/mu^2 + ...``, so any negative
    off-diagonal entry of ``A`` shows up in the resolvent once ``mu`` is large.
    """
    A = as_matrix(A)
    s = float(np.max(np.linalg.eigvals(A).real))
    top = 16.0 * max(operator_norm(A - s * np.eye(A.shape[0])), 1.0)
    k = int(np.ceil(np.log2(top / 0.5)))
    return 0.5 * 2.0 ** np.arange(k + 1)


def destroyer_scan(A, mu_offsets=None, phi_basis=None,
                   tol: Tolerances = DEFAULT_TOL) -> DestroyerScan:
    """Search for a positive rank-one perturbation destroying eventual positivity.

    For each ``mu = s(A) + offset`` and each functional ``phi`` (default: the
    coordinate functionals) the sign pattern of ``R(mu, A)^T phi`` is
    recorded.  A mixed sign yields a destroyer via :func:`build_destroyer`.
    For a Metzler ``A`` every resolvent above ``s(A)`` is positive, so no
    destroyer exists; for a non-Metzler ``A`` one shows up for large ``mu``.
    """
    A, dom = _positive_dominant(A, tol)
    s = dom.lam
    n = A.shape[0]
    offsets = default_mu_offsets(A) if mu_offsets is None else np.asarray(mu_offsets, float)
    basis = np.eye(n) if phi_basis is None else np.atleast_2d(np.asarray(phi_basis, float))
    if np.any(offsets <= 0):
        raise PreconditionFailed("mu offsets must be positive")
    scan = DestroyerScan(spectral_bound=s)
    for off in offsets:
        mu = s + float(off)
        R = resolvent(A, mu, tol)
        for j, phi in enumerate(basis):
            q = R.T @ phi
            qmin = float(q.min() / np.max(np.abs(q)))
            mixed = qmin < -tol.pos
            scan.entries.append({"mu": mu, "phi_index": j, "q_min_relative": qmin,
                                 "mixed": bool(mixed)})
            if mixed and scan.witness is None:
                B = build_destroyer(A, mu, phi, tol)
                Q = destroyer_projection(A, mu, B, tol)
                f = np.zeros(n)
                f[int(np.argmin(q))] = 1.0
                scan.witness = {"mu": mu, "phi_index": j, "destroyer": B,
                                "projection": Q, "witness_vector": f}
    return scan
