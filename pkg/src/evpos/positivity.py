"""Cone predicates and eventual-positivity classifiers for matrix semigroups.

The positive cone is the nonnegative orthant.  A vector ``x`` is strongly
positive with respect to an entrywise positive reference ``u`` when
``min_i x_i / u_i > tau``; in finite dimension this does not depend on ``u``.

The semigroup classifier works from the dominant eigendata: ``e^{tA}`` is
eventually strongly positive exactly when the spectral bound is a strictly
dominant, algebraically simple real eigenvalue whose rank-one spectral
projection has only positive entries.  A negative entry of that projection
certifies failure, because ``e^{-t s(A)} e^{tA} -> P``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import NotReal, Overflow, PreconditionFailed, SingularResolvent
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, eigensystem, expm, resolvent


class Verdict(str, enum.Enum):
    POSITIVE = "Positive"
    EVENTUALLY_STRONGLY_POSITIVE = "EventuallyStronglyPositive"
    NOT_EVENTUALLY_POSITIVE = "NotEventuallyPositive"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass
class ConeVector:
    """A vector together with the reference point ``u`` of the cone."""

    entries: np.ndarray
    reference_u: np.ndarray = None

    def __post_init__(self):
        self.entries = np.asarray(self.entries)
        if self.reference_u is None:
            self.reference_u = np.ones(self.entries.shape[0])
        self.reference_u = np.asarray(self.reference_u, dtype=float)
        if self.reference_u.shape != self.entries.shape[:1]:
            raise ValueError("reference_u has the wrong length")
        if not np.all(self.reference_u > 0):
            raise ValueError("reference_u must be entrywise strictly positive")


@dataclass
class PositivityReport:
    verdict: Verdict
    dominant_eigenvalue: float
    dominance_gap: float
    projection_min_entry: float
    metzler_margin: float
    evidence_notes: str = ""
    certified_lambda1: float = None
    samples: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict.value
        return d

    def to_json(self, **kwargs) -> str:
        from .io import jsonable
        return json.dumps(jsonable(self.to_dict()), **kwargs)


def _real_part(x, tau):
    x = np.asarray(x)
    if np.iscomplexobj(x):
        if np.max(np.abs(x.imag), initial=0.0) > tau:
            raise NotReal("input has imaginary content above the tolerance")
        return x.real
    return x.astype(float, copy=False)


def _relative_min(X):
    # smallest entry measured against the largest modulus
    scale = np.max(np.abs(X))
    return float(np.min(X) / scale) if scale > 0 else 0.0


def is_nonneg(x, tau=DEFAULT_TOL.pos) -> bool:
    """True iff every entry is ``>= -tau`` (imaginary parts must be ``<= tau``)."""
    return bool(np.all(_real_part(x, tau) >= -tau))


def is_strongly_positive(x, tau=DEFAULT_TOL.pos, u=None) -> bool:
    """True iff ``min_i x_i / u_i > tau``.

    ``x`` may be a :class:`ConeVector` (its reference point is used) or an
    array, in which case ``u`` defaults to the all-ones vector.
    """
    if isinstance(x, ConeVector):
        u = x.reference_u if u is None else u
        x = x.entries
    x = _real_part(x, tau)
    u = np.ones(x.shape[0]) if u is None else np.asarray(u, dtype=float)
    if not np.all(u > 0):
        raise ValueError("u must be entrywise strictly positive")
    return bool(np.min(x / u) > tau)


def metzler_margin(A) -> float:
    """Smallest off-diagonal entry of the real part of ``A``."""
    A = as_matrix(A)
    n = A.shape[0]
    if n == 1:
        return np.inf
    off = np.real(A)[~np.eye(n, dtype=bool)]
    return float(off.min())


def is_metzler(A, tau=DEFAULT_TOL.pos) -> bool:
    """All off-diagonal entries ``>= -tau``; equivalent to ``e^{tA} >= 0`` for all t."""
    A = _real_part(as_matrix(A), tau)
    return metzler_margin(A) >= -tau


@dataclass
class _Dominant:
    lam: float
    gap: float
    P: np.ndarray
    pmin: float
    problem: str = ""
    failure: bool = False
    index: int = 0


def _dominant(A, tol: Tolerances) -> _Dominant:
    es = eigensystem(A, tol)
    w = es.eigenvalues
    s = float(w[0].real)
    scale = max(es.norm, 1.0)
    top = np.abs(w.real - s) <= tol.spec * scale
    real_top = top & (np.abs(w.imag) <= tol.spec * scale)
    rest = w[~top].real
    gap = float(s - rest.max()) if rest.size else np.inf
    if not np.any(real_top):
        return _Dominant(s, gap, None, np.nan,
                         "spectral bound is attained only by non-real eigenvalues",
                         failure=True)
    i = int(np.flatnonzero(real_top)[0])
    if np.count_nonzero(top) > 1 or es.clustered[i]:
        return _Dominant(s, 0.0, None, np.nan,
                         "spectral bound is not a strictly dominant simple eigenvalue",
                         index=i)
    P = np.real(es.projection(i))
    return _Dominant(float(w[i].real), gap, P, _relative_min(P), index=i)


def classify_semigroup(A, tol: Tolerances = DEFAULT_TOL, n_samples=32) -> PositivityReport:
    """Classify the semigroup ``(e^{tA})_{t>=0}`` generated by a real matrix.

    The verdict is ``Positive`` for Metzler matrices, otherwise
    ``EventuallyStronglyPositive`` when the dominant eigendata certify it,
    ``NotEventuallyPositive`` when they certify failure, and ``Inconclusive``
    in the degenerate cases (clustered or non-dominant spectral bound, or a
    projection with zero entries).  Inconclusive reports carry sampled values
    of ``min e^{t(A - s(A))}`` as evidence.
    """
    A = _real_part(as_matrix(A), tol.pos)
    margin = metzler_margin(A)
    dom = _dominant(A, tol)
    common = dict(dominant_eigenvalue=dom.lam, dominance_gap=dom.gap,
                  projection_min_entry=dom.pmin, metzler_margin=margin)
    if margin >= -tol.pos:
        return PositivityReport(Verdict.POSITIVE, **common,
                                evidence_notes="Metzler matrix: the semigroup is positive")
    if dom.failure:
        return PositivityReport(Verdict.NOT_EVENTUALLY_POSITIVE, **common,
                                evidence_notes=dom.problem)
    if dom.P is not None and dom.gap > tol.spec * max(1.0, abs(dom.lam)):
        if dom.pmin > tol.pos:
            return PositivityReport(
                Verdict.EVENTUALLY_STRONGLY_POSITIVE, **common,
                evidence_notes="dominant simple real eigenvalue with entrywise positive projection")
        if dom.pmin < -tol.pos:
            return PositivityReport(
                Verdict.NOT_EVENTUALLY_POSITIVE, **common,
                evidence_notes="dominant projection has entries of both signs")
        note = "dominant projection is nonnegative but has zero entries"
    else:
        note = dom.problem or "dominance gap below tolerance"
    samples = _time_samples(A, dom, n_samples)
    return PositivityReport(Verdict.INCONCLUSIVE, **common, evidence_notes=note,
                            samples=samples)


def _time_samples(A, dom, n_samples):
    gap = dom.gap if np.isfinite(dom.gap) and dom.gap > 0 else 1.0
    t_max = 50.0 / gap
    out = []
    shifted = A - dom.lam * np.eye(A.shape[0])
    for t in np.geomspace(1e-3, t_max, n_samples):
        try:
            E = expm(shifted, t)
        except Overflow:
            break
        out.append({"t": float(t), "min_entry": float(E.min())})
    return out


def _check_real_eigenvalue(A, lam0, tol):
    w = np.linalg.eigvals(A)
    scale = max(np.linalg.norm(A, 2), 1.0)
    d = np.abs(w - lam0)
    if d.min() > tol.spec * scale * 1e2:
        raise PreconditionFailed(f"{lam0!r} is not an eigenvalue of A", lam0=lam0)
    return w, d


def neumann_extension_check(A, lam0, lam1, u=None, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Certify ``R(lam, A) >> 0`` on ``(lam0, lam1)`` from data at ``lam1`` alone.

    Returns True iff ``R(lam1, A) >= 0`` and some power ``R(lam1, A)^n`` with
    ``n <= dim`` is entrywise strictly positive.  Requires
    ``(lam0, lam1]`` to lie in the resolvent set; a real eigenvalue there
    raises :class:`SingularResolvent`.
    """
    A = _real_part(as_matrix(A), tol.pos)
    if not lam1 > lam0:
        raise PreconditionFailed("need lam1 > lam0")
    if u is not None and not np.all(np.asarray(u) > 0):
        raise ValueError("u must be entrywise strictly positive")
    w = np.linalg.eigvals(A)
    scale = max(np.linalg.norm(A, 2), 1.0)
    eps = tol.spec * scale
    real = w[np.abs(w.imag) <= eps].real
    inside = real[(real > lam0 + eps) & (real <= lam1 + eps)]
    if inside.size:
        raise SingularResolvent(f"eigenvalue {inside[0]!r} lies in (lam0, lam1]",
                                lam=float(inside[0]))
    R1 = np.real(resolvent(A, lam1, tol))
    if _relative_min(R1) < -tol.pos:
        return False
    Q = R1 / np.max(np.abs(R1))
    for _ in range(A.shape[0]):
        if _relative_min(Q) > tol.pos:
            return True
        Q = Q @ R1
        Q /= np.max(np.abs(Q))
    return False


def classify_resolvent_at(A, lam0, tol: Tolerances = DEFAULT_TOL, delta=None,
                          points_per_decade=64, decades=6) -> PositivityReport:
    """Eventual strong positivity of ``R(., A)`` at the real eigenvalue ``lam0``.

    ``R(lam, A)`` is sampled on a geometric mesh of ``(lam0, lam0 + delta]``
    accumulating at ``lam0``.  The largest mesh point ``lam1`` up to which
    every sample is entrywise positive is then certified with
    :func:`neumann_extension_check`.  ``delta`` defaults to half the distance
    from ``lam0`` to the rest of the spectrum.
    """
    A = _real_part(as_matrix(A), tol.pos)
    w, d = _check_real_eigenvalue(A, lam0, tol)
    margin = metzler_margin(A)
    i0 = int(np.argmin(d))
    others = np.delete(w, i0)
    if delta is None:
        delta = 0.5 * np.min(np.abs(others - lam0)) if others.size else 1.0
    es = eigensystem(A, tol)
    j = int(np.argmin(np.abs(es.eigenvalues - lam0)))
    P = np.real(es.projection(j)) if not es.clustered[j] else None
    pmin = _relative_min(P) if P is not None else np.nan
    gap = float(np.min(np.abs(others - lam0))) if others.size else np.inf
    lam_ref = float(np.real(es.eigenvalues[j]))
    common = dict(dominant_eigenvalue=lam_ref, dominance_gap=gap,
                  projection_min_entry=pmin, metzler_margin=margin)

    k = np.arange(decades * points_per_decade, -1, -1)
    mesh = lam_ref + delta * 10.0 ** (-k / points_per_decade)
    samples = []
    prefix = 0
    for lam in mesh:
        R = np.real(resolvent(A, lam, tol))
        m = _relative_min(R)
        samples.append({"lambda": float(lam), "min_entry": m})
        if m > tol.pos and prefix == len(samples) - 1:
            prefix += 1
    if prefix:
        lam1 = float(mesh[prefix - 1])
        if neumann_extension_check(A, lam_ref, lam1, tol=tol):
            return PositivityReport(
                Verdict.EVENTUALLY_STRONGLY_POSITIVE, **common, certified_lambda1=lam1,
                evidence_notes=f"R(lam, A) >> 0 certified on ({lam_ref:.6g}, {lam1:.6g}]",
                samples=samples[:prefix])
    if P is not None and pmin < -tol.pos:
        return PositivityReport(
            Verdict.NOT_EVENTUALLY_POSITIVE, **common, samples=samples[:8],
            evidence_notes="spectral projection at lam0 has a negative entry")
    return PositivityReport(
        Verdict.INCONCLUSIVE, **common, samples=samples[:8],
        evidence_notes="resolvent is not entrywise strictly positive near lam0")


def positivity_time(A, f, t_max=None, n_mesh=256, tol: Tolerances = DEFAULT_TOL):
    """Earliest time after which ``e^{tA} f`` stays nonnegative, or None.

    ``e^{tA} f`` is sampled at ``t = 0`` and on ``n_mesh`` log-spaced times
    in ``[1e-3, t_max]``; the last sign change is refined by bisection.
    ``None`` means no such time was found up to ``t_max``.  Nonnegativity is
    relative: ``min(x) >= -tau * max|x|``.  ``t_max`` defaults to
    ``50 / dominance_gap``.
    """
    A = _real_part(as_matrix(A), tol.pos)
    f = _real_part(np.asarray(f, dtype=complex if np.iscomplexobj(f) else float), tol.pos)
    if not np.any(f):
        raise PreconditionFailed("f must be non-zero")
    dom = _dominant(A, tol)
    # rescaling by e^{-t s} leaves signs unchanged and avoids overflow
    shifted = A - dom.lam * np.eye(A.shape[0])
    if t_max is None:
        gap = dom.gap if np.isfinite(dom.gap) and dom.gap > 0 else max(np.linalg.norm(A, 2), 1.0)
        t_max = 50.0 / gap

    def ok(t):
        x = expm(shifted, t, tol=tol) @ f
        return _relative_min(x) >= -tol.pos

    ts = np.concatenate([[0.0], np.geomspace(1e-3, t_max, n_mesh)])
    flags = np.array([ok(t) for t in ts])
    if not flags[-1]:
        return None
    bad = np.flatnonzero(~flags)
    if bad.size == 0:
        return 0.0
    lo, hi = ts[bad[-1]], ts[bad[-1] + 1]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-12 * max(hi, 1.0):
            break
    return float(hi)
