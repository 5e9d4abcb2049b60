"""The p = infinity endpoint: moment-angle membership and two projectors.

In log-moduli the projection ``y = r * F(z, T)`` of a point ``z`` onto the
moment-angle complex reads

    u - ell = <A_i, T> + ln r,      u <= 0 supported on a face of K_A,

with ``ell = log|z|``.  Because the rows of ``V`` together with ``1`` span
``ker A``, this is solvable iff ``V u = V ell`` and ``ln r`` is the mean of
``u - ell``.  :func:`project_combinatorial` finds ``u`` from a radial
decomposition (full support) or a cone search over the link of the zero
set; :func:`project_plimit` follows the minimisers ``T_p`` to large ``p``.
"""

from __future__ import annotations

import math
from itertools import combinations
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .configuration import AmbientPoint, Configuration, NotCenteredError, as_point, siegel_membership
from .geometry import Facet, HullFacets, radial_decompose
from .leaf import DEFAULT_SETTINGS, NotInSiegelSetError, SolverSettings, flow, minimize
from .simplicial import SimplicialComplex, build_complex, realize_polytope

__all__ = [
    "DEFAULT_SCHEDULE",
    "MomentAngleMembership",
    "ProjectionResult",
    "SweepRow",
    "mac_contains",
    "project_combinatorial",
    "project_plimit",
    "sweep",
    "escape_check",
]

DEFAULT_SCHEDULE = tuple(float(2 ** k) for k in range(1, 11))
LSQ_FLAG = 1e-9


@dataclass(frozen=True)
class MomentAngleMembership:
    inside: bool
    max_norm: float
    strict_set: tuple[int, ...]
    carrier: tuple[int, ...] | None


def mac_contains(K: SimplicialComplex, y, tol: float = 1e-8) -> MomentAngleMembership:
    """Is ``y`` in the polyhedral product ``(D^2, S^1)^K``?"""
    y = as_point(y)
    if y.m != K.m:
        raise ValueError(f"point has {y.m} coordinates, complex has {K.m} vertices")
    mod = y.moduli
    mx = float(mod.max()) if mod.size else 0.0
    strict = tuple(int(i) for i in np.flatnonzero(mod < 1.0 - tol))
    is_face = strict in K
    inside = bool(abs(mx - 1.0) <= tol and np.all(mod <= 1.0 + tol) and is_face)
    return MomentAngleMembership(inside, mx, strict, strict if is_face else None)


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    """``y = r * F(z, T_inf)`` with ``c = ln r``; ``u = log|y|`` on the support."""

    y: AmbientPoint
    T_inf: np.ndarray
    r: float
    sigma: tuple[int, ...]
    u: np.ndarray
    c: float
    phases: np.ndarray
    method: str
    lsq_residual: float = 0.0
    reconstruction_error: float = 0.0
    increments: tuple[float, ...] = ()
    schedule: tuple[float, ...] = ()

    @property
    def flagged(self) -> bool:
        return self.lsq_residual >= LSQ_FLAG


# --------------------------------------------------------------------------
# combinatorial projector
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Combinatorics:
    K: SimplicialComplex
    V: np.ndarray  # (m - d - 1, m)
    neg_hull: HullFacets | None  # hull of {-V_i}, indices into all m columns


@lru_cache(maxsize=256)
def _combinatorics(A: Configuration) -> _Combinatorics:
    if not A.is_centered:
        raise NotCenteredError("configuration is not centered at the origin")
    real = realize_polytope(A)
    V = np.array(real.V.to_float(), dtype=float).reshape(real.V.rows, A.m)
    hull = None
    if real.hull is not None:
        h = real.hull
        # P_bar = -P_A: same facets with negated normals
        facets = tuple(Facet(f.indices, tuple(-v for v in f.normal), f.offset) for f in h.facets)
        pts = tuple(tuple(-v for v in p) for p in h.points)
        hull = HullFacets(h.dim, pts, facets, h.vertices, h.interior, h.boundary_nonvertex)
    return _Combinatorics(real.boundary, V, hull)


def _shuffled(hull: HullFacets, order: Sequence[int]) -> HullFacets:
    facets = tuple(hull.facets[i] for i in order)
    return HullFacets(hull.dim, hull.points, facets, hull.vertices, hull.interior, hull.boundary_nonvertex)


def _solve_T(A: Configuration, g: np.ndarray) -> tuple[np.ndarray, float]:
    if A.d == 0:
        return np.zeros(0), float(np.abs(g).max())
    M = A.float_columns
    T = np.linalg.lstsq(M, g, rcond=None)[0]
    return T, float(np.abs(M @ T - g).max())


def _finish(A, z, u_sup, sup, x_zero, zero, sigma, method, **extra) -> ProjectionResult:
    m = A.m
    ell = np.log(z.moduli[list(sup)])
    w = np.zeros(m)
    w[list(sup)] = u_sup - ell
    w[list(zero)] = x_zero
    c = float(w.sum() / m)
    T, lsq = _solve_T(A, w - c)
    u = np.zeros(m)
    u[list(sup)] = u_sup
    u += 0.0  # no negative zeros in reports
    coords = np.zeros(m, dtype=complex)
    coords[list(sup)] = np.exp(u_sup) * z.phases[list(sup)]
    y = AmbientPoint(coords, z.threshold)
    recon = float(np.abs(math.exp(c) * flow(A, z, T).coords - coords).max())
    return ProjectionResult(
        y=y, T_inf=T, r=math.exp(c), sigma=tuple(sorted(sigma)), u=u, c=c,
        phases=z.phases, method=method, lsq_residual=lsq, reconstruction_error=recon, **extra,
    )


def project_combinatorial(
    A: Configuration,
    z,
    tol: float = 1e-9,
    facet_order: Sequence[int] | None = None,
) -> ProjectionResult:
    """Unique ``(r, T)`` with ``r * F(z, T)`` in the moment-angle complex.

    ``facet_order`` permutes the facet list of the dual polytope before the
    radial decomposition; the answer must not depend on it.
    """
    z = as_point(z)
    if not A.is_centered:
        raise NotCenteredError("configuration is not centered at the origin")
    if not siegel_membership(A, z)[0]:
        raise NotInSiegelSetError("0 is not in conv A(I_z)")
    data = _combinatorics(A)
    sup = z.support
    zero = z.zero_set
    ell = np.log(z.moduli[list(sup)])
    V = data.V
    if V.shape[0] == 0:
        # K_A = {emptyset}: every modulus becomes 1
        return _finish(A, z, np.zeros(len(sup)), sup, np.zeros(len(zero)), zero, (), "combinatorial")
    nu = V[:, list(sup)] @ ell
    if not zero:
        hull = data.neg_hull
        if facet_order is not None:
            hull = _shuffled(hull, facet_order)
        rd = radial_decompose(None, nu, hull=hull, tol=tol)
        u = np.zeros(A.m)
        if rd.face:
            u[list(rd.face)] = np.minimum(-rd.rho * rd.mu, 0.0)
        return _finish(A, z, u, sup, np.zeros(0), zero, rd.face, "combinatorial")
    return _project_stratum(A, z, data, sup, zero, ell, nu, tol)


def _project_stratum(A, z, data, sup, zero, ell, nu, tol):
    V = data.V
    J = frozenset(zero)
    VJ = V[:, list(zero)]
    Q, _ = np.linalg.qr(VJ)
    Q = Q[:, : np.linalg.matrix_rank(VJ)]

    def pi(x):
        return x - Q @ (Q.T @ x)

    target = pi(nu)
    scale = max(1.0, float(np.abs(nu).max()))
    best = None
    for F in sorted(data.K.maximal_faces, key=sorted):
        if not J <= F:
            continue
        L = sorted(F - J)
        if L:
            M = pi(-V[:, L])
            lam = np.linalg.lstsq(M, target, rcond=None)[0]
            miss = float(np.abs(M @ lam - target).max())
        else:
            lam = np.zeros(0)
            miss = float(np.abs(target).max())
        if miss > tol * scale or (lam.size and lam.min() < -tol * scale):
            continue
        key = (miss, -(lam.min() if lam.size else 0.0))
        if best is None or key < best[0]:
            best = (key, L, lam)
    if best is None:
        raise RuntimeError("no face of the link carries the projected log-moduli")
    _, L, lam = best
    lam = np.maximum(lam, 0.0)
    pos = {i: k for k, i in enumerate(sup)}
    u_sup = np.zeros(len(sup))
    for i, v in zip(L, lam):
        u_sup[pos[i]] = -v
    rhs = nu - V[:, list(sup)] @ u_sup
    x_zero = np.linalg.lstsq(VJ, rhs, rcond=None)[0]
    sigma = set(zero) | {i for i, v in zip(L, lam) if v > tol * scale}
    return _finish(A, z, u_sup, sup, x_zero, zero, sigma, "combinatorial")


# --------------------------------------------------------------------------
# p-continuation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    p: float
    T: np.ndarray
    norm: float
    x_inf: float
    residual: float
    iterations: int = 0


def _check_schedule(schedule) -> tuple[float, ...]:
    s = tuple(float(p) for p in schedule)
    if not s:
        raise ValueError("empty schedule")
    if s[0] < 1 or any(b <= a for a, b in zip(s, s[1:])):
        raise ValueError("schedule must be increasing with p >= 1")
    return s


def sweep(A: Configuration, z, schedule=DEFAULT_SCHEDULE,
          settings: SolverSettings = DEFAULT_SETTINGS) -> list[SweepRow]:
    """Warm-started minimisers ``T_p`` along ``schedule``."""
    z = as_point(z)
    schedule = _check_schedule(schedule)
    if not siegel_membership(A, z)[0]:
        raise NotInSiegelSetError("0 is not in conv A(I_z)")
    rows = []
    T = None
    for p in schedule:
        lm = minimize(A, z, p, settings, T0=T, check=False)
        T = lm.T
        x_inf = float(lm.f_p.moduli.max() / lm.norm)
        rows.append(SweepRow(p, T.copy(), lm.norm, x_inf, lm.residual, lm.iterations))
    return rows


def _softmax_weights(A, z, T, p):
    sup = list(z.support)
    s = np.log(z.moduli[sup]) + A.float_columns[sup] @ T
    e = np.exp(p * (s - s.max()))
    w = np.zeros(A.m)
    w[sup] = e / e.sum()
    return w


def _active_set_limit(A, z, rows, T_rich, ratio=0.05, agree=1e-3):
    """``T_inf`` from the equalities ``ell_i + <A_i, T> = M`` on the limiting
    maximal coordinates.

    Candidates are the coordinates whose weight does not collapse between
    the last two ``p``.  Every candidate subset whose equalities pin down
    ``(T, M)`` and keep all other coordinates below ``M`` is a vertex of the
    upper envelope; the limit is the one with the smallest ``M``.  Returns
    ``None`` if no subset qualifies or the winner strays from ``T_rich``.
    """
    p0, p1 = rows[-2].p, rows[-1].p
    w0 = _softmax_weights(A, z, rows[-2].T, p0)
    w1 = _softmax_weights(A, z, rows[-1].T, p1)
    cand = [i for i in z.support if w1[i] > 0 and w1[i] >= ratio * w0[i]]
    sup = list(z.support)
    Asup = A.float_columns[sup]
    ell_sup = np.log(z.moduli[sup])
    best = None
    for k in range(A.d + 1, len(cand) + 1):
        for S in combinations(cand, k):
            S = list(S)
            M = np.hstack([A.float_columns[S], -np.ones((k, 1))])
            if np.linalg.matrix_rank(M) < A.d + 1:
                continue
            ell = np.log(z.moduli[S])
            sol = np.linalg.lstsq(M, -ell, rcond=None)[0]
            if np.abs(M @ sol + ell).max() > 1e-9:
                continue
            T, top = sol[:-1], sol[-1]
            if (ell_sup + Asup @ T).max() > top + 1e-9 * (1 + abs(top)):
                continue
            if best is None or top < best[0] - 1e-12:
                best = (top, T)
    if best is None or np.abs(best[1] - T_rich).max() > agree:
        return None
    return best[1]


def project_plimit(
    A: Configuration,
    z,
    schedule=DEFAULT_SCHEDULE,
    settings: SolverSettings = DEFAULT_SETTINGS,
    extrapolation: str = "active-set",
    tol: float = 1e-8,
) -> ProjectionResult:
    """Projection from the large-``p`` minimisers.

    ``T_p - T_inf`` is ``D / p`` plus terms of order ``exp(-p * gap)`` where
    ``gap`` separates the limiting maximal coordinates from the rest.
    ``extrapolation`` picks how ``T_inf`` is read off the sweep:

    * ``"none"``: ``T`` at the last ``p``;
    * ``"richardson"``: cancel the ``1/p`` term using the last two points;
    * ``"active-set"`` (default): solve the equalities of the limiting
      maximal coordinates, falling back to Richardson when they do not
      determine ``T``.

    ``y`` is ``F(z, T)`` rescaled to unit sup-norm.
    """
    z = as_point(z)
    schedule = _check_schedule(schedule)
    if schedule[-1] < 1024:
        raise ValueError("schedule must end at p >= 1024")
    if extrapolation not in ("none", "richardson", "active-set"):
        raise ValueError(f"unknown extrapolation {extrapolation!r}")
    if not A.is_centered:
        raise NotCenteredError("configuration is not centered at the origin")
    rows = sweep(A, z, schedule, settings)
    incr = tuple(float(np.linalg.norm(b.T - a.T)) for a, b in zip(rows, rows[1:]))
    T = rows[-1].T
    used = "none"
    if extrapolation != "none" and len(rows) > 1:
        p0, p1 = rows[-2].p, rows[-1].p
        T = (p1 * rows[-1].T - p0 * rows[-2].T) / (p1 - p0)
        used = "richardson"
        if extrapolation == "active-set":
            T_act = _active_set_limit(A, z, rows, T)
            if T_act is not None:
                T, used = T_act, "active-set"
    f = flow(A, z, T)
    r = 1.0 / float(f.moduli.max())
    coords = r * f.coords
    y = AmbientPoint(coords, z.threshold)
    sup = list(z.support)
    u = np.zeros(A.m)
    u[sup] = np.log(np.abs(coords[sup]))
    sigma = tuple(int(i) for i in range(A.m) if i in z.zero_set or u[i] < -tol)
    return ProjectionResult(
        y=y, T_inf=T, r=r, sigma=sigma, u=u, c=math.log(r), phases=z.phases,
        method=f"plimit/{used}", increments=incr, schedule=schedule,
    )


def escape_check(A: Configuration, z, z_prime, schedule=DEFAULT_SCHEDULE,
                 settings: SolverSettings = DEFAULT_SETTINGS, tol: float = 1e-8) -> bool:
    """Does the retraction of ``z`` leave the box ``|x_i| <= |z'_i|`` for
    some scheduled ``p``?  ``z'`` must be a unit sup-norm point of the
    Siegel set lying off the moment-angle complex."""
    z = as_point(z)
    zp = as_point(z_prime)
    K = build_complex(A)
    if A.d == 0:
        raise ValueError("K_A bounds the simplex: no admissible z' exists")
    if abs(float(zp.moduli.max()) - 1.0) > tol:
        raise ValueError("z' must have sup-norm 1")
    if not siegel_membership(A, zp)[0]:
        raise ValueError("z' is not in the Siegel set")
    if mac_contains(K, zp, tol).inside:
        raise ValueError("z' lies in the moment-angle complex")
    bound = zp.moduli
    for row in sweep(A, z, schedule, settings):
        x = flow(A, z, row.T).moduli / row.norm
        if np.any(x > bound + tol):
            return True
    return False
