"""Convex geometry over the rationals.

Hull and relative-interior membership are decided exactly by small
linear programs (see :func:`siegel.rational.simplex_max`).  Facet
enumeration is brute force over point subsets and is only meant for the
desk-scale polytopes this package deals with (ambient dimension <= 6,
a few dozen points).  The radial decomposition works in floating point
because its input typically comes from logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .rational import (
    RationalMatrix,
    as_fraction,
    dot,
    nullspace,
    primitive,
    rank,
    rref,
    simplex_max,
)

__all__ = [
    "HullCertificate",
    "Facet",
    "HullFacets",
    "RadialDecomposition",
    "DegenerateSpanError",
    "origin_in_hull",
    "origin_in_relint",
    "affine_nullspace",
    "facet_enumeration",
    "radial_decompose",
]


class DegenerateSpanError(ValueError):
    """Points do not affinely span their ambient space."""


@dataclass(frozen=True)
class HullCertificate:
    """Convex coefficients witnessing ``0 = sum lambda_i * point_i``."""

    lam: tuple[Fraction, ...]
    strict: bool = False

    def verify(self, points: Sequence[Sequence]) -> bool:
        pts = _as_points(points)
        if len(pts) != len(self.lam):
            return False
        if any(v < 0 for v in self.lam) or sum(self.lam) != 1:
            return False
        if self.strict and any(v <= 0 for v in self.lam):
            return False
        d = len(pts[0]) if pts else 0
        return all(dot(self.lam, [p[k] for p in pts]) == 0 for k in range(d))

    def lifted(self, indices: Sequence[int], m: int) -> "HullCertificate":
        """Spread coefficients of a subtuple back onto ``m`` slots."""
        lam = [Fraction(0)] * m
        for i, v in zip(indices, self.lam):
            lam[i] = v
        return HullCertificate(tuple(lam), self.strict)


def _as_points(points) -> list[tuple[Fraction, ...]]:
    pts = [tuple(as_fraction(v) for v in p) for p in points]
    if pts:
        d = len(pts[0])
        if any(len(p) != d for p in pts):
            raise ValueError("points have mismatched dimensions")
    return pts


def origin_in_hull(points: Sequence[Sequence]) -> HullCertificate | None:
    """Exact test for ``0 in conv(points)``.

    Returns a certificate (a basic feasible solution of the phase-one
    problem) or ``None``.
    """
    pts = _as_points(points)
    if not pts:
        raise ValueError("need at least one point")
    d = len(pts[0])
    k = len(pts)
    A = [[p[r] for p in pts] for r in range(d)] + [[Fraction(1)] * k]
    b = [Fraction(0)] * d + [Fraction(1)]
    res = simplex_max(A, b, [Fraction(0)] * k)
    if res.status != "optimal":
        return None
    return HullCertificate(res.x)


def origin_in_relint(points: Sequence[Sequence]) -> HullCertificate | None:
    """Exact test for ``0`` in the relative interior of ``conv(points)``.

    Maximises the smallest coefficient ``t`` over all convex
    representations of the origin; the answer is positive iff a strictly
    positive representation exists.
    """
    pts = _as_points(points)
    if not pts:
        raise ValueError("need at least one point")
    d = len(pts[0])
    k = len(pts)
    # variables: lambda (k), slack s (k), t (1)
    nvar = 2 * k + 1
    A, b = [], []
    for r in range(d):
        A.append([p[r] for p in pts] + [Fraction(0)] * (k + 1))
        b.append(Fraction(0))
    A.append([Fraction(1)] * k + [Fraction(0)] * (k + 1))
    b.append(Fraction(1))
    for j in range(k):
        row = [Fraction(0)] * nvar
        row[j] = Fraction(1)
        row[k + j] = Fraction(-1)
        row[-1] = Fraction(-1)
        A.append(row)
        b.append(Fraction(0))
    c = [Fraction(0)] * (2 * k) + [Fraction(1)]
    res = simplex_max(A, b, c)
    if res.status != "optimal" or res.value <= 0:
        return None
    return HullCertificate(res.x[:k], strict=True)


def affine_nullspace(V: RationalMatrix) -> RationalMatrix:
    """Basis of ``{x : sum_i V_i x_i = 0, sum_i x_i = 0}`` as matrix rows.

    ``V_i`` are the columns of ``V``.  The basis is the standard one read
    off the reduced row echelon form (one vector per free column).
    """
    m = V.cols
    system = V.to_rows() + [[Fraction(1)] * m]
    basis = nullspace(system, m)
    if not basis:
        return RationalMatrix(0, m, ())
    return RationalMatrix.from_rows(basis, m)


# --------------------------------------------------------------------------
# facets
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Facet:
    """Supporting hyperplane ``normal . x <= offset`` with the points on it."""

    indices: frozenset[int]
    normal: tuple[Fraction, ...]
    offset: Fraction


@dataclass(frozen=True)
class HullFacets:
    dim: int
    points: tuple[tuple[Fraction, ...], ...]
    facets: tuple[Facet, ...]
    vertices: tuple[int, ...]
    interior: tuple[int, ...]
    boundary_nonvertex: tuple[int, ...] = ()
    _float_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def float_halfspaces(self):
        """``(normals, offsets)`` as float arrays, cached."""
        if "hs" not in self._float_cache:
            N = np.array([[float(v) for v in f.normal] for f in self.facets], dtype=float)
            o = np.array([float(f.offset) for f in self.facets], dtype=float)
            self._float_cache["hs"] = (N.reshape(len(self.facets), self.dim), o)
        return self._float_cache["hs"]

    def facet_vertex_sets(self) -> list[frozenset[int]]:
        vs = set(self.vertices)
        return [frozenset(i for i in f.indices if i in vs) for f in self.facets]


def _hyperplane_through(pts: list[tuple[Fraction, ...]]):
    base = pts[0]
    rows = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    n = len(base)
    ns = nullspace(rows, n) if rows else [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    if len(ns) != 1:
        return None
    a = primitive(ns[0])
    return a, dot(a, base)


def facet_enumeration(points: Sequence[Sequence]) -> HullFacets:
    """All facets of ``conv(points)`` with exact supporting hyperplanes.

    Brute force over ``n``-subsets of the points; cost grows like
    ``C(len(points), n)`` so this is strictly a small-instance routine.
    Raises :class:`DegenerateSpanError` if the points are not
    full-dimensional (project them first).
    """
    pts = _as_points(points)
    if not pts:
        raise ValueError("need at least one point")
    n = len(pts[0])
    N = len(pts)
    if n == 0:
        # a single point in R^0: no facets, nothing interior
        return HullFacets(0, tuple(pts), (), tuple(range(N)), (), ())
    diffs = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    if rank(diffs, n) != n:
        raise DegenerateSpanError(f"points do not affinely span R^{n}")

    found: dict[frozenset[int], Facet] = {}
    for combo in combinations(range(N), n):
        sub = [pts[i] for i in combo]
        if any(sub[i] == sub[j] for i in range(n) for j in range(i)):
            continue
        hp = _hyperplane_through(sub)
        if hp is None:
            continue
        a, off = hp
        vals = [dot(a, p) - off for p in pts]
        if all(v <= 0 for v in vals):
            pass
        elif all(v >= 0 for v in vals):
            a = tuple(-v for v in a)
            off = -off
            vals = [-v for v in vals]
        else:
            continue
        on = frozenset(i for i, v in enumerate(vals) if v == 0)
        if on not in found:
            found[on] = Facet(on, a, off)

    facets = tuple(sorted(found.values(), key=lambda f: sorted(f.indices)))
    on_any = set().union(*(f.indices for f in facets)) if facets else set()
    vertices = []
    for j in range(N):
        others = [tuple(a - b for a, b in zip(q, pts[j])) for q in pts if q != pts[j]]
        if not others or origin_in_hull(others) is None:
            vertices.append(j)
    interior = tuple(j for j in range(N) if j not in on_any)
    bnv = tuple(j for j in sorted(on_any) if j not in vertices)
    return HullFacets(n, tuple(pts), facets, tuple(vertices), interior, bnv)


# --------------------------------------------------------------------------
# radial decomposition
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RadialDecomposition:
    """``nu = rho * sum_i mu_i v_i`` over the vertices of a boundary face."""

    rho: float
    face: tuple[int, ...]
    mu: np.ndarray

    def reconstruct(self, vertices) -> np.ndarray:
        V = np.asarray(vertices, dtype=float)
        if not self.face:
            return np.zeros(V.shape[1] if V.ndim == 2 else 0)
        return self.rho * (self.mu @ V[list(self.face)])


def radial_decompose(
    polytope_vertices: Sequence[Sequence],
    nu,
    hull: HullFacets | None = None,
    tol: float = 1e-9,
) -> RadialDecomposition:
    """Write ``nu`` as ``rho * nu0`` with ``nu0`` on the polytope boundary.

    The polytope must contain the origin in its interior.  ``rho`` is the
    gauge ``max_f <a_f, nu> / b_f`` over facets ``a_f . x <= b_f``.  When
    several facets attain the maximum (within ``tol`` relative) the
    reported face is their intersection, i.e. the minimal face carrying
    ``nu0``.  Passing a precomputed ``hull`` skips the exact checks.
    """
    nu = np.asarray(nu, dtype=float).ravel()
    if hull is None:
        if origin_in_relint(polytope_vertices) is None:
            raise ValueError("polytope does not contain the origin in its interior")
        hull = facet_enumeration(polytope_vertices)
    if hull.dim != nu.size:
        raise ValueError(f"nu has dimension {nu.size}, polytope has {hull.dim}")
    if not np.any(nu):
        return RadialDecomposition(0.0, (), np.zeros(0))
    normals, offsets = hull.float_halfspaces()
    ratios = (normals @ nu) / offsets
    rho = float(ratios.max())
    hit = np.flatnonzero(ratios >= rho - tol * abs(rho))
    vsets = hull.facet_vertex_sets()
    face = frozenset(vsets[hit[0]])
    for h in hit[1:]:
        face &= vsets[h]
    face = tuple(sorted(face))
    P = np.array([[float(v) for v in hull.points[i]] for i in face], dtype=float)
    target = nu / rho
    M = np.vstack([P.T, np.ones(len(face))])
    rhs = np.concatenate([target, [1.0]])
    mu = np.linalg.lstsq(M, rhs, rcond=None)[0]
    return RadialDecomposition(rho, face, mu)
