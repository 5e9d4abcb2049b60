"""Reference implementations that share no code with the package.

Exact oracles use sympy; floating oracles use scipy.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np
import sympy
from scipy.optimize import linprog, minimize
from scipy.spatial import ConvexHull
from scipy.special import logsumexp


def _sym(v):
    v = Fraction(v)
    return sympy.Rational(v.numerator, v.denominator)


def caratheodory_origin_in_hull(points) -> bool:
    """Brute force: 0 is in conv(P) iff some affinely independent subset
    of size <= d+1 has 0 with nonnegative barycentric coordinates."""
    pts = [[_sym(x) for x in p] for p in points]
    d = len(pts[0])
    for k in range(1, min(d + 1, len(pts)) + 1):
        for S in combinations(range(len(pts)), k):
            M = sympy.Matrix([[pts[i][r] for i in S] for r in range(d)] + [[1] * k])
            if M.rank() < k:
                continue
            rhs = sympy.Matrix([0] * d + [1])
            try:
                sol, params = M.gauss_jordan_solve(rhs)
            except ValueError:
                continue
            if params.shape[0]:
                continue
            if all(v >= 0 for v in sol):
                return True
    return False


def lp_origin_in_hull(points) -> bool:
    P = np.array([[float(x) for x in p] for p in points]).T
    n = P.shape[1]
    A_eq = np.vstack([P, np.ones((1, n))])
    b_eq = np.r_[np.zeros(P.shape[0]), 1.0]
    res = linprog(np.zeros(n), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * n, method="highs")
    return res.status == 0


def lp_origin_in_relint(points) -> bool:
    """max t subject to sum lam_i p_i = 0, sum lam = 1, lam_i >= t."""
    P = np.array([[float(x) for x in p] for p in points]).T
    d, n = P.shape
    c = np.r_[np.zeros(n), -1.0]
    A_eq = np.vstack([np.c_[P, np.zeros(d)], np.r_[np.ones(n), 0.0][None, :]])
    b_eq = np.r_[np.zeros(d), 1.0]
    A_ub = np.c_[-np.eye(n), np.ones(n)]
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(n), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * n + [(None, None)], method="highs")
    return res.status == 0 and -res.fun > 1e-9


def sympy_affine_nullspace(V_rows, m):
    M = sympy.Matrix([[_sym(x) for x in r] for r in V_rows] + [[1] * m])
    return [list(v) for v in M.nullspace()]


def sympy_rank(rows):
    return sympy.Matrix([[_sym(x) for x in r] for r in rows]).rank()


def sympy_row_equivalent(a, b) -> bool:
    Ma = sympy.Matrix([[_sym(x) for x in r] for r in a])
    Mb = sympy.Matrix([[_sym(x) for x in r] for r in b])
    return Ma.rank() == Mb.rank() == Ma.col_join(Mb).rank()


def brute_force_complex(columns, m):
    """All sigma with 0 in conv of the complement, via scipy LPs."""
    faces = set()
    for k in range(m):
        for S in combinations(range(m), k):
            rest = [columns[i] for i in range(m) if i not in S]
            if lp_origin_in_hull(rest):
                faces.add(frozenset(S))
    return faces


def scipy_hull(points):
    """(vertex set, facet vertex sets) from qhull."""
    P = np.array([[float(x) for x in p] for p in points])
    if P.shape[1] == 1:
        lo, hi = int(np.argmin(P[:, 0])), int(np.argmax(P[:, 0]))
        return {lo, hi}, {frozenset({lo}), frozenset({hi})}
    h = ConvexHull(P)
    eq = h.equations
    facets = set()
    for row in eq:
        on = np.flatnonzero(np.abs(P @ row[:-1] + row[-1]) < 1e-7)
        facets.add(frozenset(int(i) for i in on))
    return set(int(v) for v in h.vertices), facets


def leaf_min_scipy(A_float, z, p):
    """Minimise (1/p) log sum |z_i|^p exp(p <A_i, T>) with BFGS."""
    sup = np.abs(z) > 0
    Af = A_float[sup]
    ell = np.log(np.abs(z[sup]))

    def f(T):
        return logsumexp(p * (ell + Af @ T)) / p

    def g(T):
        w = np.exp(p * (ell + Af @ T) - logsumexp(p * (ell + Af @ T)))
        return w @ Af

    res = minimize(f, np.zeros(Af.shape[1]), jac=g, method="BFGS", options={"gtol": 1e-12})
    return res.x


def p2_critical_T(A_float, z):
    """p = 2 critical equation sum A_i |z_i|^2 exp(2<A_i,T>) = 0 via fsolve."""
    import warnings

    from scipy.optimize import fsolve

    w = np.abs(z) ** 2
    fun = lambda T: (w * np.exp(2 * A_float @ T)) @ A_float  # noqa: E731
    with warnings.catch_warnings():
        # stalls at rounding level are reported as warnings; callers compare values
        warnings.simplefilter("ignore", RuntimeWarning)
        return fsolve(fun, np.zeros(A_float.shape[1]), xtol=1e-12)


def minimax_T(A_float, z):
    """argmin_T max_i (log|z_i| + <A_i, T>) over the support, as an LP."""
    sup = np.abs(z) > 0
    Af = A_float[sup]
    ell = np.log(np.abs(z[sup]))
    n, d = Af.shape
    c = np.r_[np.zeros(d), 1.0]
    A_ub = np.c_[Af, -np.ones(n)]
    res = linprog(c, A_ub=A_ub, b_ub=-ell, bounds=[(None, None)] * (d + 1), method="highs")
    assert res.status == 0
    return res.x[:d], res.x[d]
