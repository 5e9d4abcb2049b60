"""Inner solver for one leaf: damped Newton on the log of the L^p norm.

For the rows ``a_i`` of ``A`` (only coordinates with ``z_i != 0``) and
``ell_i = log|z_i|`` the objective is

    phi(T) = (1/p) * log sum_i exp(p * (ell_i + <a_i, T>)),

i.e. ``log ||F(z, T)||_p``.  Its gradient is the weighted mean
``sum_i w_i a_i`` with softmax weights, which is exactly the critical
equation divided by ``sum_i |z_i|^p e^{p<a_i,T>}``; its infinity norm is
the residual reported everywhere else.

Two interchangeable implementations live here:

* ``newton_leaf_numba``: explicit loops compiled with ``numba.njit``.
* ``newton_leaf_numpy``: vectorised numpy.

``newton_leaf`` is bound to one of them at import time.  Set
``SIEGEL_BACKEND=numpy`` to force the numpy path (numba is also skipped
automatically when it cannot be imported).
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = [
    "BACKEND",
    "HAVE_NUMBA",
    "newton_leaf",
    "newton_leaf_numpy",
    "newton_leaf_numba",
    "log_norm",
    "CONVERGED",
    "MAX_ITER",
    "STALLED",
]

CONVERGED, MAX_ITER, STALLED = 0, 1, 2

# largest change of any log-modulus allowed in one Newton step (doubles on
# full acceptance); far from the minimum the Hessian is exponentially flat
STEP_CAP = 1.0
# below this Newton decrement phi cannot resolve progress any more
DECREMENT_FLOOR = 1e-10
PHI_SLACK = 1e-14
# a stall below FLOOR_FACTOR * p * (1 + max|s_i|) * max|A| counts as converged
FLOOR_FACTOR = 16 * 2.0 ** -52

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False


# --------------------------------------------------------------------------
# numpy path
# --------------------------------------------------------------------------

def _phi_np(A, ell, p, T):
    s = ell + A @ T
    mx = s.max()
    return mx + math.log(np.exp(p * (s - mx)).sum()) / p


def _derivs_np(A, ell, p, T):
    s = ell + A @ T
    mx = s.max()
    e = np.exp(p * (s - mx))
    tot = e.sum()
    w = e / tot
    g = w @ A
    C = A - g
    H = p * ((C.T * w) @ C)
    return mx + math.log(tot) / p, g, H


def _spd_solve_np(H, rhs):
    """Solve with a ridge if needed; steepest descent when ``H`` vanishes."""
    scale = float(np.abs(np.diag(H)).max())
    if scale > 0:
        ridge = 0.0
        eye = np.eye(H.shape[0])
        for _ in range(12):
            try:
                L = np.linalg.cholesky(H + ridge * eye)
            except np.linalg.LinAlgError:
                ridge = max(ridge * 100.0, 1e-14 * scale)
                continue
            return np.linalg.solve(L.T, np.linalg.solve(L, rhs))
    return rhs.copy()


def _reach_np(A, step):
    if not np.all(np.isfinite(step)):
        return math.inf
    with np.errstate(over="ignore", invalid="ignore"):
        r = float(np.abs(A @ step).max())
    return r if math.isfinite(r) else math.inf


def _floor_np(A, ell, p, T):
    """Rounding floor of the gradient: weights carry relative error ~p*eps*|s|."""
    s = np.abs(ell + A @ T).max()
    return FLOOR_FACTOR * p * (1.0 + s) * np.abs(A).max()


def newton_leaf_numpy(A, ell, p, T0, tol=1e-12, max_iter=200, shrink=0.5, c1=1e-4):
    """Returns ``(T, residual, iterations, status)``."""
    T = np.array(T0, dtype=float, copy=True)
    d = T.size
    if d == 0:
        return T, 0.0, 0, CONVERGED
    phi, g, H = _derivs_np(A, ell, p, T)
    res = float(np.abs(g).max())
    cap = STEP_CAP
    for it in range(max_iter):
        if res < tol:
            return T, res, it, CONVERGED
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            step = _spd_solve_np(H, -g)
        reach = _reach_np(A, step)
        if reach == math.inf or float(g @ step) >= 0:
            step = -g
            reach = _reach_np(A, step)
        if reach == 0.0 or reach == math.inf:
            return T, res, it, STALLED
        capped = reach > cap
        if capped:
            step *= cap / reach
        slope = float(g @ step)
        if not capped and -slope < DECREMENT_FLOOR:
            # phi no longer resolves the decrease: judge by the gradient
            trial = T + step
            phi_t, g_t, H_t = _derivs_np(A, ell, p, trial)
            res_t = float(np.abs(g_t).max())
            if res_t < res and phi_t <= phi + PHI_SLACK * (1.0 + abs(phi)):
                T, phi, g, H, res = trial, phi_t, g_t, H_t, res_t
                continue
            return T, res, it, CONVERGED if res < _floor_np(A, ell, p, T) else STALLED
        accepted = False
        for attempt in range(2):
            t = 1.0
            while t > 1e-12:
                trial = T + t * step
                phi_t = _phi_np(A, ell, p, trial)
                if phi_t <= phi + c1 * t * slope and phi_t < phi:
                    accepted = True
                    break
                t *= shrink
            if accepted or attempt:
                break
            # Newton direction unusable (ill-conditioned H): steepest descent
            step = -g
            reach = _reach_np(A, step)
            capped = reach > cap
            if capped:
                step *= cap / reach
            slope = float(g @ step)
        if not accepted:
            return T, res, it, CONVERGED if res < _floor_np(A, ell, p, T) else STALLED
        if capped and t == 1.0:
            cap *= 2.0
        T = trial
        phi, g, H = _derivs_np(A, ell, p, T)
        res = float(np.abs(g).max())
    ok = res < tol or res < _floor_np(A, ell, p, T)
    return T, res, max_iter, CONVERGED if ok else MAX_ITER


def log_norm(A, ell, p, T) -> float:
    """``log ||F(z, T)||_p`` restricted to the support."""
    if ell.size == 0:
        return -math.inf
    return _phi_np(A, ell, p, np.asarray(T, dtype=float))


# --------------------------------------------------------------------------
# numba path
# --------------------------------------------------------------------------

def _phi_loop(A, ell, p, T):
    k, d = A.shape
    s = np.empty(k)
    mx = -np.inf
    for i in range(k):
        v = ell[i]
        for j in range(d):
            v += A[i, j] * T[j]
        s[i] = v
        if v > mx:
            mx = v
    tot = 0.0
    for i in range(k):
        tot += math.exp(p * (s[i] - mx))
    return mx + math.log(tot) / p


def _derivs_loop(A, ell, p, T, g, H):
    k, d = A.shape
    s = np.empty(k)
    mx = -np.inf
    for i in range(k):
        v = ell[i]
        for j in range(d):
            v += A[i, j] * T[j]
        s[i] = v
        if v > mx:
            mx = v
    tot = 0.0
    for i in range(k):
        s[i] = math.exp(p * (s[i] - mx))
        tot += s[i]
    for a in range(d):
        g[a] = 0.0
        for b in range(d):
            H[a, b] = 0.0
    for i in range(k):
        s[i] /= tot
        for a in range(d):
            g[a] += s[i] * A[i, a]
    for i in range(k):
        w = s[i]
        for a in range(d):
            ca = w * (A[i, a] - g[a])
            for b in range(a + 1):
                H[a, b] += ca * (A[i, b] - g[b])
    for a in range(d):
        for b in range(a + 1):
            H[a, b] *= p
            H[b, a] = H[a, b]
    return mx + math.log(tot) / p


def _spd_solve_loop(H, rhs, out):
    """Cholesky solve with a growing ridge; falls back to ``out = rhs``
    (steepest descent) when ``H`` vanishes or stays indefinite."""
    d = H.shape[0]
    L = np.zeros((d, d))
    scale = 0.0
    for a in range(d):
        if abs(H[a, a]) > scale:
            scale = abs(H[a, a])
    ok = False
    if scale > 0.0:
        ridge = 0.0
        for attempt in range(12):
            ok = True
            for a in range(d):
                for b in range(a + 1):
                    acc = H[a, b]
                    if a == b:
                        acc += ridge
                    for c in range(b):
                        acc -= L[a, c] * L[b, c]
                    if a == b:
                        if acc <= 0.0:
                            ok = False
                            break
                        L[a, a] = math.sqrt(acc)
                    else:
                        L[a, b] = acc / L[b, b]
                if not ok:
                    break
            if ok:
                break
            ridge = max(ridge * 100.0, 1e-14 * scale)
    if not ok:
        for a in range(d):
            out[a] = rhs[a]
        return
    y = np.empty(d)
    for a in range(d):
        acc = rhs[a]
        for c in range(a):
            acc -= L[a, c] * y[c]
        y[a] = acc / L[a, a]
    for a in range(d - 1, -1, -1):
        acc = y[a]
        for c in range(a + 1, d):
            acc -= L[c, a] * out[c]
        out[a] = acc / L[a, a]


def _reach_loop(A, step):
    k, d = A.shape
    for a in range(d):
        if not math.isfinite(step[a]):
            return math.inf
    reach = 0.0
    for i in range(k):
        v = 0.0
        for a in range(d):
            v += A[i, a] * step[a]
        v = abs(v)
        if not math.isfinite(v):
            return math.inf
        if v > reach:
            reach = v
    return reach


def _floor_loop(A, ell, p, T, ffac):
    k, d = A.shape
    smax = 0.0
    amax = 0.0
    for i in range(k):
        v = ell[i]
        for a in range(d):
            v += A[i, a] * T[a]
            amax = max(amax, abs(A[i, a]))
        smax = max(smax, abs(v))
    return ffac * p * (1.0 + smax) * amax


def _newton_loop(A, ell, p, T0, tol, max_iter, shrink, c1, cap, floor, slack, ffac):
    k, d = A.shape
    T = T0.copy()
    if d == 0:
        return T, 0.0, 0, 0
    g = np.empty(d)
    H = np.empty((d, d))
    step = np.empty(d)
    neg = np.empty(d)
    trial = np.empty(d)
    g_t = np.empty(d)
    H_t = np.empty((d, d))
    phi = _derivs_loop(A, ell, p, T, g, H)
    res = 0.0
    for a in range(d):
        res = max(res, abs(g[a]))
    for it in range(max_iter):
        if res < tol:
            return T, res, it, 0
        for a in range(d):
            neg[a] = -g[a]
        _spd_solve_loop(H, neg, step)
        reach = _reach_loop(A, step)
        slope = 0.0
        for a in range(d):
            slope += g[a] * step[a]
        if reach == math.inf or not slope < 0.0:
            for a in range(d):
                step[a] = neg[a]
            reach = _reach_loop(A, step)
        if reach == 0.0 or reach == math.inf:
            return T, res, it, 2
        capped = reach > cap
        if capped:
            for a in range(d):
                step[a] *= cap / reach
        slope = 0.0
        for a in range(d):
            slope += g[a] * step[a]
        if not capped and -slope < floor:
            for a in range(d):
                trial[a] = T[a] + step[a]
            phi_t = _derivs_loop(A, ell, p, trial, g_t, H_t)
            res_t = 0.0
            for a in range(d):
                res_t = max(res_t, abs(g_t[a]))
            if res_t < res and phi_t <= phi + slack * (1.0 + abs(phi)):
                T[:] = trial
                g[:] = g_t
                H[:, :] = H_t
                phi = phi_t
                res = res_t
                continue
            if res < _floor_loop(A, ell, p, T, ffac):
                return T, res, it, 0
            return T, res, it, 2
        accepted = False
        for attempt in range(2):
            t = 1.0
            while t > 1e-12:
                for a in range(d):
                    trial[a] = T[a] + t * step[a]
                phi_t = _phi_loop(A, ell, p, trial)
                if phi_t <= phi + c1 * t * slope and phi_t < phi:
                    accepted = True
                    break
                t *= shrink
            if accepted or attempt > 0:
                break
            for a in range(d):
                step[a] = neg[a]
            reach = _reach_loop(A, step)
            capped = reach > cap
            if capped:
                for a in range(d):
                    step[a] *= cap / reach
            slope = 0.0
            for a in range(d):
                slope += g[a] * step[a]
        if not accepted:
            if res < _floor_loop(A, ell, p, T, ffac):
                return T, res, it, 0
            return T, res, it, 2
        if capped and t == 1.0:
            cap *= 2.0
        T[:] = trial
        phi = _derivs_loop(A, ell, p, T, g, H)
        res = 0.0
        for a in range(d):
            res = max(res, abs(g[a]))
    if res < tol or res < _floor_loop(A, ell, p, T, ffac):
        return T, res, max_iter, 0
    return T, res, max_iter, 1


if HAVE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)
    _phi_loop = _jit(_phi_loop)
    _derivs_loop = _jit(_derivs_loop)
    _spd_solve_loop = _jit(_spd_solve_loop)
    _reach_loop = _jit(_reach_loop)
    _floor_loop = _jit(_floor_loop)
    _newton_loop_jit = _jit(_newton_loop)

    def newton_leaf_numba(A, ell, p, T0, tol=1e-12, max_iter=200, shrink=0.5, c1=1e-4):
        T, res, it, status = _newton_loop_jit(
            np.ascontiguousarray(A, dtype=np.float64),
            np.ascontiguousarray(ell, dtype=np.float64),
            float(p),
            np.ascontiguousarray(T0, dtype=np.float64),
            float(tol), int(max_iter), float(shrink), float(c1), STEP_CAP,
            DECREMENT_FLOOR, PHI_SLACK, FLOOR_FACTOR,
        )
        return T, float(res), int(it), int(status)
else:  # pragma: no cover
    newton_leaf_numba = None


def _select_backend() -> str:
    want = os.environ.get("SIEGEL_BACKEND", "numba").strip().lower()
    if want not in ("numba", "numpy"):
        raise ValueError(f"SIEGEL_BACKEND must be 'numba' or 'numpy', got {want!r}")
    if want == "numba" and not HAVE_NUMBA:
        return "numpy"
    return want


BACKEND = _select_backend()
newton_leaf = newton_leaf_numba if BACKEND == "numba" else newton_leaf_numpy
