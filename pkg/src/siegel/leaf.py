"""Norm minima along the leaves of the exponential action.

The action is ``F(z, T) = (z_i * exp(<A_i, T>))_i``.  For a point ``z``
whose support carries the origin in its convex hull the map
``T -> ||F(z, T)||_p`` has a unique minimiser ``T_p(z)``; the functions
below compute it, the retraction ``f_p / ||f_p||_p`` onto ``X_A(p)`` and
the inverse of the chart ``(x, T, r) -> r * F(x, T)``.

Zero coordinates never enter the sums; they stay exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .configuration import AmbientPoint, Configuration, as_point, siegel_membership

__all__ = [
    "SolverSettings",
    "LeafMinimum",
    "NotInSiegelSetError",
    "ConvergenceError",
    "flow",
    "chart",
    "minimize",
    "retract",
    "xap_residual",
    "chart_invert",
]


class NotInSiegelSetError(ValueError):
    """The leaf through the point accumulates at the origin."""


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverSettings:
    tol: float = 1e-12
    max_iter: int = 200
    shrink: float = 0.5
    sufficient_decrease: float = 1e-4

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")


DEFAULT_SETTINGS = SolverSettings()


@dataclass(frozen=True, eq=False)
class LeafMinimum:
    p: float
    T: np.ndarray
    f_p: AmbientPoint
    norm: float
    residual: float
    iterations: int = 0


def _check_sizes(A: Configuration, z: AmbientPoint):
    if z.m != A.m:
        raise ValueError(f"point has {z.m} coordinates, configuration has {A.m}")


def flow(A: Configuration, z, T) -> AmbientPoint:
    """``F(z, T)``; moduli are formed as ``exp(log|z_i| + <A_i, T>)``."""
    z = as_point(z)
    _check_sizes(A, z)
    T = np.asarray(T, dtype=float).ravel()
    if T.size != A.d:
        raise ValueError(f"T has {T.size} components, expected {A.d}")
    out = np.zeros(A.m, dtype=complex)
    nz = z.moduli > 0
    shift = A.float_columns[nz] @ T
    with np.errstate(over="ignore"):
        mod = np.exp(np.log(z.moduli[nz]) + shift)
    if not np.all(np.isfinite(mod)):
        raise OverflowError("flow overflows double precision")
    out[nz] = mod * z.phases[nz]
    return AmbientPoint(out, z.threshold)


def chart(A: Configuration, x, T, r: float) -> AmbientPoint:
    """``r * F(x, T)``."""
    f = flow(A, x, T)
    return AmbientPoint(r * f.coords, f.threshold)


def _support_data(A: Configuration, z: AmbientPoint):
    sup = np.array(z.support, dtype=np.int64)
    Asub = np.ascontiguousarray(A.float_columns[sup])
    ell = np.log(z.moduli[sup])
    return sup, Asub, ell


def minimize(
    A: Configuration,
    z,
    p: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
    T0=None,
    check: bool = True,
) -> LeafMinimum:
    """Unique minimiser of ``||F(z, T)||_p`` over ``T``.

    ``T0`` warm-starts the Newton iteration (default: the origin).  Pass
    ``check=False`` to skip the exact Siegel-set test when the caller has
    already done it for this support.
    """
    z = as_point(z)
    _check_sizes(A, z)
    if p < 1:
        raise ValueError("p must be >= 1")
    if check and not siegel_membership(A, z)[0]:
        raise NotInSiegelSetError("0 is not in conv A(I_z): the leaf has no norm minimum")
    sup, Asub, ell = _support_data(A, z)
    if sup.size == 0:
        raise NotInSiegelSetError("zero point")
    T0 = np.zeros(A.d) if T0 is None else np.asarray(T0, dtype=float).ravel()
    T, res, it, status = _kernels.newton_leaf(
        Asub, ell, float(p), T0,
        settings.tol, settings.max_iter, settings.shrink, settings.sufficient_decrease,
    )
    if status != _kernels.CONVERGED:
        reason = "max_iter reached" if status == _kernels.MAX_ITER else "line search stalled"
        raise ConvergenceError(f"Newton solve failed at p={p}: {reason}, residual {res:.3e}")
    f = flow(A, z, T)
    norm = math.exp(_kernels.log_norm(Asub, ell, float(p), T))
    return LeafMinimum(float(p), T, f, norm, res, it)


def retract(A: Configuration, z, p: float, settings: SolverSettings = DEFAULT_SETTINGS,
            T0=None, check: bool = True) -> AmbientPoint:
    """``f_p(z) / ||f_p(z)||_p``, a point of ``X_A(p)``."""
    lm = minimize(A, z, p, settings, T0=T0, check=check)
    return AmbientPoint(lm.f_p.coords / lm.norm, lm.f_p.threshold)


def xap_residual(A: Configuration, x, p: float) -> tuple[float, float]:
    """``(||sum_i A_i |x_i|^p||_inf, | ||x||_p - 1 |)``."""
    x = as_point(x)
    _check_sizes(A, x)
    w = x.moduli ** p
    moment = float(np.abs(w @ A.float_columns).max()) if A.d else 0.0
    return moment, abs(float(w.sum()) ** (1.0 / p) - 1.0)


def chart_invert(A: Configuration, y, p: float, settings: SolverSettings = DEFAULT_SETTINGS):
    """``(x, T, r)`` with ``x`` on ``X_A(p)`` and ``r * F(x, T) = y``."""
    lm = minimize(A, y, p, settings)
    x = AmbientPoint(lm.f_p.coords / lm.norm, lm.f_p.threshold)
    return x, -lm.T, lm.norm
