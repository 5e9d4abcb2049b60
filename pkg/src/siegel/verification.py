"""Rigidity cross-check and finite-difference Jacobian certificates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .configuration import AmbientPoint, Configuration, NotCenteredError, admissibility, gale_dual
from .corpus import random_point
from .leaf import retract, xap_residual
from .projection import project_combinatorial
from .simplicial import build_complex, verify_isomorphism

__all__ = [
    "RigidityReport",
    "rigidity_check",
    "Stratum",
    "JacobianCertificate",
    "jacobian_rank",
    "cube_sample",
    "orthant_sample",
    "RANK_THRESHOLD",
]

RANK_THRESHOLD = 1e-6


# --------------------------------------------------------------------------
# rigidity
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RigidityReport:
    """``diagram_residual`` is the round trip through the moment-angle
    complexes; ``direct_residual`` the round trip by permuting and
    retracting only; ``commutativity_residual`` measures how far the direct
    map is from the routed one."""

    permutation: tuple[int, ...]
    diagram_residual: float
    direct_residual: float
    commutativity_residual: float
    isomorphism: bool
    passed: bool
    n_samples: int
    tol: float


def _permute(coords: np.ndarray, phi: Sequence[int]) -> np.ndarray:
    out = np.empty_like(coords)
    out[list(phi)] = coords
    return out


def _unpermute(coords: np.ndarray, phi: Sequence[int]) -> np.ndarray:
    return coords[list(phi)]


def _require_centered_admissible(A: Configuration):
    if not A.is_centered:
        raise NotCenteredError("configuration is not centered at the origin")
    if not admissibility(A).admissible:
        raise ValueError("configuration is not admissible")


def rigidity_check(
    A: Configuration,
    A2: Configuration,
    phi: Sequence[int],
    n_samples: int = 10,
    gen: np.random.Generator | None = None,
    tol: float = 1e-8,
) -> RigidityReport:
    """Numerical check of the map ``X_A(2) -> X_A'(2)`` induced by ``phi``.

    Coordinate ``i`` goes to slot ``phi[i]``.  The map is
    ``retract' o phi o proj``, where ``proj`` is the projection onto the
    moment-angle complex of ``K_A``; its inverse swaps the roles.  The
    reported ``diagram_residual`` is the largest round-trip displacement.
    """
    _require_centered_admissible(A)
    _require_centered_admissible(A2)
    if A.m != A2.m:
        raise ValueError("configurations have different m")
    phi = tuple(int(i) for i in phi)
    iso = verify_isomorphism(build_complex(A), build_complex(A2), phi)
    if not iso:
        raise ValueError("phi is not a simplicial isomorphism K_A -> K_A'")
    gen = np.random.default_rng(0) if gen is None else gen
    diag = direct = comm = 0.0
    for _ in range(n_samples):
        x = retract(A, random_point(gen, A.m), 2).coords
        # routed through the moment-angle complexes
        x2 = retract(A2, _permute(project_combinatorial(A, x).y.coords, phi), 2).coords
        back = retract(A, _unpermute(project_combinatorial(A2, x2).y.coords, phi), 2).coords
        diag = max(diag, float(np.abs(back - x).max()))
        # permute and retract only
        d2 = retract(A2, _permute(x, phi), 2).coords
        dback = retract(A, _unpermute(d2, phi), 2).coords
        direct = max(direct, float(np.abs(dback - x).max()))
        comm = max(comm, float(np.abs(d2 - x2).max()))
    return RigidityReport(phi, diag, direct, comm, iso, bool(iso and diag < tol), n_samples, tol)


# --------------------------------------------------------------------------
# Jacobian certificates
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Stratum:
    """``kind="cube"``: the real cube ``D(face)``; ``kind="orthant"``: the
    positive part of ``X_A(1)`` (``face`` unused)."""

    kind: str
    face: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("cube", "orthant"):
            raise ValueError(f"unknown stratum kind {self.kind!r}")
        object.__setattr__(self, "face", tuple(sorted(int(i) for i in self.face)))


@dataclass(frozen=True, eq=False)
class JacobianCertificate:
    stratum: Stratum
    point: np.ndarray
    singular_values: tuple[float, ...]
    rank: int
    expected_rank: int
    h: float
    richardson: bool = False

    @property
    def margin(self) -> float:
        """Smallest retained singular value over the largest (1 if none)."""
        s = self.singular_values
        if not s or self.rank == 0 or s[0] == 0:
            return 1.0
        return s[self.rank - 1] / s[0]

    @property
    def passed(self) -> bool:
        return self.rank == self.expected_rank


def _tangent_basis(A: Configuration, stratum: Stratum) -> np.ndarray:
    """Columns span the tangent space of the stratum."""
    if stratum.kind == "cube":
        B = np.zeros((A.m, len(stratum.face)))
        for k, i in enumerate(stratum.face):
            B[i, k] = 1.0
        return B
    V = gale_dual(A)
    if V.rows == 0:
        return np.zeros((A.m, 0))
    Vf = np.array(V.to_float(), dtype=float).reshape(V.rows, A.m)
    Q, _ = np.linalg.qr(Vf.T)
    return Q


def _check_on_stratum(A: Configuration, stratum: Stratum, y: np.ndarray, tol: float):
    if stratum.kind == "cube":
        K = build_complex(A)
        if stratum.face not in K:
            raise ValueError(f"{list(stratum.face)} is not a face of K_A")
        inside = np.zeros(A.m, dtype=bool)
        inside[list(stratum.face)] = True
        if np.any(np.abs(y[inside]) > 1 + tol) or np.any(np.abs(np.abs(y[~inside]) - 1) > tol):
            raise ValueError("point is not on the cube stratum")
    else:
        if np.any(y < -tol) or max(xap_residual(A, y, 1)) > tol:
            raise ValueError("point is not on the positive part of X_A(1)")


def _fd_jacobian(A, y, B, h):
    cols = []
    for k in range(B.shape[1]):
        plus = retract(A, y + h * B[:, k], 2).coords.real
        minus = retract(A, y - h * B[:, k], 2).coords.real
        cols.append((plus - minus) / (2 * h))
    return np.array(cols).T.reshape(A.m, B.shape[1])


def jacobian_rank(A: Configuration, stratum: Stratum, point, h: float = 1e-5,
                  threshold: float = RANK_THRESHOLD, tol: float = 1e-8) -> JacobianCertificate:
    """Rank of the differential of ``f_2 / ||f_2||_2`` along the stratum.

    Central differences with step ``h``; when a singular value falls within
    three decades of the threshold the Jacobian is refined by Richardson
    extrapolation with ``h / 2``.
    """
    _require_centered_admissible(A)
    y = np.asarray(point.coords if isinstance(point, AmbientPoint) else point)
    if np.iscomplexobj(y):
        if np.abs(y.imag).max() > tol:
            raise ValueError("jacobian_rank works on real points")
        y = y.real
    y = y.astype(float)
    _check_on_stratum(A, stratum, y, tol)
    B = _tangent_basis(A, stratum)
    expected = B.shape[1]
    if expected == 0:
        return JacobianCertificate(stratum, y, (), 0, 0, h)
    J = _fd_jacobian(A, y, B, h)
    s = np.linalg.svd(J, compute_uv=False)
    rich = False
    rel = s / s[0] if s[0] > 0 else s
    if np.any((rel > threshold * 1e-3) & (rel < threshold * 1e3)):
        J = (4 * _fd_jacobian(A, y, B, h / 2) - J) / 3
        s = np.linalg.svd(J, compute_uv=False)
        rich = True
    rank = int(np.sum(s > threshold * s[0])) if s[0] > 0 else 0
    return JacobianCertificate(stratum, y, tuple(float(v) for v in s), rank, expected, h, rich)


def cube_sample(gen: np.random.Generator, A: Configuration, face: Sequence[int],
                low: float = 0.2, high: float = 0.9) -> np.ndarray:
    """Interior point of the real cube ``D(face)`` with random signs."""
    y = gen.choice([-1.0, 1.0], size=A.m)
    face = list(face)
    y[face] *= gen.uniform(low, high, len(face))
    return y


def orthant_sample(gen: np.random.Generator, A: Configuration) -> np.ndarray:
    """Interior point of the positive part of ``X_A(1)``."""
    z = gen.uniform(0.5, 2.0, A.m)
    return retract(A, z, 1).coords.real
