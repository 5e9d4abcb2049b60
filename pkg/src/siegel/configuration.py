"""Vector configurations: admissibility, Gale duality, Siegel membership."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .geometry import HullCertificate, affine_nullspace, origin_in_hull
from .rational import RationalMatrix, as_fraction, rank, row_equivalent

__all__ = [
    "Configuration",
    "AdmissibilityReport",
    "AmbientPoint",
    "NotCenteredError",
    "admissibility",
    "augmented_rank",
    "gale_transform",
    "gale_dual",
    "verify_gale_pair",
    "configurations_row_equivalent",
    "siegel_membership",
    "as_point",
]


class NotCenteredError(ValueError):
    pass


@dataclass(frozen=True)
class Configuration:
    """An ``m``-tuple of rational vectors in ``R^d`` (``m > d >= 0``).

    ``columns[i]`` is ``A_{i+1}``; with ``d == 0`` every column is the
    empty tuple.
    """

    d: int
    m: int
    columns: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.d < 0 or self.m <= self.d:
            raise ValueError(f"need m > d >= 0, got d={self.d}, m={self.m}")
        if len(self.columns) != self.m:
            raise ValueError(f"expected {self.m} columns, got {len(self.columns)}")
        for c in self.columns:
            if len(c) != self.d:
                raise ValueError("column of wrong dimension")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], m: int | None = None) -> "Configuration":
        rows = [[as_fraction(v) for v in r] for r in rows]
        if m is None:
            if not rows:
                raise ValueError("m is required when d == 0")
            m = len(rows[0])
        if any(len(r) != m for r in rows):
            raise ValueError("ragged configuration rows")
        cols = tuple(tuple(r[j] for r in rows) for j in range(m))
        return cls(len(rows), m, cols)

    @classmethod
    def from_matrix(cls, M: RationalMatrix) -> "Configuration":
        return cls.from_rows(M.to_rows(), M.cols)

    @property
    def rows(self) -> list[list[Fraction]]:
        return [[c[k] for c in self.columns] for k in range(self.d)]

    def matrix(self) -> RationalMatrix:
        return RationalMatrix(self.d, self.m, tuple(v for r in self.rows for v in r))

    @cached_property
    def float_columns(self) -> np.ndarray:
        """``(m, d)`` float array whose rows are the vectors ``A_i``."""
        arr = np.array([[float(v) for v in c] for c in self.columns], dtype=float)
        return np.ascontiguousarray(arr.reshape(self.m, self.d))

    def subtuple(self, indices: Iterable[int]) -> list[tuple[Fraction, ...]]:
        return [self.columns[i] for i in indices]

    def permuted(self, perm: Sequence[int]) -> "Configuration":
        """Configuration whose column ``perm[i]`` is ``A_i``."""
        perm = list(perm)
        if sorted(perm) != list(range(self.m)):
            raise ValueError("not a permutation")
        cols = [None] * self.m
        for i, j in enumerate(perm):
            cols[j] = self.columns[i]
        return Configuration(self.d, self.m, tuple(cols))

    @property
    def is_centered(self) -> bool:
        return all(sum((c[k] for c in self.columns), Fraction(0)) == 0 for k in range(self.d))

    def augmented(self) -> list[tuple[Fraction, ...]]:
        """Columns ``(A_i, 1)``."""
        return [c + (Fraction(1),) for c in self.columns]


# --------------------------------------------------------------------------
# admissibility
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AdmissibilityReport:
    siegel: bool
    siegel_certificate: HullCertificate | None
    weak_hyperbolicity: bool
    violating: tuple[int, ...] | None
    violating_certificate: HullCertificate | None
    centered: bool

    @property
    def admissible(self) -> bool:
        return self.siegel and self.weak_hyperbolicity


@lru_cache(maxsize=4096)
def _hull_of(A: Configuration, indices: tuple[int, ...]) -> HullCertificate | None:
    if not indices:
        return None
    return origin_in_hull(A.subtuple(indices))


@lru_cache(maxsize=256)
def admissibility(A: Configuration) -> AdmissibilityReport:
    """Siegel condition, weak hyperbolicity and centering, decided exactly.

    Weak hyperbolicity is checked on every subset of size ``<= d`` in
    order of size, then lexicographically; the first violator found is
    reported.
    """
    full = _hull_of(A, tuple(range(A.m)))
    violating = None
    vcert = None
    for k in range(1, A.d + 1):
        for I in combinations(range(A.m), k):
            cert = _hull_of(A, I)
            if cert is not None:
                violating, vcert = I, cert
                break
        if violating is not None:
            break
    return AdmissibilityReport(
        siegel=full is not None,
        siegel_certificate=full,
        weak_hyperbolicity=violating is None,
        violating=violating,
        violating_certificate=vcert,
        centered=A.is_centered,
    )


def augmented_rank(A: Configuration, I: Iterable[int]) -> int:
    """Rank of the subtuple of augmented columns ``(A_i, 1)``, ``i in I``."""
    cols = [A.columns[i] + (Fraction(1),) for i in sorted(set(I))]
    if not cols:
        return 0
    return rank(cols, A.d + 1)


# --------------------------------------------------------------------------
# Gale duality
# --------------------------------------------------------------------------

def gale_transform(V: RationalMatrix, d: int | None = None) -> Configuration:
    """Configuration whose rows form a basis of ``{x : V x = 0, sum x = 0}``.

    ``V`` has one column per point.  If ``d`` is given, the augmented
    matrix ``(V; 1)`` must have rank ``m - d``.
    """
    m = V.cols
    aug_rank = rank(V.to_rows() + [[Fraction(1)] * m], m)
    if d is not None and aug_rank != m - d:
        raise ValueError(
            f"augmented matrix has rank {aug_rank}, expected m - d = {m - d}"
        )
    B = affine_nullspace(V)
    if B.rows == 0:
        return Configuration(0, m, tuple(() for _ in range(m)))
    return Configuration.from_matrix(B)


@lru_cache(maxsize=256)
def gale_dual(A: Configuration) -> RationalMatrix:
    """The dual tuple ``V`` (rows = basis of ``{x : A x = 0, sum x = 0}``).

    Requires a centered configuration; otherwise the double transform does
    not return ``A``.
    """
    if not A.is_centered:
        raise NotCenteredError("configuration is not centered at the origin")
    return affine_nullspace(A.matrix())


def verify_gale_pair(A: Configuration, V: RationalMatrix) -> bool:
    """Exact check that ``V``'s rows span ``{x : A x = 0, sum x = 0}``."""
    if V.cols != A.m:
        return False
    system = A.rows + [[Fraction(1)] * A.m]
    for r in V.to_rows():
        for eq in system:
            if sum((a * b for a, b in zip(eq, r)), Fraction(0)) != 0:
                return False
    expected = A.m - rank(system, A.m)
    return (rank(V.to_rows(), A.m) if V.rows else 0) == expected


def configurations_row_equivalent(A: Configuration, B: Configuration) -> bool:
    return A.m == B.m and A.d == B.d and row_equivalent(A.rows, B.rows, A.m)


# --------------------------------------------------------------------------
# ambient points
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AmbientPoint:
    """A point of ``C^m``; ``threshold`` sets which moduli count as zero."""

    coords: np.ndarray
    threshold: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=complex).ravel()
        object.__setattr__(self, "coords", c)

    @property
    def m(self) -> int:
        return self.coords.size

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.coords)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.moduli > self.threshold))

    @property
    def zero_set(self) -> tuple[int, ...]:
        s = set(self.support)
        return tuple(i for i in range(self.m) if i not in s)

    @property
    def phases(self) -> np.ndarray:
        mod = self.moduli
        out = np.ones(self.m, dtype=complex)
        nz = mod > 0
        out[nz] = self.coords[nz] / mod[nz]
        return out


def as_point(z, threshold: float | None = None) -> AmbientPoint:
    if isinstance(z, AmbientPoint):
        if threshold is None or threshold == z.threshold:
            return z
        return AmbientPoint(z.coords, threshold)
    return AmbientPoint(np.asarray(z, dtype=complex), threshold or 0.0)


@lru_cache(maxsize=8192)
def _support_certificate(A: Configuration, support: tuple[int, ...]):
    cert = _hull_of(A, support)
    return None if cert is None else cert.lifted(support, A.m)


def siegel_membership(A: Configuration, z) -> tuple[bool, HullCertificate | None]:
    """Is ``z`` in the union of Siegel leaves, i.e. ``0 in conv A(I_z)``?"""
    z = as_point(z)
    if z.m != A.m:
        raise ValueError(f"point has {z.m} coordinates, configuration has {A.m}")
    cert = _support_certificate(A, z.support)
    return cert is not None, cert
