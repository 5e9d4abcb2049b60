"""The simplicial complex ``K_A`` and its polytopal realisation."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .configuration import Configuration, NotCenteredError, admissibility, _hull_of, gale_dual
from .geometry import HullFacets, facet_enumeration
from .rational import RationalMatrix

__all__ = [
    "SimplicialComplex",
    "PolytopeRealization",
    "build_complex",
    "link",
    "star",
    "verify_isomorphism",
    "realize_polytope",
]


def _maximal(faces: Iterable[frozenset[int]]) -> frozenset[frozenset[int]]:
    faces = sorted(set(faces), key=len, reverse=True)
    keep: list[frozenset[int]] = []
    for f in faces:
        if not any(f <= g for g in keep):
            keep.append(f)
    return frozenset(keep)


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed family of subsets of ``{0, ..., m-1}``, kept as its
    maximal faces.  The empty complex (no faces at all) has no maximal
    faces; the complex ``{emptyset}`` has the single maximal face ``{}``.
    """

    m: int
    maximal_faces: frozenset[frozenset[int]]

    @classmethod
    def from_faces(cls, m: int, faces: Iterable[Iterable[int]]) -> "SimplicialComplex":
        fs = [frozenset(f) for f in faces]
        for f in fs:
            if any(i < 0 or i >= m for i in f):
                raise ValueError(f"face {sorted(f)} not inside [0, {m})")
        return cls(m, _maximal(fs))

    def __contains__(self, face) -> bool:
        face = frozenset(face)
        return any(face <= g for g in self.maximal_faces)

    def faces(self) -> Iterator[frozenset[int]]:
        seen = set()
        for g in sorted(self.maximal_faces, key=sorted):
            for k in range(len(g) + 1):
                for f in combinations(sorted(g), k):
                    f = frozenset(f)
                    if f not in seen:
                        seen.add(f)
                        yield f

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.maximal_faces) if self.maximal_faces else frozenset()

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.maximal_faces), default=0) - 1

    def sorted_maximal(self) -> list[list[int]]:
        return sorted((sorted(f) for f in self.maximal_faces), key=lambda f: (len(f), f))

    def relabel(self, perm: Sequence[int]) -> "SimplicialComplex":
        return SimplicialComplex(self.m, frozenset(frozenset(perm[i] for i in f) for f in self.maximal_faces))

    def to_json(self) -> dict:
        """Vertex indices are 1-based on the wire."""
        return {"m": self.m, "maximal_faces": [[i + 1 for i in f] for f in self.sorted_maximal()]}

    @classmethod
    def from_json(cls, doc: dict) -> "SimplicialComplex":
        return cls.from_faces(doc["m"], [[i - 1 for i in f] for f in doc["maximal_faces"]])


@lru_cache(maxsize=256)
def build_complex(A: Configuration) -> SimplicialComplex:
    """``K_A``: all ``sigma`` with ``0 in conv A([m] \\ sigma)``.

    Subsets are visited by increasing size and a candidate is only tested
    when every facet of it is already known to be a face.
    """
    rep = admissibility(A)
    if not rep.admissible:
        raise ValueError("configuration is not admissible")
    m = A.m
    level = [frozenset()]
    faces = [frozenset()]
    while level:
        known = set(level)
        nxt = []
        cands = set()
        for f in level:
            for i in range(m):
                if i not in f:
                    cands.add(f | {i})
        for c in sorted(cands, key=sorted):
            if len(c) == m:
                continue
            if any(c - {i} not in known for i in c):
                continue
            comp = tuple(i for i in range(m) if i not in c)
            if _hull_of(A, comp) is not None:
                nxt.append(c)
        faces.extend(nxt)
        level = nxt
    return SimplicialComplex(m, _maximal(faces))


def _require_face(K: SimplicialComplex, sigma) -> frozenset[int]:
    sigma = frozenset(sigma)
    if sigma not in K:
        raise ValueError(f"{sorted(sigma)} is not a face")
    return sigma


def link(K: SimplicialComplex, sigma) -> SimplicialComplex:
    sigma = _require_face(K, sigma)
    return SimplicialComplex(K.m, _maximal(g - sigma for g in K.maximal_faces if sigma <= g))


def star(K: SimplicialComplex, sigma) -> SimplicialComplex:
    """Downward closure of the faces containing ``sigma``."""
    sigma = _require_face(K, sigma)
    return SimplicialComplex(K.m, _maximal(g for g in K.maximal_faces if sigma <= g))


def verify_isomorphism(K: SimplicialComplex, K2: SimplicialComplex, phi: Sequence[int]) -> bool:
    """Does the bijection ``phi`` (``i -> phi[i]``) carry ``K`` onto ``K2``?"""
    phi = list(phi)
    if len(phi) != K.m or sorted(phi) != list(range(K.m)):
        raise ValueError("phi is not a bijection of the ground set")
    if K.m != K2.m:
        return False
    return K.relabel(phi).maximal_faces == K2.maximal_faces


# --------------------------------------------------------------------------
# polytope
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PolytopeRealization:
    V: RationalMatrix
    vertex_indices: tuple[int, ...]
    interior_indices: tuple[int, ...]
    hull: HullFacets | None
    boundary: SimplicialComplex

    @property
    def dim(self) -> int:
        return self.V.rows


class BoundaryMismatchError(RuntimeError):
    pass


@lru_cache(maxsize=256)
def realize_polytope(A: Configuration) -> PolytopeRealization:
    """Gale-dual polytope ``P_A`` and the check that its boundary is ``K_A``."""
    if not A.is_centered:
        raise NotCenteredError("configuration is not centered at the origin")
    K = build_complex(A)
    V = gale_dual(A)
    m = A.m
    if V.rows == 0:
        # P_A is a point; K_A = {emptyset}
        if K.maximal_faces != frozenset({frozenset()}):
            raise BoundaryMismatchError("zero-dimensional P_A but K_A is not {emptyset}")
        return PolytopeRealization(V, (), tuple(range(m)), None, K)
    hull = facet_enumeration(V.columns())
    boundary = SimplicialComplex(m, _maximal(hull.facet_vertex_sets()))
    expected_vertices = tuple(i for i in range(m) if frozenset({i}) in K)
    if tuple(hull.vertices) != expected_vertices:
        raise BoundaryMismatchError(
            f"hull vertices {hull.vertices} differ from vertices of K_A {expected_vertices}"
        )
    if hull.boundary_nonvertex:
        raise BoundaryMismatchError("non-vertex points on the boundary of P_A")
    if boundary.maximal_faces != K.maximal_faces:
        raise BoundaryMismatchError("boundary complex of P_A differs from K_A")
    return PolytopeRealization(V, hull.vertices, hull.interior, hull, boundary)
