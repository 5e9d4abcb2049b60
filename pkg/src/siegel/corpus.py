"""Seeded random corpora: admissible configurations and sample points."""

from __future__ import annotations

import os
from itertools import combinations
from fractions import Fraction

import numpy as np

from .configuration import Configuration, admissibility
from .rational import rank
from .simplicial import build_complex

__all__ = [
    "EXAMPLE",
    "COUNTER_V",
    "seed_from_env",
    "rng",
    "random_configuration",
    "configuration_corpus",
    "random_point",
    "stratum_point",
    "off_complex_targets",
]

EXAMPLE = Configuration.from_rows([[0, 0, 1, 1, -2], [1, Fraction(1, 2), 0, 0, Fraction(-3, 2)]])
COUNTER_V = [[-1, -1, 1, 1]]


def seed_from_env(default: int = 0) -> int:
    raw = os.environ.get("SIEGEL_SEED")
    return default if raw in (None, "") else int(raw)


def rng(seed: int | None = None) -> np.random.Generator:
    return np.random.default_rng(seed_from_env() if seed is None else seed)


def random_configuration(gen: np.random.Generator, d: int | None = None, m: int | None = None,
                         max_entry: int = 3, max_tries: int = 10_000) -> Configuration:
    """Rejection sampling of a centered admissible integer configuration.

    The first ``m - 1`` columns are uniform in ``[-max_entry, max_entry]^d``;
    the last one centers the tuple and must stay within ``2 * max_entry``.
    """
    for _ in range(max_tries):
        dd = int(gen.integers(1, 4)) if d is None else d
        mm = int(gen.integers(dd + 2, 9)) if m is None else m
        cols = gen.integers(-max_entry, max_entry + 1, size=(mm - 1, dd))
        last = -cols.sum(axis=0)
        if np.abs(last).max() > 2 * max_entry:
            continue
        M = np.vstack([cols, last]).T.tolist()
        if rank(M, mm) != dd:
            continue
        A = Configuration.from_rows(M)
        if admissibility(A).admissible:
            return A
    raise RuntimeError("no admissible configuration found")


def configuration_corpus(n: int, seed: int | None = None, **kw) -> list[Configuration]:
    gen = rng(seed)
    return [random_configuration(gen, **kw) for _ in range(n)]


def random_point(gen: np.random.Generator, m: int, low: float = 0.5, high: float = 2.0) -> np.ndarray:
    """Moduli uniform in ``[low, high]``, phases uniform on the circle."""
    return gen.uniform(low, high, m) * np.exp(1j * gen.uniform(0.0, 2 * np.pi, m))


def stratum_point(gen: np.random.Generator, A: Configuration) -> np.ndarray:
    """Random point whose zero set is a random nonempty face of ``K_A``."""
    K = build_complex(A)
    faces = [f for f in K.faces() if f]
    if not faces:
        raise ValueError("K_A has no nonempty faces")
    J = sorted(faces[int(gen.integers(len(faces)))])
    z = random_point(gen, A.m)
    z[J] = 0
    return z


def off_complex_targets(A: Configuration, count: int = 5,
                        levels=(0.9, 0.5, 0.1)) -> list[np.ndarray]:
    """Unit sup-norm points off the moment-angle complex.

    Each has modulus ``level`` on a proper non-face ``tau`` of ``K_A`` and 1
    elsewhere.  Non-faces are taken by size, then lexicographically, and
    the levels are cycled until ``count`` points exist (fewer only if
    ``K_A`` has no proper non-face, i.e. ``d = 0``).
    """
    K = build_complex(A)
    taus = [t for k in range(1, A.m) for t in combinations(range(A.m), k) if t not in K]
    out = []
    for level in levels:
        for tau in taus:
            if len(out) == count:
                return out
            z = np.ones(A.m, dtype=complex)
            z[list(tau)] = level
            out.append(z)
    return out
