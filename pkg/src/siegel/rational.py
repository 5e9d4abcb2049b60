"""Exact rational linear algebra on ``fractions.Fraction``.

Everything here is deterministic: row reduction always pivots on the
lowest available row/column index, and the simplex routine uses Bland's
rule, so bases and certificates are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

__all__ = [
    "RationalMatrix",
    "as_fraction",
    "format_fraction",
    "rref",
    "rank",
    "nullspace",
    "row_equivalent",
    "primitive",
    "simplex_max",
    "LPResult",
    "dot",
]


def as_fraction(value) -> Fraction:
    """Coerce ints, ``"p/q"`` strings, Fractions and floats to a Fraction.

    Floats convert exactly (binary value), which is what callers want when
    they hand over already-rounded data.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        return Fraction(value)
    # numpy scalars and friends
    if hasattr(value, "item"):
        return as_fraction(value.item())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class RationalMatrix:
    """Row-major rational matrix. ``entries`` has length ``rows * cols``."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        rows = [[as_fraction(v) for v in r] for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count is ambiguous for an empty matrix")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(v for r in rows for v in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "RationalMatrix":
        columns = [[as_fraction(v) for v in c] for c in columns]
        if rows is None:
            if not columns:
                raise ValueError("row count is ambiguous for an empty matrix")
            rows = len(columns[0])
        for c in columns:
            if len(c) != rows:
                raise ValueError("columns of unequal length")
        ent = tuple(columns[j][i] for i in range(rows) for j in range(len(columns)))
        return cls(rows, len(columns), ent)

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def to_float(self):
        import numpy as np

        return np.array([[float(v) for v in self.row(i)] for i in range(self.rows)],
                        dtype=float).reshape(self.rows, self.cols)


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows and
    ``pivots[k]`` is the pivot column of row ``k``.
    """
    M = [[as_fraction(v) for v in r] for r in rows]
    if ncols is None:
        ncols = len(M[0]) if M else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(M):
            break
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : M x = 0}``, one vector per free column (ascending)."""
    R, pivots = rref(rows, ncols) if rows else ([], [])
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for k, pc in enumerate(pivots):
            x[pc] = -R[k][f]
        basis.append(x)
    return basis


def row_equivalent(a: Sequence[Sequence], b: Sequence[Sequence], ncols: int) -> bool:
    """True iff the two row sets span the same rational row space."""
    ra = rref(a, ncols)[0] if a else []
    rb = rref(b, ncols)[0] if b else []
    return ra == rb


def primitive(vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale a nonzero rational vector to coprime integers (sign kept)."""
    den = 1
    for v in vec:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return tuple(Fraction(0) for _ in vec)
    return tuple(Fraction(v // g) for v in ints)


# --------------------------------------------------------------------------
# Exact simplex (two phase, Bland's rule)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None
    value: Fraction | None


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    piv = T[r][c]
    row = [v / piv for v in T[r]]
    T[r] = row
    for i in range(len(T)):
        if i != r:
            f = T[i][c]
            if f != 0:
                T[i] = [a - f * b for a, b in zip(T[i], row)]
    basis[r] = c


def _run(T: list[list[Fraction]], basis: list[int], ncols: int) -> bool:
    """Optimise the tableau in place; last row is the objective row
    holding ``z_j - c_j``.  Returns False when unbounded."""
    nrows = len(T) - 1
    while True:
        obj = T[-1]
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            return True
        best = None
        for i in range(nrows):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        _pivot(T, basis, best[1], enter)


def simplex_max(A_eq: Sequence[Sequence], b_eq: Sequence, c: Sequence) -> LPResult:
    """Maximise ``c.x`` subject to ``A_eq x = b_eq`` and ``x >= 0``, exactly."""
    A = [[as_fraction(v) for v in r] for r in A_eq]
    b = [as_fraction(v) for v in b_eq]
    cc = [as_fraction(v) for v in c]
    n = len(cc)
    for i in range(len(A)):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
    mrows = len(A)
    ncols = n + mrows
    T = []
    for i in range(mrows):
        art = [Fraction(0)] * mrows
        art[i] = Fraction(1)
        T.append(A[i] + art + [b[i]])
    zrow = [-sum((A[i][j] for i in range(mrows)), Fraction(0)) for j in range(n)]
    zrow += [Fraction(0)] * mrows + [-sum(b, Fraction(0))]
    T.append(zrow)
    basis = list(range(n, n + mrows))
    _run(T, basis, ncols)
    if T[-1][-1] != 0:
        return LPResult("infeasible", None, None)

    # Drive zero-level artificials out; drop rows that are redundant.
    i = 0
    while i < len(T) - 1:
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, col)
        i += 1

    T = [row[:n] + [row[-1]] for row in T]
    obj = []
    for j in range(n):
        obj.append(sum((cc[basis[i]] * T[i][j] for i in range(len(basis))), Fraction(0)) - cc[j])
    obj.append(sum((cc[basis[i]] * T[i][-1] for i in range(len(basis))), Fraction(0)))
    T[-1] = obj
    if not _run(T, basis, n):
        return LPResult("unbounded", None, None)
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        x[bv] = T[i][-1]
    return LPResult("optimal", tuple(x), T[-1][-1])


def dot(u: Iterable[Fraction], v: Iterable[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))
