"""Exact integer linear algebra: Smith normal form and abelianization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .presentations import Presentation
from .words import Word


class IntegerMatrix:
    """Dense matrix of Python ints (arbitrary precision)."""

    def __init__(self, entries: Sequence[Sequence[int]], rows: int | None = None, cols: int | None = None):
        self.entries = [[int(x) for x in row] for row in entries]
        self.rows = len(self.entries) if rows is None else rows
        self.cols = (len(self.entries[0]) if self.entries else 0) if cols is None else cols
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise ValueError("inconsistent matrix dimensions")

    @classmethod
    def from_json(cls, obj: dict) -> "IntegerMatrix":
        rows, cols = int(obj["rows"]), int(obj["cols"])
        flat = [int(x) for x in obj["entries"]]
        if len(flat) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(flat)}")
        return cls([flat[i * cols : (i + 1) * cols] for i in range(rows)], rows, cols)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": [str(x) for row in self.entries for x in row]}

    def __eq__(self, other):
        return isinstance(other, IntegerMatrix) and self.entries == other.entries and self.shape == other.shape

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


@dataclass
class SmithResult:
    diagonal: list[int]
    left: list[list[int]] | None = None
    right: list[list[int]] | None = None


def smith_normal_form(m: IntegerMatrix | Sequence[Sequence[int]], transforms: bool = False) -> SmithResult:
    """Smith normal form by elementary row and column operations.

    Pivots on the entry of smallest nonzero absolute value.  The diagonal has
    ``min(rows, cols)`` entries, all non-negative, each dividing the next.
    With ``transforms=True`` the unimodular ``left``/``right`` satisfy
    ``left @ m @ right == diag``.
    """
    if not isinstance(m, IntegerMatrix):
        m = IntegerMatrix(m)
    A = [row[:] for row in m.entries]
    nr, nc = m.rows, m.cols
    L = [[int(i == j) for j in range(nr)] for i in range(nr)] if transforms else None
    R = [[int(i == j) for j in range(nc)] for i in range(nc)] if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if L is not None:
            L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if R is not None:
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        rs, rd = A[src], A[dst]
        for k in range(nc):
            if rs[k]:
                rd[k] += q * rs[k]
        if L is not None:
            ls, ld = L[src], L[dst]
            for k in range(nr):
                ld[k] += q * ls[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if R is not None:
            for row in R:
                row[dst] += q * row[src]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            for i in range(t + 1, nr):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, nc):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            # remainders smaller than the pivot become the next pivot
            best = None
            for i in range(t + 1, nr):
                if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                    best = (abs(A[i][t]), i, "r")
            for j in range(t + 1, nc):
                if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                    best = (abs(A[t][j]), j, "c")
            if best is not None:
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = next(
                ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if L is not None:
                L[t] = [-x for x in L[t]]
        t += 1
    diagonal = [A[k][k] for k in range(min(nr, nc))]
    return SmithResult(diagonal, L, R)


@dataclass(frozen=True)
class InvariantFactors:
    """Abelian group ℤ^free_rank ⊕ ⊕ ℤ/dᵢ with d₁ | d₂ | …, each dᵢ ≥ 2."""

    torsion: tuple[int, ...]
    free_rank: int

    @property
    def trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    def __str__(self) -> str:
        if self.trivial:
            return "trivial"
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"torsion": list(self.torsion), "free_rank": self.free_rank, "trivial": self.trivial}


def relation_matrix(p: Presentation, extra: Sequence[Word] = ()) -> IntegerMatrix:
    """Exponent-sum matrix: one row per relator (then per extra word), one column per generator."""
    idx = p.index()
    rows = []
    for w in tuple(p.relators) + tuple(extra):
        row = [0] * p.rank
        for name, sign in w.letters:
            row[idx[name]] += sign
        rows.append(row)
    return IntegerMatrix(rows, len(rows), p.rank)


def invariant_factors(m: IntegerMatrix) -> InvariantFactors:
    """Cokernel ℤ^cols / (row lattice)."""
    diag = smith_normal_form(m).diagonal
    rank = sum(1 for d in diag if d)
    return InvariantFactors(tuple(d for d in diag if d > 1), m.cols - rank)


def h1(p: Presentation) -> InvariantFactors:
    """Abelianization of the presented group."""
    return invariant_factors(relation_matrix(p))


def is_perfect(p: Presentation) -> bool:
    return h1(p).trivial


def generates_abelianization(p: Presentation, words: Sequence[Word]) -> bool:
    """Whether the images of ``words`` generate the abelianization of ``p``."""
    return invariant_factors(relation_matrix(p, words)).trivial
