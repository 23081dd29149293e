"""Exact sparse linear algebra over the Gaussian rationals.

Systems are solved by exact sparse Gauss-Jordan elimination with
deterministic pivoting (lowest column first; sparsest eligible row, ties by
row index).  Rank, particular solution and nullspace are all reported
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .kernel import GR_ZERO, GaussianRational


@dataclass
class SparseExactSystem:
    """Rows of a linear system ``A x = b`` with hashable column keys."""

    rows: list = field(default_factory=list)  # list[dict[col, GaussianRational]]
    rhs: list = field(default_factory=list)  # list[GaussianRational]

    def add_row(self, coeffs: dict, b) -> None:
        coeffs = {c: GaussianRational.of(v) for c, v in coeffs.items() if not GaussianRational.of(v).is_zero()}
        self.rows.append(coeffs)
        self.rhs.append(GaussianRational.of(b))

    def columns(self) -> list:
        cols = set()
        for row in self.rows:
            cols.update(row)
        return sorted(cols)


@dataclass
class SolveResult:
    consistent: bool
    columns: list
    pivot_cols: list
    free_cols: list
    particular: dict  # col -> GaussianRational (zero on free columns)
    reduced_rows: list  # list[(pivot_col, dict[col, coeff], rhs)]

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    def nullspace_vector(self, free_col) -> dict:
        """Basis vector of the solution space for one free column."""
        vec = {free_col: GaussianRational(1)}
        for pivot_col, row, _ in self.reduced_rows:
            c = row.get(free_col)
            if c is not None and not c.is_zero():
                vec[pivot_col] = -c
        return vec

    def nullspace_basis(self) -> Iterable[dict]:
        for col in self.free_cols:
            yield self.nullspace_vector(col)


def solve_exact(system: SparseExactSystem) -> SolveResult:
    columns = system.columns()
    work = [dict(r) for r in system.rows]
    rhs = list(system.rhs)
    active = list(range(len(work)))
    reduced: list = []
    pivot_cols: list = []

    # column -> rows currently containing it, maintained lazily
    for col in columns:
        best = None
        for ri in active:
            row = work[ri]
            c = row.get(col)
            if c is None or c.is_zero():
                continue
            size = len(row)
            if best is None or size < best[1] or (size == best[1] and ri < best[0]):
                best = (ri, size)
        if best is None:
            continue
        ri = best[0]
        active.remove(ri)
        row = work[ri]
        inv = GaussianRational(1) / row[col]
        row = {c: v * inv for c, v in row.items()}
        b = rhs[ri] * inv
        # eliminate from every other row (active and previously reduced)
        for rj in active:
            other = work[rj]
            f = other.get(col)
            if f is None or f.is_zero():
                continue
            for c, v in row.items():
                s = other.get(c, GR_ZERO) - f * v
                if s.is_zero():
                    other.pop(c, None)
                else:
                    other[c] = s
            rhs[rj] = rhs[rj] - f * b
        new_reduced = []
        for (pcol, prow, pb) in reduced:
            f = prow.get(col)
            if f is not None and not f.is_zero():
                prow = dict(prow)
                for c, v in row.items():
                    s = prow.get(c, GR_ZERO) - f * v
                    if s.is_zero():
                        prow.pop(c, None)
                    else:
                        prow[c] = s
                pb = pb - f * b
            new_reduced.append((pcol, prow, pb))
        reduced = new_reduced
        reduced.append((col, row, b))
        pivot_cols.append(col)

    consistent = all(rhs[ri].is_zero() for ri in active)
    pivot_set = set(pivot_cols)
    free_cols = [c for c in columns if c not in pivot_set]
    particular = {}
    if consistent:
        for pcol, _row, b in reduced:
            if not b.is_zero():
                particular[pcol] = b
    return SolveResult(
        consistent=consistent,
        columns=columns,
        pivot_cols=pivot_cols,
        free_cols=free_cols,
        particular=particular,
        reduced_rows=reduced,
    )


def solve_dense(matrix_rows: list[list], rhs: list) -> SolveResult:
    """Convenience wrapper for small dense systems with integer column keys."""
    sys_ = SparseExactSystem()
    for row, b in zip(matrix_rows, rhs):
        sys_.add_row({j: v for j, v in enumerate(row)}, b)
    return solve_exact(sys_)


def nullspace_dense(matrix_rows: list[list]) -> list[list[GaussianRational]]:
    """Exact nullspace basis of a small dense matrix."""
    ncols = len(matrix_rows[0]) if matrix_rows else 0
    res = solve_dense(matrix_rows, [GaussianRational(0)] * len(matrix_rows))
    basis = []
    for col in res.free_cols:
        vec = res.nullspace_vector(col)
        basis.append([vec.get(j, GR_ZERO) for j in range(ncols)])
    return basis
