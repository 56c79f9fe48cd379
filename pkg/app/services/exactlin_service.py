from fractions import Fraction
from itertools import combinations
from typing import List, NamedTuple

from app.core.errors import NotInSpan
from app.models.ratmatrix import ONE, ZERO, RatMatrix


class RrefResult(NamedTuple):
    reduced: RatMatrix
    pivot_cols: List[int]
    rank: int


class ExactLinService:
    """Exact linear algebra over the rationals, backed by FLINT's fmpq_mat"""

    def rref(self, m: RatMatrix) -> RrefResult:
        """Reduced row echelon form with pivot columns and rank"""
        if m.rows == 0 or m.cols == 0:
            return RrefResult(m, [], 0)
        reduced, rank = m.to_flint().rref()
        rank = int(rank)
        reduced = RatMatrix.from_flint(reduced)
        pivots = []
        for i in range(rank):
            row = reduced.row(i)
            pivots.append(next(j for j, v in enumerate(row) if v))
        return RrefResult(reduced, pivots, rank)

    def rank(self, m: RatMatrix) -> int:
        if m.rows == 0 or m.cols == 0:
            return 0
        _, rank = m.to_flint().rref()
        return int(rank)

    def kernel_basis(self, m: RatMatrix) -> RatMatrix:
        """Columns span the right null space, one per free column of the RREF"""
        if m.rows == 0:
            return RatMatrix.identity(m.cols)
        reduced, pivots, _ = self.rref(m)
        pivot_set = set(pivots)
        free = [j for j in range(m.cols) if j not in pivot_set]
        columns = []
        for f in free:
            vec = [ZERO] * m.cols
            vec[f] = ONE
            for i, p in enumerate(pivots):
                vec[p] = -reduced[i, f]
            columns.append(vec)
        return RatMatrix.from_columns(columns, m.cols)

    def column_basis(self, m: RatMatrix) -> RatMatrix:
        """Canonical basis of the column space: the nonzero rows of rref(m^T), as columns"""
        reduced, _, rank = self.rref(m.transpose())
        return RatMatrix.from_columns([reduced.row(i) for i in range(rank)], m.rows)

    def solve_in_span(self, basis: RatMatrix, targets: RatMatrix) -> RatMatrix:
        """Return X with basis @ X == targets"""
        if basis.rows != targets.rows:
            raise ValueError(f"basis has {basis.rows} rows but targets have {targets.rows}")
        k, m = basis.cols, targets.cols
        if m == 0:
            return RatMatrix.zeros(k, 0)
        if k == 0:
            if not targets.is_zero():
                raise NotInSpan("target lies outside the zero subspace")
            return RatMatrix.zeros(0, m)
        reduced, pivots, _ = self.rref(RatMatrix.hstack([basis, targets]))
        outside = [p - k for p in pivots if p >= k]
        if outside:
            raise NotInSpan(f"target column {outside[0]} is not in the column span of the basis")
        solution = [[ZERO] * m for _ in range(k)]
        for i, p in enumerate(pivots):
            solution[p] = list(reduced.row(i)[k:])
        return RatMatrix.from_rows(solution, m)

    def determinant(self, m: RatMatrix) -> Fraction:
        if m.rows != m.cols:
            raise ValueError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
        n = m.rows
        if n == 0:
            return ONE
        if n == 1:
            return m[0, 0]
        if n == 2:
            return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        det = m.to_flint().det()
        return Fraction(int(det.p), int(det.q))

    def sign_det(self, m: RatMatrix) -> int:
        det = self.determinant(m)
        return (det > 0) - (det < 0)

    def compound_matrix(self, a: RatMatrix, p: int) -> RatMatrix:
        """p-th exterior power: p x p minors indexed by lexicographic p-subsets"""
        if p < 0:
            raise ValueError("compound order must be non-negative")
        row_sets = list(combinations(range(a.rows), p))
        col_sets = list(combinations(range(a.cols), p))
        entries = []
        for rs in row_sets:
            for cs in col_sets:
                minor = RatMatrix(p, p, (a[i, j] for i in rs for j in cs))
                entries.append(self.determinant(minor))
        return RatMatrix(len(row_sets), len(col_sets), entries)


# Create a singleton instance
exactlin_service = ExactLinService()
