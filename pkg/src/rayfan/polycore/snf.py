"""Smith normal form with unimodular transforms, and the lattice helpers built on it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import Matrix, identity, int_vector, mat_mul, mat_vec


@dataclass(frozen=True)
class SNFResult:
    """``left @ A @ right == diagonal(invariant_factors)`` padded with zeros.

    ``left_inverse`` is carried along because the saturation and kernel
    helpers need it and recomputing it is wasteful.
    """

    invariant_factors: tuple[int, ...]
    rank: int
    left: Matrix
    right: Matrix
    left_inverse: Matrix
    shape: tuple[int, int]

    def diagonal(self) -> Matrix:
        m, n = self.shape
        return tuple(
            tuple(self.invariant_factors[i] if i == j and i < self.rank else 0 for j in range(n))
            for i in range(m)
        )


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group Z^free_rank + sum Z/t for t in torsion."""

    free_rank: int
    torsion: tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def smith_normal_form(matrix: Sequence[Sequence[int]], ncols: int | None = None) -> SNFResult:
    a = [list(int_vector(r)) for r in matrix]
    m = len(a)
    n = len(a[0]) if a else (ncols or 0)
    left = [list(r) for r in identity(m)]
    linv = [list(r) for r in identity(m)]
    right = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]
        for row in linv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row[dst] += q * row[src]
        if q == 0:
            return
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]
        for row in linv:
            row[src] -= q * row[dst]

    def add_col(src, dst, q):
        if q == 0:
            return
        for row in a:
            row[dst] += q * row[src]
        for row in right:
            row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]
        for row in linv:
            row[i] = -row[i]

    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    factors = tuple(a[i][i] for i in range(t))
    return SNFResult(
        invariant_factors=factors,
        rank=t,
        left=tuple(map(tuple, left)),
        right=tuple(map(tuple, right)),
        left_inverse=tuple(map(tuple, linv)),
        shape=(m, n),
    )


def cokernel(matrix: Sequence[Sequence[int]], nrows: int | None = None) -> AbelianGroup:
    """Z^m / (column span of the m x n matrix)."""
    m = len(matrix) if matrix else (nrows or 0)
    if not matrix or not matrix[0]:
        return AbelianGroup(m, ())
    snf = smith_normal_form(matrix)
    return AbelianGroup(m - snf.rank, tuple(d for d in snf.invariant_factors if d != 1))


def quotient_by_rows(relations: Sequence[Sequence[int]], ncols: int) -> AbelianGroup:
    """Z^ncols modulo the subgroup generated by the given row vectors."""
    rows = [r for r in relations if any(r)]
    if not rows:
        return AbelianGroup(ncols, ())
    return cokernel(tuple(zip(*rows)), nrows=ncols)


def integer_kernel(matrix: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Basis of the lattice {x in Z^ncols : matrix . x = 0}."""
    if not matrix:
        return [tuple(r) for r in identity(ncols)]
    snf = smith_normal_form(matrix)
    cols = list(zip(*snf.right))
    return [tuple(c) for c in cols[snf.rank:]]


def saturated_column_basis(matrix: Sequence[Sequence[int]], nrows: int) -> list[tuple[int, ...]]:
    """Basis of (column span over Q) intersected with Z^nrows."""
    if not matrix or not matrix[0]:
        return []
    snf = smith_normal_form(matrix)
    cols = list(zip(*snf.left_inverse))
    return [tuple(c) for c in cols[: snf.rank]]


def solve_integer(matrix: Sequence[Sequence[int]], rhs: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution of matrix . x = rhs, or None."""
    snf = smith_normal_form(matrix)
    y = mat_vec(snf.left, rhs)
    n = snf.shape[1]
    z = [0] * n
    for i, yi in enumerate(y):
        if i < snf.rank:
            d = snf.invariant_factors[i]
            if yi % d:
                return None
            z[i] = yi // d
        elif yi != 0:
            return None
    return mat_vec(snf.right, z)


def check_snf(matrix: Sequence[Sequence[int]], snf: SNFResult) -> bool:
    """L.A.R equals the diagonal and the divisibility chain holds."""
    prod = mat_mul(mat_mul(snf.left, matrix), snf.right)
    if prod != snf.diagonal():
        return False
    f = snf.invariant_factors
    return all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1)) and all(x > 0 for x in f)
