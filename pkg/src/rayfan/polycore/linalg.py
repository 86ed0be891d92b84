"""Exact vector and matrix helpers over Z and Q.

Vectors are tuples of ``int`` or ``Fraction``; matrices are tuples of row
tuples.  Nothing in here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = tuple
Matrix = tuple


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings into a ``Fraction``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def frac_vector(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_fraction(x) for x in v)


def int_vector(v: Iterable) -> tuple[int, ...]:
    out = []
    for x in v:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            x = x.numerator
        out.append(int(x))
    return tuple(out)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def mat_vec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def transpose(m: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*m))


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    v = frac_vector(v)
    den = reduce(lcm, (x.denominator for x in v), 1)
    w = [int(x * den) for x in v]
    g = reduce(gcd, w, 0)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in w)


def sign_canonical(v: Sequence[int]) -> tuple[int, ...]:
    """Flip sign so that the first nonzero entry is positive."""
    for x in v:
        if x != 0:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    m = [list(frac_vector(r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Integer (primitive) basis of the rational kernel {x : rows . x = 0}."""
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(primitive(x))
    return basis


def orthogonal_complement(vectors: Sequence[Sequence], dim: int) -> list[tuple[int, ...]]:
    return nullspace(vectors, dim)


def canonical_basis(vectors: Sequence[Sequence], dim: int) -> tuple[tuple[int, ...], ...]:
    """Canonical integer basis of the rational span: primitive RREF rows."""
    red, _ = rref(vectors) if vectors else ([], [])
    return tuple(primitive(r) for r in red)


def project_onto_complement(v: Sequence, basis: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """Orthogonal projection of ``v`` onto the complement of span(basis)."""
    v = list(frac_vector(v))
    if not basis:
        return tuple(v)
    # Gram-Schmidt over Q on the basis.
    ortho: list[list[Fraction]] = []
    for b in basis:
        w = list(frac_vector(b))
        for o in ortho:
            c = dot(w, o) / dot(o, o)
            w = [x - c * y for x, y in zip(w, o)]
        if any(w):
            ortho.append(w)
    for o in ortho:
        c = dot(v, o) / dot(o, o)
        v = [x - c * y for x, y in zip(v, o)]
    return tuple(v)


def solve(rows: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """One rational solution of rows . x = rhs, or None if inconsistent."""
    if not rows:
        return None if any(as_fraction(b) != 0 for b in rhs) else ()
    ncols = len(rows[0])
    aug = [list(frac_vector(r)) + [as_fraction(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return tuple(x)


def determinant(m: Sequence[Sequence]) -> Fraction:
    a = [list(frac_vector(r)) for r in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det
