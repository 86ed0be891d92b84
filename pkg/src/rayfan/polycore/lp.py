"""Exact rational linear programming.

A dense two-phase simplex over ``Fraction`` with Bland's rule.  Problems in
this package have a handful of variables and a few dozen rows, so a dense
tableau is the simplest thing that is fast enough.

Strict inequalities are handled with one auxiliary slack ``s``: every strict
row gets ``- s`` on its left side, we maximise ``s`` subject to ``s <= 1``, and
the strict system is feasible iff the optimum is positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import as_fraction, frac_vector

RELATIONS = (">=", ">", "=", "<=", "<")

Constraint = tuple  # (normal, relation, rhs)


class LPError(ValueError):
    pass


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible", "unbounded"
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _pivot(tab: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    p = tab[r][c]
    if p != 1:
        tab[r] = [x / p for x in tab[r]]
    row = tab[r]
    for i, other in enumerate(tab):
        if i != r and other[c] != 0:
            f = other[c]
            tab[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _run(tab: list[list[Fraction]], basis: list[int], allowed: int) -> bool:
    """Maximise the objective stored in the last row (as reduced costs).

    The last row holds ``-c`` so that a negative entry marks an improving
    column.  Returns False on unboundedness.
    """
    m = len(tab) - 1
    while True:
        obj = tab[-1]
        col = next((j for j in range(allowed) if obj[j] < 0), None)
        if col is None:
            return True
        best = None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(tab, basis, best[1], col)


def simplex_max(a_eq: Sequence[Sequence], b_eq: Sequence, c: Sequence) -> LPResult:
    """max c.z  s.t.  a_eq z = b_eq, z >= 0."""
    rows = [list(frac_vector(r)) for r in a_eq]
    b = [as_fraction(x) for x in b_eq]
    n = len(c)
    m = len(rows)
    for i in range(m):
        if b[i] < 0:
            rows[i] = [-x for x in rows[i]]
            b[i] = -b[i]
    # Phase I: artificials n..n+m-1, minimise their sum.
    tab = [rows[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    obj = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        obj = [o - t for o, t in zip(obj, tab[i])]
    for k in range(m):
        obj[n + k] = Fraction(0)
    tab.append(obj)
    _run(tab, basis, n + m)
    if tab[-1][-1] != 0:
        return LPResult("infeasible")
    # Drive remaining artificials out of the basis where possible.
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, i, col)
    keep = [i for i in range(m) if basis[i] < n]
    tab = [tab[i][:n] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    cf = list(frac_vector(c))
    obj = [-x for x in cf] + [Fraction(0)]
    for i, bi in enumerate(basis):
        if obj[bi] != 0:
            f = obj[bi]
            obj = [o - f * t for o, t in zip(obj, tab[i])]
    tab.append(obj)
    if not _run(tab, basis, n):
        return LPResult("unbounded")
    z = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        z[bi] = tab[i][-1]
    return LPResult("optimal", tab[-1][-1], tuple(z))


def _normalize(constraints: Sequence[Constraint], dim: int | None):
    out = []
    for con in constraints:
        if len(con) != 3:
            raise LPError(f"constraint {con!r} is not (normal, relation, rhs)")
        normal, rel, rhs = con
        if rel not in RELATIONS:
            raise LPError(f"unknown relation {rel!r}")
        normal = frac_vector(normal)
        if dim is None:
            dim = len(normal)
        elif len(normal) != dim:
            raise LPError("constraints live in different dimensions")
        out.append((normal, rel, as_fraction(rhs)))
    return out, (dim or 0)


def lp_optimize(
    constraints: Sequence[Constraint],
    objective: Sequence,
    maximize: bool = True,
    dim: int | None = None,
) -> LPResult:
    """Optimise a linear objective over free variables subject to weak constraints."""
    cons, dim = _normalize(constraints, dim or len(objective))
    if any(rel in (">", "<") for _, rel, _ in cons):
        raise LPError("lp_optimize takes weak constraints only")
    # x = xp - xm, one slack column per inequality.
    n_ineq = sum(rel != "=" for _, rel, _ in cons)
    ncols = 2 * dim + n_ineq
    a_eq, b_eq = [], []
    k = 0
    for normal, rel, rhs in cons:
        row = list(normal) + [-x for x in normal] + [Fraction(0)] * n_ineq
        if rel == ">=":
            row[2 * dim + k] = Fraction(-1)
            k += 1
        elif rel == "<=":
            row[2 * dim + k] = Fraction(1)
            k += 1
        a_eq.append(row)
        b_eq.append(rhs)
    obj = frac_vector(objective)
    if not maximize:
        obj = tuple(-x for x in obj)
    c = list(obj) + [-x for x in obj] + [Fraction(0)] * n_ineq
    if not a_eq:
        if any(obj):
            return LPResult("unbounded")
        return LPResult("optimal", Fraction(0), tuple(Fraction(0) for _ in range(dim)))
    res = simplex_max(a_eq, b_eq, c)
    if res.status != "optimal":
        return res
    x = tuple(res.x[i] - res.x[dim + i] for i in range(dim))
    value = res.value if maximize else -res.value
    return LPResult("optimal", value, x)


def lp_feasible(constraints: Sequence[Constraint], dim: int | None = None) -> LPResult:
    """Exact feasibility of a mixed weak/strict system; the result carries a witness."""
    cons, dim = _normalize(constraints, dim)
    if not any(rel in (">", "<") for _, rel, _ in cons):
        res = lp_optimize(cons, (0,) * dim, dim=dim)
        return res
    # Extra coordinate s at the end.
    lifted = []
    for normal, rel, rhs in cons:
        if rel == ">":
            lifted.append((normal + (Fraction(-1),), ">=", rhs))
        elif rel == "<":
            lifted.append((normal + (Fraction(1),), "<=", rhs))
        else:
            lifted.append((normal + (Fraction(0),), rel, rhs))
    unit = tuple(Fraction(0) for _ in range(dim)) + (Fraction(1),)
    lifted.append((unit, "<=", Fraction(1)))
    res = lp_optimize(lifted, unit, dim=dim + 1)
    if res.status != "optimal" or res.value <= 0:
        return LPResult("infeasible")
    return LPResult("optimal", res.value, res.x[:dim])


def satisfies(x: Sequence, constraints: Sequence[Constraint]) -> bool:
    """Check a candidate point exactly; used to validate LP witnesses."""
    for normal, rel, rhs in constraints:
        v = sum((as_fraction(a) * as_fraction(b) for a, b in zip(normal, x)), Fraction(0))
        rhs = as_fraction(rhs)
        ok = {
            ">=": v >= rhs,
            ">": v > rhs,
            "=": v == rhs,
            "<=": v <= rhs,
            "<": v < rhs,
        }[rel]
        if not ok:
            return False
    return True
