import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from rayfan.polycore import (
    DimensionMismatch,
    RationalCone,
    cokernel,
    integer_kernel,
    lp_feasible,
    lp_optimize,
    quotient_by_rows,
    saturated_column_basis,
    smith_normal_form,
    solve_integer,
)
from rayfan.polycore.linalg import as_fraction, mat_vec, nullspace, primitive, rank, sign_canonical, solve
from rayfan.polycore.snf import check_snf



def random_cone(rng, dim, count):
    gens = []
    while len(gens) < count:
        v = tuple(rng.randint(-3, 3) for _ in range(dim))
        if any(v):
            gens.append(v)
    return RationalCone.from_generators(gens, dim), gens


# ---------------------------------------------------------------- linalg

def test_as_fraction_parses_strings():
    assert as_fraction("3/4") == Fraction(3, 4)
    assert as_fraction(" -2 ") == -2
    assert as_fraction(Fraction(1, 3)) == Fraction(1, 3)


def test_primitive_and_sign_canonical():
    assert primitive((4, -6, 0)) == (2, -3, 0)
    assert primitive((Fraction(1, 2), Fraction(1, 3))) == (3, 2)
    assert sign_canonical((0, -2, 1)) == (0, 2, -1)


def test_rank_nullspace_solve():
    rows = [(1, 2, 3), (2, 4, 6), (0, 1, 1)]
    assert rank(rows) == 2
    (k,) = nullspace(rows, 3)
    assert mat_vec(rows, k) == (0, 0, 0)
    x = solve([(1, 1), (1, -1)], (3, 1))
    assert x == (2, 1)
    assert solve([(1, 1), (1, 1)], (0, 1)) is None


# ---------------------------------------------------------------- cones

class TestCone:
    def test_first_quadrant(self):
        c = RationalCone.from_generators([(1, 0), (0, 1), (1, 1)], 2)
        assert c.rays == ((0, 1), (1, 0))
        assert c.dim == 2 and c.is_pointed and c.is_full_dimensional
        assert c.contains((3, 0)) and not c.contains((-1, 2))
        assert c.relint_contains((1, 2)) and not c.relint_contains((1, 0))

    def test_halfspace_and_generator_descriptions_agree(self):
        c = RationalCone.from_halfspaces([(1, 0), (0, 1), (-1, 2)], 2)
        assert c == RationalCone.from_generators([(2, 1), (0, 1)], 2)

    def test_lineality(self):
        half_plane = RationalCone.from_generators([(1, 0), (0, 1), (0, -1)], 2)
        assert half_plane.lineality_dim == 1 and not half_plane.is_pointed
        assert RationalCone.from_generators([(1, 0), (-1, 0), (0, 1), (0, -1)], 2) == RationalCone.whole_space(2)

    def test_zero_cone(self):
        z = RationalCone.from_generators([], 3)
        assert z == RationalCone.zero(3) and z.dim == 0
        assert [f.dim for f in z.face_lattice()] == [0]

    def test_face_lattice_of_square_cone(self):
        c = RationalCone.from_generators([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], 3)
        dims = sorted(f.dim for f in c.face_lattice())
        assert dims == [0, 1, 1, 1, 1, 2, 2, 2, 2, 3]

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            RationalCone.from_generators([(1, 0)], 3)
        with pytest.raises(DimensionMismatch):
            RationalCone.zero(2).intersect(RationalCone.zero(3))

    def test_intersection(self):
        a = RationalCone.from_generators([(1, 0), (1, 2)], 2)
        b = RationalCone.from_generators([(1, 1), (0, 1)], 2)
        assert a & b == RationalCone.from_generators([(1, 1), (1, 2)], 2)

    def test_double_description_round_trip(self):
        rng = random.Random(7)
        for _ in range(60):
            dim = rng.choice([2, 3])
            c, _ = random_cone(rng, dim, rng.randint(1, 5))
            back = RationalCone.from_halfspaces(c.halfspaces, dim)
            assert back == c
            assert RationalCone.from_generators(back.generators, dim) == c

    def test_minimal_face_matches_face_lattice(self):
        rng = random.Random(11)
        for _ in range(40):
            c, gens = random_cone(rng, 3, rng.randint(2, 5))
            coeffs = [rng.choice([0, 0, 1, 2]) for _ in gens]
            p = tuple(sum(k * g[i] for k, g in zip(coeffs, gens)) for i in range(3))
            face = c.minimal_face(p).cone
            containing = [f.cone for f in c.face_lattice() if f.cone.contains(p)]
            smallest = min(containing, key=lambda f: f.dim)
            assert face == smallest
            assert face.relint_contains(p)

    def test_is_face_of_properties(self):
        rng = random.Random(3)
        for _ in range(30):
            c, _ = random_cone(rng, 3, rng.randint(2, 5))
            faces = c.faces()
            for f in faces:
                assert f.is_face_of(c)
                for g in faces:
                    if g.is_face_of(f):
                        assert g.is_face_of(c)  # transitivity
                    if f.is_face_of(g) and g.is_face_of(f):
                        assert f == g  # antisymmetry

    def test_non_face(self):
        c = RationalCone.from_generators([(1, 0), (0, 1)], 2)
        assert not RationalCone.from_generators([(1, 1)], 2).is_face_of(c)

    def test_interior_point_is_relative_interior(self):
        rng = random.Random(5)
        for _ in range(30):
            c, _ = random_cone(rng, 3, rng.randint(1, 4))
            assert c.relint_contains(c.interior_point())


# ---------------------------------------------------------------- SNF

def test_snf_small():
    res = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert res.invariant_factors == (2, 6, 12)
    assert check_snf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], res)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_snf_matches_sympy(m, n, data):
    mat = data.draw(st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m))
    res = smith_normal_form(mat)
    assert check_snf(mat, res)
    assert sympy.Matrix(res.left).det() in (1, -1)
    assert sympy.Matrix(res.right).det() in (1, -1)
    assert sympy.Matrix(res.left) * sympy.Matrix(res.left_inverse) == sympy.eye(m)
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    diag = sympy_snf(sympy.Matrix(mat), domain=sympy.ZZ)
    expected = [abs(diag[i, i]) for i in range(min(m, n)) if diag[i, i] != 0]
    assert list(res.invariant_factors) == expected


def test_cokernel_and_quotients():
    g = cokernel([[2, 0], [0, 3]])
    assert g.free_rank == 0 and g.torsion == (6,) and g.order == 6
    g = quotient_by_rows([(1, 1, 0)], 3)
    assert g.free_rank == 2 and g.torsion == ()
    assert quotient_by_rows([(2, 0)], 2).torsion == (2,)
    assert quotient_by_rows([], 2).free_rank == 2


def test_integer_kernel_and_saturation():
    k = integer_kernel([[2, 4]], 2)
    assert len(k) == 1 and mat_vec([[2, 4]], k[0]) == (0,)
    assert sorted(map(abs, k[0])) == [1, 2]
    basis = saturated_column_basis([[2], [4]], 2)
    assert len(basis) == 1 and primitive(basis[0]) in ((1, 2), (-1, -2))


def test_solve_integer():
    x = solve_integer([[2, 3]], [7])
    assert x is not None and 2 * x[0] + 3 * x[1] == 7
    assert solve_integer([[2, 4]], [3]) is None


# ---------------------------------------------------------------- LP

def test_lp_basic():
    res = lp_optimize([((1, 0), ">=", 0), ((0, 1), ">=", 0), ((1, 1), "<=", 4), ((1, 3), "<=", 6)], (1, 2))
    assert res.status == "optimal" and res.value == 5
    assert lp_feasible([((1,), ">", 0), ((1,), "<", 0)], dim=1).status == "infeasible"
    assert lp_optimize([((1, 0), ">=", 0)], (1, 0)).status == "unbounded"


def test_lp_strict():
    res = lp_feasible([((1, 0), ">", 0), ((0, 1), ">", 0), ((1, 1), "<=", 1)])
    assert res.feasible
    x, y = res.x
    assert x > 0 and y > 0 and x + y <= 1


def test_lp_against_grid_search():
    rng = random.Random(2)
    for _ in range(40):
        cons = [((1, 0), ">=", 0), ((0, 1), ">=", 0), ((1, 0), "<=", 5), ((0, 1), "<=", 5)]
        for _ in range(2):
            a = (rng.randint(-3, 3), rng.randint(-3, 3))
            cons.append((a, "<=", rng.randint(0, 6)))
        c = (rng.randint(-3, 3), rng.randint(-3, 3))
        res = lp_optimize(cons, c)
        # integer vertices are not guaranteed, so compare with a fine rational grid bound
        grid = [
            (Fraction(i, 4), Fraction(j, 4))
            for i, j in itertools.product(range(21), repeat=2)
            if all(a[0] * Fraction(i, 4) + a[1] * Fraction(j, 4) <= b for a, _, b in cons[4:])
        ]
        if res.status == "infeasible":
            assert not grid
            continue
        assert res.status == "optimal"
        assert all(c[0] * x + c[1] * y <= res.value for x, y in grid)
        x = res.x
        assert all(
            (a[0] * x[0] + a[1] * x[1] <= b) if rel == "<=" else (a[0] * x[0] + a[1] * x[1] >= b)
            for a, rel, b in cons
        )
