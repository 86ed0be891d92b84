import itertools
from fractions import Fraction

import pytest

from rayfan.gradedring import GradedRingSpec
from rayfan.polycore import RationalCone
from rayfan.toricmsr import (
    MultiSectionRingSpec,
    QDivisor,
    RoundTripError,
    ToricError,
    ToricVarietySpec,
    cartier_data,
    class_group,
    combination,
    demazure_roundtrip,
    find_ample_combination,
    graded_piece_dim,
    height_one_prime_data,
    is_ample_cartier,
    is_factorial,
    section_lattice_points,
)

P1 = ToricVarietySpec.create([(1,), (-1,)], [(0,), (1,)])
P1xP1 = ToricVarietySpec.create([(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 2), (0, 3), (1, 2), (1, 3)])
P2 = ToricVarietySpec.create([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
QUADRANT = RationalCone.from_generators([(1, 0), (0, 1)], 2)


def half(x):
    return Fraction(x, 2)


# ---------------------------------------------------------------- varieties

class TestVariety:
    def test_complete(self):
        assert P1.is_complete() and P1xP1.is_complete() and P2.is_complete()

    def test_class_groups(self):
        assert str(P1.class_group()) == "Z"
        assert P1xP1.class_group().free_rank == 2
        weighted = ToricVarietySpec.create([(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)])
        assert weighted.class_group().free_rank == 1  # P(1,2,1)-type surface

    def test_incomplete_fan_rejected(self):
        with pytest.raises(ToricError) as exc:
            ToricVarietySpec.create([(1, 0), (0, 1)], [(0, 1)])
        assert "not complete" in str(exc.value)
        assert ToricVarietySpec.create([(1, 0), (0, 1)], [(0, 1)], require_complete=False).d == 2

    def test_all_structural_errors_listed(self):
        with pytest.raises(ToricError) as exc:
            ToricVarietySpec.create([(2, 0), (0, 1), (0, 1)], [(0, 5)])
        assert len(exc.value.errors) == 3

    def test_overlapping_cones_rejected(self):
        with pytest.raises(ToricError) as exc:
            ToricVarietySpec.create(
                [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1)],
                [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4)],
            )
        assert any("common face" in e for e in exc.value.errors)

    def test_json(self):
        assert P2.to_json()["rays"] == [[1, 0], [0, 1], [-1, -1]]


# ---------------------------------------------------------------- divisors and sections

def test_qdivisor_arithmetic():
    D = QDivisor.of(["1/2", 0, "3/4"])
    assert D.q == (2, 1, 4) and D.p == (1, 0, 3)
    assert not D.is_integral and D.scaled(4).is_integral
    assert (D + D).coefficients == (1, 0, Fraction(3, 2))
    assert combination([D, QDivisor.of([1, 1, 1])], [2, -1]).coefficients == (0, -1, Fraction(1, 2))


def test_sections_of_p2():
    H = QDivisor.of([0, 0, 1])
    for k in range(4):
        assert len(section_lattice_points(P2, H.scaled(k))) == (k + 1) * (k + 2) // 2
    assert section_lattice_points(P2, H.scaled(-1)) == []


def test_weighted_quadrant_graded_pieces():
    spec = MultiSectionRingSpec.create(P1xP1, [[half(1), 0, 0, 0], [0, 0, half(1), 0]])
    assert spec.q == (2, 1, 2, 1)
    assert graded_piece_dim(spec, (2, 2)) == 4
    for r in itertools.product(range(-4, 5), repeat=2):
        expected = (r[0] // 2 + 1) * (r[1] // 2 + 1) if min(r) >= 0 else 0
        assert graded_piece_dim(spec, r) == expected


def test_ampleness():
    assert is_ample_cartier(P2, QDivisor.of([0, 0, 1]))
    assert not is_ample_cartier(P2, QDivisor.of([0, 0, 0]))
    assert not is_ample_cartier(P1xP1, QDivisor.of([1, 0, 0, 0]))
    assert is_ample_cartier(P1xP1, QDivisor.of([1, 0, 1, 0]))
    assert cartier_data(P1, QDivisor.of([half(1), 0])) is None
    spec = MultiSectionRingSpec.create(P1xP1, [[half(1), 0, 0, 0], [0, 0, half(1), 0]])
    assert find_ample_combination(spec) == (2, 2)
    assert find_ample_combination(MultiSectionRingSpec.create(P1xP1, [[1, 0, 0, 0]])) is None


def test_divisor_length_checked():
    with pytest.raises(ToricError):
        MultiSectionRingSpec.create(P1, [[1, 0, 0]])
    with pytest.raises(ToricError):
        MultiSectionRingSpec.create(P1, [])


# ---------------------------------------------------------------- class groups

@pytest.mark.parametrize(
    "X, divisors, expected, factorial",
    [
        (P1xP1, [[half(1), 0, 0, 0], [0, 0, half(1), 0]], "0", True),
        (P1, [[1, 0]], "0", True),
        (P1, [[half(1), 0]], "0", True),
        (P1xP1, [[1, 0, 0, 0]], "Z", False),
        (P2, [[0, 0, 1]], "0", True),
        (P2, [[0, 0, 2]], "Z/2", False),
    ],
)
def test_class_group(X, divisors, expected, factorial):
    spec = MultiSectionRingSpec.create(X, divisors)
    data = class_group(spec)
    assert str(data.result) == expected
    assert data.sequence_consistent
    out = is_factorial(spec)
    assert out["factorial"] is factorial
    assert out["agrees_with_class_group"]


def test_unverified_hypothesis_is_flagged():
    data = class_group(MultiSectionRingSpec.create(P1xP1, [[1, 0, 0, 0]]))
    assert not data.hypothesis_verified and data.to_json()["conditional"]


def test_height_one_primes():
    spec = MultiSectionRingSpec.create(P1xP1, [[half(1), 0, 0, 0], [0, 0, half(1), 0]])
    out = height_one_prime_data(spec)
    assert out["verified"]
    vals = {p.ray: (p.q, p.valuations) for p in out["primes"]}
    assert vals[0] == (2, (1, 0)) and vals[2] == (2, (0, 1)) and vals[1] == (1, (0, 0))


# ---------------------------------------------------------------- round trip

def test_roundtrip_weighted_quadrant():
    ring = GradedRingSpec.polynomial([(1, 0), (2, 0), (0, 1), (0, 2)])
    rep = demazure_roundtrip(ring, QUADRANT, grid_bound=4)
    assert rep.ok
    assert set(rep.variety.rays) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert rep.variety.is_complete() and len(rep.variety.cones) == 4
    nonzero = sorted(c for D in rep.spec.divisors for c in D.coefficients if c)
    assert nonzero == [half(1), half(1)]


def test_roundtrip_projective_plane():
    ring = GradedRingSpec.polynomial([(1,), (1,), (1,)])
    rep = demazure_roundtrip(ring, RationalCone.from_generators([(1,)], 1), grid_bound=5)
    assert rep.ok and len(rep.variety.rays) == 3


def test_roundtrip_rejects_bad_inputs():
    ring = GradedRingSpec.polynomial([(1, 0), (2, 0), (0, 1), (0, 2)])
    with pytest.raises(RoundTripError):
        demazure_roundtrip(ring, RationalCone.from_generators([(1, 0), (1, 1)], 2))  # not a chamber
    with pytest.raises(RoundTripError, match="condition"):
        demazure_roundtrip(GradedRingSpec.polynomial([(2, 0), (0, 1), (2, 1)]), QUADRANT)
    with pytest.raises(RoundTripError, match="height"):
        demazure_roundtrip(
            GradedRingSpec.polynomial([(1, 0), (0, 1), (1, 1)]),
            RationalCone.from_generators([(1, 0), (1, 1)], 2),
        )
