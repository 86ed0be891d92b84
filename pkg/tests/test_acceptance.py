"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed even
without ``-s``) or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from helpers import combination_point, random_polynomial_spec, random_spec
from rayfan import cli
from rayfan.chamberfan import assemble_fan, chamber_decomposition, morphism_poset, one_chamber_check
from rayfan.gradedring import GradedRingSpec, _enumerate_ambient_monomials, brute_force_ray_ideal, ray_ideal
from rayfan.polycore import RationalCone
from rayfan.toricmsr import MultiSectionRingSpec, ToricVarietySpec, class_group, demazure_roundtrip, graded_piece_dim, is_factorial


class Criterion:
    """Times a block and prints one PASS/FAIL line; failures are re-raised as assertion errors."""

    def __init__(self, capsys, number, title, limit):
        self.capsys, self.number, self.title, self.limit = capsys, number, title, limit
        self.detail = ""
        self.failures = []

    def check(self, ok, message):
        if not ok:
            self.failures.append(message)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if elapsed >= self.limit:
            self.failures.append(f"runtime {elapsed:.2f}s exceeds {self.limit}s")
        status = "FAIL" if self.failures else "PASS"
        line = f"[{status}] criterion {self.number}: {self.title} ({elapsed:.2f}s / limit {self.limit}s)"
        if self.detail:
            line += f" -- {self.detail}"
        if self.failures:
            line += " -- " + "; ".join(self.failures[:3])
        if self.capsys is not None:
            with self.capsys.disabled():
                print("\n" + line)
        else:
            print(line)
        if exc is None:
            assert not self.failures, line
        return False


@pytest.fixture
def criterion(capsys):
    def make(number, title, limit):
        return Criterion(capsys, number, title, limit)

    return make


def fixture_ring(name):
    return cli.parse_ring_spec(cli.load_fixture(name))


def cone(*gens, dim=2):
    return RationalCone.from_generators(gens, dim)


# ---------------------------------------------------------------- 1

def test_criterion_1_three_variable_golden(criterion):
    with criterion(1, "golden ray ideals and cones of k[x,y,z], degrees (1,0),(1,1),(0,1)", 1.0) as c:
        ring = fixture_ring("three_variables.json")
        fan = assemble_fan(ring)
        x, y, z = (frozenset({i}) for i in range(3))

        def ideal(*gens):
            """Squarefree monomials (as index sets) in the radical ideal generated by ``gens``."""
            return frozenset(
                frozenset(t) for k in range(4) for t in itertools.combinations(range(3), k)
                if any(g <= frozenset(t) for g in gens)
            )

        expected = {
            ideal(frozenset()): RationalCone.zero(2),
            ideal(x): cone((1, 0)),
            ideal(z): cone((0, 1)),
            ideal(y, x | z): cone((1, 1)),
            ideal(x | y, x | z): cone((1, 0), (1, 1)),
            ideal(x | z, y | z): cone((1, 1), (0, 1)),
        }
        got = {fc.ideal.members: fc.cone for fc in fan.cones}
        c.check(got == expected, f"got {sorted(fc.ideal.describe() for fc in fan.cones)}")
        c.check(fan.fan_ok, "fan verification failed")
        c.detail = ", ".join(fc.ideal.describe() for fc in fan.cones)


# ---------------------------------------------------------------- 2

def _slope_groups(degrees):
    """Group generator indices by ray and sort the groups counterclockwise."""
    def cross(u, v):
        return u[0] * v[1] - u[1] * v[0]

    groups = []
    for i, d in enumerate(degrees):
        for g in groups:
            e = degrees[g[0]]
            if cross(d, e) == 0 and d[0] * e[0] + d[1] * e[1] > 0:
                g.append(i)
                break
        else:
            groups.append([i])
    # in a strongly convex cone "counterclockwise of" is a total order on rays
    order = sorted(range(len(groups)), key=lambda k: sum(cross(degrees[groups[k][0]], degrees[groups[j][0]]) > 0
                                                         for j in range(len(groups))), reverse=True)
    return [groups[k] for k in order]


def _radical_of_intersection(primes, s):
    """Squarefree supports in the radical of the intersection of the primes (x_P : P in primes)."""
    return frozenset(
        frozenset(t) for k in range(s + 1) for t in itertools.combinations(range(s), k)
        if all(frozenset(t) & p for p in primes)
    )


def test_criterion_2_rank_two_formula(criterion):
    with criterion(2, "rank-two slope formula for chambers and rays, 50 specs", 30.0) as c:
        rng = random.Random(2)
        specs = rays_checked = chambers_checked = 0
        while specs < 50:
            degs = [tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(rng.randint(2, 6))]
            if any(d == (0, 0) for d in degs):
                continue
            try:
                ring = GradedRingSpec.polynomial(degs)
            except ValueError:
                continue
            groups = _slope_groups(ring.degrees)
            if len(groups) < 2:
                continue
            specs += 1
            s = ring.s
            before = []
            expected_chambers = {}
            for k, g in enumerate(groups):
                # ray of the k-th slope group
                earlier = frozenset(before)
                upto = earlier | frozenset(g)
                later = frozenset(range(s)) - earlier
                if k == 0:
                    primes = [upto]
                else:
                    primes = [upto, later]
                J = ray_ideal(ring, ring.degrees[g[0]])
                c.check(J.members == _radical_of_intersection(primes, s), f"ray {ring.degrees[g[0]]} of {degs}")
                rays_checked += 1
                before.extend(g)
                if k + 1 < len(groups):
                    head = frozenset(before)
                    tail = frozenset(range(s)) - head
                    d1, d2 = ring.degrees[g[0]], ring.degrees[groups[k + 1][0]]
                    expected_chambers[cone(d1, d2)] = _radical_of_intersection([head, tail], s)
            got = {ch.cone: ch.ideal.members for ch in chamber_decomposition(ring)}
            c.check(got == expected_chambers, f"chambers of {degs}")
            chambers_checked += len(expected_chambers)
        c.detail = f"{specs} specs, {chambers_checked} chambers, {rays_checked} rays"


# ---------------------------------------------------------------- 3

def test_criterion_3_quadric_cone(criterion):
    with criterion(3, "xw = yz semigroup ring: 8 distinct ray ideals, more than the bound 6", 5.0) as c:
        fan = assemble_fan(fixture_ring("quadric_cone.json"))
        ideals = [fc.ideal for fc in fan.cones]
        c.check(len(ideals) == 8 and len(set(ideals)) == 8, f"{len(ideals)} ideals")
        c.check(all(not J.is_zero for J in ideals), "zero ideal listed")
        noether = fan.report["noether_normalization"]
        c.check(noether["ray_ideal_bound_for_finite_polynomial_subring"] == 6, "bound is not 6")
        c.check(noether["exceeds_bound"], "8 > 6 not reported")
        c.check(fan.fan_ok, "fan verification failed")
        c.detail = "8 > 6: " + ", ".join(J.describe() for J in ideals)


# ---------------------------------------------------------------- 4

def test_criterion_4_oracle_gate(criterion):
    with criterion(4, "face criterion vs brute-force oracle, 200 specs", 300.0) as c:
        rng = random.Random(1)
        disagreements = monomials = 0
        for _ in range(200):
            ring = random_polynomial_spec(rng)
            a = combination_point(rng, ring)
            if all(x == 0 for x in a):
                a = tuple(Fraction(x) for x in ring.degrees[0])
            found = brute_force_ray_ideal(ring, a, 8, box_bound=1000)
            J = ray_ideal(ring, a)
            for mono in _enumerate_ambient_monomials(ring, 8):
                monomials += 1
                if J.contains_monomial(mono) != (mono in found):
                    disagreements += 1
                    c.check(False, f"{ring.degrees} a={a} monomial={mono}")
        c.detail = f"{monomials} monomials, {disagreements} disagreements"


# ---------------------------------------------------------------- 5

def test_criterion_5_segment_property(criterion):
    with criterion(5, "segment property on random triples, 100 specs", 120.0) as c:
        rng = random.Random(5)
        triples = violations = 0
        for _ in range(100):
            ring = random_spec(rng)
            pts = [combination_point(rng, ring) for _ in range(6)] + [tuple(map(Fraction, d)) for d in ring.degrees]
            ideals = [ray_ideal(ring, p) for p in pts]
            for (a, Ja), (b, Jb) in itertools.permutations(zip(pts, ideals), 2):
                if Ja.is_zero or not Ja <= Jb or a == b:
                    continue
                for s in (Fraction(1, 5), Fraction(1, 2), Fraction(9, 10)):
                    point = tuple(s * x + (1 - s) * y for x, y in zip(a, b))
                    if point == b:
                        continue
                    triples += 1
                    if ray_ideal(ring, point) != Ja:
                        violations += 1
                        c.check(False, f"{ring.degrees} a={a} b={b}")
        c.check(triples >= 100, f"only {triples} triples sampled")
        c.detail = f"{triples} triples, {violations} violations"


# ---------------------------------------------------------------- 6

FAN_CHECKS = (
    "faces_are_ray_ideal_cones", "unique_maximality", "order_reversal", "fan_axioms", "sign_cells_match_orbit_cones",
)


def test_criterion_6_fan_suite(criterion):
    with criterion(6, "fan verification on 100 random specs", 300.0) as c:
        rng = random.Random(6)
        bad = 0
        for _ in range(100):
            ring = random_spec(rng)
            fan = assemble_fan(ring)
            failed = [k for k in FAN_CHECKS if not fan.report["checks"][k]]
            if failed:
                bad += 1
                c.check(False, f"{ring.degrees}: {failed}")
        c.detail = f"100 specs, {bad} with failed checks"


# ---------------------------------------------------------------- 7

def test_criterion_7_one_chamber_checker(criterion):
    with criterion(7, "one-chamber checker", 60.0) as c:
        out = one_chamber_check(fixture_ring("three_variables.json"))
        c.check(out["c_a_is_ray_ideal_cone"] is False and len(out.get("witness", [])) == 2, "three-variable ring")
        rng = random.Random(7)
        axis_only = mixed = 0
        for trial in range(60):
            n = rng.choice([2, 3])
            axes = [tuple(rng.randint(1, 3) * int(i == k) for i in range(n)) for k in range(n)]
            extra = [tuple(rng.randint(1, 3) * int(i == rng.randrange(n)) for i in range(n)) for _ in range(rng.randint(0, 2))]
            if trial % 2:
                extra += [tuple(rng.randint(0, 2) for _ in range(n)) for _ in range(rng.randint(1, 2))]
                extra = [e for e in extra if any(e)]
            ring = GradedRingSpec.polynomial(axes + extra)
            out = one_chamber_check(ring)
            c.check(out["consistent"], f"inconsistent verdicts for {ring.degrees}")
            c.check(out["c_a_is_ray_ideal_cone"] == (out["distinct_chamber_ideals"] == 1),
                    f"verdict disagrees with chamber count for {ring.degrees}")
            if all(sum(1 for x in d if x) == 1 for d in ring.degrees):
                axis_only += 1
                c.check(out["c_a_is_ray_ideal_cone"] is True, f"axis-only {ring.degrees}")
            else:
                mixed += 1
        c.detail = f"{axis_only} axis-only and {mixed} mixed degree sets"


# ---------------------------------------------------------------- 8

def test_criterion_8_weighted_quadrant_roundtrip(criterion):
    with criterion(8, "round trip for degrees (1,0),(2,0),(0,1),(0,2) on |r_i| <= 10", 10.0) as c:
        ring = GradedRingSpec.polynomial([(1, 0), (2, 0), (0, 1), (0, 2)])
        rep = demazure_roundtrip(ring, cone((1, 0), (0, 1)), grid_bound=10)
        X = rep.variety
        c.check(set(X.rays) == {(1, 0), (-1, 0), (0, 1), (0, -1)} and X.is_complete() and len(X.cones) == 4,
                f"X has rays {X.rays}")
        coeffs = [[x for x in D.coefficients if x] for D in rep.spec.divisors]
        c.check(coeffs == [[Fraction(1, 2)], [Fraction(1, 2)]], f"divisors {coeffs}")
        c.check(rep.ok and rep.checked == 21 * 21, f"{len(rep.mismatches)} mismatches")
        for r in itertools.product(range(-10, 11), repeat=2):
            expected = (r[0] // 2 + 1) * (r[1] // 2 + 1) if min(r) >= 0 else 0
            c.check(graded_piece_dim(rep.spec, r) == expected, f"dim at {r}")
        c.detail = f"{rep.checked} grid points, divisors {[str(D) for D in rep.spec.divisors]}"


# ---------------------------------------------------------------- 9

def test_criterion_9_class_groups(criterion):
    with criterion(9, "class groups and factoriality", 5.0) as c:
        P1 = ToricVarietySpec.create([(1,), (-1,)], [(0,), (1,)])
        P1xP1 = ToricVarietySpec.create([(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 2), (0, 3), (1, 2), (1, 3)])
        half = Fraction(1, 2)
        cases = [
            ("P1xP1 with halves", MultiSectionRingSpec.create(P1xP1, [[half, 0, 0, 0], [0, 0, half, 0]]), "0", True),
            ("(P1, [pt])", MultiSectionRingSpec.create(P1, [[1, 0]]), "0", True),
            ("(P1, 1/2[pt])", MultiSectionRingSpec.create(P1, [[half, 0]]), "0", True),
            ("(P1xP1, ruling)", MultiSectionRingSpec.create(P1xP1, [[1, 0, 0, 0]]), "Z", False),
        ]
        results = []
        for name, spec, expected, factorial in cases:
            data = class_group(spec)
            got = str(data.result)
            results.append(f"{name}: {got}")
            c.check(got == expected, f"{name}: Cl = {got}")
            c.check(data.sequence_consistent, f"{name}: four-term sequence inconsistent")
            c.check(is_factorial(spec)["factorial"] is factorial, f"{name}: factoriality")
        c.detail = "; ".join(results)


# ---------------------------------------------------------------- 10

def test_criterion_10_two_chambers(criterion):
    with criterion(10, "two-chamber ring: chambers, morphisms, round trip", 10.0) as c:
        ring = fixture_ring("two_chambers.json")
        fan = assemble_fan(ring)
        chambers = [fc.cone for fc in fan.maximal_cones]
        c.check(sorted(chambers) == sorted([cone((1, 0), (1, 1)), cone((1, 1), (0, 1))]), f"chambers {chambers}")
        poset = morphism_poset(fan)
        wall = fan.index_of_point((1, 1))
        sources = {i for i, j in poset["edges"] if j == wall}
        c.check(sources == {i for i, fc in enumerate(fan.cones) if fc.maximal}, f"edges {poset['edges']}")
        for sigma in chambers:
            rep = demazure_roundtrip(ring, sigma, grid_bound=6)
            c.check(rep.ok, f"round trip for {sigma}: {rep.mismatches[:2]}")
        c.detail = f"edges {poset['edges']} into ray (1,1)"


if __name__ == "__main__":  # pragma: no cover
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
