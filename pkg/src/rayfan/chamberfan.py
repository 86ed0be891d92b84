"""Chambers, maximal ray-ideal cones and the fan they form.

Two independent constructions are provided and cross-checked:

* sign cells of the hyperplane arrangement spanned by degree subsets, each
  labelled with the ray ideal at an interior point (``chamber_decomposition``);
* the maximal cone of an ideal as the intersection of the orbit cones that
  contain a point (``maximal_ray_ideal_cone``).

When the degrees do not span Q^n the arrangement is built in coordinates on
the saturated lattice spanned by the degrees.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .gradedring import GradedRingSpec, RayIdeal, ray_ideal, ray_ideal_compare, Comparison
from .polycore import RationalCone, lp_feasible, saturated_column_basis
from .polycore.linalg import (
    dot,
    frac_vector,
    nullspace,
    primitive,
    rank,
    sign_canonical,
    solve,
    transpose,
)

log = logging.getLogger(__name__)


class ChamberError(ValueError):
    pass


# ----- arrangement -------------------------------------------------------

@dataclass(frozen=True)
class Arrangement:
    """Hyperplanes spanned by degree subsets, in coordinates of ``basis``.

    ``basis`` holds the columns of an n x k matrix whose columns form a basis
    of the saturated lattice spanned by the degrees; ``reduced_degrees`` are
    the degrees in that basis.  When k = n the basis is the identity.
    """

    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]  # k column vectors in Z^n
    reduced_degrees: tuple[tuple[int, ...], ...]
    hyperplane_normals: tuple[tuple[int, ...], ...]
    source_subsets: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.hyperplane_normals)

    def to_ambient(self, v: Sequence) -> tuple:
        """Map reduced coordinates to Z^n / Q^n."""
        return tuple(sum(c * b[i] for c, b in zip(v, self.basis)) for i in range(self.ambient_dim))

    def to_reduced(self, v: Sequence) -> tuple:
        x = solve(transpose(self.basis), frac_vector(v))
        if x is None:
            raise ChamberError(f"{tuple(v)} is not in the span of the degrees")
        return x

    def ambient_normals(self) -> tuple[tuple[int, ...], ...]:
        """A primitive ambient normal for each hyperplane (unique only modulo span(C)^perp)."""
        out = []
        for f in self.hyperplane_normals:
            # pick w in Q^n with <w, basis_j> = f_j
            w = solve(self.basis, f)
            out.append(primitive(w))
        return tuple(out)


def _degree_lattice(ring: GradedRingSpec):
    n = ring.n
    if rank(ring.degrees) == n:
        basis = tuple(tuple(int(i == j) for i in range(n)) for j in range(n))
        return basis, ring.degrees
    cols = saturated_column_basis(transpose(ring.degrees), n)
    basis = tuple(tuple(c) for c in cols)
    reduced = []
    for d in ring.degrees:
        x = solve(transpose(basis), d)
        assert x is not None and all(c.denominator == 1 for c in x)
        reduced.append(tuple(int(c) for c in x))
    return basis, tuple(reduced)


def build_arrangement(ring: GradedRingSpec) -> Arrangement:
    basis, reduced = _degree_lattice(ring)
    k = len(basis)
    normals: dict = {}
    if k >= 2:
        for subset in itertools.combinations(range(ring.s), k - 1):
            vecs = [reduced[i] for i in subset]
            if rank(vecs) != k - 1:
                continue
            (f,) = nullspace(vecs, k)
            f = sign_canonical(primitive(f))
            normals.setdefault(f, subset)
    items = sorted(normals.items())
    return Arrangement(
        ambient_dim=ring.n,
        basis=basis,
        reduced_degrees=reduced,
        hyperplane_normals=tuple(f for f, _ in items),
        source_subsets=tuple(s for _, s in items),
    )


# ----- chambers ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Chamber:
    cone: RationalCone
    sign_vector: tuple[int, ...]
    ideal: RayIdeal
    witnesses: tuple[tuple[Fraction, ...], ...]
    reduced_cone: RationalCone = field(repr=False)

    @property
    def witness(self) -> tuple[Fraction, ...]:
        return self.witnesses[0]


def _interior_points(cone: RationalCone, count: int = 3) -> list[tuple[Fraction, ...]]:
    """Deterministic distinct relative-interior points."""
    pts = [cone.interior_point()]
    base = pts[0]
    for r in cone.rays + tuple(reversed(cone.rays)):
        if len(pts) >= count:
            break
        for k in (2, 3, 5):
            q = tuple(x + Fraction(y, k) for x, y in zip(base, r))
            if cone.relint_contains(q) and q not in pts:
                pts.append(q)
                break
    return pts


def _sign_cells(arr: Arrangement) -> list[tuple[RationalCone, tuple[int, ...]]]:
    """Full-dimensional cells of C(A) cut by the arrangement, in reduced coordinates.

    Incremental splitting: a cell is split by a hyperplane only if its rays
    take both signs, in which case both closed halves are full-dimensional.
    """
    k = arr.rank
    start = RationalCone.from_generators(arr.reduced_degrees, k)
    cells: list[tuple[RationalCone, tuple[int, ...]]] = [(start, ())]
    for f in arr.hyperplane_normals:
        nxt = []
        neg = tuple(-x for x in f)
        for cell, signs in cells:
            vals = [dot(f, r) for r in cell.rays]
            if any(v > 0 for v in vals) and any(v < 0 for v in vals):
                nxt.append((cell.intersect(RationalCone.from_halfspaces([f], k)), signs + (1,)))
                nxt.append((cell.intersect(RationalCone.from_halfspaces([neg], k)), signs + (-1,)))
            else:
                nxt.append((cell, signs + ((1,) if any(v > 0 for v in vals) else (-1,))))
        cells = nxt
    return cells


def _certify_cell(arr: Arrangement, signs: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Witness of the open sign cell {sign_i <f_i, x> > 0}, or None if it is empty."""
    cons = [(tuple(s * x for x in f), ">", 0) for f, s in zip(arr.hyperplane_normals, signs)]
    if not cons:
        return tuple(Fraction(1) for _ in range(arr.rank))
    res = lp_feasible(cons, dim=arr.rank)
    return res.x if res.feasible else None


def chamber_decomposition(ring: GradedRingSpec, arrangement: Arrangement | None = None) -> list[Chamber]:
    """Closed full-dimensional sign cells of C(A), each with its ray ideal.

    Every cell is certified nonempty by an exact strict LP, and the ideal is
    checked to be the same at three interior points.
    """
    arr = arrangement or build_arrangement(ring)
    out = []
    for cell, signs in _sign_cells(arr):
        if _certify_cell(arr, signs) is None:  # pragma: no cover - splitting keeps cells open
            raise ChamberError(f"sign cell {signs} has empty interior")
        pts_red = _interior_points(cell)
        pts = [arr.to_ambient(p) for p in pts_red]
        ideals = {ray_ideal(ring, p) for p in pts}
        if len(ideals) != 1:
            raise ChamberError(f"ray ideal is not constant on the cell with signs {signs}")
        amb = RationalCone.from_generators([arr.to_ambient(r) for r in cell.rays], ring.n)
        out.append(Chamber(amb, tuple(signs), ideals.pop(), tuple(pts), cell))
    out.sort(key=lambda c: c.cone.sort_key())
    return out


# ----- maximal cones -----------------------------------------------------

def maximal_ray_ideal_cone(ring: GradedRingSpec, a: Sequence) -> RationalCone:
    """Intersection of all orbit cones deg(G) that contain ``a``."""
    J = ray_ideal(ring, a)
    if J.is_zero:
        raise ChamberError(f"J_a = 0 for a = {tuple(str(x) for x in a)}: a lies outside C(A)")
    return _cone_of_ideal(ring, J.members)


@lru_cache(maxsize=4096)
def _cone_of_ideal(ring: GradedRingSpec, members: frozenset) -> RationalCone:
    orbit = ring.orbit_cones
    cones = {orbit[f] for f in members}
    normals = []
    for c in cones:
        normals.extend(c.halfspaces)
    return RationalCone.from_halfspaces(normals, ring.n)


def is_ray_ideal_cone(ring: GradedRingSpec, cone: RationalCone) -> bool:
    """J is constant and nonzero on relint(cone) iff cone lies in lambda(b) for b in relint(cone)."""
    b = cone.interior_point()
    J = ray_ideal(ring, b)
    if J.is_zero:
        return False
    return _cone_of_ideal(ring, J.members).contains_cone(cone)


# ----- fan ---------------------------------------------------------------

@dataclass
class FanCone:
    cone: RationalCone
    ideal: RayIdeal
    maximal: bool = False

    def to_json(self) -> dict:
        return {
            "rays": [list(r) for r in self.cone.rays],
            "dim": self.cone.dim,
            "ideal": self.ideal.describe(),
            "minimal_faces": [sorted(f) for f in self.ideal.minimal_members],
            "maximal": self.maximal,
        }


@dataclass
class ChamberFan:
    ring: GradedRingSpec
    cones: list[FanCone]
    hasse: list[tuple[int, int]]  # (i, j): cones[i] is a facet of cones[j], J_i strictly contains J_j
    chambers: list[Chamber]
    report: dict

    @property
    def maximal_cones(self) -> list[FanCone]:
        return [c for c in self.cones if c.maximal]

    @property
    def ideals(self) -> list[RayIdeal]:
        return [c.ideal for c in self.cones]

    @property
    def fan_ok(self) -> bool:
        return all(v for k, v in self.report["checks"].items())

    def cone_of(self, ideal: RayIdeal) -> RationalCone:
        for c in self.cones:
            if c.ideal == ideal:
                return c.cone
        raise KeyError(ideal.describe())

    def index_of_point(self, a: Sequence) -> int:
        J = ray_ideal(self.ring, a)
        for i, c in enumerate(self.cones):
            if c.ideal == J:
                return i
        raise KeyError(J.describe())

    def to_json(self) -> dict:
        return {
            "cones": [c.to_json() for c in self.cones],
            "hasse": [list(e) for e in self.hasse],
            "chambers": [
                {
                    "rays": [list(r) for r in ch.cone.rays],
                    "sign_vector": list(ch.sign_vector),
                    "ideal": ch.ideal.describe(),
                    "witness": [str(x) for x in ch.witness],
                }
                for ch in self.chambers
            ],
            "report": self.report,
        }


def _random_points(cone: RationalCone, count: int, seed: int) -> list[tuple[Fraction, ...]]:
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        coeffs = [Fraction(rng.randint(0, 12), rng.randint(1, 4)) for _ in cone.rays]
        if not any(coeffs):
            coeffs[rng.randrange(len(coeffs))] = Fraction(1)
        pts.append(tuple(sum(c * r[i] for c, r in zip(coeffs, cone.rays)) for i in range(cone.ambient_dim)))
    return pts


def assemble_fan(ring: GradedRingSpec, samples: int = 200, seed: int = 0) -> ChamberFan:
    """Fan of maximal ray-ideal cones, with a verification report."""
    if ring.weight_cone.lineality:  # pragma: no cover - excluded by positivity
        raise ChamberError("C(A) is not strongly convex")
    chambers = chamber_decomposition(ring)

    # maximal cones from orbit cones at the chamber witnesses, merged by ideal
    maximal: dict = {}
    cells_by_ideal: dict = {}
    for ch in chambers:
        maximal.setdefault(ch.ideal, _cone_of_ideal(ring, ch.ideal.members))
        cells_by_ideal.setdefault(ch.ideal, []).append(ch)

    # face closure
    by_cone: dict = {}
    for J, sigma in maximal.items():
        for tau in sigma.faces():
            by_cone.setdefault(tau, None)
    checks = {}
    closure_ok = True
    entries: dict = {}
    for tau in by_cone:
        J = ray_ideal(ring, tau.interior_point())
        if J.is_zero or _cone_of_ideal(ring, J.members) != tau:
            closure_ok = False
        entries[tau] = J
    checks["faces_are_ray_ideal_cones"] = closure_ok

    cones = [FanCone(tau, J, tau in maximal.values()) for tau, J in entries.items()]
    cones.sort(key=lambda c: (c.cone.sort_key()))
    ideals = [c.ideal for c in cones]
    checks["unique_maximality"] = len(set(ideals)) == len(ideals)

    # order reversal: J1 > J2  <=>  sigma1 proper face of sigma2
    order_ok = True
    hasse = []
    for i, ci in enumerate(cones):
        for j, cj in enumerate(cones):
            if i == j:
                continue
            bigger = ray_ideal_compare(ci.ideal, cj.ideal) is Comparison.GREATER
            face = ci.cone != cj.cone and ci.cone.is_face_of(cj.cone)
            if bigger != face:
                order_ok = False
            if face and ci.cone.dim == cj.cone.dim - 1:
                hasse.append((i, j))
    checks["order_reversal"] = order_ok

    # fan axioms
    listed = {c.cone for c in cones}
    fan_ok = all(c.cone.is_pointed for c in cones)
    for ci, cj in itertools.combinations([c for c in cones if c.maximal], 2):
        inter = ci.cone & cj.cone
        if inter not in listed or not inter.is_face_of(ci.cone) or not inter.is_face_of(cj.cone):
            fan_ok = False
    checks["fan_axioms"] = fan_ok

    # coverage and uniqueness at sample points
    C = ring.weight_cone
    pts = [tuple(Fraction(x) for x in r) for r in C.rays] + _random_points(C, samples, seed)
    for ch in chambers:
        for facet in ch.cone.faces():
            if facet.dim == ch.cone.dim - 1:
                pts.append(facet.interior_point())
    cover_ok = True
    unique_ok = True
    for p in pts:
        if not any(c.cone.contains(p) for c in cones if c.maximal):
            cover_ok = False
        J = ray_ideal(ring, p)
        for c in cones:
            if c.ideal == J and not c.cone.relint_contains(p):
                unique_ok = False
    checks["coverage"] = cover_ok
    checks["uniqueness_at_samples"] = unique_ok

    # cross validation: merged sign cells tile the orbit-cone construction
    cross_ok = True
    for J, cells in cells_by_ideal.items():
        gens = [r for ch in cells for r in ch.cone.rays]
        if RationalCone.from_generators(gens, ring.n) != maximal[J]:
            cross_ok = False
    checks["sign_cells_match_orbit_cones"] = cross_ok

    report = {
        "checks": checks,
        "chamber_count": len(chambers),
        "maximal_cone_count": len(maximal),
        "nonzero_ray_ideal_count": len(cones),
        "pre_merge_cells": [
            {"sign_vector": list(ch.sign_vector), "rays": [list(r) for r in ch.cone.rays], "ideal": ch.ideal.describe()}
            for ch in chambers
        ],
        "sample_points": len(pts),
    }
    if ring.n == 2 and C.dim == 2:
        bound = 2 * ring.exponent_cone.dim
        report["noether_normalization"] = {
            "ray_ideal_bound_for_finite_polynomial_subring": bound,
            "nonzero_ray_ideals": len(cones),
            "exceeds_bound": len(cones) > bound,
        }
    return ChamberFan(ring, cones, hasse, chambers, report)


def morphism_poset(fan: ChamberFan) -> dict:
    """Maximal cones as vertices; an edge a -> b when sigma_b is a proper face of sigma_a.

    The targets are the lower-dimensional cones that the maximal cones map to
    (ideal containment J_b > J_a), restricted to the cones that are faces of
    at least two maximal cones or are themselves maximal.
    """
    cones = fan.cones
    maximal = [i for i, c in enumerate(cones) if c.maximal]
    walls = [
        j for j, c in enumerate(cones)
        if not c.maximal and sum(c.cone.is_face_of(cones[i].cone) for i in maximal) >= 2
        and c.cone.dim == max(cones[i].cone.dim for i in maximal) - 1
    ]
    vertices = maximal + walls
    edges = []
    for i in maximal:
        for j in walls:
            if cones[j].cone.is_face_of(cones[i].cone):
                edges.append((i, j))
    return {"vertices": vertices, "edges": edges}


def one_chamber_check(ring: GradedRingSpec) -> dict:
    """Decide whether C(A) = (R>=0)^n is itself a chamber, and the equivalent conditions.

    * ``c_a_is_ray_ideal_cone``: the ray ideal is the same on every chamber;
    * ``faces_are_ray_ideal_cones``: every face of the orthant is a ray ideal cone;
    * ``finite_extension``: A is finite over the subring B generated by the
      generators of degree on a coordinate axis.  For monomial rings this holds
      iff every generator exponent lies in the cone of B's exponents (a power
      of each generator is then a monomial of B).

    The three verdicts are computed independently and must agree.
    """
    n = ring.n
    orthant = RationalCone.from_generators([tuple(int(i == j) for j in range(n)) for i in range(n)], n)
    if ring.weight_cone != orthant:
        raise ChamberError("the one-chamber test needs C(A) to be the nonnegative orthant")
    chambers = chamber_decomposition(ring)
    first = chambers[0]
    witness = None
    for ch in chambers[1:]:
        if ch.ideal != first.ideal:
            witness = (first.witness, ch.witness)
            break
    one_chamber = witness is None
    faces_ok = all(is_ray_ideal_cone(ring, f) for f in orthant.faces())
    on_axis = [i for i, d in enumerate(ring.degrees) if sum(1 for x in d if x) == 1]
    exps = ring.generator_exponents
    b_cone = RationalCone.from_generators([exps[i] for i in on_axis], ring.ambient_rank)
    finite = all(b_cone.contains(e) for e in exps)
    out = {
        "c_a_is_ray_ideal_cone": one_chamber,
        "faces_are_ray_ideal_cones": faces_ok,
        "finite_extension": finite,
        "consistent": one_chamber == faces_ok == finite,
        "chambers": len(chambers),
        "distinct_chamber_ideals": len({ch.ideal for ch in chambers}),
    }
    if witness:
        out["witness"] = [[str(x) for x in p] for p in witness]
        out["witness_ideals"] = [first.ideal.describe(), ray_ideal(ring, witness[1]).describe()]
    return out
