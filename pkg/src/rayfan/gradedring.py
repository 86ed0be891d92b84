"""Z^n-graded rings given combinatorially, and their ray ideals.

A ring is either a polynomial ring ``k[x_1..x_s]`` with ``deg x_i = a_i`` or a
semigroup ring ``k[S]`` where ``S`` is generated by exponent vectors
``alpha_i`` in Z^N and degrees come from an integer grading map Z^N -> Z^n.

Ray ideals are represented through the exponent cone ``K`` (the positive
orthant, resp. ``cone(alpha_i)``).  A monomial with exponent ``u`` lies in
the radical ideal ``J_a`` iff ``a`` lies in the image cone ``deg(G)`` of the
minimal face ``G`` of ``K`` containing ``u``.  So ``J_a`` is determined by
the up-closed set of faces ``G`` of ``K`` with ``a in deg(G)``; we keep that
set (as a frozenset of face keys) and compare ideals through it.

A face of ``K`` is keyed by the frozenset of generator indices it contains.
"""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .polycore import RationalCone, lp_feasible
from .polycore.linalg import dot, frac_vector, int_vector, is_zero, mat_vec, primitive, rank

log = logging.getLogger(__name__)


class RingSpecError(ValueError):
    """Raised for invalid ring specs; ``errors`` lists every problem."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class PositivityError(RingSpecError):
    pass


class Kind(str, enum.Enum):
    POLYNOMIAL = "polynomial"
    SEMIGROUP = "semigroup"


class Comparison(str, enum.Enum):
    EQUAL = "equal"
    LESS = "less"  # J1 strictly contained in J2
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


FIELD_HYPOTHESIS = "A_0 is a field (no nonzero nonnegative combination of degrees vanishes)"


def positivity_witness(degrees: Sequence[Sequence[int]]) -> tuple[Fraction, ...] | None:
    """A nonzero lambda >= 0 with sum(lambda_i a_i) = 0, or None if the degrees are positive."""
    s = len(degrees)
    if s == 0:
        return None
    n = len(degrees[0])
    cons = []
    for i in range(s):
        cons.append((tuple(int(j == i) for j in range(s)), ">=", 0))
    cons.append(((1,) * s, "=", 1))
    for k in range(n):
        cons.append((tuple(d[k] for d in degrees), "=", 0))
    res = lp_feasible(cons, dim=s)
    return res.x if res.feasible else None


@dataclass(frozen=True, eq=False)
class GradedRingSpec:
    """Degrees (and, for semigroup rings, exponents and the grading map).

    ``grading_map`` is an n x N integer matrix (rows indexed by the grading).
    """

    n: int
    kind: Kind
    degrees: tuple[tuple[int, ...], ...]
    exponents: tuple[tuple[int, ...], ...] | None = None
    grading_map: tuple[tuple[int, ...], ...] | None = None
    names: tuple[str, ...] | None = None
    truncation_bound: int | None = None
    semigroup_search_bound: int = 64

    # ----- construction -------------------------------------------------
    @classmethod
    def polynomial(cls, degrees: Iterable[Sequence[int]], names: Sequence[str] | None = None,
                   n: int | None = None) -> "GradedRingSpec":
        degrees = [int_vector(d) for d in degrees]
        errors = []
        if n is None:
            if not degrees:
                raise RingSpecError(["empty degree list needs an explicit grading rank n"])
            n = len(degrees[0])
        kept, kept_names = [], []
        for i, d in enumerate(degrees):
            if len(d) != n:
                errors.append(f"degree {i} = {d} does not have {n} entries")
                continue
            if is_zero(d):
                log.warning("dropping generator %d with degree 0", i)
                continue
            kept.append(d)
            if names:
                kept_names.append(names[i])
        if names is not None and len(names) != len(degrees):
            errors.append(f"{len(names)} names for {len(degrees)} generators")
        if errors:
            raise RingSpecError(errors)
        spec = cls(n, Kind.POLYNOMIAL, tuple(kept), names=tuple(kept_names) if names else None)
        spec.validate()
        return spec

    @classmethod
    def semigroup(cls, exponents: Iterable[Sequence[int]], grading_map: Sequence[Sequence[int]],
                  degrees: Iterable[Sequence[int]] | None = None,
                  names: Sequence[str] | None = None, truncation_bound: int | None = None) -> "GradedRingSpec":
        exponents = tuple(int_vector(e) for e in exponents)
        grading_map = tuple(int_vector(r) for r in grading_map)
        errors = []
        if not grading_map:
            raise RingSpecError(["grading map must have at least one row"])
        big_n = len(grading_map[0])
        n = len(grading_map)
        if any(len(r) != big_n for r in grading_map):
            errors.append("grading map rows have different lengths")
        for i, e in enumerate(exponents):
            if len(e) != big_n:
                errors.append(f"exponent vector {i} = {e} does not have {big_n} entries")
            elif any(x < 0 for x in e):
                errors.append(f"exponent vector {i} = {e} has negative entries")
        if errors:
            raise RingSpecError(errors)
        computed = tuple(mat_vec(grading_map, e) for e in exponents)
        if degrees is not None:
            degrees = tuple(int_vector(d) for d in degrees)
            for i, (d, c) in enumerate(zip(degrees, computed)):
                if d != c:
                    errors.append(f"grading map sends exponent {i} to {c}, declared degree {d}")
            if len(degrees) != len(computed):
                errors.append("number of degrees and exponent vectors differ")
        if errors:
            raise RingSpecError(errors)
        spec = cls(n, Kind.SEMIGROUP, computed, exponents, grading_map,
                   tuple(names) if names else None, truncation_bound)
        spec.validate()
        return spec

    def validate(self) -> None:
        errors = []
        for i, d in enumerate(self.degrees):
            if len(d) != self.n:
                errors.append(f"degree {i} has wrong length")
        if self.kind is Kind.SEMIGROUP:
            for i, e in enumerate(self.exponents):
                if is_zero(e):
                    errors.append(f"exponent vector {i} is zero")
        if errors:
            raise RingSpecError(errors)
        lam = positivity_witness(self.degrees)
        if lam is not None:
            raise PositivityError([
                "positivity check failed: the hypothesis that " + FIELD_HYPOTHESIS
                + f" is violated by lambda = {[str(x) for x in lam]}"
            ])

    # ----- identity -----------------------------------------------------
    def _key(self):
        return (self.n, self.kind, self.degrees, self.exponents, self.grading_map)

    def __eq__(self, other):
        return isinstance(other, GradedRingSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def s(self) -> int:
        return len(self.degrees)

    @property
    def ambient_rank(self) -> int:
        return self.s if self.kind is Kind.POLYNOMIAL else len(self.exponents[0])

    @property
    def generator_exponents(self) -> tuple[tuple[int, ...], ...]:
        if self.kind is Kind.POLYNOMIAL:
            return tuple(tuple(int(i == j) for j in range(self.s)) for i in range(self.s))
        return self.exponents

    @cached_property
    def variable_names(self) -> tuple[str, ...]:
        if self.names:
            return self.names
        if self.s <= 4 and self.kind is Kind.POLYNOMIAL:
            return ("x", "y", "z", "w")[: self.s]
        return tuple(f"x{i + 1}" for i in range(self.s))

    def degree(self, exponent: Sequence[int]) -> tuple[int, ...]:
        """Degree of a monomial given by its ambient exponent vector."""
        if self.kind is Kind.POLYNOMIAL:
            return tuple(sum(e * d[k] for e, d in zip(exponent, self.degrees)) for k in range(self.n))
        return mat_vec(self.grading_map, exponent)

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "n": self.n, "degrees": [list(d) for d in self.degrees]}
        if self.kind is Kind.SEMIGROUP:
            out["exponents"] = [list(e) for e in self.exponents]
            out["grading_map"] = [list(r) for r in self.grading_map]
        if self.names:
            out["names"] = list(self.names)
        if self.truncation_bound is not None:
            out["truncation_bound"] = self.truncation_bound
        return out

    # ----- cones --------------------------------------------------------
    @cached_property
    def weight_cone(self) -> RationalCone:
        return RationalCone.from_generators(self.degrees, self.n)

    @cached_property
    def exponent_cone(self) -> RationalCone:
        return RationalCone.from_generators(self.generator_exponents, self.ambient_rank)

    @cached_property
    def faces(self) -> tuple[frozenset, ...]:
        """Faces of the exponent cone, keyed by the generator indices they contain."""
        if self.kind is Kind.POLYNOMIAL:
            return tuple(
                frozenset(c)
                for k in range(self.s + 1)
                for c in itertools.combinations(range(self.s), k)
            )
        keys = set()
        for face in self.exponent_cone.face_lattice():
            keys.add(frozenset(i for i, e in enumerate(self.exponents) if face.cone.contains(e)))
        return tuple(sorted(keys, key=lambda f: (len(f), sorted(f))))

    @cached_property
    def orbit_cones(self) -> dict:
        """Image cone deg(G) for each face key G."""
        by_degrees: dict = {}
        out = {}
        for face in self.faces:
            degs = tuple(sorted({self.degrees[i] for i in face}))
            if degs not in by_degrees:
                by_degrees[degs] = RationalCone.from_generators(degs, self.n)
            out[face] = by_degrees[degs]
        return out

    def face_of_exponent(self, exponent: Sequence[int]) -> frozenset:
        """Key of the minimal face of the exponent cone containing ``exponent``."""
        if self.kind is Kind.POLYNOMIAL:
            return frozenset(i for i, e in enumerate(exponent) if e)
        face = self.exponent_cone.minimal_face(exponent)
        return frozenset(i for i, e in enumerate(self.exponents) if face.cone.contains(e))

    # ----- semigroup membership ----------------------------------------
    @cached_property
    def _positive_functional(self) -> tuple[int, ...]:
        """Integer functional on Z^N that is >= 1 on every generator exponent."""
        big_n = self.ambient_rank
        cons = [(e, ">=", 1) for e in self.generator_exponents]
        res = lp_feasible(cons, dim=big_n)
        assert res.feasible, "positivity should guarantee a positive functional"
        return primitive(res.x) if not is_zero(res.x) else (1,) * big_n

    def semigroup_decomposition(self, exponent: Sequence[int]) -> tuple[int, ...] | None:
        """Coefficients c >= 0 with sum c_i alpha_i = exponent, searched exhaustively.

        The search is bounded by ``semigroup_search_bound`` on the total
        number of generator factors.
        """
        exponent = tuple(exponent)
        if self.kind is Kind.POLYNOMIAL:
            return exponent if all(x >= 0 for x in exponent) else None
        gens = self.exponents
        ell = self._positive_functional
        weights = [dot(ell, g) for g in gens]
        bound = self.semigroup_search_bound
        memo: dict = {}

        def search(rest, start, budget):
            if is_zero(rest):
                return ()
            if budget == 0 or any(x < 0 for x in rest):
                return None
            key = (rest, start)
            if key in memo:
                return memo[key]
            level = dot(ell, rest)
            result = None
            for i in range(start, len(gens)):
                if weights[i] > level:
                    continue
                sub = search(tuple(r - g for r, g in zip(rest, gens[i])), i, budget - 1)
                if sub is not None:
                    result = (i,) + sub
                    break
            memo[key] = result
            return result

        path = search(exponent, 0, bound)
        if path is None:
            return None
        coeffs = [0] * len(gens)
        for i in path:
            coeffs[i] += 1
        return tuple(coeffs)

    def in_semigroup(self, exponent: Sequence[int]) -> bool:
        return self.semigroup_decomposition(exponent) is not None

    def check_monomial(self, exponent: Sequence[int]) -> tuple[int, ...]:
        exponent = int_vector(exponent)
        if len(exponent) != self.ambient_rank:
            raise ValueError(f"monomial {exponent} does not have {self.ambient_rank} entries")
        if any(x < 0 for x in exponent):
            raise ValueError(f"monomial {exponent} has negative exponents")
        if self.kind is Kind.SEMIGROUP and not self.in_semigroup(exponent):
            raise ValueError(
                f"exponent {exponent} is not in the semigroup "
                f"(searched up to {self.semigroup_search_bound} factors)"
            )
        return exponent

    def monomial(self, word: str) -> tuple[int, ...]:
        """Exponent vector of a product of generator names, e.g. ``"x*z^2"``."""
        coeffs = [0] * self.s
        names = self.variable_names
        for part in word.replace(" ", "").split("*"):
            if not part or part == "1":
                continue
            base, _, power = part.partition("^")
            if base not in names:
                raise ValueError(f"unknown generator {base!r}")
            coeffs[names.index(base)] += int(power) if power else 1
        gens = self.generator_exponents
        return tuple(sum(c * g[k] for c, g in zip(coeffs, gens)) for k in range(self.ambient_rank))


def _normalize_point(point: Sequence, n: int) -> tuple[Fraction, ...]:
    p = frac_vector(point)
    if len(p) != n:
        raise ValueError(f"point {tuple(point)} does not have {n} entries")
    if is_zero(p):
        return p
    return tuple(Fraction(x) for x in primitive(p))


@dataclass(frozen=True, eq=False)
class RayIdeal:
    """The radical ideal J_a, stored as its up-closed set of member faces."""

    ring: GradedRingSpec = field(repr=False)
    members: frozenset
    point: tuple[Fraction, ...] = field(default=(), compare=False)

    def __eq__(self, other):
        return isinstance(other, RayIdeal) and self.ring == other.ring and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    @property
    def is_zero(self) -> bool:
        return not self.members

    @property
    def is_unit(self) -> bool:
        return frozenset() in self.members

    @cached_property
    def minimal_members(self) -> tuple[frozenset, ...]:
        mins = [f for f in self.members if not any(g < f for g in self.members)]
        return tuple(sorted(mins, key=lambda f: (len(f), sorted(f))))

    @cached_property
    def minimal_primes(self) -> tuple[frozenset, ...]:
        """Variable sets T with J = intersection of (x_i : i in T); polynomial rings only."""
        if self.ring.kind is not Kind.POLYNOMIAL:
            raise TypeError("minimal primes are only presented for polynomial rings")
        if self.is_unit:
            return ()
        s = self.ring.s
        everything = frozenset(range(s))
        non_members = [f for f in self.ring.faces if f not in self.members]
        maximal = [f for f in non_members if not any(f < g for g in non_members)]
        return tuple(sorted((everything - f for f in maximal), key=lambda t: (len(t), sorted(t))))

    @property
    def generators(self) -> tuple[tuple[int, ...], ...]:
        """Squarefree monomial generators (polynomial) / face-sum monomials (semigroup)."""
        out = []
        for f in self.minimal_members:
            out.append(tuple(
                sum(self.ring.generator_exponents[i][k] for i in f) for k in range(self.ring.ambient_rank)
            ))
        return tuple(out)

    def height(self) -> int | None:
        """Height of J (polynomial rings): smallest minimal prime."""
        if self.is_zero:
            return 0
        if self.is_unit:
            return None
        return min(len(t) for t in self.minimal_primes)

    def contains_monomial(self, exponent: Sequence[int]) -> bool:
        return self.ring.face_of_exponent(exponent) in self.members

    def __le__(self, other: "RayIdeal") -> bool:
        _same_ring(self, other)
        return self.members <= other.members

    def __lt__(self, other: "RayIdeal") -> bool:
        _same_ring(self, other)
        return self.members < other.members

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def describe(self) -> str:
        if self.is_zero:
            return "0"
        if self.is_unit:
            return "A"
        names = self.ring.variable_names
        gens = []
        for f in self.minimal_members:
            gens.append("".join(names[i] for i in sorted(f)))
        return "(" + ", ".join(gens) + ")"

    def to_json(self) -> dict:
        out = {
            "is_zero": self.is_zero,
            "is_unit": self.is_unit,
            "minimal_faces": [sorted(f) for f in self.minimal_members],
            "generators": [list(g) for g in self.generators],
            "text": self.describe(),
        }
        if self.ring.kind is Kind.POLYNOMIAL and not self.is_zero:
            out["minimal_primes"] = [sorted(t) for t in self.minimal_primes]
        return out


def _same_ring(j1: RayIdeal, j2: RayIdeal) -> None:
    if j1.ring != j2.ring:
        raise ValueError("ray ideals of different rings cannot be compared")


def weight_cone(ring: GradedRingSpec) -> RationalCone:
    return ring.weight_cone


def ray_ideal(ring: GradedRingSpec, a: Sequence) -> RayIdeal:
    """J_a via the face criterion: member faces G are those with a in deg(G)."""
    p = _normalize_point(a, ring.n)
    members = frozenset(face for face, cone in ring.orbit_cones.items() if cone.contains(p))
    return RayIdeal(ring, members, p)


def monomial_in_ray_ideal(ring: GradedRingSpec, monomial: Sequence[int], a: Sequence,
                          method: str = "face") -> bool:
    """Is the monomial with ambient exponent vector ``monomial`` in J_a?

    ``method="face"`` uses the face criterion, ``method="lp"`` decides
    existence of q > 0 and w in K with deg(w) = q.a and monomial - w in K.
    """
    u = ring.check_monomial(monomial)
    p = _normalize_point(a, ring.n)
    if method == "face":
        return ray_ideal(ring, p).contains_monomial(u)
    if method != "lp":
        raise ValueError(f"unknown method {method!r}")
    if is_zero(p):
        return True
    K = ring.exponent_cone
    big_n = ring.ambient_rank
    # variables (w_1..w_N, q)
    cons = []
    for h in K.halfspaces:
        cons.append((tuple(h) + (0,), ">=", 0))
        cons.append((tuple(-x for x in h) + (0,), ">=", -dot(h, u)))
    if ring.kind is Kind.POLYNOMIAL:
        gmap = tuple(tuple(d[k] for d in ring.degrees) for k in range(ring.n))
    else:
        gmap = ring.grading_map
    for k in range(ring.n):
        cons.append((tuple(gmap[k]) + (-p[k],), "=", 0))
    cons.append(((0,) * big_n + (1,), ">", 0))
    return lp_feasible(cons, dim=big_n + 1).feasible


def ray_ideal_compare(j1: RayIdeal, j2: RayIdeal) -> Comparison:
    _same_ring(j1, j2)
    if j1.members == j2.members:
        return Comparison.EQUAL
    if j1.members < j2.members:
        return Comparison.LESS
    if j1.members > j2.members:
        return Comparison.GREATER
    return Comparison.INCOMPARABLE


# ----- restriction ------------------------------------------------------

def _enumerate_ambient_monomials(ring: GradedRingSpec, bound: int) -> list[tuple[int, ...]]:
    """Distinct elements of the semigroup that are sums of at most ``bound`` generators."""
    gens = ring.generator_exponents
    seen = {tuple(0 for _ in range(ring.ambient_rank))}
    layer = set(seen)
    for _ in range(bound):
        nxt = set()
        for v in layer:
            for g in gens:
                w = tuple(x + y for x, y in zip(v, g))
                if w not in seen:
                    nxt.add(w)
        seen |= nxt
        layer = nxt
    return sorted(seen)


def _minimal_generators(elements: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
    elems = sorted({e for e in elements if not is_zero(e)}, key=lambda e: (sum(e), e))
    pool = set(elems)
    gens = []
    for e in elems:
        decomposable = any(
            tuple(x - y for x, y in zip(e, g)) in pool for g in gens if g != e
        )
        if not decomposable:
            gens.append(e)
    return gens


def _restricted_spec(ring: GradedRingSpec, keep, bound: int) -> GradedRingSpec:
    elements = [e for e in _enumerate_ambient_monomials(ring, bound) if keep(ring.degree(e))]
    gens = _minimal_generators(elements)
    if ring.kind is Kind.POLYNOMIAL:
        gmap = tuple(tuple(d[k] for d in ring.degrees) for k in range(ring.n))
    else:
        gmap = ring.grading_map
    if not gens:
        raise RingSpecError(["restriction has no nonconstant monomials within the bound"])
    return GradedRingSpec.semigroup(gens, gmap, truncation_bound=bound)


def restrict_to_cone(ring: GradedRingSpec, sigma: RationalCone, bound: int = 6) -> GradedRingSpec:
    """Model of A_sigma: monomials of degree in sigma, generated up to ``bound`` factors."""
    if sigma.ambient_dim != ring.n:
        raise ValueError("cone and ring have different grading ranks")
    return _restricted_spec(ring, sigma.contains, bound)


def restrict_to_subgroup(ring: GradedRingSpec, basis: Sequence[Sequence[int]], bound: int = 6) -> GradedRingSpec:
    """Model of A_T for the full-rank sublattice T spanned by the rows of ``basis``."""
    basis = [int_vector(b) for b in basis]
    if len(basis) != ring.n or rank(basis) != ring.n:
        raise ValueError("sublattice basis must have full rank")
    from .polycore.linalg import solve

    cols = tuple(zip(*basis))

    def in_lattice(d):
        x = solve(cols, d)
        return x is not None and all(c.denominator == 1 for c in x)

    return _restricted_spec(ring, in_lattice, bound)


# ----- brute-force oracle -------------------------------------------------

def ray_generators(ring: GradedRingSpec, a: Sequence, size_bound: int) -> list[tuple[int, ...]]:
    """Semigroup elements (sums of <= size_bound generators) with degree on the open ray R>0.a."""
    p = primitive(frac_vector(a)) if not is_zero(frac_vector(a)) else None
    if p is None:
        return []
    out = []
    for e in _enumerate_ambient_monomials(ring, size_bound):
        d = ring.degree(e)
        if is_zero(d):
            continue
        if _on_open_ray(d, p):
            out.append(e)
    return out


def _on_open_ray(d: Sequence[int], p: Sequence[int]) -> bool:
    if dot(d, p) <= 0:
        return False
    n = len(p)
    return all(d[i] * p[j] == d[j] * p[i] for i in range(n) for j in range(i + 1, n))


def brute_force_ray_ideal(ring: GradedRingSpec, a: Sequence, degree_bound: int,
                          power_bound: int | None = None, factor_bound: int | None = None,
                          box_bound: int = 1000) -> set:
    """Monomials (sums of <= degree_bound generators) lying in J_a, found by exhaustive search.

    Semigroup rings: a monomial ``u`` is accepted when some
    ``m <= power_bound`` gives a factorisation ``m.u = g + h`` inside the
    semigroup with ``deg g`` on the open ray through ``a``; ``g`` ranges over
    elements built from at most ``factor_bound`` generators.

    Polynomial rings: divisor search over the exponent boxes
    ``{0..box_bound}^T`` for small supports T (see ``_brute_force_polynomial``).
    No cone or LP machinery is used in either case.
    """
    power_bound = power_bound or degree_bound
    factor_bound = factor_bound or degree_bound
    monomials = _enumerate_ambient_monomials(ring, degree_bound)
    if is_zero(frac_vector(a)):
        return set(monomials)
    if ring.kind is Kind.POLYNOMIAL:
        return _brute_force_polynomial(ring, _primitive_point(a), monomials, box_bound)
    gens = ray_generators(ring, a, factor_bound)
    found = set()
    for u in monomials:
        for m in range(1, power_bound + 1):
            mu = tuple(m * x for x in u)
            if any(
                all(x >= y for x, y in zip(mu, g)) and ring.in_semigroup(tuple(x - y for x, y in zip(mu, g)))
                for g in gens
            ):
                found.add(u)
                break
    return found


def _primitive_point(a: Sequence) -> tuple[int, ...]:
    return primitive(frac_vector(a))


def _support_has_ray_witness(degrees, support, a, bound) -> bool:
    """Is there g in {0..bound}^support, g != 0, with sum g_i deg_i on the open ray through a?

    Exhaustive over the box: all coordinates but one are enumerated as a
    numpy block; the last one is then forced by collinearity with ``a``
    (or free, when its degree is itself parallel to ``a``), and checked for
    integrality and range.
    """
    if not support:
        return False
    av = np.array(a, dtype=np.int64)
    n = len(av)
    # put a degree that is not parallel to a last, if there is one
    order = sorted(support, key=lambda i: not _parallel(degrees[i], a))
    degs = np.array([degrees[i] for i in order], dtype=np.int64)
    last = degs[-1]
    if _parallel(degrees[order[-1]], a):
        # every degree is parallel to a, so any unit vector g is a candidate
        return bool((degs @ av > 0).any())
    rng = np.arange(bound + 1, dtype=np.int64)
    head = len(order) - 1
    if head:
        grids = np.meshgrid(*([rng] * head), indexing="ij")
        base = np.stack([g.ravel() for g in grids], axis=1) @ degs[:-1]
    else:
        base = np.zeros((1, n), dtype=np.int64)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    i0, j0 = next((i, j) for i, j in pairs if last[i] * av[j] != last[j] * av[i])
    coef = last[i0] * av[j0] - last[j0] * av[i0]
    rhs = base[:, j0] * av[i0] - base[:, i0] * av[j0]
    ok = rhs % coef == 0
    g_last = rhs // coef
    ok &= (g_last >= 0) & (g_last <= bound)
    total = base + g_last[:, None] * last
    for i, j in pairs:
        ok &= total[:, i] * av[j] == total[:, j] * av[i]
    ok &= total @ av > 0
    return bool(ok.any())


def _parallel(d, a) -> bool:
    n = len(a)
    return all(d[i] * a[j] == d[j] * a[i] for i in range(n) for j in range(i + 1, n))


def _brute_force_polynomial(ring, a, monomials, box_bound) -> set:
    """Polynomial rings: ``x^u`` is in J_a iff some ``x^g`` dividing a power of
    ``x^u`` has degree on the open ray through ``a``.

    Such ``g`` are exactly the nonzero ``g >= 0`` supported on supp(u).  By
    Caratheodory a witness can be taken supported on at most ``n`` linearly
    independent degrees, so only supports of size <= n are searched, each
    exhaustively over the box ``{0..box_bound}^T``.
    A support is accepted when one of its small subsets has a witness.
    """
    small: dict = {}

    def small_hit(T):
        if T not in small:
            # small boxes first; the final pass covers the whole box
            steps = [b for b in (8, 64) if b < box_bound] + [box_bound]
            small[T] = any(_support_has_ray_witness(ring.degrees, T, a, b) for b in steps)
        return small[T]

    verdict: dict = {}
    found = set()
    for u in monomials:
        supp = tuple(i for i, x in enumerate(u) if x)
        if supp not in verdict:
            verdict[supp] = any(
                small_hit(T)
                for k in range(1, min(len(supp), ring.n) + 1)
                for T in itertools.combinations(supp, k)
            )
        if verdict[supp]:
            found.add(u)
    return found
