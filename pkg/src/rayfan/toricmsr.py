"""Multi-section rings R(X; D_1..D_n) of complete toric varieties.

A toric variety is given by its rays ``v_F`` (one per torus-invariant prime
divisor F) and its maximal cones as lists of ray indices.  A Q-divisor is a
table of rational coefficients, one per ray.  Degree ``r`` of the
multi-section ring is H^0(X, O(sum r_i D_i)), counted as lattice points

    { u in Z^d : <u, v_F> + sum_i r_i m_{i,F} >= 0  for every ray F }.

The divisor class group of R is computed from the torus-invariant
height-one primes P_F, whose valuations are v_{P_F}(chi^u t^r) =
q_F (<u, v_F> + sum_i r_i m_{i,F}); the result is cross-checked against the
four-term sequence L cap Z^l -> Cl(X) -> Cl(R) -> M/(L + Z^l) -> 0.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import floor, gcd, lcm
from typing import Sequence

from .gradedring import GradedRingSpec, Kind, ray_ideal
from .polycore import (
    AbelianGroup,
    RationalCone,
    integer_kernel,
    lp_feasible,
    quotient_by_rows,
    smith_normal_form,
    solve_integer,
)
from .polycore.linalg import as_fraction, dot, int_vector, primitive, sign_canonical, solve

log = logging.getLogger(__name__)


class ToricError(ValueError):
    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class RoundTripError(ValueError):
    pass


# ----- toric varieties ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class ToricVarietySpec:
    rays: tuple[tuple[int, ...], ...]
    cones: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] | None = None

    @classmethod
    def create(cls, rays, cones, names=None, require_complete: bool = True) -> "ToricVarietySpec":
        rays = tuple(int_vector(r) for r in rays)
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in cones)
        spec = cls(rays, cones, tuple(names) if names else None)
        errors = spec.validation_errors(require_complete)
        if errors:
            raise ToricError(errors)
        return spec

    def __eq__(self, other):
        return isinstance(other, ToricVarietySpec) and (self.rays, self.cones, self.names) == (
            other.rays, other.cones, other.names)

    def __hash__(self):
        return hash((self.rays, self.cones, self.names))

    @property
    def d(self) -> int:
        return len(self.rays[0]) if self.rays else 0

    @property
    def ray_names(self) -> tuple[str, ...]:
        return self.names or tuple(f"F{i}" for i in range(len(self.rays)))

    @cached_property
    def cone_objects(self) -> tuple[RationalCone, ...]:
        return tuple(RationalCone.from_generators([self.rays[i] for i in c], self.d) for c in self.cones)

    def validation_errors(self, require_complete: bool = True) -> list[str]:
        errors = []
        if not self.rays:
            return ["a toric variety needs at least one ray"]
        d = self.d
        for i, r in enumerate(self.rays):
            if len(r) != d:
                errors.append(f"ray {i} has length {len(r)}, expected {d}")
            elif all(x == 0 for x in r):
                errors.append(f"ray {i} is zero")
            elif primitive(r) != r:
                errors.append(f"ray {i} = {r} is not primitive")
        if len(set(self.rays)) != len(self.rays):
            errors.append("rays are not distinct")
        for k, c in enumerate(self.cones):
            if any(i < 0 or i >= len(self.rays) for i in c):
                errors.append(f"cone {k} refers to a missing ray")
        if errors:
            return errors
        used = {i for c in self.cones for i in c}
        for i in range(len(self.rays)):
            if i not in used:
                errors.append(f"ray {i} lies in no maximal cone")
        cones = self.cone_objects
        for k, (c, sigma) in enumerate(zip(self.cones, cones)):
            if not sigma.is_pointed:
                errors.append(f"cone {k} is not strongly convex")
            if set(sigma.rays) != {self.rays[i] for i in c}:
                errors.append(f"cone {k}: listed rays are not exactly its extreme rays")
        for (k1, s1), (k2, s2) in itertools.combinations(enumerate(cones), 2):
            inter = s1 & s2
            if not (inter.is_face_of(s1) and inter.is_face_of(s2)):
                errors.append(f"cones {k1} and {k2} do not meet in a common face")
        if require_complete and not errors and not self.is_complete():
            errors.append("fan is not complete")
        return errors

    def is_complete(self) -> bool:
        """Pure of full dimension and every wall lies in exactly two maximal cones."""
        d = self.d
        cones = self.cone_objects
        if any(c.dim != d for c in cones):
            return False
        walls: dict = {}
        for c in cones:
            for f in c.faces():
                if f.dim == d - 1:
                    walls[f] = walls.get(f, 0) + 1
        return bool(walls) and all(v == 2 for v in walls.values())

    def class_group(self) -> AbelianGroup:
        """Cl(X) = Z^rays / M, with M embedded by u -> (<u, v_F>)_F."""
        return quotient_by_rows(self.character_rows(), len(self.rays))

    def character_rows(self) -> list[tuple[int, ...]]:
        return [tuple(r[k] for r in self.rays) for k in range(self.d)]

    def to_json(self) -> dict:
        out = {"rays": [list(r) for r in self.rays], "cones": [list(c) for c in self.cones]}
        if self.names:
            out["names"] = list(self.names)
        return out


@dataclass(frozen=True)
class QDivisor:
    coefficients: tuple[Fraction, ...]

    @classmethod
    def of(cls, coefficients) -> "QDivisor":
        return cls(tuple(as_fraction(c) for c in coefficients))

    @property
    def p(self) -> tuple[int, ...]:
        return tuple(c.numerator for c in self.coefficients)

    @property
    def q(self) -> tuple[int, ...]:
        return tuple(c.denominator for c in self.coefficients)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients)

    def __add__(self, other: "QDivisor") -> "QDivisor":
        return QDivisor(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def scaled(self, k) -> "QDivisor":
        return QDivisor(tuple(k * a for a in self.coefficients))

    def __str__(self):
        return " + ".join(f"{c}*F{i}" for i, c in enumerate(self.coefficients) if c) or "0"


def combination(divisors: Sequence[QDivisor], coeffs: Sequence) -> QDivisor:
    nrays = len(divisors[0].coefficients)
    return QDivisor(tuple(
        sum((as_fraction(c) * D.coefficients[F] for c, D in zip(coeffs, divisors)), Fraction(0))
        for F in range(nrays)
    ))


@dataclass(frozen=True, eq=False)
class MultiSectionRingSpec:
    X: ToricVarietySpec
    divisors: tuple[QDivisor, ...]

    @classmethod
    def create(cls, X: ToricVarietySpec, divisors) -> "MultiSectionRingSpec":
        divs = tuple(D if isinstance(D, QDivisor) else QDivisor.of(D) for D in divisors)
        errors = []
        if not divs:
            errors.append("at least one divisor is needed (n >= 1)")
        for i, D in enumerate(divs):
            if len(D.coefficients) != len(X.rays):
                errors.append(f"divisor {i} has {len(D.coefficients)} coefficients for {len(X.rays)} rays")
        if errors:
            raise ToricError(errors)
        return cls(X, divs)

    def __eq__(self, other):
        return isinstance(other, MultiSectionRingSpec) and (self.X, self.divisors) == (other.X, other.divisors)

    def __hash__(self):
        return hash((self.X, self.divisors))

    @property
    def n(self) -> int:
        return len(self.divisors)

    @cached_property
    def q(self) -> tuple[int, ...]:
        """q_F = lcm over i of the reduced denominators of m_{i,F}."""
        return tuple(
            lcm(*(D.coefficients[F].denominator for D in self.divisors))
            for F in range(len(self.X.rays))
        )

    def divisor_at(self, r: Sequence[int]) -> QDivisor:
        return combination(self.divisors, r)

    def to_json(self) -> dict:
        return {
            "variety": self.X.to_json(),
            "divisors": [[str(c) for c in D.coefficients] for D in self.divisors],
        }


# ----- sections ----------------------------------------------------------

def _bounding_data(X: ToricVarietySpec):
    """For each coordinate direction +-e_k, nonnegative weights on the rays summing to it."""
    d = X.d
    nr = len(X.rays)
    out = []
    for sign in (1, -1):
        per_k = []
        for k in range(d):
            target = tuple(sign * int(i == k) for i in range(d))
            cons = [(tuple(int(i == F) for i in range(nr)), ">=", 0) for F in range(nr)]
            for j in range(d):
                cons.append((tuple(X.rays[F][j] for F in range(nr)), "=", target[j]))
            res = lp_feasible(cons, dim=nr)
            if not res.feasible:
                raise ToricError("section polytopes are unbounded: the fan is not complete")
            per_k.append(res.x)
        out.append(tuple(per_k))
    return out


_BOUNDS_CACHE: dict = {}


def section_lattice_points(X: ToricVarietySpec, D: QDivisor) -> list[tuple[int, ...]]:
    """Lattice points u with <u, v_F> + D_F >= 0 for all rays F."""
    key = (X.rays, X.cones)
    if key not in _BOUNDS_CACHE:
        _BOUNDS_CACHE[key] = _bounding_data(X)
    plus, minus = _BOUNDS_CACHE[key]
    c = D.coefficients
    # <u, e_k> = sum lam_F <u, v_F> >= -sum lam_F c_F for e_k = sum lam_F v_F
    lo = [-sum((lam * cf for lam, cf in zip(plus[k], c)), Fraction(0)) for k in range(X.d)]
    hi = [sum((lam * cf for lam, cf in zip(minus[k], c)), Fraction(0)) for k in range(X.d)]
    ranges = []
    for a, b in zip(lo, hi):
        ia, ib = -floor(-a), floor(b)
        if ia > ib:
            return []
        ranges.append(range(ia, ib + 1))
    pts = []
    for u in itertools.product(*ranges):
        if all(dot(u, v) + cf >= 0 for v, cf in zip(X.rays, c)):
            pts.append(u)
    return pts


def graded_piece_dim(spec: MultiSectionRingSpec, r: Sequence[int]) -> int:
    """dim_k H^0(X, O(sum r_i D_i))."""
    r = int_vector(r)
    if len(r) != spec.n:
        raise ValueError(f"degree {r} does not have {spec.n} entries")
    if not spec.X.is_complete():
        raise ToricError("section polytopes are unbounded: the fan is not complete")
    return len(section_lattice_points(spec.X, spec.divisor_at(r)))


# ----- ampleness ---------------------------------------------------------

def cartier_data(X: ToricVarietySpec, D: QDivisor) -> list[tuple[Fraction, ...]] | None:
    """Local data u_sigma with <u_sigma, v_F> = -D_F on each maximal cone, if integral."""
    if not D.is_integral:
        return None
    out = []
    for c in X.cones:
        rows = [X.rays[F] for F in c]
        u = solve(rows, [-D.coefficients[F] for F in c])
        if u is None or any(x.denominator != 1 for x in u):
            return None
        out.append(u)
    return out


def is_ample_cartier(X: ToricVarietySpec, D: QDivisor) -> bool:
    """Integral, Cartier and strictly convex support function on a complete fan."""
    data = cartier_data(X, D)
    if data is None:
        return False
    for c, u in zip(X.cones, data):
        for G in range(len(X.rays)):
            if G not in c and not dot(u, X.rays[G]) > -D.coefficients[G]:
                return False
    return True


def _box_vectors(n: int, bound: int):
    """Integer vectors with |c_i| <= bound, by increasing max-norm then lexicographically."""
    yield tuple(0 for _ in range(n))
    for k in range(1, bound + 1):
        for c in itertools.product(range(-k, k + 1), repeat=n):
            if max(abs(x) for x in c) == k:
                yield c


def find_ample_combination(spec: MultiSectionRingSpec, bound: int = 10,
                           cone: RationalCone | None = None) -> tuple[int, ...] | None:
    """Some c with sum c_i D_i ample Cartier (and c in int(cone) if given)."""
    for c in _box_vectors(spec.n, bound):
        if cone is not None and not cone.relint_contains(c):
            continue
        if is_ample_cartier(spec.X, spec.divisor_at(c)):
            return c
    return None


# ----- height-one primes and the class group -----------------------------

@dataclass(frozen=True)
class HeightOnePrimeData:
    ray: int
    q: int
    valuations: tuple[int, ...]  # v_{P_F}(t_i) = q_F m_{i,F}

    def to_json(self) -> dict:
        return {"ray": self.ray, "q": self.q, "valuations": list(self.valuations)}


def height_one_prime_data(spec: MultiSectionRingSpec, bound: int = 10) -> dict:
    c = find_ample_combination(spec, bound)
    if c is None:
        log.warning("no ample Cartier combination with |c_i| <= %d; height-one prime description unverified", bound)
    primes = []
    for F, qF in enumerate(spec.q):
        vals = tuple(qF * D.coefficients[F] for D in spec.divisors)
        assert all(v.denominator == 1 for v in vals)
        primes.append(HeightOnePrimeData(F, qF, tuple(int(v) for v in vals)))
    return {"primes": primes, "ample_combination": c, "verified": c is not None}


@dataclass
class ClassGroupData:
    result: AbelianGroup
    ell: int
    support: tuple[int, ...]
    q: tuple[int, ...]
    cl_x: AbelianGroup
    image_generators: list[tuple[int, ...]]
    cl_x_mod_image: AbelianGroup
    m_mod_l: AbelianGroup
    hypothesis_verified: bool
    ample_combination: tuple[int, ...] | None
    sequence_consistent: bool

    def to_json(self) -> dict:
        def grp(g):
            return {"free_rank": g.free_rank, "torsion": list(g.torsion), "text": str(g)}

        return {
            "class_group": grp(self.result),
            "ell": self.ell,
            "support": list(self.support),
            "q": list(self.q),
            "cl_X": grp(self.cl_x),
            "image_of_L_cap_Z": [list(v) for v in self.image_generators],
            "cl_X_mod_image": grp(self.cl_x_mod_image),
            "M_mod_L_plus_Z": grp(self.m_mod_l),
            "hypothesis_verified": self.hypothesis_verified,
            "ample_combination": list(self.ample_combination) if self.ample_combination else None,
            "sequence_consistent": self.sequence_consistent,
            "conditional": not self.hypothesis_verified,
        }


def class_group(spec: MultiSectionRingSpec, bound: int = 10) -> ClassGroupData:
    X = spec.X
    nr = len(X.rays)
    q = spec.q
    amp = find_ample_combination(spec, bound)
    if amp is None:
        log.warning("ample hypothesis unverified; class group result is conditional")

    # direct presentation over the torus-invariant height-one primes
    rows = [tuple(q[F] * row[F] for F in range(nr)) for row in X.character_rows()]
    for D in spec.divisors:
        rows.append(tuple(int(q[F] * D.coefficients[F]) for F in range(nr)))
    result = quotient_by_rows(rows, nr)

    # four-term sequence
    support = tuple(F for F in range(nr) if any(D.coefficients[F] for D in spec.divisors))
    ell = len(support)
    qs = [q[F] for F in support]
    m_rows = [tuple(int(qs[j] * D.coefficients[F]) for j, F in enumerate(support)) for D in spec.divisors]
    z_rows = [tuple(qs[j] * int(j == k) for j in range(ell)) for k in range(ell)]
    m_mod_l = quotient_by_rows(m_rows + z_rows, ell) if ell else AbelianGroup(0, ())
    # b in Z^n with sum b_i m_i integral: N b + diag(q) k = 0
    n = spec.n
    if ell:
        big = [tuple(m_rows[i][j] for i in range(n)) + tuple(qs[j] * int(j == k) for k in range(ell))
               for j in range(ell)]
        kernel = integer_kernel(big, n + ell)
        bs = [v[:n] for v in kernel]
    else:
        bs = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    image = []
    for b in bs:
        D = spec.divisor_at(b)
        assert D.is_integral
        image.append(tuple(int(x) for x in D.coefficients))
    cl_x = X.class_group()
    cl_x_mod_image = quotient_by_rows(X.character_rows() + image, nr)
    consistent = result.free_rank == cl_x_mod_image.free_rank
    if consistent and result.order is not None:
        consistent = result.order == cl_x_mod_image.order * m_mod_l.order
    return ClassGroupData(result, ell, support, q, cl_x, image, cl_x_mod_image, m_mod_l,
                          amp is not None, amp, consistent)


def is_factorial(spec: MultiSectionRingSpec, bound: int = 10) -> dict:
    """Factorial iff M = L + Z^l and the integral combinations generate Cl(X)."""
    data = class_group(spec, bound)
    verdict = data.m_mod_l.is_trivial and data.cl_x_mod_image.is_trivial
    return {
        "factorial": verdict,
        "M_equals_L_plus_Z": data.m_mod_l.is_trivial,
        "image_generates_cl_X": data.cl_x_mod_image.is_trivial,
        "agrees_with_class_group": verdict == data.result.is_trivial,
        "conditional": not data.hypothesis_verified,
        "certificate": data.to_json(),
    }


# ----- round trip from a graded polynomial ring --------------------------

def _count_monomials(degrees: Sequence[Sequence[int]], target: Sequence[int], weight: Sequence[int]) -> int:
    """Number of e in N^s with sum e_i deg_i = target; ``weight`` is >= 1 on every degree."""
    degrees = [tuple(d) for d in degrees]
    w = [dot(weight, d) for d in degrees]
    memo: dict = {}

    def rec(i, rest):
        if i == len(degrees):
            return int(all(x == 0 for x in rest))
        key = (i, rest)
        if key in memo:
            return memo[key]
        total = 0
        cur = rest
        level = dot(weight, cur)
        while level >= 0:
            total += rec(i + 1, cur)
            cur = tuple(x - y for x, y in zip(cur, degrees[i]))
            level -= w[i]
        memo[key] = total
        return total

    return rec(0, tuple(target))


def _positive_weight(degrees) -> tuple:
    n = len(degrees[0])
    res = lp_feasible([(d, ">=", 1) for d in degrees], dim=n)
    return res.x


@dataclass
class RoundTripReport:
    variety: ToricVarietySpec
    spec: MultiSectionRingSpec
    ray_of_variable: tuple[int, ...]
    multiplicities: tuple[int, ...]
    lifts: tuple[tuple[int, ...], ...]
    ample_combination: tuple[int, ...] | None
    grid_bound: int
    mismatches: list
    checked: int
    chamber_ideal: str

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.ample_combination is not None

    def to_json(self) -> dict:
        return {
            "variety": self.variety.to_json(),
            "divisors": [[str(c) for c in D.coefficients] for D in self.spec.divisors],
            "ray_of_variable": list(self.ray_of_variable),
            "multiplicities": list(self.multiplicities),
            "unit_degree_lifts": [list(w) for w in self.lifts],
            "ample_combination": list(self.ample_combination) if self.ample_combination else None,
            "grid_bound": self.grid_bound,
            "grid_points_checked": self.checked,
            "mismatches": [{"r": list(r), "ring": a, "sections": b} for r, a, b in self.mismatches],
            "chamber_ideal": self.chamber_ideal,
            "ok": self.ok,
        }


def _lift_unit(Q, kernel, j, n) -> tuple[int, ...]:
    e = tuple(int(i == j) for i in range(n))
    w0 = solve_integer(Q, e)
    if w0 is None:
        raise RoundTripError(f"unit degree e_{j + 1} is not a degree of a Laurent monomial")
    best = None
    box = range(-6, 7) if len(kernel) <= 3 else range(-2, 3)
    for t in itertools.product(box, repeat=len(kernel)):
        w = tuple(w0[i] + sum(tk * kv[i] for tk, kv in zip(t, kernel)) for i in range(len(w0)))
        key = (any(x < 0 for x in w), sum(abs(x) for x in w), w)
        if best is None or key < best[0]:
            best = (key, w)
    return best[1]


def demazure_roundtrip(ring: GradedRingSpec, sigma: RationalCone, grid_bound: int = 6,
                       ample_bound: int = 10) -> RoundTripReport:
    """Realise a graded polynomial ring as R(X_sigma; D_1..D_n) and check graded pieces.

    X_sigma is the toric quotient for the chamber ``sigma``: its rays are the
    images of the variables in the dual lattice ker(Q)^*, and it has a cone
    spanned by the images of the variables in S whenever sigma lies in the
    cone of the remaining degrees.
    """
    if ring.kind is not Kind.POLYNOMIAL:
        raise RoundTripError("the round trip is implemented for polynomial rings")
    n, s = ring.n, ring.s
    Q = tuple(tuple(d[k] for d in ring.degrees) for k in range(n))
    if ring.weight_cone.dim != n:
        raise RoundTripError("dim C(A) < n: the round trip needs full-dimensional degrees")
    snf = smith_normal_form(Q)
    if snf.rank != n or any(f != 1 for f in snf.invariant_factors):
        raise RoundTripError(
            "condition (I) fails: the degrees do not generate Z^n, so some unit degree "
            "e_i has no element in the homogeneous localisation"
        )
    if sigma.dim != n or sigma.ambient_dim != n:
        raise RoundTripError("sigma must be a full-dimensional cone in R^n")
    b = sigma.interior_point()
    J = ray_ideal(ring, b)
    from .chamberfan import _cone_of_ideal  # local import: chamberfan depends on this module's peers

    if J.is_zero or _cone_of_ideal(ring, J.members) != sigma:
        raise RoundTripError("sigma is not a chamber (maximal full-dimensional ray ideal cone)")
    if any(len(t) < 2 for t in J.minimal_primes):
        raise RoundTripError(
            f"ray ideal {J.describe()} of the chamber has height 1; the round trip needs height >= 2 "
            "(for height-one data use the restriction construction R(X; D)_tau instead)"
        )
    kernel = [sign_canonical(v) for v in integer_kernel(Q, s)]
    d = len(kernel)
    if d == 0:
        raise RoundTripError("dim X = 0: every Q-divisor is 0 and A is a Laurent-type ring with no chamber data")
    vecs = [tuple(kv[i] for kv in kernel) for i in range(s)]
    if any(all(x == 0 for x in v) for v in vecs):
        raise RoundTripError("a variable maps to 0 in the quotient lattice")
    mult = tuple(gcd(*v) for v in vecs)
    rays = [tuple(x // g for x in v) for v, g in zip(vecs, mult)]
    if len(set(rays)) != len(rays):
        raise RoundTripError("two variables define the same ray of the quotient fan")

    good = []
    for k in range(s + 1):
        for S in itertools.combinations(range(s), k):
            rest = [ring.degrees[j] for j in range(s) if j not in S]
            if rest and RationalCone.from_generators(rest, n).contains_cone(sigma):
                good.append(frozenset(S))
    maximal = [S for S in good if not any(S < T for T in good)]
    cones = sorted(tuple(sorted(S)) for S in maximal)
    X = ToricVarietySpec.create(rays, cones, names=ring.variable_names)

    lifts = tuple(_lift_unit(Q, kernel, j, n) for j in range(n))
    divisors = [QDivisor(tuple(Fraction(w[i], mult[i]) for i in range(s))) for w in lifts]
    spec = MultiSectionRingSpec.create(X, divisors)
    amp = find_ample_combination(spec, ample_bound, cone=sigma)

    weight = _positive_weight(ring.degrees)
    mismatches = []
    checked = 0
    for r in itertools.product(range(-grid_bound, grid_bound + 1), repeat=n):
        a = _count_monomials(ring.degrees, r, weight)
        bsec = graded_piece_dim(spec, r)
        checked += 1
        if a != bsec:
            mismatches.append((r, a, bsec))
    return RoundTripReport(X, spec, tuple(range(s)), mult, lifts, amp, grid_bound, mismatches, checked, J.describe())
