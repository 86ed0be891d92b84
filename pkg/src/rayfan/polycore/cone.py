"""Rational polyhedral cones with both descriptions, computed by double description.

A cone is stored in canonical form:

* ``rays``: primitive integer extreme rays, projected orthogonally off the
  lineality space, sorted;
* ``lineality``: canonical integer basis of the lineality space;
* ``facets``: primitive inner normals of the facets, projected into the
  linear span of the cone, sorted;
* ``equations``: canonical integer basis of the orthogonal complement of the
  linear span.

Two cones are equal iff these four tuples agree, so ``==`` and ``hash`` are
structural.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .linalg import (
    canonical_basis,
    dot,
    frac_vector,
    is_zero,
    nullspace,
    primitive,
    project_onto_complement,
    rank,
)

log = logging.getLogger(__name__)


class DimensionMismatch(ValueError):
    pass


def _check_dims(vectors: Iterable[Sequence], dim: int) -> None:
    for v in vectors:
        if len(v) != dim:
            raise DimensionMismatch(f"vector {tuple(v)} does not have length {dim}")


def _double_description(normals: Sequence[Sequence], dim: int):
    """Generators of {x : <b, x> >= 0 for b in normals}.

    Returns ``(rays, lineality)`` as lists of integer vectors.  Rays are the
    extreme rays modulo lineality (representatives not yet canonical).
    """
    lineality = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[tuple[int, ...]] = []
    # zero sets: indices of processed constraints that vanish on each ray
    zeros: list[frozenset] = []
    processed: list[tuple[int, ...]] = []
    for b in normals:
        b = primitive(b) if not is_zero(b) else None
        if b is None:
            continue
        k = len(processed)
        processed.append(b)
        pi = next((i for i, l in enumerate(lineality) if dot(b, l) != 0), None)
        if pi is not None:
            pivot = lineality[pi]
            bp = dot(b, pivot)
            if bp < 0:
                pivot = tuple(-x for x in pivot)
                bp = -bp
            new_lin = []
            for i, l in enumerate(lineality):
                if i == pi:
                    continue
                bl = dot(b, l)
                if bl:
                    l = primitive(tuple(bp * x - bl * y for x, y in zip(l, pivot)))
                new_lin.append(l)
            lineality = new_lin
            new_rays = []
            for r in rays:
                br = dot(b, r)
                if br:
                    r = primitive(tuple(bp * x - br * y for x, y in zip(r, pivot)))
                new_rays.append(r)
            rays = new_rays
            zeros = [z | {k} for z in zeros]
            rays.append(pivot)
            zeros.append(frozenset(range(k)))
            continue
        vals = [dot(b, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_zeros = [zeros[i] for i in pos] + [zeros[i] | {k} for i in zer]
        for i in pos:
            for j in neg:
                common = zeros[i] & zeros[j]
                # combinatorial adjacency test
                if any(
                    t != i and t != j and common <= zeros[t] for t in range(len(rays))
                ):
                    continue
                vi, vj = vals[i], -vals[j]
                r = primitive(tuple(vj * x + vi * y for x, y in zip(rays[i], rays[j])))
                new_rays.append(r)
                new_zeros.append(common | {k})
        rays, zeros = new_rays, new_zeros
    return rays, lineality


def _canonical_rays(rays: Iterable[Sequence], lineality: Sequence[Sequence]) -> tuple:
    out = set()
    for r in rays:
        p = project_onto_complement(r, lineality)
        if not is_zero(p):
            out.add(primitive(p))
    return tuple(sorted(out))


@dataclass(frozen=True, eq=False)
class RationalCone:
    dim_ambient: int
    rays: tuple[tuple[int, ...], ...]
    lineality: tuple[tuple[int, ...], ...]
    facets: tuple[tuple[int, ...], ...]
    equations: tuple[tuple[int, ...], ...]

    # ----- construction -------------------------------------------------
    @classmethod
    def from_generators(cls, vectors: Iterable[Sequence], dim: int) -> "RationalCone":
        vectors = [tuple(v) for v in vectors]
        _check_dims(vectors, dim)
        nonzero = [v for v in vectors if not is_zero(v)]
        if len(nonzero) < len(vectors):
            log.warning("dropping %d zero generator(s)", len(vectors) - len(nonzero))
        # dual cone: {b : <b, v> >= 0}; its rays are facet normals, its
        # lineality is the orthogonal complement of span(vectors)
        dual_rays, dual_lin = _double_description(nonzero, dim)
        equations = canonical_basis(dual_lin, dim)
        # the cone itself: lineality = {x : facets and equations vanish}
        rays, lin = _double_description(
            list(dual_rays) + list(dual_lin) + [tuple(-x for x in l) for l in dual_lin], dim
        )
        return cls._assemble(dim, rays, lin, dual_rays, equations)

    @classmethod
    def from_halfspaces(cls, normals: Iterable[Sequence], dim: int) -> "RationalCone":
        normals = [tuple(v) for v in normals]
        _check_dims(normals, dim)
        rays, lin = _double_description(normals, dim)
        lin_basis = canonical_basis(lin, dim)
        dual_rays, dual_lin = _double_description(
            list(rays) + list(lin_basis) + [tuple(-x for x in l) for l in lin_basis], dim
        )
        equations = canonical_basis(dual_lin, dim)
        return cls._assemble(dim, rays, lin_basis, dual_rays, equations)

    @classmethod
    def _assemble(cls, dim, rays, lin, dual_rays, equations) -> "RationalCone":
        lin_basis = canonical_basis(lin, dim)
        return cls(
            dim_ambient=dim,
            rays=_canonical_rays(rays, lin_basis),
            lineality=lin_basis,
            facets=_canonical_rays(dual_rays, equations),
            equations=equations,
        )

    @classmethod
    def zero(cls, dim: int) -> "RationalCone":
        return cls.from_generators([], dim)

    @classmethod
    def whole_space(cls, dim: int) -> "RationalCone":
        return cls.from_halfspaces([], dim)

    # ----- structure ----------------------------------------------------
    def _key(self):
        return (self.dim_ambient, self.rays, self.lineality, self.facets, self.equations)

    def __eq__(self, other):
        return isinstance(other, RationalCone) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.dim, self.rays, self.lineality)

    def __repr__(self):
        inner = ", ".join(str(r) for r in self.rays)
        if self.lineality:
            inner += f"; lineality {list(self.lineality)}"
        return f"RationalCone([{inner}], dim={self.dim})"

    @property
    def ambient_dim(self) -> int:
        return self.dim_ambient

    @property
    def lineality_dim(self) -> int:
        return len(self.lineality)

    @cached_property
    def dim(self) -> int:
        return self.dim_ambient - len(self.equations)

    @property
    def generators(self) -> tuple[tuple[int, ...], ...]:
        """A generating set: extreme rays plus both directions of the lineality basis."""
        return self.rays + self.lineality + tuple(tuple(-x for x in l) for l in self.lineality)

    @property
    def halfspaces(self) -> tuple[tuple[int, ...], ...]:
        """Normals b with cone = {x : <x, b> >= 0}; equations appear with both signs."""
        return self.facets + self.equations + tuple(tuple(-x for x in e) for e in self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    @cached_property
    def ray_facet_incidence(self) -> tuple[frozenset, ...]:
        """For each ray, the set of facet indices vanishing on it."""
        return tuple(
            frozenset(j for j, f in enumerate(self.facets) if dot(f, r) == 0) for r in self.rays
        )

    # ----- membership ---------------------------------------------------
    def _check_point(self, point):
        if len(point) != self.dim_ambient:
            raise DimensionMismatch(f"point {tuple(point)} is not in R^{self.dim_ambient}")
        return frac_vector(point)

    def contains(self, point: Sequence) -> bool:
        p = self._check_point(point)
        return all(dot(e, p) == 0 for e in self.equations) and all(
            dot(f, p) >= 0 for f in self.facets
        )

    __contains__ = contains

    def relint_contains(self, point: Sequence) -> bool:
        p = self._check_point(point)
        return all(dot(e, p) == 0 for e in self.equations) and all(
            dot(f, p) > 0 for f in self.facets
        )

    def contains_cone(self, other: "RationalCone") -> bool:
        return all(self.contains(g) for g in other.generators)

    # ----- faces --------------------------------------------------------
    def face_from_active(self, active: Iterable[int]) -> "Face":
        active = frozenset(active)
        ray_idx = frozenset(
            i for i, z in enumerate(self.ray_facet_incidence) if active <= z
        )
        return self._face_from_rays(ray_idx)

    def _face_from_rays(self, ray_idx: frozenset) -> "Face":
        if ray_idx:
            active = frozenset.intersection(*(self.ray_facet_incidence[i] for i in ray_idx))
        else:
            active = frozenset(range(len(self.facets)))
        cone = RationalCone.from_generators(
            [self.rays[i] for i in sorted(ray_idx)]
            + list(self.lineality)
            + [tuple(-x for x in l) for l in self.lineality],
            self.dim_ambient,
        )
        return Face(self, active, frozenset(ray_idx), cone)

    def minimal_face(self, point: Sequence) -> "Face":
        p = self._check_point(point)
        if not self.contains(p):
            raise ValueError(f"point {tuple(point)} is not in the cone")
        active = frozenset(j for j, f in enumerate(self.facets) if dot(f, p) == 0)
        return self.face_from_active(active)

    def face_lattice(self) -> list["Face"]:
        """All faces, each once, ordered by dimension then rays."""
        return list(self._face_lattice)

    @cached_property
    def _face_lattice(self) -> tuple["Face", ...]:
        full = frozenset(range(len(self.rays)))
        facet_sets = [
            frozenset(i for i, z in enumerate(self.ray_facet_incidence) if j in z)
            for j in range(len(self.facets))
        ]
        seen = {full}
        frontier = [full]
        while frontier:
            nxt = []
            for s in frontier:
                for fs in facet_sets:
                    t = s & fs
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
            frontier = nxt
        faces = [self._face_from_rays(s) for s in seen]
        faces.sort(key=lambda f: (f.dim, sorted(f.ray_indices)))
        return tuple(faces)

    def is_face_of(self, cone: "RationalCone") -> bool:
        """True iff ``self`` is a face of ``cone``."""
        if self.dim_ambient != cone.dim_ambient:
            raise DimensionMismatch("cones live in different ambient spaces")
        if not cone.contains_cone(self):
            return False
        active = frozenset(
            j for j, f in enumerate(cone.facets) if all(dot(f, g) == 0 for g in self.generators)
        )
        return cone.face_from_active(active).cone == self

    def faces(self) -> list["RationalCone"]:
        return [f.cone for f in self.face_lattice()]

    # ----- operations ---------------------------------------------------
    def intersect(self, other: "RationalCone") -> "RationalCone":
        if self.dim_ambient != other.dim_ambient:
            raise DimensionMismatch("cones live in different ambient spaces")
        return RationalCone.from_halfspaces(self.halfspaces + other.halfspaces, self.dim_ambient)

    __and__ = intersect

    def interior_point(self) -> tuple[Fraction, ...]:
        """Deterministic point in the relative interior.

        Sum of the rays (the lineality part is irrelevant); if that lands on a
        lower-dimensional stratum, perturb along successive rays.
        """
        if not self.rays:
            return tuple(Fraction(0) for _ in range(self.dim_ambient))
        p = tuple(Fraction(sum(r[i] for r in self.rays)) for i in range(self.dim_ambient))
        if self.relint_contains(p):
            return p
        for k in itertools.count(1):
            for r in self.rays:
                q = tuple(x + Fraction(y, k + 1) for x, y in zip(p, r))
                if self.relint_contains(q):
                    return q
            if k > 64:  # pragma: no cover - would mean the cone is malformed
                raise RuntimeError("no relative interior point found")

    def to_json(self) -> dict:
        return {
            "ambient_dim": self.dim_ambient,
            "dim": self.dim,
            "rays": [list(r) for r in self.rays],
            "lineality": [list(l) for l in self.lineality],
            "facets": [list(f) for f in self.facets],
            "equations": [list(e) for e in self.equations],
        }


@dataclass(frozen=True, eq=False)
class Face:
    parent: RationalCone = field(repr=False)
    active_halfspaces: frozenset
    ray_indices: frozenset
    cone: RationalCone

    @property
    def dim(self) -> int:
        return self.cone.dim

    def __eq__(self, other):
        return isinstance(other, Face) and self.parent == other.parent and self.cone == other.cone

    def __hash__(self):
        return hash(self.cone)


def cone_from_generators(vectors: Iterable[Sequence], ambient_dim: int) -> RationalCone:
    return RationalCone.from_generators(vectors, ambient_dim)


def cone_from_halfspaces(normals: Iterable[Sequence], ambient_dim: int) -> RationalCone:
    return RationalCone.from_halfspaces(normals, ambient_dim)


def span_dim(vectors: Sequence[Sequence]) -> int:
    return rank(vectors) if vectors else 0


def orthogonal_basis(vectors: Sequence[Sequence], dim: int):
    return nullspace(vectors, dim)
