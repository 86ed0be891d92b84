"""Random inputs shared by the property and acceptance tests."""

import random
from fractions import Fraction

from rayfan.gradedring import GradedRingSpec, RingSpecError


def random_polynomial_spec(rng: random.Random, n_max=3, s_max=5, entry=3, n=None) -> GradedRingSpec:
    """Polynomial ring with nonzero degrees in [-entry, entry]^n passing the positivity check."""
    while True:
        k = n or rng.randint(1, n_max)
        s = rng.randint(1, s_max)
        degs = [tuple(rng.randint(-entry, entry) for _ in range(k)) for _ in range(s)]
        if any(all(x == 0 for x in d) for d in degs):
            continue
        try:
            return GradedRingSpec.polynomial(degs)
        except RingSpecError:
            pass


def random_semigroup_spec(rng: random.Random, n=2) -> GradedRingSpec:
    """Monomial subring of k[t_1..t_N] generated by 2-4 small monomials, with a random grading."""
    while True:
        big_n = rng.randint(2, 4)
        s = rng.randint(2, 4)
        exps = {tuple(rng.randint(0, 1) for _ in range(big_n)) for _ in range(s)}
        exps = sorted(e for e in exps if any(e))
        if len(exps) < 2:
            continue
        gmap = [[rng.randint(-2, 2) for _ in range(big_n)] for _ in range(n)]
        try:
            spec = GradedRingSpec.semigroup(exps, gmap)
        except RingSpecError:
            continue
        if all(any(d) for d in spec.degrees):
            return spec


def random_spec(rng: random.Random, n_max=3) -> GradedRingSpec:
    if rng.random() < 0.25:
        return random_semigroup_spec(rng, n=rng.randint(1, min(2, n_max)))
    return random_polynomial_spec(rng, n_max=n_max)


def combination_point(rng: random.Random, ring: GradedRingSpec) -> tuple:
    """A point that is usually a positive combination of at most n degrees.

    Coefficients are p/q with p <= 2 and q <= 4; a quarter of the points are
    small uniform rational vectors instead, so points outside the degree cone
    also occur.
    """
    if rng.random() < 0.25:
        return tuple(Fraction(rng.randint(-2, 2), rng.randint(1, 4)) for _ in range(ring.n))
    k = rng.randint(1, min(ring.s, ring.n))
    idx = rng.sample(range(ring.s), k)
    cs = {i: Fraction(rng.randint(1, 2), rng.randint(1, 4)) for i in idx}
    return tuple(sum(cs[i] * ring.degrees[i][j] for i in idx) for j in range(ring.n))
