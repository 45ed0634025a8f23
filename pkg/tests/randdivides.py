"""Randomized morsification divides for the property suites.

Families are drawn with randomized construction data, traced, and returned
with their attached singularity types.  All draws are deterministic in the
seed.
"""
import math
import random

from divides.families import (
    FamilyError,
    family_ellipse_composition,
    family_one_puiseux_pair,
    family_parabola_pair,
    family_semiquasi_pp,
    family_smooth_conjugate,
)
from divides.tracing import TraceError, trace_with_retries

COEFFS = [1, -1, 2, -2, complex(1, 1), complex(1, -1), complex(-1, 1), complex(0, 2), 3]


def _random_tangent(rng):
    alpha = rng.choice([0, 0, 1, -1, 0.5, -0.5])
    beta = rng.choice([1, 1, 2, 0.75, -1, 1.5])
    return (alpha, beta)


def _smooth_family(rng):
    s = rng.choice([1, 2, 2, 3])
    coeffs = rng.sample(COEFFS, s)
    branches = [{2: c} for c in coeffs]
    if s == 2 and rng.random() < 0.4:
        # shared quadratic term, contact at exponent 3
        shared = rng.choice(COEFFS)
        c3 = rng.sample(COEFFS, 2)
        branches = [{2: shared, 3: c3[0]}, {2: shared, 3: c3[1]}]
    return family_smooth_conjugate(branches, tangent=_random_tangent(rng))


def _semiquasi_family(rng):
    k = rng.choice([1, 2, 2])
    for _ in range(40):
        quads, levels = [], []
        for _ in range(k):
            b = rng.choice([0, 0, 0.4, -0.4, 0.6])
            c = rng.choice([0.3, 0.5, 1.0, 2.0, 3.5])
            if 4 * c <= b * b:
                continue
            quads.append((1.0, b, c))
            levels.append(rng.choice([0.5, 1.0, 1.5, 2.5]))
        if len(quads) != k:
            continue
        ell = rng.choice([0, 0, 1, 2])
        lines = []
        for li in range(ell):
            ang = rng.uniform(0.1, math.pi - 0.1) + li * 0.9
            lines.append((math.cos(ang), math.sin(ang)))
        try:
            return family_semiquasi_pp(lines, quads, levels)
        except FamilyError:
            continue
    raise RuntimeError("could not draw a semiquasi family")


def _composition_family(rng):
    for _ in range(40):
        t1 = _random_tangent(rng)
        t2 = _random_tangent(rng)
        if (t1[0], abs(t1[1])) == (t2[0], abs(t2[1])):
            continue
        p1 = family_smooth_conjugate([{2: rng.choice(COEFFS)}], tangent=t1)
        p2 = family_smooth_conjugate([{2: rng.choice(COEFFS)}], tangent=t2)
        g1 = rng.choice([1.0, 1.6, 2.2])
        g2 = rng.choice([0.7, 1.1, 1.9])
        try:
            return family_ellipse_composition([p1, p2], [g1, g2])
        except FamilyError:
            continue
    raise RuntimeError("could not draw a composition family")


def random_family(rng: random.Random):
    kind = rng.choices(
        ["semiquasi", "parabola", "smooth", "composition", "onepair"],
        weights=[32, 22, 28, 10, 8],
    )[0]
    if kind == "semiquasi":
        return _semiquasi_family(rng)
    if kind == "parabola":
        return family_parabola_pair(rng.choice([2, 3, 4]))
    if kind == "smooth":
        return _smooth_family(rng)
    if kind == "composition":
        return _composition_family(rng)
    return family_one_puiseux_pair(*rng.choice([(2, 3), (2, 5), (3, 4)]), 1)


def random_traced_divides(count: int, seed: int, grid_n: int = 512):
    """Yield (family, traced) pairs; draws that defeat the tracer after its
    retries are redrawn (they would indicate resolution, not validity)."""
    rng = random.Random(seed)
    produced = 0
    failures = 0
    while produced < count:
        fam = random_family(rng)
        try:
            traced = trace_with_retries(fam, grid_n=grid_n, retries=2)
        except TraceError:
            failures += 1
            if failures > count:
                raise
            continue
        produced += 1
        yield fam, traced
