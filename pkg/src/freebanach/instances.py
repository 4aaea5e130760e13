"""Seeded random instances that are valid by construction.

Points are drawn from an integer grid; the max-norm gives ``rho`` and the
distance to the origin gives ``alpha``.  Entries are then moved inside the
slack the norm-pair and triangle inequalities leave, sometimes all the way to
a boundary, so tight cases get exercised too.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .free_space import FreeElement
from .lp import LinearProgram
from .normed_set import NormedSet, compress_to_unit, from_coordinates, validate_normed_set
from .scalars import Gaussian


def rng_for(seed, *parts) -> random.Random:
    """Independent, reproducible stream for ``(seed, *parts)``."""
    return random.Random(":".join(str(x) for x in (seed, *parts)))


def random_rational(rng: random.Random, lo: Fraction, hi: Fraction, boundary: float = 0.25) -> Fraction:
    """Rational in ``[lo, hi]``; returns an endpoint with probability ``boundary``."""
    if rng.random() < boundary:
        return lo if rng.random() < 0.5 else hi
    den = rng.randint(1, 4)
    return lo + (hi - lo) * Fraction(rng.randint(0, den), den)


def grid_points(rng: random.Random, n: int, dim: int = 2, radius: int = 4) -> list[tuple[int, ...]]:
    n = min(n, (2 * radius + 1) ** dim)
    seen: list[tuple[int, ...]] = []
    while len(seen) < n:
        p = tuple(rng.randint(-radius, radius) for _ in range(dim))
        if p not in seen:
            seen.append(p)
    return seen


def _labels(n):
    return [f"x{i}" for i in range(n)]


def random_metric(rng: random.Random, n: int, radius: int = 4) -> tuple[list[str], list[list[Fraction]]]:
    """A finite metric (max-norm distances of grid points, rescaled)."""
    pts = grid_points(rng, n, rng.randint(1, 3), radius)
    scale = Fraction(rng.randint(1, 3), rng.randint(1, 3))
    rho = [[scale * max(abs(a - b) for a, b in zip(u, v)) for v in pts] for u in pts]
    return _labels(len(pts)), rho


def perturb(rng: random.Random, X: NormedSet, steps: int = 3) -> NormedSet:
    """Move random ``alpha`` / ``rho`` entries within the slack left by the other entries."""
    n = len(X)
    rho = [list(r) for r in X.rho]
    alpha = list(X.alpha)
    for _ in range(steps):
        if n == 1:
            alpha[0] = Fraction(rng.randint(0, 3))
            continue
        if rng.random() < 0.5:
            p = rng.randrange(n)
            others = [q for q in range(n) if q != p]
            lo = max(abs(rho[p][q] - alpha[q]) for q in others)
            hi = min(alpha[q] + rho[p][q] for q in others)
            alpha[p] = random_rational(rng, lo, hi)
        else:
            p, q = rng.sample(range(n), 2)
            others = [r for r in range(n) if r not in (p, q)]
            lo = max([abs(alpha[p] - alpha[q])] + [abs(rho[p][r] - rho[r][q]) for r in others])
            hi = min([alpha[p] + alpha[q]] + [rho[p][r] + rho[r][q] for r in others])
            v = random_rational(rng, lo, hi)
            if v == 0:
                v = hi
            rho[p][q] = rho[q][p] = v
    return validate_normed_set(X.points, rho, alpha)


def random_normed_set(rng: random.Random, n: int, *, radius: int = 4, perturb_steps: int | None = None) -> NormedSet:
    dim = rng.randint(1, 3)
    pts = grid_points(rng, n, dim, radius)
    den = rng.randint(1, 3)
    X = from_coordinates({lab: [Fraction(c, den) for c in p] for lab, p in zip(_labels(len(pts)), pts)})
    steps = rng.randint(0, 4) if perturb_steps is None else perturb_steps
    return perturb(rng, X, steps)


def random_unit_set(rng: random.Random, n: int, radius: int = 4) -> NormedSet:
    """``alpha == 1``, ``rho <= 2``: compressed grid points, optionally perturbed."""
    pts = grid_points(rng, n, rng.randint(1, 3), radius)
    K, _ = compress_to_unit(pts, _labels(len(pts)))
    if rng.random() < 0.5 or len(K) < 3:
        return K
    rho = [list(r) for r in K.rho]
    p, q = rng.sample(range(len(K)), 2)
    others = [r for r in range(len(K)) if r not in (p, q)]
    lo = max(abs(rho[p][r] - rho[r][q]) for r in others)
    hi = min([Fraction(2)] + [rho[p][r] + rho[r][q] for r in others])
    v = random_rational(rng, lo, hi) or hi
    rho[p][q] = rho[q][p] = v
    return validate_normed_set(K.points, rho, K.alpha)


def random_coefficient(rng: random.Random, spread: int = 4) -> Fraction:
    return Fraction(rng.randint(-spread, spread), rng.randint(1, spread))


def random_element(rng: random.Random, X: NormedSet, support: Sequence[str] | None = None,
                   complex_field: bool = False) -> FreeElement:
    usable = [p for p, a in zip(X.points, X.alpha) if a > 0]
    if support is None:
        k = rng.randint(0, len(usable))
        support = rng.sample(usable, k)
    coeffs = {}
    for p in support:
        c = random_coefficient(rng)
        if complex_field:
            c = Gaussian(c, random_coefficient(rng))
        coeffs[p] = c
    return FreeElement(X, coeffs)


def random_sum_one(rng: random.Random, X: NormedSet, complex_field: bool = False) -> FreeElement:
    """Random coefficient vector with sum 1 that is not an indicator.

    Needs two points of positive weight; on fewer the indicator is the only choice.
    """
    if sum(1 for a in X.alpha if a > 0) < 2:
        raise ValueError("every sum-1 vector on a single point is an indicator")
    while True:
        vec = [random_coefficient(rng) for _ in X.points]
        if complex_field:
            vec = [Gaussian(v, random_coefficient(rng)) for v in vec]
        s = sum(vec[1:], Fraction(0))
        vec[0] = 1 - s
        x = FreeElement.from_vector(X, vec)
        if not (len(x.support()) == 1 and x[x.support()[0]] == 1):
            return x


def random_lp(rng: random.Random, m: int, n: int, spread: int = 3) -> LinearProgram:
    """Small LP with integer data; sign patterns are biased toward feasibility."""
    A = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(m)]
    if rng.random() < 0.7:
        x0 = [rng.randint(0, 2) for _ in range(n)]
        b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    else:
        b = [rng.randint(-spread, spread) for _ in range(m)]
    c = [rng.randint(-spread, spread) for _ in range(n)]
    if rng.random() < 0.5:
        c = [abs(v) for v in c]
    free = frozenset(j for j in range(n) if rng.random() < 0.15)
    return LinearProgram(c, A, b, free)
