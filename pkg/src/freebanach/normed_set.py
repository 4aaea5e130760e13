"""Normed sets: a metric ``rho`` together with a weight ``alpha`` such that

    |alpha(p) - alpha(q)| <= rho(p, q) <= alpha(p) + alpha(q)

for every pair of points.  Equivalently, ``alpha`` is the distance to an
extra base point ``0`` adjoined to the metric space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .scalars import parse_rational


class NormedSetError(ValueError):
    """Raised when input data does not define a normed set.

    ``violations`` holds one :class:`Violation` per failed axiom instance.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:5])
        more = f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
        super().__init__(f"{len(self.violations)} axiom violation(s): {lines}{more}")


@dataclass(frozen=True)
class Violation:
    kind: str  # shape | symmetry | negative | diagonal | separation | triangle | alpha_upper | alpha_lower | zero_alpha
    points: tuple
    message: str

    def __str__(self):
        return f"[{self.kind}] {self.message}"

    def to_json(self):
        return {"kind": self.kind, "points": list(self.points), "message": self.message}


@dataclass(frozen=True)
class NormedSet:
    """A finite normed set.  Build through :func:`validate_normed_set`."""

    points: tuple[str, ...]
    rho: tuple[tuple[Fraction, ...], ...]
    alpha: tuple[Fraction, ...]
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    def __len__(self):
        return len(self.points)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown point {label!r}") from None

    def __contains__(self, label):
        return label in self._index

    def dist(self, p: str, q: str) -> Fraction:
        return self.rho[self.index(p)][self.index(q)]

    def weight(self, p: str) -> Fraction:
        return self.alpha[self.index(p)]

    def diameter(self) -> Fraction:
        return max((max(row) for row in self.rho), default=Fraction(0))

    @property
    def zero_point(self) -> str | None:
        """The point with ``alpha == 0``, if any (it represents the zero vector)."""
        for p, a in zip(self.points, self.alpha):
            if a == 0:
                return p
        return None


@dataclass(frozen=True)
class CoordinateSpace:
    """``k``-dimensional rational coordinates under the max norm."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("coordinate space dimension must be >= 1")

    @staticmethod
    def norm(v: Sequence[Fraction]) -> Fraction:
        return max((abs(Fraction(c)) for c in v), default=Fraction(0))

    def distance(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        return self.norm([a - b for a, b in zip(u, v)])


def find_violations(points, rho, alpha) -> list[Violation]:
    """Every violated axiom of a candidate normed set (empty list if valid)."""
    n = len(points)
    out: list[Violation] = []
    if len(set(points)) != n:
        out.append(Violation("shape", tuple(points), "point labels are not distinct"))
    if len(rho) != n or any(len(row) != n for row in rho):
        out.append(Violation("shape", (), f"rho must be {n}x{n}"))
        return out
    if len(alpha) != n:
        out.append(Violation("shape", (), f"alpha must have length {n}, got {len(alpha)}"))
        return out
    P = points
    for i in range(n):
        if rho[i][i] != 0:
            out.append(Violation("diagonal", (P[i],), f"rho({P[i]},{P[i]}) = {rho[i][i]} != 0"))
        if alpha[i] < 0:
            out.append(Violation("negative", (P[i],), f"alpha({P[i]}) = {alpha[i]} < 0"))
    for i, j in combinations(range(n), 2):
        a, b = rho[i][j], rho[j][i]
        if a != b:
            out.append(Violation("symmetry", (P[i], P[j]), f"rho({P[i]},{P[j]}) = {a} != {b} = rho({P[j]},{P[i]})"))
        for r in {a, b}:
            if r < 0:
                out.append(Violation("negative", (P[i], P[j]), f"rho({P[i]},{P[j]}) = {r} < 0"))
            elif r == 0:
                out.append(Violation("separation", (P[i], P[j]), f"rho({P[i]},{P[j]}) = 0 for distinct points"))
        r = a
        if r > alpha[i] + alpha[j]:
            out.append(Violation(
                "alpha_upper", (P[i], P[j]),
                f"rho > alpha(p)+alpha(q): rho({P[i]},{P[j]}) = {r} > {alpha[i] + alpha[j]}"))
        if abs(alpha[i] - alpha[j]) > r:
            out.append(Violation(
                "alpha_lower", (P[i], P[j]),
                f"|alpha(p)-alpha(q)| > rho: |{alpha[i]} - {alpha[j]}| > {r} for ({P[i]},{P[j]})"))
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            for k in range(n):
                if k == i or k == j:
                    continue
                if rho[i][k] > rho[i][j] + rho[j][k]:
                    out.append(Violation(
                        "triangle", (P[i], P[j], P[k]),
                        f"rho({P[i]},{P[k]}) = {rho[i][k]} > rho({P[i]},{P[j]}) + rho({P[j]},{P[k]}) = "
                        f"{rho[i][j] + rho[j][k]}"))
    zeros = [P[i] for i in range(n) if alpha[i] == 0]
    if len(zeros) > 1:
        out.append(Violation("zero_alpha", tuple(zeros), f"{len(zeros)} points have alpha = 0 (at most one allowed)"))
    return out


def validate_normed_set(points: Iterable, rho, alpha) -> NormedSet:
    """Check the axioms and return a :class:`NormedSet`.

    Raises :class:`NormedSetError` listing every violation.  Entries of
    ``rho`` and ``alpha`` may be ints, Fractions or ``"num/den"`` strings.
    """
    points = tuple(str(p) for p in points)
    try:
        rho_q = tuple(tuple(parse_rational(v) for v in row) for row in rho)
        alpha_q = tuple(parse_rational(v) for v in alpha)
    except (TypeError, ValueError) as exc:
        raise NormedSetError([Violation("shape", (), f"non-rational entry: {exc}")]) from None
    violations = find_violations(points, rho_q, alpha_q)
    if violations:
        raise NormedSetError(violations)
    return NormedSet(points, rho_q, alpha_q)


def _check_metric(points, rho):
    n = len(points)
    alpha = [max((rho[i][j] for j in range(n)), default=Fraction(0)) for i in range(n)]
    # alpha = max row distance always satisfies the norm-pair inequalities when rho
    # is a metric, so only metric violations are reported here.
    found = [v for v in find_violations(points, rho, alpha) if v.kind not in ("alpha_upper", "alpha_lower", "zero_alpha")]
    if found:
        raise NormedSetError(found)


def truncation_structures(points, rho, basepoint: str) -> tuple[NormedSet, NormedSet]:
    """The two normed structures on a metric space with a chosen base point.

    ``rich`` keeps ``rho`` with ``alpha(x) = 1 + rho(x, x0)``; ``unit`` uses the
    truncated metric ``min(rho, 1)`` with constant weight 1.
    """
    points = tuple(str(p) for p in points)
    rho = tuple(tuple(parse_rational(v) for v in row) for row in rho)
    if basepoint not in points:
        raise KeyError(f"basepoint {basepoint!r} is not a point of the space")
    _check_metric(points, rho)
    i0 = points.index(basepoint)
    one = Fraction(1)
    alpha = [one + rho[i][i0] for i in range(len(points))]
    d = [[min(r, one) for r in row] for row in rho]
    rich = validate_normed_set(points, rho, alpha)
    unit = validate_normed_set(points, d, [one] * len(points))
    return rich, unit


def compress_to_unit(coords, labels: Sequence[str] | None = None) -> tuple[NormedSet, Fraction]:
    """Rescale a finite subset of a max-norm coordinate space to weight 1.

    Returns ``(K, L)`` with ``L = max(1, diam/2)``, ``rho_K = |x - y|_inf / L``
    and ``alpha_K = 1``.  ``coords`` is a sequence of rational tuples or a
    mapping ``label -> tuple``; duplicate coordinates are merged.
    """
    if isinstance(coords, Mapping):
        labels, coords = list(coords.keys()), list(coords.values())
    coords = [tuple(parse_rational(c) for c in v) for v in coords]
    if not coords:
        raise ValueError("cannot compress an empty point set")
    if labels is None:
        labels = [str(i) for i in range(len(coords))]
    if len({len(v) for v in coords}) != 1:
        raise ValueError("all coordinate tuples must have the same dimension")
    seen: dict[tuple, str] = {}
    for lab, v in zip(labels, coords):
        seen.setdefault(v, str(lab))
    uniq = list(seen)
    space = CoordinateSpace(len(uniq[0]) or 1)
    n = len(uniq)
    dists = [[space.distance(u, v) for v in uniq] for u in uniq]
    diam = max(max(row) for row in dists)
    L = max(Fraction(1), diam / 2)
    rho = [[r / L for r in row] for row in dists]
    K = validate_normed_set([seen[v] for v in uniq], rho, [Fraction(1)] * n)
    return K, L


def induced_subset(parent: NormedSet, labels: Iterable[str]) -> NormedSet:
    """Restrict ``parent`` to ``labels`` (kept in the parent's order)."""
    wanted = set(labels)
    if not wanted:
        raise ValueError("subset must be nonempty")
    unknown = wanted - set(parent.points)
    if unknown:
        raise KeyError(f"unknown point(s) {sorted(unknown)}")
    idx = [i for i, p in enumerate(parent.points) if p in wanted]
    return NormedSet(
        tuple(parent.points[i] for i in idx),
        tuple(tuple(parent.rho[i][j] for j in idx) for i in idx),
        tuple(parent.alpha[i] for i in idx),
    )


def from_coordinates(coords: Mapping[str, Sequence[Fraction]]) -> NormedSet:
    """Normed set induced by a max-norm coordinate space: rho = |u-v|, alpha = |u|."""
    labels = list(coords)
    vecs = [tuple(Fraction(c) for c in coords[p]) for p in labels]
    rho = [[CoordinateSpace.norm([a - b for a, b in zip(u, v)]) for v in vecs] for u in vecs]
    alpha = [CoordinateSpace.norm(u) for u in vecs]
    return validate_normed_set(labels, rho, alpha)
