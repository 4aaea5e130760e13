"""Elements and operators of the free Banach space ``B(X)`` over a finite normed set.

The norm of ``x = sum x(p) delta_p`` is the cheapest way to write ``x`` as a
combination of molecules ``delta_p - delta_q`` (cost ``rho(p, q)`` each) and
atoms ``delta_z`` (cost ``alpha(z)``).  The LP dual is a function ``f`` with
``|f(p) - f(q)| <= rho(p, q)`` and ``|f(p)| <= alpha(p)`` pairing to the same
value, so every norm comes with two exact certificates.

A point with ``alpha = 0`` has ``delta_p = 0`` in ``B(X)``; such points never
appear in the support of a :class:`FreeElement` (operators that land on them
drop the coefficient).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .lp import OPTIMAL, LinearProgram, lp_solve
from .normed_set import CoordinateSpace, NormedSet, from_coordinates, truncation_structures
from .scalars import Gaussian, Scalar, imag_part, is_real, real_part, require_rational, to_scalar


class LipschitzError(ValueError):
    """A point map fails the Lipschitz condition; ``worst`` names the largest excess."""

    def __init__(self, message, worst=None, violations=()):
        super().__init__(message)
        self.worst = worst
        self.violations = list(violations)


class FreeElement:
    """Finitely supported element of ``B(X)``; immutable, zero coefficients dropped."""

    __slots__ = ("base", "_coeffs")

    def __init__(self, base: NormedSet, coeffs: Mapping[str, object] | None = None, *, identify_zero=False):
        out: dict[str, Scalar] = {}
        for label, v in (coeffs or {}).items():
            i = base.index(label)
            v = to_scalar(v)
            if not v:
                continue
            if base.alpha[i] == 0:
                if identify_zero:
                    continue
                raise ValueError(
                    f"point {label!r} has alpha = 0, so delta_{label} is the zero vector; "
                    "it cannot carry a coefficient")
            out[label] = v
        self.base = base
        self._coeffs = {p: out[p] for p in base.points if p in out}

    @classmethod
    def delta(cls, base: NormedSet, label: str) -> "FreeElement":
        return cls(base, {label: 1}, identify_zero=True)

    @classmethod
    def from_vector(cls, base: NormedSet, vec: Sequence, *, identify_zero=False) -> "FreeElement":
        return cls(base, dict(zip(base.points, vec)), identify_zero=identify_zero)

    @property
    def coeffs(self) -> dict[str, Scalar]:
        return dict(self._coeffs)

    def __getitem__(self, label) -> Scalar:
        return self._coeffs.get(label, Fraction(0))

    def support(self) -> tuple[str, ...]:
        return tuple(self._coeffs)

    def vector(self) -> list[Scalar]:
        return [self[p] for p in self.base.points]

    def is_real(self) -> bool:
        return all(is_real(v) for v in self._coeffs.values())

    def real(self) -> "FreeElement":
        return FreeElement(self.base, {p: real_part(v) for p, v in self._coeffs.items()})

    def imag(self) -> "FreeElement":
        return FreeElement(self.base, {p: imag_part(v) for p, v in self._coeffs.items()})

    def _same_base(self, other):
        if not isinstance(other, FreeElement):
            return False
        if other.base != self.base:
            raise ValueError("elements live over different normed sets")
        return True

    def __add__(self, other):
        if not self._same_base(other):
            return NotImplemented
        keys = set(self._coeffs) | set(other._coeffs)
        return FreeElement(self.base, {p: self[p] + other[p] for p in keys})

    def __sub__(self, other):
        if not self._same_base(other):
            return NotImplemented
        keys = set(self._coeffs) | set(other._coeffs)
        return FreeElement(self.base, {p: self[p] - other[p] for p in keys})

    def __neg__(self):
        return FreeElement(self.base, {p: -v for p, v in self._coeffs.items()})

    def __mul__(self, scalar):
        s = to_scalar(scalar)
        return FreeElement(self.base, {p: s * v for p, v in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        s = to_scalar(scalar)
        return FreeElement(self.base, {p: v / s for p, v in self._coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.base == other.base and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.base, tuple(self._coeffs.items())))

    def __bool__(self):
        return bool(self._coeffs)

    def __repr__(self):
        terms = " + ".join(f"{v}*d[{p}]" for p, v in self._coeffs.items()) or "0"
        return f"FreeElement({terms})"


@dataclass(frozen=True)
class Decomposition:
    """``x = sum lam*(delta_p - delta_q) + sum mu*delta_z`` with its cost."""

    molecules: tuple[tuple[str, str, Fraction], ...]
    atoms: tuple[tuple[str, Fraction], ...]
    cost: Fraction

    def element(self, base: NormedSet) -> FreeElement:
        acc: dict[str, Fraction] = {}
        for p, q, lam in self.molecules:
            acc[p] = acc.get(p, Fraction(0)) + lam
            acc[q] = acc.get(q, Fraction(0)) - lam
        for z, mu in self.atoms:
            acc[z] = acc.get(z, Fraction(0)) + mu
        return FreeElement(base, acc, identify_zero=True)

    def recomputed_cost(self, base: NormedSet) -> Fraction:
        return (sum((abs(lam) * base.dist(p, q) for p, q, lam in self.molecules), Fraction(0))
                + sum((abs(mu) * base.weight(z) for z, mu in self.atoms), Fraction(0)))


@dataclass(frozen=True)
class LipschitzWitness:
    """A function on the points with Lipschitz constant <= 1 and ``|f| <= alpha``."""

    values: tuple[tuple[str, Fraction], ...]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.values)

    def pair(self, x: FreeElement):
        f = self.as_dict()
        return sum((v * f.get(p, Fraction(0)) for p, v in x.coeffs.items()), Fraction(0))

    def violations(self, base: NormedSet) -> list[str]:
        f = self.as_dict()
        errs = []
        if set(f) != set(base.points):
            errs.append("witness domain differs from the point set")
            return errs
        for i, p in enumerate(base.points):
            if abs(f[p]) > base.alpha[i]:
                errs.append(f"|f({p})| = {abs(f[p])} > alpha = {base.alpha[i]}")
            for j in range(i + 1, len(base)):
                q = base.points[j]
                if abs(f[p] - f[q]) > base.rho[i][j]:
                    errs.append(f"|f({p}) - f({q})| > rho({p},{q})")
        return errs


@dataclass(frozen=True)
class NormResult:
    value: Fraction
    decomposition: Decomposition
    witness: LipschitzWitness

    def __iter__(self):
        return iter((self.value, self.decomposition, self.witness))


def _norm_lp(base: NormedSet, x: FreeElement, idx: Sequence[int]):
    """Decomposition LP over the points ``idx``.

    Variables: ``lam[p,q] >= 0`` per ordered pair (column ``e_p - e_q``), then
    ``mu+[z], mu-[z] >= 0`` per point (columns ``+-e_z``).
    """
    rows = {i: r for r, i in enumerate(idx)}
    m = len(idx)
    cols, cost, labels = [], [], []
    for i in idx:
        for j in idx:
            if i != j:
                col = [Fraction(0)] * m
                col[rows[i]], col[rows[j]] = Fraction(1), Fraction(-1)
                cols.append(col)
                cost.append(base.rho[i][j])
                labels.append(("mol", i, j))
    for i in idx:
        for s in (1, -1):
            col = [Fraction(0)] * m
            col[rows[i]] = Fraction(s)
            cols.append(col)
            cost.append(base.alpha[i])
            labels.append(("atom", i, s))
    A = [[col[r] for col in cols] for r in range(m)]
    b = [require_rational(x[base.points[i]]) for i in idx]
    return LinearProgram(cost, A, b), labels


def _solve_norm(x: FreeElement, idx: Sequence[int]) -> NormResult:
    base = x.base
    for v in x.coeffs.values():
        require_rational(v)
    if not idx:
        return NormResult(Fraction(0), Decomposition((), (), Fraction(0)), LipschitzWitness(()))
    lp, labels = _norm_lp(base, x, idx)
    sol = lp_solve(lp)
    if sol.status != OPTIMAL:  # the LP is always feasible and bounded below by 0
        raise RuntimeError(f"norm LP returned {sol.status}")
    mols: dict[tuple[str, str], Fraction] = {}
    atoms: dict[str, Fraction] = {}
    P = base.points
    for lab, v in zip(labels, sol.primal):
        if not v:
            continue
        if lab[0] == "mol":
            p, q = P[lab[1]], P[lab[2]]
            mols[(p, q)] = mols.get((p, q), Fraction(0)) + v
        else:
            atoms[P[lab[1]]] = atoms.get(P[lab[1]], Fraction(0)) + lab[2] * v
    dec = Decomposition(
        tuple((p, q, lam) for (p, q), lam in mols.items()),
        tuple((z, mu) for z, mu in atoms.items() if mu),
        sol.value,
    )
    witness = LipschitzWitness(tuple((P[i], yi) for i, yi in zip(idx, sol.dual)))
    return NormResult(sol.value, dec, witness)


def norm(x: FreeElement) -> NormResult:
    """Exact norm with a minimal decomposition and a dual Lipschitz witness.

    The witness is defined on every point of the base set.
    """
    return _solve_norm(x, range(len(x.base)))


def norm_supported_only(x: FreeElement) -> Fraction:
    """The decomposition LP using only molecules and atoms inside ``supp x``."""
    sup = set(x.support())
    return _solve_norm(x, [i for i, p in enumerate(x.base.points) if p in sup]).value


def check_norm_certificates(x: FreeElement, result: NormResult) -> list[str]:
    """Verify a :class:`NormResult` without calling the solver."""
    base = x.base
    errs = []
    if result.decomposition.element(base) != x:
        errs.append("decomposition does not sum to x")
    if result.decomposition.recomputed_cost(base) != result.value:
        errs.append("decomposition cost differs from the value")
    if result.decomposition.cost != result.value:
        errs.append("recorded decomposition cost differs from the value")
    errs.extend(result.witness.violations(base))
    if result.witness.pair(x) != result.value:
        errs.append("witness pairing differs from the value")
    return errs


def distance_to_points(x: FreeElement, subset: Iterable[str] | None = None) -> tuple[Fraction, str]:
    """``min_p ||x - delta_p||`` over ``subset`` (default: all points); lowest index wins ties."""
    base = x.base
    wanted = set(base.points if subset is None else subset)
    if not wanted:
        raise ValueError("distance to an empty set of points")
    for p in wanted:
        base.index(p)
    best = None
    for p in base.points:
        if p not in wanted:
            continue
        d = norm(x - FreeElement.delta(base, p)).value
        if best is None or d < best[0]:
            best = (d, p)
    return best


def complex_norm_bounds(x: FreeElement) -> tuple[Fraction, Fraction]:
    """Bracket the norm of a Gaussian-rational element.

    ``lower = max(||Re x||, ||Im x||)`` and ``upper = ||Re x|| + ||Im x||`` (the
    decomposition cost when each term's modulus is replaced by ``|Re| + |Im|``).
    """
    re, im = norm(x.real()).value, norm(x.imag()).value
    return max(re, im), re + im


# --- operators -----------------------------------------------------------------


Target = Union[NormedSet, CoordinateSpace]


def unit_ball_generators(base: NormedSet) -> list[tuple[tuple, FreeElement]]:
    """Molecules ``(d_p - d_q)/rho`` (``p`` before ``q``) and atoms ``d_p/alpha`` (``alpha > 0``).

    The unit ball of ``B(X)`` is the convex hull of these and their negatives.
    """
    out = []
    P = base.points
    for i in range(len(P)):
        for j in range(i + 1, len(P)):
            g = (FreeElement.delta(base, P[i]) - FreeElement.delta(base, P[j])) / base.rho[i][j]
            out.append((("mol", P[i], P[j]), g))
    for i, p in enumerate(P):
        if base.alpha[i] > 0:
            out.append((("atom", p), FreeElement.delta(base, p) / base.alpha[i]))
    return out


@dataclass(frozen=True)
class LinearOperator:
    """Matrix from ``B(source)`` to ``B(target)`` or to a max-norm coordinate space.

    ``matrix[r][c]`` is the coefficient of target basis vector ``r`` in the
    image of ``delta`` at source point ``c``.
    """

    source: NormedSet
    target: Target
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = len(self.target) if isinstance(self.target, NormedSet) else self.target.dim
        mat = tuple(tuple(Fraction(v) for v in row) for row in self.matrix)
        if len(mat) != rows or any(len(r) != len(self.source) for r in mat):
            raise ValueError(f"operator matrix must be {rows}x{len(self.source)}")
        if isinstance(self.target, NormedSet):
            # rows of zero-weight target points represent the zero vector
            mat = tuple(tuple(Fraction(0) for _ in r) if a == 0 else r for r, a in zip(mat, self.target.alpha))
        object.__setattr__(self, "matrix", mat)

    def apply(self, x: FreeElement):
        if x.base != self.source:
            raise ValueError("element is not over the operator's source")
        vec = x.vector()
        out = [sum((a * v for a, v in zip(row, vec) if a and v), Fraction(0)) for row in self.matrix]
        if isinstance(self.target, NormedSet):
            return FreeElement.from_vector(self.target, out, identify_zero=True)
        return tuple(to_scalar(v) for v in out)

    __call__ = apply

    def column(self, label: str):
        return self.apply(FreeElement.delta(self.source, label))

    def compose(self, inner: "LinearOperator") -> "LinearOperator":
        """``self o inner``."""
        if inner.target != self.source:
            raise ValueError("operators do not compose")
        M, N = self.matrix, inner.matrix
        k = len(N)
        prod = [[sum((M[r][t] * N[t][c] for t in range(k)), Fraction(0)) for c in range(len(inner.source))]
                for r in range(len(M))]
        return LinearOperator(inner.source, self.target, prod)

    @classmethod
    def identity(cls, base: NormedSet) -> "LinearOperator":
        n = len(base)
        return cls(base, base, [[Fraction(int(r == c)) for c in range(n)] for r in range(n)])


def target_norm(target: Target, v) -> Fraction:
    if isinstance(target, NormedSet):
        return norm(v).value
    return CoordinateSpace.norm([require_rational(c) for c in v])


def operator_norm(T: LinearOperator) -> Fraction:
    """Exact operator norm: the largest target norm over the unit-ball generators."""
    return max((target_norm(T.target, T.apply(g)) for _, g in unit_ball_generators(T.source)),
               default=Fraction(0))


def _as_target_vector(target: Target, image):
    if isinstance(target, NormedSet):
        if isinstance(image, FreeElement):
            if image.base != target:
                raise ValueError("image element is not over the target")
            return image
        if isinstance(image, str):
            return FreeElement.delta(target, image)
        return FreeElement(target, image, identify_zero=True)
    vec = tuple(to_scalar(c) for c in image)
    if len(vec) != target.dim:
        raise ValueError(f"coordinate image has dimension {len(vec)}, expected {target.dim}")
    return vec


def _sub(target, u, v):
    if isinstance(target, NormedSet):
        return u - v
    return tuple(a - b for a, b in zip(u, v))


def extend_lipschitz(source: NormedSet, images: Mapping[str, object], target: Target, L) -> LinearOperator:
    """Linear extension of a point map that is Lipschitz with constant ``L``.

    ``images[p]`` is a target point label, a :class:`FreeElement` or coefficient
    mapping over ``target``, or a coordinate tuple when ``target`` is a
    :class:`CoordinateSpace`.  Raises :class:`LipschitzError` when for some
    ``p, q``: ``|f(p) - f(q)| > L rho(p, q)`` or ``|f(p)| > L alpha(p)``.
    """
    L = to_scalar(L)
    if not isinstance(L, Fraction) or L < 0:
        raise ValueError(f"Lipschitz constant must be a nonnegative rational, got {L!r}")
    missing = set(source.points) - set(images)
    if missing:
        raise ValueError(f"map is undefined at {sorted(missing)}")
    f = {p: _as_target_vector(target, images[p]) for p in source.points}
    violations = []
    P = source.points
    for i, p in enumerate(P):
        excess = target_norm(target, f[p]) - L * source.alpha[i]
        if excess > 0:
            violations.append((excess, (p,), f"|f({p})| exceeds L*alpha({p}) by {excess}"))
        for j in range(i + 1, len(P)):
            q = P[j]
            excess = target_norm(target, _sub(target, f[p], f[q])) - L * source.rho[i][j]
            if excess > 0:
                violations.append((excess, (p, q), f"|f({p}) - f({q})| exceeds L*rho({p},{q}) by {excess}"))
    if violations:
        worst = max(violations, key=lambda v: v[0])
        raise LipschitzError(f"not Lipschitz with constant {L}: {worst[2]}", worst=worst,
                             violations=violations)
    if isinstance(target, NormedSet):
        rows = [[f[p][t] for p in P] for t in target.points]
    else:
        rows = [[require_rational(f[p][r]) for p in P] for r in range(target.dim)]
    T = LinearOperator(source, target, rows)
    opn = operator_norm(T)
    if opn > L:
        raise AssertionError(f"extension has norm {opn} > L = {L}")
    return T


def canonical_embedding(sub: NormedSet, parent: NormedSet) -> LinearOperator:
    """``delta_p -> delta_p`` from ``B(sub)`` into ``B(parent)``; ``sub`` must be a normed subset."""
    for i, p in enumerate(sub.points):
        if p not in parent:
            raise ValueError(f"{p!r} is not a point of the parent set")
        if sub.alpha[i] != parent.weight(p):
            raise ValueError(f"alpha({p}) differs from the parent's")
        for j, q in enumerate(sub.points):
            if sub.rho[i][j] != parent.dist(p, q):
                raise ValueError(f"rho({p},{q}) differs from the parent's")
    cols = {p: sub.index(p) for p in sub.points}
    rows = [[Fraction(int(cols.get(t) == c)) for c in range(len(sub))] for t in parent.points]
    return LinearOperator(sub, parent, rows)


@dataclass(frozen=True)
class SeparatingMap:
    """Coordinates ``f(a)_z = min(|z - a| - |z|, D)`` indexed by ``0`` and ``supp y``."""

    coordinates: tuple[str, ...]  # "0" then the support labels
    diameter: Fraction
    images: dict  # source label -> coordinate tuple
    K: NormedSet
    f: dict  # source label -> K label
    fbar: LinearOperator

    @property
    def space(self) -> CoordinateSpace:
        return CoordinateSpace(len(self.coordinates))


def separating_map(base: NormedSet, y: FreeElement) -> SeparatingMap:
    if y.base != base:
        raise ValueError("element is not over the given normed set")
    for v in y.coeffs.values():
        require_rational(v)
    supp = [base.index(p) for p in y.support()]
    D = max([base.alpha[i] for i in supp] + [base.rho[i][j] for i in supp for j in supp], default=Fraction(0))
    images = {}
    for a, p in enumerate(base.points):
        vec = [min(base.alpha[a], D)] + [min(base.rho[z][a] - base.alpha[z], D) for z in supp]
        images[p] = tuple(vec)
    space = CoordinateSpace(len(supp) + 1)
    for a, p in enumerate(base.points):
        if space.norm(images[p]) > base.alpha[a]:
            raise AssertionError(f"separating map enlarges the weight at {p}")
        for b in range(a + 1, len(base)):
            q = base.points[b]
            if space.distance(images[p], images[q]) > base.rho[a][b]:
                raise AssertionError(f"separating map expands rho({p},{q})")
    first: dict[tuple, str] = {}
    for p in base.points:
        first.setdefault(images[p], f"f({p})")
    K = from_coordinates({lab: v for v, lab in first.items()})
    f = {p: first[images[p]] for p in base.points}
    fbar = extend_lipschitz(base, f, K, 1)
    return SeparatingMap(("0",) + tuple(base.points[i] for i in supp), D, images, K, f, fbar)


def truncation_operator(points, rho, basepoint: str) -> LinearOperator:
    """Identity on coefficients from ``(rho, 1 + rho(., x0))`` to ``(min(rho, 1), 1)``."""
    rich, unit = truncation_structures(points, rho, basepoint)
    n = len(rich)
    T = LinearOperator(rich, unit, [[Fraction(int(r == c)) for c in range(n)] for r in range(n)])
    opn = operator_norm(T)
    if opn > 1:
        raise AssertionError(f"truncation operator has norm {opn} > 1")
    return T
