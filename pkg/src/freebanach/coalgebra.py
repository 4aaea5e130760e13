"""The counital coalgebra on ``B(X)`` for ``alpha == 1`` and ``diam X <= 2``.

Comultiplication sends ``delta_p`` to ``delta_p (x) delta_p`` and the counit
sends every ``delta_p`` to 1.  An element ``x`` is group-like when
``x (x) x - Delta x = 0`` and ``eps(x) = 1``; the pair of these two defects is
a degree-2 polynomial map whose zeros are exactly the points of ``X``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping

from .free_space import FreeElement, LinearOperator, extend_lipschitz, unit_ball_generators
from .lp import OPTIMAL, LinearProgram, lp_solve
from .normed_set import CoordinateSpace, NormedSet
from .scalars import Scalar, imag_part, is_real, real_part, require_rational, to_scalar

PI_NORM_GUARD = 8


class CoalgebraError(ValueError):
    def __init__(self, message, offending=()):
        super().__init__(message)
        self.offending = list(offending)


class TensorElement:
    """Finite combination of ``delta_p (x) delta_q``; zero coefficients dropped."""

    __slots__ = ("base", "_coeffs")

    def __init__(self, base: NormedSet, coeffs: Mapping[tuple[str, str], object] | None = None):
        out = {}
        for (p, q), v in (coeffs or {}).items():
            i, j = base.index(p), base.index(q)
            v = to_scalar(v)
            if v and base.alpha[i] and base.alpha[j]:
                out[(p, q)] = v
        order = {p: i for i, p in enumerate(base.points)}
        self.base = base
        self._coeffs = dict(sorted(out.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]])))

    @classmethod
    def tensor(cls, u: FreeElement, v: FreeElement) -> "TensorElement":
        if u.base != v.base:
            raise ValueError("factors live over different normed sets")
        return cls(u.base, {(p, q): a * b for p, a in u.coeffs.items() for q, b in v.coeffs.items()})

    @property
    def coeffs(self) -> dict[tuple[str, str], Scalar]:
        return dict(self._coeffs)

    def __getitem__(self, pq) -> Scalar:
        return self._coeffs.get(tuple(pq), Fraction(0))

    def _check(self, other):
        if not isinstance(other, TensorElement):
            return False
        if other.base != self.base:
            raise ValueError("tensors live over different normed sets")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        keys = set(self._coeffs) | set(other._coeffs)
        return TensorElement(self.base, {k: self[k] + other[k] for k in keys})

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        keys = set(self._coeffs) | set(other._coeffs)
        return TensorElement(self.base, {k: self[k] - other[k] for k in keys})

    def __neg__(self):
        return TensorElement(self.base, {k: -v for k, v in self._coeffs.items()})

    def __mul__(self, scalar):
        s = to_scalar(scalar)
        return TensorElement(self.base, {k: s * v for k, v in self._coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.base == other.base and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.base, tuple(self._coeffs.items())))

    def __bool__(self):
        return bool(self._coeffs)

    def is_real(self):
        return all(is_real(v) for v in self._coeffs.values())

    def real(self):
        return TensorElement(self.base, {k: real_part(v) for k, v in self._coeffs.items()})

    def imag(self):
        return TensorElement(self.base, {k: imag_part(v) for k, v in self._coeffs.items()})

    def __repr__(self):
        terms = " + ".join(f"{v}*d[{p}](x)d[{q}]" for (p, q), v in self._coeffs.items()) or "0"
        return f"TensorElement({terms})"


@dataclass(frozen=True)
class BilinearWitness:
    """Bilinear form ``phi`` on ``B(X)`` given by its values on basis pairs.

    Feasible when ``|phi(u, v)| <= 1`` for all unit-ball generators ``u, v``.
    """

    values: tuple[tuple[tuple[str, str], Fraction], ...]

    def as_dict(self):
        return dict(self.values)

    def evaluate(self, u: FreeElement, v: FreeElement) -> Fraction:
        phi = self.as_dict()
        return sum((a * b * phi.get((p, q), Fraction(0))
                    for p, a in u.coeffs.items() for q, b in v.coeffs.items()), Fraction(0))

    def pair(self, t: TensorElement):
        phi = self.as_dict()
        return sum((v * phi.get(k, Fraction(0)) for k, v in t.coeffs.items()), Fraction(0))

    def violations(self, base: NormedSet) -> list[str]:
        gens = unit_ball_generators(base)
        errs = []
        for gk, g in gens:
            for hk, h in gens:
                val = self.evaluate(g, h)
                if abs(val) > 1:
                    errs.append(f"|phi({gk}, {hk})| = {abs(val)} > 1")
        return errs

    @classmethod
    def from_functions(cls, base: NormedSet, g: Mapping[str, Fraction], h: Mapping[str, Fraction]):
        """The product form ``(u, v) -> g(u) h(v)``."""
        return cls(tuple(((p, q), Fraction(g[p]) * Fraction(h[q])) for p in base.points for q in base.points))


@dataclass(frozen=True)
class TensorDecomposition:
    """``t = sum c * (g (x) h)`` over unit-ball generator pairs; cost ``sum |c|``."""

    terms: tuple[tuple[Fraction, tuple, tuple], ...]
    cost: Fraction

    def element(self, base: NormedSet) -> TensorElement:
        gens = dict(unit_ball_generators(base))
        acc = TensorElement(base)
        for c, gk, hk in self.terms:
            acc = acc + TensorElement.tensor(gens[gk], gens[hk]) * c
        return acc


@dataclass(frozen=True)
class PiNormResult:
    value: Fraction
    decomposition: TensorDecomposition
    witness: BilinearWitness

    def __iter__(self):
        return iter((self.value, self.decomposition, self.witness))


def pi_norm(t: TensorElement, max_points: int = PI_NORM_GUARD) -> PiNormResult:
    """Exact projective tensor norm on ``B(X) (x) B(X)`` with primal and dual certificates."""
    base = t.base
    if len(base) > max_points:
        raise ValueError(f"pi_norm guard: {len(base)} points > {max_points} (raise max_points to override)")
    for v in t.coeffs.values():
        require_rational(v)
    live = [p for p, a in zip(base.points, base.alpha) if a > 0]
    rows = {(p, q): r for r, (p, q) in enumerate(product(live, live))}
    m = len(rows)
    if not t:
        zero = BilinearWitness(tuple((k, Fraction(0)) for k in rows))
        return PiNormResult(Fraction(0), TensorDecomposition((), Fraction(0)), zero)
    gens = unit_ball_generators(base)
    columns, labels = [], []
    for gk, g in gens:
        gc = g.coeffs
        for hk, h in gens:
            hc = h.coeffs
            entries = {rows[(p, q)]: a * b for p, a in gc.items() for q, b in hc.items()}
            for s in (1, -1):
                columns.append((entries, s))
                labels.append((s, gk, hk))
    zero = Fraction(0)
    A = [[zero] * len(columns) for _ in range(m)]
    for c, (entries, s) in enumerate(columns):
        for r, v in entries.items():
            A[r][c] = v if s > 0 else -v
    b = [require_rational(t[k]) for k in rows]
    sol = lp_solve(LinearProgram([1] * len(columns), A, b))
    if sol.status != OPTIMAL:
        raise RuntimeError(f"pi-norm LP returned {sol.status}")
    terms = tuple((s * v, gk, hk) for (s, gk, hk), v in zip(labels, sol.primal) if v)
    witness = BilinearWitness(tuple((k, sol.dual[r]) for k, r in rows.items()))
    return PiNormResult(sol.value, TensorDecomposition(terms, sol.value), witness)


def check_pi_certificates(t: TensorElement, result: PiNormResult) -> list[str]:
    """Re-verify a :class:`PiNormResult` by direct evaluation."""
    errs = []
    if result.decomposition.element(t.base) != t:
        errs.append("decomposition does not sum to t")
    if sum((abs(c) for c, _, _ in result.decomposition.terms), Fraction(0)) != result.value:
        errs.append("decomposition cost differs from the value")
    errs.extend(result.witness.violations(t.base))
    if result.witness.pair(t) != result.value:
        errs.append("witness pairing differs from the value")
    return errs


def pi_norm_bounds(t: TensorElement, max_points: int = PI_NORM_GUARD) -> tuple[Fraction, Fraction]:
    """``(max(pi(Re t), pi(Im t)), pi(Re t) + pi(Im t))`` for Gaussian-rational tensors."""
    re = pi_norm(t.real(), max_points).value
    im = pi_norm(t.imag(), max_points).value
    return max(re, im), re + im


# --- coalgebra -----------------------------------------------------------------


@dataclass(frozen=True)
class CoalgebraStructure:
    base: NormedSet
    epsilon: LinearOperator  # into the 1-dimensional coordinate space

    @property
    def points(self):
        return self.base.points

    def comultiply(self, x: FreeElement) -> TensorElement:
        if x.base != self.base:
            raise ValueError("element is not over the coalgebra's base")
        return TensorElement(self.base, {(p, p): v for p, v in x.coeffs.items()})

    def counit(self, x: FreeElement) -> Scalar:
        if x.base != self.base:
            raise ValueError("element is not over the coalgebra's base")
        return to_scalar(sum(x.coeffs.values(), Fraction(0)))

    def delta_matrix(self) -> list[list[Fraction]]:
        """``n^2 x n`` matrix of Delta; row ``(p, q)`` in lexicographic point order."""
        n = len(self.base)
        return [[Fraction(int(p == q == r)) for r in range(n)] for p in range(n) for q in range(n)]

    def epsilon_row(self) -> list[Fraction]:
        return list(self.epsilon.matrix[0])

    def counit_identities_hold(self) -> bool:
        """``(Id (x) eps) o Delta == (eps (x) Id) o Delta == Id`` as exact matrices."""
        n = len(self.base)
        D = self.delta_matrix()
        eps = self.epsilon_row()
        # (Id (x) eps)[a, (p, q)] = [a == p] eps[q];  (eps (x) Id)[a, (p, q)] = eps[p] [a == q]
        id_eps = [[(eps[q] if a == p else Fraction(0)) for p in range(n) for q in range(n)] for a in range(n)]
        eps_id = [[(eps[p] if a == q else Fraction(0)) for p in range(n) for q in range(n)] for a in range(n)]
        ident = [[Fraction(int(a == r)) for r in range(n)] for a in range(n)]
        return _matmul(id_eps, D) == ident and _matmul(eps_id, D) == ident

    def coassociative(self) -> bool:
        """``(Delta (x) Id) o Delta == (Id (x) Delta) o Delta`` as exact ``n^3 x n`` matrices."""
        n = len(self.base)
        D = self.delta_matrix()
        n2 = n * n
        D_id = [[D[a * n + b][p] * int(c == q) for p in range(n) for q in range(n)]
                for a in range(n) for b in range(n) for c in range(n)]
        id_D = [[int(a == p) * D[b * n + c][q] for p in range(n) for q in range(n)]
                for a in range(n) for b in range(n) for c in range(n)]
        assert len(D_id[0]) == n2
        return _matmul(D_id, D) == _matmul(id_D, D)


def _matmul(A, B):
    k = len(B)
    return [[sum((A[i][t] * B[t][j] for t in range(k) if A[i][t]), Fraction(0)) for j in range(len(B[0]))]
            for i in range(len(A))]


def make_coalgebra(base: NormedSet) -> CoalgebraStructure:
    """Coalgebra structure on ``B(base)``; requires ``alpha == 1`` and ``rho <= 2``."""
    bad = [(p,) for p, a in zip(base.points, base.alpha) if a != 1]
    if bad:
        raise CoalgebraError(f"alpha must be identically 1; violated at {[b[0] for b in bad]}", bad)
    P = base.points
    far = [(P[i], P[j]) for i in range(len(P)) for j in range(i + 1, len(P)) if base.rho[i][j] > 2]
    if far:
        p, q = far[0]
        raise CoalgebraError(f"diameter exceeds 2: rho({p},{q}) = {base.dist(p, q)}", far)
    epsilon = extend_lipschitz(base, {p: (1,) for p in P}, CoordinateSpace(1), 1)
    C = CoalgebraStructure(base, epsilon)
    if not C.counit_identities_hold():
        raise AssertionError("counit identities fail")
    return C


@dataclass(frozen=True)
class DefectReport:
    """``(x (x) x - Delta x, eps(x) - 1)`` and its size.

    ``norm`` is exact for rational elements; for complex ones ``norm`` is ``None``
    and ``norm_bounds`` brackets it.  ``is_zero`` is always exact.
    """

    tensor_defect: TensorElement
    counit_defect: Scalar
    is_zero: bool
    norm: Fraction | None = None
    norm_bounds: tuple[Fraction, Fraction] | None = None
    pi: PiNormResult | None = None


def grouplike_defect(C: CoalgebraStructure, x: FreeElement, with_norm: bool = True,
                     max_points: int = PI_NORM_GUARD) -> DefectReport:
    if x.base != C.base:
        raise ValueError("element is not over the coalgebra's base")
    t = TensorElement.tensor(x, x) - C.comultiply(x)
    e = to_scalar(C.counit(x) - 1)
    is_zero = not t and not e
    if not with_norm:
        return DefectReport(t, e, is_zero)
    if t.is_real() and is_real(e):
        res = pi_norm(t.real(), max_points)
        return DefectReport(t, e, is_zero, norm=max(res.value, abs(real_part(e))), pi=res)
    lo, hi = pi_norm_bounds(t, max_points)
    er, ei = abs(real_part(e)), abs(imag_part(e))
    return DefectReport(t, e, is_zero, norm_bounds=(max(lo, er, ei), max(hi, er + ei)))


def solve_grouplikes(C: CoalgebraStructure) -> list[FreeElement]:
    """All solutions of ``x(p) x(q) = [p == q] x(p)``, ``sum x(p) = 1``.

    Each diagonal equation ``x(p)^2 = x(p)`` has the roots 0 and 1 over any
    field; the search branches on those roots, discarding a branch as soon as an
    off-diagonal product ``x(p) x(q)`` is nonzero, and keeps completed branches
    whose coordinates sum to 1.
    """
    n = len(C.base)
    sols: list[tuple[int, ...]] = []

    def extend(prefix: list[int]):
        if len(prefix) == n:
            if sum(prefix) == 1:
                sols.append(tuple(prefix))
            return
        for root in (1, 0):
            if any(v * root != 0 for v in prefix):
                continue
            extend(prefix + [root])

    extend([])
    return [FreeElement.from_vector(C.base, s) for s in sols]


def comultiplication_norm(C: CoalgebraStructure, max_points: int = PI_NORM_GUARD) -> Fraction:
    """Operator norm of Delta: the largest pi-norm over images of unit-ball generators."""
    return max(pi_norm(C.comultiply(g), max_points).value for _, g in unit_ball_generators(C.base))


# --- pairing with Lipschitz functions ---------------------------------------------


def _fn(g) -> Callable[[str], Scalar]:
    if callable(g):
        return g
    return lambda p: to_scalar(g[p])


def pair_tensor(t: TensorElement, g, h) -> Scalar:
    """``<t, g (x) h> = sum t(p, q) g(p) h(q)``; ``g, h`` are mappings or callables on points."""
    g, h = _fn(g), _fn(h)
    for p in t.base.points:
        g(p), h(p)
    return to_scalar(sum((v * g(p) * h(q) for (p, q), v in t.coeffs.items()), Fraction(0)))


def pair_element(x: FreeElement, g) -> Scalar:
    g = _fn(g)
    return to_scalar(sum((v * g(p) for p, v in x.coeffs.items()), Fraction(0)))


def comultiplication_pairing(x: FreeElement, g, h) -> Scalar:
    """Closed form of ``<Delta x, g (x) h>``: ``sum x(p) g(p) h(p)``."""
    g, h = _fn(g), _fn(h)
    return to_scalar(sum((v * g(p) * h(p) for p, v in x.coeffs.items()), Fraction(0)))


def square_pairing(x: FreeElement, g, h) -> Scalar:
    """Closed form of ``<x (x) x, g (x) h>``: ``(sum x g) (sum x h)``."""
    return to_scalar(pair_element(x, g) * pair_element(x, h))
