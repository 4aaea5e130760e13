"""Exact rational linear programming.

Problems have the form ``minimize c.x  subject to  A x = b,  x >= 0`` where the
variables listed in ``free`` carry no sign constraint.  :func:`lp_solve` is a
revised simplex method over exact rationals returning primal and dual
certificates; :func:`brute_force_oracle` enumerates bases and is meant only as
an independent cross-check on small problems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from gmpy2 import mpq

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

ORACLE_GUARD = 12


@dataclass(frozen=True)
class LinearProgram:
    c: tuple[Fraction, ...]
    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    free: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(Fraction(v) for v in self.c))
        object.__setattr__(self, "A", tuple(tuple(Fraction(v) for v in row) for row in self.A))
        object.__setattr__(self, "b", tuple(Fraction(v) for v in self.b))
        object.__setattr__(self, "free", frozenset(self.free))
        n = len(self.c)
        if len(self.A) != len(self.b):
            raise ValueError(f"A has {len(self.A)} rows but b has {len(self.b)} entries")
        for i, row in enumerate(self.A):
            if len(row) != n:
                raise ValueError(f"row {i} of A has {len(row)} entries, expected {n}")
        if any(not 0 <= j < n for j in self.free):
            raise ValueError("free variable index out of range")

    @property
    def shape(self):
        return len(self.b), len(self.c)


@dataclass(frozen=True)
class LpSolution:
    """Solver verdict with certificates.

    * optimal: ``primal`` and ``dual`` (``A^T y <= c`` with equality on free
      columns) with ``c.x == b.y == value``.
    * infeasible: ``ray`` is a Farkas vector ``y`` with ``A^T y <= 0`` (``= 0`` on
      free columns) and ``b.y > 0``.
    * unbounded: ``primal`` is feasible and ``ray`` is a direction ``d`` with
      ``A d = 0``, ``d >= 0`` off the free columns and ``c.d < 0``.
    """

    status: str
    primal: tuple[Fraction, ...] | None = None
    dual: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    ray: tuple[Fraction, ...] | None = None
    pivots: int = field(default=0, compare=False)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def check_solution(lp: LinearProgram, sol: LpSolution) -> list[str]:
    """Re-verify a solution's certificate from scratch; returns the failures."""
    m, n = lp.shape
    errs: list[str] = []
    cols = list(zip(*lp.A)) if m else [()] * n
    if sol.status == OPTIMAL:
        x, y = sol.primal, sol.dual
        if x is None or y is None or len(x) != n or len(y) != m:
            return ["missing or mis-sized certificate"]
        for i in range(m):
            if _dot(lp.A[i], x) != lp.b[i]:
                errs.append(f"primal row {i} violated")
        for j in range(n):
            if j not in lp.free and x[j] < 0:
                errs.append(f"x[{j}] < 0")
            red = lp.c[j] - _dot(cols[j], y)
            if j in lp.free and red != 0:
                errs.append(f"dual equality on free column {j} violated")
            if red < 0:
                errs.append(f"dual column {j} violated")
            if j not in lp.free and x[j] != 0 and red != 0:
                errs.append(f"complementary slackness fails at {j}")
        if _dot(lp.c, x) != sol.value or _dot(lp.b, y) != sol.value:
            errs.append("objective values disagree")
    elif sol.status == INFEASIBLE:
        y = sol.ray
        if y is None or len(y) != m:
            return ["missing Farkas certificate"]
        for j in range(n):
            s = _dot(cols[j], y)
            if s > 0 or (j in lp.free and s != 0):
                errs.append(f"Farkas column {j} violated")
        if _dot(lp.b, y) <= 0:
            errs.append("Farkas b.y is not positive")
    elif sol.status == UNBOUNDED:
        x, d = sol.primal, sol.ray
        if x is None or d is None:
            return ["missing unboundedness certificate"]
        for i in range(m):
            if _dot(lp.A[i], x) != lp.b[i]:
                errs.append(f"primal row {i} violated")
            if _dot(lp.A[i], d) != 0:
                errs.append(f"direction row {i} violated")
        for j in range(n):
            if j not in lp.free and (x[j] < 0 or d[j] < 0):
                errs.append(f"sign violated at {j}")
        if _dot(lp.c, d) >= 0:
            errs.append("direction does not decrease the objective")
    else:
        errs.append(f"unknown status {sol.status!r}")
    return errs


class _Simplex:
    """Revised simplex on ``min c.x, A x = b, x >= 0`` with ``b >= 0``.

    Columns are sparse ``{row: value}`` dicts.  Columns ``N..N+m-1`` are
    artificial unit columns.  ``Binv`` is kept dense.
    """

    def __init__(self, cols, b, m, N):
        self.cols = cols
        self.m = m
        self.N = N
        self.b = b
        self.basis: list[int] = []
        self.Binv: list[list] = []
        self.xB: list = []
        self.pivots = 0

    def column(self, j):
        if j >= self.N:
            return {j - self.N: mpq(1)}
        return self.cols[j]

    def ftran(self, col):
        m, Binv = self.m, self.Binv
        u = [mpq(0)] * m
        for r, v in col.items():
            for i in range(m):
                bi = Binv[i][r]
                if bi:
                    u[i] += bi * v
        return u

    def duals(self, cost):
        m, Binv = self.m, self.Binv
        y = [mpq(0)] * m
        for i, j in enumerate(self.basis):
            cj = cost(j)
            if cj:
                row = Binv[i]
                for r in range(m):
                    if row[r]:
                        y[r] += cj * row[r]
        return y

    def pivot(self, r, j, u):
        m, Binv = self.m, self.Binv
        piv = u[r]
        prow = [v / piv for v in Binv[r]]
        Binv[r] = prow
        xr = self.xB[r] / piv
        self.xB[r] = xr
        for i in range(m):
            if i != r and u[i]:
                f = u[i]
                row = Binv[i]
                for k in range(m):
                    if prow[k]:
                        row[k] -= f * prow[k]
                self.xB[i] -= f * xr
        self.basis[r] = j
        self.pivots += 1

    def run(self, cost, allowed):
        """Iterate to optimality.  Returns ``None`` or an unbounded column ``(j, u)``.

        Entering: most negative reduced cost; after a degenerate pivot, Bland's
        lowest-index rule until the next nondegenerate pivot (no cycling).
        Leaving: minimum ratio, ties broken by lowest variable index.
        """
        bland = False
        while True:
            y = self.duals(cost)
            inbasis = set(self.basis)
            enter, best = None, None
            for j in allowed:
                if j in inbasis:
                    continue
                col = self.column(j)
                d = cost(j)
                for r, v in col.items():
                    if y[r]:
                        d -= y[r] * v
                if d < 0:
                    if bland:
                        enter = j
                        break
                    if best is None or d < best:
                        enter, best = j, d
            if enter is None:
                return None
            u = self.ftran(self.column(enter))
            leave, ratio = None, None
            for i in range(self.m):
                if u[i] > 0:
                    t = self.xB[i] / u[i]
                    if ratio is None or t < ratio or (t == ratio and self.basis[i] < self.basis[leave]):
                        leave, ratio = i, t
            if leave is None:
                return enter, u
            bland = ratio == 0
            self.pivot(leave, enter, u)


def lp_solve(lp: LinearProgram) -> LpSolution:
    """Solve ``lp`` exactly; deterministic for a given input."""
    m, n0 = lp.shape
    # split free variables: x_j = x_j^+ - x_j^-; the negative part is appended
    free = sorted(lp.free)
    neg_of = {j: n0 + k for k, j in enumerate(free)}
    N = n0 + len(free)
    sign = [(-1 if v < 0 else 1) for v in lp.b]
    b = [mpq(abs(v.numerator), v.denominator) for v in lp.b]
    cols: list[dict] = [dict() for _ in range(N)]
    for i, row in enumerate(lp.A):
        s = sign[i]
        for j, v in enumerate(row):
            if v:
                q = mpq(v.numerator, v.denominator) * s
                cols[j][i] = q
                if j in neg_of:
                    cols[neg_of[j]][i] = -q
    c = [mpq(v.numerator, v.denominator) for v in lp.c] + [-mpq(lp.c[j].numerator, lp.c[j].denominator) for j in free]

    S = _Simplex(cols, b, m, N)
    # crash basis: single-entry columns with positive value stand in for artificials
    basis = [N + i for i in range(m)]
    for j in range(N):
        col = cols[j]
        if len(col) == 1:
            (r, v), = col.items()
            if v > 0 and basis[r] >= N:
                basis[r] = j
    S.basis = basis
    S.Binv = [[mpq(0)] * m for _ in range(m)]
    S.xB = [mpq(0)] * m
    for i, j in enumerate(basis):
        v = cols[j][i] if j < N else mpq(1)
        S.Binv[i][i] = 1 / v
        S.xB[i] = b[i] / v

    real = range(N)
    if any(j >= N for j in basis):
        def phase1_cost(j):
            return mpq(1) if j >= N else mpq(0)
        S.run(phase1_cost, real)
        infeas = sum((S.xB[i] for i, j in enumerate(S.basis) if j >= N), mpq(0))
        if infeas > 0:
            y = S.duals(phase1_cost)
            ray = tuple(_frac(y[i]) * sign[i] for i in range(m))
            return LpSolution(INFEASIBLE, ray=ray, pivots=S.pivots)
        # drive zero-level artificials out where possible; the rest sit on redundant rows
        for r in range(m):
            if S.basis[r] < N:
                continue
            inbasis = set(S.basis)
            for j in real:
                if j in inbasis:
                    continue
                u = S.ftran(cols[j])
                if u[r]:
                    S.pivot(r, j, u)
                    break

    def cost(j):
        return c[j] if j < N else mpq(0)

    ray_col = S.run(cost, real)
    x = [mpq(0)] * N
    for i, j in enumerate(S.basis):
        if j < N:
            x[j] = S.xB[i]

    def fold(v):
        out = [_frac(v[j]) for j in range(n0)]
        for j in free:
            out[j] -= _frac(v[neg_of[j]])
        return tuple(out)

    if ray_col is not None:
        enter, u = ray_col
        d = [mpq(0)] * N
        d[enter] = mpq(1)
        for i, j in enumerate(S.basis):
            if j < N:
                d[j] = -u[i]
        return LpSolution(UNBOUNDED, primal=fold(x), ray=fold(d), pivots=S.pivots)
    y = S.duals(cost)
    dual = tuple(_frac(y[i]) * sign[i] for i in range(m))
    primal = fold(x)
    value = _dot(lp.c, primal)
    return LpSolution(OPTIMAL, primal=primal, dual=dual, value=value, pivots=S.pivots)


# --- brute-force oracle --------------------------------------------------------


def _solve_square(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan on a square system; ``None`` if singular."""
    k = len(M)
    aug = [list(row) + [r] for row, r in zip(M, rhs)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][k] for r in range(k)]


def _row_basis(A, b):
    """Independent rows of ``[A | b]`` restricted to those of ``A``; ``None`` if inconsistent."""
    rows: list[list[Fraction]] = []
    keep: list[int] = []
    reduced: list[tuple[int, list[Fraction]]] = []  # (pivot col, row incl. rhs)
    for i, (row, bi) in enumerate(zip(A, b)):
        v = list(row) + [bi]
        for pc, r in reduced:
            if v[pc] != 0:
                f = v[pc] / r[pc]
                v = [a - f * c for a, c in zip(v, r)]
        pc = next((j for j in range(len(row)) if v[j] != 0), None)
        if pc is None:
            if v[-1] != 0:
                return None
            continue
        reduced.append((pc, v))
        keep.append(i)
        rows.append(list(row))
    return keep


def brute_force_oracle(lp: LinearProgram, guard: int = ORACLE_GUARD) -> LpSolution:
    """Optimum by enumerating basic solutions.

    A basis that is both primal and dual feasible is optimal; a feasible LP
    with no such basis is unbounded; no feasible basis means infeasible.
    Certificates (Farkas / ray) are not produced.
    """
    m0, n0 = lp.shape
    free = sorted(lp.free)
    # standard form: free columns split
    A = [list(row) + [-row[j] for j in free] for row in lp.A]
    c = list(lp.c) + [-lp.c[j] for j in free]
    N = n0 + len(free)
    if N > guard:
        raise ValueError(f"oracle guard exceeded: {N} variables > {guard}")
    keep = _row_basis(A, lp.b)
    if keep is None:
        return LpSolution(INFEASIBLE)
    A = [A[i] for i in keep]
    b = [lp.b[i] for i in keep]
    m = len(keep)
    feasible_seen = None
    for B in combinations(range(N), m):
        M = [[A[i][j] for j in B] for i in range(m)]
        xB = _solve_square(M, b)
        if xB is None or any(v < 0 for v in xB):
            continue
        x = [Fraction(0)] * N
        for j, v in zip(B, xB):
            x[j] = v
        feasible_seen = x
        # duals: y^T B = c_B
        MT = [[A[i][j] for i in range(m)] for j in B]
        y = _solve_square(MT, [c[j] for j in B]) if m else []
        if all(c[j] - sum((A[i][j] * y[i] for i in range(m)), Fraction(0)) >= 0 for j in range(N)):
            full_y = [Fraction(0)] * m0
            for i, yi in zip(keep, y):
                full_y[i] = yi
            primal = [x[j] for j in range(n0)]
            for k, j in enumerate(free):
                primal[j] -= x[n0 + k]
            return LpSolution(OPTIMAL, primal=tuple(primal), dual=tuple(full_y), value=_dot(c, x))
    if feasible_seen is None:
        return LpSolution(INFEASIBLE)
    return LpSolution(UNBOUNDED)
