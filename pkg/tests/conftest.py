from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from freebanach.free_space import FreeElement
from freebanach.instances import perturb, rng_for
from freebanach.lp import OPTIMAL, LinearProgram, brute_force_oracle
from freebanach.normed_set import from_coordinates, validate_normed_set

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

F = Fraction


@pytest.fixture
def two_point():
    return validate_normed_set(["p", "q"], [[0, 1], [1, 0]], [1, 1])


@pytest.fixture
def three_point():
    return validate_normed_set(["a", "b", "c"], [[0, 1, 2], [1, 0, 1], [2, 1, 0]], [1, 1, 1])


def delta(X, p):
    return FreeElement.delta(X, p)


@st.composite
def grid_sets(draw, min_size=1, max_size=6, dim=2):
    pts = draw(st.lists(st.tuples(*[st.integers(-4, 4)] * dim), min_size=min_size, max_size=max_size,
                        unique=True))
    den = draw(st.integers(1, 3))
    return from_coordinates({f"x{i}": [F(c, den) for c in p] for i, p in enumerate(pts)})


@st.composite
def normed_sets(draw, min_size=1, max_size=6):
    """Grid sets moved around inside their norm-pair slack."""
    X = draw(grid_sets(min_size, max_size))
    return perturb(draw(st.randoms(use_true_random=False)), X, draw(st.integers(0, 4)))


@st.composite
def elements(draw, X, max_coeff=4):
    usable = [p for p, a in zip(X.points, X.alpha) if a > 0]
    coeffs = {p: F(draw(st.integers(-max_coeff, max_coeff)), draw(st.integers(1, max_coeff))) for p in usable
              if draw(st.booleans())}
    return FreeElement(X, coeffs)


# --- independent oracles ---------------------------------------------------------


def oracle_norm(X, coeffs):
    """Basis enumeration on a separately assembled decomposition LP (n <= 3)."""
    P = X.points
    n = len(P)
    cols, cost = [], []
    for i in range(n):
        for j in range(n):
            if i != j:
                cols.append([int(r == i) - int(r == j) for r in range(n)])
                cost.append(X.rho[i][j])
    for i in range(n):
        for s in (1, -1):
            cols.append([s * int(r == i) for r in range(n)])
            cost.append(X.alpha[i])
    A = [[col[r] for col in cols] for r in range(n)]
    sol = brute_force_oracle(LinearProgram(cost, A, [F(coeffs.get(p, 0)) for p in P]))
    assert sol.status == OPTIMAL
    return sol.value


def beale():
    # Beale's cycling example with slacks x1..x3 (columns 0..2); optimum -5/4
    c = [0, 0, 0, F(-3, 4), 20, F(-1, 2), 6]
    A = [[1, 0, 0, F(1, 4), -8, -1, 9],
         [0, 1, 0, F(1, 2), -12, F(-1, 2), 3],
         [0, 0, 1, 0, 0, 1, 0]]
    return LinearProgram(c, A, [0, 0, 1])


def kuhn():
    c = [-2, -3, 1, 12, 0, 0, 0]
    A = [[-2, -9, 1, 9, 1, 0, 0],
         [F(1, 3), 1, F(-1, 3), -2, 0, 1, 0],
         [2, 3, -1, -12, 0, 0, 1]]
    return LinearProgram(c, A, [0, 0, 2])


def degenerate_corpus(count=150):
    """Zero right-hand sides and duplicated rows force stalled pivots."""
    out = []
    for i in range(count):
        rng = rng_for("degenerate", i)
        m, n = rng.randint(2, 4), rng.randint(4, 8)
        A = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(m)]
        if rng.random() < 0.5:
            A[-1] = list(A[0])
        b = [0] * m if rng.random() < 0.7 else [rng.randint(0, 1) for _ in range(m)]
        c = [rng.randint(-2, 2) for _ in range(n)]
        out.append(LinearProgram(c, A, b))
    return out
