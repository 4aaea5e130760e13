from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import delta, elements
from freebanach import coalgebra as co
from freebanach import free_space as fs
from freebanach.coalgebra import TensorElement
from freebanach.free_space import FreeElement
from freebanach.instances import random_sum_one, random_unit_set, rng_for
from freebanach.normed_set import compress_to_unit, validate_normed_set
from freebanach.scalars import Gaussian


@pytest.fixture
def C2(two_point):
    return co.make_coalgebra(two_point)


def unit_sets(max_size=5):
    return st.builds(lambda seed, n: random_unit_set(rng_for("hyp", seed), n),
                     st.integers(0, 10**6), st.integers(1, max_size))


# --- structure ---------------------------------------------------------------------


def test_make_coalgebra_two_points(C2, two_point):
    assert C2.epsilon_row() == [1, 1]
    assert C2.counit_identities_hold() and C2.coassociative()
    assert fs.operator_norm(C2.epsilon) == 1
    assert C2.comultiply(delta(two_point, "p")) == TensorElement(two_point, {("p", "p"): 1})
    assert C2.delta_matrix() == [[1, 0], [0, 0], [0, 0], [0, 1]]


def test_make_coalgebra_rejects():
    far = validate_normed_set(["p", "q"], [[0, 3], [3, 0]], [F(3, 2), F(3, 2)])
    with pytest.raises(co.CoalgebraError) as exc:
        co.make_coalgebra(far)
    assert exc.value.offending == [("p",), ("q",)]
    too_far = validate_normed_set(["p", "q"], [[0, 3], [3, 0]], [2, 1])
    with pytest.raises(co.CoalgebraError):
        co.make_coalgebra(too_far)


def test_make_coalgebra_singleton():
    C = co.make_coalgebra(validate_normed_set(["p"], [[0]], [1]))
    assert C.counit_identities_hold() and C.coassociative()
    assert [x.coeffs for x in co.solve_grouplikes(C)] == [{"p": 1}]


# --- pi norm ----------------------------------------------------------------------


def test_pi_norm_simple_tensor(two_point):
    t = TensorElement.tensor(delta(two_point, "p"), delta(two_point, "q"))
    r = co.pi_norm(t)
    assert r.value == 1
    assert co.check_pi_certificates(t, r) == []
    # independent lower bound from the product functional f = (1, 0), g = (0, 1)
    w = co.BilinearWitness.from_functions(two_point, {"p": 1, "q": 0}, {"p": 0, "q": 1})
    assert w.violations(two_point) == [] and w.pair(t) == 1


def test_pi_norm_zero_and_guard(two_point):
    assert co.pi_norm(TensorElement(two_point)).value == 0
    U = random_unit_set(rng_for("guard"), 9)
    if len(U) > 8:
        with pytest.raises(ValueError):
            co.pi_norm(TensorElement(U, {(U.points[0], U.points[0]): 1}))
    with pytest.raises(ValueError):
        co.pi_norm(TensorElement(two_point, {("p", "p"): 1}), max_points=1)


def test_midpoint_defect(C2, two_point):
    x = (delta(two_point, "p") + delta(two_point, "q")) / 2
    rep = co.grouplike_defect(C2, x)
    m = delta(two_point, "p") - delta(two_point, "q")
    assert rep.tensor_defect == TensorElement.tensor(m, m) * F(-1, 4)
    assert rep.counit_defect == 0 and not rep.is_zero
    assert rep.norm == F(1, 4)
    w = co.BilinearWitness.from_functions(two_point, {"p": F(1, 2), "q": F(-1, 2)},
                                          {"p": F(-1, 2), "q": F(1, 2)})
    assert w.violations(two_point) == [] and w.pair(rep.tensor_defect) == F(1, 4)
    assert co.check_pi_certificates(rep.tensor_defect, rep.pi) == []


def test_defect_at_points_and_multiples(C2, two_point):
    rep = co.grouplike_defect(C2, delta(two_point, "p"))
    assert rep.is_zero and rep.norm == 0
    rep = co.grouplike_defect(C2, delta(two_point, "p") * 2)
    assert rep.tensor_defect == TensorElement(two_point, {("p", "p"): 2})
    assert rep.counit_defect == 1
    assert rep.norm == 2


def test_complex_defect(C2, two_point):
    # conjugate coefficients give a real defect, exact norm
    x = FreeElement(two_point, {"p": Gaussian(F(1, 2), 1), "q": Gaussian(F(1, 2), -1)})
    assert co.grouplike_defect(C2, x).norm == F(5, 4)
    x = FreeElement(two_point, {"p": Gaussian(1, 1), "q": Gaussian(0, -1)})
    rep = co.grouplike_defect(C2, x)
    assert not rep.is_zero and rep.norm is None
    assert rep.counit_defect == 0
    lo, hi = rep.norm_bounds
    re = co.pi_norm(rep.tensor_defect.real()).value
    im = co.pi_norm(rep.tensor_defect.imag()).value
    assert (lo, hi) == (max(re, im), re + im) and 0 < lo
    ind = co.grouplike_defect(C2, FreeElement(two_point, {"p": Gaussian(1, 0)}))
    assert ind.is_zero


# --- group-likes ------------------------------------------------------------------


def sympy_grouplikes(C):
    sympy = pytest.importorskip("sympy")
    xs = sympy.symbols(f"x0:{len(C.base)}")
    eqs = [xs[i] * xs[j] - (xs[i] if i == j else 0) for i in range(len(xs)) for j in range(len(xs))]
    eqs.append(sum(xs) - 1)
    sols = sympy.solve(eqs, xs, dict=True)
    return sorted(tuple(F(int(s[v])) for v in xs) for s in sols)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_grouplikes_against_sympy(n):
    U = random_unit_set(rng_for("gl", n), n)
    C = co.make_coalgebra(U)
    mine = sorted(x.vector() for x in co.solve_grouplikes(C))
    assert [tuple(v) for v in mine] == sympy_grouplikes(C)


def test_grouplikes_are_the_points():
    K, _ = compress_to_unit([(0, 0), (1, 0), (0, 3)], ["a", "b", "c"])
    C = co.make_coalgebra(K)
    assert co.solve_grouplikes(C) == [delta(K, p) for p in K.points]


# --- pairings ---------------------------------------------------------------------


def test_pairing_example(two_point):
    x = (delta(two_point, "p") + delta(two_point, "q")) / 2
    ind = {"p": 1, "q": 0}
    C = co.make_coalgebra(two_point)
    assert co.pair_tensor(C.comultiply(x), ind, ind) == co.comultiplication_pairing(x, ind, ind) == F(1, 2)
    assert co.pair_tensor(TensorElement.tensor(x, x), ind, ind) == co.square_pairing(x, ind, ind) == F(1, 4)


@given(unit_sets(4), st.data())
def test_pairing_closed_forms_and_bilinearity(U, data):
    C = co.make_coalgebra(U)
    x, y = data.draw(elements(U)), data.draw(elements(U))
    vals = st.fractions(-3, 3, max_denominator=4)
    g = {p: data.draw(vals) for p in U.points}
    h = {p: data.draw(vals) for p in U.points}
    assert co.pair_tensor(C.comultiply(x), g, h) == co.comultiplication_pairing(x, g, h)
    assert co.pair_tensor(TensorElement.tensor(x, x), g, h) == co.square_pairing(x, g, h)
    c = data.draw(vals)
    lhs = co.pair_tensor(TensorElement.tensor(x + y * c, x), g, h)
    rhs = co.pair_tensor(TensorElement.tensor(x, x), g, h) + c * co.pair_tensor(TensorElement.tensor(y, x), g, h)
    assert lhs == rhs


# --- properties -------------------------------------------------------------------


@given(unit_sets(4), st.data())
def test_cross_norm(U, data):
    u, v = data.draw(elements(U)), data.draw(elements(U))
    t = TensorElement.tensor(u, v)
    r = co.pi_norm(t)
    assert r.value == fs.norm(u).value * fs.norm(v).value
    assert co.check_pi_certificates(t, r) == []


@given(unit_sets(5), st.integers(0, 10**6))
def test_defect_vanishes_exactly_on_points(U, seed):
    C = co.make_coalgebra(U)
    assert C.counit_identities_hold() and C.coassociative()
    for p in U.points:
        assert co.grouplike_defect(C, delta(U, p), with_norm=False).is_zero
    if len(U) > 1:
        rng = rng_for("defect", seed)
        for complex_field in (False, True):
            x = random_sum_one(rng, U, complex_field)
            assert not co.grouplike_defect(C, x, with_norm=False).is_zero


def test_comultiplication_norm_at_least_one():
    for i in range(5):
        C = co.make_coalgebra(random_unit_set(rng_for("dnorm", i), 3))
        assert co.comultiplication_norm(C) >= 1
