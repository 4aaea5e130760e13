import json
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import delta, elements, normed_sets
from freebanach import coalgebra as co
from freebanach import free_space as fs
from freebanach import serialize as sz
from freebanach.free_space import FreeElement
from freebanach.normed_set import CoordinateSpace, NormedSetError
from freebanach.scalars import Gaussian


def through_text(obj):
    return json.loads(sz.dumps(obj))


@given(normed_sets())
def test_normed_set_round_trip(X):
    assert sz.normed_set_from_json(through_text(sz.normed_set_to_json(X))) == X


@given(normed_sets(max_size=5), st.data())
def test_norm_result_round_trip(X, data):
    x = data.draw(elements(X))
    r = fs.norm(x)
    back = sz.norm_result_from_json(through_text(sz.norm_result_to_json(r)))
    assert back.value == r.value and back.witness == r.witness
    assert back.decomposition.element(X) == x
    assert sz.element_from_json(through_text(sz.element_to_json(x, include_space=True))) == x


def test_complex_element_and_tensor(two_point):
    x = FreeElement(two_point, {"p": Gaussian(F(1, 2), -1), "q": 3})
    obj = through_text(sz.element_to_json(x))
    assert obj["coeffs"] == {"p": {"re": "1/2", "im": -1}, "q": 3}
    assert sz.element_from_json(obj, two_point) == x
    t = co.TensorElement.tensor(x, delta(two_point, "q"))
    assert sz.tensor_from_json(through_text(sz.tensor_to_json(t)), two_point) == t


def test_pi_result_round_trip(two_point):
    m = delta(two_point, "p") - delta(two_point, "q")
    t = co.TensorElement.tensor(m, m)
    r = co.pi_norm(t)
    back = sz.pi_result_from_json(through_text(sz.pi_result_to_json(r)))
    assert back.value == 1 and co.check_pi_certificates(t, back) == []


def test_operator_round_trip(three_point):
    T = fs.truncation_operator(["p", "q"], [[0, 5], [5, 0]], "p")
    assert sz.operator_from_json(through_text(sz.operator_to_json(T))) == T
    S = fs.extend_lipschitz(three_point, {"a": (F(-1, 2),), "b": (F(1, 2),), "c": (1,)}, CoordinateSpace(1), 1)
    assert sz.operator_from_json(through_text(sz.operator_to_json(S))) == S


def test_space_reference_by_path(tmp_path, two_point):
    (tmp_path / "X.json").write_text(sz.dumps(sz.normed_set_to_json(two_point)))
    (tmp_path / "x.json").write_text(sz.dumps({"space": "X.json", "coeffs": {"p": "1/2"}}))
    x = sz.element_from_json(sz.load_json(tmp_path / "x.json"), relative_to=tmp_path)
    assert x == delta(two_point, "p") / 2


def test_parse_errors(tmp_path, two_point):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(sz.ParseError):
        sz.load_json(bad)
    with pytest.raises(sz.ParseError):
        sz.load_json(tmp_path / "missing.json")
    with pytest.raises(sz.ParseError):
        sz.normed_set_from_json({"points": ["p"], "rho": [[0.5]], "alpha": [1]})
    with pytest.raises(sz.ParseError):
        sz.normed_set_from_json({"points": ["p"], "rho": [[0]]})
    with pytest.raises(sz.ParseError):
        sz.element_from_json({"coeffs": {"z": 1}}, two_point)
    with pytest.raises(sz.ParseError):
        sz.element_from_json({"coeffs": {"p": 1}})
    with pytest.raises(sz.ParseError):
        sz.tensor_from_json({"coeffs": {"pq": 1}}, two_point)
    with pytest.raises(sz.ParseError):
        sz.target_from_json({"coordinate_dim": 0})
    with pytest.raises(NormedSetError):
        sz.normed_set_from_json({"points": ["p", "q"], "rho": [[0, 3], [3, 0]], "alpha": [1, 1]})
