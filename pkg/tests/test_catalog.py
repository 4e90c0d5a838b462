import json

import pytest

from maxnonlocal import catalog


@pytest.mark.parametrize("name", list(catalog.OPERATORS))
def test_named_operators_load_and_reach_maximum(name):
    from maxnonlocal.statevec import expectation

    b = catalog.operator(name)
    assert abs(expectation(b, catalog.reference_state(name)) - b.m) < 1e-10


def test_builtin_record():
    assert catalog.load_operator({"builtin": "lc4"}).terms == catalog.operator("lc4").terms


def test_record_needs_one_source():
    with pytest.raises(ValueError, match="exactly one"):
        catalog.load_operator({"code": "steane", "generators": ["XX"], "expression": "g1"})
    with pytest.raises(ValueError, match="exactly one"):
        catalog.load_operator({"code": "steane"})


def test_unknown_name():
    with pytest.raises(ValueError, match="unknown operator"):
        catalog.operator("lc9")


def test_file_round_trip(tmp_path):
    path = tmp_path / "b.json"
    path.write_text(json.dumps({"graph": {"family": "star", "n": 3}, "expression": "g1*(I+g2)*(I+g3)"}))
    b = catalog.load_operator_file(path)
    assert b.m == 4 and b.expression == "g1*(I+g2)*(I+g3)"
