import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxnonlocal import catalog, graph
from maxnonlocal.bellop import (
    BellOperator,
    ExpressionError,
    contradiction_check,
    find_contradiction,
    from_pauli_terms,
    local_bound,
    local_value,
    parse_expression,
    search_bell_operators,
)
from maxnonlocal.pauli import PauliString, product
from maxnonlocal.stabilizer import group_elements, subset_of_mask
from maxnonlocal.statevec import build_graph_state, expectation

LC4 = graph.generators(graph.family("linear", 4))


def brute_force_q(b: BellOperator) -> int:
    """Enumerate every +-1 assignment to the occurring (qubit, letter) pairs at once."""
    pairs = sorted({(j, p.letter(j)) for p in b.pauli_terms for j in p.support})
    idx = {p: i for i, p in enumerate(pairs)}
    grid = 1 - 2 * ((np.arange(1 << len(pairs))[:, None] >> np.arange(len(pairs))) & 1)
    total = np.zeros(grid.shape[0], dtype=int)
    for p in b.pauli_terms:
        val = np.full(grid.shape[0], p.sign)
        for j in p.support:
            val = val * grid[:, idx[(j, p.letter(j))]]
        total += val > 0
    return int(total.max())


# parsing ----------------------------------------------------------------------


def test_lc4_terms():
    b = catalog.operator("lc4")
    assert [sorted(S) for _, S in b.terms] == [[1, 3], [2, 3], [1, 3, 4], [2, 3, 4]]
    assert all(s == 1 for s, _ in b.terms)
    assert [str(p) for p in b.pauli_terms] == ["+XIXZ", "+ZYYZ", "+XIYY", "-ZYXY"]


def test_expression_matches_terms():
    b = parse_expression("g3*(g1+g2)*(I+g4)", LC4)
    assert set(b.terms) == set(catalog.operator("lc4").terms)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("g1", [(1, {1})]),
        ("-g1 + g2", [(-1, {1}), (1, {2})]),
        ("g1 g2", [(1, {1, 2})]),
        ("1 + g1*g1*g2", [(1, set()), (1, {2})]),
        ("(g1 - g2)*(I - g3)", [(1, {1}), (-1, {1, 3}), (-1, {2}), (1, {2, 3})]),
        ("-(I + g1)", [(-1, set()), (-1, {1})]),
    ],
)
def test_grammar(text, expected):
    b = parse_expression(text, LC4)
    assert [(s, set(S)) for s, S in b.terms] == expected


@pytest.mark.parametrize(
    "text,pos",
    [("g1 +", 4), ("g5", 0), ("g1 & g2", 3), ("(g1 + g2", 8), ("g", 1), ("g1 )", 3)],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ExpressionError) as info:
        parse_expression(text, LC4)
    assert info.value.position == pos


def test_duplicate_expansion_rejected():
    with pytest.raises(ExpressionError, match="repeats"):
        parse_expression("g1*(I+g2) + g1", LC4)


def test_from_pauli_terms_rejects_outsider():
    with pytest.raises(ValueError):
        from_pauli_terms(["XXXX"], LC4)


def test_lc6_expansion():
    b = catalog.operator("lc6")
    assert b.m == 16
    assert len({S for _, S in b.terms}) == 16


# local bound ------------------------------------------------------------------


@pytest.mark.parametrize(
    "name,m,L",
    [("lc4", 4, 2), ("lc6", 16, 4), ("five_qubit", 5, 3), ("steane", 6, 4), ("ghz5", 16, 4),
     ("lc4_b1", 4, 2), ("lc4_b2", 4, 2), ("lc4_b3", 4, 2)],
)
def test_named_bounds(name, m, L):
    b = catalog.operator(name)
    r = local_bound(b)
    assert (r.m, r.local_bound) == (m, L)
    assert r.degree == m / L


@pytest.mark.parametrize("name", ["lc4", "five_qubit", "steane", "lc4_b1", "lc4_b2", "lc4_b3"])
def test_bound_matches_brute_force(name):
    b = catalog.operator(name)
    assert local_bound(b).q == brute_force_q(b)


@pytest.mark.parametrize("name", list(catalog.OPERATORS))
def test_witness_reproduces_q(name):
    b = catalog.operator(name)
    r = local_bound(b)
    assert sum(v > 0 for v in local_value(b, r.witness)) == r.q


@pytest.mark.parametrize("name", ["lc4", "lc6", "five_qubit", "steane", "ghz5"])
def test_z_plus_tip_agrees(name):
    b = catalog.operator(name)
    tip = local_bound(b, use_z_plus_tip=True)
    assert tip.heuristic
    assert tip.q == local_bound(b).q
    assert sum(v > 0 for v in local_value(b, tip.witness)) == tip.q


def test_lc4_bound_is_fast():
    t = time.perf_counter()
    local_bound(catalog.operator("lc4"))
    assert time.perf_counter() - t < 1.0


_LC4_ELEMENTS = group_elements(LC4)


@st.composite
def lc4_operators(draw):
    masks = draw(st.lists(st.integers(1, 15), min_size=1, max_size=10, unique=True))
    signs = draw(st.lists(st.sampled_from([1, -1]), min_size=len(masks), max_size=len(masks)))
    return BellOperator(LC4, tuple((s, subset_of_mask(m)) for s, m in zip(signs, masks)))


@settings(max_examples=300)
@given(lc4_operators())
def test_bound_oracle_property(b):
    r = local_bound(b)
    assert r.q == brute_force_q(b)
    assert sum(v > 0 for v in local_value(b, r.witness)) == r.q


@settings(max_examples=300)
@given(lc4_operators())
def test_contradiction_iff_below_maximum(b):
    # a sign pattern is realisable by local values exactly when no
    # contradiction exists, so q = m iff find_contradiction is None
    found = find_contradiction(b)
    assert (found is None) == (brute_force_q(b) == b.m)
    if found is not None:
        chosen = [b.pauli_terms[i] for i in found]
        assert np.prod([p.sign for p in chosen]) == -1
        # generator content cancels, so the words multiply to -(product of subset signs)
        subset_signs = int(np.prod([b.terms[i][0] for i in found]))
        assert product([p.unsigned() for p in chosen], n=4) == PauliString.identity(4).with_sign(-subset_signs)


def test_lc4_contradiction():
    b = catalog.operator("lc4")
    assert contradiction_check(b)
    assert find_contradiction(b) == (0, 1, 2, 3)


# search -----------------------------------------------------------------------


def test_search_results_reach_maximum_and_sort():
    results = search_bell_operators(LC4, max_m=4, min_degree=1.5)
    assert results
    degrees = [r.degree for r in results]
    assert degrees == sorted(degrees, reverse=True)
    v = build_graph_state(graph.family("linear", 4))
    for r in results[:20]:
        assert abs(expectation(r.operator, v) - r.m) < 1e-10
        assert r.q == brute_force_q(r.operator)
    lc4 = catalog.operator("lc4")
    assert any(r.operator.terms == lc4.terms for r in results)


def test_search_full_group_degree():
    full = BellOperator(LC4, tuple((1, subset_of_mask(m)) for m in range(16)))
    q = brute_force_q(full)
    assert (q, 2 * q - 16) == (14, 12)
    results = search_bell_operators(LC4, max_m=16, min_degree=1.0 + 1e-9)
    assert any(r.m == 16 for r in results)


def test_search_guard():
    big = graph.generators(graph.family("linear", 5))
    with pytest.raises(ValueError, match="guard"):
        search_bell_operators(big, max_m=3, min_degree=1.0)
