"""Named Bell operators and the JSON Bell-operator file format.

A Bell-operator record names its generators in one of four ways and its terms
in one of two::

    {"generators": ["XZII", ...] | "graph": {"n": 4, "edges": [[1, 2], ...]}
     | "graph": {"family": "linear", "n": 4} | "code": "steane",
     "expression": "g1*(I+g2)" | "terms": ["+XIXZ", {"sign": -1, "pauli": "ZYXY"}]}

``{"builtin": "lc4"}`` loads an entry of :data:`OPERATORS`.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import graph as graphs
from .bellop import BellOperator, from_pauli_terms, parse_expression
from .stabilizer import GeneratorSet, builtin_code
from .statevec import build_graph_state, codeword

OPERATORS: dict[str, dict] = {
    "lc4": {"graph": {"family": "linear", "n": 4}, "terms": ["+XIXZ", "+ZYYZ", "+XIYY", "-ZYXY"]},
    "lc6": {"graph": {"family": "linear", "n": 6}, "expression": "g2*g5*(I+g1)*(I+g3)*(I+g4)*(I+g6)"},
    "five_qubit": {"code": "five_qubit", "expression": "g4*g1*(I+g3) + g2*(g1+g3) + g1"},
    "steane": {"code": "steane", "expression": "g2*g1*(I+g4+g5*g4) + g5*g3*(g1+g2) + g5"},
    "ghz5": {"graph": {"family": "star", "n": 5}, "expression": "g1*(I+g2)*(I+g3)*(I+g4)*(I+g5)"},
    "lc4_b1": {"graph": {"family": "linear", "n": 4}, "expression": "(I+g1)*g2*(I+g3)"},
    "lc4_b2": {"graph": {"family": "linear", "n": 4}, "expression": "(I+g1)*g2*(I+g3*g4)"},
    "lc4_b3": {"graph": {"family": "linear", "n": 4}, "expression": "(I+g1)*g2*(g3+g4)"},
}


def graph_from_record(rec: dict) -> graphs.Graph:
    if "family" in rec:
        return graphs.family(rec["family"], int(rec["n"]))
    return graphs.Graph.from_dict(rec)


def generators_from_record(data: dict) -> GeneratorSet:
    sources = [k for k in ("generators", "graph", "code") if k in data]
    if len(sources) != 1:
        raise ValueError("a Bell-operator record needs exactly one of 'generators', 'graph', 'code'")
    src = sources[0]
    if src == "generators":
        return GeneratorSet(data["generators"])
    if src == "graph":
        return graphs.generators(graph_from_record(data["graph"]))
    return builtin_code(data["code"]).generators


def load_operator(data: dict) -> BellOperator:
    if "builtin" in data:
        return operator(data["builtin"])
    gs = generators_from_record(data)
    if ("expression" in data) == ("terms" in data):
        raise ValueError("a Bell-operator record needs exactly one of 'expression', 'terms'")
    if "expression" in data:
        return parse_expression(data["expression"], gs)
    terms = []
    for t in data["terms"]:
        if isinstance(t, dict):
            terms.append((int(t.get("sign", 1)), t["pauli"]))
        else:
            terms.append(t)
    return from_pauli_terms(terms, gs)


def load_operator_file(path: str | Path) -> BellOperator:
    return load_operator(json.loads(Path(path).read_text()))


def operator(name: str) -> BellOperator:
    try:
        rec = OPERATORS[name]
    except KeyError:
        raise ValueError(f"unknown operator {name!r}; choose from {', '.join(OPERATORS)}") from None
    return load_operator(rec)


def reference_state(name: str) -> np.ndarray:
    """The all-+1 state of a named operator: graph state or logical ``|0>``."""
    rec = OPERATORS[name]
    if "graph" in rec:
        return build_graph_state(graph_from_record(rec["graph"]))
    return codeword(builtin_code(rec["code"]), 0)
