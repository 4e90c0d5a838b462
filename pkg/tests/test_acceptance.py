"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (``pytest tests/test_acceptance.py -s``) or directly with
``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import math
import sys
import time

import numpy as np
import pytest

from maxnonlocal import catalog, cert, graph, qis
from maxnonlocal.bellop import BellOperator, local_bound
from maxnonlocal.mns import InconsistentConditions, brute_force_solutions, solve
from maxnonlocal.pauli import PauliString, apply_to_state, commutes
from maxnonlocal.stabilizer import builtin_code, decompose, group_elements, subset_of_mask
from maxnonlocal.statevec import (
    basis_state,
    build_graph_state,
    chsh_correlators,
    chsh_fidelity_demo,
    chsh_signs,
    codeword,
    equal_up_to_phase,
    expectation,
    graph_basis_state,
    projector_check,
    singlet,
)

TOL = 1e-10


class Checks:
    def __init__(self):
        self.items: list[tuple[str, bool, str]] = []

    def add(self, label: str, ok: bool, detail: object = "") -> None:
        self.items.append((label, bool(ok), str(detail)))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.items)

    def summary(self) -> str:
        bad = [f"{label} ({detail})" if detail else label for label, ok, detail in self.items if not ok]
        return "; ".join(bad) if bad else f"{len(self.items)} checks"


def _random_pair(rng):
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    return a / np.linalg.norm(a)


def criterion_1() -> Checks:
    c = Checks()
    t = time.perf_counter()
    b = catalog.operator("lc4")
    r = local_bound(b)
    elapsed = time.perf_counter() - t
    c.add("m=4", b.m == 4, b.m)
    c.add("q=3", r.q == 3, r.q)
    c.add("L=2", r.local_bound == 2, r.local_bound)
    c.add("D=2", r.degree == 2, r.degree)
    value = expectation(b, catalog.reference_state("lc4"))
    c.add("<G|B|G>=4", abs(value - 4) < TOL, value)
    c.add("runtime < 1 s", elapsed < 1.0, f"{elapsed:.3f} s")
    return c


def criterion_2() -> Checks:
    c = Checks()
    b = catalog.operator("lc4")
    g = graph.family("linear", 4)
    sols = set(solve(b).solutions)
    c.add("two solutions", sols == {(1, 1, 1, 1), (-1, -1, -1, 1)}, sorted(sols))
    ref = build_graph_state(g)
    z123 = apply_to_state(PauliString.from_letters("ZZZI"), ref)
    c.add("Z1Z2Z3 state", abs(expectation(b, z123) - 4) < TOL, expectation(b, z123))
    rng = np.random.default_rng(2)
    worst = max(abs(expectation(b, a[0] * ref + a[1] * z123) - 4) for a in (_random_pair(rng) for _ in range(10)))
    c.add("10 superpositions", worst < TOL, worst)
    others = [
        expectation(b, graph_basis_state(g, x))
        for x in itertools.product((0, 1), repeat=4)
        if x not in ((0, 0, 0, 0), (1, 1, 1, 0))
    ]
    c.add("14 others below 4", len(others) == 14 and max(others) < 4 - TOL, max(others))
    return c


def criterion_3() -> Checks:
    c = Checks()
    b = catalog.operator("lc6")
    c.add("m=16", b.m == 16 and len({S for _, S in b.terms}) == 16, b.m)
    t = time.perf_counter()
    r = local_bound(b)
    elapsed = time.perf_counter() - t
    c.add("L=4", r.local_bound == 4, r.local_bound)
    d = solve(b)
    c.add("two solutions", len(d.solutions) == 2, len(d.solutions))
    c.add("second label Z2Z5", d.labels[1] == PauliString.from_letters("IZIIZI"), d.labels[1])
    c.add("bound runtime < 30 s", elapsed < 30, f"{elapsed:.2f} s")
    return c


def criterion_4() -> Checks:
    c = Checks()
    b = catalog.operator("five_qubit")
    r = local_bound(b)
    c.add("m=5", b.m == 5, b.m)
    c.add("L=3", r.local_bound == 3, r.local_bound)
    c.add("D=5/3", abs(r.degree - 5 / 3) < 1e-12, r.degree)
    g0, g1 = qis.codewords()  # g1 = XXXXX g0, the literal second codeword
    v0, v1 = expectation(b, g0), expectation(b, g1)
    c.add("|G0> reaches 5", abs(v0 - 5) < TOL, v0)
    c.add("XXXXX|G0> reaches 5", abs(v1 - 5) < TOL, v1)
    rng = np.random.default_rng(4)
    vals = [expectation(b, a[0] * g0 + a[1] * g1) for a in (_random_pair(rng) for _ in range(10))]
    worst = max(abs(v - 5) for v in vals)
    c.add("10 superpositions reach 5", worst < TOL, f"worst deviation {worst:.3f}")
    c.add("MNS dim 2", solve(b).dim == 2, solve(b).dim)
    return c


def criterion_5() -> Checks:
    c = Checks()
    b = catalog.operator("steane")
    r = local_bound(b)
    c.add("L=4", r.local_bound == 4, r.local_bound)
    c.add("MNS dim 8", solve(b).dim == 8, solve(b).dim)
    c.add("m pinned at 6", b.m == 6, b.m)
    code = builtin_code("steane")
    rng = np.random.default_rng(5)
    a = _random_pair(rng)
    space = [codeword(code, 0), codeword(code, 1), a[0] * codeword(code, 0) + a[1] * codeword(code, 1)]
    for err in ("IIIIIIZ", "ZZZIIII"):
        worst = max(abs(expectation(b, apply_to_state(PauliString.from_letters(err), v)) - b.m) for v in space)
        c.add(f"{err} reaches m", worst < TOL, worst)
    return c


def criterion_6() -> Checks:
    c = Checks()
    b = catalog.operator("ghz5")
    r = local_bound(b)
    value = expectation(b, catalog.reference_state("ghz5"))
    c.add("algebraic maximum 16", b.m == 16 and abs(value - 16) < TOL, value)
    c.add("local bound 4", r.local_bound == 4, r.local_bound)
    d = solve(b)
    c.add("unique solution", len(d.solutions) == 1, len(d.solutions))
    c.add("dim 1", d.dim == 1, d.dim)
    return c


def criterion_7() -> Checks:
    c = Checks()
    for n in (4, 6):
        dev = projector_check(graph.generators(graph.family("linear", n)))
        c.add(f"LC{n}", dev < TOL, dev)
    return c


def criterion_8() -> Checks:
    c = Checks()
    rng = np.random.default_rng(8)
    secrets = [qis.random_secret(rng) for _ in range(20)]
    worst = max(
        abs(1 - qis.run_protocol(s, outcomes=bits).recovered_fidelity)
        for bits in itertools.product((0, 1), repeat=4)
        for s in secrets
    )
    c.add("16 branches x 20 secrets", worst < TOL, worst)
    for alice in (0, 1):
        ok = all(equal_up_to_phase(qis.table1_states(alice, s), qis.table1_reference(alice, s) / 4) for s in secrets)
        c.add(f"table 1 row {alice + 1}", ok)
    frames_ok = all(
        tuple(qis.rex_frame(s, (0, *bob, ch)) for ch in (0, 1)) == frames
        for bob, frames in qis.TABLE2_FRAMES.items()
        for s in secrets
    )
    c.add("table 2 branch family", frames_ok)
    leak = 0.0
    for player in qis.PLAYERS:
        ref = qis.player_state(qis.encode_secret(*secrets[0]), player)
        for s in secrets[1:10]:
            leak = max(leak, float(np.max(np.abs(qis.player_state(qis.encode_secret(*s), player) - ref))))
    c.add("single-player states secret-independent", leak < TOL, leak)
    return c


def criterion_9() -> Checks:
    c = Checks()
    grid = np.linspace(0, qis.ETA_MAX, 50)
    worst = max(abs(qis.attack(e).bell_value - (2 * math.cos(e) + 3)) for e in grid)
    c.add("50-point curve", worst < TOL, worst)
    lo, hi = qis.attack(0.0).bell_value, qis.attack(qis.ETA_MAX).bell_value
    c.add("eta=0 gives 5", abs(lo - 5) < 1e-14, lo)
    c.add("eta=pi/2 gives 3", abs(hi - 3) < 1e-14, hi)
    return c


_FAMILY_PATTERNS = {
    "lc4_b1": {(1, 1, 1, 1), (1, 1, 1, -1)},
    "lc4_b2": {(1, 1, 1, 1), (1, 1, -1, -1)},
    "lc4_b3": {(1, 1, 1, 1), (1, -1, -1, -1)},
}


def criterion_10() -> Checks:
    c = Checks()
    rng = np.random.default_rng(10)
    ref = catalog.reference_state("lc4")
    for name, pattern in _FAMILY_PATTERNS.items():
        b = catalog.operator(name)
        d = solve(b)
        c.add(f"{name} dim 2", d.dim == 2, d.dim)
        c.add(f"{name} patterns", set(d.solutions) == pattern, d.solutions)
        a_state, b_state = cert.solution_states(b, ref)
        states = [a_state, b_state] + [x[0] * a_state + x[1] * b_state for x in (_random_pair(rng) for _ in range(2))]
        for i, v in enumerate(states):
            freq, _ = cert.acceptance_frequency(b, v, 10_000, 0.5, trials=100, seed=100 + i)
            c.add(f"{name} accepts span state {i}", freq >= 0.99, freq)
        freq, _ = cert.acceptance_frequency(b, basis_state(4, 0), 10_000, 0.5, trials=100, seed=99)
        c.add(f"{name} rejects |0000>", 1 - freq >= 0.99, 1 - freq)
    return c


CHSH_MATCH = "squared_overlap"


def criterion_11() -> Checks:
    c = Checks()
    value = float((chsh_signs() * chsh_correlators(singlet())).sum())
    c.add("singlet 2*sqrt(2)", abs(value - 2 * math.sqrt(2)) < TOL, value)
    rng = np.random.default_rng(11)
    samples = [chsh_fidelity_demo(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)) for _ in range(500)]
    matching = [
        name
        for name in ("squared_overlap", "overlap", "trace_distance")
        if all(abs(d.value - 2 * math.sqrt(2) * getattr(d, name)) < TOL for d in samples)
    ]
    c.add("matching definition recorded", matching == [CHSH_MATCH], matching)
    return c


def _random_pauli(rng, n):
    return PauliString(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)), int(rng.integers(4)))


def criterion_12() -> Checks:
    c = Checks()
    rng = np.random.default_rng(12)
    assoc = comm = True
    for _ in range(10_000):
        n = int(rng.integers(1, 7))
        a, b_, d = (_random_pauli(rng, n) for _ in range(3))
        assoc &= (a * b_) * d == a * (b_ * d)
        comm &= commutes(a, b_) == (a * b_ == b_ * a)
    c.add("associativity 10^4", assoc)
    c.add("commutation 10^4", comm)
    lc4 = graph.generators(graph.family("linear", 4))
    rt = all(decompose(lc4, p) == (subset_of_mask(m), 1) for m, p in enumerate(group_elements(lc4)))
    c.add("decompose round trip LC4", rt)
    tips = {name: (local_bound(catalog.operator(name), True).q, local_bound(catalog.operator(name)).q)
            for name in ("lc4", "lc6", "five_qubit", "steane", "ghz5")}
    c.add("Z=+1 tip agrees", all(a == b for a, b in tips.values()), tips)
    sets = [
        graph.generators(graph.family("linear", 4)),
        graph.generators(graph.family("ring", 5)),
        graph.generators(graph.family("linear", 6)),
        builtin_code("steane").generators,
        builtin_code("five_qubit").generators,
    ]
    agree = True
    ops = [catalog.operator(n) for n in catalog.OPERATORS if catalog.operator(n).gs.n_g <= 6]
    for _ in range(300):
        gs = sets[int(rng.integers(len(sets)))]
        k = int(rng.integers(1, 9))
        masks = rng.choice(np.arange(1, 1 << gs.n_g), size=min(k, (1 << gs.n_g) - 1), replace=False)
        ops.append(BellOperator(gs, tuple((int(rng.choice([1, -1])), subset_of_mask(int(m))) for m in masks)))
    for b in ops:
        brute = set(brute_force_solutions(b))
        try:
            got = set(solve(b).solutions)
        except InconsistentConditions:
            got = set()
        agree &= got == brute
    c.add("mns vs exhaustive sweep", agree, f"{len(ops)} operators")
    return c


CRITERIA = [globals()[f"criterion_{i}"] for i in range(1, 13)]


def report(i: int, checks: Checks) -> str:
    return f"criterion {i:2d}: {'PASS' if checks.ok else 'FAIL'}  {checks.summary()}"


@pytest.mark.parametrize("index", range(1, 13))
def test_criterion(index, capsys):
    checks = CRITERIA[index - 1]()
    with capsys.disabled():
        print("\n" + report(index, checks))
    assert checks.ok, checks.summary()


if __name__ == "__main__":
    results = [(i, f()) for i, f in enumerate(CRITERIA, 1)]
    for i, checks in results:
        print(report(i, checks))
    sys.exit(0 if all(c.ok for _, c in results) else 1)
