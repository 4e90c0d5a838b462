"""Pinned-number reproduction suite.

Every row compares one computed quantity against its pinned expectation.
Groups can be selected with ``only`` and any named operator can be swapped
for another record (used for fault-injection runs).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import catalog, qis
from .bellop import BellOperator, find_contradiction, local_bound
from .mns import solve
from .pauli import PauliString, apply_to_state
from .statevec import codeword, equal_up_to_phase, expectation, projector_check
from .stabilizer import builtin_code
from .graph import family, generators

GROUPS = ("lc4", "lc6", "five_qubit", "steane", "ghz5", "qis", "attack", "lc4_family")
TOL = 1e-10


@dataclass(frozen=True)
class Row:
    group: str
    name: str
    expected: object
    computed: object
    passed: bool

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "name": self.name,
            "expected": _plain(self.expected),
            "computed": _plain(self.computed),
            "passed": self.passed,
        }


def _plain(v):
    if isinstance(v, (tuple, list)):
        return [_plain(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def _same(expected, computed) -> bool:
    if isinstance(expected, float) or isinstance(computed, float):
        return abs(float(expected) - float(computed)) <= TOL * max(1.0, abs(float(expected)))
    return expected == computed


class _Collector:
    def __init__(self, group: str):
        self.group = group
        self.rows: list[Row] = []

    def check(self, name: str, expected, computed: Callable[[], object] | object, cmp=_same) -> None:
        try:
            value = computed() if callable(computed) else computed
            ok = bool(cmp(expected, value))
        except Exception as exc:  # a crash is a failed row, not a crashed run
            value, ok = f"error: {exc}", False
        self.rows.append(Row(self.group, name, expected, value, ok))


def _bound_rows(c: _Collector, b: BellOperator, m: int, L: int) -> None:
    report = local_bound(b)
    c.check("m", m, b.m)
    c.check("local bound", L, report.local_bound)
    c.check("degree", m / L, report.degree)


def _lc4(ops) -> list[Row]:
    c = _Collector("lc4")
    b = ops("lc4")
    _bound_rows(c, b, 4, 2)
    c.check("q", 3, lambda: local_bound(b).q)
    c.check("value on |G>", 4.0, lambda: expectation(b, catalog.reference_state("lc4")))
    c.check("contradiction terms", (0, 1, 2, 3), lambda: find_contradiction(b))
    c.check("syndrome solutions", ((1, 1, 1, 1), (-1, -1, -1, 1)), lambda: tuple(sorted(solve(b).solutions, reverse=True)))
    c.check(
        "Z1Z2Z3 state value",
        4.0,
        lambda: expectation(b, apply_to_state(PauliString.from_letters("ZZZI"), catalog.reference_state("lc4"))),
    )
    c.check("projector deviation", True, lambda: projector_check(generators(family("linear", 4))) < TOL)
    return c.rows


def _lc6(ops) -> list[Row]:
    c = _Collector("lc6")
    b = ops("lc6")
    _bound_rows(c, b, 16, 4)
    d = solve(b)
    c.check("solution count", 2, len(d.solutions))
    c.check("second label", "+IZIIZI", lambda: str(d.labels[1]))
    c.check("value on |G>", 16.0, lambda: expectation(b, catalog.reference_state("lc6")))
    c.check("projector deviation", True, lambda: projector_check(generators(family("linear", 6))) < TOL)
    return c.rows


def _five(ops) -> list[Row]:
    c = _Collector("five_qubit")
    b = ops("five_qubit")
    _bound_rows(c, b, 5, 3)
    c.check("mns dim", 2, lambda: solve(b).dim)
    code = builtin_code("five_qubit")
    g0 = codeword(code, 0)
    c.check("value on |G0>", 5.0, lambda: expectation(b, g0))
    c.check("value on XXXXX|G0>", 5.0, lambda: expectation(b, apply_to_state(PauliString.from_letters("XXXXX"), g0)))
    c.check("value on logical |1>", 5.0, lambda: expectation(b, codeword(code, 1)))
    return c.rows


def _steane(ops) -> list[Row]:
    c = _Collector("steane")
    b = ops("steane")
    _bound_rows(c, b, 6, 4)
    c.check("mns dim", 8, lambda: solve(b).dim)
    base = codeword(builtin_code("steane"), 0)
    for err in ("IIIIIIZ", "ZZZIIII"):
        c.check(
            f"value on {err} codeword",
            6.0,
            lambda err=err: expectation(b, apply_to_state(PauliString.from_letters(err), base)),
        )
    return c.rows


def _ghz5(ops) -> list[Row]:
    c = _Collector("ghz5")
    b = ops("ghz5")
    _bound_rows(c, b, 16, 4)
    d = solve(b)
    c.check("solution count", 1, len(d.solutions))
    c.check("mns dim", 1, d.dim)
    c.check("value on |GHZ5>", 16.0, lambda: expectation(b, catalog.reference_state("ghz5")))
    return c.rows


def _qis(_ops) -> list[Row]:
    c = _Collector("qis")
    rng = np.random.default_rng(2024)
    secrets = [qis.random_secret(rng) for _ in range(20)]

    def worst_recovery():
        return max(
            abs(1 - qis.run_protocol(s, outcomes=bits).recovered_fidelity)
            for bits in qis.correction_table()
            for s in secrets
        )

    c.check("all branches recover", True, lambda: worst_recovery() < TOL)
    for a in (0, 1):
        c.check(
            f"table 1 row alice={a}",
            True,
            lambda a=a: all(
                equal_up_to_phase(qis.table1_states(a, s), qis.table1_reference(a, s) / 4) for s in secrets[:5]
            ),
        )
    for bob, frames in qis.TABLE2_FRAMES.items():
        c.check(
            f"table 2 frames bob={bob[0]}{bob[1]}",
            frames,
            lambda bob=bob: tuple(qis.rex_frame(secrets[0], (0, *bob, ch)) for ch in (0, 1)),
        )

    def leak():
        worst = 0.0
        for player in qis.PLAYERS:
            ref = qis.player_state(qis.encode_secret(*secrets[0]), player)
            for s in secrets[1:10]:
                worst = max(worst, float(np.max(np.abs(qis.player_state(qis.encode_secret(*s), player) - ref))))
        return worst

    c.check("player states secret-independent", True, lambda: leak() < TOL)
    c.check("withheld Charlie below 1", True, lambda: qis.withheld_fidelity("charlie", secrets=50) < 1 - 1e-3)
    return c.rows


def _attack(_ops) -> list[Row]:
    c = _Collector("attack")
    grid = np.linspace(0, qis.ETA_MAX, 50)
    c.check(
        "curve 2cos(eta)+3",
        True,
        lambda: max(abs(qis.attack(e).bell_value - (2 * math.cos(e) + 3)) for e in grid) < TOL,
    )
    c.check("eta=0", 5.0, lambda: qis.attack(0.0).bell_value)
    c.check("eta=pi/2", 3.0, lambda: qis.attack(qis.ETA_MAX).bell_value)
    return c.rows


_FAMILY_SOLUTIONS = {
    "lc4_b1": ((1, 1, 1, 1), (1, 1, 1, -1)),
    "lc4_b2": ((1, 1, 1, 1), (1, 1, -1, -1)),
    "lc4_b3": ((1, 1, 1, 1), (1, -1, -1, -1)),
}


def _family(ops) -> list[Row]:
    c = _Collector("lc4_family")
    for name, sols in _FAMILY_SOLUTIONS.items():
        b = ops(name)
        d = solve(b)
        c.check(f"{name} dim", 2, d.dim)
        c.check(f"{name} solutions", sols, d.solutions)
        c.check(f"{name} local bound", 2, lambda b=b: local_bound(b).local_bound)
    return c.rows


_RUNNERS = {
    "lc4": _lc4,
    "lc6": _lc6,
    "five_qubit": _five,
    "steane": _steane,
    "ghz5": _ghz5,
    "qis": _qis,
    "attack": _attack,
    "lc4_family": _family,
}


def reproduce(only=None, overrides: dict[str, dict] | None = None) -> list[Row]:
    """Run the selected groups; ``overrides`` maps operator names to replacement records."""
    groups = list(GROUPS) if not only else list(only)
    unknown = [g for g in groups if g not in _RUNNERS]
    if unknown:
        raise ValueError(f"unknown group(s) {', '.join(unknown)}; choose from {', '.join(GROUPS)}")
    overrides = overrides or {}

    def ops(name: str) -> BellOperator:
        return catalog.load_operator(overrides[name]) if name in overrides else catalog.operator(name)

    rows: list[Row] = []
    for g in groups:
        rows.extend(_RUNNERS[g](ops))
    return rows


def format_table(rows: list[Row]) -> str:
    lines = [f"{'status':6}  {'group':11}  {'check':36}  expected | computed"]
    for r in rows:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status:6}  {r.group:11}  {r.name:36}  {_plain(r.expected)} | {_plain(r.computed)}")
    failed = [r for r in rows if not r.passed]
    lines.append(f"{len(rows) - len(failed)}/{len(rows)} rows pass")
    return "\n".join(lines)
