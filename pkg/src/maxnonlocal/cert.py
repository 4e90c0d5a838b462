"""Finite-sample certification of maximally nonlocal subspaces.

Each Bell term is a product of local Paulis and gets its own measurement
setting: every qubit in the support is rotated into the eigenbasis of its
letter and read out in the computational basis, and the term estimate is the
sign times the average product of the +-1 outcomes.  A state is accepted when
the summed estimate reaches ``m - delta``.

A Hoeffding-style rule of thumb for ``delta`` is ``4 * m / sqrt(shots)``
(each term estimate has standard deviation at most ``shots**-0.5``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import catalog
from .bellop import BellOperator
from .mns import MnsDescription, solve
from .pauli import PauliString, apply_to_state
from .statevec import density, depolarize, expectation, num_qubits, stabilizer_state

FAMILY = ("lc4_b1", "lc4_b2", "lc4_b3")

_S = 1 / math.sqrt(2)
# rows map the +1/-1 eigenvector of the letter onto |0>/|1>
_ROTATION = {
    "X": np.array([[_S, _S], [_S, -_S]], dtype=complex),
    "Y": np.array([[_S, -1j * _S], [_S, 1j * _S]], dtype=complex),
    "Z": np.eye(2, dtype=complex),
}


def _rotate(state: np.ndarray, p: PauliString) -> np.ndarray:
    n = p.n
    mixed = state.ndim == 2
    t = state.reshape([2] * (2 * n if mixed else n))
    for q in p.support:
        u = _ROTATION[p.letter(q)]
        t = np.moveaxis(np.tensordot(u, t, axes=([1], [q - 1])), 0, q - 1)
        if mixed:
            t = np.moveaxis(np.tensordot(u.conj(), t, axes=([1], [n + q - 1])), 0, n + q - 1)
    return t.reshape(state.shape)


def outcome_distribution(p: PauliString, state: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Born probabilities of the rotated read-out and the outcome product for each index."""
    state = np.asarray(state, dtype=complex)
    n = num_qubits(state)
    if p.n != n:
        raise ValueError(f"size mismatch: term on {p.n} qubits, state on {n}")
    r = _rotate(state, p)
    probs = np.abs(r) ** 2 if r.ndim == 1 else np.real(np.diag(r)).copy()
    probs[probs < 1e-15] = 0.0
    probs /= probs.sum()
    mask = p.x | p.z
    parity = np.bitwise_count(np.arange(1 << n) & mask) & 1
    return probs, 1 - 2 * parity.astype(np.int64)


def sample_term(
    term: PauliString, state: np.ndarray, shots: int, seed: int | np.random.Generator | None = None
) -> float:
    if shots < 1:
        raise ValueError("shots must be at least 1")
    rng = np.random.default_rng(seed)
    probs, values = outcome_distribution(term, state)
    counts = rng.multinomial(shots, probs)
    return float(term.sign * (counts @ values) / shots)


@dataclass(frozen=True)
class CertReport:
    operator: BellOperator
    shots_per_term: int
    estimate: float
    threshold: float
    per_term_estimates: tuple[float, ...]

    @property
    def accepted(self) -> bool:
        return self.estimate >= self.threshold

    @property
    def verdict(self) -> str:
        return "accept" if self.accepted else "reject"

    def to_dict(self) -> dict:
        return {
            "terms": self.operator.term_text(),
            "shots_per_term": self.shots_per_term,
            "estimate": self.estimate,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "per_term_estimates": list(self.per_term_estimates),
        }


def certify(
    b: BellOperator,
    state: np.ndarray,
    shots_per_term: int,
    delta: float,
    seed: int | np.random.Generator | None = None,
) -> CertReport:
    if delta <= 0:
        raise ValueError("delta must be positive")
    rng = np.random.default_rng(seed)
    per = tuple(sample_term(p, state, shots_per_term, rng) for p in b.pauli_terms)
    return CertReport(
        operator=b,
        shots_per_term=shots_per_term,
        estimate=float(sum(per)),
        threshold=b.m - delta,
        per_term_estimates=per,
    )


def acceptance_frequency(
    b: BellOperator, state: np.ndarray, shots_per_term: int, delta: float, trials: int, seed: int = 0
) -> tuple[float, float]:
    """Fraction of accepted trials and the mean estimate; trial ``t`` uses the t-th spawned seed."""
    children = np.random.SeedSequence(seed).spawn(trials)
    reports = [certify(b, state, shots_per_term, delta, np.random.default_rng(c)) for c in children]
    return (
        sum(r.accepted for r in reports) / trials,
        float(np.mean([r.estimate for r in reports])),
    )


@dataclass(frozen=True)
class SweepPoint:
    p: float
    acceptance: float
    mean_estimate: float
    exact_value: float


def noisy_state(state: np.ndarray, p: float, qubits=None) -> np.ndarray:
    rho = density(state) if np.ndim(state) == 1 else np.asarray(state)
    n = num_qubits(rho)
    for q in qubits or range(1, n + 1):
        rho = depolarize(rho, q, p)
    return rho


def soundness_sweep(
    b: BellOperator,
    grid,
    shots: int,
    trials: int,
    state: np.ndarray | None = None,
    delta: float | None = None,
    qubits=None,
    seed: int = 0,
) -> list[SweepPoint]:
    """Acceptance frequency against single-qubit depolarizing strength on ``qubits`` (default all).

    ``state`` defaults to the first all-+1 eigenstate found for the generators;
    ``delta`` defaults to ``4 * m / sqrt(shots)``.
    """
    if state is None:
        state = stabilizer_state(b.gs)
    if delta is None:
        delta = 4 * b.m / math.sqrt(shots)
    out = []
    for i, p in enumerate(grid):
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise ValueError("noise strengths must lie in [0, 1]")
        rho = noisy_state(state, p, qubits)
        acc, mean = acceptance_frequency(b, rho, shots, delta, trials, seed=seed + i)
        out.append(SweepPoint(p=p, acceptance=acc, mean_estimate=mean, exact_value=expectation(b, rho)))
    return out


# subspace family ------------------------------------------------------------


def label_text(p: PauliString, ket: str) -> str:
    if p.weight == 0:
        return ket
    parts = "".join(f"{p.letter(q)}{q}" for q in p.support)
    sign = "-" if p.is_hermitian and p.sign < 0 else ""
    return f"{sign}{parts}{ket}"


def describe_subspace(desc: MnsDescription, ket: str) -> str:
    names = [label_text(p, ket) for p in desc.labels]
    if len(names) == 1:
        return f"the single state {names[0]}"
    return "superposition of " + ", ".join(names[:-1]) + " and " + names[-1]


def certify_subspace_family(
    name: str,
    state: np.ndarray,
    shots_per_term: int = 10_000,
    delta: float = 0.5,
    seed: int | None = None,
) -> tuple[CertReport, str | None]:
    """Certify against one of the three 4-qubit inequalities and name the subspace on accept."""
    if name not in FAMILY:
        raise ValueError(f"unknown inequality {name!r}; choose from {', '.join(FAMILY)}")
    b = catalog.operator(name)
    report = certify(b, state, shots_per_term, delta, seed)
    return report, describe_subspace(solve(b), "|LC4>") if report.accepted else None


def solution_states(b: BellOperator, reference: np.ndarray) -> list[np.ndarray]:
    """Label images of ``reference``: one state per Bell-condition solution."""
    return [apply_to_state(p, reference) for p in solve(b).labels]
