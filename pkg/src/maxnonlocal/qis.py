"""Quantum information splitting over the 5-qubit code, and a tapping attack.

The dealer (Alice) holds qubit 1, Bob qubits 2 and 3, Charlie qubit 4 and the
recoverer (Rex) qubit 5.  A secret ``mu|0> + nu|1>`` is encoded as
``mu|G0> + nu|G1>`` with ``|G1> = XXXXX|G0>``.  Alice, Bob and Charlie each
measure in the computational basis, after which Rex holds the secret up to a
Pauli that depends only on the four announced bits.

``|G0>`` is stabilized by XYYXI, IXYYX, ZYIYZ and XYZYX, but ``XXXXX|G0>`` is
not (XXXXX anticommutes with XYZYX); the encoded pair spans the code whose
fourth generator is XIXYY instead.  The splitting protocol only needs the two
codewords, so it works on that span.  :func:`attack` on the other hand
evaluates the five-term Bell operator built on the XYZYX generators and
therefore attacks states of that code.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import catalog
from .pauli import PauliString, apply_to_state
from .statevec import codeword, expectation, reduced_density
from .stabilizer import builtin_code

PLAYERS = {"alice": (1,), "bob": (2, 3), "charlie": (4,), "rex": (5,)}
ATTACKED_QUBIT = 4
ETA_MAX = math.pi / 2
_PAULIS_1Q = tuple(PauliString.from_letters(c) for c in "IXYZ")


def codewords() -> tuple[np.ndarray, np.ndarray]:
    g0 = codeword(builtin_code("five_qubit"), 0)
    return g0, apply_to_state(PauliString.from_letters("XXXXX"), g0)


def _check_secret(mu: complex, nu: complex) -> None:
    if abs(abs(mu) ** 2 + abs(nu) ** 2 - 1) > 1e-10:
        raise ValueError("secret must satisfy |mu|^2 + |nu|^2 = 1")


def encode_secret(mu: complex, nu: complex) -> np.ndarray:
    _check_secret(mu, nu)
    g0, g1 = codewords()
    return mu * g0 + nu * g1


def random_secret(rng: np.random.Generator) -> tuple[complex, complex]:
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    z /= np.linalg.norm(z)
    return complex(z[0]), complex(z[1])


def branch_state(encoded: np.ndarray, bits) -> np.ndarray:
    """Unnormalised state of the unmeasured qubits after fixing the leading ``bits``."""
    bits = tuple(bits)
    k = len(bits)
    block = 1 << (5 - k)
    idx = int("".join(map(str, bits)), 2) if bits else 0
    return encoded[idx * block : (idx + 1) * block]


def table1_states(alice_bit: int, secret: tuple[complex, complex]) -> np.ndarray:
    """4-qubit state left with Bob, Charlie and Rex after Alice reads ``alice_bit``."""
    if alice_bit not in (0, 1):
        raise ValueError("alice_bit must be 0 or 1")
    return branch_state(encode_secret(*secret), (alice_bit,))


def fidelity(target: np.ndarray, state: np.ndarray) -> float:
    return float(abs(np.vdot(target, state)) ** 2 / (np.vdot(target, target).real * np.vdot(state, state).real))


@lru_cache(maxsize=1)
def correction_table(seed: int = 7, probes: int = 4) -> dict[tuple[int, int, int, int], PauliString]:
    """Pauli that Rex applies for each of the 16 announced bit strings.

    Found by simulation: for each branch the unique single-qubit Pauli that
    maps Rex's state back onto the secret for several random secrets.
    """
    rng = np.random.default_rng(seed)
    secrets = [random_secret(rng) for _ in range(probes)]
    table = {}
    for bits in itertools.product((0, 1), repeat=4):
        fits = []
        for P in _PAULIS_1Q:
            if all(
                abs(fidelity(np.array([mu, nu]), apply_to_state(P, branch_state(encode_secret(mu, nu), bits))) - 1) < 1e-10
                for mu, nu in secrets
            ):
                fits.append(P)
        if len(fits) != 1:
            raise RuntimeError(f"branch {bits} has {len(fits)} valid corrections")
        table[bits] = fits[0]
    return table


@dataclass(frozen=True)
class QisTranscript:
    secret: tuple[complex, complex]
    alice: int
    bob: tuple[int, int]
    charlie: int
    correction: PauliString
    rex_before: np.ndarray
    recovered_fidelity: float

    @property
    def bits(self) -> tuple[int, int, int, int]:
        return (self.alice, *self.bob, self.charlie)

    def to_dict(self) -> dict:
        mu, nu = self.secret
        return {
            "secret": [[mu.real, mu.imag], [nu.real, nu.imag]],
            "alice": self.alice,
            "bob": list(self.bob),
            "charlie": self.charlie,
            "correction": self.correction.letters,
            "recovered_fidelity": self.recovered_fidelity,
        }


def _measure_leading(v: np.ndarray, rng: np.random.Generator | None, forced: int | None) -> tuple[int, np.ndarray]:
    half = v.shape[0] // 2
    p1 = float(np.vdot(v[half:], v[half:]).real)
    if forced is not None:
        if forced not in (0, 1):
            raise ValueError(f"outcome override {forced} is not a bit")
        bit = forced
    else:
        bit = int(rng.random() < p1)
    part = v[half:] if bit else v[:half]
    prob = p1 if bit else 1 - p1
    if prob < 1e-12:
        raise ValueError(f"forced outcome {bit} has zero probability")
    return bit, part / math.sqrt(prob)


def run_protocol(
    secret: tuple[complex, complex],
    outcomes=None,
    seed: int | None = None,
) -> QisTranscript:
    """One run: Born-rule measurements on qubits 1-4 (or forced ``outcomes``), then Rex's fix-up."""
    mu, nu = secret
    v = encode_secret(mu, nu)
    if outcomes is not None:
        outcomes = [int(b) for b in outcomes]
        if len(outcomes) != 4:
            raise ValueError("outcome override needs four bits: alice, bob, bob, charlie")
    rng = np.random.default_rng(seed)
    bits = []
    for i in range(4):
        bit, v = _measure_leading(v, rng, None if outcomes is None else outcomes[i])
        bits.append(bit)
    correction = correction_table()[tuple(bits)]
    fixed = apply_to_state(correction, v)
    return QisTranscript(
        secret=(complex(mu), complex(nu)),
        alice=bits[0],
        bob=(bits[1], bits[2]),
        charlie=bits[3],
        correction=correction,
        rex_before=v,
        recovered_fidelity=fidelity(np.array([mu, nu]), fixed),
    )


def player_state(encoded: np.ndarray, player: str) -> np.ndarray:
    return reduced_density(encoded, PLAYERS[player])


def withheld_fidelity(withheld: str = "charlie", secrets: int = 200, seed: int = 11) -> float:
    """Best average recovery fidelity when one player's bits are not announced.

    Rex picks, for every announced bit pattern, the single correction that
    maximises the average fidelity over the same random secrets and over the
    Born-rule weight of the hidden bits.
    """
    positions = {"alice": (0,), "bob": (1, 2), "charlie": (3,)}[withheld]
    rng = np.random.default_rng(seed)
    sample = [random_secret(rng) for _ in range(secrets)]
    encoded = [encode_secret(mu, nu) for mu, nu in sample]
    total = 0.0
    for known in itertools.product((0, 1), repeat=4 - len(positions)):
        best = 0.0
        for P in _PAULIS_1Q:
            acc = 0.0
            for (mu, nu), v in zip(sample, encoded):
                for hidden in itertools.product((0, 1), repeat=len(positions)):
                    bits = list(known)
                    for pos, h in zip(positions, hidden):
                        bits.insert(pos, h)
                    rex = branch_state(v, bits)
                    weight = float(np.vdot(rex, rex).real)
                    if weight > 1e-14:
                        acc += weight * fidelity(np.array([mu, nu]), apply_to_state(P, rex))
            best = max(best, acc / len(sample))
        total += best
    return total


# attack ----------------------------------------------------------------------


@dataclass(frozen=True)
class AttackReport:
    eta: float
    stabilizer_expectations: tuple[float, ...]

    @property
    def bell_value(self) -> float:
        return float(sum(self.stabilizer_expectations))

    def to_dict(self) -> dict:
        return {"eta": self.eta, "terms": list(self.stabilizer_expectations), "bell_value": self.bell_value}


def tap_unitary(eta: float) -> np.ndarray:
    """``|0><0| (x) I + |1><1| (x) [[cos, sin], [sin, -cos]]`` on (code qubit, ancilla)."""
    c, s = math.cos(eta), math.sin(eta)
    u = np.eye(4, dtype=complex)
    u[2:, 2:] = [[c, s], [s, -c]]
    return u


def attack(eta: float, state: np.ndarray | None = None) -> AttackReport:
    """Term expectations of the five-term operator after Eve taps qubit 4.

    Qubit 4 controls the rotation of a fresh ancilla in ``|0>`` (appended as
    qubit 6).  ``state`` defaults to the logical ``|0>`` of the built-in
    5-qubit code.
    """
    if not 0.0 <= eta <= ETA_MAX + 1e-12:
        raise ValueError("eta must lie in [0, pi/2]")
    if state is None:
        state = codeword(builtin_code("five_qubit"), 0)
    joint = np.kron(state, np.array([1, 0], dtype=complex)).reshape(2 ** 3, 2, 2, 2)
    # axes: qubits 1-3, qubit 4, qubit 5, ancilla
    joint = np.einsum("ab cd, x c y d -> x a y b".replace(" ", ""), tap_unitary(eta).reshape(2, 2, 2, 2), joint)
    joint = joint.reshape(-1)
    bell = catalog.operator("five_qubit")
    terms = tuple(
        expectation(PauliString.from_letters(p.letters + "I", p.k), joint) for p in bell.pauli_terms
    )
    return AttackReport(eta=float(eta), stabilizer_expectations=terms)


# reference amplitude tables ---------------------------------------------------

# Alice's outcome -> (mu block, nu block) as signed 4-bit kets on Bob, Charlie, Rex.
TABLE1 = {
    0: (
        {"0000": -1, "0011": -1, "0110": -1, "1100": -1, "0101": 1, "1001": 1, "1010": 1, "1111": 1},
        {"1101": 1, "0111": -1, "1110": -1, "1011": 1, "0010": 1, "0001": 1, "1000": 1, "0100": 1},
    ),
    1: (
        {"1000": -1, "0001": -1, "0010": 1, "0100": 1, "1110": 1, "1101": 1, "1011": 1, "0111": 1},
        {"0110": 1, "0011": -1, "1111": -1, "1001": -1, "1100": -1, "0000": 1, "1010": 1, "0101": 1},
    ),
}

# Bob's outcome (Alice read 0) -> Rex's Pauli frame for Charlie reading 0 and 1.
TABLE2_FRAMES = {(0, 0): ("Z", "Y"), (1, 1): ("Z", "Y"), (0, 1): ("X", "I"), (1, 0): ("X", "I")}


def table1_reference(alice_bit: int, secret: tuple[complex, complex]) -> np.ndarray:
    mu, nu = secret
    v = np.zeros(16, dtype=complex)
    for coeff, block in zip((mu, nu), TABLE1[alice_bit]):
        for ket, sign in block.items():
            v[int(ket, 2)] += coeff * sign
    return v


def rex_frame(secret: tuple[complex, complex], bits) -> str:
    """Letter ``P`` with Rex's branch state proportional to ``P|psi>``."""
    psi = np.array(secret, dtype=complex)
    rex = branch_state(encode_secret(*secret), bits)
    for P in _PAULIS_1Q:
        if abs(fidelity(apply_to_state(P, psi), rex) - 1) < 1e-10:
            return P.letters
    raise ValueError(f"branch {tuple(bits)} is not a Pauli image of the secret")
