"""Dense state-vector oracle.

States are plain complex numpy vectors of length ``2**n``; mixed states are
``2**n x 2**n`` density matrices.  Qubit 1 is the most significant bit of a
basis index, so ``|q1 q2 ... qn>`` reads left to right like a tensor product.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .bellop import BellOperator
from .graph import Graph
from .pauli import PauliString, apply_to_matrix, apply_to_state
from .stabilizer import CodeSpec, GeneratorSet, group_elements

MAX_QUBITS = 14
MAX_PROJECTOR_QUBITS = 10
DUMP_CUTOFF = 1e-12


def num_qubits(state: np.ndarray) -> int:
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if dim != 1 << n or n < 1:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def _guard(n: int, limit: int = MAX_QUBITS) -> None:
    if n > limit:
        raise ValueError(f"{n} qubits exceed the dense-simulation guard of {limit}")


def basis_state(n: int, index: int = 0) -> np.ndarray:
    _guard(n)
    v = np.zeros(1 << n, dtype=complex)
    v[index] = 1.0
    return v


def bits_of(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> (n - j)) & 1 for j in range(1, n + 1))


def apply_cz(v: np.ndarray, i: int, j: int) -> np.ndarray:
    n = num_qubits(v)
    idx = np.arange(v.shape[0])
    both = ((idx >> (n - i)) & 1) & ((idx >> (n - j)) & 1)
    return v * (1 - 2 * both)


def build_graph_state(g: Graph) -> np.ndarray:
    """Controlled-Z along every edge applied to ``|+>^n``."""
    _guard(g.n)
    v = np.full(1 << g.n, 2 ** (-g.n / 2), dtype=complex)
    for i, j in g.sorted_edges():
        v = apply_cz(v, i, j)
    return v


def graph_basis_state(g: Graph, x) -> np.ndarray:
    x = list(x)
    if len(x) != g.n:
        raise ValueError(f"pattern has {len(x)} bits, graph has {g.n} vertices")
    return apply_to_state(PauliString.z_pattern(x), build_graph_state(g))


def canonical(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rescale the global phase so the first nonzero amplitude is real positive."""
    nz = np.nonzero(np.abs(v) > tol)[0]
    if nz.size == 0:
        return v.copy()
    a = v[nz[0]]
    return v * (abs(a) / a)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < tol or nb < tol:
        return na < tol and nb < tol
    return abs(abs(np.vdot(a, b)) - na * nb) < tol * max(1.0, na * nb) and np.allclose(
        canonical(a / na), canonical(b / nb), atol=tol
    )


def project(gs: GeneratorSet, v: np.ndarray) -> np.ndarray:
    """Apply ``prod_j (I + g_j)/2``."""
    for g in gs.generators:
        v = 0.5 * (v + apply_to_state(g, v))
    return v


def stabilizer_state(gs: GeneratorSet) -> np.ndarray:
    """Normalised projection of the first computational basis state that survives the projector."""
    _guard(gs.n)
    for index in range(1 << gs.n):
        v = project(gs, basis_state(gs.n, index))
        norm = np.linalg.norm(v)
        if norm > 1e-9:
            return canonical(v / norm)
    raise ValueError("projection annihilates every basis state")


def code_seed(code: CodeSpec) -> np.ndarray:
    """Normalised projection of the first computational basis state that survives.

    The projector is ``prod_j (I + g_j)/2``, times ``(I + Z_L)/2`` when the code
    names a logical Z.
    """
    _guard(code.n)
    for index in range(1 << code.n):
        v = project(code.generators, basis_state(code.n, index))
        if code.logical_z is not None:
            v = 0.5 * (v + apply_to_state(code.logical_z, v))
        norm = np.linalg.norm(v)
        if norm > 1e-9:
            return canonical(v / norm)
    raise ValueError(f"{code.name}: projection annihilates every basis state")


def codeword(code: CodeSpec, logical: int) -> np.ndarray:
    """Logical basis state; ``|1_L>`` is the logical X image of ``|0_L>``."""
    if logical not in (0, 1):
        raise ValueError("logical must be 0 or 1")
    v = code_seed(code)
    if logical == 1:
        v = canonical(apply_to_state(code.logical_x, v))
    return v


def density(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def expectation(op: PauliString | BellOperator, state: np.ndarray, tol: float = 1e-10) -> float:
    """``<v|op|v>`` for a vector or ``Tr(op rho)`` for a density matrix."""
    state = np.asarray(state)
    n = num_qubits(state)
    terms = op.pauli_terms if isinstance(op, BellOperator) else (op,)
    total = 0j
    for p in terms:
        if p.n != n:
            raise ValueError(f"size mismatch: operator on {p.n} qubits, state on {n}")
        if state.ndim == 1:
            total += np.vdot(state, apply_to_state(p, state))
        else:
            total += np.trace(apply_to_matrix(p, state))
    if abs(total.imag) > tol:
        raise ValueError(f"expectation has imaginary part {total.imag:.3g}")
    return float(total.real)


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Signed-permutation matrix of ``p`` built column by column."""
    dim = 1 << p.n
    mat = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        mat[:, col] = apply_to_state(p, basis_state(p.n, col))
    return mat


def projector_check(gs: GeneratorSet) -> float:
    """Max-norm of ``2**-n sum_h h - |G><G|`` for a full generator set."""
    if gs.n_g != gs.n:
        raise ValueError("the projector identity needs n generators on n qubits")
    _guard(gs.n, MAX_PROJECTOR_QUBITS)
    dim = 1 << gs.n
    total = np.zeros((dim, dim), dtype=complex)
    eye = np.eye(dim, dtype=complex)
    for h in group_elements(gs):
        total += apply_to_matrix(h, eye)
    total /= dim
    ref = None
    for i in range(dim):
        v = project(gs, basis_state(gs.n, i))
        if np.linalg.norm(v) > 1e-9:
            ref = density(v / np.linalg.norm(v))
            break
    return float(np.max(np.abs(total - ref)))


# partial trace and noise ------------------------------------------------------


def reduced_density(state: np.ndarray, keep) -> np.ndarray:
    """Reduced density matrix on the 1-indexed qubits in ``keep`` (kept in order)."""
    state = np.asarray(state)
    n = num_qubits(state)
    keep = list(keep)
    rest = [q for q in range(1, n + 1) if q not in keep]
    if state.ndim == 1:
        t = state.reshape([2] * n).transpose([q - 1 for q in keep + rest])
        t = t.reshape(1 << len(keep), 1 << len(rest))
        return t @ t.conj().T
    t = state.reshape([2] * (2 * n))
    order = [q - 1 for q in keep + rest]
    t = t.transpose(order + [n + o for o in order])
    dk, dr = 1 << len(keep), 1 << len(rest)
    t = t.reshape(dk, dr, dk, dr)
    return np.einsum("arbr->ab", t)


def depolarize(rho: np.ndarray, qubit: int, p: float) -> np.ndarray:
    """``(1-p) rho + p Tr_q(rho) (x) I/2`` on one qubit."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("depolarizing strength must lie in [0, 1]")
    rho = density(rho) if rho.ndim == 1 else rho
    n = num_qubits(rho)
    twirl = rho.copy()
    for c in "XYZ":
        P = PauliString.single(n, qubit, c)
        twirl = twirl + apply_to_matrix(P, apply_to_matrix(P, rho).conj().T).conj().T
    return (1 - p) * rho + p * twirl / 4


# dump format -----------------------------------------------------------------


def dump_state(v: np.ndarray) -> list[tuple[str, float, float]]:
    n = num_qubits(v)
    return [
        (format(i, f"0{n}b"), float(a.real), float(a.imag))
        for i, a in enumerate(v)
        if abs(a) > DUMP_CUTOFF
    ]


def load_state(rows, n: int | None = None) -> np.ndarray:
    rows = [tuple(r) for r in rows]
    if n is None:
        if not rows:
            raise ValueError("empty dump needs the qubit count")
        n = len(rows[0][0])
    v = np.zeros(1 << n, dtype=complex)
    for bits, re, im in rows:
        if len(bits) != n:
            raise ValueError(f"bitstring {bits!r} does not have {n} bits")
        v[int(bits, 2)] = complex(re, im)
    return v


# CHSH demonstration ------------------------------------------------------------

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
CHSH_ALICE = (_X, _Z)
CHSH_BOB = ((_X + _Z) / math.sqrt(2), (_X - _Z) / math.sqrt(2))


def singlet() -> np.ndarray:
    return np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)


def chsh_state(theta: float, phi: float) -> np.ndarray:
    """``cos(theta/2)|01> - e^{i phi} sin(theta/2)|10>``."""
    return np.array(
        [0, math.cos(theta / 2), -np.exp(1j * phi) * math.sin(theta / 2), 0], dtype=complex
    )


def chsh_correlators(v: np.ndarray) -> np.ndarray:
    """``<A_a B_b>`` for a in (X, Z), b in ((X+Z)/sqrt2, (X-Z)/sqrt2)."""
    out = np.zeros((2, 2))
    for a, A in enumerate(CHSH_ALICE):
        for b, B in enumerate(CHSH_BOB):
            out[a, b] = float(np.real(np.vdot(v, np.kron(A, B) @ v)))
    return out


def chsh_signs() -> np.ndarray:
    """Sign pattern over the four correlators that maximises the singlet value.

    All 16 patterns are scanned; the maximiser is unique.
    """
    corr = chsh_correlators(singlet())
    best, best_val = None, -np.inf
    for signs in itertools.product((1, -1), repeat=4):
        s = np.array(signs, dtype=float).reshape(2, 2)
        val = float((s * corr).sum())
        if val > best_val + 1e-12:
            best, best_val = s, val
    return best


@dataclass(frozen=True)
class ChshDemo:
    value: float
    squared_overlap: float
    overlap: float
    trace_distance: float


def chsh_fidelity_demo(theta: float, phi: float) -> ChshDemo:
    """CHSH value of ``chsh_state(theta, phi)`` and three closeness measures to the singlet."""
    v = chsh_state(theta, phi)
    value = abs(float((chsh_signs() * chsh_correlators(v)).sum()))
    ov = abs(np.vdot(singlet(), v))
    diff = density(singlet()) - density(v)
    eig = np.linalg.eigvalsh(diff)
    return ChshDemo(
        value=value,
        squared_overlap=float(ov**2),
        overlap=float(ov),
        trace_distance=float(0.5 * np.abs(eig).sum()),
    )
