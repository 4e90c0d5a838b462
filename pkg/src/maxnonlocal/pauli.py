"""Signed n-qubit Pauli strings in symplectic form.

A string is stored as two integer bit masks ``x`` and ``z`` plus a phase
exponent ``k`` so that the operator is ``i**k * W_1 (x) W_2 (x) ... (x) W_n``
with every site letter ``W_j`` exactly one of I, X, Y, Z.  Bit ``n - j`` of a
mask belongs to qubit ``j`` (qubits are 1-indexed), which is the same
convention the state vectors use: qubit 1 is the most significant bit of a
basis-state index.

>>> a = PauliString.from_str("XX")
>>> b = PauliString.from_str("ZZ")
>>> str(a * b)
'-YY'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np

_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LETTER.items()}
_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_TEXT = re.compile(r"^\s*([+-]i?|i)?([IXYZ]+)\s*$")

_MATRIX = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int
    z: int
    k: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a Pauli string needs at least one qubit")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full or self.x < 0 or self.z < 0:
            raise ValueError(f"bit masks exceed {self.n} qubits")
        object.__setattr__(self, "k", self.k % 4)

    # construction -------------------------------------------------------

    @classmethod
    def from_str(cls, text: str) -> "PauliString":
        """Parse ``[+|-|+i|-i]LETTERS``; a missing prefix means ``+``."""
        m = _TEXT.match(text)
        if not m:
            raise ValueError(f"not a Pauli string: {text!r}")
        prefix, letters = m.group(1) or "+", m.group(2)
        k = {"+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}[prefix]
        return cls.from_letters(letters, k)

    @classmethod
    def from_letters(cls, letters: str, k: int = 0) -> "PauliString":
        n = len(letters)
        x = z = 0
        for j, c in enumerate(letters):
            bx, bz = _BITS[c]
            x |= bx << (n - 1 - j)
            z |= bz << (n - 1 - j)
        return cls(n, x, z, k)

    @classmethod
    def from_bits(cls, x_bits: Iterable[int], z_bits: Iterable[int], k: int = 0) -> "PauliString":
        xb, zb = list(x_bits), list(z_bits)
        if len(xb) != len(zb):
            raise ValueError("x and z bit vectors differ in length")
        n = len(xb)
        x = sum((b & 1) << (n - 1 - j) for j, b in enumerate(xb))
        z = sum((b & 1) << (n - 1 - j) for j, b in enumerate(zb))
        return cls(n, x, z, k)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 0)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        """``letter`` on 1-indexed ``qubit``, identity elsewhere."""
        if not 1 <= qubit <= n:
            raise ValueError(f"qubit {qubit} outside 1..{n}")
        return cls.from_letters("I" * (qubit - 1) + letter + "I" * (n - qubit))

    @classmethod
    def z_pattern(cls, bits: Iterable[int]) -> "PauliString":
        """``Z_1^b_1 ... Z_n^b_n``."""
        bits = list(bits)
        return cls.from_bits([0] * len(bits), bits)

    # views ----------------------------------------------------------------

    @property
    def letters(self) -> str:
        return "".join(self.letter(j) for j in range(1, self.n + 1))

    def letter(self, qubit: int) -> str:
        s = self.n - qubit
        return _LETTER[((self.x >> s) & 1, (self.z >> s) & 1)]

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> (self.n - j)) & 1 for j in range(1, self.n + 1))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> (self.n - j)) & 1 for j in range(1, self.n + 1))

    @property
    def symplectic(self) -> np.ndarray:
        """Row vector ``(x_bits | z_bits)``."""
        return np.array(self.x_bits + self.z_bits, dtype=np.uint8)

    @property
    def phase(self) -> complex:
        return (1, 1j, -1, -1j)[self.k]

    @property
    def sign(self) -> int:
        """+1 or -1; only defined for Hermitian strings."""
        if not self.is_hermitian:
            raise ValueError(f"{self} has an imaginary phase")
        return 1 if self.k == 0 else -1

    @property
    def is_hermitian(self) -> bool:
        return self.k in (0, 2)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j in range(1, self.n + 1) if self.letter(j) != "I")

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    def is_identity_up_to_phase(self) -> bool:
        return self.x == 0 and self.z == 0

    def unsigned(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, 0)

    def __neg__(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, self.k + 2)

    def with_sign(self, sign: int) -> "PauliString":
        return self if sign == 1 else -self

    def __str__(self) -> str:
        return _PREFIX[self.k] + self.letters

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    # algebra --------------------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def commutes(self, other: "PauliString") -> bool:
        return commutes(self, other)

    def to_matrix(self) -> np.ndarray:
        """Dense ``2**n x 2**n`` matrix built from Kronecker products of letters."""
        mat = reduce(np.kron, (_MATRIX[c] for c in self.letters))
        return self.phase * mat


def _check_sizes(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n} qubits")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Exact operator product ``a @ b``.

    Each site is ``i**(x z) X**x Z**z``; moving ``Z**z_a`` past ``X**x_b``
    costs ``(-1)**(z_a x_b)``, and re-expressing the result in letters
    removes ``i**(x z)`` of the product site.
    """
    _check_sizes(a, b)
    x, z = a.x ^ b.x, a.z ^ b.z
    k = (
        a.k
        + b.k
        + _popcount(a.x & a.z)
        + _popcount(b.x & b.z)
        + 2 * _popcount(a.z & b.x)
        - _popcount(x & z)
    )
    return PauliString(a.n, x, z, k)


def product(paulis: Iterable[PauliString], n: int | None = None) -> PauliString:
    """Left-to-right product; an empty product needs ``n``."""
    paulis = list(paulis)
    if not paulis:
        if n is None:
            raise ValueError("empty product needs the qubit count")
        return PauliString.identity(n)
    return reduce(multiply, paulis)


def commutes(a: PauliString, b: PauliString) -> bool:
    _check_sizes(a, b)
    return (_popcount(a.x & b.z) + _popcount(a.z & b.x)) % 2 == 0


def _parity(arr: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(arr) & 1).astype(np.int8)


def apply_to_state(p: PauliString, v: np.ndarray) -> np.ndarray:
    """Return ``p |v>`` for a dense state vector ``v`` of length ``2**p.n``.

    On a basis state ``|b>`` the string acts as
    ``i**(k + |x & z|) (-1)**|z & b| |b ^ x>``.
    """
    v = np.asarray(v)
    if v.shape != (1 << p.n,):
        raise ValueError(f"state of shape {v.shape} does not fit {p.n} qubits")
    idx = np.arange(1 << p.n, dtype=np.int64)
    coeff = (1, 1j, -1, -1j)[(p.k + _popcount(p.x & p.z)) % 4]
    signs = 1 - 2 * _parity(idx & p.z)
    out = np.empty_like(v, dtype=complex)
    out[idx ^ p.x] = coeff * signs * v
    return out


def apply_to_matrix(p: PauliString, rho: np.ndarray) -> np.ndarray:
    """``p @ rho`` for a ``2**n``-square matrix, column by column."""
    idx = np.arange(1 << p.n, dtype=np.int64)
    coeff = (1, 1j, -1, -1j)[(p.k + _popcount(p.x & p.z)) % 4]
    signs = 1 - 2 * _parity(idx & p.z)
    out = np.empty_like(rho, dtype=complex)
    out[idx ^ p.x, :] = (coeff * signs)[:, None] * rho
    return out
