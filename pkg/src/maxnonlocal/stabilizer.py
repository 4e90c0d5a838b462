"""Stabilizer generator sets, stabilizer groups and the built-in QEC codes."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .pauli import PauliString, commutes, multiply, product

MAX_GROUP_GENERATORS = 20

Syndrome = tuple[int, ...]
"""Eigenvalue (+1/-1) of each generator, in generator order."""


class NotInGroupError(ValueError):
    """A Pauli string is not (plus or minus) an element of the stabilizer group."""


def _as_pauli(p: PauliString | str) -> PauliString:
    return p if isinstance(p, PauliString) else PauliString.from_str(p)


@dataclass(frozen=True)
class GeneratorSet:
    """Independent, pairwise commuting stabilizer generators with phase +1."""

    generators: tuple[PauliString, ...]

    def __init__(self, generators: Iterable[PauliString | str]):
        gens = tuple(_as_pauli(g) for g in generators)
        if not gens:
            raise ValueError("a generator set needs at least one generator")
        object.__setattr__(self, "generators", gens)
        self._validate()

    def _validate(self) -> None:
        n = self.generators[0].n
        for j, g in enumerate(self.generators, 1):
            if g.n != n:
                raise ValueError(f"generator {j} acts on {g.n} qubits, expected {n}")
            if g.k != 0:
                raise ValueError(f"generator {j} ({g}) must carry phase +1")
        for (i, a), (j, b) in itertools.combinations(enumerate(self.generators, 1), 2):
            if not commutes(a, b):
                raise ValueError(f"generators {i} and {j} anticommute")
        if gf2.rank(self.symplectic_matrix()) != len(self.generators):
            raise ValueError("generators are not independent")

    @property
    def n(self) -> int:
        return self.generators[0].n

    @property
    def n_g(self) -> int:
        return len(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __getitem__(self, j: int) -> PauliString:
        """1-indexed access: ``gs[1]`` is the first generator."""
        if not 1 <= j <= self.n_g:
            raise IndexError(f"generator index {j} outside 1..{self.n_g}")
        return self.generators[j - 1]

    def symplectic_matrix(self) -> np.ndarray:
        return np.array([g.symplectic for g in self.generators], dtype=np.uint8)

    def element(self, subset: Iterable[int]) -> PauliString:
        """Product of the generators in ``subset``, in increasing index order."""
        return product((self[j] for j in sorted(subset)), self.n)

    def is_graph_form(self) -> bool:
        """True when generator j has its only X component on qubit j."""
        return self.n_g == self.n and all(
            g.x_bits == tuple(int(i == j) for i in range(1, self.n + 1))
            for j, g in enumerate(self.generators, 1)
        )

    def to_text(self) -> list[str]:
        return [str(g) for g in self.generators]


def group_elements(gs: GeneratorSet) -> list[PauliString]:
    """All ``2**n_g`` products of generators, indexed by subset bit mask.

    Element ``m`` is the product over generators ``j`` with bit ``j - 1`` of
    ``m`` set, so element 0 is the identity.
    """
    if gs.n_g > MAX_GROUP_GENERATORS:
        raise ValueError(f"refusing to enumerate 2**{gs.n_g} group elements")
    out = [PauliString.identity(gs.n)]
    for j, g in enumerate(gs.generators):
        out.extend(multiply(h, g) for h in out[: 1 << j])
    return out


def subset_of_mask(mask: int) -> frozenset[int]:
    return frozenset(j + 1 for j in range(mask.bit_length()) if mask >> j & 1)


def decompose(gs: GeneratorSet, p: PauliString | str) -> tuple[frozenset[int], int]:
    """Find ``(S, sign)`` with ``sign * prod_{j in S} g_j == p``."""
    p = _as_pauli(p)
    if p.n != gs.n:
        raise ValueError(f"size mismatch: {p.n} vs {gs.n} qubits")
    coeffs = gf2.solve(gs.symplectic_matrix().T, p.symplectic)
    if coeffs is None:
        raise NotInGroupError(f"{p} is not in the stabilizer group")
    subset = frozenset(int(j) + 1 for j in np.nonzero(coeffs)[0])
    h = gs.element(subset)
    diff = (p.k - h.k) % 4
    if diff == 1 or diff == 3:
        raise NotInGroupError(f"{p} differs from a group element by a factor of i")
    return subset, 1 if diff == 0 else -1


def syndrome_of(gs: GeneratorSet, error: PauliString) -> Syndrome:
    """Eigenvalues the generators take on ``error |psi>`` for a +1 state ``|psi>``."""
    return tuple(1 if commutes(g, error) else -1 for g in gs.generators)


def error_for_syndrome(gs: GeneratorSet, syndrome: Sequence[int]) -> PauliString:
    """A lowest-weight Pauli error producing ``syndrome``.

    Errors are tried by increasing weight, then by qubit positions and letters
    in the order Z, X, Y, so Z-type errors are preferred.
    """
    if len(syndrome) != gs.n_g:
        raise ValueError(f"syndrome has {len(syndrome)} entries, expected {gs.n_g}")
    target = tuple(int(s) for s in syndrome)
    n = gs.n
    for w in range(n + 1):
        for qubits in itertools.combinations(range(1, n + 1), w):
            for letters in itertools.product("ZXY", repeat=w):
                word = ["I"] * n
                for q, c in zip(qubits, letters):
                    word[q - 1] = c
                e = PauliString.from_letters("".join(word))
                if syndrome_of(gs, e) == target:
                    return e
    raise ValueError(f"no Pauli error has syndrome {target}")


@dataclass(frozen=True)
class CodeSpec:
    name: str
    n: int
    k: int
    generators: GeneratorSet
    logical_x: PauliString
    logical_z: PauliString | None = None

    def __post_init__(self):
        gs = self.generators
        if gs.n != self.n or gs.n_g != self.n - self.k:
            raise ValueError(f"{self.name}: expected {self.n - self.k} generators on {self.n} qubits")
        if not all(commutes(g, self.logical_x) for g in gs.generators):
            raise ValueError(f"{self.name}: logical X must commute with every generator")
        try:
            decompose(gs, self.logical_x)
        except NotInGroupError:
            pass
        else:
            raise ValueError(f"{self.name}: logical X lies in the stabilizer group")
        lz = self.logical_z
        if lz is not None:
            if not all(commutes(g, lz) for g in gs.generators) or commutes(lz, self.logical_x):
                raise ValueError(f"{self.name}: logical Z must commute with the generators and anticommute with logical X")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "k": self.k,
            "generators": self.generators.to_text(),
            "logical_x": str(self.logical_x),
            **({"logical_z": str(self.logical_z)} if self.logical_z is not None else {}),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CodeSpec":
        return cls(
            name=data["name"],
            n=int(data["n"]),
            k=int(data["k"]),
            generators=GeneratorSet(data["generators"]),
            logical_x=PauliString.from_str(data["logical_x"]),
            logical_z=PauliString.from_str(data["logical_z"]) if data.get("logical_z") else None,
        )


# XXXXX anticommutes with the fourth generator XYZYX (and ZZZZZ = g1 g2 g3 g4
# is a stabilizer here), so XXXXX cannot be a logical X of this generator set.
# IIIXY is the first weight-2 logical operator in letter order; it flips the
# eigenvalue of the logical Z = -IYYIZ, whose +1 eigenstate in the code is the
# 16-term codeword with amplitudes of magnitude 1/4.
_BUILTIN = {
    "five_qubit": dict(
        n=5,
        k=1,
        generators=["XYYXI", "IXYYX", "ZYIYZ", "XYZYX"],
        logical_x="IIIXY",
        logical_z="-IYYIZ",
    ),
    "steane": dict(
        n=7,
        k=1,
        generators=["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"],
        logical_x="XXXXXXX",
        logical_z="ZZZZZZZ",
    ),
}

CODE_NAMES = tuple(_BUILTIN)


def builtin_code(name: str) -> CodeSpec:
    try:
        entry = _BUILTIN[name]
    except KeyError:
        raise ValueError(f"unknown code {name!r}; choose from {', '.join(_BUILTIN)}") from None
    return CodeSpec(
        name=name,
        n=entry["n"],
        k=entry["k"],
        generators=GeneratorSet(entry["generators"]),
        logical_x=PauliString.from_str(entry["logical_x"]),
        logical_z=PauliString.from_str(entry["logical_z"]),
    )
