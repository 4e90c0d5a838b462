"""Bell conditions on generator syndromes and maximally nonlocal subspaces.

Every term ``eps * prod_{j in S} g_j`` equals ``eps * prod_{j in S} (-1)**s_j``
on a joint eigenstate with syndrome bits ``s``; the algebraic maximum ``m`` is
reached exactly when each of these products is +1, which is the linear system
``sum_{j in S} s_j = [eps == -1]`` over GF(2).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import gf2
from .bellop import BellOperator
from .pauli import PauliString
from .stabilizer import Syndrome, error_for_syndrome

MAX_SOLUTIONS = 1 << 20


class InconsistentConditions(ValueError):
    """No syndrome makes every term +1."""


@dataclass(frozen=True)
class MnsDescription:
    solutions: tuple[Syndrome, ...]
    dim: int
    labels: tuple[PauliString, ...]
    rank: int

    def to_dict(self) -> dict:
        return {
            "solutions": [list(s) for s in self.solutions],
            "dim": self.dim,
            "labels": [str(p) for p in self.labels],
        }


def bell_conditions(b: BellOperator) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient matrix ``A`` (m x n_g) and right-hand side ``rhs`` over GF(2)."""
    A = np.zeros((b.m, b.gs.n_g), dtype=np.uint8)
    rhs = np.zeros(b.m, dtype=np.uint8)
    for row, (sign, subset) in enumerate(b.terms):
        for j in subset:
            A[row, j - 1] = 1
        rhs[row] = sign == -1
    return A, rhs


def _bits_to_syndrome(bits) -> Syndrome:
    return tuple(1 - 2 * int(v) for v in bits)


def solve(b: BellOperator) -> MnsDescription:
    """All syndromes meeting the Bell conditions, in lexicographic order of the bits.

    Labels are the Pauli operators that carry the all-+1 eigenstate to each
    solution: ``Z**s`` for graph-form generator sets, otherwise a lowest-weight
    error with that syndrome.
    """
    A, rhs = bell_conditions(b)
    particular = gf2.solve(A, rhs)
    if particular is None:
        raise InconsistentConditions("the Bell conditions admit no syndrome")
    null = gf2.nullspace(A)
    count = 1 << null.shape[0]
    if count > MAX_SOLUTIONS:
        raise ValueError(f"{count} syndrome solutions exceed the guard of {MAX_SOLUTIONS}")
    sols = sorted(tuple(int(v) for v in particular ^ nv) for nv in gf2.span(null))
    gs = b.gs
    solutions = tuple(_bits_to_syndrome(s) for s in sols)
    if gs.is_graph_form():
        labels = tuple(PauliString.z_pattern(s) for s in sols)
    else:
        labels = tuple(error_for_syndrome(gs, syn) for syn in solutions)
    return MnsDescription(
        solutions=solutions,
        dim=len(solutions) << (gs.n - gs.n_g),
        labels=labels,
        rank=gf2.rank(A) if A.size else 0,
    )


def satisfies(b: BellOperator, syndrome: Syndrome) -> bool:
    """Evaluate every term on the syndrome directly."""
    for sign, subset in b.terms:
        v = sign
        for j in subset:
            v *= syndrome[j - 1]
        if v != 1:
            return False
    return True


def brute_force_solutions(b: BellOperator) -> tuple[Syndrome, ...]:
    """Enumerate all ``2**n_g`` syndromes; the independent check for :func:`solve`."""
    return tuple(
        syn
        for syn in (tuple(1 - 2 * v for v in bits) for bits in itertools.product((0, 1), repeat=b.gs.n_g))
        if satisfies(b, syn)
    )


def common_generators(b: BellOperator) -> frozenset[int]:
    subsets = [S for _, S in b.terms]
    return frozenset.intersection(*subsets)


def common_generator_bound(b: BellOperator) -> int:
    """Dimension lower bound from generators shared by every term.

    With ``l`` shared generators the ``2**(l-1)`` value patterns whose product
    is +1 all leave every term unchanged.
    """
    l = len(common_generators(b))
    base = 1 << (b.gs.n - b.gs.n_g)
    return base << (l - 1) if l >= 1 else base
