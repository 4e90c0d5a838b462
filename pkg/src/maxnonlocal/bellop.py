"""Bell operators built from stabilizer elements.

A Bell operator is a signed sum of ``m`` distinct stabilizer elements.  Each
term is kept twice: as a generator subset with a sign, and as the expanded
Pauli string that subset multiplies out to.

Local-realistic bounds come from an exhaustive branch-and-bound search over
+/-1 values for every (qubit, letter) pair that occurs in the operator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import gf2
from .pauli import PauliString
from .stabilizer import GeneratorSet, decompose, group_elements, subset_of_mask

MAX_ASSIGNMENT_VARIABLES = 30
MAX_SEARCH_ELEMENTS = 16

Term = tuple[int, frozenset[int]]


class ExpressionError(ValueError):
    """Malformed Bell-operator expression; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class BellOperator:
    gs: GeneratorSet
    terms: tuple[Term, ...]
    pauli_terms: tuple[PauliString, ...] = field(init=False, compare=False)
    expression: str | None = field(default=None, compare=False)

    def __post_init__(self):
        terms = tuple((int(s), frozenset(S)) for s, S in self.terms)
        seen = set()
        for sign, subset in terms:
            if sign not in (1, -1):
                raise ValueError(f"term sign must be +1 or -1, got {sign}")
            bad = [j for j in subset if not 1 <= j <= self.gs.n_g]
            if bad:
                raise ValueError(f"unknown generator index {bad[0]}")
            if subset in seen:
                raise ValueError(f"duplicate term {_subset_text(subset)}")
            seen.add(subset)
        if not terms:
            raise ValueError("a Bell operator needs at least one term")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(
            self, "pauli_terms", tuple(self.gs.element(S).with_sign(s) for s, S in terms)
        )

    @property
    def m(self) -> int:
        return len(self.terms)

    @property
    def n(self) -> int:
        return self.gs.n

    def term_text(self) -> list[str]:
        return [("-" if s < 0 else "+") + _subset_text(S) for s, S in self.terms]

    def to_dict(self) -> dict:
        out = {
            "generators": self.gs.to_text(),
            "m": self.m,
            "terms": [
                {"sign": s, "subset": sorted(S), "pauli": str(p)}
                for (s, S), p in zip(self.terms, self.pauli_terms)
            ],
        }
        if self.expression is not None:
            out["expression"] = self.expression
        return out


def _subset_text(subset: Iterable[int]) -> str:
    subset = sorted(subset)
    return "".join(f"g{j}" for j in subset) if subset else "I"


# expression parsing -----------------------------------------------------------


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "+-*()":
            tokens.append((c, c, i))
            i += 1
        elif c in "I1":
            tokens.append(("I", None, i))
            i += 1
        elif c == "g":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ExpressionError("expected a generator number after 'g'", i + 1)
            tokens.append(("g", int(text[i + 1 : j]), i))
            i = j
        else:
            raise ExpressionError(f"unexpected character {c!r}", i)
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    """Recursive descent over ``sum := [+-]? term ([+-] term)*``,
    ``term := factor ('*'? factor)*`` and ``factor := I | 1 | gN | '(' sum ')'``.

    Values are lists of ``(sign, subset)``; multiplication distributes left to
    right and takes symmetric differences, because generators commute and
    square to the identity.
    """

    def __init__(self, text: str, n_g: int):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.n_g = n_g

    def peek(self) -> tuple[str, object, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, object, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> list[Term]:
        value = self.sum()
        kind, _, at = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected {kind!r}", at)
        return value

    def sum(self) -> list[Term]:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        out = [(sign * s, S) for s, S in self.term()]
        while self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            out.extend((sign * s, S) for s, S in self.term())
        return out

    def term(self) -> list[Term]:
        value = self.factor()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
            elif kind not in ("I", "g", "("):
                return value
            right = self.factor()
            value = [(a * b, A ^ B) for a, A in value for b, B in right]

    def factor(self) -> list[Term]:
        kind, val, at = self.take()
        if kind == "I":
            return [(1, frozenset())]
        if kind == "g":
            if not 1 <= val <= self.n_g:
                raise ExpressionError(f"unknown generator g{val} (have g1..g{self.n_g})", at)
            return [(1, frozenset({val}))]
        if kind == "(":
            inner = self.sum()
            kind, _, at = self.take()
            if kind != ")":
                raise ExpressionError("expected ')'", at)
            return inner
        raise ExpressionError(f"expected a factor, found {kind!r}", at)


def parse_expression(text: str, gs: GeneratorSet) -> BellOperator:
    """Expand a factored expression such as ``g2*g5*(I+g1)*(I+g3)``.

    Like terms are never merged; an expansion producing the same generator
    subset twice is rejected.
    """
    terms = _Parser(text, gs.n_g).parse()
    seen: dict[frozenset[int], int] = {}
    for idx, (_, S) in enumerate(terms):
        if S in seen:
            raise ExpressionError(
                f"expansion repeats the term {_subset_text(S)} (terms {seen[S] + 1} and {idx + 1})"
            )
        seen[S] = idx
    return BellOperator(gs, tuple(terms), expression=text)


def from_pauli_terms(
    terms: Iterable[PauliString | str | tuple[int, PauliString | str]], gs: GeneratorSet
) -> BellOperator:
    """Build an operator from signed Pauli strings, e.g. ``["+XIXZ", "-ZYXY"]``."""
    out = []
    for t in terms:
        if isinstance(t, tuple):
            sign, p = t
            p = p if isinstance(p, PauliString) else PauliString.from_str(p)
            p = p.with_sign(int(sign))
        else:
            p = t if isinstance(t, PauliString) else PauliString.from_str(t)
        subset, sign = decompose(gs, p)
        out.append((sign, subset))
    return BellOperator(gs, tuple(out))


# local-realistic bound ---------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    m: int
    q: int
    witness: dict[tuple[int, str], int]
    heuristic: bool = False

    @property
    def local_bound(self) -> int:
        return 2 * self.q - self.m

    @property
    def degree(self) -> float:
        L = self.local_bound
        return math.inf if L == 0 else self.m / L

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "q": self.q,
            "local_bound": self.local_bound,
            "degree": self.degree,
            "heuristic": self.heuristic,
            "witness": {f"{c}{j}": v for (j, c), v in sorted(self.witness.items())},
        }


def local_value(b: BellOperator, assignment: dict[tuple[int, str], int]) -> list[int]:
    """+/-1 value of every term under a local-realistic assignment.

    Pairs missing from ``assignment`` count as +1.
    """
    values = []
    for p in b.pauli_terms:
        v = p.sign
        for j in p.support:
            v *= assignment.get((j, p.letter(j)), 1)
        values.append(v)
    return values


def _variables(b: BellOperator, skip_z: bool) -> list[tuple[int, str]]:
    pairs = {
        (j, p.letter(j))
        for p in b.pauli_terms
        for j in p.support
        if not (skip_z and p.letter(j) == "Z")
    }
    return sorted(pairs)


def local_bound(b: BellOperator, use_z_plus_tip: bool = False) -> BoundReport:
    """Maximum number ``q`` of terms that a +/-1 assignment can make positive.

    The search runs depth-first over the occurring (qubit, letter) pairs in
    sorted order, trying +1 before -1, and prunes any branch that cannot beat
    the best count found so far.  The reported witness is therefore the
    lexicographically first optimal assignment.  With ``use_z_plus_tip`` all Z
    values are pinned to +1 and the report is flagged heuristic.
    """
    pairs = _variables(b, use_z_plus_tip)
    nv = len(pairs)
    if nv > MAX_ASSIGNMENT_VARIABLES:
        raise ValueError(f"{nv} assignment variables exceed the search guard of {MAX_ASSIGNMENT_VARIABLES}")
    index = {p: i for i, p in enumerate(pairs)}

    constant_ok = 0
    closing: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(nv)]
    for p in b.pauli_terms:
        target = 0 if p.sign == 1 else 1
        vs = tuple(index[(j, p.letter(j))] for j in p.support if (j, p.letter(j)) in index)
        if vs:
            closing[max(vs)].append((target, vs))
        else:
            constant_ok += target == 0
    remaining_after = [0] * (nv + 1)
    for d in range(nv - 1, -1, -1):
        remaining_after[d] = remaining_after[d + 1] + len(closing[d])

    y = [0] * nv
    best = -1
    best_y: list[int] = []

    def dfs(d: int, sat: int) -> bool:
        nonlocal best, best_y
        if sat + remaining_after[d] <= best:
            return False
        if d == nv:
            best, best_y = sat, y.copy()
            return best == b.m
        for bit in (0, 1):
            y[d] = bit
            gained = 0
            for target, vs in closing[d]:
                par = 0
                for v in vs:
                    par ^= y[v]
                gained += par == target
            if dfs(d + 1, sat + gained):
                return True
        return False

    dfs(0, constant_ok)
    witness = {pair: 1 - 2 * bit for pair, bit in zip(pairs, best_y)}
    if use_z_plus_tip:
        for p in b.pauli_terms:
            for j in p.support:
                if p.letter(j) == "Z":
                    witness[(j, "Z")] = 1
    return BoundReport(m=b.m, q=best, witness=witness, heuristic=use_z_plus_tip)


# GHZ-type contradiction ---------------------------------------------------------


def _letter_incidence(b: BellOperator) -> tuple[np.ndarray, np.ndarray]:
    pairs = _variables(b, skip_z=False)
    index = {p: i for i, p in enumerate(pairs)}
    mat = np.zeros((b.m, len(pairs)), dtype=np.uint8)
    for row, p in enumerate(b.pauli_terms):
        for j in p.support:
            mat[row, index[(j, p.letter(j))]] = 1
    signs = np.array([0 if p.sign == 1 else 1 for p in b.pauli_terms], dtype=np.uint8)
    return mat, signs


def find_contradiction(b: BellOperator) -> tuple[int, ...] | None:
    """Positions (0-based) of terms forming a GHZ-type contradiction, if any.

    A set of terms contradicts local realism when every (qubit, letter) pair
    occurs an even number of times among them, so any assignment makes the
    product of their letter values +1, while the product of their signs is -1.
    Letter evenness makes every generator occur an even number of times, so
    the group elements multiply to +I; when all term signs are +1 in subset
    form the product of the unsigned letter words is therefore exactly -I.
    Such a set exists iff the sign vector is outside the column space of the
    term/letter incidence matrix over GF(2).
    """
    mat, signs = _letter_incidence(b)
    if mat.shape[1] == 0:
        return (signs.tolist().index(1),) if signs.any() else None
    left_null = gf2.nullspace(mat.T)
    for t in left_null:
        if int(t @ signs) % 2 == 1:
            return tuple(int(i) for i in np.nonzero(t)[0])
    return None


def contradiction_check(b: BellOperator) -> bool:
    return find_contradiction(b) is not None


# desk-scale search ---------------------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    operator: BellOperator
    q: int

    @property
    def m(self) -> int:
        return self.operator.m

    @property
    def local_bound(self) -> int:
        return 2 * self.q - self.m

    @property
    def degree(self) -> float:
        L = self.local_bound
        return math.inf if L == 0 else self.m / L


def search_bell_operators(
    gs: GeneratorSet,
    max_m: int,
    min_degree: float,
    max_elements: int = MAX_SEARCH_ELEMENTS,
) -> list[SearchResult]:
    """Every set of at most ``max_m`` group elements with violation degree >= ``min_degree``.

    Terms carry the natural sign of their group element, so the graph state
    (or code space) always reaches the algebraic maximum.  Results are sorted
    by degree, then term count (both descending), then by the sorted element
    bit masks.
    """
    elements = group_elements(gs)
    if len(elements) > max_elements:
        raise ValueError(f"{len(elements)} group elements exceed the search guard of {max_elements}")
    full = BellOperator(gs, tuple((1, subset_of_mask(mask)) for mask in range(len(elements))))
    pairs = _variables(full, skip_z=False)
    if len(pairs) > MAX_ASSIGNMENT_VARIABLES:
        raise ValueError("too many assignment variables for the search")

    # bit e of positive[a] is set when element e evaluates to +1 under assignment a
    values = np.ones((1 << len(pairs), len(elements)), dtype=np.int8)
    assign = ((np.arange(1 << len(pairs))[:, None] >> np.arange(len(pairs))[None, :]) & 1).astype(np.int8)
    index = {p: i for i, p in enumerate(pairs)}
    for e, p in enumerate(full.pauli_terms):
        col = np.full(assign.shape[0], p.sign, dtype=np.int8)
        for j in p.support:
            col *= 1 - 2 * assign[:, index[(j, p.letter(j))]]
        values[:, e] = col
    weights = (1 << np.arange(len(elements))).astype(np.int64)
    positive = np.unique(((values > 0).astype(np.int64) * weights).sum(axis=1))

    masks = np.arange(1, 1 << len(elements), dtype=np.int64)
    sizes = np.bitwise_count(masks)
    masks = masks[sizes <= max_m]
    sizes = np.bitwise_count(masks).astype(np.int64)
    q = np.zeros(masks.shape, dtype=np.int64)
    for pmask in positive:
        np.maximum(q, np.bitwise_count(masks & pmask), out=q)
    L = 2 * q - sizes
    with np.errstate(divide="ignore"):
        degree = np.where(L > 0, sizes / np.maximum(L, 1), np.inf)
    keep = np.nonzero(degree >= min_degree)[0]

    results = []
    for i in keep:
        mask = int(masks[i])
        terms = tuple((1, subset_of_mask(e)) for e in range(len(elements)) if mask >> e & 1)
        results.append(SearchResult(BellOperator(gs, terms), int(q[i])))
    results.sort(
        key=lambda r: (-r.degree, -r.m, [sorted(S) for _, S in r.operator.terms])
    )
    return results


def stabilizes(b: BellOperator) -> bool:
    """True when every term has sign +1 in generator-subset form."""
    return all(s == 1 for s, _ in b.terms)

