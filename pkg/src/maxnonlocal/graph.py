"""Simple graphs on vertices 1..n and their graph-state stabilizer generators."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable

from .pauli import PauliString
from .stabilizer import GeneratorSet

FAMILIES = ("linear", "ring", "star", "complete")


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = ()):
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        norm = set()
        for e in edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"edge ({i}, {j}) leaves vertex range 1..{n}")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(norm))

    def neighbors(self, v: int) -> frozenset[int]:
        self._check_vertex(v)
        return frozenset(j if i == v else i for i, j in self.edges if v in (i, j))

    def _check_vertex(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} outside 1..{self.n}")

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        return cls(int(data["n"]), data.get("edges", []))


def family(kind: str, n: int) -> Graph:
    """Linear cluster, ring, star rooted at vertex 1, or complete graph."""
    if n < 2:
        raise ValueError(f"graph families need n >= 2, got {n}")
    if kind == "linear":
        edges = [(i, i + 1) for i in range(1, n)]
    elif kind == "ring":
        edges = [(i, i + 1) for i in range(1, n)]
        if n > 2:
            edges.append((1, n))
    elif kind == "star":
        edges = [(1, j) for j in range(2, n + 1)]
    elif kind == "complete":
        edges = list(itertools.combinations(range(1, n + 1), 2))
    else:
        raise ValueError(f"unknown graph family {kind!r}; choose from {', '.join(FAMILIES)}")
    return Graph(n, edges)


def generators(g: Graph) -> GeneratorSet:
    """``g_j = X_j prod_{k in N(j)} Z_k`` for j = 1..n."""
    gens = []
    for j in range(1, g.n + 1):
        nb = g.neighbors(j)
        word = "".join("X" if v == j else ("Z" if v in nb else "I") for v in range(1, g.n + 1))
        gens.append(PauliString.from_letters(word))
    return GeneratorSet(gens)


def local_complement(g: Graph, v: int) -> Graph:
    """Toggle every edge between two neighbours of ``v``."""
    nb = sorted(g.neighbors(v))
    edges = set(g.edges)
    for pair in itertools.combinations(nb, 2):
        edges ^= {pair}
    return Graph(g.n, edges)
