"""Linear algebra over GF(2) on dense ``uint8`` matrices."""
from __future__ import annotations

import itertools
from typing import Iterator

import numpy as np


def as_gf2(a) -> np.ndarray:
    """Copy ``a`` into a 2-D ``uint8`` array reduced mod 2."""
    arr = np.array(a, dtype=np.int64) & 1
    if arr.ndim == 1:
        arr = arr[None, :]
    return arr.astype(np.uint8)


def rref(a) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` over GF(2) and its pivot columns."""
    m = as_gf2(a)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if others.size:
            m[others] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def solve(a, b) -> np.ndarray | None:
    """One solution ``x`` of ``a @ x = b`` (mod 2), free variables set to zero.

    Returns ``None`` when the system is inconsistent.
    """
    a = as_gf2(a)
    b = np.asarray(b, dtype=np.uint8).reshape(-1) & 1
    rows, cols = a.shape
    if b.shape[0] != rows:
        raise ValueError(f"right-hand side has {b.shape[0]} entries, expected {rows}")
    aug, pivots = rref(np.hstack([a, b[:, None]]))
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for r, c in enumerate(pivots):
        x[c] = aug[r, cols]
    return x


def nullspace(a) -> np.ndarray:
    """Basis of the right nullspace of ``a``, one vector per row.

    Basis vector ``i`` has a single 1 among the free columns, at the i-th free
    column in increasing order.
    """
    a = as_gf2(a)
    cols = a.shape[1]
    red, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, c in enumerate(pivots):
            basis[i, c] = red[r, f]
    return basis


def span(basis: np.ndarray) -> Iterator[np.ndarray]:
    """Every GF(2) combination of the rows of ``basis``, the zero vector first."""
    k, cols = basis.shape if basis.size else (0, basis.shape[-1] if basis.ndim == 2 else 0)
    for coeffs in itertools.product((0, 1), repeat=k):
        v = np.zeros(cols, dtype=np.uint8)
        for c, row in zip(coeffs, basis):
            if c:
                v ^= row
        yield v
