"""Seeded exact random sampling of rationals, matrices and group elements.

All draws come from a fixed finite set of small rationals. A stream is a
``random.Random`` seeded with an integer; independent points use
``point_rng(seed, index)`` so that results never depend on evaluation order.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from . import linalg as la
from .lattice import RootDatum

SMALL_RATIONALS = tuple(
    sorted({Fraction(p, q) for p in range(-4, 5) for q in (1, 2, 3) if p}, key=lambda x: (abs(x), x))
)
SMALL_INTEGERS = (-3, -2, -1, 1, 2, 3)


def point_rng(seed: int, index: int) -> random.Random:
    return random.Random((int(seed) << 32) + int(index))


def rational(rng: random.Random, allow_zero: bool = True) -> Fraction:
    if allow_zero and rng.random() < 0.2:
        return Fraction(0)
    return rng.choice(SMALL_RATIONALS)


def rational_matrix(rng: random.Random, m: int, n: int) -> np.ndarray:
    return la.qmat([[rational(rng) for _ in range(n)] for _ in range(m)])


def invertible_matrix(rng: random.Random, n: int) -> np.ndarray:
    while True:
        M = rational_matrix(rng, n, n)
        if la.det(M) != 0:
            return M


def special_matrix(rng: random.Random, n: int) -> np.ndarray:
    """Random element of SL(n, Q): a random invertible matrix with its first row rescaled."""
    M = invertible_matrix(rng, n)
    d = la.det(M)
    M[0, :] = M[0, :] / d
    return M


def elementary(n: int, i: int, j: int, c) -> np.ndarray:
    E = la.eye(n)
    E[i, j] = la.to_fraction(c)
    return E


def group_element(G: RootDatum, rng: random.Random) -> np.ndarray:
    """Random element of G in its block-diagonal realization."""
    blocks = []
    for kind, n in G.factors:
        blocks.append(special_matrix(rng, n) if kind == "SL" else invertible_matrix(rng, n))
    return la.block_diag(*blocks)


def torus_element(G: RootDatum, rng: random.Random) -> np.ndarray:
    entries = []
    for kind, n in G.factors:
        block = [rng.choice(SMALL_RATIONALS) for _ in range(n)]
        if kind == "SL":
            prod = Fraction(1)
            for x in block[:-1]:
                prod *= x
            block[-1] = 1 / prod
        entries.extend(block)
    return la.diag(entries)


def elementary_generators(G: RootDatum) -> list[np.ndarray]:
    """Unipotent elementary matrices and simple diagonal elements of G."""
    N = G.dim
    out = []
    for (kind, n), (a, b) in zip(G.factors, G.blocks()):
        for i in range(a, b):
            for j in range(a, b):
                if i != j:
                    out.append(elementary(N, i, j, 1))
        for i in range(a, b):
            if kind == "GL":
                d = [1] * N
                d[i] = 2
                out.append(la.diag(d))
            elif i + 1 < b:
                d = [1] * N
                d[i], d[i + 1] = Fraction(2), Fraction(1, 2)
                out.append(la.diag(d))
    return out
