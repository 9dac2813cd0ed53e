"""Representations built from the standard one by tensor operations.

A tensor word is an expression tree over ``Std``, ``Dual``, ``Tensor``,
``Sum``, ``Exterior``, ``Det`` and ``Irrep``. Evaluated against a root
datum G (realized as block-diagonal matrices), a word gives

* ``rho(G, g)``: the matrix of a group element, exactly;
* ``lie(G, i, j)``: the derived action of the matrix unit E_ij, sparse;
* ``basis_weights(G)``: the torus weight of every basis vector;
* ``character(G)``: the character, computed through the representation ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from . import linalg as la
from .lattice import RootDatum, Weight
from .repring import Character, exterior_power_character, weyl_character


def _block(G: RootDatum, factor: int) -> tuple[int, int]:
    blocks = G.blocks()
    if not 0 <= factor < len(blocks):
        raise ValueError(f"{G} has no factor {factor}")
    return blocks[factor]


class TensorWord:
    """Base class; subclasses are frozen dataclasses."""

    def dim(self, G: RootDatum) -> int:
        raise NotImplementedError

    def rho(self, G: RootDatum, g) -> np.ndarray:
        raise NotImplementedError

    def lie(self, G: RootDatum, i: int, j: int) -> dict:
        raise NotImplementedError

    def basis_weights(self, G: RootDatum) -> list[Weight]:
        raise NotImplementedError

    def character(self, G: RootDatum) -> Character:
        raise NotImplementedError

    def central_degree(self, G: RootDatum) -> Optional[tuple]:
        """Degree under scaling each factor block by a scalar; None if mixed."""
        raise NotImplementedError

    def leaf_degree(self) -> int:
        """Number of Std/Dual leaves, exterior powers counted r times."""
        raise NotImplementedError

    def is_irreducible(self) -> bool:
        return False

    def lie_matrix(self, G: RootDatum, i: int, j: int) -> np.ndarray:
        d = self.dim(G)
        M = la.zeros(d, d)
        for (r, c), v in self.lie(G, i, j).items():
            M[r, c] = la.to_fraction(v)
        return M

    # convenience combinators
    def __matmul__(self, other: "TensorWord") -> "Tensor":
        return Tensor((self, other))

    def __add__(self, other: "TensorWord") -> "Sum":
        return Sum((self, other))


@dataclass(frozen=True)
class Std(TensorWord):
    factor: int = 0

    def dim(self, G):
        a, b = _block(G, self.factor)
        return b - a

    def rho(self, G, g):
        a, b = _block(G, self.factor)
        return np.array(g[a:b, a:b], dtype=object)

    def lie(self, G, i, j):
        a, b = _block(G, self.factor)
        if a <= i < b and a <= j < b:
            return {(i - a, j - a): 1}
        return {}

    def basis_weights(self, G):
        a, b = _block(G, self.factor)
        out = []
        for k in range(a, b):
            w = [0] * G.dim
            w[k] = 1
            out.append(G.normalize(w))
        return out

    def character(self, G):
        return Character(G, {w: 1 for w in self.basis_weights(G)})

    def central_degree(self, G):
        return tuple(int(k == self.factor) for k in range(len(G.factors)))

    def leaf_degree(self):
        return 1

    def is_irreducible(self):
        return True

    def __str__(self):
        return "std" if self.factor == 0 else f"std{self.factor}"


@dataclass(frozen=True)
class Dual(TensorWord):
    arg: TensorWord

    def dim(self, G):
        return self.arg.dim(G)

    def rho(self, G, g):
        return la.inverse(self.arg.rho(G, g)).T

    def lie(self, G, i, j):
        return {(c, r): -v for (r, c), v in self.arg.lie(G, i, j).items()}

    def basis_weights(self, G):
        return [G.normalize([-x for x in w]) for w in self.arg.basis_weights(G)]

    def character(self, G):
        return self.arg.character(G).dual()

    def central_degree(self, G):
        d = self.arg.central_degree(G)
        return None if d is None else tuple(-x for x in d)

    def leaf_degree(self):
        return self.arg.leaf_degree()

    def is_irreducible(self):
        return self.arg.is_irreducible()

    def __str__(self):
        return f"dual({self.arg})"


@dataclass(frozen=True)
class Tensor(TensorWord):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("empty tensor product")

    def dim(self, G):
        d = 1
        for a in self.args:
            d *= a.dim(G)
        return d

    def rho(self, G, g):
        out = self.args[0].rho(G, g)
        for a in self.args[1:]:
            out = la.kron(out, a.rho(G, g))
        return out

    def lie(self, G, i, j):
        out = self.args[0].lie(G, i, j)
        dA = self.args[0].dim(G)
        for a in self.args[1:]:
            dB = a.dim(G)
            Y = a.lie(G, i, j)
            new: dict = {}
            for (r, c), v in out.items():
                for k in range(dB):
                    key = (r * dB + k, c * dB + k)
                    new[key] = new.get(key, 0) + v
            for (r, c), v in Y.items():
                for k in range(dA):
                    key = (k * dB + r, k * dB + c)
                    new[key] = new.get(key, 0) + v
            out = {k: v for k, v in new.items() if v}
            dA *= dB
        return out

    def basis_weights(self, G):
        out = self.args[0].basis_weights(G)
        for a in self.args[1:]:
            ws = a.basis_weights(G)
            out = [G.normalize([x + y for x, y in zip(u, v)]) for u in out for v in ws]
        return out

    def character(self, G):
        out = self.args[0].character(G)
        for a in self.args[1:]:
            out = out * a.character(G)
        return out

    def central_degree(self, G):
        degs = [a.central_degree(G) for a in self.args]
        if any(d is None for d in degs):
            return None
        return tuple(sum(col) for col in zip(*degs))

    def leaf_degree(self):
        return sum(a.leaf_degree() for a in self.args)

    def is_irreducible(self):
        return all(isinstance(a, Det) for a in self.args[1:]) and self.args[0].is_irreducible()

    def __str__(self):
        return "(" + " (x) ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Sum(TensorWord):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("empty direct sum")

    def dim(self, G):
        return sum(a.dim(G) for a in self.args)

    def rho(self, G, g):
        return la.block_diag(*[a.rho(G, g) for a in self.args])

    def lie(self, G, i, j):
        out, off = {}, 0
        for a in self.args:
            for (r, c), v in a.lie(G, i, j).items():
                out[(r + off, c + off)] = v
            off += a.dim(G)
        return out

    def basis_weights(self, G):
        return [w for a in self.args for w in a.basis_weights(G)]

    def character(self, G):
        out = self.args[0].character(G)
        for a in self.args[1:]:
            out = out + a.character(G)
        return out

    def central_degree(self, G):
        degs = {a.central_degree(G) for a in self.args}
        return degs.pop() if len(degs) == 1 else None

    def leaf_degree(self):
        return max(a.leaf_degree() for a in self.args)

    def __str__(self):
        return "(" + " (+) ".join(map(str, self.args)) + ")"


def _sort_sign(seq: list[int]) -> tuple[tuple, int]:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return tuple(seq), sign


@dataclass(frozen=True)
class Exterior(TensorWord):
    arg: TensorWord
    r: int

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("negative exterior power")

    def dim(self, G):
        return comb(self.arg.dim(G), self.r)

    def rho(self, G, g):
        return la.compound(self.arg.rho(G, g), self.r)

    def lie(self, G, i, j):
        d = self.arg.dim(G)
        subsets = list(combinations(range(d), self.r))
        index = {s: k for k, s in enumerate(subsets)}
        X = self.arg.lie(G, i, j)
        by_col: dict = {}
        for (row, col), v in X.items():
            by_col.setdefault(col, []).append((row, v))
        out: dict = {}
        for k, S in enumerate(subsets):
            for p, s in enumerate(S):
                for t, v in by_col.get(s, ()):
                    if t == s:
                        out[(k, k)] = out.get((k, k), 0) + v
                    elif t not in S:
                        new = list(S)
                        new[p] = t
                        key, sign = _sort_sign(new)
                        pos = (index[key], k)
                        out[pos] = out.get(pos, 0) + sign * v
        return {k: v for k, v in out.items() if v}

    def basis_weights(self, G):
        ws = self.arg.basis_weights(G)
        out = []
        for S in combinations(range(len(ws)), self.r):
            tot = [0] * G.dim
            for s in S:
                tot = [x + y for x, y in zip(tot, ws[s])]
            out.append(G.normalize(tot))
        return out

    def character(self, G):
        return exterior_power_character(self.arg.character(G), self.r)

    def central_degree(self, G):
        d = self.arg.central_degree(G)
        return None if d is None else tuple(self.r * x for x in d)

    def leaf_degree(self):
        return self.r * self.arg.leaf_degree()

    def is_irreducible(self):
        return isinstance(self.arg, Std) or (isinstance(self.arg, Dual) and isinstance(self.arg.arg, Std))

    def __str__(self):
        return f"ext{self.r}({self.arg})"


@dataclass(frozen=True)
class Det(TensorWord):
    """Power of the determinant of one factor block, or of the whole matrix."""

    power: int
    factor: Optional[int] = None

    def _range(self, G):
        return (0, G.dim) if self.factor is None else _block(G, self.factor)

    def dim(self, G):
        return 1

    def rho(self, G, g):
        a, b = self._range(G)
        d = la.det(np.array(g[a:b, a:b], dtype=object))
        return la.qmat([[d ** self.power]])

    def lie(self, G, i, j):
        a, b = self._range(G)
        return {(0, 0): self.power} if i == j and a <= i < b and self.power else {}

    def basis_weights(self, G):
        a, b = self._range(G)
        return [G.normalize([self.power * int(a <= k < b) for k in range(G.dim)])]

    def character(self, G):
        return Character(G, {self.basis_weights(G)[0]: 1})

    def central_degree(self, G):
        a, b = self._range(G)
        return tuple(self.power * (min(b, y) - max(a, x)) if x < b and a < y else 0 for x, y in G.blocks())

    def leaf_degree(self):
        return 0

    def is_irreducible(self):
        return True

    def __str__(self):
        tag = "" if self.factor is None else str(self.factor)
        return f"det{tag}^{self.power}"


@dataclass(frozen=True)
class Irrep(TensorWord):
    """The irreducible representation with the given dominant highest weight."""

    weight: tuple

    def __post_init__(self):
        object.__setattr__(self, "weight", tuple(int(x) for x in self.weight))

    def _data(self, G):
        return _irrep_data(G, G.normalize(self.weight))

    def dim(self, G):
        return self._data(G)[1].shape[1]

    def rho(self, G, g):
        inner, B, L, _ = self._data(G)
        return L @ inner.rho(G, g) @ B

    def lie(self, G, i, j):
        inner, B, L, _ = self._data(G)
        M = L @ inner.lie_matrix(G, i, j) @ B
        return {(r, c): M[r, c] for r in range(M.shape[0]) for c in range(M.shape[1]) if M[r, c]}

    def basis_weights(self, G):
        return list(self._data(G)[3])

    def character(self, G):
        return weyl_character(G, self.weight)

    def central_degree(self, G):
        w = G.normalize(self.weight)
        return tuple(sum(w[a:b]) for a, b in G.blocks())

    def leaf_degree(self):
        return sum(abs(x) for x in self.weight)

    def is_irreducible(self):
        return True

    def __str__(self):
        return f"irrep{self.weight}"


def highest_weight_word(G: RootDatum, lam) -> TensorWord:
    """Tensor product of exterior powers (and a determinant twist) whose first
    basis vector is a highest weight vector of weight ``lam``."""
    parts: list[TensorWord] = []
    for f, (a, b) in enumerate(G.blocks()):
        piece = lam[a:b]
        shift = piece[-1]
        mu = [x - shift for x in piece]
        for j in range(1, (mu[0] if mu else 0) + 1):
            parts.append(Exterior(Std(f), sum(1 for x in mu if x >= j)))
        if shift:
            parts.append(Det(shift, f))
    if not parts:
        parts.append(Det(0))
    return parts[0] if len(parts) == 1 else Tensor(tuple(parts))


def _reduce(v: dict, basis: list) -> dict:
    for piv, b in basis:
        c = v.get(piv)
        if c:
            for k, x in b.items():
                nv = v.get(k, 0) - c * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
    return v


@lru_cache(maxsize=None)
def _irrep_data(G: RootDatum, lam: tuple):
    if not G.is_dominant(lam):
        raise ValueError(f"{lam} is not dominant for {G}")
    inner = highest_weight_word(G, lam)
    ops = []
    for a, b in G.blocks():
        for i in range(a, b):
            for j in range(a, b):
                if i != j:
                    X = inner.lie(G, i, j)
                    cols: dict = {}
                    for (r, c), v in X.items():
                        cols.setdefault(c, []).append((r, la.to_fraction(v)))
                    shift = [0] * G.dim
                    shift[i] += 1
                    shift[j] -= 1
                    ops.append((cols, tuple(shift)))
    spaces: dict = {}
    order: list = []
    queue = [({0: la.to_fraction(1)}, G.normalize(lam))]
    spaces[G.normalize(lam)] = [(0, {0: la.to_fraction(1)})]
    order.append((G.normalize(lam), {0: la.to_fraction(1)}))
    while queue:
        v, w = queue.pop()
        for cols, shift in ops:
            out: dict = {}
            for c, x in v.items():
                for r, y in cols.get(c, ()):
                    out[r] = out.get(r, 0) + x * y
            out = {k: x for k, x in out.items() if x}
            if not out:
                continue
            w2 = G.normalize([p + q for p, q in zip(w, shift)])
            basis = spaces.setdefault(w2, [])
            out = _reduce(out, basis)
            if not out:
                continue
            piv = min(out)
            inv = 1 / out[piv]
            out = {k: x * inv for k, x in out.items()}
            for idx, (p, b) in enumerate(basis):
                c = b.get(piv)
                if c:
                    nb = dict(b)
                    for k, x in out.items():
                        nv = nb.get(k, 0) - c * x
                        if nv:
                            nb[k] = nv
                        else:
                            nb.pop(k, None)
                    basis[idx] = (p, nb)
            basis.append((piv, out))
            queue.append((out, w2))
    D = inner.dim(G)
    cols = []
    weights = []
    for w in sorted(spaces, reverse=True):
        for _, b in sorted(spaces[w], key=lambda pb: pb[0]):
            cols.append(b)
            weights.append(w)
    B = la.zeros(D, len(cols))
    for c, b in enumerate(cols):
        for k, x in b.items():
            B[k, c] = x
    L = la.left_inverse(B)
    return inner, B, L, tuple(weights)


def std(factor: int = 0) -> Std:
    return Std(factor)


def dual(w: TensorWord) -> Dual:
    return Dual(w)


def tensor(*ws: TensorWord) -> Tensor:
    return Tensor(tuple(ws))


def direct_sum(*ws: TensorWord) -> Sum:
    return Sum(tuple(ws))


def exterior(w: TensorWord, r: int) -> Exterior:
    return Exterior(w, r)


def det(power: int = 1, factor: Optional[int] = None) -> Det:
    return Det(power, factor)


def irrep(weight) -> Irrep:
    return Irrep(tuple(weight))
