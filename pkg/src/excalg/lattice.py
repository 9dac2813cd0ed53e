"""Integer lattices, character lattices of GL/SL/tori, and Weyl group actions.

Weights are tuples of ints in *ambient* coordinates: one coordinate per
matrix row of the standard block-diagonal realization. For an SL(n) factor
the lattice is Z^n / Z(1,...,1) and a weight is stored with its last
coordinate normalized to 0. Lattice maps (automorphisms, Weyl elements)
act on *lattice* coordinates, which drop that redundant last coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Sequence

Weight = tuple  # tuple[int, ...]
IntMatrix = tuple  # tuple[tuple[int, ...], ...]


def _mat(rows) -> list[list[int]]:
    return [[int(x) for x in r] for r in rows]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _freeze(rows) -> IntMatrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def matmul(A, B) -> IntMatrix:
    if not A:
        return ()
    inner = len(B)
    cols = len(B[0]) if B else 0
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols))
        for i in range(len(A))
    )


def matvec(A, v) -> Weight:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


@dataclass(frozen=True)
class LatticeMap:
    """Integer matrix acting on column vectors (rows = target rank)."""

    matrix: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", _freeze(self.matrix))

    @classmethod
    def identity(cls, n: int) -> "LatticeMap":
        return cls(_identity(n))

    @property
    def shape(self) -> tuple[int, int]:
        rows = len(self.matrix)
        return rows, (len(self.matrix[0]) if rows else 0)

    def __call__(self, v: Sequence[int]) -> Weight:
        return matvec(self.matrix, v)

    def __matmul__(self, other: "LatticeMap") -> "LatticeMap":
        return LatticeMap(matmul(self.matrix, other.matrix))

    def __pow__(self, k: int) -> "LatticeMap":
        if k < 0:
            raise ValueError("negative powers of lattice maps are not supported")
        out = LatticeMap.identity(self.shape[0])
        for _ in range(k):
            out = out @ self
        return out

    def is_identity(self) -> bool:
        n, m = self.shape
        return n == m and self.matrix == _freeze(_identity(n))

    def order(self, bound: int = 120) -> int | None:
        """Smallest k >= 1 with self**k = id, or None if none up to ``bound``."""
        P = self
        for k in range(1, bound + 1):
            if P.is_identity():
                return k
            P = P @ self
        return None

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]


# --------------------------------------------------------------------------
# Smith and Hermite normal forms


def smith_normal_form(M) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with M = U D V, U and V unimodular, D diagonal with
    nonnegative d1 | d2 | ...

    Pivot: the nonzero entry of least absolute value in the remaining
    submatrix, first in row-major order.
    """
    U, D, V, _ = _snf(M)
    return _freeze(U), _freeze(D), _freeze(V)


def _snf(M):
    A = _mat(M)
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)
    Vinv = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        for row in U:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        V[i], V[j] = V[j], V[i]
        for row in Vinv:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        for row in U:
            row[src] -= q * row[dst]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in A:
            row[dst] += q * row[src]
        V[src] = [a - q * b for a, b in zip(V[src], V[dst])]
        for row in Vinv:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        p = A[t][t]
        clean = True
        for i in range(t + 1, m):
            q = A[i][t] // p
            if q:
                add_row(i, t, -q)
            clean &= A[i][t] == 0
        for j in range(t + 1, n):
            q = A[t][j] // p
            if q:
                add_col(j, t, -q)
            clean &= A[t][j] == 0
        if not clean:
            continue
        bad = next(
            (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
            None,
        )
        if bad is not None:
            add_row(t, bad, 1)
            continue
        if p < 0:
            A[t] = [-a for a in A[t]]
            for row in U:
                row[t] = -row[t]
        t += 1
    return U, A, V, Vinv


def invariant_factors(M) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def hermite_normal_form(rows: Iterable[Sequence[int]]) -> list[Weight]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Positive pivots, entries above a pivot reduced into [0, pivot); zero rows
    dropped. Two generating sets of the same lattice give the same output.
    """
    A = [list(map(int, r)) for r in rows]
    if not A:
        return []
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c]]
            if not nz:
                break
            k = min(nz, key=lambda i: (abs(A[i][c]), i))
            A[r], A[k] = A[k], A[r]
            done = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    done &= A[i][c] == 0
            if done:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        r += 1
    return [tuple(row) for row in A[:r] if any(row)]


def kernel_basis(M) -> list[Weight]:
    """Hermite-reduced Z-basis of the integer kernel of ``M``."""
    M = _mat(M)
    n = len(M[0]) if M else 0
    if not M:
        return hermite_normal_form(_identity(n))
    _, D, _, Vinv = _snf(M)
    s = sum(1 for i in range(min(len(D), n)) if D[i][i])
    cols = [[Vinv[i][j] for i in range(n)] for j in range(s, n)]
    return hermite_normal_form(cols)


def fixed_sublattice(A: LatticeMap) -> list[Weight]:
    """Hermite-reduced Z-basis of ker(A - id)."""
    n, m = A.shape
    if n != m:
        raise ValueError("fixed_sublattice needs a square map")
    B = [[A.matrix[i][j] - (i == j) for j in range(n)] for i in range(n)]
    return kernel_basis(B)


def cokernel_invariant_factors(f) -> tuple[int, list[int]]:
    """(free rank, invariant factors) of coker(f: Z^k -> Z^m).

    Factors equal to 1 are kept, so ``len(factors)`` is the rank of the image.
    """
    M = f.matrix if isinstance(f, LatticeMap) else _freeze(f)
    m = len(M)
    if m == 0:
        return 0, []
    if not M[0]:
        return m, []
    factors = invariant_factors(M)
    return m - len(factors), factors


def coordinates_in_basis(basis: Sequence[Weight], v: Sequence[int]) -> Weight:
    """Integer coordinates of ``v`` in a Hermite-reduced ``basis`` (raises if absent)."""
    from fractions import Fraction

    from .linalg import qmat, solve

    if not basis:
        if any(v):
            raise ValueError(f"{tuple(v)} is not in the zero lattice")
        return ()
    B = qmat([list(b) for b in basis]).T
    x = solve(B, qmat([[c] for c in v])[:, 0])
    if x is None or any(Fraction(c).denominator != 1 for c in x):
        raise ValueError(f"{tuple(v)} is not in the lattice spanned by {basis}")
    return tuple(int(c) for c in x)


# --------------------------------------------------------------------------
# Root data


@dataclass(frozen=True)
class RootDatum:
    """GL(n), SL(n), a split torus, or a finite product of these.

    ``factors`` lists (kind, n) with kind in {"GL", "SL"}; a torus of rank r
    is r copies of ("GL", 1). The matrix realization is block diagonal.
    """

    family: str
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((str(k), int(n)) for k, n in self.factors))
        for kind, n in self.factors:
            if kind not in ("GL", "SL") or n < 1:
                raise ValueError(f"unsupported factor {kind}({n})")

    def __str__(self):
        if self.family in ("GL", "SL"):
            return f"{self.family}({self.factors[0][1]})"
        if self.family == "Torus":
            return f"Torus({len(self.factors)})"
        return " x ".join(f"{k}({n})" for k, n in self.factors)

    # -- sizes and coordinates
    @property
    def dim(self) -> int:
        return sum(n for _, n in self.factors)

    @property
    def rank(self) -> int:
        return sum(n - (k == "SL") for k, n in self.factors)

    @property
    def is_torus(self) -> bool:
        return all(n == 1 and k == "GL" for k, n in self.factors)

    def blocks(self) -> list[tuple[int, int]]:
        """(start, stop) of each factor in ambient coordinates."""
        out, s = [], 0
        for _, n in self.factors:
            out.append((s, s + n))
            s += n
        return out

    def normalize(self, w: Sequence[int]) -> Weight:
        if len(w) != self.dim:
            raise ValueError(f"weight {tuple(w)} has length {len(w)}, expected {self.dim}")
        w = [int(x) for x in w]
        for (kind, _), (a, b) in zip(self.factors, self.blocks()):
            if kind == "SL":
                last = w[b - 1]
                for i in range(a, b):
                    w[i] -= last
        return tuple(w)

    def to_lattice(self, w: Sequence[int]) -> Weight:
        w = self.normalize(w)
        out = []
        for (kind, _), (a, b) in zip(self.factors, self.blocks()):
            out.extend(w[a:b - 1] if kind == "SL" else w[a:b])
        return tuple(out)

    def from_lattice(self, x: Sequence[int]) -> Weight:
        if len(x) != self.rank:
            raise ValueError(f"lattice vector of length {len(x)}, expected rank {self.rank}")
        out, i = [], 0
        for kind, n in self.factors:
            m = n - (kind == "SL")
            out.extend(int(c) for c in x[i:i + m])
            if kind == "SL":
                out.append(0)
            i += m
        return tuple(out)

    def lattice_map_from_ambient(self, P) -> LatticeMap:
        """Descend an ambient integer matrix (acting on Z^dim) to lattice coordinates."""
        cols = []
        for k in range(self.rank):
            e = [0] * self.rank
            e[k] = 1
            cols.append(self.to_lattice(matvec(P, self.from_lattice(e))))
        return LatticeMap([[cols[j][i] for j in range(self.rank)] for i in range(self.rank)])

    def apply(self, A: LatticeMap, w: Sequence[int]) -> Weight:
        """Apply a lattice-coordinate map to an ambient weight."""
        return self.from_lattice(A(self.to_lattice(w)))

    # -- roots and Weyl group
    def roots(self) -> list[Weight]:
        out = []
        for a, b in self.blocks():
            for i in range(a, b):
                for j in range(a, b):
                    if i != j:
                        v = [0] * self.dim
                        v[i], v[j] = 1, -1
                        out.append(self.normalize(v))
        return out

    def simple_roots(self) -> list[Weight]:
        out = []
        for a, b in self.blocks():
            for i in range(a, b - 1):
                v = [0] * self.dim
                v[i], v[i + 1] = 1, -1
                out.append(self.normalize(v))
        return out

    def simple_transpositions(self) -> list[tuple[int, int]]:
        return [(i, i + 1) for a, b in self.blocks() for i in range(a, b - 1)]

    def weyl_generators(self) -> list[LatticeMap]:
        gens = []
        for i, j in self.simple_transpositions():
            P = _identity(self.dim)
            P[i], P[j] = P[j], P[i]
            gens.append(self.lattice_map_from_ambient(P))
        return gens

    def permute(self, w: Sequence[int], perm: Sequence[int]) -> Weight:
        """Ambient coordinate permutation: result[i] = w[perm[i]]."""
        return self.normalize([w[p] for p in perm])

    def pairing(self, w: Sequence[int], i: int) -> int:
        """<w, alpha_i^vee> for the i-th simple coroot."""
        a, b = self.simple_transpositions()[i]
        return w[a] - w[b]

    def is_dominant(self, w: Sequence[int]) -> bool:
        return all(w[i] >= w[j] for i, j in self.simple_transpositions())

    def weyl_orbit(self, w: Sequence[int]) -> list[Weight]:
        pieces = []
        for a, b in self.blocks():
            pieces.append(sorted(set(permutations(w[a:b]))))
        return sorted({self.normalize(sum(p, ())) for p in product(*pieces)})

    def weyl_group_order(self) -> int:
        from math import factorial

        out = 1
        for _, n in self.factors:
            out *= factorial(n)
        return out

    def regular_dominant(self) -> Weight:
        w = []
        for _, n in self.factors:
            w.extend(range(n - 1, -1, -1))
        return self.normalize(w)

    def dominant_weights(self, bound: int) -> list[Weight]:
        """Dominant weights with all normalized coordinates in [-bound, bound]."""
        pieces = []
        for kind, n in self.factors:
            rng = range(bound, -bound - 1, -1)
            if kind == "SL":
                cands = [c + (0,) for c in product(range(bound, -1, -1), repeat=n - 1)]
            else:
                cands = list(product(rng, repeat=n))
            pieces.append([c for c in cands if all(c[i] >= c[i + 1] for i in range(n - 1))])
        return [sum(p, ()) for p in product(*pieces)]


def GL(n: int) -> RootDatum:
    return RootDatum("GL", (("GL", n),))


def SL(n: int) -> RootDatum:
    return RootDatum("SL", (("SL", n),))


def Torus(r: int) -> RootDatum:
    return RootDatum("Torus", (("GL", 1),) * r)


def Product(*groups: RootDatum) -> RootDatum:
    return RootDatum("Product", sum((g.factors for g in groups), ()))


def sorting_permutation(G: RootDatum, w: Sequence[int]) -> list[int]:
    """Ambient permutation ``perm`` with G.permute(w, perm) dominant (stable)."""
    perm = []
    for a, b in G.blocks():
        idx = sorted(range(a, b), key=lambda i: -w[i])
        perm.extend(idx)
    return perm


def permutation_matrix(perm: Sequence[int]) -> list[list[int]]:
    """Ambient matrix P with (P w)[i] = w[perm[i]]."""
    n = len(perm)
    return [[int(perm[i] == j) for j in range(n)] for i in range(n)]


def reduced_word(perm: Sequence[int], G: RootDatum) -> list[int]:
    """Indices of simple transpositions giving ``perm`` (bubble sort order)."""
    trans = G.simple_transpositions()
    word = []
    arr = list(perm)
    changed = True
    while changed:
        changed = False
        for k, (i, j) in enumerate(trans):
            if arr[i] > arr[j]:
                arr[i], arr[j] = arr[j], arr[i]
                word.append(k)
                changed = True
    return word[::-1]


def dominant_representative(G: RootDatum, w: Sequence[int]) -> tuple[Weight, LatticeMap]:
    """The dominant weight in the Weyl orbit of ``w`` and a Weyl element reaching it."""
    w = G.normalize(w)
    perm = sorting_permutation(G, w)
    P = permutation_matrix(perm)
    return G.permute(w, perm), G.lattice_map_from_ambient(P)
