"""Semisimplification, commutants and Frobenius intertwiners of matrix representations.

Everything is exact over Q. The radical of the enveloping algebra is the kernel
of the trace form, which is valid in characteristic 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from . import sampling
from .cyclotomic import Cyclotomic, lcm
from .groups import (
    FPGroup,
    IntegralEvaluator,
    RepresentationPoint,
    Word,
    check_representation,
    conjugacy_representatives,
    parse_word,
)
from .repring import newton_transform, power_sums


class ContractViolation(RuntimeError):
    """An internal postcondition failed; indicates a bug, not bad input."""


def _flat(M: np.ndarray) -> list:
    return list(np.asarray(M, dtype=object).reshape(-1))


def _unflat(v, n: int) -> np.ndarray:
    return np.asarray(list(v), dtype=object).reshape(n, n)


@dataclass
class MatrixAlgebra:
    n: int
    basis: list  # n x n rational matrices, linearly independent

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _echelon(self) -> la.SparseEchelon:
        ech = la.SparseEchelon(self.n * self.n)
        for b in self.basis:
            ech.add(dict(enumerate(_flat(b))))
        return ech

    def contains(self, X) -> bool:
        r = self._echelon().reduce(dict(enumerate(_flat(X))))
        return not r

    def contains_identity(self) -> bool:
        return self.contains(la.eye(self.n))

    def is_closed(self) -> bool:
        ech = self._echelon()
        for a in self.basis:
            for b in self.basis:
                if ech.reduce(dict(enumerate(_flat(a @ b)))):
                    return False
        return True

    def trace_form(self) -> np.ndarray:
        k = self.dim
        T = la.zeros(k, k)
        for i in range(k):
            for j in range(i, k):
                T[i, j] = T[j, i] = la.trace(self.basis[i] @ self.basis[j])
        return T

    def is_semisimple(self) -> bool:
        return self.dim == 0 or la.rank(self.trace_form()) == self.dim


def _span_basis(mats, n: int) -> list:
    ech = la.SparseEchelon(n * n)
    out = []
    for M in mats:
        if ech.add(dict(enumerate(_flat(M)))):
            out.append(M)
    return out


def closure(gens: Sequence[np.ndarray], n: int, unital: bool = True) -> MatrixAlgebra:
    """Span of all products of the given matrices (with the identity if unital)."""
    ech = la.SparseEchelon(n * n)
    basis: list = []
    queue: list = []

    def push(M):
        if ech.add(dict(enumerate(_flat(M)))):
            basis.append(M)
            queue.append(M)

    if unital:
        push(la.eye(n))
    for g in gens:
        push(g)
    while queue:
        B = queue.pop(0)
        for g in gens:
            push(B @ g)
    return MatrixAlgebra(n, basis)


def enveloping_algebra(sigma: RepresentationPoint) -> MatrixAlgebra:
    """Unital algebra generated by the generator images and their inverses."""
    gens = []
    for g in range(sigma.group.ngens):
        gens.append(sigma.letter(g, 1))
        gens.append(sigma.letter(g, -1))
    return closure(gens, sigma.dimension)


def radical(A: MatrixAlgebra) -> MatrixAlgebra:
    """Kernel of the trace form, checked to be a nilpotent ideal."""
    if A.dim == 0:
        return MatrixAlgebra(A.n, [])
    kernel = la.nullspace(A.trace_form())
    J = []
    for c in kernel:
        X = la.zeros(A.n, A.n)
        for coef, b in zip(c, A.basis):
            if coef:
                X = X + coef * b
        J.append(X)
    J = MatrixAlgebra(A.n, J)
    power = J.basis
    for _ in range(A.n):
        if not power:
            break
        power = _span_basis([P @ X for P in power for X in J.basis], A.n)
    if power:
        raise ContractViolation("trace-form kernel is not nilpotent")
    return J


@dataclass
class SemisimplificationResult:
    original: RepresentationPoint
    point: RepresentationPoint  # the block-diagonal semisimplification
    flag: list  # list of subspace bases (each a list of column vectors), V = F_0 > F_1 > ...
    block_sizes: list
    base_change: np.ndarray  # columns form the adapted basis
    triangular: tuple  # images in the adapted basis (block lower triangular)
    radical_dimension: int
    output_radical_dimension: int
    length_bound: int
    words_checked: int
    traces_agree: bool


def _subspace(vectors, n: int) -> list:
    return [np.asarray(r, dtype=object) for r in la.row_space(vectors)] if vectors else []


def _complement(sub: list, whole: list, n: int) -> list:
    """Vectors from ``whole`` extending a basis of ``sub`` to one of span(whole)."""
    ech = la.SparseEchelon(n)
    for v in sub:
        ech.add(dict(enumerate(v)))
    out = []
    for v in whole:
        if ech.add(dict(enumerate(v))):
            out.append(v)
    return out


def word_trace_check(s1: RepresentationPoint, s2: RepresentationPoint, length: int) -> tuple[bool, int, Optional[Word]]:
    """Compare traces of s1(w), s2(w) over all freely reduced words of length
    <= length, via one representative per cyclic class."""
    e1, e2 = IntegralEvaluator(s1), IntegralEvaluator(s2)
    words = conjugacy_representatives(s1.group.ngens, length)
    for w in words:
        if e1.trace(w) != e2.trace(w):
            return False, len(words), w
    return True, len(words), None


def semisimplification(sigma: RepresentationPoint, length_bound: int = 6) -> SemisimplificationResult:
    """Direct sum of the graded pieces of the radical flag V > JV > J^2 V > ..."""
    n = sigma.dimension
    A = enveloping_algebra(sigma)
    J = radical(A)
    flag = [[la.qvec([int(i == j) for j in range(n)]) for i in range(n)]]
    while flag[-1]:
        nxt = _subspace([X @ v for X in J.basis for v in flag[-1]], n)
        if len(nxt) >= len(flag[-1]):
            raise ContractViolation("radical flag did not descend")
        flag.append(nxt)
    columns, sizes = [], []
    for k in range(len(flag) - 1):
        comp = _complement(flag[k + 1], flag[k], n)
        sizes.append(len(comp))
        columns.extend(comp)
    P = la.qmat([[c[i] for c in columns] for i in range(n)])
    Pi = la.inverse(P)
    tri = tuple(Pi @ M @ P for M in sigma.images)
    blocks = []
    for M in tri:
        out = la.zeros(n, n)
        a = 0
        for s in sizes:
            out[a:a + s, a:a + s] = M[a:a + s, a:a + s]
            a += s
        blocks.append(out)
    ss = RepresentationPoint(sigma.group, tuple(blocks))
    out_rad = radical(enveloping_algebra(ss)).dim
    if out_rad:
        raise ContractViolation("semisimplification has a nonzero radical")
    ok, count, _ = word_trace_check(sigma, ss, length_bound)
    if not ok:
        raise ContractViolation("semisimplification changed a word trace")
    return SemisimplificationResult(sigma, ss, flag[:-1], sizes, P, tri, J.dim, out_rad, length_bound, count, ok)


def commutant(sigma: RepresentationPoint) -> MatrixAlgebra:
    """All X with X sigma(g) = sigma(g) X for every generator g."""
    return MatrixAlgebra(sigma.dimension, _intertwining_space(sigma.images, sigma.images))


def _intertwining_space(src: Sequence, dst: Sequence) -> list:
    """Basis of {A : A src_i = dst_i A for all i}."""
    n = src[0].shape[0] if len(src) else 0
    if n == 0:
        return []
    ech = la.SparseEchelon(n * n)
    for S, D in zip(src, dst):
        # (A S - D A)[i, j] = sum_k A[i,k] S[k,j] - D[i,k] A[k,j]
        for i in range(n):
            for j in range(n):
                row = {}
                for k in range(n):
                    if S[k, j]:
                        row[i * n + k] = row.get(i * n + k, 0) + S[k, j]
                    if D[i, k]:
                        row[k * n + j] = row.get(k * n + j, 0) - D[i, k]
                ech.add({c: v for c, v in row.items() if v})
    return [_unflat(v, n) for v in ech.nullspace()]


@dataclass
class FrobeniusIntertwiners:
    nonempty: bool
    certified: bool  # False only when emptiness rests on failed random search
    sample: Optional[np.ndarray]
    solution_basis: list
    commutant: MatrixAlgebra
    target: RepresentationPoint
    torsor: Optional[bool]
    certificate: str

    @property
    def solution_dimension(self) -> int:
        return len(self.solution_basis)


def frobenius_intertwiners(sigma: RepresentationPoint, endomorphism: Sequence, seed: int = 0,
                           attempts: int = 20, length_bound: int = 6) -> FrobeniusIntertwiners:
    """The set F of invertible A with A sigma(g) A^-1 = sigma(f(g)) for the group
    endomorphism f given by generator images (words)."""
    endo = [parse_word(w, sigma.group.generators) if not isinstance(w, Word) else w for w in endomorphism]
    if len(endo) != sigma.group.ngens:
        raise ValueError("the endomorphism needs one word per generator")
    target = check_representation(sigma.compose(endo))
    S = _intertwining_space(sigma.images, target.images)
    C = commutant(sigma)
    if not S:
        return FrobeniusIntertwiners(False, True, None, [], C, target, None, "linear solution space is zero")
    rng = sampling.point_rng(seed, 0)
    candidates = list(S) + [sum(S[1:], S[0])]
    for _ in range(attempts):
        A = la.zeros(sigma.dimension, sigma.dimension)
        for B in S:
            A = A + rng.randint(-50, 50) * B
        candidates.append(A)
    for A in candidates:
        if la.det(A) != 0:
            return FrobeniusIntertwiners(True, True, A, S, C, target, len(S) == C.dim,
                                         "invertible solution found")
    e1, e2 = IntegralEvaluator(sigma), IntegralEvaluator(target)
    for w in conjugacy_representatives(sigma.group.ngens, length_bound, with_inverse=True):
        if e1.charpoly(w) != e2.charpoly(w):
            return FrobeniusIntertwiners(False, True, None, S, C, target, None,
                                         f"characteristic polynomials differ at {w.format(sigma.group.generators)}")
    return FrobeniusIntertwiners(False, False, None, S, C, target, None,
                                 f"no invertible solution among {len(candidates)} random combinations")


@dataclass
class ComponentCertificate:
    same: bool
    length_bound: int
    words_checked: int
    witness: Optional[Word] = None
    charpolys: Optional[tuple] = None


def same_component(s1: RepresentationPoint, s2: RepresentationPoint, length_bound: int = 6) -> ComponentCertificate:
    """Compare characteristic polynomials of s1(w) and s2(w) for every freely
    reduced word of length <= length_bound.

    A False answer is exact. A True answer certifies agreement only up to the
    stated length. Each word is covered through a representative of its class
    under cyclic rotation and inversion, since characteristic polynomials are
    class functions and that of an inverse is determined by the original.
    """
    if s1.dimension != s2.dimension or s1.group.ngens != s2.group.ngens:
        return ComponentCertificate(False, length_bound, 0)
    e1, e2 = IntegralEvaluator(s1), IntegralEvaluator(s2)
    words = conjugacy_representatives(s1.group.ngens, length_bound, with_inverse=True)
    for w in words:
        c1, c2 = e1.charpoly(w), e2.charpoly(w)
        if c1 != c2:
            return ComponentCertificate(False, length_bound, len(words), w, (c1, c2))
    return ComponentCertificate(True, length_bound, len(words))


# --------------------------------------------------------------------------
# Eigenvalue records


@dataclass(frozen=True, order=True)
class EigenvalueRecord:
    """zeta_N^k times q^(w/2), with (k, N) reduced."""

    w: int
    k: int
    N: int

    def __post_init__(self):
        N = int(self.N)
        if N < 1:
            raise ValueError("N must be at least 1")
        k = int(self.k) % N
        g = gcd(k, N) if k else N
        object.__setattr__(self, "k", k // g)
        object.__setattr__(self, "N", N // g)
        object.__setattr__(self, "w", int(self.w))

    def unit(self, M: Optional[int] = None) -> Cyclotomic:
        M = M or self.N
        return Cyclotomic.zeta(M, self.k * (M // self.N))


@dataclass
class WeightComparison:
    weight: int
    left: list
    right: list
    equal: bool


@dataclass
class WeightPartition:
    equal: bool
    weights: list  # WeightComparison per weight, ascending


def units_agree(a: Sequence[EigenvalueRecord], b: Sequence[EigenvalueRecord]) -> bool:
    """Multiset equality of unit parts via elementary symmetric functions in
    Q(zeta_M), obtained from power sums by the Newton identities."""
    if len(a) != len(b):
        return False
    if not a:
        return True
    M = 1
    for r in list(a) + list(b):
        M = lcm(M, r.N)
    ea = newton_transform(power_sums([r.unit(M) for r in a], len(a)))
    eb = newton_transform(power_sums([r.unit(M) for r in b], len(b)))
    return all(x == y for x, y in zip(ea, eb))


def weight_partition(E1: Sequence[EigenvalueRecord], E2: Sequence[EigenvalueRecord]) -> WeightPartition:
    groups1: dict = {}
    groups2: dict = {}
    for r in E1:
        groups1.setdefault(r.w, []).append(r)
    for r in E2:
        groups2.setdefault(r.w, []).append(r)
    out = []
    for w in sorted(set(groups1) | set(groups2)):
        a, b = sorted(groups1.get(w, [])), sorted(groups2.get(w, []))
        out.append(WeightComparison(w, a, b, units_agree(a, b)))
    return WeightPartition(all(c.equal for c in out), out)


# --------------------------------------------------------------------------
# Random reducible points


def random_reducible_point(group: FPGroup, n: int, rng: random.Random, conjugate: bool = True) -> RepresentationPoint:
    """A random point preserving a random flag of subspaces, optionally
    conjugated by a random invertible matrix.

    Free groups get independent block upper triangular images; free abelian
    groups get polynomials in a single such matrix.
    """
    sizes = []
    left = n
    while left:
        s = rng.randint(1, left)
        sizes.append(s)
        left -= s

    def block_matrix():
        M = la.zeros(n, n)
        a = 0
        for s in sizes:
            M[a:a + s, a:a + s] = sampling.invertible_matrix(rng, s)
            M[a:a + s, a + s:] = sampling.rational_matrix(rng, s, n - a - s)
            a += s
        return M

    if group.is_free():
        imgs = [block_matrix() for _ in group.generators]
    elif group.is_free_abelian():
        T = block_matrix()
        imgs = []
        for _ in group.generators:
            while True:
                M = la.matpow(T, rng.choice((1, 2, -1))) + rng.choice(sampling.SMALL_INTEGERS) * la.eye(n)
                if la.det(M) != 0:
                    imgs.append(M)
                    break
    else:
        raise ValueError("random reducible points need a free or free abelian group")
    if conjugate:
        h = sampling.invertible_matrix(rng, n)
        hi = la.inverse(h)
        imgs = [h @ M @ hi for M in imgs]
    return RepresentationPoint(group, tuple(imgs))
