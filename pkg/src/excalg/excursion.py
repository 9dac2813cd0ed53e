"""Excursion operators on representation varieties of finitely presented groups.

An excursion datum (I, V_I, gamma_I, v_I, xi_I) defines the function

    sigma -> xi_I( (rho_{V_i}(sigma(gamma_i)))_i . v_I )

on Hom(Gamma, GL(n)); it is invariant under conjugation of sigma when v_I
and xi_I are invariant under the diagonal group. Hecke functions are the
special case tr(rho_V(sigma(x))). ``span_fit`` certifies that a function is
a polynomial in a chosen list of such functions.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Optional, Sequence

import numpy as np

from . import linalg as la
from . import sampling
from .groups import FPGroup, RepresentationPoint, Word
from .lattice import GL, SL, RootDatum
from .tensorword import Det, Dual, Exterior, Std, Tensor, TensorWord


def matrix_group(n: int, special: bool = False) -> RootDatum:
    return SL(n) if special else GL(n)


# --------------------------------------------------------------------------
# Diagonal invariants


def _zero_weight_tuples(weights: list, G: RootDatum) -> list[tuple]:
    zero = G.normalize([0] * G.dim)
    out = []

    def rec(i, acc, idx):
        if i == len(weights):
            if G.normalize(acc) == zero:
                out.append(tuple(idx))
            return
        for k, w in enumerate(weights[i]):
            rec(i + 1, [a + b for a, b in zip(acc, w)], idx + [k])

    rec(0, [0] * G.dim, [])
    return out


def invariant_tensors(n: int, words: Sequence[TensorWord], special: bool = False):
    """Bases of the diagonal invariants in V_1 (x) ... (x) V_m and in its dual.

    Computed as the common null space of the derived action of every
    off-diagonal matrix unit on the zero-weight subspace (the diagonal units
    act by the weight). In characteristic 0 these are the group invariants.
    Vectors are dense, in Kronecker (first factor most significant) order.
    """
    G = matrix_group(n, special)
    words = list(words)
    dims = [w.dim(G) for w in words]
    weights = [w.basis_weights(G) for w in words]
    strides = []
    s = 1
    for d in reversed(dims):
        strides.append(s)
        s *= d
    strides = strides[::-1]
    total = s

    def flat(t):
        return sum(a * b for a, b in zip(t, strides))

    Z = _zero_weight_tuples(weights, G)
    zindex = {t: k for k, t in enumerate(Z)}
    vec_eq = la.SparseEchelon(len(Z))
    cov_eq = la.SparseEchelon(len(Z))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            lies = [w.lie(G, i, j) for w in words]
            by_col = []
            by_row = []
            for X in lies:
                bc, br = {}, {}
                for (r, c), v in X.items():
                    bc.setdefault(c, []).append((r, v))
                    br.setdefault(r, []).append((c, v))
                by_col.append(bc)
                by_row.append(br)
            vec_rows: dict = {}
            cov_rows: dict = {}
            for t in Z:
                z = zindex[t]
                for f in range(len(words)):
                    for r, v in by_col[f].get(t[f], ()):
                        tgt = t[:f] + (r,) + t[f + 1:]
                        vec_rows.setdefault(tgt, {})
                        vec_rows[tgt][z] = vec_rows[tgt].get(z, 0) + v
                    for c, v in by_row[f].get(t[f], ()):
                        src = t[:f] + (c,) + t[f + 1:]
                        cov_rows.setdefault(src, {})
                        cov_rows[src][z] = cov_rows[src].get(z, 0) + v
            for row in vec_rows.values():
                vec_eq.add(row)
            for row in cov_rows.values():
                cov_eq.add(row)

    def expand(basis):
        out = []
        for b in basis:
            v = [Fraction(0)] * total
            for k, x in enumerate(b):
                if x:
                    v[flat(Z[k])] = x
            out.append(la.qvec(v))
        return out

    return expand(vec_eq.nullspace()), expand(cov_eq.nullspace())


def coevaluation(d: int) -> np.ndarray:
    """sum_k e_k (x) e^k in V (x) V^dual."""
    v = [Fraction(0)] * (d * d)
    for k in range(d):
        v[k * d + k] = Fraction(1)
    return la.qvec(v)


# --------------------------------------------------------------------------
# Excursion data and Hecke functions


@dataclass(frozen=True, eq=False)
class ExcursionDatum:
    words: tuple  # TensorWord per index
    gammas: tuple  # Word per index
    v: np.ndarray
    xi: np.ndarray
    n: int
    special: bool = False

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "gammas", tuple(self.gammas))
        object.__setattr__(self, "v", la.qvec(self.v))
        object.__setattr__(self, "xi", la.qvec(self.xi))
        if len(self.words) != len(self.gammas):
            raise ValueError("one word gamma_i per tensor factor V_i is required")
        total = int(np.prod([w.dim(self.group) for w in self.words]))
        if len(self.v) != total or len(self.xi) != total:
            raise ValueError(f"v and xi must have length {total} (the tensor space dimension)")

    @property
    def group(self) -> RootDatum:
        return matrix_group(self.n, self.special)

    @property
    def size(self) -> int:
        return len(self.words)

    def is_invariant(self) -> bool:
        """Check v and xi against the derived diagonal action."""
        G = self.group
        for i in range(self.n):
            for j in range(self.n):
                if i == j and not self.special:
                    continue
                X = _total_lie(self.words, G, i, j) if i != j else None
                if X is None:
                    continue
                if not la.is_zero(X @ self.v) or not la.is_zero(self.xi @ X):
                    return False
        return True

    def evaluate(self, sigma: RepresentationPoint) -> Fraction:
        return excursion_value(self, sigma)

    def grading(self, ngens: int) -> Optional[tuple]:
        out = [0] * ngens
        for w, g in zip(self.words, self.gammas):
            c = w.central_degree(self.group)
            if c is None:
                return None
            for k, e in enumerate(g.exponent_sums(ngens)):
                out[k] += c[0] * e
        return tuple(out)


def _total_lie(words, G, i, j) -> np.ndarray:
    mats = [w.lie_matrix(G, i, j) for w in words]
    eyes = [la.eye(m.shape[0]) for m in mats]
    total = None
    for f in range(len(mats)):
        term = None
        for k in range(len(mats)):
            piece = mats[k] if k == f else eyes[k]
            term = piece if term is None else la.kron(term, piece)
        total = term if total is None else total + term
    return total


def apply_tensor(mats: Sequence[np.ndarray], v: np.ndarray) -> np.ndarray:
    """(M_1 (x) ... (x) M_m) v without forming the Kronecker product."""
    dims = [m.shape[1] for m in mats]
    T = np.asarray(v, dtype=object).reshape(dims)
    for axis, M in enumerate(mats):
        T = np.moveaxis(np.tensordot(M, T, axes=([1], [axis])), 0, axis)
    return T.reshape(-1)


def excursion_value(d: ExcursionDatum, sigma: RepresentationPoint) -> Fraction:
    """xi_I applied to (prod_i rho_{V_i}(sigma(gamma_i))) v_I, exactly."""
    if sigma.dimension != d.n:
        raise ValueError(f"datum is for n = {d.n}, point has dimension {sigma.dimension}")
    G = d.group
    mats = [w.rho(G, sigma(g)) for w, g in zip(d.words, d.gammas)]
    out = apply_tensor(mats, d.v)
    return sum((a * b for a, b in zip(d.xi, out)), Fraction(0))


def trace_datum(V: TensorWord, gamma: Word, n: int, special: bool = False) -> ExcursionDatum:
    """I = {1, 2}, V_I = V (x) V^dual, gamma_I = (gamma, 1), unit and counit."""
    G = matrix_group(n, special)
    c = coevaluation(V.dim(G))
    return ExcursionDatum((V, Dual(V)), (gamma, Word()), c, c, n, special)


def hecke_value(V: TensorWord, x: Word, sigma: RepresentationPoint, special: bool = False) -> Fraction:
    """tr rho_V(sigma(x))."""
    G = matrix_group(sigma.dimension, special)
    return la.trace(V.rho(G, sigma(x)))


@dataclass(frozen=True)
class TraceFunction:
    """sigma -> tr rho_V(sigma(word)); a Hecke function."""

    rep: TensorWord
    word: Word
    special: bool = False

    def evaluate(self, sigma: RepresentationPoint) -> Fraction:
        return hecke_value(self.rep, self.word, sigma, self.special)

    def grading(self, ngens: int, n: int) -> Optional[tuple]:
        c = self.rep.central_degree(matrix_group(n, self.special))
        if c is None:
            return None
        return tuple(c[0] * e for e in self.word.exponent_sums(ngens))


def _grading_of(fn, ngens: int, n: int):
    if isinstance(fn, ExcursionDatum):
        return fn.grading(ngens)
    if isinstance(fn, TraceFunction):
        return fn.grading(ngens, n)
    return None


# --------------------------------------------------------------------------
# Sampling points


def random_point(group: FPGroup, n: int, rng: random.Random, special: bool = False) -> RepresentationPoint:
    """Random rational point of Hom(group, GL(n) or SL(n)).

    Free groups get independent random matrices. Free abelian groups get
    polynomials in one random matrix, which commute.
    """
    make = sampling.special_matrix if special else sampling.invertible_matrix
    if group.is_free():
        return RepresentationPoint(group, tuple(make(rng, n) for _ in group.generators))
    if group.is_free_abelian():
        A = make(rng, n)
        imgs = []
        for _ in group.generators:
            while True:
                k = rng.choice((1, 2, -1))
                c = rng.choice(sampling.SMALL_INTEGERS)
                M = la.matpow(A, k) + c * la.eye(n)
                d = la.det(M)
                if d != 0 and (not special or d == 1):
                    imgs.append(M)
                    break
                if special:
                    imgs.append(la.matpow(A, k))
                    break
        return RepresentationPoint(group, tuple(imgs))
    raise ValueError("random points are only available for free and free abelian groups")


# --------------------------------------------------------------------------
# Polynomial fitting


@dataclass
class SpanFit:
    status: str  # "fit" | "not-in-span" | "inconclusive"
    polynomial: dict  # exponent tuple -> Fraction
    degree_bound: int
    samples_used: int
    rank_history: list
    verified_samples: int
    verified: bool
    monomials_considered: int
    grading: Optional[tuple] = None
    message: str = ""

    def monomial_list(self) -> list:
        return [(e, c) for e, c in sorted(self.polynomial.items(), reverse=True)]


def monomials(nvars: int, degree: int) -> list[tuple]:
    out = []
    for total in range(degree + 1):
        for e in product(range(total + 1), repeat=nvars):
            if sum(e) == total:
                out.append(e)
    return sorted(out, key=lambda e: (sum(e), tuple(-x for x in e)))


def _monomial_values(exps: list[tuple], vals: Sequence[Fraction]) -> list[Fraction]:
    cache: dict = {}

    def power(k, e):
        key = (k, e)
        if key not in cache:
            cache[key] = vals[k] ** e
        return cache[key]

    out = []
    for e in exps:
        x = Fraction(1)
        for k, p in enumerate(e):
            if p:
                x *= power(k, p)
        out.append(x)
    return out


def _center_modulus(n: int, special: bool) -> int:
    if not special:
        return 0
    return 2 if n % 2 == 0 else 1


def _reduce_grading(g, m: int):
    if g is None:
        return None
    return tuple(x % m for x in g) if m else tuple(g)


def span_fit_many(
    targets: Sequence,
    generators: Sequence,
    group: FPGroup,
    n: int,
    degree: int = 6,
    budget: int = 500,
    seed: int = 0,
    special: bool = False,
    batch: int = 8,
    fresh: int = 50,
    workers: int = 1,
    graded: bool = True,
    ladder: bool = True,
    sampler: Optional[Callable] = None,
) -> list[SpanFit]:
    """Fit every target as a polynomial of degree <= ``degree`` in the generator
    functions, sharing one stream of sample points.

    With ``ladder`` the degrees 0, 1, ..., ``degree`` are tried in turn and each
    target keeps its lowest-degree fit. At each degree sampling stops once two
    consecutive batches leave the rank of the monomial evaluation matrix
    unchanged; an inconsistent system is then an exact proof that a target is
    not in the span at that degree.
    Fits are re-verified on ``fresh`` new points drawn from an index range
    disjoint from construction.
    """
    sampler = sampler or (lambda i: random_point(group, n, sampling.point_rng(seed, i), special))
    m = _center_modulus(n, special)
    gen_grades = [_reduce_grading(_grading_of(g, group.ngens, n), m) for g in generators]
    tgt_grades = [_reduce_grading(_grading_of(t, group.ngens, n), m) for t in targets]
    use_grading = graded and all(g is not None for g in gen_grades)

    cache: dict = {}

    def evaluate(i):
        sigma = sampler(i)
        return [g.evaluate(sigma) for g in generators], [t.evaluate(sigma) for t in targets]

    def samples(indices):
        todo = [i for i in indices if i not in cache]
        if workers > 1 and len(todo) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                vals = list(pool.map(evaluate, todo))
        else:
            vals = [evaluate(i) for i in todo]
        cache.update(zip(todo, vals))
        return [cache[i] for i in indices]

    results: list = [None] * len(targets)
    degrees = range(degree + 1) if ladder else [degree]
    for d in degrees:
        pending = [i for i in range(len(targets)) if results[i] is None or results[i].status != "fit"]
        if not pending:
            break
        exps_all = monomials(len(generators), d)
        classes: dict = {}
        for i in pending:
            classes.setdefault(tgt_grades[i] if use_grading else None, []).append(i)
        for key, idx in classes.items():
            exps = exps_all
            if use_grading and key is not None:
                exps = [e for e in exps_all if _monomial_grade(e, gen_grades, group.ngens, m) == key]
            for i, r in zip(idx, _fit_class(exps, idx, samples, budget, batch)):
                r.degree_bound = degree
                r.grading = key
                results[i] = r

    fitted = [i for i, r in enumerate(results) if r.status == "fit"]
    if fitted and fresh:
        offset = 1 << 20
        evals = samples(range(offset, offset + fresh))
        for i in fitted:
            r = results[i]
            ok = all(_poly_eval(r.polynomial, gv) == tv[i] for gv, tv in evals)
            r.verified_samples = fresh if ok else 0
            r.verified = ok
            if not ok:
                r.status = "inconclusive"
                r.message = "fitted identity failed fresh-sample verification"
    for r in results:
        if r.status == "not-in-span":
            r.message = f"not in span at degree {degree}"
    return results


def _monomial_grade(e, gen_grades, ngens, m):
    tot = [0] * ngens
    for p, g in zip(e, gen_grades):
        for j, x in enumerate(g):
            tot[j] += p * x
    return _reduce_grading(tot, m)


def _poly_eval(poly: dict, vals) -> Fraction:
    out = Fraction(0)
    for e, c in poly.items():
        term = c
        for k, p in enumerate(e):
            if p:
                term *= vals[k] ** p
        out += term
    return out


def _fit_class(exps, idx, samples, budget, batch) -> list[SpanFit]:
    ech = la.SparseEchelon(len(exps))
    history: list = []
    stable = 0
    used = 0
    while used < budget and stable < 2:
        size = min(batch, budget - used)
        before = ech.rank
        for gv, tv in samples(range(used, used + size)):
            ech.add(dict(enumerate(_monomial_values(exps, gv))))
        used += size
        history.append(ech.rank)
        stable = stable + 1 if ech.rank == before else 0
    if stable < 2:
        return [SpanFit("inconclusive", {}, 0, used, history, 0, False, len(exps), None,
                        "rank did not stabilize within the sample budget") for _ in idx]
    rows = [_monomial_values(exps, gv) + [tv[i] for i in idx] for gv, tv in samples(range(used))]
    reduced, piv = la.rref_augmented(rows, len(exps))
    out = []
    for col in range(len(idx)):
        c = len(exps) + col
        if any(r[c] != 0 for r in reduced[len(piv):]):
            out.append(SpanFit("not-in-span", {}, 0, used, history, 0, False, len(exps)))
            continue
        poly = {exps[p]: reduced[r][c] for r, p in enumerate(piv) if reduced[r][c] != 0}
        out.append(SpanFit("fit", poly, 0, used, history, 0, False, len(exps)))
    return out


def span_fit(target, generators, group: FPGroup, n: int, degree: int = 6, budget: int = 500,
             seed: int = 0, special: bool = False, **kwargs) -> SpanFit:
    """Express one function as an exact polynomial in the generator functions."""
    return span_fit_many([target], generators, group, n, degree, budget, seed, special, **kwargs)[0]


def fricke_generators(group: FPGroup, special: bool = True) -> list[TraceFunction]:
    """tr A, tr B, tr AB for a two-generator group."""
    if group.ngens != 2:
        raise ValueError("Fricke coordinates need exactly two generators")
    a, b = Word(((0, 1),)), Word(((1, 1),))
    return [TraceFunction(Std(), w, special) for w in (a, b, a * b)]


def gl2_trace_generators(group: FPGroup) -> list[TraceFunction]:
    """tr A, tr B, tr AB, det A, det B, det A^-1, det B^-1 for F_2 -> GL(2)."""
    a, b = Word(((0, 1),)), Word(((1, 1),))
    out = [TraceFunction(Std(), w) for w in (a, b, a * b)]
    out += [TraceFunction(Det(1), w) for w in (a, b)]
    out += [TraceFunction(Det(-1), w) for w in (a, b)]
    return out


# --------------------------------------------------------------------------
# Random excursion data

_POOL = [
    (Std(), 1),
    (Dual(Std()), 1),
    (Exterior(Std(), 2), 2),
    (Tensor((Std(), Dual(Std()))), 2),
    (Tensor((Std(), Std())), 2),
    (Tensor((Std(), Det(-1))), 1),
    (Det(1), 0),
    (Det(-1), 0),
]


def random_word(group: FPGroup, rng: random.Random, max_length: int) -> Word:
    length = rng.randint(0, max_length)
    letters_ = []
    while len(letters_) < length:
        a = (rng.randrange(group.ngens), rng.choice((1, -1)))
        if letters_ and letters_[-1] == (a[0], -a[1]):
            continue
        letters_.append(a)
    return Word(tuple(letters_))


def random_excursion_datum(
    group: FPGroup,
    n: int,
    rng: random.Random,
    max_size: int = 3,
    max_degree: int = 3,
    max_word_length: int = 2,
    special: bool = False,
    min_degree: int = 2,
    min_size: int = 2,
) -> ExcursionDatum:
    """A random datum with |I| <= max_size, total leaf degree between
    min_degree and max_degree, and random nonzero invariant v_I, xi_I."""
    while True:
        size = rng.randint(min_size, max_size)
        words, deg = [], 0
        for _ in range(size):
            choices = [(w, d) for w, d in _POOL if deg + d <= max_degree]
            w, d = rng.choice(choices)
            words.append(w)
            deg += d
        if deg < min_degree:
            continue
        vecs, covs = invariant_tensors(n, words, special)
        if not vecs or not covs:
            continue
        v = sum((rng.choice(sampling.SMALL_INTEGERS) * b for b in vecs), la.qvec([0] * len(vecs[0])))
        xi = sum((rng.choice(sampling.SMALL_INTEGERS) * b for b in covs), la.qvec([0] * len(covs[0])))
        if la.is_zero(v) or la.is_zero(xi):
            continue
        gammas = [random_word(group, rng, max_word_length) for _ in words]
        return ExcursionDatum(tuple(words), tuple(gammas), v, xi, n, special)
