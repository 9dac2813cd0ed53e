"""Acceptance gate: one test per criterion, each timed against its limit.

Every test records a PASS/FAIL line; the lines are printed in the terminal
summary (see conftest.py) so they also land in the saved test log.
"""

import json
import math
import os
import random
import subprocess
import sys
import time
from collections import Counter
from fractions import Fraction
from pathlib import Path

import numpy as np
import sympy

from excalg import GL, SL, LatticeMap, Product, Torus, cli, linalg as la, sampling
from excalg.excursion import (
    fricke_generators,
    gl2_trace_generators,
    random_excursion_datum,
    span_fit_many,
    TraceFunction,
)
from excalg.groups import RepresentationPoint, free_abelian_group, free_group, freely_reduced_words
from excalg.repring import inverse_newton_transform, newton_transform, power_sums
from excalg.semisimplify import (
    EigenvalueRecord,
    frobenius_intertwiners,
    random_reducible_point,
    same_component,
    semisimplification,
    weight_partition,
)
from excalg.tensorword import Det, Dual, Exterior, Irrep, Std, Tensor
from excalg.twisted import (
    automorphism,
    equivariance_intertwiner,
    levi_finiteness_check,
    torus_twisted_basis,
    twisted_trace,
    valuation_certificate,
)

import oracles

HERE = Path(__file__).parent
RESULTS: dict = {}

F2 = free_group("a", "b")
Z2 = free_abelian_group("a", "b")


class Criterion:
    """Times a block, records a PASS/FAIL line, and fails on overrun."""

    def __init__(self, number: int, title: str, limit=None):
        self.number, self.title, self.limit = number, title, limit
        self.detail = ""

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.elapsed = time.perf_counter() - self.start
        in_time = self.limit is None or self.elapsed < self.limit
        ok = exc_type is None and in_time
        limit = f" (limit {self.limit:g}s)" if self.limit else ""
        note = self.detail if exc_type is None else f"{exc_type.__name__}: {exc}"
        if exc_type is None and not in_time:
            note = f"{note}; over time"
        RESULTS[self.number] = (
            f"criterion {self.number:2d} {'PASS' if ok else 'FAIL'}  {self.title}  "
            f"[{self.elapsed:.2f}s{limit}] {note}".rstrip()
        )
        print(RESULTS[self.number])
        return False

    def check_time(self):
        assert self.limit is None or self.elapsed < self.limit, (
            f"criterion {self.number} took {self.elapsed:.2f}s, limit {self.limit}s"
        )


# --------------------------------------------------------------------------
# 1. torus twisted-invariant bases vs brute force


def _torus_fixtures():
    cases = []
    for n in (1, 2, 3):
        cases.extend(oracles.signed_permutations(n))
    rank4 = list(oracles.signed_permutations(4))
    cases.extend(random.Random(1).sample(rank4, 100))
    return cases


def _box(n, bound):
    axis = np.arange(-bound, bound + 1)
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=1)


def test_criterion_01_torus_twisted_bases():
    fixtures = _torus_fixtures()
    boxes = {n: _box(n, 3) for n in (1, 2, 3, 4)}
    with Criterion(1, "torus twisted bases equal brute-force fixed characters", 5) as c:
        for M in fixtures:
            n = len(M)
            basis = torus_twisted_basis(Torus(n), LatticeMap(tuple(tuple(r) for r in M)))
            box = boxes[n]
            fixed = box[(box @ np.array(M).T == box).all(axis=1)]
            fixed_set = {tuple(int(x) for x in v) for v in fixed}
            # every basis vector is a fixed character inside the box
            assert all(tuple(b) in fixed_set for b in basis)
            # and every fixed character in the box is an integral combination
            ref = oracles.signed_fixed_basis(M)
            assert len(basis) == len(ref)
            for v in fixed_set:
                coords = oracles.signed_fixed_coordinates(M, v)
                # express the oracle basis in the computed one: the lattices must agree
                assert tuple(sum(a * r[k] for a, r in zip(coords, ref)) for k in range(n)) == v
            for r in ref:
                assert _integral_solution(basis, r)
            for b in basis:
                assert tuple(sum(a * r[k] for a, r in zip(oracles.signed_fixed_coordinates(M, b), ref))
                             for k in range(n)) == tuple(b)
        c.detail = f"{len(fixtures)} signed-permutation actions, ranks 1-4, box |x| <= 3"
    c.check_time()


def _integral_solution(basis, v) -> bool:
    """v in the Z-span of basis (basis is linearly independent)."""
    if not basis:
        return not any(v)
    B = sympy.Matrix([list(b) for b in basis]).T
    sol = B.pinv() * sympy.Matrix(list(v))
    return B * sol == sympy.Matrix(list(v)) and all(x.is_integer for x in sol)


# --------------------------------------------------------------------------
# 2. valuation certificates


def test_criterion_02_valuation_certificates():
    rng = random.Random(2)
    words = [Std(), Tensor((Std(), Std())), Exterior(Std(), 2), Tensor((Std(), Det(-1)))]
    count = 0
    with Criterion(2, "step-one certificates: multiplicity one, strictly minimal", 30) as c:
        for G in (GL(2), GL(3)):
            for theta in ("identity", "transpose-inverse"):
                phi = automorphism(G, theta)
                for V in words:
                    for _ in range(5):
                        v = [Fraction(rng.randint(-12, 12), rng.randint(1, 6)) for _ in range(G.rank)]
                        cert = valuation_certificate(G, phi, V, v)
                        assert cert.ok, (G, theta, V, v, cert.failures)
                        assert cert.multiplicity == 1 and cert.strict and cert.phi_invariant
                        assert cert.r >= 1
                        count += 1
        c.detail = f"{count} certificates"
    c.check_time()


# --------------------------------------------------------------------------
# 3. cokernels for sub-torus inclusions


def _intertwiners(P, S):
    """Integer basis of {R : R P = S R} for R of shape len(S) x len(P)."""
    k, m = len(S), len(P)
    syms = sympy.symbols(f"r0:{k * m}")
    R = sympy.Matrix(k, m, syms)
    eqs = list(R * sympy.Matrix(P) - sympy.Matrix(S) * R)
    A = sympy.Matrix([[sympy.diff(e, s) for s in syms] for e in eqs])
    out = []
    for v in A.nullspace():
        d = math.lcm(*[x.q for x in v])
        out.append([[int(v[i * m + j] * d) for j in range(m)] for i in range(k)])
    return out


def _subtorus_fixtures():
    rng = random.Random(3)
    perms = {n: list(oracles.signed_permutations(n)) for n in (1, 2, 3)}
    cases = [
        ([[1, 1]], [[0, 1], [1, 0]], [[1]]),  # diagonal G_m in G_m^2, swap
        ([[1, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 0], [0, 1]]),
        ([[1, 0]], [[1, 0], [0, 1]], [[1]]),
    ]
    tries = 0
    while len(cases) < 60 and tries < 2000:
        tries += 1
        m = rng.randint(1, 3)
        k = rng.randint(1, m)
        P, S = rng.choice(perms[m]), rng.choice(perms[k])
        basis = _intertwiners(P, S)
        if not basis:
            continue
        coeffs = [rng.randint(-2, 2) for _ in basis]
        R = [[sum(a * B[i][j] for a, B in zip(coeffs, basis)) for j in range(m)] for i in range(k)]
        if oracles.rank_q(R) != k:
            continue
        small_fixed = oracles.signed_fixed_basis(S)
        big_fixed = oracles.signed_fixed_basis(P)
        M = _coordinate_matrix(R, P, S)
        if small_fixed and big_fixed and oracles.rank_q(M) == len(small_fixed):
            minors = [abs(x) for x in _maximal_minors(M)]
            if max(minors) > 16:
                continue
        cases.append((R, P, S))
    return cases


def _maximal_minors(M):
    from itertools import combinations

    rows, cols = len(M), len(M[0])
    return [oracles.det_int([[M[i][j] for j in cs] for i in range(rows)]) for cs in combinations(range(cols), rows)]


def _coordinate_matrix(R, P, S):
    """Columns: the restrictions of the fixed basis of P, in the fixed basis of S."""
    cols = []
    for b in oracles.signed_fixed_basis(P):
        img = [sum(R[i][j] * b[j] for j in range(len(b))) for i in range(len(R))]
        cols.append(oracles.signed_fixed_coordinates(S, img))
    nrows = len(oracles.signed_fixed_basis(S))
    return [[col[i] for col in cols] for i in range(nrows)]


def test_criterion_03_levi_cokernels():
    fixtures = _subtorus_fixtures()
    assert len(fixtures) >= 40
    expected = []
    for R, P, S in fixtures:
        M = _coordinate_matrix(R, P, S)
        if not M:
            expected.append((0, []))
        else:
            expected.append(oracles.cokernel_by_enumeration(M, len(M)))
    nontrivial = 0
    with Criterion(3, "step-two cokernels finite, factors match enumeration", 5) as c:
        for (R, P, S), (free, factors) in zip(fixtures, expected):
            rep = levi_finiteness_check(*(LatticeMap(tuple(tuple(r) for r in X)) for X in (R, P, S)))
            assert rep.finite and rep.free_rank == 0 and free == 0
            got = [d for d in rep.invariant_factors if d != 1]
            assert got == factors, (R, P, S, got, factors)
            nontrivial += bool(factors)
        c.detail = f"{len(fixtures)} inclusions, {nontrivial} with nontrivial cokernel"
    c.check_time()


# --------------------------------------------------------------------------
# 4. SL(2) word traces in Fricke coordinates


def test_criterion_04_sl2_word_traces():
    words = list(freely_reduced_words(2, 6))
    commutator = F2.word("a b A B")
    with Criterion(4, "SL(2) word traces of length <= 6 fit in (tr A, tr B, tr AB)", 60) as c:
        targets = [TraceFunction(Std(), w, True) for w in words]
        fits = span_fit_many(targets, fricke_generators(F2), F2, 2, degree=6, special=True)
        for w, f in zip(words, fits):
            assert f.status == "fit" and f.verified and f.verified_samples == 50, (w, f.status)
            assert max((sum(e) for e in f.polynomial), default=0) <= 6
        comm = fits[words.index(commutator)]
        assert comm.polynomial == {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1, (1, 1, 1): -1, (0, 0, 0): -2}
        c.detail = f"{len(words)} words, all verified on 50 fresh points"
    c.check_time()


# --------------------------------------------------------------------------
# 5. random excursion data over GL(2)


def test_criterion_05_excursion_data_in_trace_span():
    rng = random.Random(5)
    data = [random_excursion_datum(F2, 2, rng, max_size=3, max_degree=3) for _ in range(20)]
    assert all(d.size <= 3 and d.is_invariant() for d in data)
    with Criterion(5, "20 random GL(2) excursion data fit in the trace-word span", 120) as c:
        fits = span_fit_many(data, gl2_trace_generators(F2), F2, 2, degree=6, seed=5)
        for d, f in zip(data, fits):
            assert f.status == "fit" and f.verified, f.message
        degrees = Counter(max((sum(e) for e in f.polynomial), default=0) for f in fits)
        c.detail = "fit degrees " + ", ".join(f"{k}:{v}" for k, v in sorted(degrees.items()))
    c.check_time()


# --------------------------------------------------------------------------
# 6. semisimplification contract


def test_criterion_06_semisimplification():
    with Criterion(6, "100 semisimplifications: zero radical, traces to length 8, same component", 60) as c:
        reducible = 0
        for i in range(100):
            rng = sampling.point_rng(6, i)
            group = F2 if i % 2 == 0 else Z2
            sigma = random_reducible_point(group, rng.randint(1, 4), rng)
            res = semisimplification(sigma, length_bound=8)
            assert res.output_radical_dimension == 0 and res.traces_agree and res.length_bound == 8
            assert same_component(sigma, res.point, 8).same
            reducible += res.radical_dimension > 0
        c.detail = f"{reducible} of 100 inputs had a nonzero radical"
    c.check_time()


# --------------------------------------------------------------------------
# 7. twisted conjugation invariance


def _twist_pool():
    G2, G3, S2 = GL(2), GL(3), SL(2)
    P = Product(GL(2), GL(2))
    return [
        (G2, automorphism(G2, "transpose-inverse"), Irrep((1, -1))),
        (G2, automorphism(G2, "transpose-inverse", [[0, 1], [-1, 0]]), Tensor((Std(), Dual(Std())))),
        (G2, automorphism(G2, "identity", [[1, 1], [0, 1]]), Std()),
        (G3, automorphism(G3, "identity", [[0, 1, 0], [0, 0, 1], [1, 0, 0]]), Exterior(Std(), 2)),
        (G3, automorphism(G3, "transpose-inverse"), Tensor((Std(), Dual(Std())))),
        (S2, automorphism(S2, "transpose-inverse"), Std()),
        (S2, automorphism(S2, "identity", [[2, 1], [1, 1]]), Irrep((2, 0))),
        (P, automorphism(P, "factor-permutation", permutation=[1, 0]), Tensor((Std(0), Std(1)))),
        (Torus(2), automorphism(Torus(2), "lattice", lattice_action=LatticeMap(((0, 1), (1, 0)))),
         Tensor((Std(0), Std(1)))),
    ]


def test_criterion_07_twisted_conjugation_invariance():
    pool = _twist_pool()
    with Criterion(7, "1000 twisted traces invariant under g -> h g phi(h)^-1", 30) as c:
        alphas = [equivariance_intertwiner(G, phi, V) for G, phi, V in pool]
        rng = random.Random(7)
        for _ in range(1000):
            k = rng.randrange(len(pool))
            G, phi, _V = pool[k]
            g, h = sampling.group_element(G, rng), sampling.group_element(G, rng)
            moved = h @ g @ la.inverse(phi(h))
            assert twisted_trace(alphas[k], moved) == twisted_trace(alphas[k], g)
        c.detail = f"1000 cases over {len(pool)} (G, phi, V) triples"
    c.check_time()


# --------------------------------------------------------------------------
# 8. Frobenius intertwiners and the torsor dimension


def _sympy_solution_dimension(src, dst):
    """dim {A : A src_i = dst_i A}, via Kronecker products in sympy."""
    n = src[0].shape[0]
    blocks = []
    for S, D in zip(src, dst):
        S = oracles.sympy_matrix(S.tolist())
        D = oracles.sympy_matrix(D.tolist())
        # vec(A S - D A) with row-major vec: (I (x) S^T - D (x) I) vec(A)
        blocks.append(sympy.kronecker_product(sympy.eye(n), S.T) - sympy.kronecker_product(D, sympy.eye(n)))
    K = sympy.Matrix.vstack(*blocks)
    return K.cols - K.rank()


def _eval_word_on_diagonals(diags, word):
    out = [Fraction(1)] * len(diags[0])
    for g, e in word.letters:
        out = [x * diags[g][i] ** e for i, x in enumerate(out)]
    return out


def _frobenius_fixtures():
    rng = random.Random(8)
    Z = free_group("t")
    cases = []
    units = [Fraction(x) for x in (2, 3, -1, Fraction(1, 2), Fraction(1, 3), -2, Fraction(-1, 2))]
    endos = {
        Z: [["t"], ["T"], ["t t"]],
        Z2: [["a", "b"], ["A", "B"], ["b", "a"], ["B", "A"], ["a b", "b"]],
        F2: [["a", "b"], ["b", "a"], ["A", "B"]],
    }
    for group, choices in endos.items():
        for _ in range(12):
            n = rng.randint(1, 3)
            diags = [[rng.choice(units) for _ in range(n)] for _ in group.generators]
            if rng.random() < 0.5:  # force a Frobenius-symmetric spectrum
                diags = [[x for x in d[: (n + 1) // 2]] for d in diags]
                diags = [d + [1 / x for x in d][: n - len(d)] for d in diags]
            h = sampling.invertible_matrix(rng, n)
            sigma = RepresentationPoint(group, tuple(la.diag(d) for d in diags)).conjugate(h)
            endo = rng.choice(choices)
            words = [group.word(w) for w in endo]
            joint = Counter(zip(*diags))
            image = Counter(zip(*[_eval_word_on_diagonals(diags, w) for w in words]))
            cases.append((sigma, endo, joint == image))
    # irreducible two-dimensional points of F2
    A, B = la.qmat([[1, 1], [0, 1]]), la.qmat([[1, 0], [1, 1]])
    cases.append((RepresentationPoint(F2, (A, B)), ["b", "a"], True))
    cases.append((RepresentationPoint(F2, (A, B)), ["a", "b"], True))
    C = la.qmat([[2, 1], [0, 1]])
    cases.append((RepresentationPoint(F2, (C, B)), ["b", "a"], False))
    return cases


def test_criterion_08_frobenius_torsor():
    fixtures = _frobenius_fixtures()
    expected_dims = []
    for sigma, endo, _ in fixtures:
        target = sigma.compose([sigma.group.word(w) for w in endo])
        expected_dims.append((_sympy_solution_dimension(sigma.images, target.images),
                              _sympy_solution_dimension(sigma.images, sigma.images)))
    with Criterion(8, "Frobenius intertwiners: nonempty iff spectra allow, torsor dimension", 10) as c:
        nonempty = 0
        for (sigma, endo, allowed), (sol_dim, comm_dim) in zip(fixtures, expected_dims):
            F = frobenius_intertwiners(sigma, endo)
            assert F.certified
            assert F.nonempty == allowed, (endo, allowed)
            assert F.solution_dimension == sol_dim and F.commutant.dim == comm_dim
            if F.nonempty:
                nonempty += 1
                assert F.torsor and F.solution_dimension == F.commutant.dim
                A = F.sample
                for M, T in zip(sigma.images, F.target.images):
                    assert la.equal(A @ M @ la.inverse(A), T)
        c.detail = f"{len(fixtures)} points, {nonempty} nonempty"
    c.check_time()


# --------------------------------------------------------------------------
# 9. Newton identities and weight partitions


def _random_records(rng, size):
    return [EigenvalueRecord(rng.randint(0, 3), rng.randint(0, 11), rng.choice((1, 2, 3, 4, 6, 12)))
            for _ in range(size)]


def test_criterion_09_newton_and_weights():
    rng = random.Random(9)
    samples = []
    for size in range(1, 7):
        for _ in range(10):
            samples.append([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(size)])
    pairs = []
    for i in range(200):
        a = _random_records(rng, rng.randint(0, 6))
        kind = i % 4
        if kind == 0:
            b = list(a)
            rng.shuffle(b)
        elif kind == 1 and a:
            b = list(a)
            j = rng.randrange(len(b))
            b[j] = EigenvalueRecord(b[j].w, b[j].k + 1, b[j].N)  # perturb one unit
            rng.shuffle(b)
        elif kind == 2 and a:
            b = list(a)
            j = rng.randrange(len(b))
            b[j] = EigenvalueRecord(b[j].w + 1, b[j].k, b[j].N)  # move one weight
        else:
            b = _random_records(rng, len(a))
        pairs.append((a, b))
    truth = [oracles.multiset_key([(r.w, r.k, r.N) for r in a]) ==
             oracles.multiset_key([(r.w, r.k, r.N) for r in b]) for a, b in pairs]
    with Criterion(9, "Newton round trip (sizes <= 6) and 200 weight partitions", 5) as c:
        for values in samples:
            p = power_sums(values, len(values))
            e = newton_transform(p)
            assert e == oracles.brute_elementary(values)
            assert inverse_newton_transform(e) == p
        for (a, b), same in zip(pairs, truth):
            assert weight_partition(a, b).equal == same
        c.detail = f"{len(samples)} round trips, {sum(truth)} equal / {len(truth) - sum(truth)} unequal pairs"
    c.check_time()


# --------------------------------------------------------------------------
# 10. determinism of the CLI


def test_criterion_10_cli_determinism(tmp_path):
    jobs = sorted((HERE / "fixtures" / "jobs").glob("*.json"))
    env = dict(os.environ, PYTHONHASHSEED="12345")
    with Criterion(10, "CLI golden files byte-identical across runs and thread counts") as c:
        for job in jobs:
            golden = (HERE / "golden" / job.name).read_bytes()
            outputs = []
            for threads in ("1", "4"):
                out = tmp_path / f"{job.stem}-{threads}.json"
                cli.main(["--job", str(job), "--out", str(out), "--threads", threads])
                outputs.append(out.read_bytes())
            out = tmp_path / f"{job.stem}-proc.json"
            subprocess.run([sys.executable, "-m", "excalg.cli", "--job", str(job), "--out", str(out),
                            "--threads", "2"], env=env, check=False, capture_output=True)
            outputs.append(out.read_bytes())
            assert all(o == golden for o in outputs), job.name
            json.loads(golden)
        c.detail = f"{len(jobs)} jobs x 3 runs (threads 1, 4, separate process)"
    c.check_time()
