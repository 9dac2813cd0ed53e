import random
from fractions import Fraction
from itertools import permutations

import pytest
import sympy

from excalg import linalg as la, sampling
from excalg.excursion import (
    ExcursionDatum,
    TraceFunction,
    coevaluation,
    excursion_value,
    fricke_generators,
    gl2_trace_generators,
    hecke_value,
    invariant_tensors,
    random_excursion_datum,
    random_point,
    span_fit,
    trace_datum,
)
from excalg.groups import RepresentationPoint, Word, free_abelian_group, free_group
from excalg.tensorword import Det, Dual, Exterior, Std, Sum, Tensor

F2 = free_group("a", "b")


def _sympy_group_invariants(n, k, samples):
    """Common fixed vectors of g^(x k) (x) g^-T^(x k) for sampled g, via sympy."""
    blocks = []
    for g in samples:
        G = sympy.Matrix(g.tolist())
        Gd = G.inv().T
        M = sympy.Matrix([[1]])
        for f in [G] * k + [Gd] * k:
            M = sympy.kronecker_product(M, f)
        blocks.append(M - sympy.eye(M.rows))
    return sympy.Matrix.vstack(*blocks).nullspace()


def test_invariants_of_std_and_dual():
    vecs, covs = invariant_tensors(3, [Std(), Dual(Std())])
    assert len(vecs) == len(covs) == 1
    assert la.equal(vecs[0] / vecs[0][0], coevaluation(3))


def test_trivial_representation_invariants_are_everything():
    vecs, covs = invariant_tensors(2, [Det(0)])
    assert len(vecs) == 1 and len(covs) == 1


def test_std_alone_has_no_invariants():
    vecs, covs = invariant_tensors(2, [Std()])
    assert vecs == [] and covs == []


def test_sl2_std_tensor_std_has_one_invariant():
    vecs, _ = invariant_tensors(2, [Std(), Std()], special=True)
    assert len(vecs) == 1
    v = vecs[0]
    assert v[0] == 0 and v[3] == 0 and v[1] == -v[2]


@pytest.mark.parametrize("k", [1, 2])
def test_invariant_dimension_matches_group_oracle(k):
    rng = random.Random(k)
    samples = [sampling.invertible_matrix(rng, 3) for _ in range(3)]
    expected = len(_sympy_group_invariants(3, k, samples))
    vecs, covs = invariant_tensors(3, [Std()] * k + [Dual(Std())] * k)
    assert len(vecs) == len(covs) == expected == [1, 2][k - 1]


def _permutation_tensor(n, perm):
    k = len(perm)
    v = [0] * (n ** (2 * k))
    for idx in range(n ** k):
        digits = [(idx // n ** (k - 1 - j)) % n for j in range(k)]
        dual = [digits[perm[j]] for j in range(k)]
        pos = 0
        for d in digits + dual:
            pos = pos * n + d
        v[pos] = 1
    return v


def test_k3_invariants_are_spanned_by_permutation_tensors():
    n, k = 3, 3
    vecs, _ = invariant_tensors(n, [Std()] * k + [Dual(Std())] * k)
    assert len(vecs) == 6
    perms = [_permutation_tensor(n, p) for p in permutations(range(k))]
    P = sympy.Matrix(perms)
    assert P.rank() == 6
    combined = sympy.Matrix.vstack(P, sympy.Matrix([[sympy.Rational(str(x)) for x in v] for v in vecs]))
    assert combined.rank() == 6


def test_trace_datum_value():
    F = free_group("g")
    sigma = RepresentationPoint(F, (la.diag([2, 3]),))
    d = trace_datum(Std(), F.word("g"), 2)
    assert d.is_invariant()
    assert excursion_value(d, sigma) == 5


def test_identity_words_give_pairing():
    F = free_group("g")
    sigma = RepresentationPoint(F, (la.qmat([[1, 2], [3, 4]]),))
    d = trace_datum(Std(), Word(), 2)
    assert excursion_value(d, sigma) == sum(a * b for a, b in zip(d.xi, d.v)) == 2


def test_hecke_examples():
    F = free_group("x")
    sigma = RepresentationPoint(F, (la.diag([2, 3]),))
    x = F.word("x")
    assert hecke_value(Std(), x, sigma) == 5
    assert hecke_value(Exterior(Std(), 2), x, sigma) == 6
    assert hecke_value(Std(), x, sigma) == excursion_value(trace_datum(Std(), x, 2), sigma)


def test_hecke_additivity_and_conjugacy():
    rng = random.Random(8)
    V, W = Tensor((Std(), Dual(Std()))), Exterior(Std(), 2)
    for _ in range(10):
        sigma = random_point(F2, 3, rng)
        x = F2.word("a b A")
        assert hecke_value(Sum((V, W)), x, sigma) == hecke_value(V, x, sigma) + hecke_value(W, x, sigma)
        h = sampling.invertible_matrix(rng, 3)
        assert hecke_value(V, x, sigma.conjugate(h)) == hecke_value(V, x, sigma)


def test_datum_validation():
    with pytest.raises(ValueError):
        ExcursionDatum((Std(),), (), [0, 0], [0, 0], 2)
    with pytest.raises(ValueError):
        ExcursionDatum((Std(),), (Word(),), [0, 0, 0], [0, 0], 2)
    d = trace_datum(Std(), Word(), 2)
    sigma = RepresentationPoint(free_group("g"), (la.eye(3),))
    with pytest.raises(ValueError):
        excursion_value(d, sigma)


def test_random_data_are_invariant_and_conjugation_invariant():
    rng = random.Random(21)
    for _ in range(15):
        d = random_excursion_datum(F2, 2, rng)
        assert d.is_invariant()
        assert 2 <= d.size <= 3
        sigma = random_point(F2, 2, rng)
        h = sampling.invertible_matrix(rng, 2)
        assert excursion_value(d, sigma.conjugate(h)) == excursion_value(d, sigma)


def test_trace_datum_unchanged_by_conjugating_the_word():
    rng = random.Random(4)
    gamma = F2.word("a b b")
    w = F2.word("b A")
    d1 = trace_datum(Std(), gamma, 3)
    d2 = trace_datum(Std(), w * gamma * w.inverse(), 3)
    for _ in range(5):
        sigma = random_point(F2, 3, rng)
        assert excursion_value(d1, sigma) == excursion_value(d2, sigma)


def test_free_abelian_points_commute():
    Z2 = free_abelian_group("a", "b")
    rng = random.Random(2)
    for _ in range(5):
        sigma = random_point(Z2, 3, rng)
        A, B = sigma.images
        assert la.equal(A @ B, B @ A)


def test_fricke_commutator_identity():
    target = TraceFunction(Std(), F2.word("a b A B"), True)
    fit = span_fit(target, fricke_generators(F2), F2, 2, degree=3, special=True)
    assert fit.status == "fit" and fit.verified and fit.verified_samples == 50
    assert fit.polynomial == {
        (2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1, (1, 1, 1): -1, (0, 0, 0): -2,
    }


def test_trace_of_square():
    Z = free_group("a")
    gens = [TraceFunction(Std(), Z.word("a"), True)]
    fit = span_fit(TraceFunction(Std(), Z.word("a a"), True), gens, Z, 2, degree=2, special=True)
    assert fit.status == "fit" and fit.polynomial == {(2,): 1, (0,): -2}


def test_generator_target_gives_coefficient_extraction():
    gens = fricke_generators(F2)
    fit = span_fit(gens[2], gens, F2, 2, degree=2, special=True)
    assert fit.status == "fit" and fit.polynomial == {(0, 0, 1): 1}


def test_not_in_span():
    gens = fricke_generators(F2)[:2]
    fit = span_fit(fricke_generators(F2)[2], gens, F2, 2, degree=3, special=True)
    assert fit.status == "not-in-span" and not fit.verified


def test_inconclusive_when_budget_is_tiny():
    gens = fricke_generators(F2)
    target = TraceFunction(Std(), F2.word("a b A B"), True)
    fit = span_fit(target, gens, F2, 2, degree=4, budget=4, batch=2, special=True, ladder=False)
    assert fit.status == "inconclusive"


def test_gl2_excursion_datum_fits():
    rng = random.Random(0)
    d = random_excursion_datum(F2, 2, rng)
    fit = span_fit(d, gl2_trace_generators(F2), F2, 2, degree=6, seed=1)
    assert fit.status == "fit" and fit.verified


def test_fit_is_independent_of_worker_count():
    target = TraceFunction(Std(), F2.word("a a b"), True)
    gens = fricke_generators(F2)
    f1 = span_fit(target, gens, F2, 2, degree=3, special=True, workers=1)
    f4 = span_fit(target, gens, F2, 2, degree=3, special=True, workers=4)
    assert f1.polynomial == f4.polynomial and f1.rank_history == f4.rank_history
    assert all(isinstance(c, Fraction) for c in f1.polynomial.values())
