import random
from collections import Counter

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from excalg import linalg as la, sampling
from excalg.groups import RepresentationPoint, free_abelian_group, free_group, freely_reduced_words
from excalg.semisimplify import (
    EigenvalueRecord,
    MatrixAlgebra,
    closure,
    commutant,
    enveloping_algebra,
    frobenius_intertwiners,
    radical,
    random_reducible_point,
    same_component,
    semisimplification,
    weight_partition,
)

import oracles

Z = free_group("t")
F2 = free_group("a", "b")
Z2 = free_abelian_group("a", "b")


def point(group, *mats):
    return RepresentationPoint(group, tuple(la.qmat(m) for m in mats))


def brute_algebra_dim(sigma, length):
    """Rank of the span of sigma(w) over all words up to the given length."""
    rows = [list(sigma(w).reshape(-1)) for w in freely_reduced_words(sigma.group.ngens, length)]
    return oracles.rank_q(rows)


def brute_radical_dim(A: MatrixAlgebra):
    G = sympy.Matrix(A.dim, A.dim, lambda i, j: sympy.Rational(str(la.trace(A.basis[i] @ A.basis[j]))))
    return A.dim - G.rank()


def test_enveloping_examples():
    assert enveloping_algebra(point(Z, [[3, 0], [0, 3]])).dim == 1
    assert enveloping_algebra(point(F2, [[1, 1], [0, 1]], [[1, 0], [1, 1]])).dim == 4
    assert enveloping_algebra(point(Z, [[1, 1], [0, 1]])).dim == 2


def test_enveloping_matches_word_span():
    rng = random.Random(9)
    for _ in range(5):
        sigma = random_reducible_point(F2, 3, rng)
        A = enveloping_algebra(sigma)
        assert A.is_closed() and A.contains_identity()
        assert A.dim == brute_algebra_dim(sigma, 4)


def test_radical_examples():
    full = closure([la.qmat([[1, 1], [0, 1]]), la.qmat([[1, 0], [1, 1]])], 2)
    assert radical(full).dim == 0
    upper = closure([la.qmat([[1, 0], [0, 2]]), la.qmat([[0, 1], [0, 0]])], 2)
    assert upper.dim == 3
    J = radical(upper)
    assert J.dim == 1 and la.equal(J.basis[0] / J.basis[0][0, 1], la.qmat([[0, 1], [0, 0]]))
    jordan = enveloping_algebra(point(Z, [[1, 1], [0, 1]]))
    J = radical(jordan)
    assert J.dim == 1 and J.basis[0][1, 0] == 0 and J.basis[0][0, 0] == 0


def test_radical_is_nilpotent_two_sided_ideal():
    rng = random.Random(13)
    for _ in range(8):
        sigma = random_reducible_point(F2, 4, rng)
        A = enveloping_algebra(sigma)
        J = radical(A)
        assert J.dim == brute_radical_dim(A)
        for X in J.basis:
            for Y in A.basis:
                assert J.contains(X @ Y) and J.contains(Y @ X)
        P = la.eye(4)
        for _ in range(4):
            P = P @ sum(J.basis[1:], J.basis[0]) if J.basis else la.zeros(4, 4)
        assert la.is_zero(P)


def test_semisimplification_examples():
    res = semisimplification(point(Z, [[1, 1], [0, 1]]))
    assert la.equal(res.point.images[0], la.eye(2))
    assert res.radical_dimension == 1 and res.block_sizes == [1, 1]

    sigma = point(F2, [[2, 1], [0, 3]], [[1, 5], [0, 7]])
    res = semisimplification(sigma)
    imgs = res.point.images
    assert all(M[0, 1] == 0 and M[1, 0] == 0 for M in imgs)
    assert Counter((imgs[0][i, i], imgs[1][i, i]) for i in range(2)) == Counter([(2, 1), (3, 7)])


def test_semisimple_input_is_kept_up_to_conjugacy():
    sigma = point(F2, [[1, 1], [0, 1]], [[1, 0], [1, 1]])
    res = semisimplification(sigma)
    assert res.radical_dimension == 0
    assert same_component(sigma, res.point).same


@pytest.mark.parametrize("group", [F2, Z2], ids=["F2", "Z2"])
def test_semisimplification_contract(group):
    rng = random.Random(31)
    for _ in range(6):
        n = rng.randint(2, 4)
        sigma = random_reducible_point(group, n, rng)
        res = semisimplification(sigma, length_bound=4)
        assert res.output_radical_dimension == 0
        for w in freely_reduced_words(group.ngens, 4):
            assert la.trace(res.point(w)) == la.trace(sigma(w))
        again = semisimplification(res.point, length_bound=4)
        assert again.radical_dimension == 0 and same_component(again.point, res.point, 4).same


def test_commutant_examples():
    assert commutant(point(F2, [[1, 1], [0, 1]], [[1, 0], [1, 1]])).dim == 1
    C = commutant(point(Z, [[2, 0], [0, 3]]))
    assert C.dim == 2 and all(X[0, 1] == 0 and X[1, 0] == 0 for X in C.basis)
    assert commutant(point(F2, la.eye(3), la.eye(3))).dim == 9


def test_commutant_properties():
    rng = random.Random(5)
    for _ in range(5):
        sigma = random_reducible_point(F2, 3, rng)
        C = commutant(sigma)
        assert C.is_closed() and C.contains_identity()
        ss = semisimplification(sigma, 4).point
        assert commutant(ss).is_semisimple()


def test_frobenius_identity_endomorphism():
    sigma = point(F2, [[1, 1], [0, 1]], [[1, 0], [1, 1]])
    F = frobenius_intertwiners(sigma, ["a", "b"])
    assert F.nonempty and F.torsor
    assert F.solution_dimension == F.commutant.dim == 1


def test_frobenius_empty_by_eigenvalues():
    F = frobenius_intertwiners(point(Z, [[2, 0], [0, 3]]), ["T"])
    assert not F.nonempty and F.certified


def test_frobenius_antidiagonal():
    sigma = point(Z, [[2, 0], [0, "1/2"]])
    F = frobenius_intertwiners(sigma, ["T"])
    assert F.nonempty and F.torsor
    A = F.sample
    assert A[0, 0] == 0 and A[1, 1] == 0
    assert la.equal(A @ sigma.images[0] @ la.inverse(A), la.inverse(sigma.images[0]))


def test_frobenius_torsor_property():
    sigma = point(Z2, [[2, 0, 0], [0, "1/2", 0], [0, 0, 1]], [[3, 0, 0], [0, "1/3", 0], [0, 0, -1]])
    F = frobenius_intertwiners(sigma, ["A", "B"])
    assert F.nonempty and F.torsor
    space = MatrixAlgebra(3, F.solution_basis)
    rng = random.Random(0)
    target_comm = commutant(F.target)
    for _ in range(5):
        u = sum((rng.randint(1, 9) * B for B in F.commutant.basis), la.zeros(3, 3))
        v = sum((rng.randint(1, 9) * B for B in target_comm.basis), la.zeros(3, 3))
        assert space.contains(F.sample @ u)
        assert space.contains(v @ F.sample)


def test_same_component_examples():
    Z1 = free_group("t")
    res = same_component(point(Z1, [[2, 0], [0, 3]]), point(Z1, [[2, 0], [0, 5]]))
    assert not res.same and res.witness.format(["t"]) == "t"
    rng = random.Random(1)
    sigma = random_reducible_point(F2, 3, rng)
    h = sampling.invertible_matrix(rng, 3)
    assert same_component(sigma, sigma.conjugate(h)).same


def test_eigenvalue_record_reduction():
    assert EigenvalueRecord(0, 2, 4) == EigenvalueRecord(0, 1, 2)
    assert EigenvalueRecord(0, 0, 5) == EigenvalueRecord(0, 0, 1)
    assert EigenvalueRecord(1, -1, 3) == EigenvalueRecord(1, 2, 3)
    with pytest.raises(ValueError):
        EigenvalueRecord(0, 1, 0)


def test_weight_partition_examples():
    E = [EigenvalueRecord(0, 0, 1), EigenvalueRecord(0, 1, 4), EigenvalueRecord(2, 0, 1)]
    assert weight_partition(E, list(reversed(E))).equal
    swapped = [EigenvalueRecord(0, 0, 1), EigenvalueRecord(0, 3, 4), EigenvalueRecord(2, 0, 1)]
    res = weight_partition(E, swapped)
    assert not res.equal
    assert [c.equal for c in res.weights] == [False, True]
    res = weight_partition([EigenvalueRecord(0, 0, 1)], [EigenvalueRecord(1, 0, 1)])
    assert not res.equal and [c.weight for c in res.weights] == [0, 1]


records = st.lists(
    st.builds(lambda w, k, N: EigenvalueRecord(w, k, N), st.integers(0, 2), st.integers(0, 11), st.sampled_from([1, 2, 3, 4, 6, 12])),
    max_size=6,
)


@settings(max_examples=80)
@given(records, records, st.randoms(use_true_random=False))
def test_weight_partition_agrees_with_multiset_equality(a, b, r):
    key = lambda E: oracles.multiset_key([(x.w, x.k, x.N) for x in E])
    assert weight_partition(a, b).equal == (key(a) == key(b))
    shuffled = list(a)
    r.shuffle(shuffled)
    assert weight_partition(a, shuffled).equal
    assert weight_partition(b, a).equal == weight_partition(a, b).equal
    # enlarging every field by a common factor leaves the verdict alone
    big = lambda E: [EigenvalueRecord(x.w, 5 * x.k, 5 * x.N) for x in E]
    assert weight_partition(big(a), big(b)).equal == weight_partition(a, b).equal
