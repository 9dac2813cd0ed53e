import random

import pytest

from excalg import GL, SL, Product, decompose_character, linalg as la, sampling
from excalg.tensorword import Det, Dual, Exterior, Irrep, Std, Sum, Tensor, highest_weight_word

from oracles import weyl_dimension_gl

CASES = [
    (GL(2), Std()),
    (GL(2), Dual(Std())),
    (GL(2), Tensor((Std(), Dual(Std())))),
    (GL(3), Exterior(Std(), 2)),
    (GL(2), Det(-1)),
    (GL(2), Sum((Std(), Det(2)))),
    (GL(3), Irrep((2, 1, 0))),
    (GL(2), Irrep((3, -1))),
    (SL(2), Irrep((2, 0))),
    (Product(GL(2), GL(1)), Tensor((Std(0), Std(1)))),
    (Product(GL(2), GL(2)), Det(1, 1)),
]


@pytest.mark.parametrize("G,V", CASES, ids=[f"{G}-{V}" for G, V in CASES])
def test_rho_is_multiplicative(G, V):
    rng = random.Random(11)
    for _ in range(3):
        g, h = sampling.group_element(G, rng), sampling.group_element(G, rng)
        assert la.equal(V.rho(G, g @ h), V.rho(G, g) @ V.rho(G, h))
    assert la.equal(V.rho(G, la.eye(G.dim)), la.eye(V.dim(G)))


@pytest.mark.parametrize("G,V", CASES, ids=[f"{G}-{V}" for G, V in CASES])
def test_trace_on_torus_matches_character(G, V):
    rng = random.Random(5)
    chi = V.character(G)
    assert chi.dimension() == V.dim(G)
    for _ in range(3):
        t = sampling.torus_element(G, rng)
        assert la.trace(V.rho(G, t)) == chi.evaluate([t[i, i] for i in range(G.dim)])


def test_dimensions():
    G = GL(3)
    assert Std().dim(G) == 3
    assert Tensor((Std(), Std(), Dual(Std()))).dim(G) == 27
    assert Exterior(Std(), 2).dim(G) == 3
    assert Sum((Std(), Det(1))).dim(G) == 4
    assert Irrep((2, 1, 0)).dim(G) == weyl_dimension_gl((2, 1, 0)) == 8


def test_irreducibility_flags():
    assert Std().is_irreducible()
    assert Irrep((1, 0)).is_irreducible()
    assert not Sum((Std(), Std())).is_irreducible()


def test_operator_sugar():
    assert (Std() @ Dual(Std())) == Tensor((Std(), Dual(Std())))
    assert (Std() + Det(1)) == Sum((Std(), Det(1)))


def test_highest_weight_word_contains_the_irrep_once():
    G = GL(3)
    for lam in [(2, 1, 0), (1, 1, -1), (3, 0, 0)]:
        V = highest_weight_word(G, lam)
        assert V.basis_weights(G)[0] == lam
        dec = decompose_character(V.character(G))
        assert dec.terms[lam] == 1
        assert max(dec.terms) == lam


def test_central_degree():
    G = GL(2)
    assert Tensor((Std(), Std(), Dual(Std()))).central_degree(G) == (1,)
    assert Det(-2).central_degree(G) == (-4,)
