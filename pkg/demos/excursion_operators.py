"""Excursion operators on representations of a free group.

Builds the trace datum, a Hecke function, and random excursion data, then
expresses each random datum as a polynomial in trace functions on GL(2).

    python demos/excursion_operators.py
"""

import random

from excalg import linalg as la
from excalg.excursion import (
    excursion_value,
    gl2_trace_generators,
    hecke_value,
    invariant_tensors,
    random_excursion_datum,
    random_point,
    span_fit_many,
    trace_datum,
)
from excalg.groups import RepresentationPoint, free_group
from excalg.serialize import polynomial_text
from excalg.tensorword import Dual, Exterior, Std

F = free_group("x")
sigma = RepresentationPoint(F, (la.diag([2, 3]),))
print("trace datum at diag(2,3):", excursion_value(trace_datum(Std(), F.word("x"), 2), sigma))
print("Hecke value of Lambda^2:", hecke_value(Exterior(Std(), 2), F.word("x"), sigma))

for k in (1, 2, 3):
    vecs, _ = invariant_tensors(3, [Std()] * k + [Dual(Std())] * k)
    print(f"invariants of std^{k} (x) dual^{k} for GL(3): dimension {len(vecs)}")

F2 = free_group("a", "b")
rng = random.Random(1)
data = [random_excursion_datum(F2, 2, rng) for _ in range(5)]

point = random_point(F2, 2, rng)
h = la.qmat([[1, 2], [0, 1]])
for d in data:
    print("value", excursion_value(d, point), "after conjugation", excursion_value(d, point.conjugate(h)))

names = ["tA", "tB", "tAB", "dA", "dB", "dA'", "dB'"]
fits = span_fit_many(data, gl2_trace_generators(F2), F2, 2, degree=6, seed=3)
for d, fit in zip(data, fits):
    words = ", ".join(str(w) for w in d.words)
    gammas = ", ".join(g.format(F2.generators) or "1" for g in d.gammas)
    print(f"[{words}] at ({gammas}): {fit.status}: {polynomial_text(fit.polynomial, names)}")
