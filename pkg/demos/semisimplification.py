"""Semisimplification, component comparison and Frobenius intertwiners.

    python demos/semisimplification.py
"""

from excalg import linalg as la
from excalg.groups import RepresentationPoint, free_group
from excalg.semisimplify import (
    commutant,
    enveloping_algebra,
    frobenius_intertwiners,
    radical,
    same_component,
    semisimplification,
)

F2 = free_group("a", "b")
A = la.qmat([[2, 1, 0], [0, 3, "1/2"], [0, 0, 1]])
B = la.qmat([[1, 0, 4], [0, 1, 0], [0, 0, -1]])
sigma = RepresentationPoint(F2, (A, B))

alg = enveloping_algebra(sigma)
print("enveloping algebra dimension:", alg.dim, "radical dimension:", radical(alg).dim)

res = semisimplification(sigma, length_bound=8)
print("block sizes:", res.block_sizes, "output radical:", res.output_radical_dimension)
for name, M in zip(F2.generators, res.point.images):
    print(f"sigma^ss({name}) =")
    print(la.matrix_text(M))
print(f"traces agree on {res.words_checked} word classes up to length {res.length_bound}")

cert = same_component(sigma, res.point, 8)
print("same component as its semisimplification:", cert.same)

other = RepresentationPoint(F2, (la.diag([2, 3, 2]), B))
cert = same_component(sigma, other, 8)
print("against a different point:", cert.same, "witness:", cert.witness.format(F2.generators))

print("commutant of sigma^ss has dimension", commutant(res.point).dim)

Z = free_group("t")
for d in ([2, "1/2"], [2, 3]):
    s = RepresentationPoint(Z, (la.diag(d),))
    F = frobenius_intertwiners(s, ["T"])
    print(f"diag{tuple(d)} with t -> t^-1:", "nonempty" if F.nonempty else "empty", "-", F.certificate)
    if F.nonempty:
        print(la.matrix_text(F.sample))
