"""Twisted conjugation on GL(2) and on tori.

Walks through the transpose-inverse automorphism of GL(2): which
irreducibles it fixes, an explicit intertwiner for the adjoint
representation, invariance of the twisted trace, and the two finiteness
certificates.

    python demos/twisted_invariants.py
"""

import random

from excalg import GL, LatticeMap, Torus, linalg as la, sampling
from excalg.tensorword import Exterior, Irrep, Std
from excalg.twisted import (
    NotFixedError,
    automorphism,
    equivariance_intertwiner,
    fixed_dominant_weights,
    levi_finiteness_check,
    torus_twisted_basis,
    twisted_trace,
    valuation_certificate,
)

G = GL(2)
phi = automorphism(G, "transpose-inverse")

# Only self-dual irreducibles (a, -a) survive the twist.
print("fixed dominant weights, |coordinates| <= 3:", fixed_dominant_weights(G, phi, 3))

try:
    equivariance_intertwiner(G, phi, Std())
except NotFixedError as exc:
    print("std:", exc)

alpha = equivariance_intertwiner(G, phi, Irrep((1, -1)))
print("intertwiner on the adjoint representation:")
print(la.matrix_text(alpha.matrix))
print("report:", alpha.report)

# tr(alpha . rho(g)) is constant on twisted conjugacy classes g ~ h g phi(h)^-1.
rng = random.Random(0)
g = sampling.group_element(G, rng)
for _ in range(3):
    h = sampling.group_element(G, rng)
    moved = h @ g @ la.inverse(phi(h))
    print("twisted trace:", twisted_trace(alpha, g), "after twisted conjugation:", twisted_trace(alpha, moved))

# Tori: invariant functions come from the fixed characters.
cyclic = LatticeMap(((0, 0, 1), (1, 0, 0), (0, 1, 0)))
print("G_m^3 with a cyclic shift, fixed character basis:", torus_twisted_basis(Torus(3), cyclic))

# Step 1: a valuation certificate for Lambda^2 of GL(3) under transpose-inverse.
G3 = GL(3)
cert = valuation_certificate(G3, automorphism(G3, "transpose-inverse"), Exterior(Std(), 2), ["1/2", -3, 2])
print(f"certificate: v0 = {cert.v0}, r = {cert.r}, lambda0 = {cert.lambda0}, "
      f"multiplicity = {cert.multiplicity}, strict = {cert.strict}")

# Step 2: the diagonal G_m inside G_m^2 with the swap has cokernel Z/2.
report = levi_finiteness_check(LatticeMap(((1, 1),)), LatticeMap(((0, 1), (1, 0))), LatticeMap(((1,),)))
print("diagonal torus in G_m^2 with swap: finite =", report.finite, "factors =", report.invariant_factors)
