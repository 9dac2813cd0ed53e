"""Comparing eigenvalue multisets weight by weight.

Each record stands for zeta_N^k q^(w/2). Unit parts are compared exactly in a
common cyclotomic field through power sums and the Newton identities.

    python demos/weight_bookkeeping.py
"""

from excalg.cyclotomic import Cyclotomic
from excalg.repring import newton_transform, power_sums
from excalg.semisimplify import EigenvalueRecord as E, weight_partition

left = [E(0, 0, 1), E(0, 1, 4), E(2, 0, 1), E(1, 1, 3)]
right = [E(2, 0, 1), E(1, 2, 6), E(0, 1, 4), E(0, 0, 1)]
print("equal up to order:", weight_partition(left, right).equal)

changed = [E(0, 0, 1), E(0, 3, 4), E(2, 0, 1), E(1, 1, 3)]
res = weight_partition(left, changed)
for c in res.weights:
    print(f"weight {c.weight}: {'agree' if c.equal else 'differ'}")

# the Newton identities recover the elementary symmetric functions
units = [r.unit(12) for r in left]
e = newton_transform(power_sums(units, len(units)))
print("e_1 of the unit parts:", e[0])
print("zeta_4 == zeta_12^3:", Cyclotomic.zeta(4) == Cyclotomic.zeta(12, 3))
