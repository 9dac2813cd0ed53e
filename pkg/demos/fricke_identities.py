"""Word traces on SL(2) as polynomials in tr A, tr B, tr AB.

Samples random rational points of Hom(F_2, SL(2)), fits each trace
function exactly, and re-verifies the identity on fresh points.

    python demos/fricke_identities.py
"""

from excalg.excursion import TraceFunction, fricke_generators, span_fit_many
from excalg.groups import free_group
from excalg.serialize import polynomial_text
from excalg.tensorword import Std

F2 = free_group("a", "b")
gens = fricke_generators(F2)
words = ["abAB", "aa", "aB", "aab", "abab", "aabb", "abAAB"]
targets = [TraceFunction(Std(), F2.word(w), True) for w in words]

fits = span_fit_many(targets, gens, F2, 2, degree=6, special=True)
for w, fit in zip(words, fits):
    text = polynomial_text(fit.polynomial, ["x", "y", "z"])
    print(f"tr({w:6s}) = {text:40s} [{fit.status}, {fit.samples_used} samples, "
          f"verified on {fit.verified_samples}]")

# tr(A) and tr(B) alone cannot produce tr(AB).
fit = span_fit_many([gens[2]], gens[:2], F2, 2, degree=4, special=True)[0]
print("tr(ab) from tr(a), tr(b) only:", fit.status, "-", fit.message)
