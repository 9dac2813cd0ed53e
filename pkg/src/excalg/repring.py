"""Characters of GL/SL/tori and representation-ring arithmetic.

A character is a Laurent polynomial on the diagonal torus, stored as a
mapping weight -> multiplicity. Irreducible characters of GL(n) are Schur
Laurent polynomials, computed from the Jacobi-Trudi determinant in the
complete homogeneous polynomials.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import comb
from typing import Mapping, Sequence

from .lattice import RootDatum, Weight


class NotAVirtualCharacter(ValueError):
    pass


def _clean(terms: Mapping) -> dict:
    return {tuple(w): int(c) for w, c in terms.items() if c}


@dataclass(frozen=True, eq=False)
class Character:
    group: RootDatum
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        terms = {}
        for w, c in self.terms.items():
            w = self.group.normalize(w)
            terms[w] = terms.get(w, 0) + int(c)
        object.__setattr__(self, "terms", _clean(terms))

    @classmethod
    def unit(cls, G: RootDatum) -> "Character":
        return cls(G, {(0,) * G.dim: 1})

    @classmethod
    def monomial(cls, G: RootDatum, w: Sequence[int], c: int = 1) -> "Character":
        return cls(G, {tuple(w): c})

    @property
    def is_virtual(self) -> bool:
        return any(c < 0 for c in self.terms.values())

    def dimension(self) -> int:
        """Value at the identity."""
        return sum(self.terms.values())

    def weights(self) -> list[Weight]:
        """Weights with multiplicity, sorted."""
        return [w for w in sorted(self.terms) for _ in range(self.terms[w])]

    def _check(self, other: "Character"):
        if self.group != other.group:
            raise ValueError(f"group mismatch: {self.group} vs {other.group}")

    def __eq__(self, other):
        return isinstance(other, Character) and self.group == other.group and self.terms == other.terms

    def __hash__(self):
        return hash((self.group, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "Character") -> "Character":
        self._check(other)
        t = defaultdict(int, self.terms)
        for w, c in other.terms.items():
            t[w] += c
        return Character(self.group, t)

    def __neg__(self) -> "Character":
        return Character(self.group, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "Character") -> "Character":
        return self + (-other)

    def scale(self, k: int) -> "Character":
        return Character(self.group, {w: k * c for w, c in self.terms.items()})

    def shift(self, mu: Sequence[int]) -> "Character":
        return Character(self.group, {tuple(a + b for a, b in zip(w, mu)): c for w, c in self.terms.items()})

    def __mul__(self, other: "Character") -> "Character":
        return multiply_characters(self, other)

    def pullback(self, A) -> "Character":
        """Apply a lattice-coordinate map to every weight."""
        return Character(self.group, {self.group.apply(A, w): c for w, c in self.terms.items()})

    def dual(self) -> "Character":
        return Character(self.group, {tuple(-x for x in w): c for w, c in self.terms.items()})

    def is_weyl_invariant(self) -> bool:
        G = self.group
        return all(self.terms.get(v, 0) == c for w, c in self.terms.items() for v in G.weyl_orbit(w))

    def evaluate(self, torus_point: Sequence) -> Fraction:
        """Value at the diagonal torus element with the given ambient entries."""
        total = Fraction(0)
        for w, c in self.terms.items():
            term = Fraction(c)
            for t, e in zip(torus_point, w):
                term *= Fraction(t) ** e
            total += term
        return total

    def __repr__(self):
        body = " + ".join(f"{c}*x^{w}" for w, c in sorted(self.terms.items(), reverse=True)) or "0"
        return f"Character[{self.group}]({body})"


def multiply_characters(a: Character, b: Character) -> Character:
    a._check(b)
    t = defaultdict(int)
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            t[tuple(x + y for x, y in zip(w1, w2))] += c1 * c2
    return Character(a.group, t)


# --------------------------------------------------------------------------
# Schur polynomials


def _poly_mul(p: dict, q: dict) -> dict:
    out = defaultdict(int)
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
    return {e: c for e, c in out.items() if c}


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def complete_homogeneous(k: int, n: int) -> dict:
    if k < 0:
        return {}
    return {e: 1 for e in _compositions(k, n)}


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def schur_polynomial(partition: Sequence[int], n: int) -> dict:
    """s_mu(x_1..x_n) for a partition mu with at most n parts (Jacobi-Trudi)."""
    mu = [int(x) for x in partition if x]
    ell = len(mu)
    if ell == 0:
        return {(0,) * n: 1}
    if ell > n:
        return {}
    h = {}

    def H(k):
        if k not in h:
            h[k] = complete_homogeneous(k, n)
        return h[k]

    out = defaultdict(int)
    for p in permutations(range(ell)):
        term = {(0,) * n: _perm_sign(p)}
        for i in range(ell):
            term = _poly_mul(term, H(mu[i] - i + p[i]))
            if not term:
                break
        for e, c in term.items():
            out[e] += c
    return {e: c for e, c in out.items() if c}


def weyl_character(G: RootDatum, lam: Sequence[int]) -> Character:
    """Character of the irreducible representation of highest weight ``lam``."""
    lam = G.normalize(lam)
    if not G.is_dominant(lam):
        raise ValueError(f"{lam} is not dominant for {G}")
    result = {(): 1}
    for (a, b) in G.blocks():
        piece = lam[a:b]
        shift = piece[-1]
        s = schur_polynomial([x - shift for x in piece], b - a)
        s = {tuple(x + shift for x in e): c for e, c in s.items()}
        result = {e1 + e2: c1 * c2 for e1, c1 in result.items() for e2, c2 in s.items()}
    return Character(G, result)


def weyl_dimension(G: RootDatum, lam: Sequence[int]) -> Fraction:
    """Weyl dimension formula: prod over positive roots of <lam+rho, a>/<rho, a>."""
    lam = G.normalize(lam)
    d = Fraction(1)
    for a, b in G.blocks():
        for i in range(a, b):
            for j in range(i + 1, b):
                d *= Fraction(lam[i] - lam[j] + j - i, j - i)
    return d


# --------------------------------------------------------------------------
# Representation ring


@dataclass(frozen=True, eq=False)
class RepRingElement:
    """Integer combination of irreducibles, keyed by dominant highest weight."""

    group: RootDatum
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        terms = {}
        for w, c in self.terms.items():
            w = self.group.normalize(w)
            if not self.group.is_dominant(w):
                raise ValueError(f"{w} is not dominant")
            terms[w] = terms.get(w, 0) + int(c)
        object.__setattr__(self, "terms", _clean(terms))

    def __eq__(self, other):
        return isinstance(other, RepRingElement) and self.group == other.group and self.terms == other.terms

    def __hash__(self):
        return hash((self.group, tuple(sorted(self.terms.items()))))

    @property
    def is_virtual(self) -> bool:
        return any(c < 0 for c in self.terms.values())

    def to_character(self) -> Character:
        out = Character(self.group, {})
        for lam, c in self.terms.items():
            out = out + weyl_character(self.group, lam).scale(c)
        return out

    def __add__(self, other: "RepRingElement") -> "RepRingElement":
        t = defaultdict(int, self.terms)
        for w, c in other.terms.items():
            t[w] += c
        return RepRingElement(self.group, t)

    def __mul__(self, other: "RepRingElement") -> "RepRingElement":
        return decompose_character(self.to_character() * other.to_character())

    def dimension(self) -> int:
        return sum(c * int(weyl_dimension(self.group, lam)) for lam, c in self.terms.items())

    def __repr__(self):
        body = ", ".join(f"{w}: {c}" for w, c in sorted(self.terms.items(), reverse=True))
        return f"RepRingElement[{self.group}]({{{body}}})"


def decompose_character(chi: Character) -> RepRingElement:
    """Write a Weyl-invariant character as a combination of Weyl characters.

    Repeatedly strips the Weyl character of the lexicographically largest
    remaining weight, which must be dominant.
    """
    G = chi.group
    rest = chi
    out = {}
    limit = 10 * (len(chi.terms) + 1)
    while rest.terms:
        limit -= 1
        lam = max(rest.terms)
        if limit < 0 or not G.is_dominant(lam):
            raise NotAVirtualCharacter("not a virtual character of this group")
        c = rest.terms[lam]
        out[lam] = c
        rest = rest - weyl_character(G, lam).scale(c)
    return RepRingElement(G, out)


def exterior_power_character(chi: Character, r: int) -> Character:
    """Character of the r-th exterior power: coefficient of t^r in prod (1 + t x^mu)."""
    if r < 0:
        raise ValueError("negative exterior power")
    if chi.is_virtual:
        raise ValueError("exterior powers are only defined for genuine representations")
    G = chi.group
    coeffs: list[dict] = [{(0,) * G.dim: 1}] + [{} for _ in range(r)]
    for mu, m in sorted(chi.terms.items()):
        new = [defaultdict(int) for _ in range(r + 1)]
        for j in range(r + 1):
            for i in range(min(m, j) + 1):
                shift = tuple(i * x for x in mu)
                for w, c in coeffs[j - i].items():
                    new[j][tuple(a + b for a, b in zip(w, shift))] += comb(m, i) * c
        coeffs = [dict(d) for d in new]
    return Character(G, coeffs[r])


# --------------------------------------------------------------------------
# Newton identities


def newton_transform(p: Sequence) -> list:
    """Elementary symmetric values e_1..e_k from power sums p_1..p_k.

    Uses k e_k = sum_{i=1..k} (-1)^(i-1) e_(k-i) p_i; works over any field of
    characteristic 0 whose elements support +, * and multiplication by Fraction.
    """
    e = [1]
    for k in range(1, len(p) + 1):
        acc = 0
        for i in range(1, k + 1):
            term = e[k - i] * p[i - 1]
            acc = acc + term if i % 2 else acc - term
        e.append(acc * Fraction(1, k))
    return e[1:]


def inverse_newton_transform(e: Sequence) -> list:
    """Power sums p_1..p_k from elementary symmetric values e_1..e_k."""
    es = [1] + list(e)
    p = []
    for k in range(1, len(e) + 1):
        acc = es[k] * k
        for i in range(1, k):
            term = es[k - i] * p[i - 1]
            acc = acc - term if i % 2 else acc + term
        p.append(acc if k % 2 else -acc)
    return p


def elementary_symmetric(values: Sequence) -> list:
    """e_1..e_n of a finite multiset, by expanding prod (1 + x t)."""
    coeffs = [1]
    for x in values:
        coeffs = [a + (coeffs[i - 1] * x if i else 0) for i, a in enumerate(coeffs + [0])]
    return coeffs[1:]


def power_sums(values: Sequence, k: int) -> list:
    out = []
    for j in range(1, k + 1):
        acc = 0
        for x in values:
            acc = acc + x ** j
        out.append(acc)
    return out
