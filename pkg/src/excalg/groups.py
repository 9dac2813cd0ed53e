"""Finitely presented groups, words, and representation points.

Words are tuples of (generator index, +1 or -1). In text, a word over
single-letter generators may be written with capitals for inverses
("abAB"); otherwise use whitespace-separated tokens ("x y x^-1 y^-1").
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from . import linalg as la

Letter = tuple  # (generator index, +1 | -1)


def free_reduce(letters: Sequence[Letter]) -> tuple:
    out: list = []
    for g, e in letters:
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((int(g), int(e)))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def conjugate(self, w: "Word") -> "Word":
        """w self w^-1."""
        return w * self * w.inverse()

    def cyclic_reduce(self) -> "Word":
        L = list(self.letters)
        while len(L) > 1 and L[0] == (L[-1][0], -L[-1][1]):
            L = L[1:-1]
        return Word(tuple(L))

    def exponent_sums(self, ngens: int) -> tuple:
        out = [0] * ngens
        for g, e in self.letters:
            out[g] += e
        return tuple(out)

    def format(self, names: Sequence[str]) -> str:
        if all(len(n) == 1 and n.islower() for n in names):
            return "".join(names[g] if e > 0 else names[g].upper() for g, e in self.letters)
        return " ".join(names[g] if e > 0 else f"{names[g]}^-1" for g, e in self.letters)


_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*?)(?:\^(-?\d+))?$")


def parse_word(text, names: Sequence[str]) -> Word:
    """Parse a word given as a string or a list of tokens."""
    if isinstance(text, Word):
        return text
    index = {n: i for i, n in enumerate(names)}
    lowercase = all(len(n) == 1 and n.islower() for n in names)
    if isinstance(text, str):
        text = text.strip()
        if text in ("", "1", "e"):
            return Word()
        compact = lowercase and " " not in text and "^" not in text
        if compact:
            letters = []
            for ch in text:
                if ch in index:
                    letters.append((index[ch], 1))
                elif ch.lower() in index:
                    letters.append((index[ch.lower()], -1))
                else:
                    raise ValueError(f"unknown generator {ch!r} in {text!r}")
            return Word(tuple(letters))
        tokens = text.split()
    else:
        tokens = list(text)
    letters = []
    for tok in tokens:
        m = _TOKEN.match(str(tok))
        name = m.group(1) if m else None
        sign = 1
        if m and name not in index and lowercase and name.lower() in index:
            name, sign = name.lower(), -1  # capital letter = inverse
        if name not in index:
            raise ValueError(f"cannot parse token {tok!r}")
        k = sign * (int(m.group(2)) if m.group(2) else 1)
        g = index[name]
        letters.extend([(g, 1 if k > 0 else -1)] * abs(k))
    return Word(tuple(letters))


@dataclass(frozen=True)
class FPGroup:
    generators: tuple
    relators: tuple = ()
    degree: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        rels = tuple(parse_word(r, self.generators) for r in self.relators)
        object.__setattr__(self, "relators", rels)
        if self.degree is not None:
            deg = tuple(int(x) for x in self.degree)
            if len(deg) != len(self.generators):
                raise ValueError("degree map must assign an integer to every generator")
            for r in rels:
                if sum(d * e for d, e in zip(deg, r.exponent_sums(len(deg)))):
                    raise ValueError(f"degree map does not kill relator {r.format(self.generators)}")
            object.__setattr__(self, "degree", deg)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def word(self, text) -> Word:
        return parse_word(text, self.generators)

    def is_free(self) -> bool:
        return not self.relators

    def is_free_abelian(self) -> bool:
        """True when the relators are exactly the commutators of all generator pairs."""
        want = set()
        n = self.ngens
        for i in range(n):
            for j in range(i + 1, n):
                want.add(Word(((i, 1), (j, 1), (i, -1), (j, -1))).cyclic_reduce())
        have = {r.cyclic_reduce() for r in self.relators}
        return n > 1 and have == want or (n == 1 and not self.relators)


def free_group(*names: str) -> FPGroup:
    return FPGroup(tuple(names))


def free_abelian_group(*names: str) -> FPGroup:
    rels = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            rels.append(Word(((i, 1), (j, 1), (i, -1), (j, -1))))
    return FPGroup(tuple(names), tuple(rels))


class RelatorViolation(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RepresentationPoint:
    group: FPGroup
    images: tuple  # one rational matrix per generator
    _inverses: dict = field(default_factory=dict, repr=False)
    _products: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        imgs = tuple(np.asarray(la.qmat(m) if not isinstance(m, np.ndarray) else m, dtype=object)
                     for m in self.images)
        if len(imgs) != self.group.ngens:
            raise ValueError("one image per generator is required")
        n = imgs[0].shape[0] if imgs else 0
        for m in imgs:
            if m.shape != (n, n):
                raise ValueError("images must be square matrices of one size")
        object.__setattr__(self, "images", imgs)

    MEMO_LENGTH = 10

    @classmethod
    def from_mapping(cls, group: FPGroup, images: Mapping) -> "RepresentationPoint":
        return cls(group, tuple(images[g] for g in group.generators))

    @property
    def dimension(self) -> int:
        return self.images[0].shape[0] if self.images else 0

    def letter(self, g: int, e: int) -> np.ndarray:
        if e > 0:
            return self.images[g]
        if g not in self._inverses:
            self._inverses[g] = la.inverse(self.images[g])
        return self._inverses[g]

    def __call__(self, w) -> np.ndarray:
        w = self.group.word(w) if not isinstance(w, Word) else w
        L = w.letters
        if not L:
            return la.eye(self.dimension)
        cached = self._products.get(L)
        if cached is None:
            # memoized by prefix, so evaluating many related words is cheap
            cached = self(Word(L[:-1])) @ self.letter(*L[-1]) if len(L) > 1 else self.letter(*L[0])
            if len(L) <= self.MEMO_LENGTH:
                self._products[L] = cached
        return cached.copy()

    def conjugate(self, h) -> "RepresentationPoint":
        """The point h sigma h^-1."""
        H = la.qmat(h) if not isinstance(h, np.ndarray) else h
        Hi = la.inverse(H)
        return RepresentationPoint(self.group, tuple(H @ m @ Hi for m in self.images))

    def compose(self, endo: Sequence[Word]) -> "RepresentationPoint":
        """sigma o f for a group endomorphism f given by generator images."""
        return RepresentationPoint(self.group, tuple(self(w) for w in endo))


def check_representation(sigma: RepresentationPoint) -> RepresentationPoint:
    """Validate invertibility and every relator, exactly."""
    names = sigma.group.generators
    for name, m in zip(names, sigma.images):
        if la.det(m) == 0:
            raise ValueError(f"image of generator {name} is not invertible")
    I = la.eye(sigma.dimension)
    for r in sigma.group.relators:
        if not la.equal(sigma(r), I):
            raise RelatorViolation(f"relator {r.format(names)} does not evaluate to the identity")
    return sigma


# --------------------------------------------------------------------------
# Word enumeration


def letters(ngens: int) -> list[Letter]:
    return [(g, e) for g in range(ngens) for e in (1, -1)]


def freely_reduced_words(ngens: int, max_length: int) -> Iterator[Word]:
    """All freely reduced words of length <= max_length, in shortlex order."""
    alphabet = letters(ngens)
    level = [()]
    yield Word()
    for _ in range(max_length):
        nxt = []
        for w in level:
            for a in alphabet:
                if w and w[-1] == (a[0], -a[1]):
                    continue
                nw = w + (a,)
                nxt.append(nw)
                yield Word(nw)
        level = nxt


def _key(letters_: tuple) -> tuple:
    return tuple((g, 0 if e > 0 else 1) for g, e in letters_)


def cyclic_canonical(w: Word, with_inverse: bool = False) -> tuple:
    L = w.letters
    cands = [L[i:] + L[:i] for i in range(len(L))] or [()]
    if with_inverse:
        inv = w.inverse().letters
        cands += [inv[i:] + inv[:i] for i in range(len(inv))]
    return min(cands, key=_key)


def conjugacy_representatives(ngens: int, max_length: int, with_inverse: bool = False) -> list[Word]:
    """One cyclically reduced word per cyclic class (optionally also up to
    inversion), over all words of length <= max_length, in shortlex order.

    Every freely reduced word of length <= max_length is conjugate to (or,
    with ``with_inverse``, conjugate to the inverse of) one of these.
    """
    return list(_conjugacy_representatives(ngens, max_length, with_inverse))


@lru_cache(maxsize=64)
def _conjugacy_representatives(ngens: int, max_length: int, with_inverse: bool) -> tuple:
    out = []
    for w in freely_reduced_words(ngens, max_length):
        L = w.letters
        if len(L) > 1 and L[0] == (L[-1][0], -L[-1][1]):
            continue
        if cyclic_canonical(w, with_inverse) == L:
            out.append(w)
    return tuple(out)


# --------------------------------------------------------------------------
# Integer fast path for bulk word evaluation


class IntegralEvaluator:
    """Evaluate many words at a point with integer arithmetic.

    Each letter image is stored as (N, d) with N an integer object array and
    the matrix equal to N / d; products multiply numerators and denominators.
    """

    def __init__(self, sigma: RepresentationPoint):
        self.sigma = sigma
        self.n = sigma.dimension
        self.table = {}
        self._memo = {}
        for g in range(sigma.group.ngens):
            for e in (1, -1):
                self.table[(g, e)] = la.common_denominator(sigma.letter(g, e))

    def identity(self):
        N = np.empty((self.n, self.n), dtype=object)
        for i in range(self.n):
            for j in range(self.n):
                N[i, j] = int(i == j)
        return N, 1

    def word(self, w: Word):
        """(N, d) with sigma(w) = N / d; products are memoized by prefix."""
        L = w.letters
        if not L:
            return self.identity()
        if L in self._memo:
            return self._memo[L]
        N, d = self.word(Word(L[:-1]))
        M, e = self.table[L[-1]]
        out = (N @ M, d * e)
        if len(L) <= RepresentationPoint.MEMO_LENGTH:
            self._memo[L] = out
        return out

    def charpoly(self, w: Word) -> list[Fraction]:
        N, d = self.word(w)
        c = la.int_charpoly(N)
        return [Fraction(x, d ** k) for k, x in enumerate(c)]

    def trace(self, w: Word) -> Fraction:
        N, d = self.word(w)
        return Fraction(int_trace(N), d)

    def walk(self, max_length: int) -> Iterator[tuple]:
        """Yield (word, N, d) for every freely reduced word, shortlex order."""
        alphabet = letters(self.sigma.group.ngens)
        N, d = self.identity()
        yield Word(), N, d
        level = [((), N, d)]
        for _ in range(max_length):
            nxt = []
            for w, N, d in level:
                for a in alphabet:
                    if w and w[-1] == (a[0], -a[1]):
                        continue
                    M, e = self.table[a]
                    item = (w + (a,), N @ M, d * e)
                    nxt.append(item)
                    yield Word(item[0]), item[1], item[2]
            level = nxt


def int_trace(N) -> int:
    return sum(int(N[i, i]) for i in range(N.shape[0]))
