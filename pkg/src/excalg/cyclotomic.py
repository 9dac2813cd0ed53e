"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are rational coefficient vectors in the power basis 1, z, ..., z^(phi(N)-1),
reduced modulo the N-th cyclotomic polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    """Division of integer polynomials (coefficient lists, lowest degree first)
    by a monic divisor."""
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    rem = num[: len(den) - 1]
    return q, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N: int) -> tuple:
    """Coefficients of Phi_N, lowest degree first."""
    if N < 1:
        raise ValueError("N must be positive")
    poly = [-1] + [0] * (N - 1) + [1]
    for d in range(1, N):
        if N % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


def _reduce(coeffs: list, N: int) -> tuple:
    phi = cyclotomic_polynomial(N)
    deg = len(phi) - 1
    c = [Fraction(x) for x in coeffs]
    for i in range(len(c) - 1, deg - 1, -1):
        a = c[i]
        if a:
            for j in range(deg + 1):
                c[i - deg + j] -= a * phi[j]
    c = c[:deg] + [Fraction(0)] * max(0, deg - len(c))
    return tuple(c)


class Cyclotomic:
    """An element of Q(zeta_N)."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs=()):
        self.N = int(N)
        self.coeffs = _reduce(list(coeffs), self.N)

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "Cyclotomic":
        c = [0] * N
        c[k % N] = 1
        return cls(N, c)

    @classmethod
    def rational(cls, N: int, x) -> "Cyclotomic":
        return cls(N, [x])

    def embed(self, M: int) -> "Cyclotomic":
        """Image in Q(zeta_M) for N | M, via zeta_N = zeta_M^(M/N)."""
        if M % self.N:
            raise ValueError(f"Q(zeta_{self.N}) does not embed in Q(zeta_{M})")
        s = M // self.N
        c = [Fraction(0)] * (s * len(self.coeffs) + 1)
        for i, a in enumerate(self.coeffs):
            c[i * s] = a
        return Cyclotomic(M, c)

    def _coerce(self, other) -> tuple["Cyclotomic", "Cyclotomic"]:
        if not isinstance(other, Cyclotomic):
            return self, Cyclotomic.rational(self.N, other)
        if other.N == self.N:
            return self, other
        M = lcm(self.N, other.N)
        return self.embed(M), other.embed(M)

    def __add__(self, other):
        a, b = self._coerce(other)
        n = max(len(a.coeffs), len(b.coeffs))
        ca = list(a.coeffs) + [0] * (n - len(a.coeffs))
        cb = list(b.coeffs) + [0] * (n - len(b.coeffs))
        return Cyclotomic(a.N, [x + y for x, y in zip(ca, cb)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.N, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Cyclotomic):
            x = Fraction(other)
            return Cyclotomic(self.N, [a * x for a in self.coeffs])
        a, b = self._coerce(other)
        c = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        c[i + j] += x * y
        return Cyclotomic(a.N, c)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("only nonnegative powers are supported")
        out = Cyclotomic.rational(self.N, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        try:
            return (self - other).is_zero()
        except TypeError:
            return NotImplemented

    def __hash__(self):
        raise TypeError("Cyclotomic elements are not hashable")

    def __repr__(self):
        terms = [f"{a}*z^{i}" for i, a in enumerate(self.coeffs) if a]
        return f"Cyclotomic({self.N}: {' + '.join(terms) or '0'})"
