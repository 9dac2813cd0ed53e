"""Twisted conjugation: automorphisms, phi-fixed irreducibles, equivariance
intertwiners, twisted traces, and the finiteness certificates for
T//Ad_phi(T) -> G//Ad_phi(G).

Conventions. An automorphism acts on matrices by ``g -> h theta(g) h^-1``.
Its lattice action is the pullback of characters, ``mu -> mu o phi``,
written in lattice coordinates; a representation V is phi-fixed when its
character is invariant under this pullback.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from . import sampling
from .lattice import (
    LatticeMap,
    RootDatum,
    Weight,
    cokernel_invariant_factors,
    coordinates_in_basis,
    fixed_sublattice,
    permutation_matrix,
    reduced_word,
    sorting_permutation,
)
from .repring import Character, exterior_power_character
from .tensorword import TensorWord

THETAS = ("identity", "transpose-inverse", "factor-permutation", "lattice")
ORDER_BOUND = 720


class InfiniteOrderError(ValueError):
    """The lattice action has no finite order within the configured bound."""


class NotFixedError(ValueError):
    """The representation is not isomorphic to its phi-twist."""


def _frozen(M) -> tuple:
    return tuple(tuple(la.to_fraction(x) for x in row) for row in M)


@dataclass(frozen=True, eq=False)
class GroupAutomorphism:
    group: RootDatum
    theta: str
    h: tuple
    lattice_action: LatticeMap
    permutation: Optional[tuple] = None
    weyl_word: tuple = ()

    def __post_init__(self):
        if self.theta not in THETAS:
            raise ValueError(f"unknown theta {self.theta!r}")
        object.__setattr__(self, "h", _frozen(self.h))
        if self.theta == "lattice" and not self.group.is_torus:
            raise ValueError("theta='lattice' is only available for tori")

    @property
    def h_matrix(self) -> np.ndarray:
        return la.qmat(self.h)

    def theta_matrix(self, g) -> np.ndarray:
        g = np.asarray(g, dtype=object)
        if self.theta == "identity":
            return g
        if self.theta == "transpose-inverse":
            return la.inverse(g).T
        if self.theta == "factor-permutation":
            Q = _block_permutation_matrix(self.group, self.permutation)
            return Q @ g @ Q.T
        # torus automorphism given by its character lattice matrix
        E = np.array(self.lattice_action.matrix, dtype=object).T
        entries = [g[i, i] for i in range(g.shape[0])]
        out = []
        for row in E:
            x = Fraction(1)
            for t, e in zip(entries, row):
                x *= t ** int(e)
            out.append(x)
        return la.diag(out)

    def __call__(self, g) -> np.ndarray:
        H = self.h_matrix
        return H @ self.theta_matrix(g) @ la.inverse(H)

    def preserves_torus(self) -> bool:
        return _is_monomial(self.h_matrix)

    def order(self) -> Optional[int]:
        return self.lattice_action.order(ORDER_BOUND)

    def is_normalized(self) -> bool:
        G = self.group
        return G.is_dominant(G.apply(self.lattice_action, G.regular_dominant()))

    def apply_weight(self, w: Sequence[int]) -> Weight:
        return self.group.apply(self.lattice_action, w)


def _is_monomial(M) -> bool:
    M = np.asarray(M, dtype=object)
    return all(sum(1 for x in row if x != 0) == 1 for row in M) and all(
        sum(1 for x in col if x != 0) == 1 for col in M.T
    )


def _block_permutation_matrix(G: RootDatum, perm: Sequence[int]) -> np.ndarray:
    """Q with (Q g Q^-1) moving block k to block perm[k]."""
    blocks = G.blocks()
    if sorted(perm) != list(range(len(blocks))):
        raise ValueError(f"{perm} is not a permutation of the factors of {G}")
    Q = la.zeros(G.dim, G.dim)
    for k, (a, b) in enumerate(blocks):
        c, d = blocks[perm[k]]
        if G.factors[k] != G.factors[perm[k]]:
            raise ValueError("factor permutation must map factors to equal factors")
        for m in range(b - a):
            Q[c + m, a + m] = Fraction(1)
    return Q


def _theta_exponents(G: RootDatum, theta: str, perm) -> list[list[int]]:
    """Integer matrix E with theta(t)_r = prod_c t_c^E[r][c] on the diagonal torus."""
    N = G.dim
    if theta == "identity":
        return [[int(i == j) for j in range(N)] for i in range(N)]
    if theta == "transpose-inverse":
        return [[-int(i == j) for j in range(N)] for i in range(N)]
    if theta == "factor-permutation":
        Q = _block_permutation_matrix(G, perm)
        return [[int(Q[i, j]) for j in range(N)] for i in range(N)]
    raise ValueError(theta)


def automorphism(
    G: RootDatum,
    theta: str = "identity",
    h=None,
    permutation: Optional[Sequence[int]] = None,
    lattice_action: Optional[LatticeMap] = None,
) -> GroupAutomorphism:
    """Build g -> h theta(g) h^-1 together with its lattice action.

    When h is monomial the lattice action is the exact pullback; otherwise the
    automorphism does not preserve the diagonal torus and the lattice action
    of theta alone is recorded (it agrees after normalization).
    """
    H = la.eye(G.dim) if h is None else la.qmat(h)
    if la.det(H) == 0:
        raise ValueError("h must be invertible")
    perm = tuple(permutation) if permutation is not None else None
    if theta == "lattice":
        if lattice_action is None:
            raise ValueError("theta='lattice' needs an explicit lattice_action")
        return GroupAutomorphism(G, theta, _frozen(H), lattice_action, perm)
    if theta == "factor-permutation" and perm is None:
        raise ValueError("factor-permutation needs a permutation")
    if lattice_action is None:
        E = _theta_exponents(G, theta, perm)
        if _is_monomial(H):
            col = [next(j for j in range(G.dim) if H[r, j] != 0) for r in range(G.dim)]
            E = [E[col[r]] for r in range(G.dim)]
        ambient = [[E[r][c] for r in range(G.dim)] for c in range(G.dim)]
        lattice_action = G.lattice_map_from_ambient(ambient)
    return GroupAutomorphism(G, theta, _frozen(H), lattice_action, perm)


def normalize_automorphism(G: RootDatum, phi: GroupAutomorphism) -> GroupAutomorphism:
    """Compose with the unique Weyl element making the lattice action preserve
    the dominant cone (phi -> phi o Ad_n for a permutation matrix n)."""
    if phi.order() is None:
        raise InfiniteOrderError(
            f"lattice action has infinite order (no power <= {ORDER_BOUND} is the identity)"
        )
    rho = G.regular_dominant()
    image = G.apply(phi.lattice_action, rho)
    perm = sorting_permutation(G, image)
    W = permutation_matrix(perm)
    w = G.lattice_map_from_ambient(W)
    if w.is_identity():
        return phi
    n = la.qmat([[W[j][i] for j in range(G.dim)] for i in range(G.dim)])
    for (kind, _), (a, b) in zip(G.factors, G.blocks()):
        if kind == "SL" and la.det(n[a:b, a:b]) == -1:
            n[:, a] = -n[:, a]
    theta_n = phi.theta_matrix(n) if phi.theta != "lattice" else la.eye(G.dim)
    h = phi.h_matrix @ theta_n
    return GroupAutomorphism(
        G,
        phi.theta,
        _frozen(h),
        w @ phi.lattice_action,
        phi.permutation,
        tuple(reduced_word(perm, G)) + phi.weyl_word,
    )


def check_compatibility(phi: GroupAutomorphism, samples: int = 5, seed: int = 0) -> bool:
    """Compare matrix and lattice actions on random diagonal torus points."""
    G = phi.group
    if not phi.preserves_torus():
        raise ValueError("automorphism does not preserve the diagonal torus")
    rng = sampling.point_rng(seed, 0)
    for _ in range(samples):
        t = sampling.torus_element(G, rng)
        ft = phi(t)
        if any(ft[i, j] != 0 for i in range(G.dim) for j in range(G.dim) if i != j):
            return False
        for k in range(G.rank):
            e = [0] * G.rank
            e[k] = 1
            lam = G.from_lattice(e)
            lhs = Character.monomial(G, lam).evaluate([ft[i, i] for i in range(G.dim)])
            rhs = Character.monomial(G, G.apply(phi.lattice_action, lam)).evaluate(
                [t[i, i] for i in range(G.dim)]
            )
            if lhs != rhs:
                return False
    return True


def fixed_dominant_weights(G: RootDatum, phi: GroupAutomorphism, bound: int) -> list[Weight]:
    """Dominant weights with coordinates in [-bound, bound] fixed by phi."""
    phi = normalize_automorphism(G, phi)
    return [lam for lam in G.dominant_weights(bound) if phi.apply_weight(lam) == lam]


def torus_twisted_basis(T: RootDatum, phi) -> list[Weight]:
    """Z-basis of the phi-fixed characters of a torus."""
    if not T.is_torus:
        raise ValueError(f"{T} is not a torus")
    A = phi.lattice_action if isinstance(phi, GroupAutomorphism) else phi
    if A.order(ORDER_BOUND) is None:
        raise InfiniteOrderError("lattice action has infinite order")
    return fixed_sublattice(A)


# --------------------------------------------------------------------------
# Intertwiners and twisted traces


@dataclass(frozen=True, eq=False)
class EquivarianceIntertwiner:
    group: RootDatum
    phi: GroupAutomorphism
    rep: TensorWord
    matrix: np.ndarray
    report: dict = field(default_factory=dict)

    def verify(self, g) -> bool:
        A = self.matrix
        return la.equal(A @ self.rep.rho(self.group, g), self.rep.rho(self.group, self.phi(g)) @ A)


def _intertwiner_space(G, phi, V, elements) -> list[np.ndarray]:
    d = V.dim(G)
    basis = []
    for k in range(d * d):
        E = la.zeros(d, d)
        E[divmod(k, d)] = Fraction(1)
        basis.append(E)
    for g in elements:
        R = V.rho(G, g)
        S = V.rho(G, phi(g))
        residuals = [A @ R - S @ A for A in basis]
        M = np.array([r.flatten() for r in residuals], dtype=object).T
        combos = la.nullspace(M)
        basis = [sum((c * A for c, A in zip(v, basis) if c), la.zeros(d, d)) for v in combos]
        if not basis:
            break
    return basis


def _normalize_first_entry(A: np.ndarray) -> np.ndarray:
    pivot = next(x for x in A.flat if x != 0)
    return A / pivot


def equivariance_intertwiner(
    G: RootDatum,
    phi: GroupAutomorphism,
    V: TensorWord,
    seed: int = 0,
    extra_samples: int = 3,
    verification_samples: int = 50,
    max_retries: int = 3,
) -> EquivarianceIntertwiner:
    """Solve alpha rho(g) = rho(phi(g)) alpha on a construction sample, then
    verify on a disjoint fresh sample."""
    rng = sampling.point_rng(seed, 1)
    construction = sampling.elementary_generators(G)
    construction += [sampling.group_element(G, rng) for _ in range(extra_samples)]
    for attempt in range(max_retries + 1):
        space = _intertwiner_space(G, phi, V, construction)
        if not space:
            raise NotFixedError(f"V not phi-fixed: {V} admits no nonzero intertwiner")
        if len(space) == 1 or not V.is_irreducible():
            break
        construction += [sampling.group_element(G, rng) for _ in range(2 * extra_samples)]
    else:
        raise RuntimeError("intertwiner space did not become one-dimensional; sampling insufficient")
    if len(space) == 1:
        alpha = space[0]
    else:
        pick = sampling.point_rng(seed, 2)
        for _ in range(20):
            coeffs = [pick.choice(sampling.SMALL_INTEGERS) for _ in space]
            alpha = sum((c * A for c, A in zip(coeffs, space)), la.zeros(*space[0].shape))
            if la.det(alpha) != 0:
                break
        else:
            raise NotFixedError(f"V not phi-fixed: no invertible intertwiner found for {V}")
    if la.det(alpha) == 0:
        raise NotFixedError(f"V not phi-fixed: the intertwiner of {V} is singular")
    alpha = _normalize_first_entry(alpha)
    out = EquivarianceIntertwiner(G, phi, V, alpha)
    fresh = sampling.point_rng(seed, 3)
    checked = 0
    for _ in range(verification_samples):
        if not out.verify(sampling.group_element(G, fresh)):
            raise RuntimeError("intertwiner failed fresh-sample verification")
        checked += 1
    out.report.update(
        construction_samples=len(construction),
        verification_samples=checked,
        solution_dimension=len(space),
        verified=True,
    )
    return out


def twisted_trace(alpha: EquivarianceIntertwiner, g) -> Fraction:
    """tr(alpha . rho_V(g))."""
    g = np.asarray(g, dtype=object)
    if g.shape != (alpha.group.dim, alpha.group.dim):
        raise ValueError(f"g has shape {g.shape}, expected {alpha.group.dim}x{alpha.group.dim}")
    R = alpha.rep.rho(alpha.group, g)
    if R.shape != alpha.matrix.shape:
        raise ValueError("dimension mismatch between intertwiner and representation")
    return la.trace(alpha.matrix @ R)


# --------------------------------------------------------------------------
# Finiteness certificates


@dataclass
class LeviReport:
    finite: bool
    free_rank: int
    invariant_factors: list
    fixed_big: list
    fixed_small: list
    restriction_on_fixed: list


def levi_finiteness_check(
    restriction: LatticeMap, phi_big: LatticeMap, phi_small: LatticeMap
) -> LeviReport:
    """Cokernel of X*(T')^phi -> X*(T)^phi for a restriction X*(T') -> X*(T).

    Finite iff the free rank is 0; then T//Ad_phi(T) -> T'//Ad_phi(T') is finite.
    """
    if restriction @ phi_big != phi_small @ restriction:
        raise ValueError("restriction does not intertwine the two phi actions")
    for A in (phi_big, phi_small):
        if A.order(ORDER_BOUND) is None:
            raise InfiniteOrderError("phi has infinite order on a character lattice")
    big = fixed_sublattice(phi_big)
    small = fixed_sublattice(phi_small)
    cols = [coordinates_in_basis(small, restriction(b)) for b in big]
    if not small:
        matrix = []
        free_rank, factors = 0, []
    elif not big:
        matrix = [[] for _ in small]
        free_rank, factors = len(small), []
    else:
        matrix = [[c[i] for c in cols] for i in range(len(small))]
        free_rank, factors = cokernel_invariant_factors(matrix)
    return LeviReport(free_rank == 0, free_rank, factors, big, small, matrix)


@dataclass
class FinitenessCertificate:
    group: RootDatum
    functional: tuple
    weights: list  # [(weight, multiplicity)]
    orbit_sizes: dict
    values: dict
    v0: Fraction
    r: int
    lambda0: Weight
    multiplicity: int
    strict: bool
    phi_invariant: bool
    stabilized: bool
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def _orbit(G: RootDatum, A: LatticeMap, mu: Weight) -> list[Weight]:
    out = [mu]
    nxt = G.apply(A, mu)
    while nxt != mu:
        out.append(nxt)
        nxt = G.apply(A, nxt)
        if len(out) > ORDER_BOUND:
            raise InfiniteOrderError("infinite phi-orbit of a weight")
    return out


def phi_stabilize(chi: Character, A: LatticeMap) -> tuple[Character, bool]:
    """Sum of the distinct phi-pullbacks of chi (the character of V + V^phi + ...)."""
    orbit = [chi]
    nxt = chi.pullback(A)
    while nxt != chi:
        orbit.append(nxt)
        nxt = nxt.pullback(A)
        if len(orbit) > ORDER_BOUND:
            raise InfiniteOrderError("infinite phi-orbit of a character")
    total = orbit[0]
    for c in orbit[1:]:
        total = total + c
    return total, len(orbit) > 1


def valuation_certificate(
    G: RootDatum, phi: GroupAutomorphism, V, v: Sequence
) -> FinitenessCertificate:
    """Combinatorial core of the valuative-criterion argument for a rational
    functional v on the character lattice (lattice coordinates)."""
    phi = normalize_automorphism(G, phi)
    A = phi.lattice_action
    chi = V.character(G) if isinstance(V, TensorWord) else V
    if chi.is_virtual:
        raise ValueError("valuation certificates need a genuine representation")
    v = tuple(la.to_fraction(x) for x in v)
    if len(v) != G.rank:
        raise ValueError(f"functional has length {len(v)}, expected rank {G.rank}")
    chi, stabilized = phi_stabilize(chi, A)

    def val(w):
        return sum((c * x for c, x in zip(v, G.to_lattice(w))), Fraction(0))

    sizes, values = {}, {}
    for mu in chi.terms:
        orb = _orbit(G, A, mu)
        sizes[mu] = len(orb)
        total = [sum(col) for col in zip(*orb)]
        values[mu] = val(total) / len(orb)
    v0 = min(values.values())
    minimal = [mu for mu in chi.terms if values[mu] == v0]
    r = sum(chi.terms[mu] for mu in minimal)
    lam0 = [0] * G.dim
    for mu in minimal:
        lam0 = [a + chi.terms[mu] * b for a, b in zip(lam0, mu)]
    lam0 = G.normalize(lam0)

    failures = []
    invariant = G.apply(A, lam0) == lam0
    if not invariant:
        failures.append(f"lambda0 {lam0} is not phi-invariant")
    ext = exterior_power_character(chi, r)
    mult = ext.terms.get(lam0, 0)
    if mult != 1:
        failures.append(f"lambda0 has multiplicity {mult} in the exterior power")
    if val(lam0) != r * v0:
        failures.append("v(lambda0) differs from r * v0")
    strict = all(val(w) > val(lam0) for w in ext.terms if w != lam0 and G.apply(A, w) == w)
    if not strict:
        failures.append("v(lambda0) is not strictly minimal among phi-invariant weights")
    return FinitenessCertificate(
        group=G,
        functional=v,
        weights=sorted(chi.terms.items()),
        orbit_sizes=sizes,
        values=values,
        v0=v0,
        r=r,
        lambda0=lam0,
        multiplicity=mult,
        strict=strict,
        phi_invariant=invariant,
        stabilized=stabilized,
        failures=failures,
    )
