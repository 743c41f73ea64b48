"""Gamma-invariant harmonic cocycles on the quotient graph, Hecke operators,
and the eigencocycle attached to an elliptic curve."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .btquotient import GammaElt, QuotientGraph, atkin_lehner_action
from .classfield import is_prime
from .errors import (
    BadHeckePrime,
    EigenspaceNotFound,
    EigenspaceNotLine,
    UnsupportedWeight,
)
from .lattice import (
    kernel_mod,
    primitive_integer_vector,
    rational_nullspace,
    rational_rref,
    vectors_of_norm,
)

__all__ = [
    "CoeffModule",
    "HarmonicCocycle",
    "cocycle_space",
    "hecke_matrix",
    "hecke_operator",
    "eigencocycle",
    "pairing_norm",
    "atkin_lehner_eigenvalue",
]


@dataclass(frozen=True)
class CoeffModule:
    """Polynomials of degree <= k-2 with the weight-k right action of GL2 and its dual.

    A polynomial is a coefficient tuple (P_0, ..., P_{k-2}) in x.
    """

    k: int

    def __post_init__(self):
        if self.k < 2 or self.k % 2:
            raise UnsupportedWeight(f"weight {self.k} is not even and >= 2")

    @property
    def dim(self) -> int:
        return self.k - 1

    def right_action(self, P, beta):
        """P | beta = (cx+d)^(k-2) / det^((k-2)/2) * P((ax+b)/(cx+d)) over Q."""
        (a, b), (c, d) = beta
        n = self.k - 2
        det = Fraction(a * d - b * c)
        out = [Fraction(0)] * (n + 1)
        for i, coef in enumerate(P):
            if not coef:
                continue
            # (ax+b)^i (cx+d)^(n-i)
            poly = _poly_pow([b, a], i)
            poly = _poly_mul(poly, _poly_pow([d, c], n - i))
            for m, t in enumerate(poly):
                out[m] += coef * t
        scale = _rational_power(det, n // 2)
        return tuple(x / scale for x in out)

    def dual_action(self, phi, beta):
        """Left action on the dual: (beta . phi)(P) = phi(P | beta); phi is a coefficient
        vector pairing with P by the standard dot product."""
        n = self.k - 2
        cols = []
        for i in range(n + 1):
            e = [0] * (n + 1)
            e[i] = 1
            cols.append(self.right_action(e, beta))
        return tuple(sum(Fraction(phi[m]) * cols[i][m] for m in range(n + 1)) for i in range(n + 1))


def _poly_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] += x * y
    return out


def _poly_pow(f, n):
    out = [1]
    for _ in range(n):
        out = _poly_mul(out, f)
    return out


def _rational_power(x: Fraction, n: int) -> Fraction:
    return x**n


@dataclass(frozen=True)
class HarmonicCocycle:
    """Values on oriented edge representatives (weight 2: rationals)."""

    Q: QuotientGraph
    values: tuple
    k: int = 2

    def __call__(self, e: int):
        return self.values[e]

    def scale(self, t) -> "HarmonicCocycle":
        return HarmonicCocycle(self.Q, tuple(Fraction(t) * x for x in self.values), self.k)

    def __add__(self, other):
        return HarmonicCocycle(self.Q, tuple(x + y for x, y in zip(self.values, other.values)), self.k)

    def is_harmonic(self) -> bool:
        Q = self.Q
        for k in range(Q.num_edges):
            if self.values[Q.opposite[k]] != -self.values[k]:
                return False
        for i in range(Q.num_vertices):
            if sum(self.values[e] for e, _ in Q.nbr_table[i]) != 0:
                return False
        return True

    def value_on_tree_edge(self, src, tgt):
        """c on an arbitrary tree edge via reduction to a representative (weight 2)."""
        k, _ = self.Q.reduce_edge(src, tgt)
        return self.values[k]


def _harmonic_equations(Q: QuotientGraph) -> list[list[int]]:
    n = Q.num_edges
    rows = []
    for k in range(n):
        r = [0] * n
        r[k] += 1
        r[Q.opposite[k]] += 1
        rows.append(r)
    for i in range(Q.num_vertices):
        r = [0] * n
        for e, _ in Q.nbr_table[i]:
            r[e] += 1
        rows.append(r)
    return rows


def cocycle_space(Q: QuotientGraph, k: int = 2) -> list[HarmonicCocycle]:
    if k != 2:
        CoeffModule(k)
        raise UnsupportedWeight("only weight 2 cocycle spaces are computed numerically")
    basis = rational_nullspace(_harmonic_equations(Q), Q.num_edges)
    return [HarmonicCocycle(Q, tuple(primitive_integer_vector(v))) for v in basis]


def _hecke_reps(Q: QuotientGraph, ell: int, max_j: int = 8) -> list[GammaElt]:
    """One y / p^j of reduced norm ell in each of the ell+1 cosets Gamma alpha."""
    O, p = Q.O, Q.p
    S = O.splitting(ell, 1)
    lines = [(1, t) for t in range(ell)] + [(0, 1)]
    reps = []
    for v in lines:
        rows = []
        for r in range(2):
            rows.append([(m[r][0] * v[0] + m[r][1] * v[1]) % ell for m in S.images])
        lat = kernel_mod(rows, ell)
        found = None
        for j in range(max_j + 1):
            sols = vectors_of_norm(O.gram, ell * p ** (2 * j), lat)
            sols = [s for s in sols if not all(c % p == 0 for c in s)]
            if sols:
                found = GammaElt.make(max(tuple(s) for s in sols), j, p)
                break
        if found is None:
            raise BadHeckePrime(f"no norm-{ell} representative found up to p^{2 * max_j}")
        reps.append(found)
    return reps


def hecke_matrix(Q: QuotientGraph, ell: int) -> list[list[int]]:
    """T[k][k'] = number of Hecke translates of edge k landing on representative k'."""
    p = Q.p
    N = Q.O.level * Q.O.N_minus * p
    if not is_prime(ell) or N % ell == 0:
        raise BadHeckePrime(f"T_{ell} is not a good Hecke operator here")
    reps = _hecke_reps(Q, ell)
    T = [[0] * Q.num_edges for _ in range(Q.num_edges)]
    for k in range(Q.num_edges):
        src, tgt = Q.edge_tree(k)
        for g in reps:
            a, b = Q.act_vertex(g, src), Q.act_vertex(g, tgt)
            kk, _ = Q.reduce_edge(a, b)
            T[k][kk] += 1
    return T


def hecke_operator(ell: int, c: HarmonicCocycle) -> HarmonicCocycle:
    T = _cached_hecke(c.Q, ell)
    vals = tuple(sum(T[k][kk] * c.values[kk] for kk in range(len(c.values))) for k in range(len(c.values)))
    return HarmonicCocycle(c.Q, vals, c.k)


def _cached_hecke(Q: QuotientGraph, ell: int):
    cache = Q.__dict__.setdefault("_hecke_cache", {})
    if ell not in cache:
        cache[ell] = hecke_matrix(Q, ell)
    return cache[ell]


def _coords(basis: list[HarmonicCocycle], c: HarmonicCocycle) -> list[Fraction]:
    """Coordinates of c in the basis (exact)."""
    n = len(basis)
    m = len(c.values)
    rows = [[Fraction(basis[j].values[i]) for j in range(n)] + [Fraction(c.values[i])] for i in range(m)]
    R, piv = rational_rref(rows)
    if n in piv:
        raise ValueError("not in the span")
    x = [Fraction(0)] * n
    for i, pc in enumerate(piv):
        x[pc] = R[i][n]
    return x


def hecke_on_basis(basis: list[HarmonicCocycle], ell: int) -> list[list[Fraction]]:
    """Matrix M with T_ell(basis[j]) = sum_i M[i][j] basis[i]."""
    cols = [_coords(basis, hecke_operator(ell, b)) for b in basis]
    n = len(basis)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def eigencocycle(Q: QuotientGraph, a: dict[int, int], bound: int = 50) -> HarmonicCocycle:
    """The integral primitive generator of the joint eigenline {T_ell = a_ell}."""
    basis = cocycle_space(Q, 2)
    if not basis:
        raise EigenspaceNotFound("no harmonic cocycles")
    N = Q.O.level * Q.O.N_minus * Q.p
    # current subspace: list of vectors in coordinates of basis
    sub = [[Fraction(int(i == j)) for j in range(len(basis))] for i in range(len(basis))]
    for ell in sorted(a):
        if ell > bound or N % ell == 0 or not is_prime(ell):
            continue
        M = hecke_on_basis(basis, ell)
        n = len(basis)
        # restrict (M - a I) to the span of sub
        rows = []
        for i in range(n):
            rows.append([sum((M[i][r] - (a[ell] if i == r else 0)) * s[r] for r in range(n)) for s in sub])
        ker = rational_nullspace(rows, len(sub))
        sub = [[sum(kv[t] * sub[t][r] for t in range(len(sub))) for r in range(n)] for kv in ker]
        if not sub:
            raise EigenspaceNotFound(f"no eigenvector with T_{ell} = {a[ell]}")
    if len(sub) > 1:
        raise EigenspaceNotLine(f"eigenspace has dimension {len(sub)}; raise the bound")
    vec = [sum(sub[0][j] * basis[j].values[i] for j in range(len(basis))) for i in range(Q.num_edges)]
    return HarmonicCocycle(Q, tuple(primitive_integer_vector(vec)))


def pairing_norm(c: HarmonicCocycle) -> Fraction:
    """Sum of w_e c(e)^2 over unoriented edge representatives."""
    if c.k != 2:
        raise UnsupportedWeight("pairing only for weight 2")
    Q = c.Q
    seen = set()
    total = Fraction(0)
    for k in range(Q.num_edges):
        if k in seen:
            continue
        seen.update({k, Q.opposite[k]})
        total += Q.w_edge(k) * Fraction(c.values[k]) ** 2
    return total


def atkin_lehner_eigenvalue(c: HarmonicCocycle) -> int:
    """The sign e with c(w e) = e c(e) for w of reduced norm p; raises if c is not an eigenvector."""
    _, eperm = atkin_lehner_action(c.Q)
    for sign in (1, -1):
        if all(c.values[eperm[k]] == sign * c.values[k] for k in range(len(c.values))):
            return sign
    raise EigenspaceNotFound("cocycle is not an Atkin-Lehner eigenvector")
