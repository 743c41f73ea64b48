"""Oriented optimal embeddings of O_K into the Z[1/p]-order R, their fixed
points on P^1(K_p), and the action of Delta = Pic(O_K)/<[p]> on them.

An embedding is recorded by the image u of sqrt(D), stored as ``(y, j)``
with ``y`` in the Eichler Z-order and ``u = y / p^j``.  Each u acts on the
tree as an involution of odd displacement, so it flips exactly one edge;
Gamma-classes of embeddings are enumerated edge representative by edge
representative, modulo the edge stabilizers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .btquotient import GammaElt, QuotientGraph, involution_domain
from .classfield import DeltaGroup, Form, QuadField
from .errors import ConjugatorNotFound, CountMismatch, IdealNotCoprime
from .lattice import hnf, kernel_mod, vectors_of_norm
from .padic import PadicNumber, ramified_field, vp
from .quaternion import EichlerOrder, Quat
from .tree import V0, act, adj, distance, mat_mul, neighbors, path, vertex_matrix

__all__ = [
    "OptimalEmbedding",
    "EmbeddingSystem",
    "build_embeddings",
    "eta_inverse",
    "eta",
    "twist_polynomial",
]


def _strip(y, j, p):
    y = list(y)
    while j > 0 and all(c % p == 0 for c in y):
        y = [c // p for c in y]
        j -= 1
    return tuple(y), j


@dataclass(frozen=True)
class OptimalEmbedding:
    """u = Psi(sqrt D) = y / p^j, flipping the tree edge ``edge`` (a representative edge)."""

    y: tuple
    j: int
    rep_edge: int
    edge: tuple
    z: PadicNumber
    zbar: PadicNumber

    def key(self):
        return (self.y, self.j)


def eta_inverse(psi: OptimalEmbedding, a):
    """(a - zbar)/(a - z); infinity (None) goes to 1."""
    if a is None:
        return psi.z.F.one(psi.z.prec)
    return (a - psi.zbar) / (a - psi.z)


def eta(psi: OptimalEmbedding, alpha: PadicNumber):
    """Inverse of eta_inverse: (alpha z - zbar)/(alpha - 1); alpha = 1 goes to infinity (None)."""
    d = alpha - 1
    if d.is_zero():
        return None
    return (alpha * psi.z - psi.zbar) / d


def twist_polynomial(Q: QuotientGraph, psi: OptimalEmbedding) -> tuple:
    """Coefficients (P0, P1, P2) of trace(iota(u) (x,1)^T (1,-x)) = b + 2a x - c x^2 in Q_p."""
    (a, b), (c, _) = Q.iota(psi.y)
    F = psi.z.F.base
    P = Q.prec
    s = F(Fraction(1, Q.p**psi.j), prec=P)
    return tuple(F(t, prec=P) * s for t in (b, 2 * a, -c))


class EmbeddingSystem:
    """All Gamma-classes of oriented optimal embeddings, with the Delta action."""

    def __init__(self, Q: QuotientGraph, field: QuadField, delta: DeltaGroup, jmax: int | None = None,
                 records=None):
        """``records`` (rep edge, y, j) restores a cached enumeration instead of searching."""
        self.Q = Q
        self.O: EichlerOrder = Q.O
        self.p = Q.p
        self.field = field
        self.D = field.D
        self.delta = delta
        self.K = ramified_field(self.p, self.D)
        self.jmax = jmax if jmax is not None else max(distance(v) for v in Q.vertices) + 2
        self._orient_targets = self._orientation_targets()
        self.embeddings: list[OptimalEmbedding] = []
        self._index: dict = {}
        if records is None:
            self._enumerate()
        else:
            for k, y, j in records:
                self._add(k, tuple(y), j)
            if len(self.embeddings) != self.expected_count():
                raise CountMismatch("cached embedding records have the wrong size")

    def records(self) -> list[tuple]:
        return [(psi.rep_edge, psi.y, psi.j) for psi in self.embeddings]

    # -- local conditions ---------------------------------------------------
    def _orientation_targets(self):
        """Fixed orientation of O_K at each ell | N: the smallest root of the minimal polynomial of omega."""
        D = self.D
        T, N = D, (D * D - D) // 4
        return {ell: o.roots(T, N)[0] for ell, o in self.O.orientations.items()}

    def _omega(self, y, j):
        """(D + u)/2 as (integral coordinates x, exponent t) with omega = x / p^t, or None if not in R."""
        O, p = self.O, self.p
        w = (O.quat(y).scale(Fraction(1, p**j)) + Quat(O.alg, [Fraction(self.D), 0, 0, 0])).scale(Fraction(1, 2))
        r = O.coords(w, exact=False)
        den = math.lcm(*(x.denominator for x in r))
        t = vp(den, p)
        if den != p**t:
            return None
        return [int(x * p**t) for x in r], t

    def is_optimal(self, y, j) -> bool:
        return self._omega(y, j) is not None

    def is_oriented(self, y, j) -> bool:
        om = self._omega(y, j)
        if om is None:
            return False
        x, t = om
        for ell, o in self.O.orientations.items():
            inv = pow(self.p**t, -1, o.modulus)
            val = o(x)
            val = val * inv % o.modulus if o.kind == "plus" else tuple(c * inv % o.modulus for c in val)
            if val != self._orient_targets[ell]:
                return False
        return True

    # -- enumeration --------------------------------------------------------
    def _flippers(self, src, tgt, j):
        """y in the Z-order, trd 0, nrd = |D| p^(2j), p-primitive when j > 0, with iota(y) src = tgt."""
        Q, p = self.Q, self.p
        e = vp(-self.D, p) + 2 * j
        r2 = e + distance(src) - distance(tgt)
        r = r2 // 2
        mod = p ** (r + distance(tgt))
        gs, at = vertex_matrix(src, p), adj(vertex_matrix(tgt, p))
        rows = [[0] * 4 for _ in range(4)]
        for k, m in enumerate(Q.iota.images):
            t = mat_mul(mat_mul(at, m), gs)
            for a in range(2):
                for b in range(2):
                    rows[2 * a + b][k] = t[a][b] % mod
        trace_row = [self.O.trd([int(i == k) for i in range(4)]) for k in range(4)]
        lat = kernel_mod(rows, mod)
        sols = vectors_of_norm(self.O.gram, -self.D * p ** (2 * j), lat)
        return [tuple(s) for s in sols if sum(a * b for a, b in zip(trace_row, s)) == 0 and (j == 0 or any(c % p for c in s))]

    def _conjugate(self, g: GammaElt, y, j):
        O = self.O
        yy = O.mul(O.mul(list(g.y), list(y)), O.conj(list(g.y)))
        return _strip(yy, j + 2 * g.j, self.p)

    def _canonical(self, k, y, j):
        return min(self._conjugate(g, y, j) for g in self.Q.estab[k])

    def _unoriented_reps(self):
        seen, out = set(), []
        for k in range(self.Q.num_edges):
            if k in seen:
                continue
            seen.update({k, self.Q.opposite[k]})
            out.append(k)
        return out

    def _enumerate(self):
        for k in self._unoriented_reps():
            src, tgt = self.Q.edge_tree(k)
            found = set()
            for j in range(self.jmax + 1):
                for y in self._flippers(src, tgt, j):
                    if self.is_oriented(y, j):
                        found.add(self._canonical(k, y, j))
            for y, j in sorted(found):
                self._add(k, y, j)
        expected = self.expected_count()
        if len(self.embeddings) != expected:
            raise CountMismatch(f"found {len(self.embeddings)} oriented optimal embeddings, expected {expected}")

    def expected_count(self) -> int:
        """2 h_p, halved when the prime above p is principal: then Psi(pi) has norm p and
        centralizes Psi, so conjugation by norm-p elements does not split the class."""
        return self.delta.h_p if self.field.p_principal else 2 * self.delta.h_p

    def _add(self, k, y, j):
        z, zbar = self.fixed_points(y, j)
        psi = OptimalEmbedding(y, j, k, self.Q.edge_tree(k), z, zbar)
        self._index[(y, j)] = len(self.embeddings)
        self.embeddings.append(psi)

    def fixed_points(self, y, j):
        """Roots (a +- p^j sqrt D)/c of the fixed-point quadratic of iota(y) = [[a, b], [c, -a]]."""
        Q, K = self.Q, self.K
        (a, _), (c, _) = Q.iota(y)
        P = Q.prec
        num = K(a, prec=P)
        rad = K(0, Q.p**j, prec=P)
        den = K(c, prec=P)
        return (num + rad) / den, (num - rad) / den

    # -- identification and the Delta action ---------------------------------
    def flipped_edge(self, y, j=0):
        """The unique tree edge reversed by iota(y)."""
        w = act(self.Q.iota(y), V0, self.p, self.Q.prec)
        geo = path(V0, w, self.p)
        n = len(geo) - 1
        if n % 2 == 0:
            raise ValueError("element does not act with odd displacement")
        return geo[n // 2], geo[n // 2 + 1]

    def identify(self, y, j) -> int:
        """Index of the representative Gamma-conjugate to u = y / p^j."""
        Q = self.Q
        a, b = self.flipped_edge(y, j)
        reps = set(self._unoriented_reps())
        k, g = Q.reduce_edge(a, b)
        if k not in reps:
            k, g = Q.reduce_edge(b, a)
        y2, j2 = self._conjugate(g, y, j)
        key = self._canonical(k, y2, j2)
        try:
            return self._index[key]
        except KeyError:
            raise ConjugatorNotFound(f"embedding {y}/p^{j} matches no representative") from None

    def _ideal_lattice(self, psi: OptimalEmbedding, q: int, b: int):
        """Z-basis of I cap O for I = R q + R Psi((-b + sqrt D)/2)."""
        O, p = self.O, self.p
        beta = (O.quat(psi.y).scale(Fraction(1, p**psi.j)) + Quat(O.alg, [Fraction(-b), 0, 0, 0])).scale(Fraction(1, 2))
        r = O.coords(beta, exact=False)
        den = math.lcm(*(x.denominator for x in r))
        if den != p ** vp(den, p):
            raise IdealNotCoprime("Psi((-b + sqrt D)/2) is not in R")
        beta_int = [int(x * den) for x in r]
        gens = []
        for k in range(4):
            e = [int(i == k) for i in range(4)]
            gens.append([q * c for c in e])
            gens.append(O.mul(e, beta_int))
        return hnf(gens)

    def delta_action(self, idx: int, sigma: int, max_m: int = 8) -> int:
        """Index of Psi^sigma = alpha Psi alpha^-1 with R alpha = R Psi(a), a a prime ideal in class sigma."""
        if sigma == 0:
            return idx
        O, p = self.O, self.p
        psi = self.embeddings[idx]
        q, b = self._prime_ideal(sigma)
        lat = self._ideal_lattice(psi, q, b)
        for m in range(max_m + 1):
            sols = vectors_of_norm(O.gram, q * p ** (2 * m), lat)
            if sols:
                alpha = max(tuple(s) for s in sols)
                break
        else:
            raise ConjugatorNotFound(f"no generator of norm {q} p^(2m), m <= {max_m}")
        yy = O.mul(O.mul(list(alpha), list(psi.y)), O.conj(list(alpha)))
        if any(c % q for c in yy):
            raise ConjugatorNotFound("conjugate is not integral at q")
        y2, j2 = _strip([c // q for c in yy], psi.j + 2 * m, p)
        return self.identify(y2, j2)

    def _prime_ideal(self, sigma: int) -> tuple[int, int]:
        """(q, b) with the ideal (q, (-b + sqrt D)/2) in the Delta-class sigma."""
        D, O = self.D, self.O
        q, _ = self.delta.prime_for(sigma, avoid=self.p * O.N_minus * O.level)
        b0 = next(b for b in range(2 * q) if (b - D) % 2 == 0 and (b * b - D) % (4 * q) == 0)
        for b in (b0, -b0):
            if self.delta.class_of(Form(q, b, (b * b - D) // (4 * q))) == sigma:
                return q, b
        raise IdealNotCoprime(f"no prime ideal above {q} in class {sigma}")

    def _inverse(self, i: int) -> int:
        G = self.delta.group
        return next(k for k in range(G.order) if G.mul(i, k) == 0)

    def orbits(self) -> list[list[int]]:
        """Delta-orbits on the representatives (each sorted)."""
        seen, out = set(), []
        for i in range(len(self.embeddings)):
            if i in seen:
                continue
            orb = sorted({self.delta_action(i, s) for s in range(self.delta.order)})
            seen.update(orb)
            out.append(orb)
        return out

    def is_free(self) -> bool:
        return all(
            len({self.delta_action(i, s) for s in range(self.delta.order)}) == self.delta.order
            for i in range(len(self.embeddings))
        )

    def ordered_orbit(self, base: int = 0) -> list[int]:
        """[Psi_1, ..., Psi_hp] with Psi_i = Psi_base^(sigma_i^-1)."""
        return [self.delta_action(base, self._inverse(i)) for i in range(self.delta.order)]

    # -- the involution and the unit index ----------------------------------
    @property
    def kappa(self) -> int:
        """|O[1/p]^x / Z[1/p]^x|: 2 when the prime above p is principal, else 1."""
        return 2 if self.field.p_principal else 1

    def involution_matrix(self, psi: OptimalEmbedding):
        """iota Psi(pi) for a generator pi of the prime above p (principal case), as an integer matrix."""
        if not self.field.p_principal:
            raise ValueError("the prime above p is not principal")
        D, p = self.D, self.p
        x, y = _norm_solution(D, p)
        # pi = (x + y sqrt D)/2, scaled by 2 p^j (scalars act trivially)
        m = self.Q.iota(psi.y)
        s = p**psi.j
        return ((x * s + y * m[0][0], y * m[0][1]), (y * m[1][0], x * s + y * m[1][1]))

    def domain_edges(self, psi: OptimalEmbedding):
        """Tree edges whose disks form a fundamental domain for O[1/p]^x acting through Psi
        (all of P^1 when that group is trivial modulo scalars)."""
        if self.kappa == 1:
            return [(V0, w) for w in neighbors(V0, self.p)]
        return involution_domain(self.involution_matrix(psi), self.p, self.Q.prec)


def _norm_solution(D: int, p: int):
    """(x, y) with x^2 - D y^2 = 4p."""
    for y in range(1, math.isqrt(4 * p // -D) + 2):
        r = 4 * p + D * y * y
        if r >= 0 and math.isqrt(r) ** 2 == r:
            return math.isqrt(r), y
    raise ValueError("the prime above p is not principal")


def build_embeddings(Q: QuotientGraph, field: QuadField, delta: DeltaGroup) -> EmbeddingSystem:
    return EmbeddingSystem(Q, field, delta)
