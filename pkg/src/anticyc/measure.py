"""The Z-valued measure on P^1(Q_p) attached to a weight-2 harmonic cocycle.

Two integration schemes are provided.  Riemann sums sample the integrand at
one rational point per disk of a level-m covering; they are simple and serve
as the independent check.  The moment scheme computes, for every edge
representative E with U(E) = h_E(p Z_p), the moments of s under
x = h_E(p s) to a fixed p-adic precision by a contracting fixed-point
iteration over children, and then integrates power series in s exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .btquotient import IDENTITY, GammaElt, QuotientGraph
from .errors import NonUnitSample, PrecisionExhausted, SampleAtPole
from .harmonic import HarmonicCocycle
from .padic import BranchedLog, PadicNumber, vp
from .tree import (
    Disk,
    V0,
    adj,
    disk_of_vertex,
    mat_mul,
    neighbors,
)

__all__ = [
    "EdgeMeasure",
    "EdgeState",
    "MomentTable",
    "integrate",
    "mult_integrate",
    "refinement_gap",
    "log_ratio_integral",
    "mult_ratio_integral",
    "coleman_line_integral",
]


@dataclass(frozen=True)
class EdgeState:
    """A tree edge together with its reduction: g (src -> tgt) = representative k."""

    src: tuple
    tgt: tuple
    k: int
    g: GammaElt


@dataclass
class EdgeMeasure:
    """mu(U(e)) = c(e) for a Gamma-invariant harmonic cocycle c of weight 2."""

    cocycle: HarmonicCocycle
    _children_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.cocycle.k != 2:
            raise ValueError("only weight 2 measures are integrated")
        if not self.cocycle.is_harmonic():
            raise ValueError("cocycle is not harmonic")

    @property
    def Q(self) -> QuotientGraph:
        return self.cocycle.Q

    @property
    def p(self) -> int:
        return self.Q.p

    def value(self, k: int) -> int:
        return int(self.cocycle.values[k])

    def mass(self, src, tgt) -> int:
        k, _ = self.Q.reduce_edge(src, tgt)
        return self.value(k)

    def state(self, src, tgt) -> EdgeState:
        k, g = self.Q.reduce_edge(src, tgt)
        return EdgeState(src, tgt, k, g)

    def rep_state(self, k: int) -> EdgeState:
        src, tgt = self.Q.edge_tree(k)
        return EdgeState(src, tgt, k, IDENTITY)

    def rep_children(self, k: int) -> list[tuple[int, GammaElt]]:
        """For each child e' of representative k (in neighbor order): (k', g') with g' e' = E_k'."""
        hit = self._children_cache.get(k)
        if hit is not None:
            return hit
        Q = self.Q
        src, tgt = Q.edge_tree(k)
        j, g2 = Q.edge_target[k]
        out = []
        for x in neighbors(tgt, self.p):
            if x == src:
                continue
            y = Q.act_vertex(g2, x)
            t = neighbors(Q.vertices[j], self.p).index(y)
            k2, g3 = Q.nbr_table[j][t]
            out.append((k2, Q.compose(g3, g2)))
        self._children_cache[k] = out
        return out

    def children(self, st: EdgeState) -> list[EdgeState]:
        """The p edges leaving st.tgt away from st.src, with their reductions."""
        Q = self.Q
        reps = self.rep_children(st.k)
        # children of the representative in neighbor order, pulled back by g^-1
        src_k, tgt_k = Q.edge_tree(st.k)
        kids = [x for x in neighbors(tgt_k, self.p) if x != src_k]
        ginv = Q.inverse(st.g)
        out = []
        for x, (k2, g2) in zip(kids, reps):
            y = Q.act_vertex(ginv, x)
            out.append(EdgeState(st.tgt, y, k2, Q.compose(g2, st.g)))
        return out

    def cover(self, m: int) -> list[tuple[EdgeState, Disk]]:
        """Level-m covering of P^1(Q_p) by disks U(e), with reductions found by descent."""
        layer = [self.state(V0, w) for w in neighbors(V0, self.p)]
        for _ in range(m - 1):
            layer = [c for st in layer for c in self.children(st)]
        return [(st, disk_of_vertex(st.tgt, self.p)) for st in layer]

    def check_descent(self, m: int) -> bool:
        """Masses obtained by descent match direct reduction at level m."""
        for st, _ in self.cover(m):
            if self.mass(st.src, st.tgt) != self.value(st.k):
                return False
        return True

    def total_mass(self, m: int = 1) -> int:
        return sum(self.value(st.k) for st, _ in self.cover(m))


# -- Riemann sums ------------------------------------------------------------


def _sample(disk: Disk):
    return disk.sample()


def integrate(mu: EdgeMeasure, phi, m: int):
    """Sum over the level-m covering of phi(t_e) * mu(U(e)), t_e the rational center of U(e).

    ``phi`` maps a Fraction (or None for infinity) to an int, Fraction or
    PadicNumber.  Edges of mass zero are skipped.
    """
    total = 0
    for st, disk in mu.cover(m):
        c = mu.value(st.k)
        if c:
            total = total + phi(_sample(disk)) * c
    return total


def mult_integrate(mu: EdgeMeasure, phi, m: int):
    """Product over the level-m covering of phi(t_e) ** mu(U(e))."""
    total = 1
    for st, disk in mu.cover(m):
        c = mu.value(st.k)
        if not c:
            continue
        val = phi(_sample(disk))
        if isinstance(val, PadicNumber) and val.is_zero():
            raise NonUnitSample(f"integrand vanishes at the sample of {disk}")
        total = total * val**c
    return total


def refinement_gap(mu: EdgeMeasure, phi, m: int):
    """Valuation of integrate(phi, m+1) - integrate(phi, m) (inf when they agree)."""
    d = integrate(mu, phi, m + 1) - integrate(mu, phi, m)
    if isinstance(d, PadicNumber):
        return d.valuation()
    return math.inf if d == 0 else Fraction(vp(Fraction(d).numerator, mu.p) - vp(Fraction(d).denominator, mu.p))


def log_ratio_sampler(z_num: PadicNumber, z_den: PadicNumber, branch: BranchedLog | None = None):
    """t -> log((t - z_num)/(t - z_den)), equal to 0 at infinity."""

    def phi(t):
        if t is None:
            return z_num.F.zero(z_num.prec)
        a, b = t - z_num, t - z_den
        if a.is_zero() or b.is_zero():
            raise SampleAtPole("sample point coincides with a fixed point")
        return (a / b).log(branch)

    return phi


def ratio_sampler(z_num: PadicNumber, z_den: PadicNumber):
    """t -> (t - z_num)/(t - z_den), equal to 1 at infinity."""

    def phi(t):
        if t is None:
            return z_num.F.one(z_num.prec)
        a, b = t - z_num, t - z_den
        if a.is_zero() or b.is_zero():
            raise SampleAtPole("sample point coincides with a fixed point")
        return a / b

    return phi


# -- moments -----------------------------------------------------------------

DP = lambda p: ((p, 0), (0, 1))  # noqa: E731  s -> p s


def _series_mobius(A, N: int, M: int, p: int) -> list[int]:
    """Coefficients mod M of (a s + b)/(c s + d) in s up to degree N-1 (d a unit)."""
    (a, b), (c, d) = A
    if d % p == 0:
        raise PrecisionExhausted("Moebius expansion needs a unit constant denominator")
    dinv = pow(d, -1, M)
    r = -c * dinv % M
    geo = [dinv]
    for _ in range(N - 1):
        geo.append(geo[-1] * r % M)
    out = [b * geo[0] % M]
    for n in range(1, N):
        out.append((b * geo[n] + a * geo[n - 1]) % M)
    return out


def _series_mul(f, g, N, M):
    out = [0] * N
    for i, x in enumerate(f):
        if not x:
            continue
        for j in range(N - i):
            out[i + j] += x * g[j]
    return [x % M for x in out]


def _strip_p(A, p, P):
    """Divide an integer matrix known mod p^P by its content p^k; returns (A', P - k)."""
    M = p**P
    A = tuple(tuple(x % M for x in row) for row in A)
    k = min(vp(x, p) if x else P for row in A for x in row)
    if k >= P:
        raise PrecisionExhausted("matrix indistinguishable from zero")
    return tuple(tuple(x // p**k for x in row) for row in A), P - k


class MomentTable:
    """M[k][n] = integral over U(E_k) of s^n, where x = h_k(p s), as integers mod p^prec.

    The moments of each representative are determined by those of its children
    through the Moebius change of variable between the two parametrizations.
    Coefficients of s'^m with m >= 1 in that change are divisible by p, so
    iterating from the masses gains one digit per pass.
    """

    def __init__(self, mu: EdgeMeasure, prec: int):
        self.mu = mu
        self.p = p = mu.p
        Q = mu.Q
        self.prec = prec
        self.nterms = prec + 2 * math.ceil(math.log(prec + 2, p)) + 2
        if prec + 4 > Q.prec:
            raise PrecisionExhausted(f"quotient splitting known mod p^{Q.prec}; moments need more")
        self.modulus = p**prec
        self.h = [mat_mul(Q.edge_matrix(k), DP(p)) for k in range(Q.num_edges)]
        self._transitions = [self._transition(k) for k in range(Q.num_edges)]
        self.moments = self._solve()

    def _transition(self, k: int):
        """[(k', T)] with T[n][m] = [s'^m] F^n for the change of variable to child k'."""
        mu, p, N, M = self.mu, self.p, self.nterms, self.modulus
        Q = mu.Q
        out = []
        for k2, g in mu.rep_children(k):
            A = mat_mul(mat_mul(adj(self.h[k]), adj(Q.matrix(g))), self.h[k2])
            A, P = _strip_p(A, p, Q.prec)
            if P < self.prec + 1:
                raise PrecisionExhausted("change of variable lost too much precision")
            F = _series_mobius(A, N, M, p)
            rows = [[1] + [0] * (N - 1)]
            for _ in range(1, N):
                rows.append(_series_mul(rows[-1], F, N, M))
            out.append((k2, rows))
        return out

    def _solve(self):
        mu, N, M = self.mu, self.nterms, self.modulus
        E = mu.Q.num_edges
        cur = [[mu.value(k) % M] + [0] * (N - 1) for k in range(E)]
        for _ in range(N + 3):
            new = []
            for k in range(E):
                acc = [0] * N
                for k2, T in self._transitions[k]:
                    src = cur[k2]
                    for n in range(N):
                        row = T[n]
                        acc[n] += sum(row[m] * src[m] for m in range(N) if src[m])
                new.append([x % M for x in acc])
            if new == cur:
                return cur
            cur = new
        raise PrecisionExhausted("moment iteration did not stabilize")

    def moment(self, k: int, n: int) -> int:
        return self.moments[k][n]


# -- analytic integration of log((x - z_num)/(x - z_den)) ------------------------


@dataclass(frozen=True)
class RatioPiece:
    """On U(e): (x - z_num)/(x - z_den) = C (1 + u_num s)/(1 + u_den s), s in Z_p.

    ``series`` is the integral over U(e) of log((1 + u_num s)/(1 + u_den s)).
    """

    C: PadicNumber
    mass: int
    series: PadicNumber
    k: int = 0
    u_num: PadicNumber | None = None
    u_den: PadicNumber | None = None


def _threshold(p: int) -> int:
    # exp converges on the series part once v(u) >= 1 (p odd) or 2 (p = 2)
    return 2 if p == 2 else 1


def _ratio_piece(table: MomentTable, st: EdgeState, z_num: PadicNumber, z_den: PadicNumber):
    mu, p = table.mu, table.p
    Q = mu.Q
    A = mat_mul(adj(Q.matrix(st.g)), table.h[st.k])
    A, P = _strip_p(A, p, Q.prec)
    F = z_num.F
    (a, b), (c, d) = ((F(x, prec=P) for x in row) for row in A)
    dens, us = [], []
    for z in (z_num, z_den):
        den = b - z * d
        if den.is_zero():
            return None
        u = (a - z * c) / den
        if not u.is_zero() and u.valuation() < _threshold(p):
            return None
        dens.append(den)
        us.append(u)
    N = table.nterms
    vmin = min((u.valuation() for u in us if not u.is_zero()), default=math.inf)
    if vmin is not math.inf and N * vmin - math.log(N, p) < table.prec:
        return None
    prec = table.prec
    total = F.zero(prec)
    pw = [F.one(P), F.one(P)]
    for n in range(1, N):
        pw = [pw[0] * us[0], pw[1] * us[1]]
        mom = table.moment(st.k, n)
        if not mom:
            continue
        term = (pw[0] - pw[1]).div_int(n) * F(mom, prec=prec)
        total = total + term if n % 2 else total - term
    if vmin is not math.inf:
        total = total.add_bigoh(int(N * vmin - math.log(N, p)))
    return RatioPiece(dens[0] / dens[1], mu.value(st.k), total, st.k, us[0], us[1])


def ratio_pieces(table: MomentTable, z_num, z_den, edges=None, max_depth: int = 12) -> list[RatioPiece]:
    """Pieces over the disks U(e) for ``edges`` (default: the p+1 edges leaving V0),
    refining any disk on which the expansion does not converge fast enough."""
    mu = table.mu
    if edges is None:
        stack = [(mu.state(V0, w), 0) for w in neighbors(V0, mu.p)]
    else:
        stack = [(mu.state(s, t), 0) for s, t in edges]
    out = []
    while stack:
        st, depth = stack.pop()
        piece = _ratio_piece(table, st, z_num, z_den)
        if piece is not None:
            out.append(piece)
            continue
        if depth >= max_depth:
            raise PrecisionExhausted("fixed point too close to P^1(Q_p) for the refinement depth")
        stack.extend((ch, depth + 1) for ch in mu.children(st))
    return out


def log_ratio_integral(table: MomentTable, z_num, z_den, branch: BranchedLog | None = None, edges=None):
    """Integral of log((x - z_num)/(x - z_den)) over the union of U(e), e in ``edges`` (default P^1)."""
    total = z_num.F.zero(table.prec)
    for piece in ratio_pieces(table, z_num, z_den, edges):
        if piece.mass:
            total = total + piece.C.log(branch).mul_int(piece.mass)
        total = total + piece.series
    return total


def mult_ratio_integral(table: MomentTable, z_num, z_den, edges=None) -> PadicNumber:
    """Multiplicative integral of (x - z_num)/(x - z_den) over the union of U(e) (default P^1)."""
    F = z_num.F
    prod = F.one(table.prec)
    series = F.zero(table.prec)
    for piece in ratio_pieces(table, z_num, z_den, edges):
        if piece.mass:
            prod = prod * piece.C**piece.mass
        series = series + piece.series
    return prod * series.exp()


def coleman_line_integral(mu: EdgeMeasure, z1, z2, prec: int | None = None, branch: BranchedLog | None = None,
                          level: int | None = None, table: MomentTable | None = None):
    """Integral over P^1(Q_p) of log((a - z2)/(a - z1)) d mu(a).

    With ``level`` set the Riemann sum at that level is returned instead of the
    moment evaluation.
    """
    if z1 == z2:
        return z1.F.zero(z1.prec)
    if level is not None:
        return integrate(mu, log_ratio_sampler(z2, z1, branch), level)
    if table is None:
        table = MomentTable(mu, prec or min(z1.prec, z2.prec))
    return log_ratio_integral(table, z2, z1, branch)
