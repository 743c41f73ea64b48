"""Anticyclotomic p-adic L-functions of an elliptic curve at a ramified prime:
partial values at the centre, the first derivative by two independent
integrations, the s-variable through g^s = exp(s log g), and the sign of the
functional equation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .btquotient import QuotientGraph, build_quotient, ends_fundamental_domain
from .classfield import (
    Character,
    DeltaGroup,
    QuadField,
    build_field,
    delta_group,
    factorint,
    is_fundamental,
)
from .embeddings import EmbeddingSystem
from .errors import (
    BadDiscriminant,
    LevelNotCoprime,
    NotFundamental,
    NotMultiplicative,
    NotRamified,
    OutsideConvergenceDomain,
    RouteDisagreement,
    UnitObstruction,
)
from .harmonic import HarmonicCocycle, eigencocycle
from .measure import EdgeMeasure, MomentTable, RatioPiece, mult_ratio_integral, ratio_pieces
from .padic import PadicNumber, vp
from .quaternion import build_algebra, eichler_order
from .tate import EllipticCurve, TateCurve, tate_period
from .tree import act

__all__ = [
    "Hypotheses",
    "check_hypotheses",
    "kronecker",
    "SignReport",
    "sign",
    "ZetaCombination",
    "LFunctionInstance",
    "build_instance",
    "CenterValue",
    "Lp_partial_at_center",
    "DerivativeReport",
    "Lp_derivative",
    "Lp_series",
    "finite_difference",
    "Lp_second_derivative",
    "mult_integral_to_point",
    "norm_identity",
]


# -- hypotheses ------------------------------------------------------------------


def kronecker(D: int, ell: int) -> int:
    """Kronecker symbol (D / ell) for a prime ell: 1 split, -1 inert, 0 ramified."""
    if D % ell == 0:
        return 0
    if ell == 2:
        return 1 if D % 8 in (1, 7) else -1
    return 1 if pow(D % ell, (ell - 1) // 2, ell) == 1 else -1


@dataclass(frozen=True)
class Hypotheses:
    N: int
    p: int
    D: int
    N_minus: int
    N_plus: int

    @property
    def N_minus_primes(self) -> tuple[int, ...]:
        return tuple(sorted(factorint(self.N_minus))) if self.N_minus > 1 else ()


def check_hypotheses(N: int, p: int, D: int) -> Hypotheses:
    """Audit the standing assumptions and split N = p N^- N^+ by the splitting of each prime in K.

    Raises the HypothesisViolation subclass naming the failed condition.
    """
    if D >= 0 or not is_fundamental(D):
        raise NotFundamental(f"D={D} is not a negative fundamental discriminant")
    if D in (-3, -4):
        raise UnitObstruction(f"O_K has units beyond +-1 for D={D}")
    if D % p:
        raise NotRamified(f"p={p} does not divide D={D}")
    if N % p or (N // p) % p == 0:
        raise LevelNotCoprime(f"p={p} does not divide N={N} exactly once")
    if math.gcd(N, D) != p:
        raise LevelNotCoprime(f"gcd(N, D) = {math.gcd(N, D)} differs from p={p}")
    N_minus, N_plus = 1, 1
    for ell, e in factorint(N // p).items():
        if kronecker(D, ell) == -1:
            if e > 1:
                raise BadDiscriminant(f"{ell}^{e} divides N^- (must be squarefree)")
            N_minus *= ell
        else:
            N_plus *= ell**e
    count = len(factorint(N_minus)) if N_minus > 1 else 0
    if count % 2 == 0:
        raise BadDiscriminant(f"N^-={N_minus} is not a product of an odd number of primes")
    return Hypotheses(N, p, D, N_minus, N_plus)


# -- signs -----------------------------------------------------------------------


@dataclass(frozen=True)
class SignReport:
    Sigma: tuple[int, ...]
    w: int
    b_p: int | Fraction
    change_of_sign: bool

    @property
    def forces_odd_order(self) -> bool:
        return self.w == -1


def sign(hyp: Hypotheses, a_p: int, b_p: int | Fraction = 1) -> SignReport:
    """Sigma = primes of N^- together with p when a_p b_p = 1; w = (-1)^(|Sigma| + 1)."""
    Sigma = set(hyp.N_minus_primes)
    change = a_p * b_p == 1
    if change:
        Sigma.add(hyp.p)
    return SignReport(tuple(sorted(Sigma)), (-1) ** (len(Sigma) + 1), b_p, change)


# -- sums with character values ----------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the m-th cyclotomic polynomial."""
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_div_exact(poly, cyclotomic(d))
    return tuple(poly)


def _poly_div_exact(f, g):
    f = list(f)
    q = [0] * (len(f) - len(g) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = f[i + len(g) - 1] // g[-1]
        q[i] = c
        for j, b in enumerate(g):
            f[i + j] -= c * b
    if any(f):
        raise ArithmeticError("inexact polynomial division")
    return q


@dataclass
class ZetaCombination:
    """sum_k coeffs[k] zeta_m^k with coefficients in a p-adic field, reduced modulo Phi_m.

    Character values are kept as exponents of a formal root of unity, so
    chi-weighted sums never need a field containing both K_p and mu_m.
    """

    m: int
    coeffs: list

    @classmethod
    def zero(cls, m: int, like: PadicNumber) -> "ZetaCombination":
        deg = len(cyclotomic(m)) - 1
        return cls(m, [like.F.zero(like.prec) for _ in range(deg)])

    def add_term(self, exponent: int, x: PadicNumber) -> None:
        phi = cyclotomic(self.m)
        deg = len(phi) - 1
        # zeta^e as a vector modulo Phi_m
        vec = [0] * max(deg, exponent % self.m + 1)
        vec[exponent % self.m] = 1
        for i in range(len(vec) - 1, deg - 1, -1):
            c = vec[i]
            if c:
                for j, b in enumerate(phi):
                    vec[i - deg + j] -= c * b
        for i in range(deg):
            if vec[i]:
                self.coeffs[i] = self.coeffs[i] + x.mul_int(vec[i])

    def scaled(self, k: int) -> "ZetaCombination":
        return ZetaCombination(self.m, [c.mul_int(k) if k else c.F.zero(c.prec) for c in self.coeffs])

    def __add__(self, other):
        return ZetaCombination(self.m, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return ZetaCombination(self.m, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def valuation(self):
        return min(c.valuation() for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    @property
    def prec(self):
        return min(c.prec for c in self.coeffs)

    def single(self) -> PadicNumber:
        """The value when m <= 2 (a real character)."""
        if len(self.coeffs) != 1:
            raise ValueError("combination involves a non-real root of unity")
        return self.coeffs[0]

    def __repr__(self):
        terms = " + ".join(f"({c})*z{self.m}^{i}" for i, c in enumerate(self.coeffs))
        return f"ZetaCombination[{terms}]"


# -- the instance ------------------------------------------------------------------


@dataclass
class LFunctionInstance:
    """Everything needed to integrate against the measure attached to E, K and p."""

    E: EllipticCurve
    hyp: Hypotheses
    field: QuadField
    delta: DeltaGroup
    Q: QuotientGraph
    cocycle: HarmonicCocycle
    S: EmbeddingSystem
    prec: int
    guard: int = 8
    a_p: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def p(self) -> int:
        return self.hyp.p

    @property
    def mu(self) -> EdgeMeasure:
        if "mu" not in self._cache:
            self._cache["mu"] = EdgeMeasure(self.cocycle)
        return self._cache["mu"]

    @property
    def work_prec(self) -> int:
        return self.prec + self.guard

    @property
    def table(self) -> MomentTable:
        if "table" not in self._cache:
            self._cache["table"] = MomentTable(self.mu, self.work_prec)
        return self._cache["table"]

    @property
    def tate(self) -> TateCurve:
        if "tate" not in self._cache:
            self._cache["tate"] = tate_period(self.E, self.p, self.work_prec)
        return self._cache["tate"]

    @property
    def orbit(self) -> list[int]:
        """Embedding indices Psi_i = Psi_0^(sigma_i^-1), in the order of the Delta elements."""
        if "orbit" not in self._cache:
            self._cache["orbit"] = self.S.ordered_orbit(0)
        return self._cache["orbit"]

    @property
    def kappa(self) -> int:
        return self.S.kappa

    @property
    def index_H_over_Hp(self) -> int:
        """[H : H_p] = 1 if the prime above p is principal, else 2."""
        return 1 if self.field.p_principal else 2

    def fixed_points(self, idx: int):
        psi = self.S.embeddings[idx]
        n = self.work_prec + 2
        return psi.z.add_bigoh(n), psi.zbar.add_bigoh(n)


def quotient_precision(prec: int, guard: int, depth_limit: int) -> int:
    """Digits of the splitting at p: the tree walk needs 4 per level, the moments prec + guard + 8."""
    return max(4 * depth_limit + 10, prec + guard + 8)


def build_instance(E: EllipticCurve, N: int, p: int, D: int, prec: int = 20, guard: int = 8,
                   hecke_bound: int = 30, depth_limit: int = 12, Q: QuotientGraph | None = None,
                   cocycle: HarmonicCocycle | None = None, embedding_records=None) -> LFunctionInstance:
    """Check hypotheses, build the quotient, the eigencocycle and the embeddings.

    ``Q``, ``cocycle`` and ``embedding_records`` may be supplied from a cache.
    """
    hyp = check_hypotheses(N, p, D)
    if E.discriminant % p or E.c4 % p == 0:
        raise NotMultiplicative(f"E does not have multiplicative reduction at {p}")
    a_p = E.a_ell(p)
    field_ = build_field(D, p)
    delta = delta_group(field_)
    if Q is None:
        order = eichler_order(build_algebra(hyp.N_minus), hyp.N_plus, p)
        Q = build_quotient(order, p, depth_limit, prec=quotient_precision(prec, guard, depth_limit))
    if cocycle is None:
        cocycle = eigencocycle(Q, E.a_table(hecke_bound, skip=N), hecke_bound)
    S = EmbeddingSystem(Q, field_, delta, records=embedding_records)
    return LFunctionInstance(E, hyp, field_, delta, Q, cocycle, S, prec, guard, a_p)


# -- integration domains -------------------------------------------------------------


def telescoping_cover(inst: LFunctionInstance, idx: int):
    """Edges leaving the geodesic from v to iota Psi(sqrt D) v, v the source of the flipped edge."""
    psi = inst.S.embeddings[idx]
    return ends_fundamental_domain(psi.edge[0], inst.Q.iota(psi.y), inst.p, inst.Q.prec)


def involution_sign(inst: LFunctionInstance, idx: int, samples: int = 3) -> int:
    """e with c(gamma e) = e c(e), gamma = iota Psi(pi) for a generator pi of the prime above p."""
    psi = inst.S.embeddings[idx]
    gamma = inst.S.involution_matrix(psi)
    p, prec, mu = inst.p, inst.Q.prec, inst.mu
    from .tree import covering_at_level

    ratios = set()
    for m in range(1, samples + 1):
        for src, tgt in covering_at_level(m, p):
            c = mu.mass(src, tgt)
            if c:
                c2 = mu.mass(act(gamma, src, p, prec), act(gamma, tgt, p, prec))
                ratios.add(Fraction(c2, c))
    if len(ratios) != 1 or next(iter(ratios)) not in (1, -1):
        raise ValueError(f"involution does not act on the cocycle by a sign: {sorted(ratios)}")
    return int(next(iter(ratios)))


def domain(inst: LFunctionInstance, idx: int):
    """(edges, factor): route A integrates over the disks of ``edges`` and multiplies by ``factor``.

    Without units beyond Z[1/p]^x the domain is a cover of P^1 and the factor is
    the kernel factor 2.  In the principal case it is a fundamental domain for
    the involution gamma, and the factor 2 (1 + e) records how gamma acts on the
    measure; e = +1 gives the expected 2 kappa = 4.
    """
    key = ("domain", idx)
    if key not in inst._cache:
        if inst.kappa == 1:
            inst._cache[key] = (telescoping_cover(inst, idx), 2)
        else:
            e = involution_sign(inst, idx)
            inst._cache[key] = (inst.S.domain_edges(inst.S.embeddings[idx]), 2 * (1 + e))
    return inst._cache[key]


def _pieces(inst: LFunctionInstance, idx: int, which: str = "domain") -> list[RatioPiece]:
    """Pieces of eta^-1 = (a - zbar)/(a - z) over the route A domain, or over the star of V0 ("P1")."""
    key = ("pieces", idx, which)
    if key not in inst._cache:
        z, zb = inst.fixed_points(idx)
        edges = domain(inst, idx)[0] if which == "domain" else None
        inst._cache[key] = ratio_pieces(inst.table, zb, z, edges)
    return inst._cache[key]


# -- the value at the centre -----------------------------------------------------------


@dataclass(frozen=True)
class CenterValue:
    """L_p(E/K, Psi, 1): the exact edge sum over the telescoping cover and the numeric integral."""

    index: int
    symbolic: int
    numeric: PadicNumber

    @property
    def vanishes(self) -> bool:
        return self.symbolic == 0 and self.numeric.is_zero()


def Lp_partial_at_center(inst: LFunctionInstance, idx: int) -> CenterValue:
    mu = inst.mu
    symbolic = sum(mu.mass(s, t) for s, t in telescoping_cover(inst, idx))
    _, factor = domain(inst, idx)
    pieces = _pieces(inst, idx)
    F = inst.S.K
    numeric = F.zero(inst.prec)
    for piece in pieces:
        numeric = numeric + F(inst.table.moment(piece.k, 0), prec=inst.prec)
    numeric = numeric.mul_int(factor) if factor else F.zero(inst.prec)
    return CenterValue(idx, factor * symbolic, numeric)


# -- the derivative at the centre ------------------------------------------------------


def partial_derivative(inst: LFunctionInstance, idx: int) -> tuple[PadicNumber, PadicNumber]:
    """(route A, route B) for one embedding.

    Route A: factor * integral of log eta^-1 over the domain.
    Route B: 2 * integral over P^1 of log((a - z)/(a - zbar)), the Coleman integral from zbar to z.
    """
    from .measure import coleman_line_integral

    key = ("dpartial", idx)
    if key not in inst._cache:
        _, factor = domain(inst, idx)
        F = inst.S.K
        a = F.zero(inst.work_prec)
        for piece in _pieces(inst, idx):
            if piece.mass:
                a = a + piece.C.log().mul_int(piece.mass)
            a = a + piece.series
        a = a.mul_int(factor) if factor else F.zero(a.prec)
        z, zb = inst.fixed_points(idx)
        b = coleman_line_integral(inst.mu, zb, z, table=inst.table).mul_int(2)
        inst._cache[key] = (a, b)
    return inst._cache[key]


def _combine(inst: LFunctionInstance, chi: Character, values) -> ZetaCombination:
    like = values[0]
    out = ZetaCombination.zero(chi.m, like)
    for i, x in enumerate(values):
        out.add_term(chi(i), x)
    return out


@dataclass(frozen=True)
class DerivativeReport:
    """L_p'(E/K, chi, 1) by both routes, their relative sign and the digits of agreement.

    ``c`` is the number of digits below the requested precision at which the
    routes still agree (0 when they agree to full requested precision).
    """

    route_a: ZetaCombination
    route_b: ZetaCombination
    relative_sign: int
    agreement: float
    requested: int
    c: float

    @property
    def value(self) -> ZetaCombination:
        return self.route_b


def _agreement(x: ZetaCombination, y: ZetaCombination) -> float:
    d = x - y
    if d.is_zero():
        return float(d.prec)
    return float(d.valuation())


def Lp_derivative(inst: LFunctionInstance, chi: Character, max_c: float = 3) -> DerivativeReport:
    """sum_i chi(sigma_i) L_p'(E/K, Psi_i, 1) by route A and route B.

    The two routes integrate opposite integrands (eta^-1 against its inverse), so
    they agree up to a global sign that is reported rather than fixed.
    """
    parts = [partial_derivative(inst, idx) for idx in inst.orbit]
    A = _combine(inst, chi, [a for a, _ in parts])
    B = _combine(inst, chi, [b for _, b in parts])
    best = max(((_agreement(A, B.scaled(s)), s) for s in (1, -1)), key=lambda t: t[0])
    agree, s = best
    c = max(0.0, inst.prec - agree)
    report = DerivativeReport(A, B, s, agree, inst.prec, c)
    if c > max_c:
        raise RouteDisagreement(
            f"routes agree only to {agree} digits (requested {inst.prec}); A={A}, B={B}"
        )
    return report


# -- the s-variable ---------------------------------------------------------------------


def _log_coefficients(piece: RatioPiece, N: int) -> list:
    """[s^n] log((1 + u_num s)/(1 + u_den s)) for n < N (index 0 is zero)."""
    F = piece.C.F
    out = [F.zero(piece.C.prec)]
    p1 = p2 = F.one(piece.C.prec)
    for n in range(1, N):
        p1, p2 = p1 * piece.u_num, p2 * piece.u_den
        t = (p1 - p2).div_int(n)
        out.append(t if n % 2 else -t)
    return out


def _moment_pairing(inst: LFunctionInstance, k: int, coeffs) -> PadicNumber:
    table = inst.table
    F = coeffs[0].F
    acc = F.zero(table.prec)
    for n, c in enumerate(coeffs):
        m = table.moment(k, n)
        if m and not c.is_zero():
            acc = acc + c * F(m, prec=table.prec)
    return acc


def _power_integral(inst: LFunctionInstance, piece: RatioPiece, h) -> PadicNumber:
    """Integral over the piece of (eta^-1)^h = C^h exp(h log((1 + u_num s)/(1 + u_den s)))."""
    N = inst.table.nterms
    F = piece.C.F
    prec = inst.work_prec
    hh = F(Fraction(h), prec=prec + 4)
    logC = piece.C.log()
    x = hh * logC
    if not x.is_zero() and x.valuation() <= Fraction(1, inst.p - 1):
        raise OutsideConvergenceDomain(f"h log C has valuation {x.valuation()}; move s closer to 1")
    Ch = x.exp() if not x.is_zero() else F.one(prec)
    a = [c * hh for c in _log_coefficients(piece, N)]
    E = [F.one(prec)]
    for n in range(1, N):
        acc = F.zero(prec)
        for k in range(1, n + 1):
            if not a[k].is_zero():
                acc = acc + (a[k] * E[n - k]).mul_int(k)
        E.append(acc.div_int(n))
    return Ch * _moment_pairing(inst, piece.k, E)


def Lp_partial_series(inst: LFunctionInstance, idx: int, s) -> PadicNumber:
    """L_p(E/K, Psi, s) = factor * integral over the domain of (eta^-1)^(s-1)."""
    _, factor = domain(inst, idx)
    F = inst.S.K
    h = Fraction(s) - 1
    if h == 0:
        return Lp_partial_at_center(inst, idx).numeric
    if factor == 0:
        return F.zero(inst.work_prec)
    total = F.zero(inst.work_prec)
    for piece in _pieces(inst, idx):
        total = total + _power_integral(inst, piece, h)
    return total.mul_int(factor)


def Lp_series(inst: LFunctionInstance, chi: Character, s_values) -> list[ZetaCombination]:
    """s -> sum_i chi(sigma_i) L_p(E/K, Psi_i, s) on a grid of rationals s with s - 1 in p Z_p."""
    out = []
    for s in s_values:
        if Fraction(s) != 1 and vp((Fraction(s) - 1).numerator, inst.p) - vp((Fraction(s) - 1).denominator, inst.p) < 1:
            raise OutsideConvergenceDomain(f"s={s} is not congruent to 1 mod p")
        out.append(_combine(inst, chi, [Lp_partial_series(inst, idx, s) for idx in inst.orbit]))
    return out


def default_step(inst: LFunctionInstance) -> int:
    """t about n/3 + 1: the truncation error p^(2t) balances the t digits lost to the division."""
    return -(-inst.prec // 3) + 1


@dataclass(frozen=True)
class FiniteDifference:
    t: int
    value: ZetaCombination
    agreement: float
    expected: float

    @property
    def c(self) -> float:
        return max(0.0, self.expected - self.agreement)


def finite_difference(inst: LFunctionInstance, chi: Character, t: int | None = None) -> FiniteDifference:
    """(L(1 + p^t) - L(1 - p^t)) / (2 p^t) against route A of the derivative."""
    t = t or default_step(inst)
    h = inst.p**t
    hi, lo = Lp_series(inst, chi, [1 + h, 1 - h])
    diff = hi - lo
    value = ZetaCombination(diff.m, [x.div_int(2 * h) for x in diff.coeffs])
    A = Lp_derivative(inst, chi, max_c=math.inf).route_a
    return FiniteDifference(t, value, _agreement(value, A), float(inst.prec - t))


def Lp_second_derivative(inst: LFunctionInstance, chi: Character) -> ZetaCombination:
    """factor * integral of (log eta^-1)^2 over the domain; no arithmetic meaning is claimed."""
    vals = []
    N = inst.table.nterms
    for idx in inst.orbit:
        _, factor = domain(inst, idx)
        F = inst.S.K
        total = F.zero(inst.work_prec)
        for piece in _pieces(inst, idx):
            logC = piece.C.log()
            L = _log_coefficients(piece, N)
            L2 = [F.zero(inst.work_prec) for _ in range(N)]
            for i in range(1, N):
                for j in range(1, N - i):
                    L2[i + j] = L2[i + j] + L[i] * L[j]
            total = total + (logC * logC).mul_int(piece.mass) if piece.mass else total
            total = total + logC * _moment_pairing(inst, piece.k, L).mul_int(2) + _moment_pairing(inst, piece.k, L2)
        vals.append(total.mul_int(factor) if factor else F.zero(inst.work_prec))
    return _combine(inst, chi, vals)


# -- multiplicative integrals ------------------------------------------------------------


def mult_integral(inst: LFunctionInstance, z_num: PadicNumber, z_den: PadicNumber) -> PadicNumber:
    """Multiplicative integral over P^1(Q_p) of (t - z_num)/(t - z_den) d mu_f."""
    return mult_ratio_integral(inst.table, z_num, z_den)


def mult_integral_to_point(inst: LFunctionInstance, chi: Character) -> ZetaCombination:
    """sum_i chi(sigma_i) log_q of the multiplicative integral attached to Psi_i.

    This is the log_E-side of the Tate point of the chi-part of the divisor
    z - zbar; it equals route B of the derivative divided by 2.
    """
    branch = inst.tate.branch
    vals = []
    for idx in inst.orbit:
        z, zb = inst.fixed_points(idx)
        vals.append(mult_integral(inst, z, zb).log(branch))
    return _combine(inst, chi, vals)


def _moebius(m, z: PadicNumber) -> PadicNumber:
    (a, b), (c, d) = m
    return (z * a + b) / (z * c + d)


@dataclass(frozen=True)
class NormIdentity:
    """J J_w against J^(1 + a_p), with J_w the integral over the w_p-translate of the divisor.

    The quotient is expected in q^Z; ``q_power`` is its exponent and ``digits``
    the precision to which the unit part equals 1.
    """

    J: PadicNumber
    J_w: PadicNumber
    a_p: int
    q_power: int | None
    digits: float

    @property
    def holds(self) -> bool:
        return self.q_power is not None


def norm_identity(inst: LFunctionInstance, idx: int, min_digits: float | None = None) -> NormIdentity:
    z, zb = inst.fixed_points(idx)
    w = inst.Q.iota(inst.Q.atkin_lehner().y)
    wz, wzb = _moebius(w, z), _moebius(w, zb)
    J = mult_integral(inst, z, zb)
    J_w = mult_integral(inst, wz, wzb)
    lhs = J * J_w
    rhs = J ** (1 + inst.a_p) if inst.a_p != -1 else J.F.one(J.prec)
    R = lhs / rhs
    q = inst.tate.q.lift_field(R.F)
    vq = q.valuation()
    k = Fraction(R.valuation()) / Fraction(vq)
    if k.denominator != 1:
        return NormIdentity(J, J_w, inst.a_p, None, 0.0)
    unit = R / q ** int(k) - 1 if k >= 0 else R * q ** int(-k) - 1
    digits = float(unit.prec) if unit.is_zero() else float(unit.valuation())
    needed = min_digits if min_digits is not None else inst.prec - 3
    return NormIdentity(J, J_w, inst.a_p, int(k) if digits >= needed else None, digits)
