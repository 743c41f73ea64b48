"""Elliptic curve data, Tate uniformization at a prime of multiplicative
reduction, the formal-group logarithm log_E with the branch log_q(q) = 0,
and recognition of small rationals from p-adic approximations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import NoMatch, NotMultiplicative, OrbitIncomplete, UniformizationFailed
from .lattice import rational_reconstruction
from .padic import BranchedLog, PadicField, PadicNumber, Qp

__all__ = [
    "EllipticCurve",
    "TateCurve",
    "tate_period",
    "log_E",
    "rational_recognize",
    "NumberFieldPoint",
    "point_combination",
    "point_add",
    "point_mul",
    "tate_point",
]


@dataclass(frozen=True)
class EllipticCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q (integral coefficients)."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @classmethod
    def from_list(cls, a) -> "EllipticCurve":
        return cls(*[int(x) for x in a])

    @property
    def ainvs(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self):
        return self.a1**2 + 4 * self.a2

    @property
    def b4(self):
        return self.a1 * self.a3 + 2 * self.a4

    @property
    def b6(self):
        return self.a3**2 + 4 * self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.ainvs
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self):
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j(self) -> Fraction:
        return Fraction(self.c4**3, self.discriminant)

    def on_curve(self, x, y) -> bool:
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6

    def count_points(self, ell: int) -> int:
        """#E(F_ell) for a prime of good reduction, by counting solutions (ell is small)."""
        a1, a2, a3, a4, a6 = (a % ell for a in self.ainvs)
        n = 1
        for x in range(ell):
            rhs = (x**3 + a2 * x * x + a4 * x + a6) % ell
            lin = (a1 * x + a3) % ell
            for y in range(ell):
                if (y * y + lin * y - rhs) % ell == 0:
                    n += 1
        return n

    def a_ell(self, ell: int) -> int:
        """Trace of Frobenius at ell (for multiplicative reduction: +1 split, -1 non-split)."""
        if self.discriminant % ell:
            return ell + 1 - self.count_points(ell)
        if self.c4 % ell == 0:
            return 0
        return 1 if self.is_split(ell) else -1

    def is_split(self, ell: int) -> bool:
        """Split multiplicative reduction: the tangent slopes at the node are rational,
        equivalently -c6 is a square mod ell (for ell = 2, the tangent quadratic splits)."""
        if self.discriminant % ell or self.c4 % ell == 0:
            raise NotMultiplicative(f"reduction at {ell} is not multiplicative")
        if ell == 2:
            return self._node_split_mod2()
        return pow(-self.c6 % ell, (ell - 1) // 2, ell) == 1

    def _node_split_mod2(self) -> bool:
        """Over F_2 find the singular point and test whether its tangent quadratic factors."""
        a1, a2, a3, a4, a6 = (a % 2 for a in self.ainvs)
        for x in range(2):
            for y in range(2):
                f = (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2
                fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % 2
                fy = (2 * y + a1 * x + a3) % 2
                if f == 0 and fx == 0 and fy == 0:
                    # tangent cone: Y^2 + a1 XY - (3x + a2) X^2 in shifted coordinates
                    A, B, C = 1, a1, (-(3 * x + a2)) % 2
                    return any((A * t * t + B * t + C) % 2 == 0 for t in range(2))
        raise NotMultiplicative("no singular point found mod 2")

    def a_table(self, bound: int, skip: int = 1) -> dict[int, int]:
        from .classfield import primes_up_to

        return {ell: self.a_ell(ell) for ell in primes_up_to(bound) if skip % ell}


# -- power series with integer coefficients ------------------------------------


def _sigma(k: int, n: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def _ser_mul(f, g, N):
    out = [0] * N
    for i, x in enumerate(f[:N]):
        if x:
            for j in range(min(len(g), N - i)):
                out[i + j] += x * g[j]
    return out


def _ser_inv(f, N):
    """Inverse of an integer series with constant term 1."""
    if f[0] != 1:
        raise ValueError("constant term must be 1")
    out = [1] + [0] * (N - 1)
    for n in range(1, N):
        out[n] = -sum(f[k] * out[n - k] for k in range(1, min(n, len(f) - 1) + 1))
    return out


def tate_series(N: int):
    """Integer series (in q) of q*j(q), a4(q), a6(q), c4(q), c6(q) up to degree N-1."""
    s3 = [0] + [_sigma(3, n) for n in range(1, N)]
    s5 = [0] + [_sigma(5, n) for n in range(1, N)]
    c4 = [1] + [240 * x for x in s3[1:]]
    c6 = [-1] + [504 * x for x in s5[1:]]
    prod = [1] + [0] * (N - 1)
    for n in range(1, N):
        factor = [0] * N
        factor[0] = 1
        factor[n] = -1
        for _ in range(24):
            prod = _ser_mul(prod, factor, N)
    qj = _ser_mul(_ser_mul(_ser_mul(c4, c4, N), c4, N), _ser_inv(prod, N), N)
    a4 = [-5 * x for x in s3]
    a6 = [-(5 * x + 7 * y) // 12 for x, y in zip(s3, s5)]
    return {"qj": qj, "a4": a4, "a6": a6, "c4": c4, "c6": c6}


def _eval(series, x: PadicNumber, start: int = 0):
    """sum_n series[n] x^(n - start) for n >= start (Horner)."""
    acc = x.F.zero(x.prec)
    for c in reversed(series[start:]):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class TateCurve:
    """Tate period q, the scaling u^2 between E and E_q, and the reduction type at p."""

    E: EllipticCurve
    p: int
    q: PadicNumber
    u2: PadicNumber
    split: bool
    prec: int

    @property
    def a_p(self) -> int:
        return 1 if self.split else -1

    @cached_property
    def branch(self) -> BranchedLog:
        return BranchedLog.from_period(self.q)

    @cached_property
    def u(self) -> PadicNumber:
        """A square root of u^2: in Q_p when split, in the unramified quadratic extension otherwise."""
        if self.split:
            return self.u2.sqrt()
        from .padic import unramified_field

        L = unramified_field(self.p)
        s = (self.u2 / self.u2.F(L.d, prec=self.u2.prec + 2)).sqrt()
        return s.lift_field(L) * L.gen(self.u2.prec + 2)

    def j_of_q(self, prec: int | None = None) -> PadicNumber:
        """1/q + 744 + 196884 q + ... evaluated at the period."""
        N = self._nterms(prec)
        qj = tate_series(N)["qj"]
        return _eval(qj, self.q) / self.q


    def _nterms(self, prec=None) -> int:
        return (prec or self.prec) // int(self.q.valuation()) + 3


def tate_period(E: EllipticCurve, p: int, prec: int = 30) -> TateCurve:
    """Solve j(q) = j(E) for q by the contracting iteration q <- 1/(j - (j(q) - 1/q))."""
    Q = Qp(p)
    if E.discriminant % p or E.c4 % p == 0:
        raise NotMultiplicative(f"E does not have multiplicative reduction at {p}")
    jE = Q(E.j, prec=prec + 2)
    vj = jE.valuation()
    if not vj < 0:
        raise NotMultiplicative("v(j) >= 0")
    N = (prec + 2) // int(-vj) + 3
    ser = tate_series(N)
    qj = ser["qj"]
    q = 1 / jE
    for _ in range(prec + 5):
        new = 1 / (jE - _eval(qj, q, start=1))
        if new == q and new.prec >= q.prec:
            break
        q = new
    q = q.add_bigoh(prec)
    c4q, c6q = _eval(ser["c4"], q), _eval(ser["c6"], q)
    u2 = (Q(E.c6, prec=prec) / c6q) * (c4q / Q(E.c4, prec=prec))
    return TateCurve(E, p, q, u2.add_bigoh(prec), E.is_split(p), prec)


# -- points over p-adic fields ---------------------------------------------------


def _ainvs_in(E: EllipticCurve, like: PadicNumber):
    return [like.F(a, prec=like.prec + 10) for a in E.ainvs]


def point_add(E: EllipticCurve, P, Q):
    """Chord-tangent addition over a p-adic field; None is the point at infinity.

    x-coordinates agreeing to the working precision are treated as equal.
    """
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, a6 = _ainvs_in(E, P[0])
    (x1, y1), (x2, y2) = P, Q
    if (x1 - x2).is_zero():
        if (y1 + y2 + a1 * x2 + a3).is_zero():
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def point_neg(E: EllipticCurve, P):
    if P is None:
        return None
    a1, _, a3, _, _ = _ainvs_in(E, P[0])
    x, y = P
    return (x, -y - a1 * x - a3)


def point_mul(E: EllipticCurve, k: int, P):
    if k < 0:
        return point_mul(E, -k, point_neg(E, P))
    R, B = None, P
    while k:
        if k & 1:
            R = point_add(E, R, B)
        B = point_add(E, B, B)
        k >>= 1
    return R


def formal_differential(E: EllipticCurve, N: int) -> list[Fraction]:
    """Coefficients of omega = dx/(2y + a1 x + a3) in the parameter t = -x/y."""
    a1, a2, a3, a4, a6 = E.ainvs
    # w = t^3 W(t): W = 1 + a1 t W + a2 t^2 W + a3 t^3 W^2 + a4 t^4 W^2 + a6 t^6 W^3
    W = [Fraction(0)] * N
    W[0] = Fraction(1)
    for _ in range(N):
        W2 = _ser_mul(W, W, N)
        W3 = _ser_mul(W2, W, N)
        new = [Fraction(0)] * N
        new[0] = Fraction(1)
        for n in range(N):
            s = Fraction(0)
            if n >= 1:
                s += a1 * W[n - 1]
            if n >= 2:
                s += a2 * W[n - 2]
            if n >= 3:
                s += a3 * W2[n - 3]
            if n >= 4:
                s += a4 * W2[n - 4]
            if n >= 6:
                s += a6 * W3[n - 6]
            new[n] += s
        if new == W:
            break
        W = new
    # omega = (2W + t W') / (W (2 - a1 t - a3 t^3 W))
    num = [2 * W[n] + n * W[n] for n in range(N)]
    den = [Fraction(0)] * N
    den[0] = Fraction(2)
    den[1] -= a1
    for n in range(N - 3):
        den[n + 3] -= a3 * W[n]
    den = _ser_mul(W, den, N)
    inv = [Fraction(0)] * N
    inv[0] = 1 / den[0]
    for n in range(1, N):
        inv[n] = -sum(den[k] * inv[n - k] for k in range(1, n + 1)) / den[0]
    return _ser_mul(num, inv, N)


def formal_log(E: EllipticCurve, t: PadicNumber, prec: int) -> PadicNumber:
    """sum_n omega_n t^(n+1)/(n+1) for t in the maximal ideal."""
    vt = t.valuation()
    if not vt > 0:
        raise UniformizationFailed("parameter is not in the maximal ideal")
    N = 1
    while (N + 1) * vt - math.log(N + 1, t.p) < prec + 2:
        N += 1
    om = formal_differential(E, N + 1)
    acc = t.F.zero(prec + 4)
    power = t
    for n in range(N + 1):
        if om[n]:
            acc = acc + (power * t.F(om[n], prec=prec + 8)).div_int(n + 1)
        power = power * t
    return acc.add_bigoh(prec)


def _formal_multiple(E: EllipticCurve, P, max_k: int = 200):
    """Smallest k with kP in the kernel of reduction, together with kP (None if torsion)."""
    R = None
    for k in range(1, max_k + 1):
        R = point_add(E, R, P)
        if R is None:
            return k, None
        if R[0].valuation() < 0:
            return k, R
    raise UniformizationFailed(f"no multiple up to {max_k} reduces to the origin")


def log_E(P, T: TateCurve, prec: int | None = None) -> PadicNumber:
    """Logarithm on E(F) normalized by the Tate uniformization and log_q(q) = 0.

    With omega_{E_q} = du/u and E = u^2-scaled E_q, this is u * lambda_E(kP)/k.
    """
    if P is None:
        return T.q.F.zero(T.prec)
    prec = prec or T.prec
    k, R = _formal_multiple(T.E, P)
    if R is None:
        return P[0].F.zero(prec)
    t = -R[0] / R[1]
    lam = formal_log(T.E, t, prec)
    u = T.u
    if u.F != lam.F:
        if u.F.d is not None and lam.F.d is not None:
            raise UniformizationFailed("u and the point lie in different quadratic extensions")
        u, lam = (u.lift_field(lam.F), lam) if u.F.d is None else (u, lam.lift_field(u.F))
    return (u * lam) / k


def tate_point(T: TateCurve, w: PadicNumber):
    """Image of w in F^x / q^Z on E, through E_q and the u-scaling (split case).

    Used as an independent check of log_E: log_E(tate_point(w)) = log_q(w).
    """
    if not T.split:
        raise UniformizationFailed("the u-scaling is not rational in the non-split case")
    prec = T.prec
    q = T.q.lift_field(w.F) if w.F.d is not None else T.q
    one = w.F.one(prec + 4)
    nterms = prec // int(q.valuation()) + 3
    s1 = w.F.zero(prec + 4)
    qn = one
    for n in range(1, nterms):
        qn = qn * q
        s1 = s1 + (qn / (one - qn)).mul_int(n)
    X = w / (one - w) ** 2 - 2 * s1
    Y = w * w / (one - w) ** 3 + s1
    qn = one
    for m in range(1, nterms):
        qn = qn * q
        a, b = qn * w, qn / w
        X = X + a / (one - a) ** 2 + b / (one - b) ** 2
        Y = Y + a * a / (one - a) ** 3 - b / (one - b) ** 3
    # E_q: y^2 + xy = x^3 + a4 x + a6, so b2' = 1; move both to short form and scale
    Xs, Ys = 36 * X + 3, 108 * (2 * Y + X)
    u = T.u.lift_field(w.F) if w.F.d is not None else T.u
    u2 = u * u
    Xs, Ys = u2 * Xs, u2 * u * Ys
    E = T.E
    x = (Xs - 3 * E.b2) / 36
    y = (Ys / 108 - E.a1 * x - E.a3) / 2
    return (x, y)


# -- recognition and global points -----------------------------------------------


def rational_recognize(x: PadicNumber, height_bound: int = 1000) -> Fraction:
    """The rational a/b with max(|a|, |b|) <= height_bound congruent to x, if unique.

    Elements of a quadratic extension must have vanishing second coordinate.
    Raises NoMatch when nothing of that height fits or the precision cannot
    separate two candidates of that height.
    """
    if x.F.d is not None:
        first, second = x.coordinates()
        if not second.is_zero():
            raise NoMatch(f"second coordinate is nonzero at valuation {second.valuation()}")
        x = first
    if x.is_zero():
        return Fraction(0)
    s = x.s
    digits = x.prec - s
    M = x.p**digits
    if 2 * height_bound * height_bound >= M:
        raise NoMatch(f"{digits} digits cannot separate rationals of height {height_bound}")
    unit = x.a % M
    rr = rational_reconstruction(unit, M, height_bound)
    if rr is None:
        raise NoMatch(f"no rational of height <= {height_bound}")
    a, b = rr
    val = Fraction(a, b) * Fraction(x.p) ** s
    if max(abs(val.numerator), abs(val.denominator)) > height_bound:
        raise NoMatch(f"no rational of height <= {height_bound}")
    return val


def _polymulmod(f, g, mod):
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    n = len(mod) - 1
    for k in range(len(out) - 1, n - 1, -1):
        c = out[k]
        if c:
            for i in range(n + 1):
                out[k - n + i] -= c * mod[i]
    return (out + [Fraction(0)] * n)[:n]


@dataclass(frozen=True)
class NumberFieldPoint:
    """A point with coordinates in Q(alpha), alpha a root of a monic polynomial of degree <= 2.

    ``poly`` lists coefficients from the constant term up; ``x`` and ``y`` are
    coordinate vectors in the basis 1, alpha.
    """

    poly: tuple
    x: tuple
    y: tuple

    @classmethod
    def make(cls, poly, x, y) -> "NumberFieldPoint":
        poly = tuple(Fraction(c) for c in poly)
        n = len(poly) - 1
        if poly[-1] != 1 or n not in (1, 2):
            raise ValueError("need a monic polynomial of degree 1 or 2")
        pad = lambda v: tuple(Fraction(c) for c in v) + (Fraction(0),) * (n - len(v))
        return cls(poly, pad(x), pad(y))

    def on_curve(self, E: EllipticCurve) -> bool:
        f = self.poly
        x, y = list(self.x), list(self.y)
        mul = lambda u, v: _polymulmod(u, v, f)
        n = len(f) - 1

        def const(c):
            return [Fraction(c)] + [Fraction(0)] * (n - 1)

        def add(*vs):
            return [sum(t) for t in zip(*vs)]

        a1, a2, a3, a4, a6 = (const(a) for a in E.ainvs)
        lhs = add(mul(y, y), mul(mul(a1, x), y), mul(a3, y))
        x2 = mul(x, x)
        rhs = add(mul(x2, x), mul(a2, x2), mul(a4, x), a6)
        return lhs == rhs

    def localize(self, K: PadicField, sign: int = 1, prec: int = 40):
        """Image under alpha -> (-b + sign*m*sqrt(d))/2, where b^2 - 4c = d m^2."""
        if len(self.poly) == 2:
            alpha = K(-self.poly[0], prec=prec)
        else:
            c, b, _ = self.poly
            disc = b * b - 4 * c
            if K.d is None:
                raise UniformizationFailed("a quadratic point needs a quadratic local field")
            m2 = disc / K.d
            m = _rational_sqrt(m2)
            if m is None:
                raise UniformizationFailed("the point is not defined over the local quadratic field")
            alpha = K(-b / 2, sign * m / 2, prec=prec)
        ev = lambda v: sum((K(c, prec=prec) * alpha**i for i, c in enumerate(v)), K.zero(prec))
        return (ev(self.x), ev(self.y))


def _rational_sqrt(r: Fraction):
    if r < 0:
        return None
    n, d = math.isqrt(r.numerator), math.isqrt(r.denominator)
    if n * n == r.numerator and d * d == r.denominator:
        return Fraction(n, d)
    return None


def point_combination(T: TateCurve, points, weights, expected: int | None = None, prec=None) -> PadicNumber:
    """sum_i weights[i] * log_E(points[i]) for localized points (pairs of p-adic numbers).

    ``expected`` is the size of the Galois orbit the points should exhaust.
    """
    points, weights = list(points), list(weights)
    if len(points) != len(weights):
        raise ValueError("one weight per point")
    if expected is not None and len(points) != expected:
        raise OrbitIncomplete(f"{len(points)} points given, orbit has {expected}")
    total = None
    for P, w in zip(points, weights):
        term = log_E(P, T, prec).mul_int(w) if w else None
        if term is not None:
            total = term if total is None else total + term
    if total is None:
        return T.q.F.zero(prec or T.prec)
    return total
