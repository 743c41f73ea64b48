"""Capped-absolute-precision arithmetic in Q_p and its quadratic extensions.

An element of ``F = Q_p(theta)`` with ``theta**2 = d`` is stored as
``p**s * (a + b*theta)`` where the integer coordinates ``a, b`` are known
modulo ``p**(prec - s)``.  For ``F = Q_p`` the second coordinate is always 0.
Values never claim more precision than ball arithmetic allows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DivisionByIndistinguishableZero,
    OutsideConvergenceDomain,
    PrecisionExhausted,
)

__all__ = [
    "PadicField",
    "PadicNumber",
    "BranchedLog",
    "Qp",
    "ramified_field",
    "unramified_field",
    "vp",
    "plog",
    "pexp",
    "sqrt_mod_prime_power",
]


def vp(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _vp_or(n, p, default):
    return default if n == 0 else vp(n, p)


def sqrt_mod_prime_power(a: int, p: int, n: int) -> int | None:
    """Return x with x*x = a mod p**n for a unit a, or None if a is a non-square.

    For p = 2 the root is only determined modulo 2**(n-1); any lift is returned.
    """
    M = p**n
    a %= M
    if p == 2:
        if n <= 2:
            for x in range(M):
                if (x * x - a) % M == 0:
                    return x
            return None
        if a % 8 != 1:
            return None
        x = 1
        for k in range(3, n):
            if (x * x - a) % (2 ** (k + 1)) != 0:
                x += 2 ** (k - 1)
        return x % M
    if a % p == 0:
        raise ValueError("not a unit")
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    x = next(r for r in range(1, p) if (r * r - a) % p == 0)
    k = 1
    while k < n:
        k = min(2 * k, n)
        mod = p**k
        x = (x - (x * x - a) * pow(2 * x, -1, mod)) % mod
    return x


def _nonresidue(p):
    if p == 2:
        return -3
    return next(t for t in range(2, p) if pow(t, (p - 1) // 2, p) == p - 1)


@dataclass(frozen=True)
class PadicField:
    """Q_p (d is None) or Q_p(sqrt d) for an integer d.

    ``kind`` is ``"Qp"``, ``"ramified"`` (d = D a field discriminant with
    p | D) or ``"unramified"``.
    """

    p: int
    d: int | None = None
    kind: str = "Qp"

    @property
    def e(self) -> int:
        return 2 if self.kind == "ramified" else 1

    @property
    def f(self) -> int:
        return 2 if self.kind == "unramified" else 1

    @property
    def degree(self) -> int:
        return 1 if self.d is None else 2

    @property
    def base(self) -> "PadicField":
        return Qp(self.p)

    def __call__(self, a=0, b=0, prec: int = 40) -> "PadicNumber":
        """Embed rationals a + b*theta at absolute precision ``prec``."""
        if b and self.d is None:
            raise ValueError("Q_p has no generator")
        fa, fb = Fraction(a), Fraction(b)
        den = fa.denominator * fb.denominator // math.gcd(fa.denominator, fb.denominator)
        t = vp(den, self.p) if den % self.p == 0 else 0
        unit_den = den // self.p**t
        M = self.p ** max(prec + t + 2, 1)
        inv = pow(unit_den, -1, M)
        A = fa.numerator * (den // fa.denominator) * inv
        B = fb.numerator * (den // fb.denominator) * inv
        return PadicNumber._make(self, -t, A, B, prec)

    def gen(self, prec: int = 40) -> "PadicNumber":
        return self(0, 1, prec)

    def zero(self, prec: int = 40) -> "PadicNumber":
        return PadicNumber._make(self, prec, 0, 0, prec)

    def one(self, prec: int = 40) -> "PadicNumber":
        return self(1, 0, prec)

    def __repr__(self):
        if self.d is None:
            return f"Q_{self.p}"
        return f"Q_{self.p}(sqrt({self.d}))[{self.kind}]"


def Qp(p: int) -> PadicField:
    return PadicField(p, None, "Qp")


def ramified_field(p: int, D: int) -> PadicField:
    """K_p = Q_p(sqrt D) for a discriminant D with p | D (p ramified)."""
    if D % p:
        raise ValueError("p does not divide D")
    return PadicField(p, D, "ramified")


def unramified_field(p: int) -> PadicField:
    return PadicField(p, _nonresidue(p), "unramified")


class PadicNumber:
    __slots__ = ("F", "s", "a", "b", "prec")

    def __init__(self, F, s, a, b, prec):
        self.F = F
        self.s = s
        self.a = a
        self.b = b
        self.prec = prec

    @classmethod
    def _make(cls, F, s, a, b, prec):
        p = F.p
        r = prec - s
        if r <= 0:
            return cls(F, prec, 0, 0, prec)
        M = p**r
        a %= M
        b %= M
        if a == 0 and b == 0:
            return cls(F, prec, 0, 0, prec)
        while a % p == 0 and b % p == 0:
            a //= p
            b //= p
            s += 1
        if s >= prec:
            return cls(F, prec, 0, 0, prec)
        return cls(F, s, a, b, prec)

    # -- basic queries -------------------------------------------------
    @property
    def p(self) -> int:
        return self.F.p

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def coord_valuation(self) -> int:
        return self.prec if self.is_zero() else self.s

    def valuation(self):
        """Valuation normalized so that v(p) = 1 (a Fraction, or inf for zero)."""
        if self.is_zero():
            return math.inf
        F, p, r = self.F, self.p, self.prec - self.s
        if F.d is None:
            return Fraction(self.s)
        if F.kind == "ramified":
            vd = vp(F.d, p)
            va = Fraction(_vp_or(self.a, p, r))
            vb = Fraction(_vp_or(self.b, p, r)) + Fraction(vd, 2)
            return self.s + min(va, vb)
        if p != 2:
            return Fraction(self.s)
        n = self.a * self.a - F.d * self.b * self.b
        return self.s + Fraction(_vp_or(n, p, 2 * r), 2)

    def relative_precision(self):
        v = self.valuation()
        return -math.inf if v == math.inf else self.prec - v

    def unit_part_digits(self):
        return _digits(self.a, self.p, self.prec - self.s), _digits(self.b, self.p, self.prec - self.s)

    def digits(self):
        """Coordinate digit vectors (first coordinate, second coordinate)."""
        return self.unit_part_digits()

    # -- coercion ----------------------------------------------------------
    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.F == self.F:
                return other
            if other.F.d is None and other.F.p == self.p:
                return PadicNumber(self.F, other.s, other.a, 0, other.prec)
            if self.F.d is None and self.p == other.F.p:
                raise TypeError("coerce the Q_p operand into the extension first")
            raise TypeError(f"incompatible fields {self.F} and {other.F}")
        if isinstance(other, (int, Fraction)):
            return self.F(other, 0, self.prec + 2 * abs(min(self.s, 0)) + 2)
        return NotImplemented

    def lift_field(self, F) -> "PadicNumber":
        if F == self.F:
            return self
        if self.F.d is not None:
            raise TypeError("only Q_p elements can be lifted")
        return PadicNumber(F, self.s, self.a, 0, self.prec)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        s = min(self.s, other.s)
        a = self.a * p ** (self.s - s) + other.a * p ** (other.s - s)
        b = self.b * p ** (self.s - s) + other.b * p ** (other.s - s)
        return PadicNumber._make(self.F, s, a, b, min(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return PadicNumber._make(self.F, self.s, -self.a, -self.b, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec + other.coord_valuation, other.prec + self.coord_valuation)
        if self.is_zero() or other.is_zero():
            return self.F.zero(prec)
        d = self.F.d or 0
        a = self.a * other.a + d * self.b * other.b
        b = self.a * other.b + self.b * other.a
        return PadicNumber._make(self.F, self.s + other.s, a, b, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.is_zero():
            raise DivisionByIndistinguishableZero(f"inverting O(p^{self.prec})")
        p, r = self.p, self.prec - self.s
        if self.F.d is None:
            inv = pow(self.a, -1, p**r)
            return PadicNumber._make(self.F, -self.s, inv, 0, self.prec - 2 * self.s)
        n = self.a * self.a - self.F.d * self.b * self.b
        t = _vp_or(n, p, r)
        if t >= r:
            raise DivisionByIndistinguishableZero("norm indistinguishable from zero")
        rel = r - t
        ninv = pow(n // p**t, -1, p**rel)
        return PadicNumber._make(
            self.F, -self.s - t, self.a * ninv, -self.b * ninv, self.prec - 2 * self.s - 2 * t
        )

    def __truediv__(self, other):
        if isinstance(other, int):
            return self.div_int(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def div_int(self, k: int) -> "PadicNumber":
        """Exact division by a nonzero integer."""
        if k == 0:
            raise ZeroDivisionError
        p = self.p
        t = vp(k, p)
        u = k // p**t
        if self.is_zero():
            return self.F.zero(self.prec - t)
        M = p ** (self.prec - self.s)
        inv = pow(u, -1, M)
        return PadicNumber._make(self.F, self.s - t, self.a * inv, self.b * inv, self.prec - t)

    def mul_int(self, k: int) -> "PadicNumber":
        if k == 0:
            return self.F.zero(self.prec)
        t = vp(k, self.p)
        return PadicNumber._make(self.F, self.s, self.a * k, self.b * k, self.prec + t)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.F.one(self.prec + abs(self.s) * k + 2)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conj(self) -> "PadicNumber":
        return PadicNumber._make(self.F, self.s, self.a, -self.b, self.prec)

    def norm(self) -> "PadicNumber":
        """Norm to Q_p (returned as an element of Q_p)."""
        n = self * self.conj()
        return PadicNumber._make(self.F.base, n.s, n.a, 0, n.prec)

    def trace(self) -> "PadicNumber":
        t = self + self.conj()
        return PadicNumber._make(self.F.base, t.s, t.a, 0, t.prec)

    def coordinates(self):
        """(first, second) coordinates as elements of Q_p."""
        Q = self.F.base
        return (
            PadicNumber._make(Q, self.s, self.a, 0, self.prec),
            PadicNumber._make(Q, self.s, self.b, 0, self.prec),
        )

    def add_bigoh(self, n: int) -> "PadicNumber":
        return PadicNumber._make(self.F, self.s, self.a, self.b, min(n, self.prec))

    def with_precision(self, n: int) -> "PadicNumber":
        """Same representative, precision set to n (callers vouch for the digits)."""
        return PadicNumber._make(self.F, self.s, self.a, self.b, n)

    def __eq__(self, other):
        try:
            diff = self - other
        except TypeError:
            return NotImplemented
        return diff.is_zero()

    __hash__ = None

    def lift(self) -> Fraction:
        """Rational representative of a Q_p element."""
        if self.b:
            raise ValueError("not in Q_p")
        return Fraction(self.a) * Fraction(self.p) ** self.s

    def lift_int(self) -> int:
        """Integer representative (requires nonnegative valuation, Q_p only)."""
        if self.b:
            raise ValueError("not in Q_p")
        if self.is_zero():
            return 0
        if self.s < 0:
            raise ValueError("not integral")
        return self.a * self.p**self.s

    def residue(self):
        """Residue of an integral element as the pair of first digits of (a, b)*p^s."""
        if self.valuation() < 0:
            raise ValueError("not integral")
        if self.is_zero() or self.s > 0:
            return (0, 0)
        return (self.a % self.p, self.b % self.p)

    def __repr__(self):
        if self.is_zero():
            return f"O({self.p}^{self.prec})"
        r = self.prec - self.s
        sa = _signed(self.a, self.p**r)
        if self.F.d is None:
            core = f"{sa}"
        else:
            core = f"({sa} + {_signed(self.b, self.p**r)}*t)"
        return f"{self.p}^{self.s}*{core} + O({self.p}^{self.prec})"

    # -- transcendental ---------------------------------------------------
    def log(self, branch: "BranchedLog | None" = None) -> "PadicNumber":
        return plog(self, branch)

    def exp(self) -> "PadicNumber":
        return pexp(self)

    def sqrt(self) -> "PadicNumber":
        """Square root of a Q_p element (raises ValueError for non-squares)."""
        if self.F.d is not None:
            raise NotImplementedError("square roots only in Q_p")
        if self.is_zero():
            return self.F.zero(self.prec // 2)
        if self.s % 2:
            raise ValueError("odd valuation")
        r = self.prec - self.s
        x = sqrt_mod_prime_power(self.a, self.p, r)
        if x is None:
            raise ValueError("not a square")
        loss = 1 if self.p == 2 else 0
        return PadicNumber._make(self.F, self.s // 2, x, 0, self.s // 2 + r - loss)

    def teichmuller(self) -> "PadicNumber":
        if self.valuation() != 0:
            raise ValueError("Teichmuller lift needs a unit")
        q = self.p**self.F.f
        w = self
        for _ in range(self.prec + 1):
            w = w**q
        return w.add_bigoh(self.prec)


def _signed(x, M):
    return x if x <= M // 2 else x - M


def _digits(x, p, n):
    out = []
    for _ in range(max(n, 0)):
        out.append(x % p)
        x //= p
    return out


@dataclass(frozen=True)
class BranchedLog:
    """Branch of the p-adic logarithm fixed by the value of log(p)."""

    p: int
    log_p: PadicNumber | None = None  # element of Q_p; None means log(p) = 0

    @classmethod
    def iwasawa(cls, p: int) -> "BranchedLog":
        return cls(p, None)

    @classmethod
    def from_period(cls, q: PadicNumber) -> "BranchedLog":
        """The branch with log(q) = 0 for q in Q_p of positive valuation."""
        if q.F.d is not None:
            raise ValueError("period must lie in Q_p")
        v = q.valuation()
        if not v > 0:
            raise ValueError("period must have positive valuation")
        u = q / q.F(Fraction(q.p) ** int(v), 0, q.prec + 2 * int(v))
        lu = plog(u, None)
        return cls(q.p, -lu.div_int(int(v)))

    def value_at_p(self, prec: int) -> PadicNumber:
        Q = Qp(self.p)
        if self.log_p is None:
            return Q.zero(prec)
        return self.log_p


def _log_one_unit(y: PadicNumber) -> PadicNumber:
    z = y - 1
    if z.is_zero():
        return y.F.zero(y.prec)
    v = z.valuation()
    if not v > 0:
        raise ValueError("not a 1-unit")
    N = y.prec
    total = y.F.zero(N + 10)
    term = z
    k = 1
    while True:
        if k * v - math.log(k, y.p) > N + 1:
            break
        t = term.div_int(k)
        total = total + t if k % 2 else total - t
        k += 1
        term = term * z
    if total.prec < N - 2 * math.log(max(k, 2), y.p) - 2 and total.prec <= 0:
        raise PrecisionExhausted("log series lost all precision")
    return total.add_bigoh(N)


def plog(x: PadicNumber, branch: BranchedLog | None = None) -> PadicNumber:
    """Branched p-adic logarithm on F^x (log p fixed by ``branch``)."""
    if x.is_zero():
        raise DivisionByIndistinguishableZero("log of zero")
    F, p = x.F, x.p
    v = x.valuation()
    m = F.e * (p**F.f - 1)
    vm = int(v * m)
    y = x**m
    y = y / F(Fraction(p) ** vm, 0, y.prec + 2 * abs(vm) + 2)
    if F.p == 2 and F.kind != "unramified":
        # residue field F_2: y is already a 1-unit
        pass
    ly = _log_one_unit(y)
    if vm and branch is not None and branch.log_p is not None:
        ly = ly + branch.log_p.lift_field(F).mul_int(vm)
    return ly.div_int(m)


def pexp(x: PadicNumber) -> PadicNumber:
    """p-adic exponential on its disc of convergence v(x) > 1/(p-1)."""
    F, p = x.F, x.p
    if x.is_zero():
        return F.one(x.prec)
    v = x.valuation()
    if not v > Fraction(1, p - 1):
        raise OutsideConvergenceDomain(f"v(x) = {v} <= 1/(p-1)")
    N = x.prec
    total = F.one(N + 10)
    term = F.one(N + 10)
    k = 1
    while True:
        vfact = (k - sum(_digits(k, p, 64))) / (p - 1)
        if k * v - vfact > N + 1:
            break
        term = (term * x).div_int(k)
        total = total + term
        k += 1
    return total.add_bigoh(N)
