"""Imaginary quadratic fields with a ramified prime: class groups via binary
quadratic forms, the quotient Delta = Cl(K)/<[p]>, and its characters."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import NotFundamental, NotRamified, UnitObstruction
from .padic import PadicNumber, Qp, unramified_field

__all__ = [
    "Form",
    "QuadField",
    "FiniteAbelianGroup",
    "DeltaGroup",
    "Character",
    "build_field",
    "delta_group",
    "characters",
    "theta_bp",
    "is_fundamental",
    "class_number_bruteforce",
    "egcd",
    "is_prime",
    "primes_up_to",
    "factorint",
]


def egcd(a: int, b: int):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def primes_up_to(n: int) -> list[int]:
    return [q for q in range(2, n + 1) if is_prime(q)]


def factorint(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_fundamental(D: int) -> bool:
    if D % 4 == 1:
        return all(e == 1 for e in factorint(D).values())
    if D % 4 == 0:
        m = D // 4
        if m % 4 not in (2, 3):
            return False
        return all(e == 1 for e in factorint(m).values())
    return False


@dataclass(frozen=True, order=True)
class Form:
    """Positive definite binary quadratic form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def reduce(self) -> "Form":
        a, b, c = self.a, self.b, self.c
        while True:
            if c < a:
                a, b, c = c, -b, a
                continue
            if not (-a < b <= a):
                k = (a - b) // (2 * a)
                b, c = b + 2 * a * k, a * k * k + b * k + c
                continue
            if a == c and b < 0:
                b = -b
            return Form(a, b, c)

    def inverse(self) -> "Form":
        return Form(self.a, -self.b, self.c).reduce()

    def compose(self, other: "Form") -> "Form":
        """Gauss composition followed by reduction."""
        a1, b1, c1 = self.a, self.b, self.c
        a2, b2, c2 = other.a, other.b, other.c
        if a1 > a2:
            a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
        D = self.disc
        s = (b1 + b2) // 2
        n = b2 - s
        if a1 % a2 == 0:
            y1, d = 0, a2
        else:
            d, u, _ = egcd(a2, a1)
            y1 = u
        if s % d == 0:
            y2, x2, d1 = -1, 0, d
        else:
            d1, x2, y2 = egcd(s, d)
            y2 = -y2
        v1, v2 = a1 // d1, a2 // d1
        r = (y1 * y2 * n - x2 * c2) % v1
        b3 = b2 + 2 * v2 * r
        a3 = v1 * v2
        c3 = (b3 * b3 - D) // (4 * a3)
        return Form(a3, b3, c3).reduce()

    def represents_prime(self, q: int) -> bool:
        return self.reduce() in {prime_form(self.disc, q), prime_form(self.disc, q).inverse()}


def prime_form(D: int, q: int) -> Form:
    """A reduced form of discriminant D with leading coefficient q (q | D or split)."""
    for b in range(-q + 1, q + 1):
        if (b * b - D) % (4 * q) == 0:
            return Form(q, b, (b * b - D) // (4 * q)).reduce()
    raise ValueError(f"{q} is inert in discriminant {D}")


def reduced_forms(D: int) -> list[Form]:
    """All primitive reduced forms of discriminant D < 0."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append(Form(a, b, c))
        a += 1
    return sorted(out)


def class_number_bruteforce(D: int) -> int:
    """Count reduced forms by a direct triple loop (oracle for tests)."""
    count = 0
    for a in range(1, -D + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0) or math.gcd(math.gcd(a, b), c) > 1:
                continue
            count += 1
    return count


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """A finite abelian group given by its elements and a multiplication table."""

    elements: tuple
    table: tuple  # table[i][j] = index of elements[i]*elements[j]

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, x) -> int:
        return self.elements.index(x)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.table[x][i]
            k += 1
        return k

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*(self.element_order(i) for i in range(self.order))) if self.order else 1

    def generators(self) -> list[int]:
        """A greedy generating set (largest orders first, deterministic)."""
        gens: list[int] = []
        span = {0}
        for i in sorted(range(self.order), key=lambda i: (-self.element_order(i), i)):
            if i in span:
                continue
            gens.append(i)
            frontier = list(span)
            span = set(span)
            while frontier:
                x = frontier.pop()
                y = self.table[x][i]
                if y not in span:
                    span.add(y)
                    frontier.append(y)
            changed = True
            while changed:
                changed = False
                for x in list(span):
                    for g in gens:
                        y = self.table[x][g]
                        if y not in span:
                            span.add(y)
                            changed = True
        return gens


@dataclass(frozen=True)
class QuadField:
    D: int
    p: int
    forms: tuple[Form, ...]
    p_form: Form

    @property
    def class_number(self) -> int:
        return len(self.forms)

    @cached_property
    def class_group(self) -> FiniteAbelianGroup:
        els = self.forms
        idx = {f: i for i, f in enumerate(els)}
        table = tuple(tuple(idx[x.compose(y)] for y in els) for x in els)
        return FiniteAbelianGroup(els, table)

    @property
    def identity(self) -> Form:
        return self.forms[0]

    @cached_property
    def p_class_order(self) -> int:
        return 1 if self.p_form == self.identity else 2

    @property
    def p_principal(self) -> bool:
        return self.p_class_order == 1

    def split_primes(self, bound: int, avoid: int = 1):
        """Primes q <= bound split in K and coprime to avoid*D."""
        for q in primes_up_to(bound):
            if self.D % q == 0 or avoid % q == 0:
                continue
            if q == 2:
                if self.D % 8 == 1:
                    yield q
                continue
            if pow(self.D % q, (q - 1) // 2, q) == 1:
                yield q


def build_field(D: int, p: int) -> QuadField:
    if D >= 0 or not is_fundamental(D):
        raise NotFundamental(f"D={D} is not a negative fundamental discriminant")
    if D in (-3, -4):
        raise UnitObstruction(f"O_K has units beyond +-1 for D={D}")
    if D % p != 0:
        raise NotRamified(f"p={p} does not divide D={D}")
    forms = tuple(reduced_forms(D))
    return QuadField(D, p, forms, prime_form(D, p))


@dataclass(frozen=True)
class DeltaGroup:
    """Delta = Cl(K)/<[p]> with coset representatives (identity first)."""

    field: QuadField
    cosets: tuple[tuple[Form, ...], ...]
    group: FiniteAbelianGroup

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def h_p(self) -> int:
        return self.order

    @property
    def H_p_equals_H(self) -> bool:
        return self.field.p_principal

    def representative(self, i: int) -> Form:
        return self.cosets[i][0]

    def class_of(self, f: Form) -> int:
        f = f.reduce()
        for i, c in enumerate(self.cosets):
            if f in c:
                return i
        raise KeyError(f)

    def prime_for(self, i: int, avoid: int = 1, bound: int = 10**4) -> tuple[int, Form]:
        """Smallest split prime q coprime to avoid with a prime form of q in coset i."""
        for q in self.field.split_primes(bound, avoid):
            f = prime_form(self.field.D, q)
            if self.class_of(f) == i:
                return q, f
            if self.class_of(f.inverse()) == i:
                return q, f.inverse()
        raise ValueError("no prime found")


def delta_group(F: QuadField) -> DeltaGroup:
    cl = F.class_group
    P = cl.index(F.p_form)
    seen: set[int] = set()
    cosets = []
    for i in range(cl.order):
        if i in seen:
            continue
        c = sorted({i, cl.mul(i, P)})
        seen.update(c)
        cosets.append(tuple(cl.elements[j] for j in c))
    idx = {}
    for k, c in enumerate(cosets):
        for f in c:
            idx[f] = k
    table = tuple(tuple(idx[c1[0].compose(c2[0])] for c2 in cosets) for c1 in cosets)
    return DeltaGroup(F, tuple(cosets), FiniteAbelianGroup(tuple(range(len(cosets))), table))


@dataclass(frozen=True)
class Character:
    """chi(sigma_i) = zeta_m ** exponents[i] for a fixed primitive m-th root zeta_m."""

    group: FiniteAbelianGroup
    m: int
    exponents: tuple[int, ...]
    p: int = field(default=0, compare=False)

    def __call__(self, i: int) -> int:
        """Exponent of the value at element i."""
        return self.exponents[i]

    @property
    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def conjugate(self) -> "Character":
        return Character(self.group, self.m, tuple((-e) % self.m for e in self.exponents), self.p)

    def order(self) -> int:
        g = self.m
        for e in self.exponents:
            g = math.gcd(g, e)
        return self.m // g

    def value_field(self):
        """Smallest extension of Q_p holding mu_n for n the order of chi."""
        return self.value_field_for(self.order())

    def zeta(self, prec: int) -> PadicNumber:
        """The chosen primitive m-th root of unity (Teichmuller lift)."""
        F = self.value_field_for(self.m)
        q = self.p**F.f
        for a in range(1, q * q):
            x = F(a % self.p, (a // self.p) % self.p if F.d else 0, prec)
            if x.valuation() != 0:
                continue
            w = x.teichmuller()
            w_pow = w ** ((q - 1) // self.m)
            if _exact_order(w_pow, self.m):
                return w_pow
        raise ValueError("no primitive root found")

    def value_field_for(self, n):
        if (self.p - 1) % n == 0:
            return Qp(self.p)
        if (self.p * self.p - 1) % n == 0:
            return unramified_field(self.p)
        raise NotImplementedError(f"mu_{n} needs an extension of degree > 2 of Q_{self.p}")

    def value(self, i: int, prec: int = 30) -> PadicNumber:
        e = self.exponents[i] % self.m
        if e == 0:
            return self.value_field_for(self.m).one(prec)
        if 2 * e == self.m:
            return -self.value_field_for(self.m).one(prec)
        return self.zeta(prec) ** e


def _exact_order(w: PadicNumber, m: int) -> bool:
    one = w.F.one(w.prec)
    if not (w**m - one).is_zero():
        return False
    return all(not (w ** (m // r) - one).is_zero() for r in _prime_divisors(m))


def _prime_divisors(n):
    return list(factorint(n)) if n > 1 else []


def characters(G: FiniteAbelianGroup | DeltaGroup, p: int = 0) -> list[Character]:
    """All characters of G, trivial first, in a deterministic order."""
    if isinstance(G, DeltaGroup):
        p = p or G.field.p
        G = G.group
    m = G.exponent
    gens = G.generators()
    orders = [G.element_order(g) for g in gens]
    out = []

    def assign(k, vals):
        if k == len(gens):
            chi = _extend(G, gens, vals, m)
            if chi is not None:
                out.append(Character(G, m, chi, p))
            return
        step = m // orders[k]
        for t in range(orders[k]):
            assign(k + 1, vals + [t * step])

    assign(0, [])
    uniq = []
    for c in out:
        if c not in uniq:
            uniq.append(c)
    return uniq


def _extend(G, gens, vals, m):
    exps = {0: 0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for g, v in zip(gens, vals):
            y = G.mul(x, g)
            e = (exps[x] + v) % m
            if y in exps:
                if exps[y] != e:
                    return None
            else:
                exps[y] = e
                frontier.append(y)
    for i in range(G.order):
        for j in range(G.order):
            if (exps[i] + exps[j] - exps[G.mul(i, j)]) % m:
                return None
    return tuple(exps[i] for i in range(G.order))


def theta_bp(F: QuadField, chi: Character, on_class_group: bool = False) -> Fraction | int:
    """b_p = chi(p): the single ideal of norm p is the ramified prime.

    With ``on_class_group`` chi is a character of Cl(K) (diagnostic mode) and
    the value is returned as a root-of-unity exponent fraction converted to +-1
    when it is real.
    """
    if on_class_group:
        e = chi(F.class_group.index(F.p_form)) % chi.m
    else:
        e = chi(0)  # [p] lies in the identity coset of Delta
    if e == 0:
        return 1
    if 2 * e == chi.m:
        return -1
    return Fraction(e, chi.m)
