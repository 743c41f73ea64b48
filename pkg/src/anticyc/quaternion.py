"""Definite quaternion algebras over Q, Eichler orders, local splittings
and orientations."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .classfield import factorint
from .errors import BadDiscriminant, LevelNotCoprime, PrecisionExhausted
from .lattice import hnf, kernel_mod, vectors_of_norm
from .padic import PadicNumber, Qp

__all__ = [
    "Quat",
    "QuatAlgebra",
    "EichlerOrder",
    "SplittingMap",
    "hilbert_symbol",
    "build_algebra",
    "eichler_order",
    "split_at_p",
    "norm_form_enumerate",
    "mat_mul_mod",
]


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def hilbert_symbol(a: int, b: int, p: int) -> int:
    """Hilbert symbol (a, b)_p for nonzero integers a, b and a prime p."""
    al, be = 0, 0
    while a % p == 0:
        a //= p
        al += 1
    while b % p == 0:
        b //= p
        be += 1
    if p != 2:
        s = (-1) ** (al * be * ((p - 1) // 2))
        if be % 2:
            s *= _legendre(a, p)
        if al % 2:
            s *= _legendre(b, p)
        return s
    eps = lambda u: ((u - 1) // 2) % 2
    om = lambda u: ((u * u - 1) // 8) % 2
    e = eps(a) * eps(b) + al * om(b) + be * om(a)
    return -1 if e % 2 else 1


class Quat:
    """Element x0 + x1 i + x2 j + x3 k of the algebra (a, b)_Q with rational coordinates."""

    __slots__ = ("A", "c")

    def __init__(self, A: "QuatAlgebra", c):
        self.A = A
        self.c = tuple(Fraction(x) for x in c)

    def __add__(self, o):
        return Quat(self.A, [x + y for x, y in zip(self.c, o.c)])

    def __sub__(self, o):
        return Quat(self.A, [x - y for x, y in zip(self.c, o.c)])

    def __neg__(self):
        return Quat(self.A, [-x for x in self.c])

    def scale(self, t) -> "Quat":
        return Quat(self.A, [t * x for x in self.c])

    def __mul__(self, o):
        if not isinstance(o, Quat):
            return self.scale(o)
        a, b = self.A.a, self.A.b
        x0, x1, x2, x3 = self.c
        y0, y1, y2, y3 = o.c
        return Quat(
            self.A,
            (
                x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
                x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
                x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
                x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
            ),
        )

    __rmul__ = scale

    def conj(self) -> "Quat":
        x0, x1, x2, x3 = self.c
        return Quat(self.A, (x0, -x1, -x2, -x3))

    def nrd(self) -> Fraction:
        a, b = self.A.a, self.A.b
        x0, x1, x2, x3 = self.c
        return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3

    def trd(self) -> Fraction:
        return 2 * self.c[0]

    def inverse(self) -> "Quat":
        return self.conj().scale(1 / self.nrd())

    def is_integral(self) -> bool:
        return self.trd().denominator == 1 and self.nrd().denominator == 1

    def __eq__(self, o):
        return isinstance(o, Quat) and self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return "Quat" + repr(tuple(str(x) for x in self.c))


@dataclass(frozen=True)
class QuatAlgebra:
    """B = (a, b)_Q, definite when a, b < 0."""

    a: int
    b: int
    disc: int

    def __call__(self, *c) -> Quat:
        if len(c) == 1:
            c = tuple(c[0]) if isinstance(c[0], (tuple, list)) else (c[0], 0, 0, 0)
        return Quat(self, c)

    @property
    def definite(self) -> bool:
        return self.a < 0 and self.b < 0

    def ramified_primes(self) -> list[int]:
        cands = set(factorint(2 * self.a * self.b))
        return sorted(q for q in cands if hilbert_symbol(self.a, self.b, q) == -1)


def _squarefree(n):
    return all(e == 1 for e in factorint(n).values())


def build_algebra(N_minus: int) -> QuatAlgebra:
    """Definite algebra ramified exactly at the primes of N_minus (and infinity)."""
    fac = factorint(N_minus)
    if N_minus < 1 or any(e > 1 for e in fac.values()) or len(fac) % 2 == 0:
        raise BadDiscriminant(f"N-={N_minus} needs to be squarefree with an odd number of prime factors")
    target = sorted(fac)
    M = 1
    while True:
        for A in range(1, M + 1):
            if not (_squarefree(A) and _squarefree(M)):
                continue
            if QuatAlgebra(-A, -M, N_minus).ramified_primes() == target:
                return QuatAlgebra(-A, -M, N_minus)
        M += 1


# -- lattices of quaternions ------------------------------------------------

def _lattice_basis(A: QuatAlgebra, elems) -> list[Quat]:
    den = 1
    for e in elems:
        for x in e.c:
            den = math.lcm(den, x.denominator)
    rows = [[int(x * den) for x in e.c] for e in elems]
    H = hnf(rows)
    return [Quat(A, [Fraction(v, den) for v in r]) for r in H]


def _disc(basis) -> int:
    T = [[(x * y).trd() for y in basis] for x in basis]
    d = abs(_det(T))
    r = math.isqrt(int(d))
    if r * r != d:
        raise ValueError("not an order")
    return r


def _det(M):
    n = len(M)
    M = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return det


def _ring_closure(A, basis):
    """Smallest ring containing the lattice (None if it contains non-integral elements)."""
    cur = _lattice_basis(A, basis)
    for _ in range(20):
        if not all(x.is_integral() for x in cur):
            return None
        prods = [x * y for x in cur for y in cur]
        new = _lattice_basis(A, cur + prods)
        if len(new) == len(cur) and all(x == y for x, y in zip(new, cur)):
            return cur
        cur = new
    return None


def maximal_order(A: QuatAlgebra) -> list[Quat]:
    """A maximal order, by saturating Z<1, i, j, k> one prime at a time."""
    basis = [A(1), A(0, 1, 0, 0), A(0, 0, 1, 0), A(0, 0, 0, 1)]
    d = _disc(basis)
    while d != A.disc:
        ratio = d // A.disc
        ell = min(factorint(ratio))
        improved = False
        for cs in itertools.product(range(ell), repeat=4):
            if not any(cs):
                continue
            x = sum((b.scale(Fraction(c, ell)) for b, c in zip(basis, cs)), A(0))
            if not x.is_integral():
                continue
            new = _ring_closure(A, basis + [x])
            if new is None:
                continue
            nd = _disc(new)
            if nd < d:
                basis, d, improved = new, nd, True
                break
        if not improved:
            raise RuntimeError("saturation stalled")
    return _normalize_basis(A, basis)


def _normalize_basis(A, basis):
    """Reorder/transform so that the first basis element is 1."""
    den = 1
    for e in basis:
        for x in e.c:
            den = math.lcm(den, x.denominator)
    rows = [[int(x * den) for x in e.c] for e in basis]
    # coordinates of 1 in this basis
    one = [den, 0, 0, 0]
    coeffs = _solve_rational(rows, one)
    U = _complete_unimodular([int(c) for c in coeffs])
    return [sum((basis[k].scale(U[r][k]) for k in range(4)), A(0)) for r in range(4)]


def _solve_rational(rows, target):
    """Solve sum_k c_k rows[k] = target over Q (square system)."""
    n = len(rows)
    M = [[Fraction(rows[k][i]) for k in range(n)] + [Fraction(target[i])] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]


def _complete_unimodular(v):
    """A unimodular integer matrix whose first row is the primitive vector v."""
    n = len(v)
    # column operations reducing v to e_1, tracked on the identity
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    w = list(v)
    while sum(1 for x in w if x) > 1 or w[0] == 0:
        nz = [i for i in range(n) if w[i]]
        i0 = min(nz, key=lambda i: abs(w[i]))
        for i in nz:
            if i != i0:
                q = w[i] // w[i0]
                w[i] -= q * w[i0]
                for r in range(n):
                    U[r][i] -= q * U[r][i0]
        if sum(1 for x in w if x) == 1 and w[0] == 0:
            i = next(i for i in range(n) if w[i])
            w[0], w[i] = w[i], w[0]
            for r in range(n):
                U[r][0], U[r][i] = U[r][i], U[r][0]
    if w[0] < 0:
        for r in range(n):
            U[r][0] = -U[r][0]
    # v * U = e_1, so rows of U^{-1} form a basis with first row v
    return _int_inverse(U)


def _int_inverse(U):
    n = len(U)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(U)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [[int(x) for x in row[n:]] for row in M]


# -- local splittings ---------------------------------------------------------

def mat_mul_mod(X, Y, M):
    return (
        ((X[0][0] * Y[0][0] + X[0][1] * Y[1][0]) % M, (X[0][0] * Y[0][1] + X[0][1] * Y[1][1]) % M),
        ((X[1][0] * Y[0][0] + X[1][1] * Y[1][0]) % M, (X[1][0] * Y[0][1] + X[1][1] * Y[1][1]) % M),
    )


def _is_square_qp(x: Fraction, ell: int) -> bool:
    if x == 0:
        return True
    num, den = x.numerator, x.denominator
    v = 0
    while num % ell == 0:
        num //= ell
        v += 1
    while den % ell == 0:
        den //= ell
        v -= 1
    if v % 2:
        return False
    u = num * den
    if ell == 2:
        return u % 8 == 1
    return _legendre(u, ell) == 1


def _pmat(F, rows, prec):
    return [[F(x, 0, prec) if not isinstance(x, PadicNumber) else x for x in r] for r in rows]


def _pmul(X, Y):
    return [[X[i][0] * Y[0][j] + X[i][1] * Y[1][j] for j in range(2)] for i in range(2)]


def _local_splitting(A: QuatAlgebra, basis, ell: int, prec: int):
    """Integer matrices mod ell**prec of a splitting carrying the order onto M2(Z_ell)."""
    work = prec + 30
    Q = Qp(ell)
    a, b = A.a, A.b
    sol = None
    for t in range(0, 4):
        for r in range(0, 4 * ell * ell + 2):
            y = Fraction(r, ell**t)
            if _is_square_qp(Fraction(b) + a * y * y, ell):
                sol = y
                break
        if sol is not None:
            break
    if sol is None:
        raise ValueError(f"algebra not split at {ell}")
    y = Q(sol, 0, work)
    val = Fraction(b) + a * sol * sol
    x = Q(val, 0, work).sqrt() if val else Q.zero(work)
    I = _pmat(Q, [[0, 1], [a, 0]], work)
    J = [[x, y], [-(y.mul_int(a)), -x]]
    K = _pmul(I, J)
    one = _pmat(Q, [[1, 0], [0, 1]], work)

    def phi(q: Quat):
        c = q.c
        return [
            [one[i][j] * c[0] + I[i][j] * c[1] + J[i][j] * c[2] + K[i][j] * c[3] for j in range(2)]
            for i in range(2)
        ]

    imgs = [phi(e) for e in basis]
    vecs = []
    for m in imgs:
        for col in range(2):
            vecs.append([m[0][col], m[1][col]])
    g = _zl_span(vecs)
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    gi = [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]]
    M = ell**prec
    out = []
    for m in imgs:
        c = _pmul(_pmul(gi, m), g)
        row = []
        for rr in c:
            r2 = []
            for z in rr:
                if z.prec < prec:
                    raise PrecisionExhausted(f"splitting at {ell} lost precision")
                if z.valuation() < 0:
                    raise ValueError("splitting not integral")
                r2.append(z.lift_int() % M)
            row.append(tuple(r2))
        out.append(tuple(row))
    return out


def _zl_span(vecs):
    """Columns (w1, w2) of a Z_ell-basis of the span of the given vectors in Q_ell^2."""
    vecs = [v for v in vecs if not (v[0].is_zero() and v[1].is_zero())]
    w1 = min(vecs, key=lambda v: v[0].valuation())
    rest = []
    for v in vecs:
        if v is w1:
            continue
        f = v[0] / w1[0]
        rest.append(v[1] - f * w1[1])
    w2 = min((r for r in rest if not r.is_zero()), key=lambda r: r.valuation())
    zero = w2.F.zero(w2.prec)
    return [[w1[0], zero], [w1[1], w2]]


@dataclass(frozen=True)
class SplittingMap:
    """Images of the order basis in M2(Z/p^prec)."""

    p: int
    prec: int
    images: tuple

    @property
    def modulus(self) -> int:
        return self.p**self.prec

    def __call__(self, v) -> tuple:
        M = self.modulus
        m = [[0, 0], [0, 0]]
        for c, img in zip(v, self.images):
            if c:
                for i in range(2):
                    for j in range(2):
                        m[i][j] += c * img[i][j]
        return ((m[0][0] % M, m[0][1] % M), (m[1][0] % M, m[1][1] % M))


def _solve_mod(M, v, ell):
    """Solve M x = v over F_ell for square invertible M."""
    n = len(M)
    A = [[x % ell for x in row] + [v[i] % ell] for i, row in enumerate(M)]
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c])
        A[c], A[piv] = A[piv], A[c]
        inv = pow(A[c][c], -1, ell)
        A[c] = [x * inv % ell for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [(x - f * y) % ell for x, y in zip(A[r], A[c])]
    return [A[i][n] for i in range(n)]


@dataclass(frozen=True)
class Orientation:
    """Ring map from the order to Z/ell^e (ell | N+) or to F_ell[z]/(z^2 - t z + n) (ell | N-).

    Stored as the images of the basis; the map is Z-linear.
    """

    ell: int
    kind: str  # "plus" or "minus"
    modulus: int
    images: tuple  # ints (plus) or (alpha, beta) pairs (minus)
    minpoly: tuple = (0, 0)  # (t, n) for kind == "minus"

    def __call__(self, v):
        M = self.modulus
        if self.kind == "plus":
            return sum(c * x for c, x in zip(v, self.images)) % M
        al = sum(c * x[0] for c, x in zip(v, self.images)) % M
        be = sum(c * x[1] for c, x in zip(v, self.images)) % M
        return (al, be)

    def mul(self, x, y):
        M = self.modulus
        if self.kind == "plus":
            return x * y % M
        t, n = self.minpoly
        a, b = x
        c, d = y
        bd = b * d
        return ((a * c - n * bd) % M, (a * d + b * c + t * bd) % M)

    def roots(self, T: int, N: int):
        """Roots of X^2 - T X + N in the target ring, sorted."""
        M = self.modulus
        if self.kind == "plus":
            return sorted(r for r in range(M) if (r * r - T * r + N) % M == 0)
        out = []
        for a in range(M):
            for b in range(M):
                sq = self.mul((a, b), (a, b))
                val = ((sq[0] - T * a + N) % M, (sq[1] - T * b) % M)
                if val == (0, 0):
                    out.append((a, b))
        return sorted(out)


class EichlerOrder:
    """Z-basis of an Eichler order of level N+ in the algebra of discriminant N-.

    Elements are integer coordinate vectors in ``basis``; basis[0] = 1.  The
    Z[1/p]-order R is handled by callers as pairs (vector, power of p).
    """

    def __init__(self, alg: QuatAlgebra, basis: list[Quat], level: int, p: int):
        self.alg = alg
        self.basis = tuple(basis)
        self.level = level
        self.p = p
        self._splits: dict = {}
        den = 1
        for e in basis:
            for x in e.c:
                den = math.lcm(den, x.denominator)
        self._den = den
        self._inv = _int_inverse_frac([[x for x in e.c] for e in basis])
        self.mult = tuple(
            tuple(tuple(self.coords(x * y)) for y in basis) for x in basis
        )
        self.gram = tuple(
            tuple((x * y.conj()).trd() / 2 for y in basis) for x in basis
        )
        self.conj_matrix = tuple(tuple(self.coords(x.conj())) for x in basis)
        self.orientations = self._build_orientations()

    @property
    def N_minus(self) -> int:
        return self.alg.disc

    def quat(self, v) -> Quat:
        return Quat(self.alg, [sum(Fraction(c) * e.c[i] for c, e in zip(v, self.basis)) for i in range(4)])

    def coords(self, q: Quat, exact: bool = True):
        r = [sum(q.c[i] * self._inv[i][k] for i in range(4)) for k in range(4)]
        if exact:
            if any(x.denominator != 1 for x in r):
                raise ValueError("element not in the order")
            return [int(x) for x in r]
        return r

    def contains(self, q: Quat) -> bool:
        return all(x.denominator == 1 for x in self.coords(q, exact=False))

    def mul(self, u, v):
        out = [0, 0, 0, 0]
        C = self.mult
        for i in range(4):
            if not u[i]:
                continue
            for j in range(4):
                if not v[j]:
                    continue
                f = u[i] * v[j]
                c = C[i][j]
                out[0] += f * c[0]
                out[1] += f * c[1]
                out[2] += f * c[2]
                out[3] += f * c[3]
        return out

    def conj(self, v):
        out = [0, 0, 0, 0]
        for i in range(4):
            if v[i]:
                for k in range(4):
                    out[k] += v[i] * self.conj_matrix[i][k]
        return out

    def nrd(self, v) -> int:
        G = self.gram
        return int(sum(G[i][j] * v[i] * v[j] for i in range(4) for j in range(4) if v[i] and v[j]))

    def trd(self, v) -> int:
        return int(sum(c * e.trd() for c, e in zip(v, self.basis)))

    @cached_property
    def discriminant(self) -> int:
        return _disc(list(self.basis))

    def splitting(self, ell: int, prec: int) -> SplittingMap:
        """iota_ell mod ell^prec carrying the maximal order containing this one onto M2(Z_ell)
        (for ell | N+, onto the standard Eichler order of upper triangular-mod-ell^e matrices)."""
        for (l2, pr), S in self._splits.items():
            if l2 == ell and pr >= prec:
                return SplittingMap(ell, prec, tuple(_reduce_mat(m, ell**prec) for m in S.images))
        imgs = _local_splitting(self.alg, list(self.basis), ell, prec)
        if self.level % ell == 0:
            imgs = _eichler_normalize(imgs, ell, prec, vp_int(self.level, ell))
        S = SplittingMap(ell, prec, tuple(imgs))
        self._splits[(ell, prec)] = S
        return S

    def _build_orientations(self):
        out = {}
        for ell in sorted(factorint(self.level)):
            e = vp_int(self.level, ell)
            S = self.splitting(ell, e)
            out[ell] = Orientation(ell, "plus", ell**e, tuple(m[0][0] for m in S.images))
        for ell in sorted(factorint(self.N_minus)):
            out[ell] = _minus_orientation(self, ell)
        return out

    def unit_group(self) -> list[list[int]]:
        return norm_form_enumerate(self, 1)

    def __repr__(self):
        return f"EichlerOrder(N-={self.N_minus}, N+={self.level}, basis={list(self.basis)})"


def vp_int(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _reduce_mat(m, M):
    return ((m[0][0] % M, m[0][1] % M), (m[1][0] % M, m[1][1] % M))


def _int_inverse_frac(rows):
    n = len(rows)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def _eichler_normalize(imgs, ell, prec, e):
    """Conjugate a splitting of an Eichler order of level ell^e by a matrix in GL2(Z_ell)
    so that its image is upper triangular mod ell^e."""
    M = ell**prec
    Me = ell**e
    # the order fixes a unique line in (Z/ell^e)^2; move it to the first basis vector
    lines = [((1, t), ((1, 0), (t, 1))) for t in range(Me)]
    lines += [((ell * t, 1), ((ell * t, 1), (1, 0))) for t in range(Me // ell)]
    for v, g in lines:
        if all((((m[0][0] * v[0] + m[0][1] * v[1]) * v[1] - (m[1][0] * v[0] + m[1][1] * v[1]) * v[0]) % Me == 0)
               for m in imgs):
            det = (g[0][0] * g[1][1] - g[0][1] * g[1][0]) % M
            di = pow(det, -1, M)
            gi = ((g[1][1] * di % M, -g[0][1] * di % M), (-g[1][0] * di % M, g[0][0] * di % M))
            return [mat_mul_mod(mat_mul_mod(gi, m, M), g, M) for m in imgs]
    raise ValueError("no stable line: order is not Eichler at this prime")


def _minus_orientation(O: EichlerOrder, ell: int) -> Orientation:
    # radical of O/ell O: elements of norm divisible by ell
    if ell == 2:
        rad = [v for v in itertools.product(range(2), repeat=4) if O.nrd(list(v)) % 2 == 0]
        basis_rad = _fp_basis([list(v) for v in rad if any(v)], 2)
    else:
        T = [[(x * y).trd() for y in O.basis] for x in O.basis]
        basis_rad = kernel_basis_fp([[int(x) % ell for x in row] for row in T], ell)
    assert len(basis_rad) == 2, basis_rad
    one = [1, 0, 0, 0]
    z = None
    for k in range(1, 4):
        cand = [int(i == k) for i in range(4)]
        if _fp_rank([one, cand] + basis_rad, ell) == 4:
            z = cand
            break
    if z is None:
        for cand in itertools.product(range(ell), repeat=4):
            if _fp_rank([one, list(cand)] + basis_rad, ell) == 4:
                z = list(cand)
                break
    t, n = O.trd(z) % ell, O.nrd(z) % ell
    cols = [one, z] + basis_rad
    Mt = [[cols[c][r] for c in range(4)] for r in range(4)]
    images = []
    for k in range(4):
        sol = _solve_mod(Mt, [int(i == k) for i in range(4)], ell)
        images.append((sol[0], sol[1]))
    return Orientation(ell, "minus", ell, tuple(images), (t, n))


def kernel_basis_fp(M, ell):
    """Basis of the right kernel {x : M x = 0} over F_ell."""
    n = len(M[0])
    A = [[x % ell for x in row] for row in M]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, ell)
        A[r] = [x * inv % ell for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % ell for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    out = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-A[i][f]) % ell
        out.append(v)
    return out


def _fp_rank(rows, ell):
    A = [[x % ell for x in r] for r in rows]
    rank = 0
    ncols = len(A[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, ell)
        A[rank] = [x * inv % ell for x in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % ell for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def _fp_basis(vecs, ell):
    out = []
    for v in vecs:
        if _fp_rank(out + [v], ell) > len(out):
            out.append(v)
    return out


def eichler_order(A: QuatAlgebra, N_plus: int, p: int) -> EichlerOrder:
    if math.gcd(N_plus, p * A.disc) != 1:
        raise LevelNotCoprime(f"N+={N_plus} shares a factor with p*N-={p * A.disc}")
    basis = maximal_order(A)
    O = EichlerOrder(A, basis, 1, p)
    for ell, e in sorted(factorint(N_plus).items()):
        S = O.splitting(ell, e)
        rows = [[m[1][0] for m in S.images]]
        ker = kernel_mod(rows, ell**e)
        new = [sum((O.basis[k].scale(r[k]) for k in range(4)), A(0)) for r in ker]
        new = _normalize_basis(A, new)
        O = EichlerOrder(A, new, O.level * ell**e, p)
    return O


def split_at_p(O: EichlerOrder, p: int, prec: int) -> SplittingMap:
    if O.N_minus % p == 0:
        raise ValueError("p divides N-")
    return O.splitting(p, prec)


def norm_form_enumerate(O: EichlerOrder, m: int) -> list[list[int]]:
    """All order elements of reduced norm m (both signs)."""
    return vectors_of_norm(O.gram, m)
