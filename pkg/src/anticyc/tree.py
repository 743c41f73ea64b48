"""The Bruhat-Tits tree of PGL2(Q_p) in lattice coordinates.

A vertex is the class of a lattice; its canonical representative is the
unique lattice ``L`` in the class with ``L`` inside ``Z_p^2`` but not inside
``p Z_p^2``.  It is stored as ``(a, b, c)`` meaning the columns of
``[[p^a, b], [0, p^c]]``, with ``0 <= b < p^a``.  The standard vertex is
``(0, 0, 0)`` and the distance to it is ``a + c``.

An oriented edge is a pair of adjacent vertices.  An end ``t`` of the tree is
identified with the line through ``(t, 1)`` (or ``(1, 0)`` for infinity), and
``U(e)`` is the set of ends reached from the target of ``e`` without crossing
``e``; matrices act on ends by Moebius transformations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PrecisionExhausted

Vertex = tuple  # (a, b, c)
Matrix = tuple  # ((m00, m01), (m10, m11))

V0: Vertex = (0, 0, 0)

__all__ = [
    "V0",
    "Disk",
    "vertex_matrix",
    "normalize",
    "normalize_matrix",
    "act",
    "children",
    "neighbors",
    "neighbor_moves",
    "edge_matrix",
    "distance",
    "parent",
    "path",
    "covering_at_level",
    "disk_of_vertex",
    "end_vertex",
    "mobius",
    "adj",
    "mat_mul",
]


def _v(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def mat_mul(X, Y):
    return (
        (X[0][0] * Y[0][0] + X[0][1] * Y[1][0], X[0][0] * Y[0][1] + X[0][1] * Y[1][1]),
        (X[1][0] * Y[0][0] + X[1][1] * Y[1][0], X[1][0] * Y[0][1] + X[1][1] * Y[1][1]),
    )


def adj(X):
    return ((X[1][1], -X[0][1]), (-X[1][0], X[0][0]))


def det(X):
    return X[0][0] * X[1][1] - X[0][1] * X[1][0]


def vertex_matrix(v: Vertex, p: int) -> Matrix:
    a, b, c = v
    return ((p**a, b), (0, p**c))


def normalize(cols, p: int, prec: int) -> Vertex:
    """Canonical vertex of the lattice spanned by 2-vectors ``cols`` (entries mod p^prec)."""
    M = p**prec
    cols = [(x % M, y % M) for x, y in cols]
    k = min(min(_v(x, p, prec), _v(y, p, prec)) for x, y in cols)
    if k >= prec:
        raise PrecisionExhausted("lattice indistinguishable from zero")
    if k:
        cols = [(x // p**k, y // p**k) for x, y in cols]
    r = prec - k
    M = p**r
    piv = min(range(len(cols)), key=lambda i: _v(cols[i][1], p, r))
    c = _v(cols[piv][1], p, r)
    if c >= r:
        raise PrecisionExhausted("bottom row indistinguishable from zero")
    px, py = cols[piv]
    uinv = pow(py // p**c, -1, M)
    rest = []
    for i, (x, y) in enumerate(cols):
        if i == piv:
            continue
        f = (y // p**c) * uinv
        rest.append((x - f * px) % M)
    a = min((_v(x, p, r) for x in rest), default=r)
    if a >= r - c:
        raise PrecisionExhausted("vertex too deep for the working precision")
    b = (px * uinv) % p**a
    return (a, b, c)


def normalize_matrix(m: Matrix, p: int, prec: int) -> Vertex:
    """Canonical vertex of the lattice spanned by the columns of m."""
    return normalize([(m[0][0], m[1][0]), (m[0][1], m[1][1])], p, prec)


def neighbor_moves(p: int):
    """Matrices n_0..n_p with g n_t spanning the p+1 index-p sublattices of g Z_p^2."""
    return [((p, i), (0, 1)) for i in range(p)] + [((1, 0), (0, p))]


def neighbors(v: Vertex, p: int) -> list[Vertex]:
    g = vertex_matrix(v, p)
    prec = v[0] + v[2] + 3
    return [normalize_matrix(mat_mul(g, n), p, prec) for n in neighbor_moves(p)]


def edge_matrix(v: Vertex, t: int, p: int) -> Matrix:
    """A matrix h with h(e0) = (v -> t-th neighbor), where e0 = (V0 -> (1, 0, 0))."""
    g = vertex_matrix(v, p)
    k = ((1, t), (0, 1)) if t < p else ((0, 1), (1, 0))
    return mat_mul(g, k)


def distance(v: Vertex) -> int:
    return v[0] + v[2]


def parent(v: Vertex, p: int) -> Vertex:
    """Neighbor of v one step closer to the standard vertex."""
    n = distance(v)
    if n == 0:
        raise ValueError("standard vertex has no parent")
    g = vertex_matrix(v, p)
    q = p ** (n - 1)
    cols = [(g[0][0], g[1][0]), (g[0][1], g[1][1]), (q, 0), (0, q)]
    return normalize(cols, p, n + 2)


def ray_to_root(v: Vertex, p: int) -> list[Vertex]:
    out = [v]
    while distance(out[-1]):
        out.append(parent(out[-1], p))
    return out


def path(u: Vertex, w: Vertex, p: int) -> list[Vertex]:
    """Geodesic u = x_0, ..., x_n = w."""
    ru, rw = ray_to_root(u, p), ray_to_root(w, p)
    su = set(ru)
    meet = next(x for x in rw if x in su)
    left = ru[: ru.index(meet) + 1]
    right = rw[: rw.index(meet)]
    return left + right[::-1]


def act(m: Matrix, v: Vertex, p: int, prec: int) -> Vertex:
    """Vertex m*v for an integer matrix m known mod p^prec."""
    return normalize_matrix(mat_mul(m, vertex_matrix(v, p)), p, prec)


def children(v: Vertex, p: int) -> list[Vertex]:
    n = distance(v)
    return [w for w in neighbors(v, p) if distance(w) == n + 1]


def covering_at_level(m: int, p: int) -> list[tuple[Vertex, Vertex]]:
    """The p^(m-1)(p+1) oriented edges from distance m-1 to distance m."""
    if m < 1:
        raise ValueError("level must be >= 1")
    layer = [V0]
    for _ in range(m - 1):
        layer = [w for v in layer for w in children(v, p)]
    return [(v, w) for v in layer for w in children(v, p)]


@dataclass(frozen=True)
class Disk:
    """Ends x with x in center + p^radius Z_p (chart 0) or 1/x in center + p^radius Z_p (chart 1)."""

    p: int
    chart: int
    center: int
    radius: int

    def contains(self, x) -> bool:
        """``x`` is a Fraction, an int, or None for infinity."""
        p = self.p
        if x is None:
            return self.chart == 1 and self.center % p**self.radius == 0
        x = Fraction(x)
        if self.chart == 1:
            if x == 0:
                return False
            x = 1 / x
        if _vfrac(x, p) < 0:
            return False
        M = p**self.radius
        return (x.numerator * pow(x.denominator, -1, M) - self.center) % M == 0

    def sample(self):
        """A rational end inside the disk (None for infinity)."""
        if self.chart == 0:
            return Fraction(self.center)
        return None if self.center == 0 else Fraction(1, self.center)


def _vfrac(x, p):
    if x == 0:
        return 10**9
    n, d = x.numerator, x.denominator
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def disk_of_vertex(v: Vertex, p: int) -> Disk:
    """U of the edge (parent(v) -> v): ends whose ray from V0 passes through v."""
    a, b, c = v
    if c == 0:
        return Disk(p, 0, b, a)
    n = a + c
    if a == 0:
        return Disk(p, 1, 0, n)
    return Disk(p, 1, (p**c * pow(b, -1, p**n)) % p**n, n)


def end_vertex(x, n: int, p: int) -> Vertex:
    """Vertex at distance n on the ray from V0 to the end x (Fraction or None)."""
    if n == 0:
        return V0
    M = p**n
    if x is not None:
        x = Fraction(x)
        if _vfrac(x, p) >= 0:
            t = x.numerator * pow(x.denominator, -1, M) % M
            return normalize([(t, 1), (M, 0), (0, M)], p, n + 2)
        x = 1 / x
    s = 0 if x is None else x.numerator * pow(x.denominator, -1, M) % M
    return normalize([(1, s), (M, 0), (0, M)], p, n + 2)


def mobius(m: Matrix, x):
    """Moebius action on P^1(Q) (None is infinity)."""
    (a, b), (c, d) = m
    if x is None:
        return None if c == 0 else Fraction(a, c)
    num, den = a * x + b, c * x + d
    return None if den == 0 else Fraction(num) / den
