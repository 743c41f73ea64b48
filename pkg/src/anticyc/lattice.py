"""Small exact lattice routines: Hermite forms, kernels modulo M, LLL,
Fincke-Pohst enumeration and 2-dimensional rational reconstruction."""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = [
    "hnf",
    "kernel_mod",
    "lll",
    "short_vectors",
    "vectors_of_norm",
    "rational_reconstruction",
    "quad_form",
    "rational_rref",
    "rational_nullspace",
    "primitive_integer_vector",
]


def hnf(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by ``rows`` (zero rows dropped)."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    out = []
    col = 0
    while A and col < ncols:
        nz = [r for r in A if r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for k in range(col, ncols):
                    r[k] -= q * piv[k]
            nz = [r for r in nz if r[col]]
        piv = nz[0]
        if piv[col] < 0:
            piv[:] = [-x for x in piv]
        A = [r for r in A if r is not piv and any(r)]
        out.append(piv)
        col += 1
    # reduce entries above pivots
    for i, r in enumerate(out):
        c = next(k for k, x in enumerate(r) if x)
        for j in range(i):
            q = out[j][c] // r[c]
            if q:
                out[j] = [a - q * b for a, b in zip(out[j], r)]
    return out


def kernel_mod(A: list[list[int]], M: int) -> list[list[int]]:
    """Basis of {x in Z^n : A x = 0 mod M} for an m x n integer matrix A."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    rows = []
    for i in range(n):
        rows.append([A[k][i] % M for k in range(m)] + [int(i == j) for j in range(n)])
    for k in range(m):
        rows.append([M * int(k == j) for j in range(m)] + [0] * n)
    for i in range(n):
        rows.append([0] * m + [M * int(i == j) for j in range(n)])
    H = hnf(rows)
    ker = [r[m:] for r in H if not any(r[:m])]
    return hnf(ker)


def quad_form(G, x) -> Fraction:
    n = len(x)
    return sum(G[i][j] * x[i] * x[j] for i in range(n) for j in range(n))


def _gram(B, G):
    n = len(B)
    return [[_ip(B[i], B[j], G) for j in range(n)] for i in range(n)]


def _ip(u, v, G):
    return sum(G[i][j] * u[i] * v[j] for i in range(len(u)) for j in range(len(v)) if u[i] and v[j])


def lll(B: list[list[int]], G=None, delta=Fraction(3, 4)) -> list[list[int]]:
    """LLL-reduce integer basis rows B for the inner product with Gram matrix G
    (the standard dot product when G is None)."""
    B = [list(b) for b in B]
    n = len(B)
    if n == 0:
        return B
    dim = len(B[0])
    if G is None:
        G = [[int(i == j) for j in range(dim)] for i in range(dim)]
    G = [[Fraction(x) for x in row] for row in G]

    def ip(u, v):
        return _ip(u, v, G)

    def gso():
        Bs, mu, Bn = [], [[Fraction(0)] * n for _ in range(n)], []
        for i in range(n):
            v = [Fraction(x) for x in B[i]]
            for j in range(i):
                mu[i][j] = ip(B[i], Bs[j]) / Bn[j]
                v = [a - mu[i][j] * b for a, b in zip(v, Bs[j])]
            Bs.append(v)
            Bn.append(ip(v, v))
        return Bs, mu, Bn

    Bs, mu, Bn = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                B[k] = [a - q * b for a, b in zip(B[k], B[j])]
                Bs, mu, Bn = gso()
        if Bn[k] >= (delta - mu[k][k - 1] ** 2) * Bn[k - 1]:
            k += 1
        else:
            B[k], B[k - 1] = B[k - 1], B[k]
            Bs, mu, Bn = gso()
            k = max(k - 1, 1)
    return B


def short_vectors(G, bound, basis=None) -> list[list[int]]:
    """All nonzero integer combinations x of ``basis`` rows (default: identity)
    with Q(x) <= bound, where Q is the positive definite form with Gram matrix G
    on the ambient space, as ambient coordinate vectors (x and -x both appear)."""
    dim = len(G)
    if basis is None:
        basis = [[int(i == j) for j in range(dim)] for i in range(dim)]
    B = lll(basis, G)
    Q = [[Fraction(x) for x in row] for row in _gram(B, G)]
    n = len(B)
    # Cholesky-style decomposition: Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2
    q = [row[:] for row in Q]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    bound = Fraction(bound)
    out = []
    x = [0] * n

    def rec(i, rem):
        c = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        r = math.sqrt(float(rem / q[i][i])) if rem > 0 else 0.0
        lo = math.floor(float(c) - r) - 1
        hi = math.ceil(float(c) + r) + 1
        for t in range(lo, hi + 1):
            val = q[i][i] * (t - c) ** 2
            if val > rem:
                continue
            x[i] = t
            if i == 0:
                if any(x):
                    out.append([sum(x[k] * B[k][d] for k in range(n)) for d in range(dim)])
            else:
                rec(i - 1, rem - val)
        x[i] = 0

    rec(n - 1, bound)
    return out


def vectors_of_norm(G, target, basis=None) -> list[list[int]]:
    """All lattice vectors x with Q(x) == target exactly."""
    return [v for v in short_vectors(G, target, basis) if quad_form(G, v) == target]


def rational_reconstruction(x: int, M: int, bound: int | None = None):
    """Find (a, b) with a = b*x mod M and |a|, |b| small, by 2-d Gauss reduction.

    Returns the shortest pair (a, b) with b > 0, or None when the shortest
    vector exceeds ``bound`` (default sqrt(M/2)).
    """
    if bound is None:
        bound = math.isqrt(M // 2)
    u, v = (M, 0), (x % M, 1)
    def n2(w):
        return w[0] * w[0] + w[1] * w[1]
    if n2(u) < n2(v):
        u, v = v, u
    while True:
        # v is the shorter vector
        if n2(v) == 0:
            return None
        t = round(Fraction(u[0] * v[0] + u[1] * v[1], n2(v)))
        w = (u[0] - t * v[0], u[1] - t * v[1])
        if n2(w) >= n2(v):
            break
        u, v = v, w
    a, b = v
    if b < 0:
        a, b = -a, -b
    if b == 0 or max(abs(a), abs(b)) > bound:
        return None
    return a, b


def rational_rref(rows):
    """Reduced row echelon form over Q; returns (rref rows, pivot columns)."""
    A = [[Fraction(x) for x in r] for r in rows]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][c]
        A[r] = [x / pv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rational_nullspace(rows, ncols: int) -> list[list[Fraction]]:
    """Basis of {x in Q^ncols : rows . x = 0}."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    R, pivots = rational_rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][f]
        out.append(v)
    return out


def primitive_integer_vector(v) -> list[int]:
    """Scale a rational vector to coprime integers with positive first nonzero entry."""
    den = 1
    for x in v:
        den = math.lcm(den, Fraction(x).denominator)
    w = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in w:
        g = math.gcd(g, x)
    if g == 0:
        return w
    w = [x // g for x in w]
    first = next(x for x in w if x)
    return [-x for x in w] if first < 0 else w
