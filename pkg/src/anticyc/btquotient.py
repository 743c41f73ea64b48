"""The finite quotient of the Bruhat-Tits tree by Gamma, the norm-one
elements of the Z[1/p]-order R modulo +-1.

A Gamma element is stored as ``(y, j)`` for ``y`` in the Eichler Z-order with
reduced norm ``p^(2j)``; it stands for ``y / p^j`` and acts on the tree
through the splitting ``iota`` (the scalar ``p^j`` acts trivially).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateDomain, DepthExceeded, InfiniteOrder, OrbitIncomplete
from .lattice import kernel_mod, vectors_of_norm
from .quaternion import EichlerOrder, SplittingMap
from .tree import (
    V0,
    Vertex,
    act,
    adj,
    distance,
    edge_matrix,
    mat_mul,
    neighbors,
    path,
    vertex_matrix,
)

__all__ = [
    "GammaElt",
    "QuotientGraph",
    "build_quotient",
    "mass",
    "ends_fundamental_domain",
    "involution_domain",
    "atkin_lehner_action",
]


@dataclass(frozen=True)
class GammaElt:
    """y / p^j with nrd(y) = p^(2j); sign-normalized so that the first nonzero coordinate is positive."""

    y: tuple
    j: int

    @staticmethod
    def make(y, j, p) -> "GammaElt":
        y = list(y)
        while j > 0 and all(c % p == 0 for c in y):
            y = [c // p for c in y]
            j -= 1
        first = next(c for c in y if c)
        if first < 0:
            y = [-c for c in y]
        return GammaElt(tuple(y), j)


IDENTITY = GammaElt((1, 0, 0, 0), 0)


def mass(N_minus: int, N_plus: int) -> Fraction:
    """Sum over classes of 1/|O^x/+-1| for Eichler orders of level N+ (exact)."""
    from .classfield import factorint

    m = Fraction(1, 12)
    for ell in factorint(N_minus):
        m *= ell - 1
    for ell, e in factorint(N_plus).items():
        m *= (ell + 1) * ell ** (e - 1)
    return m


class QuotientGraph:
    """Gamma \\ T with vertex and oriented-edge representatives.

    Vertex representative ``i`` is a tree vertex ``vertices[i]``.  Edge
    representative ``k`` is the tree edge ``(vertices[src], t-th neighbor)``
    stored as ``edges[k] = (src, t)``.  For every representative vertex and
    each of its p+1 neighbors, ``nbr_table[i][t] = (k, g)`` with ``g`` in
    Stab(vertices[i]) carrying that edge onto edge representative ``k``.
    """

    def __init__(self, order: EichlerOrder, p: int, prec: int, depth_limit: int = 12):
        self.O = order
        self.p = p
        self.prec = prec
        self.depth_limit = depth_limit
        self.iota: SplittingMap = order.splitting(p, prec)
        self._basis_mats = self.iota.images
        self.vertices: list[Vertex] = []
        self.vstab: list[list[GammaElt]] = []
        self.edges: list[tuple[int, int]] = []
        self.estab: list[list[GammaElt]] = []
        self.nbr_table: list[list[tuple[int, GammaElt]]] = []
        self.edge_target: list[tuple[int, GammaElt]] = []  # (vertex rep, g) with g(target) = rep
        self.opposite: list[int] = []
        self._reduce_cache: dict = {}

    # -- group elements ---------------------------------------------------
    def matrix(self, g: GammaElt):
        return self.iota(g.y)

    def compose(self, g2: GammaElt, g1: GammaElt) -> GammaElt:
        """g2 o g1."""
        return GammaElt.make(self.O.mul(list(g2.y), list(g1.y)), g1.j + g2.j, self.p)

    def inverse(self, g: GammaElt) -> GammaElt:
        return GammaElt.make(self.O.conj(list(g.y)), g.j, self.p)

    def act_vertex(self, g: GammaElt, v: Vertex) -> Vertex:
        return act(self.matrix(g), v, self.p, self.prec)

    def quat(self, g: GammaElt):
        return self.O.quat(g.y).scale(Fraction(1, self.p**g.j))

    # -- lattice searches -------------------------------------------------
    def transporters(self, u: Vertex, v: Vertex) -> list[tuple]:
        """All y in the Z-order (both signs) with y u = v and nrd(y) = p^(d(u)+d(v))."""
        du, dv = distance(u), distance(v)
        if (du + dv) % 2:
            return []
        e = du + dv
        if e + 2 > self.prec:
            raise DepthExceeded(f"precision {self.prec} too small for distance {e}")
        gu = vertex_matrix(u, self.p)
        av = adj(vertex_matrix(v, self.p))
        Me = self.p**e
        rows = [[0] * 4 for _ in range(4)]
        for k, m in enumerate(self._basis_mats):
            t = mat_mul(mat_mul(av, m), gu)
            for r in range(2):
                for s in range(2):
                    rows[2 * r + s][k] = t[r][s] % Me
        lat = kernel_mod(rows, Me) if e else None
        sols = vectors_of_norm(self.O.gram, self.p**e, lat)
        return sorted(tuple(s) for s in sols)

    def equivalence(self, u: Vertex, v: Vertex) -> GammaElt | None:
        sols = self.transporters(u, v)
        if not sols:
            return None
        return GammaElt.make(max(sols), (distance(u) + distance(v)) // 2, self.p)

    def stabilizer(self, v: Vertex) -> list[GammaElt]:
        sols = self.transporters(v, v)
        out = {GammaElt.make(s, distance(v), self.p) for s in sols}
        return sorted(out, key=lambda g: (g != IDENTITY, g.j, g.y))

    # -- building ----------------------------------------------------------
    def _neighbor_index(self, i: int, w: Vertex) -> int:
        nb = neighbors(self.vertices[i], self.p)
        return nb.index(w)

    def reduce_vertex(self, x: Vertex) -> tuple[int, GammaElt]:
        """(i, g) with g x = vertices[i]."""
        hit = self._reduce_cache.get(x)
        if hit is not None:
            return hit
        for i, v in enumerate(self.vertices):
            if (distance(v) - distance(x)) % 2:
                continue
            g = self.equivalence(x, v)
            if g is not None:
                self._reduce_cache[x] = (i, g)
                return i, g
        raise OrbitIncomplete(f"vertex {x} matches no representative")

    def _try_reduce(self, x):
        try:
            return self.reduce_vertex(x)
        except OrbitIncomplete:
            return None

    def build(self) -> "QuotientGraph":
        p = self.p
        self._add_vertex(V0)
        queue = [0]
        while queue:
            i = queue.pop(0)
            v = self.vertices[i]
            nb = neighbors(v, p)
            stab = self.vstab[i]
            # orbits of Stab(v) on the neighbors
            orbit_of = {}
            table: list = [None] * (p + 1)
            for t in range(p + 1):
                if t in orbit_of:
                    continue
                k = len(self.edges)
                self.edges.append((i, t))
                fixing = []
                for g in stab:
                    w = self.act_vertex(g, nb[t])
                    s = nb.index(w)
                    if s == t:
                        fixing.append(g)
                    if s not in orbit_of:
                        orbit_of[s] = k
                        # g maps t to s, so g^-1 maps s to the representative t
                        table[s] = (k, self.inverse(g))
                self.estab.append(fixing)
                orbit_of[t] = k
                table[t] = (k, IDENTITY)
            self.nbr_table.append(table)
            for t in range(p + 1):
                k, g = table[t]
                if self.edges[k][1] != t:
                    continue
                w = nb[t]
                hit = self._try_reduce(w)
                if hit is None:
                    if distance(w) > self.depth_limit:
                        raise DepthExceeded(f"quotient did not close within depth {self.depth_limit}")
                    j = self._add_vertex(w)
                    queue.append(j)
                    hit = (j, IDENTITY)
        # targets and opposite edges
        self.edge_target = []
        for k, (i, t) in enumerate(self.edges):
            w = neighbors(self.vertices[i], p)[t]
            self.edge_target.append(self.reduce_vertex(w))
        for k, (i, t) in enumerate(self.edges):
            j, g = self.edge_target[k]
            back = self.act_vertex(g, self.vertices[i])
            s = self._neighbor_index(j, back)
            self.opposite.append(self.nbr_table[j][s][0])
        return self

    def _add_vertex(self, v: Vertex) -> int:
        self.vertices.append(v)
        self.vstab.append(self.stabilizer(v))
        self._reduce_cache[v] = (len(self.vertices) - 1, IDENTITY)
        return len(self.vertices) - 1

    # -- queries -------------------------------------------------------------
    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def w_vertex(self, i: int) -> int:
        return len(self.vstab[i])

    def w_edge(self, k: int) -> int:
        return len(self.estab[k])

    def vertex_parity(self, i: int) -> int:
        return distance(self.vertices[i]) % 2

    def edge_source(self, k: int) -> int:
        return self.edges[k][0]

    def edge_tree(self, k: int) -> tuple[Vertex, Vertex]:
        i, t = self.edges[k]
        v = self.vertices[i]
        return v, neighbors(v, self.p)[t]

    def edge_matrix(self, k: int):
        i, t = self.edges[k]
        return edge_matrix(self.vertices[i], t, self.p)

    def reduce_edge(self, src: Vertex, tgt: Vertex) -> tuple[int, GammaElt]:
        """(k, g) with g (src -> tgt) = edge representative k."""
        i, g1 = self.reduce_vertex(src)
        w = self.act_vertex(g1, tgt)
        t = self._neighbor_index(i, w)
        k, g2 = self.nbr_table[i][t]
        return k, self.compose(g2, g1)

    def out_edges(self, i: int) -> list[int]:
        return sorted({k for k, _ in self.nbr_table[i]})

    def mass_by_parity(self) -> tuple[Fraction, Fraction]:
        even = sum((Fraction(1, self.w_vertex(i)) for i in range(self.num_vertices) if self.vertex_parity(i) == 0), Fraction(0))
        odd = sum((Fraction(1, self.w_vertex(i)) for i in range(self.num_vertices) if self.vertex_parity(i) == 1), Fraction(0))
        return even, odd

    def atkin_lehner(self) -> GammaElt:
        """An element of the Z-order of reduced norm p (it normalizes Gamma)."""
        sols = vectors_of_norm(self.O.gram, self.p)
        if not sols:
            raise ValueError("no element of norm p")
        return GammaElt(tuple(max(tuple(s) for s in sols)), 0)

    def check_closure(self) -> bool:
        """Every neighbor of every representative reduces to a representative consistently."""
        for i, v in enumerate(self.vertices):
            for t, w in enumerate(neighbors(v, self.p)):
                k, g = self.nbr_table[i][t]
                if self.act_vertex(g, v) != v:
                    return False
                src, tgt = self.edge_tree(k)
                if self.act_vertex(g, w) != tgt:
                    return False
        return True


def build_quotient(order: EichlerOrder, p: int, depth_limit: int = 12, prec: int | None = None) -> QuotientGraph:
    if prec is None:
        prec = 4 * depth_limit + 10
    return QuotientGraph(order, p, prec, depth_limit).build()


# -- fundamental domains for finite-order elements ---------------------------


def _is_scalar_mod(m, p, prec) -> bool:
    M = p**prec
    (a, b), (c, d) = m
    return b % M == 0 and c % M == 0 and (a - d) % M == 0


def matrix_order(m, p: int, prec: int, max_order: int = 6) -> int:
    """Order of m in PGL2 (checked mod p^prec); InfiniteOrder beyond ``max_order``."""
    x = m
    for n in range(1, max_order + 1):
        if _is_scalar_mod(x, p, prec):
            return n
        x = mat_mul(x, m)
    raise InfiniteOrder(f"no power up to {max_order} is scalar")


def ends_fundamental_domain(v: Vertex, gamma, p: int, prec: int) -> list[tuple[Vertex, Vertex]]:
    """Oriented edges leaving the geodesic from v to gamma v, the path edges excluded.

    Their disks U(e) cover P^1(Q_p); this is the edge set used for the
    telescoping identity of the central value.
    """
    order = matrix_order(gamma, p, prec)
    w = act(gamma, v, p, prec)
    if order == 1 or w == v:
        raise DegenerateDomain("gamma fixes the base vertex")
    geo = path(v, w, p)
    on_path = set(zip(geo, geo[1:])) | set(zip(geo[1:], geo))
    return [(x, y) for x in geo for y in neighbors(x, p) if (x, y) not in on_path]


def _outward(src: Vertex, tgt: Vertex, p: int) -> list[tuple[Vertex, Vertex]]:
    return [(tgt, y) for y in neighbors(tgt, p) if y != src]


def involution_domain(gamma, p: int, prec: int, base: Vertex = V0, max_depth: int = 40) -> list[tuple[Vertex, Vertex]]:
    """Oriented edges whose disks form a fundamental domain for an involution gamma of P^1(Q_p)
    without rational fixed points.

    The geodesic from base to gamma base has a fixed midpoint.  If it is an
    edge, gamma flips it and one side is the domain.  If it is a vertex, gamma
    permutes the edges out of it: one edge per swapped pair is kept and edges
    fixed by gamma are subdivided.
    """
    if matrix_order(gamma, p, prec) != 2:
        raise DegenerateDomain("expected an element of order 2 in PGL2")
    g = lambda x: act(gamma, x, p, prec)  # noqa: E731
    geo = path(base, g(base), p)
    n = len(geo) - 1
    if n % 2:
        return [(geo[n // 2], geo[n // 2 + 1])]
    mid = geo[n // 2]
    if g(mid) != mid:
        raise DegenerateDomain("midpoint of the geodesic is not fixed")
    out = []
    pending = [((mid, y), 0) for y in neighbors(mid, p)]
    taken = set()
    while pending:
        (a, b), depth = pending.pop(0)
        if (a, b) in taken:
            continue
        gb = g(b)
        if gb == b:
            if depth >= max_depth:
                raise DepthExceeded("fixed subtree of gamma too deep")
            pending.extend((e, depth + 1) for e in _outward(a, b, p))
            continue
        out.append((a, b))
        taken.update({(a, b), (g(a), gb)})
    return out


def atkin_lehner_action(Q: QuotientGraph):
    """Permutations (vertices, oriented edges) of the quotient induced by an element of norm p."""
    w = Q.atkin_lehner()
    vperm = [Q.reduce_vertex(Q.act_vertex(w, v))[0] for v in Q.vertices]
    eperm = []
    for k in range(Q.num_edges):
        src, tgt = Q.edge_tree(k)
        eperm.append(Q.reduce_edge(Q.act_vertex(w, src), Q.act_vertex(w, tgt))[0])
    return vperm, eperm
