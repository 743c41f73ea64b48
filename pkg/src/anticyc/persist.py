"""Versioned line-oriented text files for cached quotients, cocycles and
embeddings, and for L-value reports.

Every file starts with ``anticyc <kind> v<version>`` and ends with a
``sha256`` line over everything above it.  Only integers and rationals are
written; p-adic numbers are written as (p, extension tag, valuation, digits,
precision).
"""

from __future__ import annotations

import hashlib
import os
from fractions import Fraction
from pathlib import Path

from .btquotient import IDENTITY, GammaElt, QuotientGraph
from .errors import CorruptCache, VersionMismatch
from .harmonic import HarmonicCocycle
from .padic import PadicField, PadicNumber, Qp, ramified_field, unramified_field
from .quaternion import EichlerOrder, SplittingMap

__all__ = [
    "CACHE_VERSION",
    "CACHE_ENV",
    "cache_dir",
    "seal",
    "unseal",
    "encode_padic",
    "decode_padic",
    "dump_quotient",
    "load_quotient",
    "dump_embeddings",
    "load_embedding_records",
    "cache_key",
]

CACHE_VERSION = 1
CACHE_ENV = "ANTICYC_CACHE_DIR"


def cache_dir(override: str | os.PathLike | None = None) -> Path:
    """The cache directory: explicit override, then $ANTICYC_CACHE_DIR, then ./.anticyc-cache."""
    path = Path(override or os.environ.get(CACHE_ENV) or ".anticyc-cache")
    path.mkdir(parents=True, exist_ok=True)
    return path


# -- framing -----------------------------------------------------------------------


def seal(kind: str, lines: list[str], version: int = CACHE_VERSION) -> str:
    body = "\n".join([f"anticyc {kind} v{version}", *lines]) + "\n"
    return body + f"sha256 {hashlib.sha256(body.encode()).hexdigest()}\n"


def unseal(text: str, kind: str, version: int = CACHE_VERSION) -> list[str]:
    """Body lines of a sealed file, after checking the header and the checksum."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].startswith("anticyc "):
        raise CorruptCache("missing header")
    head = lines[0].split()
    if len(head) != 3 or head[1] != kind:
        raise CorruptCache(f"expected a {kind} file, found {lines[0]!r}")
    if head[2] != f"v{version}":
        raise VersionMismatch(
            f"file has {head[2]}, this build reads v{version}; delete the cache entry to rebuild it"
        )
    if not lines[-1].startswith("sha256 "):
        raise CorruptCache("missing checksum line")
    body = "\n".join(lines[:-1]) + "\n"
    if hashlib.sha256(body.encode()).hexdigest() != lines[-1].split()[1]:
        raise CorruptCache("checksum mismatch")
    return lines[1:-1]


# -- scalars -----------------------------------------------------------------------


def _field_tag(F: PadicField) -> str:
    if F.d is None:
        return "Qp"
    return f"{F.kind}:{F.d}"


def _field_from_tag(p: int, tag: str) -> PadicField:
    if tag == "Qp":
        return Qp(p)
    kind, d = tag.split(":")
    if kind == "ramified":
        return ramified_field(p, int(d))
    if kind == "unramified":
        F = unramified_field(p)
        if F.d != int(d):
            raise CorruptCache(f"unramified generator {d} differs from {F.d}")
        return F
    raise CorruptCache(f"unknown field tag {tag}")


def encode_padic(x: PadicNumber) -> str:
    """``p tag valuation prec digits_a | digits_b`` with base-p digits, least significant first."""
    da, db = x.digits()
    return f"{x.p} {_field_tag(x.F)} {x.s} {x.prec} {''.join(map(_digit, da)) or '-'}|{''.join(map(_digit, db)) or '-'}"


def _digit(d: int) -> str:
    return format(d, "x") if d < 16 else f"({d})"


def _parse_digits(s: str, p: int) -> int:
    if s == "-":
        return 0
    out, place, i = 0, 1, 0
    while i < len(s):
        if s[i] == "(":
            j = s.index(")", i)
            d, i = int(s[i + 1 : j]), j + 1
        else:
            d, i = int(s[i], 16), i + 1
        out += d * place
        place *= p
    return out


def decode_padic(s: str) -> PadicNumber:
    p, tag, val, prec, digits = s.split()
    p, val, prec = int(p), int(val), int(prec)
    F = _field_from_tag(p, tag)
    da, db = digits.split("|")
    return PadicNumber._make(F, val, _parse_digits(da, p), _parse_digits(db, p), prec)


def _gamma(g: GammaElt) -> str:
    return ",".join(map(str, g.y)) + f"/{g.j}"


def _ungamma(s: str) -> GammaElt:
    y, j = s.split("/")
    return GammaElt(tuple(int(c) for c in y.split(",")), int(j))


def _ints(xs) -> str:
    return " ".join(str(int(x)) for x in xs)


# -- quotient graph and cocycle ----------------------------------------------------------


def cache_key(N_minus: int, N_plus: int, p: int, a_table: dict[int, int]) -> str:
    """Key of a quotient/cocycle cache entry: (N^-, N^+, p) and a hash of the a_ell table."""
    digest = hashlib.sha256(repr(sorted(a_table.items())).encode()).hexdigest()[:16]
    return f"q-{N_minus}-{N_plus}-{p}-{digest}"


def dump_quotient(Q: QuotientGraph, cocycle: HarmonicCocycle | None = None) -> str:
    O = Q.O
    lines = [
        f"order {O.N_minus} {O.level} {Q.p}",
        f"prec {Q.prec} {Q.depth_limit}",
        "splitting " + " ; ".join(_ints(c for row in m for c in row) for m in Q.iota.images),
        f"vertices {Q.num_vertices}",
    ]
    for v, stab in zip(Q.vertices, Q.vstab):
        lines.append("v " + _ints(v) + " : " + " ".join(_gamma(g) for g in stab))
    lines.append(f"edges {Q.num_edges}")
    for k, (i, t) in enumerate(Q.edges):
        tj, tg = Q.edge_target[k]
        lines.append(
            f"e {i} {t} {Q.opposite[k]} {tj} {_gamma(tg)} : " + " ".join(_gamma(g) for g in Q.estab[k])
        )
    for i, row in enumerate(Q.nbr_table):
        lines.append("n " + " ".join(f"{k}@{_gamma(g)}" for k, g in row))
    if cocycle is not None:
        lines.append("cocycle " + " ".join(str(Fraction(x)) for x in cocycle.values))
    return seal("quotient", lines)


def load_quotient(text: str, order: EichlerOrder) -> tuple[QuotientGraph, HarmonicCocycle | None]:
    """Rebuild a QuotientGraph (and cocycle) from ``dump_quotient`` output over ``order``."""
    lines = unseal(text, "quotient")
    try:
        it = iter(lines)
        Nm, lvl, p = map(int, next(it).split()[1:])
        if (Nm, lvl) != (order.N_minus, order.level):
            raise CorruptCache(f"cache is for N-={Nm}, N+={lvl}")
        prec, depth = map(int, next(it).split()[1:])
        mats = []
        for chunk in next(it).split(" ", 1)[1].split(" ; "):
            a, b, c, d = map(int, chunk.split())
            mats.append(((a, b), (c, d)))
        Q = object.__new__(QuotientGraph)
        Q.O, Q.p, Q.prec, Q.depth_limit = order, p, prec, depth
        Q.iota = SplittingMap(p, prec, tuple(mats))
        order._splits[(p, prec)] = Q.iota
        Q._basis_mats = Q.iota.images
        Q.vertices, Q.vstab, Q.edges, Q.estab = [], [], [], []
        Q.nbr_table, Q.edge_target, Q.opposite = [], [], []
        Q._reduce_cache = {}
        nv = int(next(it).split()[1])
        for i in range(nv):
            head, stab = next(it)[2:].split(" : ")
            v = tuple(int(x) for x in head.split())
            Q.vertices.append(v)
            Q.vstab.append([_ungamma(s) for s in stab.split()])
            Q._reduce_cache[v] = (i, IDENTITY)
        ne = int(next(it).split()[1])
        for _ in range(ne):
            head, stab = next(it)[2:].split(" : ")
            i, t, opp, tj, tg = head.split()
            Q.edges.append((int(i), int(t)))
            Q.opposite.append(int(opp))
            Q.edge_target.append((int(tj), _ungamma(tg)))
            Q.estab.append([_ungamma(s) for s in stab.split()])
        for _ in range(nv):
            row = []
            for item in next(it)[2:].split():
                k, g = item.split("@")
                row.append((int(k), _ungamma(g)))
            Q.nbr_table.append(row)
        cocycle = None
        rest = list(it)
        if rest:
            vals = tuple(Fraction(x) for x in rest[0].split()[1:])
            vals = tuple(int(x) if x.denominator == 1 else x for x in vals)
            cocycle = HarmonicCocycle(Q, vals)
    except (StopIteration, ValueError, IndexError) as exc:
        raise CorruptCache(f"malformed quotient file: {exc}") from exc
    return Q, cocycle


# -- embeddings --------------------------------------------------------------------


def dump_embeddings(S) -> str:
    lines = [f"field {S.D} {S.p}", f"count {len(S.embeddings)}"]
    for k, y, j in S.records():
        lines.append(f"psi {k} {j} " + _ints(y))
    return seal("embeddings", lines)


def load_embedding_records(text: str) -> list[tuple]:
    lines = unseal(text, "embeddings")
    try:
        n = int(lines[1].split()[1])
        out = []
        for line in lines[2 : 2 + n]:
            parts = line.split()
            out.append((int(parts[1]), tuple(int(x) for x in parts[3:]), int(parts[2])))
    except (ValueError, IndexError) as exc:
        raise CorruptCache(f"malformed embeddings file: {exc}") from exc
    return out
