"""End-to-end runs: configuration in, cached structures, L-value report out."""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .btquotient import mass
from .classfield import Character, characters, theta_bp
from .config import InstanceConfig, format_config
from .errors import CacheError, NoMatch
from .lfunction import (
    LFunctionInstance,
    Lp_derivative,
    Lp_partial_at_center,
    ZetaCombination,
    build_instance,
    check_hypotheses,
    finite_difference,
    norm_identity,
    quotient_precision,
    sign,
)
from .persist import (
    cache_dir,
    cache_key,
    dump_embeddings,
    dump_quotient,
    encode_padic,
    load_embedding_records,
    load_quotient,
    seal,
    unseal,
)
from .quaternion import build_algebra, eichler_order
from .tate import EllipticCurve, NumberFieldPoint, point_combination, rational_recognize

__all__ = ["LValueReport", "load_instance", "run", "select_characters", "read_report"]


@dataclass(frozen=True)
class LValueReport:
    """Report lines (deterministic) and the wall-clock time of the run (not part of the lines)."""

    lines: tuple[str, ...]
    runtime: float = 0.0
    path: Path | None = None

    def text(self) -> str:
        return seal("report", list(self.lines))


def _files(cfg: InstanceConfig, hyp, a_table) -> tuple[Path, Path]:
    base = cache_dir(cfg.cache_dir)
    qp = quotient_precision(cfg.prec, cfg.guard, cfg.depth_limit)
    key = f"{cache_key(hyp.N_minus, hyp.N_plus, cfg.p, a_table)}-P{qp}-d{cfg.depth_limit}"
    return base / f"{key}.txt", base / f"{key}-emb{cfg.D}.txt"


def load_instance(cfg: InstanceConfig, use_cache: bool = True) -> tuple[LFunctionInstance, dict]:
    """Build the instance, reading and writing the quotient/cocycle and embedding caches.

    Returns the instance and a dict recording which parts came from the cache.
    """
    E = EllipticCurve.from_list(cfg.curve)
    hyp = check_hypotheses(cfg.N, cfg.p, cfg.D)
    a_table = E.a_table(cfg.hecke_bound, skip=cfg.N)
    Q = cocycle = records = None
    hits = {"quotient": False, "embeddings": False}
    if use_cache:
        qfile, efile = _files(cfg, hyp, a_table)
    if use_cache and qfile.exists():
        order = eichler_order(build_algebra(hyp.N_minus), hyp.N_plus, cfg.p)
        Q, cocycle = load_quotient(qfile.read_text(), order)
        hits["quotient"] = True
        if efile.exists():
            records = load_embedding_records(efile.read_text())
            hits["embeddings"] = True
    inst = build_instance(E, cfg.N, cfg.p, cfg.D, cfg.prec, cfg.guard, cfg.hecke_bound, cfg.depth_limit,
                          Q=Q, cocycle=cocycle, embedding_records=records)
    if use_cache:
        if not hits["quotient"]:
            qfile.write_text(dump_quotient(inst.Q, inst.cocycle))
        if not hits["embeddings"]:
            efile.write_text(dump_embeddings(inst.S))
    return inst, hits


def select_characters(inst: LFunctionInstance, selector: str) -> list[tuple[int, Character]]:
    chars = characters(inst.delta)
    if selector == "all":
        return list(enumerate(chars))
    idx = [int(s) for s in selector.split(",")]
    for i in idx:
        if not 0 <= i < len(chars):
            raise ValueError(f"character index {i} out of range (there are {len(chars)})")
    return [(i, chars[i]) for i in idx]


def _zeta(z: ZetaCombination) -> str:
    return f"m={z.m} " + " ; ".join(encode_padic(c) for c in z.coeffs)


def _point_side(inst: LFunctionInstance, cfg: InstanceConfig, chi: Character, deriv) -> list[str]:
    """log_E(y_chi) - log_E(ybar_chi) from the supplied points and the recognized ratio (real chi only)."""
    if not cfg.points:
        return []
    E, K = inst.E, inst.S.K
    locals_, weights = [], []
    for spec in cfg.points:
        P = NumberFieldPoint.make(spec.poly, spec.x, spec.y)
        if not P.on_curve(E):
            raise ValueError(f"supplied point {spec.format()} is not on the curve")
        w = (-chi(spec.sigma)) % chi.m
        if 2 * w % chi.m:
            return ["point_side skipped (non-real character values)"]
        s = 1 if w == 0 else -1
        prec = inst.work_prec + 4
        locals_ += [P.localize(K, 1, prec), P.localize(K, -1, prec)]
        weights += [s, -s]
    rhs = point_combination(inst.tate, locals_, weights)
    lines = [f"point_side {encode_padic(rhs)}"]
    lhs = deriv.route_b.single().mul_int(inst.index_H_over_Hp).div_int(2)
    if rhs.is_zero():
        lines.append("ratio undefined (point side vanishes)")
        return lines
    ratio = (lhs / rhs).add_bigoh(inst.prec)
    try:
        r = rational_recognize(ratio, 1000)
        lines.append(f"ratio {r} up_to_sign_one {abs(r) == 1}")
    except NoMatch as exc:
        lines.append(f"ratio NoMatch ({exc})")
    return lines


def run(cfg: InstanceConfig, use_cache: bool = True, stages: tuple[str, ...] = ("lp", "verify")) -> LValueReport:
    t0 = time.perf_counter()
    inst, _ = load_instance(cfg, use_cache)
    hyp, Q = inst.hyp, inst.Q
    lines = ["[instance]", *format_config_lines(cfg)]
    even, odd = Q.mass_by_parity()
    lines += [
        "[quotient]",
        f"N_minus {hyp.N_minus} N_plus {hyp.N_plus} p {hyp.p}",
        f"vertices {Q.num_vertices} edges {Q.num_edges}",
        f"mass_even {even} mass_odd {odd} formula {mass(hyp.N_minus, hyp.N_plus)}",
        "cocycle " + " ".join(str(Fraction(x)) for x in inst.cocycle.values),
        "[field]",
        f"D {inst.field.D} h {inst.field.class_number} h_p {inst.delta.h_p} p_principal {inst.field.p_principal}",
        f"a_p {inst.a_p} kappa {inst.kappa} embeddings {len(inst.S.embeddings)} orbit {inst.orbit}",
    ]
    for i, chi in select_characters(inst, cfg.character):
        b_p = theta_bp(inst.field, chi)
        sr = sign(hyp, inst.a_p, b_p)
        lines += [
            f"[character {i}]",
            f"exponents {list(chi.exponents)} m {chi.m}",
            f"sign Sigma {list(sr.Sigma)} w {sr.w} b_p {sr.b_p} change_of_sign {sr.change_of_sign}",
        ]
        if "lp" not in stages and "verify" not in stages:
            continue
        for idx in inst.orbit:
            cv = Lp_partial_at_center(inst, idx)
            lines.append(f"center psi {idx} symbolic {cv.symbolic} numeric {encode_padic(cv.numeric)}")
        d = Lp_derivative(inst, chi, cfg.max_c)
        lines += [
            f"derivative_A {_zeta(d.route_a)}",
            f"derivative_B {_zeta(d.route_b)}",
            f"routes relative_sign {d.relative_sign} agreement {d.agreement} requested {d.requested} c {d.c}",
        ]
        fd = finite_difference(inst, chi)
        lines.append(f"finite_difference t {fd.t} agreement {fd.agreement} expected {fd.expected} c {fd.c}")
        if "verify" in stages:
            lines += _point_side(inst, cfg, chi, d)
    if "verify" in stages:
        lines.append("[norm identity]")
        for idx in range(len(inst.S.embeddings)):
            ni = norm_identity(inst, idx)
            lines.append(f"psi {idx} a_p {ni.a_p} q_power {ni.q_power} digits {ni.digits} holds {ni.holds}")
    report = LValueReport(tuple(lines), time.perf_counter() - t0)
    if use_cache:
        path = cache_dir(cfg.cache_dir) / f"report-{config_digest(cfg)}.txt"
        path.write_text(report.text())
        report = LValueReport(report.lines, report.runtime, path)
    return report


def format_config_lines(cfg: InstanceConfig) -> list[str]:
    return [line for line in format_config(cfg).splitlines() if not line.startswith("cache_dir")]


def config_digest(cfg: InstanceConfig) -> str:
    return hashlib.sha256(repr(sorted(cfg.identity().items())).encode()).hexdigest()[:16]


def read_report(path: str | Path) -> list[str]:
    try:
        return unseal(Path(path).read_text(), "report")
    except OSError as exc:
        raise CacheError(f"cannot read report {path}: {exc}") from exc
