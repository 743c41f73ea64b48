"""Command line driver.

Subcommands: ``check`` (hypothesis audit), ``build`` (quotient and cocycle),
``lp`` (values and derivatives), ``verify`` (adds the point side and the norm
identity) and ``report`` (print a saved report).

Exit codes: 0 success, 2 hypothesis violation, 3 precision failure,
4 internal invariant failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import InstanceConfig, PointSpec, parse_config
from .errors import AnticycError, HypothesisViolation, PrecisionError
from .lfunction import check_hypotheses, kronecker
from .persist import CACHE_ENV
from .pipeline import load_instance, read_report, run

EXIT_OK, EXIT_HYPOTHESIS, EXIT_PRECISION, EXIT_INTERNAL = 0, 2, 3, 4


def _add_instance_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", type=Path, help="instance file (one 'key = value' per line)")
    sp.add_argument("--curve", help="Weierstrass coefficients 'a1 a2 a3 a4 a6'")
    sp.add_argument("--N", type=int, help="conductor")
    sp.add_argument("--D", type=int, help="fundamental discriminant of K")
    sp.add_argument("--p", type=int, help="the prime (ramified in K, exactly dividing N)")
    sp.add_argument("--prec", type=int, help="requested p-adic precision")
    sp.add_argument("--level", type=int, help="integration level for Riemann-sum checks")
    sp.add_argument("--hecke-bound", type=int, dest="hecke_bound")
    sp.add_argument("--depth-limit", type=int, dest="depth_limit")
    sp.add_argument("--guard", type=int, help="extra working digits")
    sp.add_argument("--character", help="'all' or comma-separated indices into the Delta characters")
    sp.add_argument("--point", action="append", help="'sigma ; poly ; x ; y' (repeatable)")
    sp.add_argument("--cache-dir", dest="cache_dir", help=f"cache directory (default ${CACHE_ENV} or ./.anticyc-cache)")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--max-c", type=float, dest="max_c", help="allowed digit loss between the two derivative routes")
    sp.add_argument("--no-cache", action="store_true", help="neither read nor write cache files")


def config_from_args(args) -> InstanceConfig:
    text = args.config.read_text() if args.config else ""
    overrides = {k: getattr(args, k) for k in
                 ("N", "D", "p", "prec", "level", "hecke_bound", "depth_limit", "guard", "character",
                  "cache_dir", "seed", "max_c")}
    if args.curve:
        overrides["curve"] = tuple(int(c) for c in args.curve.split())
    if args.point:
        overrides["points"] = tuple(PointSpec.parse(s) for s in args.point)
    return parse_config(text, **overrides)


def cmd_check(cfg: InstanceConfig) -> list[str]:
    hyp = check_hypotheses(cfg.N, cfg.p, cfg.D)
    out = [f"N={hyp.N} = {hyp.p} * N^-={hyp.N_minus} * N^+={hyp.N_plus}"]
    for ell in hyp.N_minus_primes:
        out.append(f"  ({cfg.D}/{ell}) = {kronecker(cfg.D, ell)}  inert")
    n_plus = hyp.N_plus
    ell = 2
    while n_plus > 1:
        if n_plus % ell == 0:
            out.append(f"  ({cfg.D}/{ell}) = {kronecker(cfg.D, ell)}  split")
            while n_plus % ell == 0:
                n_plus //= ell
        ell += 1
    out.append("hypotheses: all pass")
    return out


def cmd_build(cfg: InstanceConfig, use_cache: bool) -> list[str]:
    inst, hits = load_instance(cfg, use_cache)
    Q = inst.Q
    return [
        f"quotient: {Q.num_vertices} vertices, {Q.num_edges} oriented edges (cached: {hits['quotient']})",
        f"cocycle: {list(inst.cocycle.values)}",
        f"embeddings: {len(inst.S.embeddings)} (cached: {hits['embeddings']})",
    ]


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="anticyc", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("check", "build", "lp", "verify"):
        _add_instance_args(sub.add_parser(name))
    rp = sub.add_parser("report")
    rp.add_argument("path", type=Path)
    args = parser.parse_args(argv)
    try:
        if args.command == "report":
            lines = read_report(args.path)
        else:
            cfg = config_from_args(args)
            if args.command == "check":
                lines = cmd_check(cfg)
            elif args.command == "build":
                lines = cmd_build(cfg, not args.no_cache)
            else:
                stages = ("lp",) if args.command == "lp" else ("lp", "verify")
                rep = run(cfg, not args.no_cache, stages)
                lines = list(rep.lines) + [f"runtime {rep.runtime:.1f}s"]
                if rep.path:
                    lines.append(f"report written to {rep.path}")
    except HypothesisViolation as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except PrecisionError as exc:
        print(f"precision failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (AnticycError, ValueError) as exc:
        print(f"internal failure: {type(exc).__module__}.{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    print("\n".join(lines))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
