"""Digits of agreement between the two derivative routes and the finite difference, by precision.

    python scripts/precision_sweep.py --D -15 --p 3 --precs 12 16 20 30
"""

from __future__ import annotations

import argparse

from anticyc.classfield import characters
from anticyc.lfunction import Lp_derivative, build_instance, finite_difference
from anticyc.tate import EllipticCurve


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--curve", default="1 0 0 -4 -1")
    ap.add_argument("--N", type=int, default=21)
    ap.add_argument("--D", type=int, default=-15)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--precs", type=int, nargs="+", default=[12, 16, 20, 30])
    args = ap.parse_args()
    E = EllipticCurve.from_list([int(c) for c in args.curve.split()])
    print("prec  chi  routes_agree  c    fd_t  fd_agree  fd_expected")
    for prec in args.precs:
        inst = build_instance(E, args.N, args.p, args.D, prec=prec)
        for i, chi in enumerate(characters(inst.delta)):
            d = Lp_derivative(inst, chi)
            fd = finite_difference(inst, chi)
            print(f"{prec:4d}  {i:3d}  {d.agreement:12g}  {d.c:3g}  {fd.t:4d}  {fd.agreement:8g}  {fd.expected:11g}")


if __name__ == "__main__":
    main()
