"""Run every configuration in configs/ (or the ones given) and print the reports.

    python scripts/run_instances.py [configs/*.cfg] [--no-cache]
"""

from __future__ import annotations

import argparse
from pathlib import Path

from anticyc.config import parse_config
from anticyc.pipeline import run

ROOT = Path(__file__).resolve().parents[1]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("configs", nargs="*", type=Path)
    ap.add_argument("--no-cache", action="store_true")
    args = ap.parse_args()
    paths = args.configs or sorted((ROOT / "configs").glob("*.cfg"))
    for path in paths:
        rep = run(parse_config(path.read_text()), use_cache=not args.no_cache)
        print(f"==== {path.name} ({rep.runtime:.1f}s)")
        print("\n".join(rep.lines))


if __name__ == "__main__":
    main()
