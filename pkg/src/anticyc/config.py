"""Instance configuration: a dataclass and its one-key-per-line text format.

Example file::

    # 21a1 over Q(sqrt -15) at p = 3
    curve = 1 0 0 -4 -1
    N = 21
    D = -15
    p = 3
    prec = 20
    character = all
    point = 0 ; 15 0 1 ; -7 ; 7/2 9/2

A ``point`` line is ``sigma ; poly ; x ; y``: the Delta-class index of the
conjugate, the monic defining polynomial (constant term first) and the
coordinate vectors of x and y in the basis 1, alpha.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction

__all__ = ["PointSpec", "InstanceConfig", "parse_config", "format_config"]


@dataclass(frozen=True)
class PointSpec:
    sigma: int
    poly: tuple
    x: tuple
    y: tuple

    @classmethod
    def parse(cls, text: str) -> "PointSpec":
        parts = [s.split() for s in text.split(";")]
        if len(parts) != 4:
            raise ValueError(f"point needs 'sigma ; poly ; x ; y', got {text!r}")
        sigma = int(parts[0][0])
        poly, x, y = (tuple(Fraction(c) for c in part) for part in parts[1:])
        return cls(sigma, poly, x, y)

    def format(self) -> str:
        j = lambda v: " ".join(str(c) for c in v)  # noqa: E731
        return f"{self.sigma} ; {j(self.poly)} ; {j(self.x)} ; {j(self.y)}"


@dataclass(frozen=True)
class InstanceConfig:
    curve: tuple
    N: int
    D: int
    p: int
    prec: int = 20
    level: int = 6
    hecke_bound: int = 30
    depth_limit: int = 12
    guard: int = 8
    character: str = "all"
    points: tuple = ()
    cache_dir: str | None = None
    seed: int = 0
    max_c: float = 3.0

    def __post_init__(self):
        if len(self.curve) != 5:
            raise ValueError("curve needs five Weierstrass coefficients a1 a2 a3 a4 a6")
        if self.prec < 4:
            raise ValueError("precision must be at least 4")

    def identity(self) -> dict:
        """Fields that determine the mathematical output (the cache location is excluded)."""
        d = dataclasses.asdict(self)
        d.pop("cache_dir")
        d["points"] = [p.format() for p in self.points]
        return d


_INT_FIELDS = {"N", "D", "p", "prec", "level", "hecke_bound", "depth_limit", "guard", "seed"}


def parse_config(text: str, **overrides) -> InstanceConfig:
    values: dict = {}
    points = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if key == "curve":
            values["curve"] = tuple(int(c) for c in val.split())
        elif key == "point":
            points.append(PointSpec.parse(val))
        elif key in _INT_FIELDS:
            values[key] = int(val)
        elif key == "max_c":
            values[key] = float(val)
        elif key in ("character", "cache_dir"):
            values[key] = val
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if points:
        values["points"] = tuple(points)
    values.update({k: v for k, v in overrides.items() if v is not None})
    missing = {"curve", "N", "D", "p"} - values.keys()
    if missing:
        raise ValueError(f"missing keys: {sorted(missing)}")
    return InstanceConfig(**values)


def format_config(cfg: InstanceConfig) -> str:
    lines = [f"curve = {' '.join(map(str, cfg.curve))}"]
    for f in dataclasses.fields(cfg):
        if f.name in ("curve", "points"):
            continue
        v = getattr(cfg, f.name)
        if v is not None:
            lines.append(f"{f.name} = {v}")
    lines += [f"point = {p.format()}" for p in cfg.points]
    return "\n".join(lines) + "\n"
