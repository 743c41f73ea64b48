"""Anticyclotomic p-adic L-functions of elliptic curves at a prime ramified in
an imaginary quadratic field, and a numerical check of the exceptional zero
formula relating their derivative to the logarithm of a global point."""

from .config import InstanceConfig, PointSpec, parse_config
from .lfunction import (
    Lp_derivative,
    Lp_partial_at_center,
    Lp_series,
    build_instance,
    check_hypotheses,
    sign,
)
from .pipeline import run
from .tate import EllipticCurve, NumberFieldPoint, log_E, rational_recognize, tate_period

__all__ = [
    "InstanceConfig",
    "PointSpec",
    "parse_config",
    "Lp_derivative",
    "Lp_partial_at_center",
    "Lp_series",
    "build_instance",
    "check_hypotheses",
    "sign",
    "run",
    "EllipticCurve",
    "NumberFieldPoint",
    "log_E",
    "rational_recognize",
    "tate_period",
]
