"""Shared fixtures: the desk-scale instances are built once per session."""

from __future__ import annotations

import functools

import pytest

from anticyc.btquotient import build_quotient
from anticyc.harmonic import eigencocycle
from anticyc.lfunction import build_instance
from anticyc.quaternion import build_algebra, eichler_order
from anticyc.tate import EllipticCurve

E21 = EllipticCurve(1, 0, 0, -4, -1)
E14 = EllipticCurve(1, 0, 1, 4, -6)

# (curve, N, p, D): every combination used by the acceptance suite
INSTANCES = {
    "21-3-15": (E21, 21, 3, -15),
    "21-3-120": (E21, 21, 3, -120),
    "21-7-7": (E21, 21, 7, -7),
    "14-2-8": (E14, 14, 2, -8),
}


@functools.lru_cache(maxsize=None)
def quotient(N_minus: int, N_plus: int, p: int):
    return build_quotient(eichler_order(build_algebra(N_minus), N_plus, p), p)


@functools.lru_cache(maxsize=None)
def eigen(N_minus: int, N_plus: int, p: int, curve: EllipticCurve):
    Q = quotient(N_minus, N_plus, p)
    return Q, eigencocycle(Q, curve.a_table(30, skip=N_minus * N_plus * p))


@functools.lru_cache(maxsize=None)
def instance(name: str, prec: int = 20):
    E, N, p, D = INSTANCES[name]
    return build_instance(E, N, p, D, prec=prec)


@pytest.fixture(scope="session")
def inst15():
    return instance("21-3-15")


@pytest.fixture(scope="session", params=sorted(INSTANCES))
def any_instance(request):
    return instance(request.param)


from hypothesis import settings  # noqa: E402

settings.register_profile("desk", deadline=None, max_examples=40)
settings.load_profile("desk")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
