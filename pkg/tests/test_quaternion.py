import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticyc.quaternion import build_algebra, eichler_order, hilbert_symbol, mat_mul_mod, norm_form_enumerate
from anticyc.tree import det

ORDERS = [(7, 1, 3), (7, 1, 2), (3, 1, 7), (13, 1, 2), (3, 5, 2), (2, 3, 5), (11, 1, 3)]
vec = st.lists(st.integers(min_value=-20, max_value=20), min_size=4, max_size=4)


@pytest.mark.parametrize("Nm", [2, 3, 5, 7, 11, 13, 30, 42])
def test_algebra_ramification(Nm):
    A = build_algebra(Nm)
    assert A.definite
    assert A.ramified_primes() == sorted(q for q in (2, 3, 5, 7, 11, 13) if Nm % q == 0)


def test_hilbert_symbol_values():
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(-1, -1, 3) == 1
    assert hilbert_symbol(-1, -7, 7) == -1
    assert hilbert_symbol(-3, -7, 7) == 1


@pytest.mark.parametrize("Nm,Np,p", ORDERS)
def test_eichler_discriminant(Nm, Np, p):
    O = eichler_order(build_algebra(Nm), Np, p)
    assert abs(O.discriminant) == Nm * Np


@pytest.mark.parametrize("Nm,Np,p", ORDERS[:4])
@given(x=vec, y=vec)
def test_order_is_closed_and_norm_multiplicative(Nm, Np, p, x, y):
    O = eichler_order(build_algebra(Nm), Np, p)
    xy = O.mul(x, y)
    assert all(isinstance(c, int) for c in xy)
    assert O.nrd(xy) == O.nrd(x) * O.nrd(y)
    assert O.trd(x) == O.quat(x).trd()


@pytest.mark.parametrize("Nm,Np,p", ORDERS[:4])
@given(x=vec, y=vec)
def test_splitting_is_an_algebra_map(Nm, Np, p, x, y):
    O = eichler_order(build_algebra(Nm), Np, p)
    iota = O.splitting(p, 12)
    M = iota.modulus
    assert iota(O.mul(x, y)) == mat_mul_mod(iota(x), iota(y), M)
    assert det(iota(x)) % M == O.nrd(x) % M
    m = iota(x)
    assert (m[0][0] + m[1][1]) % M == O.trd(x) % M


def test_norm_enumeration_counts_units():
    O = eichler_order(build_algebra(7), 1, 3)
    units = norm_form_enumerate(O, 1)
    assert all(O.nrd(u) == 1 for u in units)
    assert len(units) in (2, 4, 6, 8, 12, 24)
