from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticyc.classfield import characters, is_prime
from anticyc.errors import (
    BadDiscriminant,
    LevelNotCoprime,
    NotFundamental,
    NotRamified,
    OutsideConvergenceDomain,
    UnitObstruction,
)
from anticyc.lfunction import (
    Lp_derivative,
    Lp_partial_at_center,
    Lp_series,
    ZetaCombination,
    check_hypotheses,
    cyclotomic,
    finite_difference,
    kronecker,
    mult_integral_to_point,
    norm_identity,
    sign,
)
from anticyc.padic import Qp

from conftest import instance

odd_primes = st.sampled_from([3, 5, 7, 11, 13, 17, 19, 23])


@given(st.integers(-500, -1), odd_primes)
def test_kronecker_is_euler_criterion(D, ell):
    e = pow(D % ell, (ell - 1) // 2, ell)
    assert kronecker(D, ell) == {0: 0, 1: 1, ell - 1: -1}[e]


@given(st.integers(-500, -1))
def test_kronecker_at_two(D):
    expected = 0 if D % 2 == 0 else (1 if D % 8 in (1, 7) else -1)
    assert kronecker(D, 2) == expected


def test_hypothesis_gate():
    h = check_hypotheses(21, 3, -120)
    assert (h.N_minus, h.N_plus) == (7, 1)
    h = check_hypotheses(14, 2, -8)
    assert (h.N_minus, h.N_plus) == (7, 1)
    for args, exc in [
        ((21, 3, -3), UnitObstruction),
        ((14, 2, -4), UnitObstruction),
        ((21, 3, -12), NotFundamental),
        ((21, 3, -20), NotRamified),
        ((63, 3, -15), LevelNotCoprime),
        ((105, 3, -15), LevelNotCoprime),
        ((3 * 5 * 7, 3, -123), BadDiscriminant),  # 5 and 7 both inert,
    ]:
        with pytest.raises(exc):
            check_hypotheses(*args)


def test_sign_analysis():
    s = sign(check_hypotheses(21, 3, -15), a_p=1)
    assert s.Sigma == (3, 7) and s.w == -1 and s.forces_odd_order
    s = sign(check_hypotheses(21, 7, -7), a_p=-1)
    assert s.Sigma == (3,) and s.w == 1 and not s.change_of_sign


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6, 12])
def test_cyclotomic_degree(m):
    from math import gcd

    assert len(cyclotomic(m)) - 1 == sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


@given(st.sampled_from([3, 4, 5, 6]), st.integers(0, 30), st.integers(-50, 50))
def test_zeta_combination_reduces_exponents(m, e, a):
    x = Qp(7)(a, prec=10)
    u, v = ZetaCombination.zero(m, x), ZetaCombination.zero(m, x)
    u.add_term(e, x)
    v.add_term(e + m, x)
    assert (u - v).is_zero()
    if is_prime(m):
        w = ZetaCombination.zero(m, x)
        for k in range(m):
            w.add_term(k, x)
        assert w.is_zero()


def test_center_values_vanish(any_instance):
    for idx in any_instance.orbit:
        cv = Lp_partial_at_center(any_instance, idx)
        assert cv.symbolic == 0 and cv.numeric.is_zero() and cv.vanishes


def test_routes_agree(any_instance):
    for chi in characters(any_instance.delta):
        d = Lp_derivative(any_instance, chi)
        assert d.c <= 3
        assert d.relative_sign in (1, -1)


def test_derivative_is_nonzero_when_sign_forces_it():
    inst = instance("21-3-15")
    d = Lp_derivative(inst, characters(inst.delta)[0])
    assert not d.value.is_zero()


def test_finite_difference(inst15):
    fd = finite_difference(inst15, characters(inst15.delta)[0])
    assert fd.c <= 3


def test_series_at_center_and_domain(inst15):
    chi = characters(inst15.delta)[0]
    (v,) = Lp_series(inst15, chi, [1])
    assert v.is_zero()
    with pytest.raises(OutsideConvergenceDomain):
        Lp_series(inst15, chi, [Fraction(3, 2)])


def test_multiplicative_route_is_half_route_b(any_instance):
    chi = characters(any_instance.delta)[0]
    B = Lp_derivative(any_instance, chi).route_b
    m = mult_integral_to_point(any_instance, chi)
    assert (m.scaled(2) - B).is_zero()


def test_norm_identity(any_instance):
    for idx in range(len(any_instance.S.embeddings)):
        assert norm_identity(any_instance, idx).holds
