import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticyc.errors import NoMatch, NotMultiplicative
from anticyc.padic import Qp, ramified_field
from anticyc.tate import (
    NumberFieldPoint,
    log_E,
    point_add,
    point_combination,
    point_mul,
    rational_recognize,
    tate_period,
    tate_point,
)

from conftest import E14, E21

T21 = tate_period(E21, 3, 25)


def test_hecke_eigenvalues_match_tables():
    assert [E21.a_ell(l) for l in (2, 5, 11, 13, 17)] == [-1, -2, 4, -2, -6]
    assert [E14.a_ell(l) for l in (3, 5, 11, 13)] == [-2, 0, 0, -4]
    assert E21.discriminant == 3**4 * 7**2
    assert E14.discriminant == -(2**6) * 7**3


@pytest.mark.parametrize("E,p,split,vq", [(E21, 3, True, 4), (E21, 7, False, 2), (E14, 2, False, 6), (E14, 7, True, 3)])
def test_period_and_reduction_type(E, p, split, vq):
    T = tate_period(E, p, 25)
    assert T.split == split and T.q.valuation() == vq
    assert T.a_p == (1 if split else -1)
    assert T.j_of_q() == Qp(p)(E.j, prec=T.j_of_q().prec)


def test_good_reduction_rejected():
    with pytest.raises(NotMultiplicative):
        E21.is_split(5)


@given(st.integers(-10**5, 10**5).filter(lambda n: n % 3))
def test_log_of_parametrized_point_is_log_q(n):
    w = Qp(3)(n, prec=30)
    assert log_E(tate_point(T21, w), T21) == w.log(T21.branch)


def test_log_is_additive_on_a_global_point():
    K = ramified_field(3, -15)
    P = (K(-7, prec=30), K(Fraction(7, 2), Fraction(9, 2), prec=30))
    assert E21.on_curve(*P)
    l1 = log_E(P, T21)
    assert log_E(point_mul(E21, 2, P), T21) == l1.mul_int(2)
    assert log_E(point_add(E21, P, point_mul(E21, 3, P)), T21) == l1.mul_int(4)


def test_number_field_point_and_combination():
    P = NumberFieldPoint.make([15, 0, 1], [-7], [Fraction(7, 2), Fraction(9, 2)])
    assert P.on_curve(E21)
    K = ramified_field(3, -15)
    a, b = P.localize(K, 1, 30), P.localize(K, -1, 30)
    v = point_combination(T21, [a, b], [1, -1])
    assert v == log_E(a, T21) - log_E(b, T21)
    assert not v.is_zero()


def test_recognize_known_fraction():
    assert rational_recognize(Qp(5)(Fraction(3, 7), prec=30)) == Fraction(3, 7)
    assert rational_recognize(Qp(3)(0, prec=20)) == 0


@given(st.builds(Fraction, st.integers(-30, 30), st.integers(1, 30).map(lambda d: 3 * d + 1)))
def test_recognize_small_height(x):
    assert rational_recognize(Qp(3)(x, prec=25)) == x


def test_random_unit_has_no_small_rational():
    rng = random.Random(20241016)
    x = Qp(3)(rng.randrange(3**30) * 3 + 1, prec=30)
    with pytest.raises(NoMatch):
        rational_recognize(x, 1000)
