from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticyc.errors import DivisionByIndistinguishableZero, OutsideConvergenceDomain
from anticyc.padic import BranchedLog, Qp, ramified_field, unramified_field, vp

PREC = 25
small = st.integers(min_value=-10**6, max_value=10**6)
units = small.filter(lambda n: n % 3 != 0)
fields = st.sampled_from([Qp(3), ramified_field(3, -15), ramified_field(3, -120), unramified_field(3)])


def elements(F):
    if F.d is None:
        return small.map(lambda a: F(a, prec=PREC))
    return st.tuples(small, small).map(lambda ab: F(*ab, prec=PREC))


@st.composite
def pairs(draw):
    F = draw(fields)
    return draw(elements(F)), draw(elements(F))


def test_integer_arithmetic_embeds():
    Q = Qp(3)
    x = Q(1) + Q(2)
    assert x == Q(3) and x.valuation() == 1


def test_geometric_series_inverse():
    Q = Qp(3)
    inv = Q(4, prec=PREC).inverse()
    partial = sum((-3) ** k for k in range(PREC))
    assert inv == Q(partial, prec=PREC)


def test_uniformizer_squares_to_valuation_one():
    K = ramified_field(3, -120)
    pi = K.gen(PREC)
    assert pi.valuation() == Fraction(1, 2)
    assert (pi * pi).valuation() == 1


@given(pairs())
def test_valuation_of_product(ab):
    a, b = ab
    if a.is_zero() or b.is_zero():
        return
    assert (a * b).valuation() == a.valuation() + b.valuation()


@given(pairs())
def test_valuation_of_sum(ab):
    a, b = ab
    s = a + b
    if not s.is_zero():
        assert s.valuation() >= min(a.valuation(), b.valuation())


@given(pairs())
def test_ring_laws(ab):
    a, b = ab
    assert a * b == b * a
    assert (a + b) * b == a * b + b * b


@given(pairs())
def test_conjugation_is_an_involutive_ring_map(ab):
    a, b = ab
    if a.F.d is None:
        return
    assert a.conj().conj() == a
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()


@given(fields.flatmap(elements))
def test_inverse(x):
    if x.is_zero():
        with pytest.raises(DivisionByIndistinguishableZero):
            x.inverse()
        return
    assert x * x.inverse() == 1


@given(st.tuples(units, units))
def test_log_is_a_homomorphism(xy):
    Q = Qp(3)
    x, y = (Q(n, prec=PREC) for n in xy)
    br = BranchedLog.iwasawa(3)
    assert (x * y).log(br) == x.log(br) + y.log(br)


@given(small)
def test_exp_inverts_log_on_the_disk(n):
    Q = Qp(3)
    x = Q(1 + 9 * n, prec=PREC)
    assert x.log().exp() == x


def test_exp_outside_domain():
    with pytest.raises(OutsideConvergenceDomain):
        ramified_field(3, -15).gen(PREC).exp()


def test_branch_from_period_kills_q():
    q = Qp(3)(3**4 * 7, prec=PREC)
    br = BranchedLog.from_period(q)
    assert q.log(br).is_zero()


@given(units)
def test_sqrt_of_square(n):
    x = Qp(3)(n, prec=PREC)
    r = (x * x).sqrt()
    assert r * r == x * x


def test_teichmuller_is_a_root_of_unity():
    w = Qp(5)(2, prec=PREC).teichmuller()
    assert w**4 == 1


def test_vp():
    assert vp(3**5 * 7, 3) == 5
