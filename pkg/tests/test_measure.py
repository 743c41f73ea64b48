from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticyc.measure import (
    EdgeMeasure,
    MomentTable,
    coleman_line_integral,
    integrate,
    log_ratio_integral,
    mult_ratio_integral,
    refinement_gap,
)
from anticyc.padic import ramified_field
from anticyc.tree import V0, neighbors

from conftest import E14, E21, eigen

CASES = [(7, 1, 3, E21), (7, 1, 2, E14), (3, 1, 7, E21)]


def measure(Nm, Np, p, E):
    return EdgeMeasure(eigen(Nm, Np, p, E)[1])


def bump(t):
    # continuous on P^1(Q_3): t^2 + 1 has no root there
    return Fraction(0) if t is None else 1 / (t * t + 1)


@pytest.mark.parametrize("case", CASES)
def test_total_mass_vanishes_at_every_level(case):
    mu = measure(*case)
    for m in range(1, 6 if case[2] < 7 else 3):
        assert mu.total_mass(m) == 0


@pytest.mark.parametrize("case", CASES[:2])
def test_descent_matches_direct_reduction(case):
    assert measure(*case).check_descent(4)


@pytest.mark.parametrize("m", range(1, 6))
def test_refinement_gap(m):
    mu = measure(7, 1, 3, E21)
    assert refinement_gap(mu, bump, m) >= m


@given(st.data())
def test_measure_is_gamma_invariant(data):
    mu = measure(7, 1, 3, E21)
    Q = mu.Q
    v = V0
    for _ in range(data.draw(st.integers(0, 5))):
        v = data.draw(st.sampled_from(neighbors(v, 3)))
    w = data.draw(st.sampled_from(neighbors(v, 3)))
    g = data.draw(st.sampled_from([g for row in Q.nbr_table for _, g in row]))
    assert mu.mass(Q.act_vertex(g, v), Q.act_vertex(g, w)) == mu.mass(v, w)


def test_moments_agree_with_riemann_sums():
    mu = measure(7, 1, 3, E21)
    K = ramified_field(3, -15)
    z = K(Fraction(1, 2), Fraction(1, 2), prec=25)
    T = MomentTable(mu, 20)
    exact = coleman_line_integral(mu, z.conj(), z, table=T)
    for m in (4, 5, 6):
        assert (coleman_line_integral(mu, z.conj(), z, level=m) - exact).valuation() >= m - 3


def test_multiplicative_integral_logs_to_additive_one():
    mu = measure(7, 1, 3, E21)
    K = ramified_field(3, -15)
    z = K(Fraction(1, 2), Fraction(1, 2), prec=25)
    T = MomentTable(mu, 20)
    J = mult_ratio_integral(T, z, z.conj())
    assert J.log() == log_ratio_integral(T, z, z.conj())


def test_constant_integrates_to_zero():
    mu = measure(7, 1, 3, E21)
    assert integrate(mu, lambda t: 1, 4) == 0
