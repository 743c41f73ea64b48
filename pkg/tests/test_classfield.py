import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticyc.classfield import (
    Form,
    build_field,
    characters,
    class_number_bruteforce,
    delta_group,
    factorint,
    is_fundamental,
    theta_bp,
)
from anticyc.errors import NotFundamental, NotRamified, UnitObstruction

# standard table values
CLASS_NUMBERS = {-7: 1, -8: 1, -15: 2, -20: 2, -23: 3, -47: 5, -56: 4, -71: 7, -84: 4, -120: 4}


@pytest.mark.parametrize("D,h", sorted(CLASS_NUMBERS.items()))
def test_class_number(D, h):
    assert class_number_bruteforce(D) == h
    p = next(iter(factorint(-D)))
    assert build_field(D, p).class_number == h


@given(st.integers(min_value=3, max_value=400))
def test_composition_is_a_group_law(n):
    D = -n
    if not is_fundamental(D) or D in (-3, -4):
        return
    p = next(iter(factorint(n)))
    F = build_field(D, p)
    G = F.class_group
    e = G.index(F.identity)
    for i in range(G.order):
        assert G.mul(i, e) == i
        for j in range(G.order):
            assert G.mul(i, j) == G.mul(j, i)


@pytest.mark.parametrize("D,p", [(-15, 3), (-120, 3), (-120, 5), (-8, 2), (-7, 7), (-56, 7)])
def test_ramified_class_has_order_dividing_two(D, p):
    F = build_field(D, p)
    assert F.p_class_order in (1, 2)
    dl = delta_group(F)
    assert dl.h_p * F.p_class_order == F.class_number
    assert dl.H_p_equals_H == F.p_principal
    assert dl.representative(0).reduce() == F.identity


@pytest.mark.parametrize("D,p", [(-15, 3), (-120, 3), (-56, 7)])
def test_characters_are_homomorphisms(D, p):
    dl = delta_group(build_field(D, p))
    G = dl.group
    chars = characters(dl, p)
    assert len(chars) == dl.h_p
    for chi in chars:
        for i in range(G.order):
            for j in range(G.order):
                assert chi(G.mul(i, j)) % chi.m == (chi(i) + chi(j)) % chi.m
        assert theta_bp(dl.field, chi) == 1


def test_rejections():
    with pytest.raises(UnitObstruction):
        build_field(-3, 3)
    with pytest.raises(UnitObstruction):
        build_field(-4, 2)
    with pytest.raises(NotFundamental):
        build_field(-12, 3)
    with pytest.raises(NotRamified):
        build_field(-15, 7)


def test_form_reduction_is_idempotent():
    f = Form(14, 22, 11)
    r = f.reduce()
    assert r.disc == f.disc and r.reduce() == r
