from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticyc.tree import (
    V0,
    act,
    covering_at_level,
    disk_of_vertex,
    distance,
    end_vertex,
    mobius,
    neighbors,
    parent,
    path,
)

primes = st.sampled_from([2, 3, 5])


@st.composite
def walks(draw):
    p = draw(primes)
    v = V0
    for _ in range(draw(st.integers(0, 6))):
        v = draw(st.sampled_from(neighbors(v, p)))
    return p, v


@given(walks())
def test_tree_is_regular_and_symmetric(pv):
    p, v = pv
    nb = neighbors(v, p)
    assert len(set(nb)) == p + 1
    for w in nb:
        assert v in neighbors(w, p)
        assert abs(distance(w) - distance(v)) == 1


@given(walks(), st.integers(0, 6))
def test_path_is_a_geodesic(pv, n):
    p, v = pv
    x = path(V0, v, p)
    assert x[0] == V0 and x[-1] == v and len(x) == distance(v) + 1
    for a, b in zip(x, x[1:]):
        assert b in neighbors(a, p)
    if distance(v):
        assert parent(v, p) == x[-2]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_covering_size(p):
    for m in (1, 2, 3):
        assert len(covering_at_level(m, p)) == p ** (m - 1) * (p + 1)


@given(primes, st.fractions(max_denominator=50), st.integers(1, 5))
def test_end_lies_in_its_disks(p, x, n):
    x = Fraction(x)
    v = end_vertex(x, n, p)
    assert distance(v) == n
    assert disk_of_vertex(v, p).contains(x)


@given(walks())
def test_identity_and_scalar_act_trivially(pv):
    p, v = pv
    assert act(((1, 0), (0, 1)), v, p, 20) == v
    assert act(((p, 0), (0, p)), v, p, 20) == v


def test_mobius():
    assert mobius(((1, 1), (0, 1)), Fraction(2)) == 3
    assert mobius(((0, 1), (1, 0)), None) == 0
    assert mobius(((0, 1), (1, 0)), Fraction(0)) is None
