from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticyc.btquotient import atkin_lehner_action, mass
from anticyc.tree import V0, neighbors

from conftest import quotient

LEVELS = [(7, 1, 3), (7, 1, 2), (3, 1, 7), (11, 1, 3), (13, 1, 2), (3, 5, 2), (2, 3, 5), (19, 1, 2)]


@pytest.mark.parametrize("Nm,Np,p", LEVELS)
def test_quotient_closes(Nm, Np, p):
    Q = quotient(Nm, Np, p)
    assert Q.check_closure()
    assert sorted(Q.opposite[Q.opposite[k]] for k in range(Q.num_edges)) == list(range(Q.num_edges))
    assert all(Q.opposite[k] != k for k in range(Q.num_edges))
    # every vertex has p+1 outgoing edges in the tree
    assert all(len(row) == p + 1 for row in Q.nbr_table)


@pytest.mark.parametrize("Nm,Np,p", LEVELS)
def test_mass_formula_on_each_parity_class(Nm, Np, p):
    Q = quotient(Nm, Np, p)
    even, odd = Q.mass_by_parity()
    assert even == odd == mass(Nm, Np)


def test_mass_formula_values():
    assert mass(7, 1) == Fraction(1, 2)
    assert mass(2, 3) == Fraction(1, 3)
    assert mass(3, 5) == 1


@pytest.mark.parametrize("Nm,Np,p", LEVELS[:5])
def test_edge_weights_divide_vertex_weights(Nm, Np, p):
    Q = quotient(Nm, Np, p)
    for k, (i, _) in enumerate(Q.edges):
        assert Q.w_vertex(i) % Q.w_edge(k) == 0
        assert Q.w_edge(k) == Q.w_edge(Q.opposite[k])


@pytest.mark.parametrize("Nm,Np,p", LEVELS[:5])
def test_atkin_lehner_swaps_parity_and_is_an_involution(Nm, Np, p):
    Q = quotient(Nm, Np, p)
    vmap, emap = atkin_lehner_action(Q)
    for i in range(Q.num_vertices):
        assert Q.vertex_parity(vmap[i]) != Q.vertex_parity(i)
        assert vmap[vmap[i]] == i
    assert all(emap[emap[k]] == k for k in range(Q.num_edges))


@st.composite
def tree_edges(draw, p):
    v = V0
    for _ in range(draw(st.integers(0, 5))):
        v = draw(st.sampled_from(neighbors(v, p)))
    return v, draw(st.sampled_from(neighbors(v, p)))


@pytest.mark.parametrize("Nm,Np,p", [(7, 1, 3), (13, 1, 2)])
@given(data=st.data())
def test_reduction_is_gamma_invariant(Nm, Np, p, data):
    Q = quotient(Nm, Np, p)
    src, tgt = data.draw(tree_edges(p))
    k, g = Q.reduce_edge(src, tgt)
    assert (Q.act_vertex(g, src), Q.act_vertex(g, tgt)) == Q.edge_tree(k)
    for row in Q.nbr_table:
        for _, h in row:
            assert Q.reduce_edge(Q.act_vertex(h, src), Q.act_vertex(h, tgt))[0] == k
