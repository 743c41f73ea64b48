import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticyc.errors import UnsupportedWeight
from anticyc.harmonic import (
    CoeffModule,
    atkin_lehner_eigenvalue,
    cocycle_space,
    hecke_matrix,
    hecke_operator,
    pairing_norm,
)
from anticyc.tree import mat_mul

from conftest import E14, E21, eigen, quotient

EIGEN = [(7, 1, 3, E21), (3, 1, 7, E21), (7, 1, 2, E14)]


def _mat_mul(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


@pytest.mark.parametrize("Nm,Np,p,E", EIGEN)
def test_eigencocycle_is_harmonic_and_an_eigenvector(Nm, Np, p, E):
    Q, c = eigen(Nm, Np, p, E)
    assert c.is_harmonic()
    assert any(c.values)
    for ell in (5, 11, 13):
        assert hecke_operator(ell, c).values == tuple(E.a_ell(ell) * x for x in c.values)
    assert atkin_lehner_eigenvalue(c) == E.a_ell(p)
    assert pairing_norm(c) > 0


@pytest.mark.parametrize("Nm,Np,p", [(13, 1, 2), (19, 1, 2), (11, 1, 3)])
def test_hecke_operators_commute(Nm, Np, p):
    Q = quotient(Nm, Np, p)
    ells = [ell for ell in (3, 5, 7, 11) if (Nm * Np * p) % ell][:3]
    mats = {ell: hecke_matrix(Q, ell) for ell in ells}
    for a in ells:
        for b in ells:
            assert _mat_mul(mats[a], mats[b]) == _mat_mul(mats[b], mats[a])


@pytest.mark.parametrize("Nm,Np,p", [(13, 1, 2), (19, 1, 2)])
def test_hecke_preserves_harmonic_space(Nm, Np, p):
    Q = quotient(Nm, Np, p)
    for c in cocycle_space(Q):
        assert c.is_harmonic()
        assert hecke_operator(3, c).is_harmonic()


mats = st.tuples(*[st.integers(-6, 6)] * 4).filter(lambda m: m[0] * m[3] - m[1] * m[2] != 0)


@given(st.sampled_from([2, 4, 6]), mats, mats, st.lists(st.integers(-5, 5), min_size=5, max_size=5))
def test_weight_k_action_is_a_right_action(k, g, h, coeffs):
    V = CoeffModule(k)
    P = tuple(coeffs[: V.dim])
    g, h = ((g[0], g[1]), (g[2], g[3])), ((h[0], h[1]), (h[2], h[3]))
    assert V.right_action(P, mat_mul(g, h)) == V.right_action(V.right_action(P, g), h)


def test_odd_weight_rejected():
    with pytest.raises(UnsupportedWeight):
        CoeffModule(3)
