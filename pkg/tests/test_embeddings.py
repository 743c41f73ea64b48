from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from anticyc.embeddings import EmbeddingSystem, eta, eta_inverse

from conftest import instance


def test_count_and_optimality(any_instance):
    S, O, p = any_instance.S, any_instance.Q.O, any_instance.p
    assert len(S.embeddings) == S.expected_count()
    for psi in S.embeddings:
        y = list(psi.y)
        assert O.trd(y) == 0
        assert O.nrd(y) == -S.D * p ** (2 * psi.j)
        assert S.is_optimal(psi.y, psi.j) and S.is_oriented(psi.y, psi.j)


def test_fixed_points_are_conjugate_roots(any_instance):
    S, Q = any_instance.S, any_instance.Q
    for psi in S.embeddings:
        (a, b), (c, _) = Q.iota(psi.y)
        for z in (psi.z, psi.zbar):
            assert (z * z * c - z * (2 * a) - b).valuation() >= min(z.prec, Q.prec) - 2
        assert psi.z.conj() == psi.zbar
        assert psi.z != psi.zbar


def test_delta_action_is_free_and_transitive_on_orbits(any_instance):
    S = any_instance.S
    assert S.is_free()
    orbit = S.ordered_orbit()
    assert len(orbit) == any_instance.delta.h_p
    assert sorted(i for o in S.orbits() for i in o) == list(range(len(S.embeddings)))


def test_identify_recovers_each_representative(any_instance):
    S = any_instance.S
    for i, psi in enumerate(S.embeddings):
        assert S.identify(psi.y, psi.j) == i


def test_records_round_trip():
    inst = instance("21-3-120")
    S = inst.S
    T = EmbeddingSystem(inst.Q, inst.field, inst.delta, records=S.records())
    assert [e.key() for e in T.embeddings] == [e.key() for e in S.embeddings]
    assert all(a.z == b.z for a, b in zip(T.embeddings, S.embeddings))


@given(st.fractions(max_denominator=100))
def test_eta_inverts_eta_inverse(a):
    psi = instance("21-3-15").S.embeddings[0]
    F = psi.z.F
    x = F(Fraction(a), prec=20)
    assert eta(psi, eta_inverse(psi, x)) == x
