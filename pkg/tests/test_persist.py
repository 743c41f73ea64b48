import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticyc.errors import CorruptCache, VersionMismatch
from anticyc.padic import Qp, ramified_field, unramified_field
from anticyc.persist import (
    decode_padic,
    dump_embeddings,
    dump_quotient,
    encode_padic,
    load_embedding_records,
    load_quotient,
    seal,
    unseal,
)
from anticyc.quaternion import build_algebra, eichler_order

from conftest import instance

fields = st.sampled_from([Qp(3), Qp(17), ramified_field(3, -15), unramified_field(5), ramified_field(2, -8)])


@given(fields, st.integers(-10**9, 10**9), st.integers(-10**9, 10**9), st.integers(1, 40))
def test_padic_round_trip(F, a, b, prec):
    x = F(a, b if F.d else 0, prec=prec)
    y = decode_padic(encode_padic(x))
    assert y.F == x.F and y.prec == x.prec and (y - x).is_zero()
    assert encode_padic(y) == encode_padic(x)


@given(st.lists(st.text(alphabet="abc 0123/-", max_size=20), max_size=8))
def test_seal_round_trip(lines):
    assert unseal(seal("report", lines), "report") == lines


def test_tampering_is_detected():
    text = seal("report", ["a 1", "b 2"])
    with pytest.raises(CorruptCache):
        unseal(text.replace("a 1", "a 2"), "report")
    with pytest.raises(CorruptCache):
        unseal(text, "quotient")
    with pytest.raises(VersionMismatch):
        unseal(seal("report", ["x"], version=0), "report")


def test_quotient_and_embeddings_round_trip():
    inst = instance("21-3-120")
    text = dump_quotient(inst.Q, inst.cocycle)
    order = eichler_order(build_algebra(7), 1, 3)
    Q, c = load_quotient(text, order)
    assert c.values == inst.cocycle.values
    assert dump_quotient(Q, c) == text
    recs = load_embedding_records(dump_embeddings(inst.S))
    assert recs == [tuple(r) for r in inst.S.records()]


def test_quotient_for_wrong_order_rejected():
    inst = instance("21-3-15")
    text = dump_quotient(inst.Q, inst.cocycle)
    with pytest.raises(CorruptCache):
        load_quotient(text, eichler_order(build_algebra(3), 1, 7))
