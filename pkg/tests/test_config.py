from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticyc.config import InstanceConfig, PointSpec, format_config, parse_config

BASE = "curve = 1 0 0 -4 -1\nN = 21\nD = -15\np = 3\n"
rationals = st.builds(Fraction, st.integers(-99, 99), st.integers(1, 20))


def test_parse_minimal_and_defaults():
    cfg = parse_config("# comment\n" + BASE)
    assert cfg.curve == (1, 0, 0, -4, -1) and cfg.prec == 20 and cfg.character == "all"


def test_overrides_win():
    assert parse_config(BASE + "prec = 30\n", prec=25).prec == 25
    assert parse_config(BASE, prec=None).prec == 20


@pytest.mark.parametrize("bad", ["curve = 1 2\nN = 21\nD = -15\np = 3", BASE + "colour = red", "N = 21", BASE + "junk"])
def test_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        parse_config(bad)


@given(st.integers(0, 3), st.lists(rationals, min_size=1, max_size=3), st.lists(rationals, min_size=1, max_size=2),
       st.lists(rationals, min_size=1, max_size=2))
def test_point_spec_round_trip(sigma, poly, x, y):
    spec = PointSpec(sigma, tuple(poly), tuple(x), tuple(y))
    assert PointSpec.parse(spec.format()) == spec


@given(st.integers(4, 60), st.sampled_from(["all", "0", "0,1"]), st.floats(0, 5, allow_nan=False))
def test_config_round_trip(prec, character, max_c):
    cfg = InstanceConfig((1, 0, 0, -4, -1), 21, -15, 3, prec=prec, character=character, max_c=max_c,
                         points=(PointSpec.parse("0 ; 15 0 1 ; -7 ; 7/2 9/2"),))
    assert parse_config(format_config(cfg)) == cfg


def test_identity_ignores_cache_location():
    a = parse_config(BASE, cache_dir="/tmp/a")
    b = parse_config(BASE, cache_dir="/tmp/b")
    assert a.identity() == b.identity()
