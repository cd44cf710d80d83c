import pytest

from oddcycles.blowups import BlowupSpec, build_blowup, expected_good_count
from oddcycles.counting import count_cycles
from oddcycles.graphs import validate_embedding
from oddcycles.tumor import good_census, is_benign


@pytest.mark.parametrize("m", [2, 3, 4, 5])
@pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
def test_census_matches_closed_form(m, t):
    spec = BlowupSpec(m, t)
    tg = build_blowup(spec)
    assert good_census(tg, m).total == expected_good_count(spec, m)


@pytest.mark.parametrize("m", [3, 4, 5])
@pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
def test_skeleton_variant_census(m, t):
    spec = BlowupSpec(m, t, skeleton_edges=True)
    tg = build_blowup(spec)
    assert good_census(tg, m - 1).total == expected_good_count(spec, m - 1)


def test_m3_t3_is_108():
    assert expected_good_count(BlowupSpec(3, 3), 3) == 108


def test_blowups_are_benign_planar_tumor_graphs():
    for m, t in [(2, 3), (3, 3), (4, 2), (5, 2)]:
        tg = build_blowup(BlowupSpec(m, t))
        assert is_benign(tg)
        assert validate_embedding(tg.graph, tg.embedding).planar


def test_cycle_shaped_tumors_have_no_embedding():
    tg = build_blowup(BlowupSpec(3, 3, tumor_shape="cycle"))
    assert tg.embedding is None
    path = good_census(build_blowup(BlowupSpec(3, 3)), 3).total
    cyc = good_census(tg, 3).total
    assert cyc > path  # the extra edge per tumor buys strictly more cycles


def test_every_long_odd_cycle_in_variant_a_is_good():
    spec = BlowupSpec(4, 3)
    tg = build_blowup(spec)
    assert count_cycles(tg.graph, 9) == good_census(tg, 4).total


def test_blowup_spec_validation():
    with pytest.raises(ValueError):
        BlowupSpec(1, 3)
    with pytest.raises(ValueError):
        BlowupSpec(2, 3, skeleton_edges=True)
    with pytest.raises(ValueError):
        BlowupSpec(3, 2, tumor_shape="cycle")
