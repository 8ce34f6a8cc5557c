from __future__ import annotations

import pytest

from augfiber.augment import (FillingInstruction, augment, find_twist_regions, flatten,
                              reinsert_counts, twist_handedness)
from augfiber.diagram import crossing_sign, parse_pd, standard_surface
from augfiber.errors import OddTwistRegion
from augfiber.model import classify


def test_figure_eight_regions(fig8_text):
    d = parse_pd(fig8_text)
    regions = find_twist_regions(d)
    assert [r.crossings for r in regions] == [(0, 1), (2, 3)]
    assert [r.parity for r in regions] == [0, 0]


def test_handedness_is_uniform_inside_a_region(fig8_text):
    d = parse_pd(fig8_text)
    for r in find_twist_regions(d):
        hands = twist_handedness(d, r)
        assert len(set(hands)) == 1
        # crossings of one twist region share their crossing sign too
        assert len({crossing_sign(d, i) for i in r.crossings}) == 1


def test_augment_adds_four_crossings_per_region(fig8_text):
    d = parse_pd(fig8_text)
    a = augment(d)
    assert a.n_crossings == d.n_crossings + 8
    assert [c.twist for c in a.circles] == [(0, 1), (2, 3)]


def test_flatten_figure_eight(fig8_text):
    flat, instr = flatten(augment(parse_pd(fig8_text)))
    assert flat.n_crossings == 8
    assert sorted(i.n for i in instr) == [-1, 1]
    assert all(abs(i.n) == 1 for i in instr)
    _, stats = standard_surface(flat)
    assert stats.orientable and stats.chi == -3
    ald = classify(flat)
    assert (len(ald.b_circles), len(ald.a_circles)) == (1, 1)


def test_reinsertion_restores_crossing_counts(fig8_text):
    d = augment(parse_pd(fig8_text))
    _, instr = flatten(d)
    counts = reinsert_counts(d, instr)
    assert counts == {ci: len(c.twist) for ci, c in enumerate(d.circles)}


def test_trefoil_is_odd(trefoil_text):
    d = parse_pd(trefoil_text)
    assert [r.crossing_count for r in find_twist_regions(d)] == [3]
    with pytest.raises(OddTwistRegion):
        flatten(augment(d))


def test_filling_instruction_json():
    ins = FillingInstruction(2, -1, (4, 5))
    assert ins.to_json() == {"circle": 2, "n": -1}
    assert ins.slope == -1


def test_flatten_without_twists_is_identity(fig8_text):
    flat, _ = flatten(augment(parse_pd(fig8_text)))
    again, instr = flatten(flat)
    assert again == flat and instr == []
