from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from augfiber.diagram import (BLACK, WHITE, checkerboard, components, crossing_sign, face_index,
                              format_pd, parse_pd, standard_surface, trace_faces)
from augfiber.errors import MalformedCode, NonClosing, NotSphere
from augfiber.generate import random_flat_diagram


def test_figure_eight_faces(fig8_text):
    d = parse_pd(fig8_text)
    faces = trace_faces(d)
    assert sorted(f.degree for f in faces) == [2, 2, 3, 3, 3, 3]
    assert [crossing_sign(d, i) for i in range(4)] == [1, 1, -1, -1]


def test_figure_eight_surface(fig8_text):
    colored, stats = standard_surface(parse_pd(fig8_text))
    assert sum(f.color == BLACK for f in colored) == 3
    assert stats.chi == -1 and stats.connected


def test_trefoil_genus(trefoil_text):
    _, stats = standard_surface(parse_pd(trefoil_text))
    assert (stats.chi, stats.genus) == (-1, 1)


def test_kink_and_loop():
    assert sorted(f.degree for f in trace_faces(parse_pd("X(1,2,2,1)"))) == [1, 1, 2]
    d = parse_pd("loop(1)")
    assert len(trace_faces(d)) == 2
    assert standard_surface(d)[1].chi == 1


@pytest.mark.parametrize("text, err", [
    ("X(1,2,3,4)", NonClosing),
    ("X(1,2,3,4)\nX(3,4,1,2)\nfoo", MalformedCode),
    ("X(1,1,1,2)\nX(2,3,3,3)", MalformedCode),
    ("", MalformedCode),
])
def test_rejects_bad_codes(text, err):
    with pytest.raises(err):
        parse_pd(text)


def test_rejects_torus_embedding():
    # slots paired so that the rotation system has genus one
    with pytest.raises((NotSphere, MalformedCode)):
        parse_pd("X(1,2,1,2)")


def test_partial_circle_tag(fig8_text):
    with pytest.raises(MalformedCode):
        parse_pd(fig8_text + "circle(1,2)\n")


def test_unbounded_choice_flips_colours(fig8_text):
    d = parse_pd(fig8_text)
    faces = trace_faces(d)
    a = checkerboard(d, faces, faces[0].id)
    b = checkerboard(d, faces, next(f.id for f in a if f.color == BLACK))
    assert [f.color for f in a] != [f.color for f in b]


def _proper(d, colored):
    index = face_index(colored)
    color = {f.id: f.color for f in colored}
    return all(color[index[h]] != color[index[d.partner(h)]] for h in d.half_edges())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 5))
def test_random_diagrams_round_trip(seed, size):
    d = random_flat_diagram(seed, size)
    assert parse_pd(format_pd(d)) == d
    faces = trace_faces(d)
    assert len(d.crossings) - 2 * len(d.crossings) + len(faces) == 2
    colored, stats = standard_surface(d)
    assert _proper(d, colored)
    # oracle: a checkerboard surface is disks joined by one twisted band per crossing
    assert stats.chi == sum(f.color == BLACK for f in colored) - len(d.crossings)
    assert next(f for f in colored if f.unbounded).color == WHITE


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_components_cover_every_edge_once(seed):
    d = random_flat_diagram(seed, 4)
    comps = components(d)
    edges = [e for c in comps for e in c.edges]
    assert sorted(edges) == sorted(d.edges)
    assert sum(c.is_circle for c in comps) == len(d.circles)
