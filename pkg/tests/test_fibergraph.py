from __future__ import annotations

from collections import Counter

import networkx as nx
from hypothesis import given, settings, strategies as st

from augfiber.fibergraph import (FIBERED, INAPPLICABLE, NOT_FIBERED, Verdict, analyze,
                                 build_gb)
from augfiber.generate import random_ald
from augfiber.moves import make_locally_alternating

from conftest import make_ald


def _nx(ald):
    g = nx.MultiGraph()
    g.add_nodes_from(ald.region_ids)
    g.add_edges_from((b.m_side, b.n_side) for b in ald.b_circles)
    return g


def test_path_is_fibered(path_ald):
    v = analyze(path_ald)
    assert v.outcome == FIBERED
    (cert,) = v.certificates
    assert cert.kind == "SpanningTree" and sorted(cert.edges) == ["B1", "B2"]


def test_triangle_has_cycle(triangle_ald):
    v = analyze(triangle_ald)
    assert v.outcome == NOT_FIBERED
    assert [c.kind for c in v.certificates] == ["Cycle"]
    assert sorted(v.certificates[0].edges) == ["B1", "B2", "B3"]


def test_self_loop_and_disconnection_both_reported():
    ald = make_ald([("B1", "C1", "C1"), ("B2", "C0", "C2")], regions=["C1"])
    kinds = [c.kind for c in analyze(ald).certificates]
    assert kinds == ["Disconnected", "Cycle"]


def test_isolated_region_is_disconnected():
    ald = make_ald([], regions=["C1"])
    v = analyze(ald)
    assert v.outcome == NOT_FIBERED
    assert v.certificates[0].components == (("C0",), ("C1",))


def test_single_region_is_a_tree():
    assert analyze(make_ald([])).outcome == FIBERED


def test_alternating_is_inapplicable(path_ald):
    v = analyze(make_locally_alternating(path_ald))
    assert v.outcome == INAPPLICABLE
    assert "lift" in v.certificates[0].reason


def test_invalid_is_inapplicable(path_ald):
    bad = path_ald.with_regions(path_ald.c_regions[:1])
    assert analyze(bad).outcome == INAPPLICABLE


def test_parallel_edges_make_a_cycle():
    ald = make_ald([("B1", "C0", "C1"), ("B2", "C1", "C0")])
    assert analyze(ald).outcome == NOT_FIBERED


def test_dot_export(path_ald):
    dot = build_gb(path_ald).to_dot()
    assert dot.startswith("graph G_B {") and '"C0" -- "C1" [label="B1"];' in dot


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 1_000_000), st.integers(2, 12))
def test_tree_verdict_matches_networkx(seed, size):
    ald = random_ald(seed, size)
    g = _nx(ald)
    expect = nx.is_connected(g) and g.number_of_edges() == g.number_of_nodes() - 1 \
        and nx.number_of_selfloops(g) == 0
    v = analyze(ald)
    assert (v.outcome == FIBERED) == expect
    assert Verdict.from_json(v.to_json()) == v
    if v.outcome == FIBERED:
        (cert,) = v.certificates
        assert len(cert.edges) == g.number_of_nodes() - 1
    else:
        kinds = Counter(c.kind for c in v.certificates)
        assert kinds["Disconnected"] == (nx.number_connected_components(g) > 1)
        # one fundamental cycle per unit of cycle rank
        rank = g.number_of_edges() - g.number_of_nodes() + nx.number_connected_components(g)
        assert kinds["Cycle"] == rank


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 1_000_000))
def test_cycle_signs_telescope(seed):
    ald = random_ald(seed, 10, tree=False)
    g = build_gb(ald)
    for cyc in g.fundamental_cycles():
        total = Counter()
        for e, s in cyc:
            total[e.u] += s
            total[e.v] -= s
        assert not any(total.values())
        # the edges really form a closed walk in networkx's view as well
        sub = nx.MultiGraph()
        sub.add_edges_from((e.u, e.v) for e, _ in cyc)
        assert all(d % 2 == 0 for _, d in sub.degree())
