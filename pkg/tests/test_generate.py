from __future__ import annotations

import networkx as nx
from hypothesis import given, settings, strategies as st

from augfiber.fibergraph import FIBERED, analyze
from augfiber.generate import MAX_CIRCLES, prufer_tree, random_ald, random_flat_diagram
from augfiber.model import validate
from augfiber.moves import hypergraph_connected

import random


def test_same_seed_same_bytes():
    assert random_ald(7, 5).dumps() == random_ald(7, 5).dumps()
    assert random_flat_diagram(7, 3) == random_flat_diagram(7, 3)


@given(st.integers(0, 10**6), st.integers(2, 30))
def test_prufer_gives_a_tree(seed, n):
    g = nx.Graph(prufer_tree(n, random.Random(seed)))
    assert g.number_of_nodes() == n and nx.is_tree(g)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 12))
def test_bounds_and_validity(seed, size):
    ald = random_ald(seed, size)
    assert validate(ald) == []
    assert 2 <= len(ald.c_regions) <= size
    assert len(ald.b_circles) + len(ald.a_circles) <= MAX_CIRCLES


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 12))
def test_connected_option(seed, size):
    ald = random_ald(seed, size, connected=True)
    assert hypergraph_connected(ald)
    assert len(ald.b_circles) + len(ald.a_circles) <= MAX_CIRCLES


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_forced_tree(seed):
    assert analyze(random_ald(seed, 12, tree=True)).outcome == FIBERED


def test_both_branches_are_common():
    outcomes = [analyze(random_ald(s, 8)).outcome for s in range(200)]
    share = outcomes.count(FIBERED) / len(outcomes)
    assert 0.3 < share < 0.8
