from __future__ import annotations

from pathlib import Path

import pytest

from augfiber.model import ACircle, BCircle, CRegion, FlatAugmentedLink, Incidence

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def make_ald(edges, a_pairs=(), regions=None, unbounded="C0"):
    """ALD from (id, m_side, n_side) edges and (id, side1, side2) A-circles.

    Cyclic orders follow the listing order of the circles.
    """
    names = set(regions or ()) | {unbounded}
    for _, a, b in list(edges) + list(a_pairs):
        names |= {a, b}
    inc = {r: [] for r in names}
    for cid, m, n in edges:
        inc[m].append(Incidence(cid, "m"))
        inc[n].append(Incidence(cid, "n"))
    for cid, s1, s2 in a_pairs:
        inc[s1].append(Incidence(cid, "1"))
        inc[s2].append(Incidence(cid, "2"))
    return FlatAugmentedLink(
        tuple(CRegion(r, tuple(v)) for r, v in inc.items()),
        tuple(BCircle(*e) for e in edges),
        tuple(ACircle(*a) for a in a_pairs),
        unbounded,
    )


@pytest.fixture
def fig8_text() -> str:
    return (FIXTURES / "figure_eight.pd").read_text()


@pytest.fixture
def trefoil_text() -> str:
    return (FIXTURES / "trefoil.pd").read_text()


@pytest.fixture
def path_ald():
    return make_ald([("B1", "C0", "C1"), ("B2", "C1", "C2")])


@pytest.fixture
def triangle_ald():
    return make_ald([("B1", "C0", "C1"), ("B2", "C1", "C2"), ("B3", "C2", "C0")])


@pytest.fixture
def example_tree():
    """C0 with children C11 and C12; C2 hangs below C12."""
    return make_ald([("B1", "C0", "C11"), ("B2", "C0", "C12"), ("B3", "C12", "C2")])
