"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the numbers behind
it.  Tolerances are exact: zero disagreements, integer equality.  Run on its
own with ``python tests/test_acceptance.py`` or inside pytest (the lines show
up in ``pytest -v`` output).
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

from augfiber.augment import augment, find_twist_regions, flatten
from augfiber.diagram import parse_pd, standard_surface
from augfiber.errors import OddTwistRegion
from augfiber.fibergraph import FIBERED, analyze, build_gb
from augfiber.freegroup import Word, nielsen_generates
from augfiber.generate import random_ald, random_flat_diagram
from augfiber.model import ACircle, CRegion, Incidence, classify, rank_counts
from augfiber.moves import (ChiLedger, deplumb, fill_b_circles, lift_alternating,
                            make_locally_alternating, replay_program, standard_chi)
from augfiber.stallings import abelianize, build_fstar, build_fstar_filled, verify

FIXTURES = Path(__file__).parent.parent / "fixtures"

# pinned sizes and tolerances
N_EQUIV = 240
N_GB = 100
N_EULER = 100
N_DET = 100
N_SURGERY = 50
N_ALT = 50
N_INVARIANT = 100
MAX_DISAGREEMENTS = 0
TIME_LIMIT_S = 60.0


def report(number: int, ok: bool, detail: str, elapsed: float) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail}; {elapsed:.1f}s)"
    print(line, flush=True)


def _run(number, check):
    t0 = time.perf_counter()
    ok, detail = check()
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < TIME_LIMIT_S
    report(number, ok, detail, elapsed)
    return ok, detail


# -------------------------------------------------------------- criteria

def check_equivalence():
    bad = []
    for seed in range(N_EQUIV):
        ald = random_ald(seed, 2 + seed % 11)
        graph, oracle = analyze(ald), verify(ald)
        certified = (oracle.trace is not None if oracle.outcome == FIBERED
                     else oracle.witness is not None and not any(oracle.witness.image))
        if graph.outcome != oracle.outcome or not certified:
            bad.append(seed)
    return len(bad) <= MAX_DISAGREEMENTS, f"{N_EQUIV} instances, {len(bad)} disagreements {bad[:5]}"


def _example_tree():
    from conftest import make_ald
    return make_ald([("B1", "C0", "C11"), ("B2", "C0", "C12"), ("B3", "C12", "C2")])


def check_golden():
    k = fill_b_circles(_example_tree(), ["B1", "B2", "B3"], [1, 1, -1])
    m = build_fstar_filled(k)
    got = {g: str(w) for g, w in m.images.items()}
    want = {"u_C11": "x_C11", "u_C12": "x_C12 x_C2 x_C12^-1", "u_C2": "x_C12 x_C2^-1"}
    ok, trace = nielsen_generates(m.image_tuple(), m.rank, list(m.codomain))
    back = trace.inverse()
    x11, x12, x2 = (Word.gen(g) for g in ("x_C11", "x_C12", "x_C2"))
    first = (x11, x12, x12 * ~x2)
    second = (x11, x12 * ~(x12 * ~x2), x12 * ~x2)
    snaps = list(back.snapshots)
    columns = first in snaps and second in snaps and snaps.index(second) == snaps.index(first) + 1
    passed = got == want and ok and trace.replay() == trace.final and back.final == m.image_tuple() \
        and columns
    return passed, f"images match={got == want}, nielsen={ok}, two-column sequence={columns}"


def check_gb_preserved():
    bad = [s for s in range(N_GB)
           if build_gb(deplumb(random_ald(s, 2 + s % 11))[0]) != build_gb(random_ald(s, 2 + s % 11))]
    return not bad, f"{N_GB} instances, {len(bad)} mismatches"


def check_euler():
    bad, total_a = [], 0
    for seed in range(N_EULER):
        d = random_flat_diagram(seed, 2 + seed % 5)
        _, stats = standard_surface(d)
        ald = classify(d)
        ledger = ChiLedger(standard_chi(ald))
        flat, _ = deplumb(ald, ledger)
        counts = rank_counts(flat)
        chi_deplumbed = 1 - counts["q"] - counts["r"]
        n_a = len(ald.a_circles)
        total_a += n_a
        if stats.chi != chi_deplumbed - 2 * n_a or ledger.end != chi_deplumbed:
            bad.append(seed)
    return not bad, f"{N_EULER} diagrams, {total_a} A-circles, {len(bad)} mismatches"


def _cycle_rows_vanish(ald) -> bool:
    """All-ones on the B-rows of each cycle, after turning every edge to run m->n."""
    for cycle in build_gb(ald).fundamental_cycles():
        cur = ald
        for edge, direction in cycle:
            if direction < 0:
                cur = cur.swap_roles(edge.id)
        h = abelianize(build_fstar(cur))
        if any(h.apply_left({f"u_{e.id}": 1 for e, _ in cycle})):
            return False
    return True


def check_dichotomy():
    bad, trees = [], 0
    for seed in range(N_DET):
        ald, _ = deplumb(random_ald(seed, 2 + seed % 9))
        if not ald.b_circles and len(ald.c_regions) == 1:
            continue
        tree = analyze(ald).outcome == FIBERED
        trees += tree
        d = abelianize(build_fstar(ald)).determinant()
        if (abs(d) == 1) != tree or not _cycle_rows_vanish(ald):
            bad.append(seed)
    return not bad, f"{N_DET} instances, {trees} trees, {len(bad)} violations"


def check_surgery():
    bad = []
    for seed in range(N_SURGERY):
        rng = random.Random(seed)
        ald, _ = deplumb(random_ald(seed, 2 + seed % 11, tree=True))
        ids = [b.id for b in ald.b_circles]
        k = fill_b_circles(ald, ids, [rng.choice([1, -1]) for _ in ids])
        m = build_fstar_filled(k)
        ok, trace = nielsen_generates(m.image_tuple(), m.rank, list(m.codomain))
        if not ok or trace.inverse().final != m.image_tuple():
            bad.append(seed)
    return not bad, f"{N_SURGERY} trees, {len(bad)} failures"


def check_alternating():
    bad, cyclic, split = [], 0, 0
    for seed in range(N_ALT):
        alt = make_locally_alternating(random_ald(seed, 2 + seed % 11, connected=True))
        g = build_gb(alt)
        cyclic += bool(g.fundamental_cycles())
        split += len(g.components()) > 1
        out, program = lift_alternating(alt)
        if analyze(out).outcome != FIBERED or replay_program(out, program) != alt:
            bad.append(seed)
    return not bad and cyclic and split, \
        f"{N_ALT} instances ({cyclic} cyclic, {split} disconnected), {len(bad)} failures"


def check_pipeline():
    fig8 = parse_pd((FIXTURES / "figure_eight.pd").read_text())
    sizes = sorted(r.crossing_count for r in find_twist_regions(fig8))
    _, instructions = flatten(augment(fig8))
    ns = sorted(abs(i.n) for i in instructions)
    try:
        flatten(augment(parse_pd((FIXTURES / "trefoil.pd").read_text())))
        trefoil = "no error"
    except OddTwistRegion:
        trefoil = "OddTwistRegion"
    ok = sizes == [2, 2] and ns == [1, 1] and trefoil == "OddTwistRegion"
    return ok, f"figure-eight regions {sizes}, |n| {ns}; trefoil {trefoil}"


def _add_a_circle(ald, rng):
    aid = f"A{100 + rng.randrange(900)}"
    s1, s2 = (rng.choice(ald.region_ids) for _ in range(2))
    regions = []
    for c in ald.c_regions:
        seq = list(c.boundary)
        for side, rid in (("1", s1), ("2", s2)):
            if rid == c.id:
                seq.insert(rng.randrange(len(seq) + 1), Incidence(aid, side))
        regions.append(CRegion(c.id, tuple(seq)))
    return type(ald)(tuple(regions), ald.b_circles, ald.a_circles + (ACircle(aid, s1, s2),),
                     ald.unbounded)


def _drop_a_circle(ald, aid):
    regions = tuple(CRegion(c.id, tuple(i for i in c.boundary if i.circle != aid))
                    for c in ald.c_regions)
    rest = tuple(a for a in ald.a_circles if a.id != aid)
    return type(ald)(regions, ald.b_circles, rest, ald.unbounded)


def check_invariance():
    bad = []
    for seed in range(N_INVARIANT):
        rng = random.Random(seed)
        ald = random_ald(seed, 2 + seed % 11)
        base = analyze(ald).outcome
        ids = ald.region_ids + [b.id for b in ald.b_circles] + [a.id for a in ald.a_circles]
        fresh = [f"Z{k}" for k in range(len(ids))]
        rng.shuffle(fresh)
        variants = [ald.relabel(dict(zip(ids, fresh)))]
        swapped = ald
        for b in ald.b_circles:
            if rng.random() < 0.5:
                swapped = swapped.swap_roles(b.id)
        variants.append(swapped)
        variants.append(_add_a_circle(ald, rng))
        for a in ald.a_circles:
            variants.append(_drop_a_circle(ald, a.id))
        if any(analyze(v).outcome != base for v in variants):
            bad.append(seed)
    return not bad, f"{N_INVARIANT} instances, {len(bad)} changed verdicts"


CRITERIA = {
    1: check_equivalence,
    2: check_golden,
    3: check_gb_preserved,
    4: check_euler,
    5: check_dichotomy,
    6: check_surgery,
    7: check_alternating,
    8: check_pipeline,
    9: check_invariance,
}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    with capsys.disabled():
        ok, detail = _run(number, CRITERIA[number])
    assert ok, detail


if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).parent))
    results = [_run(n, CRITERIA[n])[0] for n in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)
