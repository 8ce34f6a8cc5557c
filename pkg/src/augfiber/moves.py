"""Bookkeeping moves on flat augmented links.

Every move reports the change in Euler characteristic of the standard
surface.  For a connected diagram with ``q`` B-circles, ``r`` bounded
C-regions and ``p`` A-circles the surface has ``chi = 1 - q - r - 2p``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .errors import (InvalidALD, NoBridgingACircle, NotACircleOfTypeA, NotATree,
                     NotLocallyAlternating)
from .fibergraph import FIBERED, build_gb, is_tree
from .model import (ALTERNATING, FLAT, ACircle, BCircle, CRegion, FlatAugmentedLink,
                    Incidence, natural_key, validate)


def standard_chi(ald: FlatAugmentedLink) -> int:
    """Euler characteristic of the standard surface, from counts alone."""
    return 1 - len(ald.b_circles) - (len(ald.c_regions) - 1) - 2 * len(ald.a_circles)


@dataclass(frozen=True)
class LedgerEntry:
    move: str
    circle: str
    delta_chi: int


@dataclass
class ChiLedger:
    start: int
    entries: list[LedgerEntry] = field(default_factory=list)

    def add(self, move: str, circle: str, delta: int) -> None:
        self.entries.append(LedgerEntry(move, circle, delta))

    @property
    def total(self) -> int:
        return sum(e.delta_chi for e in self.entries)

    @property
    def end(self) -> int:
        return self.start + self.total

    def to_json(self) -> dict:
        return {"start": self.start, "end": self.end,
                "entries": [{"move": e.move, "circle": e.circle, "delta_chi": e.delta_chi}
                            for e in self.entries]}


def _strip_incidences(ald: FlatAugmentedLink, circles: set[str]) -> tuple[CRegion, ...]:
    return tuple(CRegion(c.id, tuple(i for i in c.boundary if i.circle not in circles))
                 for c in ald.c_regions)


# ------------------------------------------------------------------ deplumb

@dataclass(frozen=True)
class HopfRecord:
    """A pair of Hopf bands removed with one A-circle."""

    circle: str
    count: int = 2
    handedness: tuple[int, int] = (1, -1)

    def to_json(self) -> dict:
        return {"circle": self.circle, "count": self.count, "handedness": list(self.handedness)}


def deplumb(ald: FlatAugmentedLink, ledger: Optional[ChiLedger] = None
            ) -> tuple[FlatAugmentedLink, list[HopfRecord]]:
    """Remove every A-circle; regions and B-circles are left untouched.

    A flat circle passes over on one chord and under on the other, so its
    two bands have opposite handedness; an alternating one gives equal bands.
    """
    if not ald.a_circles:
        return ald, []
    records = []
    for a in ald.a_circles:
        hand = (1, -1) if a.style == FLAT else (1, 1)
        records.append(HopfRecord(a.id, 2, hand))
        if ledger is not None:
            ledger.add("deplumb", a.id, 2)
    gone = {a.id for a in ald.a_circles}
    out = replace(ald, c_regions=_strip_incidences(ald, gone), a_circles=())
    return out, records


# ------------------------------------------------------------------ fillings

@dataclass(frozen=True)
class AFillRecord:
    """A +-1 filling on an A-circle: one Hopf band plumbed onto the deplumbed surface."""

    ald: FlatAugmentedLink
    circle: str
    sign: int
    handedness: int
    base_delta_chi: int = -1  # relative to the surface with the circle deplumbed
    delta_chi: int = 1        # relative to the surface before filling

    def to_json(self) -> dict:
        return {"circle": self.circle, "sign": self.sign, "handedness": self.handedness,
                "base_delta_chi": self.base_delta_chi, "delta_chi": self.delta_chi,
                "ald": self.ald.to_json()}


def _check_sign(sign: int) -> None:
    if sign not in (1, -1):
        raise ValueError(f"filling sign must be +1 or -1, got {sign}")


def fill_a_circle(ald: FlatAugmentedLink, circle: str, sign: int = 1,
                  ledger: Optional[ChiLedger] = None) -> AFillRecord:
    _check_sign(sign)
    if circle not in {a.id for a in ald.a_circles}:
        raise NotACircleOfTypeA(f"{circle} is not an A-circle")
    out = replace(ald, c_regions=_strip_incidences(ald, {circle}),
                  a_circles=tuple(a for a in ald.a_circles if a.id != circle))
    if ledger is not None:
        ledger.add("fill_a", circle, 1)
    return AFillRecord(out, circle, sign, sign)


@dataclass(frozen=True)
class FilledEdge:
    circle: str
    parent: str
    child: str
    sign: int


@dataclass(frozen=True)
class FilledStructure:
    """Regions joined by crossing pairs after filling B-circles of a tree."""

    origin: FlatAugmentedLink
    filled: tuple[FilledEdge, ...]
    remaining: tuple[str, ...]
    root: str
    level: dict = field(default_factory=dict)
    children: dict = field(default_factory=dict)  # region -> ordered child regions
    chi: int = 0

    @property
    def regions(self) -> list[str]:
        return self.origin.region_ids

    def parent_edge(self, region: str) -> Optional[FilledEdge]:
        for e in self.filled:
            if e.child == region:
                return e
        return None

    def graph_edges(self) -> list[tuple[str, str, str]]:
        """(circle, m_side, n_side) for every edge, filled or not."""
        return [(b.id, b.m_side, b.n_side) for b in self.origin.b_circles]

    def to_json(self) -> dict:
        return {
            "root": self.root, "chi": self.chi, "remaining": list(self.remaining),
            "filled": [{"circle": e.circle, "parent": e.parent, "child": e.child, "sign": e.sign}
                       for e in self.filled],
            "levels": dict(sorted(self.level.items(), key=lambda kv: natural_key(kv[0]))),
        }


def fill_b_circles(ald: FlatAugmentedLink, ids: Optional[Sequence[str]] = None,
                   signs: Optional[Sequence[int]] = None,
                   ledger: Optional[ChiLedger] = None) -> FilledStructure:
    """Fill B-circles (default: all, sign +1) of an ALD whose G_B is a tree."""
    if ald.a_circles:
        raise InvalidALD("deplumb A-circles before filling B-circles")
    verdict = is_tree(build_gb(ald))
    if verdict.outcome != FIBERED:
        raise NotATree(f"G_B is not a tree: {[c.kind for c in verdict.certificates]}")
    all_ids = [b.id for b in ald.b_circles]
    ids = list(all_ids if ids is None else ids)
    signs = [1] * len(ids) if signs is None else list(signs)
    if len(signs) != len(ids):
        raise ValueError("one sign per filled circle is required")
    unknown = set(ids) - set(all_ids)
    if unknown:
        raise InvalidALD(f"not B-circles: {sorted(unknown)}")
    sign_of = dict(zip(ids, signs))
    for s in signs:
        _check_sign(s)

    # breadth-first levels from the unbounded region
    adj: dict[str, list[tuple[str, str]]] = {c: [] for c in ald.region_ids}
    for b in ald.b_circles:
        adj[b.m_side].append((b.n_side, b.id))
        adj[b.n_side].append((b.m_side, b.id))
    level = {ald.unbounded: 0}
    parent: dict[str, tuple[str, str]] = {}
    queue = deque([ald.unbounded])
    while queue:
        v = queue.popleft()
        for w, bid in adj[v]:
            if w not in level:
                level[w] = level[v] + 1
                parent[w] = (v, bid)
                queue.append(w)

    children: dict[str, list[str]] = {}
    for c in ald.c_regions:
        up = parent.get(c.id, (None, None))[1]
        seq = [i.circle for i in c.boundary]
        # cyclic order starting just after the parent edge
        if up is not None and up in seq:
            k = seq.index(up)
            seq = seq[k + 1:] + seq[:k]
        kids = []
        for bid in seq:
            for w, b2 in adj[c.id]:
                if b2 == bid and parent.get(w, (None, None))[1] == bid and w != c.id:
                    if w not in kids:
                        kids.append(w)
        children[c.id] = kids

    filled = tuple(FilledEdge(bid, parent[w][0], w, sign_of[bid])
                   for w in sorted(parent, key=natural_key)
                   for bid in [parent[w][1]] if bid in sign_of)
    if ledger is not None:
        for e in filled:
            ledger.add("fill_b", e.circle, 1)
    chi = standard_chi(ald) + len(filled)
    remaining = tuple(b for b in all_ids if b not in sign_of)
    return FilledStructure(ald, filled, remaining, ald.unbounded, level, children, chi)


# ---------------------------------------------------- locally alternating lift

def make_locally_alternating(ald: FlatAugmentedLink) -> FlatAugmentedLink:
    return replace(ald,
                   b_circles=tuple(replace(b, style=ALTERNATING) for b in ald.b_circles),
                   a_circles=tuple(replace(a, style=ALTERNATING) for a in ald.a_circles))


@dataclass(frozen=True)
class ProgramStep:
    """One +-1 filling of the lift, plus what it restores.

    ``kind`` is ``A`` (a new A-circle that re-joins a subdivided B-circle),
    ``B`` (a new B-circle bridging two graph components) or ``pair`` (a new
    flat B-circle which, filled together with a flattened original circle,
    gives back the alternating one).
    """

    circle: str
    kind: str
    sign: int = 1
    target: str = ""                      # circle whose shape is restored
    added_circles: tuple[str, ...] = ()
    added_regions: tuple[str, ...] = ()
    end: str = ""                          # endpoint restored on ``target`` (kind A)

    def to_json(self) -> dict:
        out = {"circle": self.circle, "kind": self.kind, "sign": self.sign}
        if self.target:
            out["target"] = self.target
        if self.added_circles:
            out["added_circles"] = list(self.added_circles)
        if self.added_regions:
            out["added_regions"] = list(self.added_regions)
        if self.end:
            out["end"] = self.end
        return out

    @classmethod
    def from_json(cls, d: dict) -> "ProgramStep":
        return cls(d["circle"], d["kind"], int(d.get("sign", 1)), d.get("target", ""),
                   tuple(d.get("added_circles", ())), tuple(d.get("added_regions", ())),
                   d.get("end", ""))


class _Ids:
    def __init__(self, ald: FlatAugmentedLink):
        nums = [natural_key(x)[1] for x in [b.id for b in ald.b_circles] +
                [a.id for a in ald.a_circles]]
        self.circle = max(nums, default=0) + 1
        self.region = max((natural_key(c)[1] for c in ald.region_ids), default=0) + 1
        taken = set(ald.region_ids) | {b.id for b in ald.b_circles} | {a.id for a in ald.a_circles}
        self.taken = taken

    def next_circle(self, kind: str) -> str:
        while f"{kind}{self.circle}" in self.taken:
            self.circle += 1
        out = f"{kind}{self.circle}"
        self.circle += 1
        self.taken.add(out)
        return out

    def next_region(self) -> str:
        while f"C{self.region}" in self.taken:
            self.region += 1
        out = f"C{self.region}"
        self.region += 1
        self.taken.add(out)
        return out


def _insert_after(regions: dict[str, list[Incidence]], rid: str, anchor: Optional[str],
                  inc: Incidence) -> None:
    seq = regions[rid]
    pos = next((k + 1 for k, i in enumerate(seq) if i.circle == anchor), len(seq))
    seq.insert(pos, inc)


def _pack(ald: FlatAugmentedLink, regions: dict[str, list[Incidence]], bs, as_):
    return FlatAugmentedLink(tuple(CRegion(r, tuple(seq)) for r, seq in regions.items()),
                             tuple(bs.values()), tuple(as_.values()), ald.unbounded)


def _unpack(ald: FlatAugmentedLink):
    regions = {c.id: list(c.boundary) for c in ald.c_regions}
    bs = {b.id: b for b in ald.b_circles}
    as_ = {a.id: a for a in ald.a_circles}
    return regions, bs, as_


def hypergraph_connected(ald: FlatAugmentedLink) -> bool:
    """Regions and circles, joined by incidence, form one connected piece."""
    parent = {r: r for r in ald.region_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in ald.b_circles:
        parent[find(b.m_side)] = find(b.n_side)
    for a in ald.a_circles:
        parent[find(a.side1)] = find(a.side2)
    return len({find(r) for r in ald.region_ids}) == 1


def lift_alternating(ald_a: FlatAugmentedLink, sign: int = 1
                     ) -> tuple[FlatAugmentedLink, list[ProgramStep]]:
    """Flat ALD with tree G_B from which ``ald_a`` is recovered by +-1 fillings."""
    _check_sign(sign)
    bad = validate(ald_a)
    if bad:
        raise InvalidALD(f"invalid ALD: {bad[0].kind}: {bad[0].detail}")
    flat = sorted(c.id for c in (*ald_a.b_circles, *ald_a.a_circles) if c.style != ALTERNATING)
    if flat:
        raise NotLocallyAlternating(f"circles not alternating: {flat}")
    ids = _Ids(ald_a)
    regions, bs, as_ = _unpack(ald_a)
    program: list[ProgramStep] = []

    # Step 1: break each cycle by subdividing one of its edges
    while True:
        cur = _pack(ald_a, regions, bs, as_)
        cycles = build_gb(cur).fundamental_cycles()
        if not cycles:
            break
        keyed = [sorted((natural_key(e.id) for e, _ in cyc)) for cyc in cycles]
        best = min(keyed)
        bid = next(e.id for cyc in cycles for e, _ in cyc if natural_key(e.id) == best[0])
        b = bs[bid]
        na, nb = ids.next_region(), ids.next_region()
        b2, a2 = ids.next_circle("B"), ids.next_circle("A")
        v2 = b.n_side
        # b keeps its m-end; its n-end moves to na, and b2 takes over at v2
        seq = regions[v2]
        k = next(k for k, i in enumerate(seq) if i == Incidence(bid, "n"))
        seq[k] = Incidence(b2, "n")
        bs[bid] = replace(b, n_side=na)
        bs[b2] = BCircle(b2, nb, v2, FLAT)
        as_[a2] = ACircle(a2, na, nb, FLAT)
        regions[na] = [Incidence(bid, "n"), Incidence(a2, "1")]
        regions[nb] = [Incidence(a2, "2"), Incidence(b2, "m")]
        program.append(ProgramStep(a2, "A", sign, bid, (b2, a2), (na, nb), v2))

    # Step 2: join graph components through A-circles
    while True:
        cur = _pack(ald_a, regions, bs, as_)
        comps = build_gb(cur).components()
        if len(comps) <= 1:
            break
        where = {v: k for k, comp in enumerate(comps) for v in comp}
        bridge = next((a for a in sorted(as_.values(), key=lambda a: natural_key(a.id))
                       if where[a.side1] != where[a.side2]), None)
        if bridge is None:
            raise NoBridgingACircle(f"{len(comps)} components and no A-circle joins two of them")
        e = ids.next_circle("B")
        bs[e] = BCircle(e, bridge.side1, bridge.side2, FLAT)
        _insert_after(regions, bridge.side1, bridge.id, Incidence(e, "m"))
        _insert_after(regions, bridge.side2, bridge.id, Incidence(e, "n"))
        program.append(ProgramStep(e, "B", sign, bridge.id, (e,)))

    # Step 3: every original circle becomes a flat pair
    originals = [(c.id, c) for c in (*ald_a.b_circles, *ald_a.a_circles)]
    for cid, c in sorted(originals, key=lambda t: natural_key(t[0])):
        side = c.m_side if isinstance(c, BCircle) else c.side1
        role = "m" if isinstance(c, BCircle) else "1"
        p, leaf = ids.next_circle("B"), ids.next_region()
        if isinstance(c, BCircle):
            bs[cid] = replace(bs[cid], style=FLAT)
        else:
            as_[cid] = replace(as_[cid], style=FLAT)
        bs[p] = BCircle(p, side, leaf, FLAT)
        seq = regions[side]
        k = next(k for k, i in enumerate(seq) if i == Incidence(cid, role))
        seq.insert(k + 1, Incidence(p, "m"))
        regions[leaf] = [Incidence(p, "n")]
        program.append(ProgramStep(p, "pair", sign, cid, (p,), (leaf,)))

    return _pack(ald_a, regions, bs, as_), program


def replay_program(ald: FlatAugmentedLink, program: Sequence[ProgramStep]) -> FlatAugmentedLink:
    """Undo the lift: apply each filling's restoration, last step first."""
    regions, bs, as_ = _unpack(ald)

    def drop(circles: Sequence[str], rids: Sequence[str]) -> None:
        for c in circles:
            bs.pop(c, None)
            as_.pop(c, None)
        for r in rids:
            regions.pop(r, None)
        gone = set(circles)
        for r in regions:
            regions[r] = [i for i in regions[r] if i.circle not in gone]

    for step in reversed(program):
        if step.kind == "pair":
            t = step.target
            if t in bs:
                bs[t] = replace(bs[t], style=ALTERNATING)
            else:
                as_[t] = replace(as_[t], style=ALTERNATING)
            drop(step.added_circles, step.added_regions)
        elif step.kind == "B":
            drop(step.added_circles, ())
        elif step.kind == "A":
            b2 = step.added_circles[0]
            seq = regions[step.end]
            k = next(k for k, i in enumerate(seq) if i == Incidence(b2, "n"))
            seq[k] = Incidence(step.target, "n")
            bs[step.target] = replace(bs[step.target], n_side=step.end)
            drop(step.added_circles, step.added_regions)
        else:
            raise ValueError(f"unknown program step kind {step.kind!r}")
    return _pack(ald, regions, bs, as_)
