"""Combinatorial model of a flat augmented link and the diagram classifier.

White regions of the checkerboard colouring fall into three kinds:

* a B-circle bounds one white region (the strip between the strands inside
  the circle) and touches two C-regions across its caps;
* an A-circle bounds two white regions (its caps) and touches two C-regions
  across its chords;
* every other white face is a C-region; the unbounded one is ``C0``.
"""

from __future__ import annotations

import json
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable

from .diagram import (WHITE, PlanarDiagram, checkerboard, components, face_index,
                      surface_stats, trace_faces)
from .errors import InvalidALD, NonOrientableSurface, NotFlat

FLAT = "flat"
ALTERNATING = "alternating"
STYLES = (FLAT, ALTERNATING)


def natural_key(ident: str) -> tuple:
    """Sort key putting ``C2`` before ``C10``."""
    m = re.fullmatch(r"(\D*)(\d+)(.*)", ident)
    if m is None:
        return (ident, -1, "")
    return (m.group(1), int(m.group(2)), m.group(3))


@dataclass(frozen=True)
class Incidence:
    circle: str
    side: str


@dataclass(frozen=True)
class CRegion:
    id: str
    boundary: tuple[Incidence, ...] = ()


@dataclass(frozen=True)
class BCircle:
    id: str
    m_side: str
    n_side: str
    style: str = FLAT


@dataclass(frozen=True)
class ACircle:
    id: str
    side1: str
    side2: str
    style: str = FLAT


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass(frozen=True)
class FlatAugmentedLink:
    c_regions: tuple[CRegion, ...]
    b_circles: tuple[BCircle, ...] = ()
    a_circles: tuple[ACircle, ...] = ()
    unbounded: str = "C0"

    def __post_init__(self):
        object.__setattr__(self, "c_regions", tuple(sorted(self.c_regions, key=lambda c: c.id)))
        object.__setattr__(self, "b_circles", tuple(sorted(self.b_circles, key=lambda c: c.id)))
        object.__setattr__(self, "a_circles", tuple(sorted(self.a_circles, key=lambda c: c.id)))

    # -- lookups
    def region(self, rid: str) -> CRegion:
        for c in self.c_regions:
            if c.id == rid:
                return c
        raise KeyError(rid)

    def b_circle(self, bid: str) -> BCircle:
        for b in self.b_circles:
            if b.id == bid:
                return b
        raise KeyError(bid)

    def a_circle(self, aid: str) -> ACircle:
        for a in self.a_circles:
            if a.id == aid:
                return a
        raise KeyError(aid)

    @property
    def region_ids(self) -> list[str]:
        return [c.id for c in self.c_regions]

    @property
    def styles(self) -> set[str]:
        return {c.style for c in self.b_circles} | {c.style for c in self.a_circles}

    # -- edits
    def with_regions(self, regions: Iterable[CRegion]) -> "FlatAugmentedLink":
        return replace(self, c_regions=tuple(regions))

    def swap_roles(self, bid: str) -> "FlatAugmentedLink":
        """Exchange the m/n roles of one B-circle, keeping incidences consistent."""
        flip = {"m": "n", "n": "m"}
        bs = [replace(b, m_side=b.n_side, n_side=b.m_side) if b.id == bid else b
              for b in self.b_circles]
        regions = [CRegion(c.id, tuple(Incidence(i.circle, flip[i.side]) if i.circle == bid else i
                                       for i in c.boundary)) for c in self.c_regions]
        return replace(self, c_regions=tuple(regions), b_circles=tuple(bs))

    def relabel(self, mapping: dict[str, str]) -> "FlatAugmentedLink":
        m = lambda x: mapping.get(x, x)  # noqa: E731
        regions = [CRegion(m(c.id), tuple(Incidence(m(i.circle), i.side) for i in c.boundary))
                   for c in self.c_regions]
        bs = [BCircle(m(b.id), m(b.m_side), m(b.n_side), b.style) for b in self.b_circles]
        as_ = [ACircle(m(a.id), m(a.side1), m(a.side2), a.style) for a in self.a_circles]
        return FlatAugmentedLink(tuple(regions), tuple(bs), tuple(as_), m(self.unbounded))

    # -- serialization
    def to_json(self) -> dict:
        return {
            "c_regions": [{"id": c.id, "boundary": [{"circle": i.circle, "side": i.side}
                                                     for i in c.boundary]}
                          for c in self.c_regions],
            "b_circles": [{"id": b.id, "m_side": b.m_side, "n_side": b.n_side, "style": b.style}
                          for b in self.b_circles],
            "a_circles": [{"id": a.id, "side1": a.side1, "side2": a.side2, "style": a.style}
                          for a in self.a_circles],
            "unbounded": self.unbounded,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> "FlatAugmentedLink":
        try:
            regions = [CRegion(str(c["id"]), tuple(Incidence(str(i["circle"]), str(i["side"]))
                                                   for i in c.get("boundary", [])))
                       for c in data["c_regions"]]
            bs = [BCircle(str(b["id"]), str(b["m_side"]), str(b["n_side"]), b.get("style", FLAT))
                  for b in data.get("b_circles", [])]
            as_ = [ACircle(str(a["id"]), str(a["side1"]), str(a["side2"]), a.get("style", FLAT))
                   for a in data.get("a_circles", [])]
            return cls(tuple(regions), tuple(bs), tuple(as_), str(data["unbounded"]))
        except (KeyError, TypeError) as exc:
            raise InvalidALD(f"malformed ALD JSON: {exc}") from exc

    @classmethod
    def loads(cls, text: str) -> "FlatAugmentedLink":
        return cls.from_json(json.loads(text))


def expected_incidences(ald: FlatAugmentedLink) -> dict[str, Counter]:
    exp: dict[str, Counter] = defaultdict(Counter)
    for b in ald.b_circles:
        exp[b.m_side][Incidence(b.id, "m")] += 1
        exp[b.n_side][Incidence(b.id, "n")] += 1
    for a in ald.a_circles:
        exp[a.side1][Incidence(a.id, "1")] += 1
        exp[a.side2][Incidence(a.id, "2")] += 1
    return exp


def validate(ald: FlatAugmentedLink) -> list[Violation]:
    out = []
    rids = [c.id for c in ald.c_regions]
    cids = [b.id for b in ald.b_circles] + [a.id for a in ald.a_circles]
    for x, n in Counter(rids + cids).items():
        if n > 1:
            out.append(Violation("DuplicateId", x))
    regions = set(rids)
    if ald.unbounded not in regions:
        out.append(Violation("MissingUnbounded", ald.unbounded))
    for b in ald.b_circles:
        for s in (b.m_side, b.n_side):
            if s not in regions:
                out.append(Violation("DanglingIncidence", f"{b.id} -> {s}"))
        if b.style not in STYLES:
            out.append(Violation("BadStyle", f"{b.id}: {b.style}"))
    for a in ald.a_circles:
        for s in (a.side1, a.side2):
            if s not in regions:
                out.append(Violation("DanglingIncidence", f"{a.id} -> {s}"))
        if a.style not in STYLES:
            out.append(Violation("BadStyle", f"{a.id}: {a.style}"))
    exp = expected_incidences(ald)
    for c in ald.c_regions:
        got = Counter(c.boundary)
        if got != exp.get(c.id, Counter()):
            missing = exp.get(c.id, Counter()) - got
            extra = got - exp.get(c.id, Counter())
            out.append(Violation("InconsistentCyclicOrder",
                                 f"{c.id}: missing {sorted((i.circle, i.side) for i in missing)}, "
                                 f"unexpected {sorted((i.circle, i.side) for i in extra)}"))
    return out


def rank_counts(ald: FlatAugmentedLink) -> dict[str, int]:
    return {"q": len(ald.b_circles), "r": len(ald.c_regions) - 1}


# ------------------------------------------------------------- classifier

@dataclass
class Classification:
    ald: FlatAugmentedLink
    face_role: dict[int, str] = field(default_factory=dict)  # face id -> region/circle id
    white_faces: int = 0


def classify(d: PlanarDiagram) -> FlatAugmentedLink:
    return classify_detailed(d).ald


def classify_detailed(d: PlanarDiagram) -> Classification:
    if d.loop is not None or not d.circles:
        raise NotFlat("diagram has no crossing circles")
    faces = checkerboard(d, trace_faces(d))
    stats = surface_stats(d, faces)
    if not stats.orientable:
        raise NonOrientableSurface("black surface is not orientable")
    color = {f.id: f.color for f in faces}
    degree = {f.id: f.degree for f in faces}
    index = face_index(faces)
    unbounded = next(f.id for f in faces if f.unbounded)

    comps = components(d)
    circle_of_edge = {e: ci for ci, c in enumerate(d.circles) for e in c.edges}
    for i, x in enumerate(d.crossings):
        tagged = [e in circle_of_edge for e in x]
        if tagged[0] == tagged[1] or tagged[0] != tagged[2] or tagged[1] != tagged[3]:
            raise NotFlat(f"crossing {i} is not a circle crossing a strand")

    role: dict[int, str] = {}
    circles = []  # (cid, kind, style, arcs: {edge: (face_ext, side)})
    for ci, tag in enumerate(d.circles):
        comp = next(c for c in comps if set(c.edges) == set(tag.edges))
        if len(comp.passes) != 4:
            raise NotFlat(f"circle {ci} has {len(comp.passes)} crossings, expected 4")
        own = set(tag.edges)
        # faces reachable from the unbounded face without crossing this circle
        adj: dict[int, set[int]] = defaultdict(set)
        for h, f in index.items():
            if d.edge_of(h) not in own:
                adj[f].add(index[d.partner(h)])
        outside = {unbounded}
        stack = [unbounded]
        while stack:
            f = stack.pop()
            for g in adj[f]:
                if g not in outside:
                    outside.add(g)
                    stack.append(g)
        inside = set(color) - outside
        if sorted(degree[f] for f in inside) != [2, 2, 4]:
            raise NotFlat(f"circle {ci} does not enclose two caps and a middle")
        passes = comp.passes
        arcs = []  # per circle edge in travel order: (edge, interior, exterior)
        for t, (i, _, out) in enumerate(passes):
            right = index[(i, out)]
            left = index[d.partner((i, out))]
            if (right in inside) == (left in inside):
                raise NotFlat(f"circle {ci} edge does not separate inside from outside")
            interior, exterior = (right, left) if right in inside else (left, right)
            arcs.append((d.crossings[i][out], interior, exterior))
        over = [a % 2 == 1 for _, a, _ in passes]  # circle is the over-strand
        is_chord = [degree[interior] == 4 for _, interior, _ in arcs]
        if is_chord not in ([True, False, True, False], [False, True, False, True]):
            raise NotFlat(f"circle {ci}: chords and caps do not alternate")
        # arc t joins pass t to pass t+1
        chords = [t for t in range(4) if is_chord[t]]
        if all(over[t] == over[(t + 1) % 4] for t in chords) and \
                over[chords[0]] != over[chords[1]]:
            style = FLAT
        elif all(over[t] != over[(t + 1) % 4] for t in range(4)):
            style = ALTERNATING
        else:
            raise NotFlat(f"circle {ci}: crossing pattern is neither flat nor alternating")
        middle = next(f for f in inside if degree[f] == 4)
        caps = [f for f in inside if degree[f] == 2]
        if color[caps[0]] != color[caps[1]] or color[middle] == color[caps[0]]:
            raise NotFlat(f"circle {ci}: caps and middle are not oppositely coloured")
        kind = "B" if color[middle] == WHITE else "A"
        cid = f"{kind}{ci + 1}"
        # walk from the smallest-labelled circle edge in travel order
        t0 = min(range(4), key=lambda t: arcs[t][0])
        order = [(t0 + s) % 4 for s in range(4)]
        if kind == "B":
            lead = next(t for t in order if is_chord[t] and over[t])
            cap_m = (lead - 1) % 4
            labels = {arcs[cap_m][0]: "m", arcs[(lead + 1) % 4][0]: "n"}
            role[middle] = cid
        else:
            first = next(t for t in order if is_chord[t])
            labels = {arcs[first][0]: "1", arcs[(first + 2) % 4][0]: "2"}
            for c in caps:
                role[c] = cid
        ext = {arcs[t][0]: arcs[t][2] for t in range(4)}
        circles.append((cid, kind, style, labels, ext))

    for f in color:
        if color[f] == WHITE and f not in role:
            role[f] = None
    cfaces = sorted(f for f, r in role.items() if r is None)
    cname = {unbounded: "C0"}
    k = 1
    for f in cfaces:
        if f != unbounded:
            cname[f] = f"C{k}"
            k += 1
    if unbounded not in cname or color[unbounded] != WHITE:
        raise NotFlat("unbounded face is not a C-region")

    arc_label = {}
    b_circles, a_circles = [], []
    for cid, kind, style, labels, ext in circles:
        sides = {}
        for e, s in labels.items():
            f = ext[e]
            if f not in cname:
                raise NotFlat(f"circle {cid} touches a non-C region across an arc")
            sides[s] = cname[f]
            arc_label[e] = Incidence(cid, s)
        if kind == "B":
            b_circles.append(BCircle(cid, sides["m"], sides["n"], style))
        else:
            a_circles.append(ACircle(cid, sides["1"], sides["2"], style))

    regions = []
    faces_by_id = {f.id: f for f in faces}
    for f, name in cname.items():
        boundary = tuple(arc_label[d.edge_of(h)] for h in faces_by_id[f].boundary
                         if d.edge_of(h) in arc_label)
        regions.append(CRegion(name, boundary))
    ald = FlatAugmentedLink(tuple(regions), tuple(b_circles), tuple(a_circles), "C0")
    bad = validate(ald)
    if bad:
        raise NotFlat(f"classified structure is inconsistent: {bad}")
    face_role = {f: (cname[f] if f in cname else role[f]) for f in role}
    white = sum(1 for c in color.values() if c == WHITE)
    return Classification(ald, face_role, white)
