"""Twist regions, crossing-circle insertion and full-twist removal."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .diagram import (PlanarDiagram, corner_face, face_index, pass_sign,
                      trace_faces)
from .errors import MalformedCode, OddTwistRegion
from .surgery import Builder


@dataclass(frozen=True)
class TwistRegion:
    crossings: tuple[int, ...]

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @property
    def parity(self) -> int:
        return len(self.crossings) % 2


@dataclass(frozen=True)
class FillingInstruction:
    """Dehn filling of slope ``1/n`` on crossing circle ``circle``."""

    circle: int
    n: int
    provenance: tuple[int, ...] = ()

    @property
    def slope(self) -> Fraction:
        return Fraction(1, self.n)

    def to_json(self) -> dict:
        return {"circle": self.circle, "n": self.n}


def _bigons(d: PlanarDiagram) -> list[tuple[int, int, int]]:
    """(face id, crossing a, crossing b) for each face bounded by two distinct crossings."""
    out = []
    for f in trace_faces(d):
        if f.degree == 2:
            a, b = f.boundary[0][0], f.boundary[1][0]
            if a != b:
                out.append((f.id, a, b))
    return out


def find_twist_regions(d: PlanarDiagram) -> list[TwistRegion]:
    """Maximal chains of crossings joined end to end by bigons.

    Crossing circles (tagged components) never belong to a twist region.
    """
    if d.loop is not None:
        return []
    skip = set()
    tagged = d.circle_edges()
    for i, x in enumerate(d.crossings):
        if set(x) & tagged:
            skip.add(i)
    adj: dict[int, list[int]] = {i: [] for i in range(d.n_crossings) if i not in skip}
    for _, a, b in _bigons(d):
        if a in adj and b in adj:
            adj[a].append(b)
            adj[b].append(a)
    seen: set[int] = set()
    regions = []
    for start in sorted(adj):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        # order along the chain, starting at an end when there is one
        ends = sorted(v for v in comp if len(set(adj[v])) < 2)
        cur = ends[0] if ends else min(comp)
        chain = [cur]
        while len(chain) < len(comp):
            nxt = sorted(w for w in set(adj[cur]) if w not in chain)
            if not nxt:
                break
            cur = nxt[0]
            chain.append(cur)
        if len(chain) < len(comp):
            chain += sorted(comp - set(chain))
        regions.append(TwistRegion(tuple(chain)))
    return regions


def _bigon_corner(d: PlanarDiagram, index, i: int, j: int) -> Optional[int]:
    """Slot k such that the corner (k, k+1) of crossing i is a bigon shared with j."""
    faces = {f.id: f for f in trace_faces(d)}
    for k in range(4):
        f = faces[corner_face(index, i, k)]
        if f.degree == 2 and {h[0] for h in f.boundary} == {i, j}:
            return k
    return None


def _forward_corners(d: PlanarDiagram, region: TwistRegion) -> list[Optional[int]]:
    index = face_index(trace_faces(d))
    cs = region.crossings
    out = []
    for t, c in enumerate(cs):
        if t + 1 < len(cs):
            out.append(_bigon_corner(d, index, c, cs[t + 1]))
        elif t > 0:
            k = _bigon_corner(d, index, c, cs[t - 1])
            out.append(None if k is None else (k + 2) % 4)
        else:
            out.append(None)
    return out


def twist_handedness(d: PlanarDiagram, region: TwistRegion) -> list[int]:
    """Per-crossing handedness (+1 right, -1 left) with both strands run the same way."""
    out = []
    for c, k in zip(region.crossings, _forward_corners(d, region)):
        if k is None:
            k = 0
        if k % 2 == 0:
            out.append(pass_sign((k + 2) % 4, (k + 1) % 4))
        else:
            out.append(pass_sign((k + 3) % 4, k % 4))
    return out


def augment(d: PlanarDiagram, regions: Optional[Iterable[TwistRegion]] = None) -> PlanarDiagram:
    """Encircle each selected twist region with a new crossing circle.

    The circle is placed across the two strands leaving the first crossing of
    the chain on the side away from its bigons.  Defaults to all regions.
    """
    regions = list(find_twist_regions(d) if regions is None else regions)
    used: set[int] = set()
    for r in regions:
        if used & set(r.crossings):
            raise MalformedCode("selected twist regions overlap")
        used |= set(r.crossings)
    if not regions:
        return d
    b = Builder.from_diagram(d)
    if b.marker is None:
        b.marker = b.edge_dart_key((0, 0))
    for r in regions:
        c1 = r.crossings[0]
        k = _forward_corners(d, r)[0]
        # slots (out_a, out_b) of c1 facing away from the chain
        k = 0 if k is None else k
        sa, sb = (k + 2) % 4, (k + 3) % 4
        ea, eb = b.slots[c1][sa], b.slots[c1][sb]
        face = b.faces()[(c1, sb)]
        idx = b.insert_circle(ea, eb, face)
        b.twists[idx] = tuple(r.crossings)
    return b.to_diagram()


def flatten(d: PlanarDiagram) -> tuple[PlanarDiagram, list[FillingInstruction]]:
    """Remove all full twists from every encircled twist region.

    Sign convention: each removed right-handed full twist adds -1 to ``n``,
    each left-handed one +1.  Regions with no crossings yield no instruction.
    """
    instructions = []
    doomed: set[int] = set()
    for ci, c in enumerate(d.circles):
        if not c.twist:
            continue
        region = TwistRegion(c.twist)
        if region.parity:
            raise OddTwistRegion(f"circle {ci} encloses {region.crossing_count} crossings")
        half_twists = sum(twist_handedness(d, region))
        if half_twists % 2:
            raise OddTwistRegion(f"circle {ci} encloses an odd net twist")
        n = -half_twists // 2
        if n:
            instructions.append(FillingInstruction(ci, n, region.crossings))
        doomed |= set(region.crossings)
    if not doomed:
        return d, instructions
    b = Builder.from_diagram(d)
    if b.marker is None:
        b.marker = b.edge_dart_key((0, 0))
    b.remove_straight_through(doomed)
    b.twists = [() for _ in b.twists]
    return b.to_diagram(), instructions


def reinsert_counts(flat: PlanarDiagram, instructions: list[FillingInstruction]) -> dict[int, int]:
    """Crossings restored per circle by undoing each instruction's full twists."""
    return {ins.circle: 2 * abs(ins.n) for ins in instructions}
