"""Planar diagram codes, face tracing, checkerboard colouring and surface counts.

A diagram is a list of crossings.  Each crossing lists four edge labels
counter-clockwise, starting at the incoming under-strand, so slots 0 and 2
carry the under-strand (0 in, 2 out) and slots 1 and 3 the over-strand.
A *half-edge* ``(i, k)`` means "leave crossing ``i`` through slot ``k``".

Faces are traced by walking a half-edge to the far end of its edge, arriving
at ``(j, l)``, and leaving again through ``(j, l + 1)``; the face traced this
way is the one on the right of every half-edge in its boundary.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .errors import MalformedCode, NonClosing, NotSphere, NotTwoColorable

HalfEdge = tuple[int, int]

BLACK = "black"
WHITE = "white"
NON_ORIENTABLE = "non-orientable"


@dataclass(frozen=True)
class CircleTag:
    """Marks the component through ``edges`` as a crossing circle.

    ``twist`` lists the crossings of the twist region the circle encloses
    (set by :func:`augfiber.augment.augment`, empty otherwise).
    """

    edges: tuple[int, ...]
    twist: tuple[int, ...] = ()


@dataclass(frozen=True)
class PlanarDiagram:
    crossings: tuple[tuple[int, int, int, int], ...]
    circles: tuple[CircleTag, ...] = ()
    unbounded: Optional[HalfEdge] = None
    loop: Optional[int] = None
    _ends: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        ends: dict[int, list[HalfEdge]] = defaultdict(list)
        for i, x in enumerate(self.crossings):
            for k, e in enumerate(x):
                ends[e].append((i, k))
        object.__setattr__(self, "_ends", dict(ends))

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def edges(self) -> list[int]:
        if self.loop is not None:
            return [self.loop]
        return sorted(self._ends)

    def ends(self, edge: int) -> list[HalfEdge]:
        return self._ends[edge]

    def partner(self, h: HalfEdge) -> HalfEdge:
        """The half-edge at the other end of the edge leaving through ``h``."""
        i, k = h
        a, b = self._ends[self.crossings[i][k]]
        return b if a == h else a

    def half_edges(self) -> list[HalfEdge]:
        return [(i, k) for i in range(len(self.crossings)) for k in range(4)]

    def circle_edges(self) -> set[int]:
        return {e for c in self.circles for e in c.edges}

    def edge_of(self, h: HalfEdge) -> int:
        return self.crossings[h[0]][h[1]]


@dataclass(frozen=True)
class Face:
    id: int
    boundary: tuple[HalfEdge, ...]
    degree: int
    color: Optional[str] = None
    unbounded: bool = False


@dataclass(frozen=True)
class Component:
    """A link component, as the oriented sequence of passes through crossings.

    Each pass is ``(crossing, in_slot, out_slot)``.
    """

    passes: tuple[tuple[int, int, int], ...]
    edges: tuple[int, ...]
    is_circle: bool = False


@dataclass(frozen=True)
class SurfaceStats:
    chi: int
    boundary_count: int
    genus: Optional[int]
    connected: bool
    side_assignment: object  # dict[int, int] or NON_ORIENTABLE
    component_chis: tuple[int, ...] = ()

    @property
    def orientable(self) -> bool:
        return self.side_assignment != NON_ORIENTABLE


# ---------------------------------------------------------------- parsing

_X = re.compile(r"^X\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")
_CIRCLE = re.compile(r"^circle\(([\d\s,]+)\)(?:\s+twist\(([\d\s,]*)\))?$")
_UNB = re.compile(r"^unbounded\(\s*(\d+)\s*,\s*(\d+)\s*\)$")
_LOOP = re.compile(r"^loop\(\s*(-?\d+)\s*\)$")


def _ints(s: str) -> tuple[int, ...]:
    return tuple(int(t) for t in s.split(",") if t.strip())


def parse_pd(text: str) -> PlanarDiagram:
    crossings = []
    circles = []
    unbounded = None
    loop = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if m := _X.match(line):
            crossings.append(tuple(int(g) for g in m.groups()))
        elif m := _CIRCLE.match(line):
            circles.append(CircleTag(_ints(m.group(1)), _ints(m.group(2) or "")))
        elif m := _UNB.match(line):
            unbounded = (int(m.group(1)), int(m.group(2)))
        elif m := _LOOP.match(line):
            if loop is not None:
                raise MalformedCode("only one crossingless loop is supported")
            loop = int(m.group(1))
        else:
            raise MalformedCode(f"line {lineno}: cannot parse {raw!r}")
    d = PlanarDiagram(tuple(crossings), tuple(circles), unbounded, loop)
    check_diagram(d)
    return d


def check_diagram(d: PlanarDiagram) -> None:
    """Raise if ``d`` violates any :class:`PlanarDiagram` invariant."""
    if d.loop is not None:
        if d.crossings or d.circles:
            raise MalformedCode("loop(...) must be the only component of a crossingless diagram")
        return
    if not d.crossings:
        raise MalformedCode("empty diagram")
    for e, ends in d._ends.items():
        if len(ends) == 1:
            raise NonClosing(f"edge {e} has a single endpoint {ends[0]}")
        if len(ends) > 2:
            raise MalformedCode(f"edge {e} used {len(ends)} times")
    known = set(d._ends)
    seen: set[int] = set()
    for c in d.circles:
        for e in c.edges:
            if e not in known:
                raise MalformedCode(f"circle edge {e} is not in the diagram")
            if e in seen:
                raise MalformedCode(f"edge {e} tagged by two circles")
            seen.add(e)
        for i in c.twist:
            if not 0 <= i < len(d.crossings):
                raise MalformedCode(f"twist crossing {i} out of range")
    if d.unbounded is not None:
        i, k = d.unbounded
        if not (0 <= i < len(d.crossings) and 0 <= k < 4):
            raise MalformedCode(f"unbounded half-edge {d.unbounded} out of range")
    comps = components(d)
    tagged = d.circle_edges()
    for comp in comps:
        es = set(comp.edges)
        if es & tagged and not es <= tagged:
            raise MalformedCode("a circle tag covers only part of a component")
    v, e, f = len(d.crossings), 2 * len(d.crossings), len(trace_faces(d))
    if v - e + f != 2:
        raise NotSphere(f"V - E + F = {v} - {e} + {f} != 2")


def format_pd(d: PlanarDiagram) -> str:
    if d.loop is not None:
        return f"loop({d.loop})\n"
    lines = [f"X({a},{b},{c},{e})" for a, b, c, e in d.crossings]
    for c in d.circles:
        s = "circle(" + ",".join(map(str, c.edges)) + ")"
        if c.twist:
            s += " twist(" + ",".join(map(str, c.twist)) + ")"
        lines.append(s)
    if d.unbounded is not None:
        lines.append(f"unbounded({d.unbounded[0]},{d.unbounded[1]})")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------- components

def components(d: PlanarDiagram) -> list[Component]:
    """Trace link components, oriented by their under-passes.

    A component with no under-pass is oriented so that it leaves through the
    smallest ``(crossing, slot)`` it occupies.
    """
    if d.loop is not None:
        return [Component((), (d.loop,))]
    tagged = d.circle_edges()
    seen: set[HalfEdge] = set()
    out = []
    for start in d.half_edges():
        if start in seen:
            continue
        passes = []
        h = start
        while True:
            j, l = d.partner(h)
            nxt = (j, (l + 2) % 4)
            passes.append((j, l, nxt[1]))
            seen.add((j, l))
            seen.add(nxt)
            h = nxt
            if h == start:
                break
        unders = [(i, a) for i, a, _ in passes if a % 2 == 0]
        if unders:
            forward = [a == 0 for _, a in unders]
            if all(forward):
                pass
            elif not any(forward):
                passes = [(i, b, a) for i, a, b in reversed(passes)]
            else:
                raise MalformedCode("under-strand directions disagree along a component")
        edges = tuple(d.crossings[i][b] for i, _, b in passes)
        # canonical start: leave through the smallest slot
        k = min(range(len(passes)), key=lambda t: (passes[t][0], passes[t][2]))
        passes = passes[k:] + passes[:k]
        edges = edges[k:] + edges[:k]
        out.append(Component(tuple(passes), edges, bool(set(edges) & tagged)))
    out.sort(key=lambda c: (c.passes[0][0], c.passes[0][2]))
    return out


def crossing_sign(d: PlanarDiagram, i: int, comps: Optional[list[Component]] = None) -> int:
    """+1 for a right-handed (positive) crossing under component orientations."""
    comps = comps if comps is not None else components(d)
    for c in comps:
        for j, a, b in c.passes:
            if j == i and a % 2 == 1:
                return pass_sign(0, b)
    raise ValueError(f"crossing {i} not found")


def pass_sign(under_in: int, over_out: int) -> int:
    return 1 if (over_out - under_in) % 4 == 1 else -1


# ------------------------------------------------------------------ faces

def trace_faces(d: PlanarDiagram) -> list[Face]:
    if d.loop is not None:
        return [Face(0, (), 0), Face(1, (), 0)]
    seen: set[HalfEdge] = set()
    faces = []
    for start in d.half_edges():
        if start in seen:
            continue
        cycle = []
        h = start
        while h not in seen:
            seen.add(h)
            cycle.append(h)
            j, l = d.partner(h)
            h = (j, (l + 1) % 4)
        if h != start:
            raise MalformedCode("face tracing did not close")
        faces.append(Face(len(faces), tuple(cycle), len(cycle)))
    return faces


def face_index(faces: Iterable[Face]) -> dict[HalfEdge, int]:
    return {h: f.id for f in faces for h in f.boundary}


def corner_face(index: dict[HalfEdge, int], i: int, k: int) -> int:
    """Face in the corner between slots ``k`` and ``k + 1`` of crossing ``i``."""
    return index[(i, (k + 1) % 4)]


def checkerboard(d: PlanarDiagram, faces: list[Face], unbounded_face_id: Optional[int] = None,
                 unbounded_color: str = WHITE) -> list[Face]:
    """Two-colour ``faces``; the unbounded face gets ``unbounded_color``.

    Without an explicit id the unbounded face is the one containing
    ``d.unbounded``, or the half-edge ``(0, 0)`` when that is unset.
    """
    if d.loop is not None:
        other = BLACK if unbounded_color == WHITE else WHITE
        u = 0 if unbounded_face_id is None else unbounded_face_id
        return [replace(f, color=unbounded_color if f.id == u else other, unbounded=f.id == u)
                for f in faces]
    index = face_index(faces)
    if unbounded_face_id is None:
        unbounded_face_id = index[d.unbounded or (0, 0)]
    adj: dict[int, set[int]] = defaultdict(set)
    for h, fid in index.items():
        other = index[d.partner(h)]
        adj[fid].add(other)
        adj[other].add(fid)
    color = {unbounded_face_id: 0}
    stack = [unbounded_face_id]
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if g not in color:
                color[g] = 1 - color[f]
                stack.append(g)
            elif color[g] == color[f]:
                raise NotTwoColorable(f"faces {f} and {g} are adjacent and equally coloured")
    if len(color) != len(faces):
        raise NotTwoColorable("face adjacency graph is disconnected")
    names = (unbounded_color, BLACK if unbounded_color == WHITE else WHITE)
    return [replace(f, color=names[color[f.id]], unbounded=f.id == unbounded_face_id)
            for f in faces]


def black_corners(d: PlanarDiagram, colored: list[Face], i: int) -> tuple[int, int]:
    index = face_index(colored)
    by_id = {f.id: f for f in colored}
    blacks = [corner_face(index, i, k) for k in range(4)
              if by_id[corner_face(index, i, k)].color == BLACK]
    if len(blacks) != 2:
        raise NotTwoColorable(f"crossing {i} does not have two black corners")
    return blacks[0], blacks[1]


def surface_stats(d: PlanarDiagram, colored: list[Face]) -> SurfaceStats:
    """Euler characteristic, boundary count and orientation of the black surface."""
    blacks = sorted(f.id for f in colored if f.color == BLACK)
    n_links = len(components(d))
    if d.loop is not None:
        return SurfaceStats(1, 1, 0, True, {blacks[0]: 1}, (1,))
    chi = len(blacks) - len(d.crossings)

    parent = {b: b for b in blacks}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    bands = [black_corners(d, colored, i) for i in range(len(d.crossings))]
    for a, b in bands:
        parent[find(a)] = find(b)
    groups: dict[int, list[int]] = defaultdict(list)
    for b in blacks:
        groups[find(b)].append(b)
    band_count: dict[int, int] = defaultdict(int)
    for a, _ in bands:
        band_count[find(a)] += 1
    roots = sorted(groups, key=lambda r: min(groups[r]))
    comp_chis = tuple(len(groups[r]) - band_count[r] for r in roots)
    connected = len(roots) == 1

    sides: dict[int, int] = {}
    nbrs: dict[int, list[int]] = defaultdict(list)
    for a, b in bands:
        nbrs[a].append(b)
        nbrs[b].append(a)
    orientable = True
    for r in roots:
        start = min(groups[r])
        sides[start] = 1
        stack = [start]
        while stack and orientable:
            f = stack.pop()
            for g in nbrs[f]:
                if g not in sides:
                    sides[g] = -sides[f]
                    stack.append(g)
                elif sides[g] == sides[f]:
                    orientable = False
                    break
    genus = None
    if connected and orientable:
        genus = (2 - chi - n_links) // 2
    return SurfaceStats(chi, n_links, genus, connected,
                        sides if orientable else NON_ORIENTABLE, comp_chis)


def standard_surface(d: PlanarDiagram, unbounded_face_id: Optional[int] = None) -> tuple[list[Face], SurfaceStats]:
    colored = checkerboard(d, trace_faces(d), unbounded_face_id)
    return colored, surface_stats(d, colored)
