"""Mutable rotation-system builder used to edit diagrams.

Vertices are crossings (4 slots) or temporary bivalent points (2 slots, used
to carry crossingless loops until a circle is attached).  Slots are listed
counter-clockwise.  Every edge is stored oriented, tail to head, along its
link component.  A *dart* ``(v, s)`` leaves vertex ``v`` through slot ``s``;
the face of a dart is the face on its right.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .diagram import CircleTag, PlanarDiagram, check_diagram, components
from .errors import MalformedCode

Dart = tuple[int, int]


@dataclass
class Builder:
    slots: dict[int, list[int]] = field(default_factory=dict)
    under_in: dict[int, Optional[int]] = field(default_factory=dict)
    ends: dict[int, list[Dart]] = field(default_factory=dict)  # [tail, head]
    circles: list[set[int]] = field(default_factory=list)
    twists: list[tuple[int, ...]] = field(default_factory=list)
    marker: Optional[tuple[int, bool]] = None  # (edge, from_tail)
    _next_v: int = 0
    _next_e: int = 1

    # -- construction
    @classmethod
    def from_diagram(cls, d: PlanarDiagram) -> "Builder":
        b = cls()
        for i, x in enumerate(d.crossings):
            b.slots[i] = list(x)
            b.under_in[i] = 0
        b._next_v = len(d.crossings)
        for comp in components(d):
            for i, _, out in comp.passes:
                e = d.crossings[i][out]
                head = d.partner((i, out))
                b.ends[e] = [(i, out), head]
        b._next_e = max(b.ends, default=0) + 1
        for c in d.circles:
            b.circles.append(set(c.edges))
            b.twists.append(tuple(c.twist))
        if d.unbounded is not None:
            b.marker = b.edge_dart_key(d.unbounded)
        return b

    def new_vertex(self, n: int) -> int:
        v = self._next_v
        self._next_v += 1
        self.slots[v] = [0] * n
        self.under_in[v] = None
        return v

    def new_edge(self, tail: Dart, head: Dart) -> int:
        e = self._next_e
        self._next_e += 1
        self.ends[e] = [tail, head]
        self.slots[tail[0]][tail[1]] = e
        self.slots[head[0]][head[1]] = e
        return e

    def add_loop(self) -> int:
        """Add a crossingless loop; returns its edge oriented with the
        loop's outside on the right."""
        u, w = self.new_vertex(2), self.new_vertex(2)
        e1 = self.new_edge((u, 1), (w, 0))
        self.new_edge((w, 1), (u, 0))
        return e1

    # -- queries
    def edge_dart_key(self, dart: Dart) -> tuple[int, bool]:
        e = self.slots[dart[0]][dart[1]]
        return e, self.ends[e][0] == dart

    def dart_of(self, e: int, from_tail: bool) -> Dart:
        return self.ends[e][0] if from_tail else self.ends[e][1]

    def partner(self, dart: Dart) -> Dart:
        v, s = dart
        t, h = self.ends[self.slots[v][s]]
        return h if t == dart else t

    def faces(self) -> dict[Dart, int]:
        index: dict[Dart, int] = {}
        n = 0
        for v in sorted(self.slots):
            for s in range(len(self.slots[v])):
                if (v, s) in index:
                    continue
                d = (v, s)
                while d not in index:
                    index[d] = n
                    w, r = self.partner(d)
                    d = (w, (r + 1) % len(self.slots[w]))
                n += 1
        return index

    def edge_faces(self, e: int) -> tuple[int, int]:
        """(face right of tail->head, face right of head->tail)."""
        index = self.faces()
        t, h = self.ends[e]
        return index[t], index[h]

    # -- surgery
    def subdivide(self, e: int, from_tail: bool, count: int) -> tuple[list[int], list[int]]:
        """Insert ``count`` crossings on ``e``, ordered starting at the chosen end.

        Each new crossing gets slots ``[toward start, right, toward end, left]``
        relative to travel from the chosen end.  Returns (vertices, pieces);
        pieces run from the start end and are oriented like ``e``.
        """
        tail, head = self.ends.pop(e)
        start, end = (tail, head) if from_tail else (head, tail)
        vs = [self.new_vertex(4) for _ in range(count)]
        chain = [start] + [x for v in vs for x in ((v, 0), (v, 2))] + [end]
        pieces = []
        for a, b in zip(chain[::2], chain[1::2]):
            pieces.append(self.new_edge(a, b) if from_tail else self.new_edge(b, a))
        if self.marker is not None and self.marker[0] == e:
            self.marker = (pieces[0], self.marker[1])
        for c in self.circles:
            if e in c:
                c.discard(e)
                c.update(pieces)
        return vs, pieces

    def insert_circle(self, e1: int, e2: int, face: int, alternating: bool = False,
                      face2: Optional[int] = None) -> int:
        """Add a crossing circle grabbing ``e1`` and ``e2``, both bordering ``face``.

        The circle's two chords run through ``face``; its two caps sit on the
        far sides of the strands.  Flat pattern: the circle passes over both
        strands on one chord and under both on the other.  Returns the index
        of the new circle in ``self.circles``.

        ``face2`` lets ``e2`` lie on a separate piece of the diagram sitting
        inside ``face``; it names the face of that piece which merges with it.
        """
        if e1 == e2:
            raise MalformedCode("a crossing circle needs two distinct strands")
        index = self.faces()
        starts = []
        for e, face in ((e1, face), (e2, face if face2 is None else face2)):
            t, h = self.ends[e]
            if index[t] == face and index[h] != face:
                starts.append(True)
            elif index[h] == face and index[t] != face:
                starts.append(False)
            else:
                raise MalformedCode(f"edge {e} does not border face {face} on exactly one side")
        (p1, p2), _ = self.subdivide(e1, starts[0], 2)
        (q1, q2), _ = self.subdivide(e2, starts[1], 2)
        circle = {
            self.new_edge((p1, 1), (q2, 1)),
            self.new_edge((q2, 3), (q1, 3)),
            self.new_edge((q1, 1), (p2, 1)),
            self.new_edge((p2, 3), (p1, 3)),
        }
        # strand travels slot 0 -> 2 iff it is oriented from the chosen start
        strand_in = {p1: 0 if starts[0] else 2, p2: 0 if starts[0] else 2,
                     q1: 0 if starts[1] else 2, q2: 0 if starts[1] else 2}
        circle_in = {p1: 3, q2: 1, q1: 3, p2: 1}
        circle_over = {p1, q2} if not alternating else {p1, q1}
        for v in (p1, p2, q1, q2):
            self.under_in[v] = strand_in[v] if v in circle_over else circle_in[v]
        self.circles.append(circle)
        self.twists.append(())
        return len(self.circles) - 1

    def remove_straight_through(self, vs: set[int]) -> None:
        """Delete crossings ``vs`` and join the strands that ran through them."""
        done: set[Dart] = set()
        joins = []
        for v in sorted(vs):
            for s in range(4):
                outer = self.partner((v, s))
                if outer[0] in vs or (v, s) in done:
                    continue
                cur = (v, s)
                while True:
                    done.add(cur)
                    w, r = cur
                    nxt = (w, (r + 2) % 4)
                    done.add(nxt)
                    far = self.partner(nxt)
                    if far[0] not in vs:
                        break
                    cur = far
                done.add(far)
                joins.append((outer, (v, s), far, nxt))
        seen_pairs = set()
        new_edges = []
        for outer, near, far, near2 in joins:
            key = frozenset((outer, far))
            if key in seen_pairs:
                continue
            seen_pairs.add(key)
            e_in = self.slots[near[0]][near[1]]
            forward = self.ends[e_in][0] == outer  # oriented outer -> chain
            new_edges.append((outer, far) if forward else (far, outer))
        for v in vs:
            for e in set(self.slots[v]):
                self.ends.pop(e, None)
            del self.slots[v]
            del self.under_in[v]
        for tail, head in new_edges:
            e = self.new_edge(tail, head)
            if self.marker is not None and self.marker[0] not in self.ends:
                self.marker = (e, True)

    def suppress_bivalent(self) -> None:
        for v in [v for v, s in self.slots.items() if len(s) == 2]:
            a, b = self.slots[v]
            if a == b:
                raise MalformedCode("crossingless loop left in the diagram")
            ta, ha = self.ends[a]
            tb, hb = self.ends[b]
            # keep `a` as the edge arriving at v, `b` as the one leaving
            if ha[0] != v:
                a, b = b, a
                ta, ha, tb, hb = tb, hb, ta, ha
            self.ends.pop(b)
            self.ends[a] = [ta, hb]
            self.slots[hb[0]][hb[1]] = a
            if self.marker is not None and self.marker[0] == b:
                self.marker = (a, self.marker[1])
            for c in self.circles:
                c.discard(b)
            del self.slots[v]
            del self.under_in[v]

    # -- output
    def to_diagram(self) -> PlanarDiagram:
        self.suppress_bivalent()
        order = sorted(self.slots)
        vidx = {v: i for i, v in enumerate(order)}
        elabel = {e: i + 1 for i, e in enumerate(sorted(self.ends))}
        crossings = []
        rot = {}
        for v in order:
            u = self.under_in[v]
            if u is None:
                raise MalformedCode(f"vertex {v} has no crossing data")
            rot[v] = u
            s = self.slots[v]
            crossings.append(tuple(elabel[s[(u + k) % 4]] for k in range(4)))
        circles = tuple(
            CircleTag(tuple(sorted(elabel[e] for e in c)), tuple(vidx[t] for t in tw if t in vidx))
            for c, tw in zip(self.circles, self.twists)
        )
        unbounded = None
        if self.marker is not None:
            v, s = self.dart_of(*self.marker)
            unbounded = (vidx[v], (s - rot[v]) % 4)
        d = PlanarDiagram(tuple(crossings), circles, unbounded)
        check_diagram(d)
        return d
