"""The graph G_B and the tree criterion for fibering."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .model import ALTERNATING, FlatAugmentedLink, validate

FIBERED = "Fibered"
NOT_FIBERED = "NotFibered"
INAPPLICABLE = "Inapplicable"


@dataclass(frozen=True)
class GraphEdge:
    id: str
    u: str
    v: str

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class FiberGraph:
    vertices: tuple[str, ...]
    edges: tuple[GraphEdge, ...]
    root: Optional[str] = None

    def adjacency(self) -> dict[str, list[tuple[str, GraphEdge]]]:
        adj: dict[str, list[tuple[str, GraphEdge]]] = {v: [] for v in self.vertices}
        for e in self.edges:
            adj[e.u].append((e.v, e))
            if not e.is_loop:
                adj[e.v].append((e.u, e))
        return adj

    def components(self) -> list[list[str]]:
        adj = self.adjacency()
        seen: set[str] = set()
        out = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for w, _ in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            out.append(sorted(comp))
        return out

    def spanning_forest(self) -> tuple[list[GraphEdge], dict[str, Optional[GraphEdge]]]:
        """BFS forest; vertices and edges visited in sorted order.

        Returns (forest edges, parent edge of each vertex).
        """
        adj = self.adjacency()
        parent: dict[str, Optional[GraphEdge]] = {}
        forest = []
        starts = sorted(self.vertices, key=lambda v: (v != self.root, v))
        for s in starts:
            if s in parent:
                continue
            parent[s] = None
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for w, e in sorted(adj[v], key=lambda t: t[1].id):
                    if w not in parent:
                        parent[w] = e
                        forest.append(e)
                        queue.append(w)
        return forest, parent

    def fundamental_cycles(self) -> list[list[tuple[GraphEdge, int]]]:
        """One cycle per non-forest edge, as (edge, +1 if run u->v else -1)."""
        forest, parent = self.spanning_forest()
        tree_ids = {e.id for e in forest}

        def path_to_root(v):
            out = []
            while parent[v] is not None:
                e = parent[v]
                w = e.u if e.v == v else e.v
                out.append((e, v, w))
                v = w
            return out

        cycles = []
        for e in sorted(self.edges, key=lambda e: e.id):
            if e.id in tree_ids:
                continue
            if e.is_loop:
                cycles.append([(e, 1)])
                continue
            # walk e from u to v, then return v -> u through the forest
            pv, pu = path_to_root(e.v), path_to_root(e.u)
            vu = [x[0].id for x in pv]
            uu = [x[0].id for x in pu]
            common = set(vu) & set(uu)
            cyc = [(e, 1)]
            for edge, a, b in pv:
                if edge.id in common:
                    break
                cyc.append((edge, 1 if (edge.u, edge.v) == (a, b) else -1))
            down = []
            for edge, a, b in pu:
                if edge.id in common:
                    break
                down.append((edge, 1 if (edge.u, edge.v) == (b, a) else -1))
            cyc.extend(reversed(down))
            cycles.append(cyc)
        return cycles

    def to_dot(self) -> str:
        lines = ["graph G_B {"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for e in self.edges:
            lines.append(f'  "{e.u}" -- "{e.v}" [label="{e.id}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Certificate:
    kind: str  # SpanningTree | Disconnected | Cycle | Reason
    edges: tuple[str, ...] = ()
    components: tuple[tuple[str, ...], ...] = ()
    signs: tuple[int, ...] = ()
    reason: str = ""

    def to_json(self) -> dict:
        if self.kind == "SpanningTree":
            return {"kind": self.kind, "edges": list(self.edges)}
        if self.kind == "Disconnected":
            return {"kind": self.kind, "components": [list(c) for c in self.components]}
        if self.kind == "Cycle":
            return {"kind": self.kind, "edges": list(self.edges), "signs": list(self.signs)}
        return {"kind": self.kind, "reason": self.reason}

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        return cls(data["kind"], tuple(data.get("edges", ())),
                   tuple(tuple(c) for c in data.get("components", ())),
                   tuple(data.get("signs", ())), data.get("reason", ""))


@dataclass(frozen=True)
class Verdict:
    outcome: str
    certificates: tuple[Certificate, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {"outcome": self.outcome, "certificates": [c.to_json() for c in self.certificates]}

    @classmethod
    def from_json(cls, data: dict) -> "Verdict":
        return cls(data["outcome"], tuple(Certificate.from_json(c) for c in data["certificates"]))


def build_gb(ald: FlatAugmentedLink) -> FiberGraph:
    edges = tuple(GraphEdge(b.id, b.m_side, b.n_side) for b in ald.b_circles)
    return FiberGraph(tuple(ald.region_ids), edges, ald.unbounded)


def is_tree(g: FiberGraph) -> Verdict:
    comps = g.components()
    cycles = g.fundamental_cycles()
    if len(comps) == 1 and not cycles:
        forest, _ = g.spanning_forest()
        return Verdict(FIBERED, (Certificate("SpanningTree", tuple(sorted(e.id for e in forest))),))
    certs = []
    if len(comps) > 1:
        certs.append(Certificate("Disconnected", components=tuple(tuple(c) for c in comps)))
    for cyc in cycles:
        certs.append(Certificate("Cycle", tuple(e.id for e, _ in cyc), signs=tuple(s for _, s in cyc)))
    return Verdict(NOT_FIBERED, tuple(certs))


def analyze(ald: FlatAugmentedLink) -> Verdict:
    bad = validate(ald)
    if bad:
        text = "; ".join(f"{v.kind}: {v.detail}" for v in bad)
        return Verdict(INAPPLICABLE, (Certificate("Reason", reason=f"invalid ALD: {text}"),))
    if ALTERNATING in ald.styles:
        return Verdict(INAPPLICABLE, (Certificate(
            "Reason", reason="alternating crossing circles present; run lift_alternating first"),))
    return is_tree(build_gb(ald))
