"""Independent fiberedness check through the push-off map on fundamental groups.

For a flat ALD without A-circles the standard surface and its complement
both have free fundamental group of rank ``q + r``.  The surface is a fiber
exactly when the push-off map is an isomorphism.  For trees we exhibit a
Nielsen reduction of the image tuple to the standard basis; otherwise we
exhibit a nonzero homology class that dies under the map.

All conjugating words are normalized to the identity, taking the base point
in the single ``+`` region.  Letters of the unbounded region are omitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import EmptyDiagram, HasACircles, InconsistentInput, NotATree
from .fibergraph import (FIBERED, INAPPLICABLE, NOT_FIBERED, FiberGraph, build_gb)
from .freegroup import NielsenTrace, Word, make_trace, nielsen_generates
from .intmatrix import det, left_kernel_vector, vecmat
from .model import ALTERNATING, FlatAugmentedLink, natural_key, validate
from .moves import FilledStructure, HopfRecord, deplumb


def u(name: str) -> str:
    return f"u_{name}"


def x(name: str) -> str:
    return f"x_{name}"


@dataclass(frozen=True)
class GeneratorMap:
    domain: tuple[str, ...]
    codomain: tuple[str, ...]
    images: dict = field(default_factory=dict)  # domain generator -> Word

    def __post_init__(self):
        if len(self.domain) != len(self.codomain):
            raise InconsistentInput(f"rank {len(self.domain)} domain vs {len(self.codomain)} codomain")
        allowed = set(self.codomain)
        for g, w in self.images.items():
            stray = w.generators() - allowed
            if stray:
                raise InconsistentInput(f"image of {g} uses {sorted(stray)}")

    @property
    def rank(self) -> int:
        return len(self.domain)

    def image_tuple(self) -> tuple[Word, ...]:
        return tuple(self.images[g] for g in self.domain)

    def to_json(self) -> dict:
        return {"domain": list(self.domain), "codomain": list(self.codomain),
                "images": {g: str(self.images[g]) for g in self.domain}}


@dataclass(frozen=True)
class HomologyMatrix:
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def row(self, label: str) -> tuple[int, ...]:
        return self.entries[self.rows.index(label)]

    def determinant(self) -> int:
        return det(self.entries)

    def apply_left(self, vec: dict) -> list[int]:
        v = [vec.get(r, 0) for r in self.rows]
        return vecmat(v, self.entries) if self.rows else []


def _letter(region: str, root: str) -> Word:
    return Word() if region == root else Word.gen(x(region))


def _rotated(boundary, key):
    if not boundary:
        return []
    start = min(range(len(boundary)), key=lambda k: (key(boundary[k].circle), k))
    return list(boundary[start:]) + list(boundary[:start])


def build_fstar(ald: FlatAugmentedLink) -> GeneratorMap:
    """Images of the surface generators for an ALD with no A-circles."""
    if ald.a_circles:
        raise HasACircles(f"{len(ald.a_circles)} A-circles; deplumb first")
    root = ald.unbounded
    bounded = [c.id for c in ald.c_regions if c.id != root]
    if not ald.b_circles and not bounded:
        raise EmptyDiagram("no B-circles and no bounded C-regions")
    images = {}
    for b in ald.b_circles:
        images[u(b.id)] = _letter(b.m_side, root) * ~_letter(b.n_side, root)
    for c in ald.c_regions:
        if c.id == root:
            continue
        w = Word()
        xc = _letter(c.id, root)
        for inc in _rotated(c.boundary, natural_key):
            xb = Word.gen(x(inc.circle))
            if inc.side == "m":
                w = w * xb * ~xc
            elif inc.side == "n":
                w = w * xc * ~xb
            else:
                raise InconsistentInput(f"{c.id}: incidence {inc} is not a B-circle side")
        images[u(c.id)] = w
    names = [b.id for b in ald.b_circles] + bounded
    return GeneratorMap(tuple(u(n) for n in names), tuple(x(n) for n in names), images)


def build_fstar_filled(k: FilledStructure) -> GeneratorMap:
    """Images after +-1 filling every B-circle of a tree.

    With ``P(v) = x_v x_parent^-1`` (just ``x_v`` next to the root) and
    ``s_v`` the sign of the filling on the edge above ``v``::

        u_v -> P(v)^(s_v) * prod over children c of P(c)^(-s_c)

    children taken in cyclic order after the parent edge.
    """
    if k.remaining:
        raise InconsistentInput(f"unfilled B-circles remain: {list(k.remaining)}")
    root = k.root
    up = {e.child: e for e in k.filled}
    bounded = [r for r in k.regions if r != root]
    if set(up) != set(bounded):
        raise NotATree("filled edges do not form a spanning tree")

    def piece(v: str) -> Word:
        e = up[v]
        return Word.gen(x(v)) * ~_letter(e.parent, root)

    images = {}
    for v in bounded:
        w = piece(v) ** up[v].sign
        for c in k.children.get(v, []):
            w = w * piece(c) ** (-up[c].sign)
        images[u(v)] = w
    return GeneratorMap(tuple(u(v) for v in bounded), tuple(x(v) for v in bounded), images)


def abelianize(m: GeneratorMap) -> HomologyMatrix:
    entries = tuple(tuple(m.images[g].exponent_sum(c) for c in m.codomain) for g in m.domain)
    return HomologyMatrix(m.domain, m.codomain, entries)


# ------------------------------------------------------------ obstructions

@dataclass(frozen=True)
class Witness:
    """A nonzero integer class in H_1 of the surface with zero image."""

    kind: str  # Cycle | Component | Kernel
    vector: dict = field(default_factory=dict)  # row label -> coefficient
    edges: tuple[str, ...] = ()
    regions: tuple[str, ...] = ()
    image: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"kind": self.kind, "vector": dict(self.vector), "edges": list(self.edges),
                "regions": list(self.regions), "image": list(self.image)}


def _checked(kind: str, m: HomologyMatrix, vec: dict, **kw) -> Witness:
    image = tuple(m.apply_left(vec))
    if any(image) or not any(vec.values()):
        raise InconsistentInput(f"{kind} witness does not lie in the left kernel")
    return Witness(kind, {k: v for k, v in vec.items() if v}, image=image, **kw)


def homology_obstruction(g: FiberGraph, m: HomologyMatrix) -> Optional[Witness]:
    """A witness that the abelianized map is not injective, or None if unimodular."""
    want_rows = {u(e.id) for e in g.edges} | {u(v) for v in g.vertices if v != g.root}
    if set(m.rows) != want_rows or len(m.cols) != len(m.rows):
        raise InconsistentInput("graph and homology matrix describe different links")
    cycles = g.fundamental_cycles()
    if cycles:
        cyc = min(cycles, key=lambda c: (len(c), sorted(natural_key(e.id) for e, _ in c)))
        vec: dict = {}
        for e, s in cyc:
            vec[u(e.id)] = vec.get(u(e.id), 0) + s
        return _checked("Cycle", m, vec, edges=tuple(e.id for e, _ in cyc))
    comps = [c for c in g.components() if g.root not in c]
    if comps:
        comp = comps[0]
        inside = set(comp)
        vec = {u(v): 1 for v in comp}
        edges = [e.id for e in g.edges if e.u in inside]
        for eid in edges:
            vec[u(eid)] = 1
        return _checked("Component", m, vec, edges=tuple(edges), regions=tuple(comp))
    if abs(m.determinant()) == 1:
        return None
    kern = left_kernel_vector(m.entries)
    if kern is None:
        raise InconsistentInput("non-unimodular matrix without a rational kernel")
    return _checked("Kernel", m, dict(zip(m.rows, kern)))


# ------------------------------------------------------------------ verify

@dataclass(frozen=True)
class OracleVerdict:
    outcome: str
    trace: Optional[NielsenTrace] = None
    witness: Optional[Witness] = None
    determinant: Optional[int] = None
    fstar: Optional[GeneratorMap] = None
    hopf: tuple[HopfRecord, ...] = ()
    reason: str = ""

    def to_json(self, with_trace: bool = False) -> dict:
        out = {"outcome": self.outcome, "determinant": self.determinant,
               "deplumbed": [h.to_json() for h in self.hopf]}
        if self.reason:
            out["reason"] = self.reason
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.trace is not None:
            out["trace_length"] = len(self.trace.moves)
            if with_trace:
                out["trace"] = self.trace.to_json()
        if self.fstar is not None:
            out["fstar"] = self.fstar.to_json()
        return out


def verify(ald: FlatAugmentedLink, budget: Optional[int] = None) -> OracleVerdict:
    bad = validate(ald)
    if bad:
        return OracleVerdict(INAPPLICABLE, reason=f"invalid ALD: {bad[0].kind}: {bad[0].detail}")
    if ALTERNATING in ald.styles:
        return OracleVerdict(INAPPLICABLE, reason="alternating crossing circles present")
    flat, hopf = deplumb(ald)
    if not flat.b_circles and len(flat.c_regions) == 1:
        return OracleVerdict(FIBERED, trace=make_trace((), ()), determinant=1, hopf=tuple(hopf))
    fm = build_fstar(flat)
    hm = abelianize(fm)
    d = hm.determinant()
    if abs(d) == 1:
        ok, trace = nielsen_generates(fm.image_tuple(), fm.rank, fm.codomain, budget)
        if ok:
            return OracleVerdict(FIBERED, trace=trace, determinant=d, fstar=fm, hopf=tuple(hopf))
        return OracleVerdict(NOT_FIBERED, trace=trace, determinant=d, fstar=fm, hopf=tuple(hopf),
                             reason="Nielsen reduction stopped at a non-basis tuple")
    w = homology_obstruction(build_gb(flat), hm)
    return OracleVerdict(NOT_FIBERED, witness=w, determinant=d, fstar=fm, hopf=tuple(hopf))
