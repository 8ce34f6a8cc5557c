"""Seeded random instances for property tests and the ``random`` subcommand."""

from __future__ import annotations

import random
from typing import Optional

from .diagram import PlanarDiagram
from .model import ACircle, BCircle, CRegion, FlatAugmentedLink, Incidence
from .surgery import Builder

MAX_CIRCLES = 15


def prufer_tree(n: int, rng: random.Random) -> list[tuple[int, int]]:
    """Uniform random labelled tree on ``n`` vertices."""
    if n < 2:
        return []
    if n == 2:
        return [(0, 1)]
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = min(w for w in range(n) if degree[w] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    a, b = [w for w in range(n) if degree[w] == 1]
    edges.append((a, b))
    return edges


def _find(parent: list[int], v: int) -> int:
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


def random_ald(seed: int, size: int = 6, *, tree: Optional[bool] = None,
               connected: bool = False, max_a: int = 3) -> FlatAugmentedLink:
    """A random flat ALD on between 2 and ``size`` C-regions.

    Half the instances (unless ``tree`` forces a branch) have a uniform random
    spanning tree as G_B; the rest a random multigraph with loops and
    parallel edges allowed.  ``connected`` adds A-circles until regions and
    circles form one connected piece.
    """
    rng = random.Random(seed)
    n = rng.randint(2, max(2, size))
    if tree is None:
        tree = rng.random() < 0.5
    if tree:
        edges = prufer_tree(n, rng)
    else:
        edges = []
        for _ in range(rng.randint(0, n + 2)):
            a = rng.randrange(n)
            b = a if rng.random() < 0.1 else rng.randrange(n)
            edges.append((a, b))
    # leave room for the A-circles that may be needed to connect everything
    edges = edges[:MAX_CIRCLES - (n - 1 if connected else 0)]
    a_pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, max_a))]
    a_pairs = a_pairs[:MAX_CIRCLES - len(edges) - (n - 1 if connected else 0)]
    if connected:
        parent = list(range(n))
        for a, b in edges + a_pairs:
            parent[_find(parent, a)] = _find(parent, b)
        roots = sorted({_find(parent, v) for v in range(n)})
        rng.shuffle(roots)
        for r1, r2 in zip(roots, roots[1:]):
            a_pairs.append((r1, r2))
    numbers = list(range(1, len(edges) + len(a_pairs) + 1))
    rng.shuffle(numbers)
    incid: dict[int, list[Incidence]] = {v: [] for v in range(n)}
    bs, as_ = [], []
    for k, (a, b) in enumerate(edges):
        if rng.random() < 0.5:
            a, b = b, a
        cid = f"B{numbers[k]}"
        bs.append(BCircle(cid, f"C{a}", f"C{b}"))
        incid[a].append(Incidence(cid, "m"))
        incid[b].append(Incidence(cid, "n"))
    for k, (a, b) in enumerate(a_pairs):
        cid = f"A{numbers[len(edges) + k]}"
        as_.append(ACircle(cid, f"C{a}", f"C{b}"))
        incid[a].append(Incidence(cid, "1"))
        incid[b].append(Incidence(cid, "2"))
    regions = []
    for v in range(n):
        seq = incid[v]
        rng.shuffle(seq)
        regions.append(CRegion(f"C{v}", tuple(seq)))
    return FlatAugmentedLink(tuple(regions), tuple(bs), tuple(as_), "C0")


# ------------------------------------------------------------ pipeline mode

def _middle_pieces(b: Builder, circle: set[int]) -> set[int]:
    verts = {v for e in circle for v, _ in b.ends[e]}
    out = set()
    for v in verts:
        for k in (0, 2):
            e = b.slots[v][k]
            if all(w in verts for w, _ in b.ends[e]):
                out.add(e)
    return out


def _one_sided(b: Builder, index: dict, e: int, face: int) -> bool:
    t, h = b.ends[e]
    return (index[t] == face) != (index[h] == face)


def random_flat_diagram(seed: int, size: int = 4, alternating: float = 0.0) -> PlanarDiagram:
    """A random connected diagram of a flat augmented link.

    Starts from one unknot grabbed by a crossing circle, then adds up to
    ``size - 1`` more circles, each either grabbing two strands across a face
    or linking a fresh unknot into a face.  Circles never sit inside other
    circles.  Each circle is drawn alternating with probability ``alternating``.
    """
    rng = random.Random(seed)
    b = Builder()
    e = b.add_loop()
    e2 = b.slots[b.ends[e][1][0]][1]
    b.insert_circle(e, e2, b.faces()[b.ends[e][0]], rng.random() < alternating)
    middle = _middle_pieces(b, b.circles[-1])
    for _ in range(rng.randint(0, max(0, size - 1))):
        index = b.faces()
        inner = {index[d] for m in middle for d in b.ends[m]}
        on_circle = set().union(*b.circles)
        strands = sorted(e for e in b.ends if e not in on_circle and e not in middle)
        faces = sorted(set(index.values()) - inner)
        alt = rng.random() < alternating
        face = rng.choice(faces)
        touching = [e for e in strands if _one_sided(b, index, e, face)]
        if not touching:
            continue
        if rng.random() < 0.3 or len(touching) < 2:
            e1 = rng.choice(touching)
            lp = b.add_loop()
            b.insert_circle(e1, lp, face, alt, face2=b.faces()[b.ends[lp][0]])
        else:
            e1, e2 = rng.sample(touching, 2)
            b.insert_circle(e1, e2, face, alt)
        middle |= _middle_pieces(b, b.circles[-1])
    index = b.faces()
    inner = {index[d] for m in middle for d in b.ends[m]}
    darts = sorted(d for d, f in index.items() if f not in inner)
    b.marker = b.edge_dart_key(rng.choice(darts))
    return b.to_diagram()
