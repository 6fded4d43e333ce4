# Derived (barycentric) subdivisions with carrier tracking, derived orders,
# H-splitting subdivisions and derived neighborhoods.
#
# A vertex of sd C is identified with the parent face it subdivides, so the
# vertex labels of sd C are parent face tuples and a face of sd C is a chain
# of parent faces (stored as a sorted tuple of labels).
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Optional

from .complexes import (
    SimplicialComplex,
    box_vertices,
    face,
)
from .geometry import GeometricComplex, Halfspace, Vec, barycenter, vec


class CyclicRelation(ValueError):
    pass


class NotSubcomplex(ValueError):
    pass


class NonGenericHyperplane(ValueError):
    pass


@dataclass
class DerivedComplex:
    complex: SimplicialComplex
    carrier: Dict[object, tuple]  # sd-vertex label -> face of the root parent
    parent: object
    positions: Optional[Dict[object, Vec]] = None

    def geometric(self) -> GeometricComplex:
        if self.positions is None:
            raise ValueError("no geometric positions attached")
        return GeometricComplex(self.complex, self.positions)


def _face_vertex_labels(c, f):
    """Vertex labels spanned by a face, for either face encoding."""
    if c.kind == "simplicial":
        return list(f)
    return box_vertices(f)


def _flags(c) -> list:
    """Maximal chains of the face poset, via covering relations."""
    memo: dict = {}

    def down(f):
        if c.fdim(f) == 0:
            return [(f,)]
        if f in memo:
            return memo[f]
        out = [(f,) + ch for r in c.fcovers(f) for ch in down(r)]
        memo[f] = out
        return out

    flags = []
    for top in c.facets:
        flags.extend(down(top))
    return flags


def sd(c, positions: Optional[Dict[object, Vec]] = None) -> DerivedComplex:
    """Derived subdivision; vertices are the faces of c, faces are chains.

    When vertex positions for c are supplied, the subdivision vertices are
    placed at barycenters."""
    complex_ = SimplicialComplex.from_facets(
        tuple(sorted(flag)) for flag in _flags(c))
    carrier = {u: u for u in (f for f in c.faces)}
    pos = None
    if positions is not None:
        pos = {u: barycenter([vec(positions[v])
                              for v in _face_vertex_labels(c, u)])
               for u in c.faces}
    return DerivedComplex(complex_, carrier, c, pos)


def sd_m(c, m: int, positions: Optional[Dict[object, Vec]] = None) -> DerivedComplex:
    """m-fold derived subdivision with carriers composed down to c."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if c.kind == "simplicial":
        carrier = {v: (v,) for v in c.vertices}
    else:
        carrier = {v: c.vertex_box(v) for v in c.vertices}
    cur = DerivedComplex(c, carrier, c, None if positions is None
                         else {v: vec(p) for v, p in positions.items()})
    for _ in range(m):
        nxt = sd(cur.complex, cur.positions)
        if c.kind == "simplicial":
            # the carriers of a chain's members are nested, so their union
            # is the top one; at the first level it is the face itself
            nxt.carrier = {u: face(w for x in u for w in cur.carrier[x])
                           for u in nxt.carrier}
        else:
            nxt.carrier = {u: max((cur.carrier[x] for x in u),
                                  key=lambda b: sum(hi - lo for lo, hi in b))
                           for u in nxt.carrier}
        nxt.parent = c
        cur = nxt
    return cur


# ---------------------------------------------------------------------------
# derived orders

@dataclass
class DerivedOrder:
    order: tuple  # sd-vertex labels (= parent faces), first = smallest
    index: Dict[object, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {f: i for i, f in enumerate(self.order)}

    def less(self, a, b) -> bool:
        return self.index[a] < self.index[b]


def derived_order(c, seed_order: Iterable) -> DerivedOrder:
    """Total order on the faces of c (= vertices of sd c) extending the
    partial order generated by: for each face s and strict subface t, t
    precedes s if t is the seed-minimal face of s, and s precedes t
    otherwise.  Deterministic topological extension (ties by face id)."""
    seed = [s if isinstance(s, tuple) else (s,) for s in seed_order]
    for s in seed:
        if s not in c.faces:
            raise ValueError(f"seed element {s} is not a face")
    seed_pos = {s: i for i, s in enumerate(seed)}
    succs: Dict[tuple, set] = {f: set() for f in c.faces}
    indeg = {f: 0 for f in c.faces}

    def add_edge(a, b):
        if b not in succs[a]:
            succs[a].add(b)
            indeg[b] += 1

    for a, b in zip(seed, seed[1:]):
        add_edge(a, b)
    for s in c.faces:
        in_seed = [t for t in c.fsubfaces(s) if t != s and t in seed_pos]
        m = min(in_seed, key=lambda t: seed_pos[t]) if in_seed else None
        for t in c.fsubfaces(s):
            if t == s:
                continue
            if t == m:
                add_edge(t, s)
            else:
                add_edge(s, t)
    ready = [f for f in c.faces if indeg[f] == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        f = heapq.heappop(ready)
        out.append(f)
        for g in sorted(succs[f]):
            indeg[g] -= 1
            if indeg[g] == 0:
                heapq.heappush(ready, g)
    if len(out) != len(c.faces):
        raise CyclicRelation("seed order is incompatible with the closure")
    return DerivedOrder(tuple(out))


# ---------------------------------------------------------------------------
# derived neighborhoods

def derived_neighborhood(d: SimplicialComplex, c: SimplicialComplex) -> SimplicialComplex:
    """Union of the stars, in sd c, of all faces of sd d: the closure of
    every maximal chain of c that contains a face of d."""
    if not d.faces <= c.faces:
        raise NotSubcomplex("first argument is not a subcomplex of the second")
    keep = [tuple(sorted(flag)) for flag in _flags(c)
            if any(el in d.faces for el in flag)]
    if not keep:
        return SimplicialComplex.from_faces([])
    return SimplicialComplex.from_facets(keep)


# ---------------------------------------------------------------------------
# H-splitting derived subdivisions

def h_splitting_sd(g: GeometricComplex, h: Halfspace) -> DerivedComplex:
    """Derived subdivision placing the vertex of every H-crossing face on H
    (at the centroid of the crossing points of its edges); other faces get
    barycenters.  Requires no vertex of g on H."""
    c = g.complex
    val = {v: h.value(g.pos(v)) for v in c.vertices}
    if any(s == 0 for s in val.values()):
        raise NonGenericHyperplane("a vertex lies on the hyperplane")
    pos: Dict[object, Vec] = {}
    for f in c.faces:
        if any(val[v] > 0 for v in f) and any(val[v] < 0 for v in f):
            cuts = []
            for i, a in enumerate(f):
                for b in f[i + 1:]:
                    if (val[a] > 0) != (val[b] > 0):
                        t = val[a] / (val[a] - val[b])
                        pa, pb = g.pos(a), g.pos(b)
                        cuts.append(tuple(x + t * (y - x)
                                          for x, y in zip(pa, pb)))
            pos[f] = barycenter(cuts)
        else:
            pos[f] = barycenter(g.points_of(f))
    out = sd(c)
    out.positions = pos
    return out
