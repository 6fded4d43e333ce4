# Elementary collapses, collapsibility / non-evasiveness search with
# certificates, and certificate transformers (cones, unions, subdivisions).
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from .complexes import SimplicialComplex, face


class NotFree(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Search ran out of nodes before reaching a conclusion."""


class ProvedImpossible(RuntimeError):
    """The full search tree was exhausted: no collapse sequence exists."""


class ProvedEvasive(RuntimeError):
    """Exhaustive recursion showed the complex is not non-evasive."""


@dataclass(frozen=True)
class CollapseCertificate:
    steps: tuple  # of (free face, coface) pairs, in replay order
    target: tuple  # facet list of the final complex

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class NECertificate:
    """Recursive witness of non-evasiveness: a leaf asserts the complex is
    a point; a node deletes `vertex`, certifying its link and the rest."""
    vertex: object = None
    link: Optional["NECertificate"] = None
    rest: Optional["NECertificate"] = None

    @property
    def is_leaf(self) -> bool:
        return self.vertex is None

    def deletion_order(self) -> list:
        out = []
        cur = self
        while not cur.is_leaf:
            out.append(cur.vertex)
            cur = cur.rest
        return out


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 200000
    seed: int = 0

    def __post_init__(self):
        if self.max_nodes <= 0:
            raise ValueError("budget must be positive")


# ---------------------------------------------------------------------------
# mutable state with O(dim) elementary collapses and undo

class MutableComplexState:
    """Tracks alive faces and, for every face, its alive covers.  A face is
    free iff it is alive with exactly one alive cover (that cover is then
    automatically a facet)."""

    def __init__(self, c):
        self.c = c
        self.alive: Set = set(c.faces)
        self.up: Dict[object, Set] = {f: set() for f in c.faces}
        for f in c.faces:
            for r in c.fcovers(f):
                if r in self.up:
                    self.up[r].add(f)
        self.free: Set = {f for f in self.alive if len(self.up[f]) == 1}

    def _after_change(self, r):
        if r in self.alive and len(self.up[r]) == 1:
            self.free.add(r)
        else:
            self.free.discard(r)

    def _remove(self, x):
        self.alive.discard(x)
        self.free.discard(x)
        for r in self.c.fcovers(x):
            if r in self.up:
                self.up[r].discard(x)
                self._after_change(r)

    def _revive(self, x):
        self.alive.add(x)
        for r in self.c.fcovers(x):
            if r in self.up:
                self.up[r].add(x)
                self._after_change(r)
        self._after_change(x)

    def coface_of(self, sigma):
        ups = self.up[sigma]
        if len(ups) != 1:
            raise NotFree(sigma)
        return next(iter(ups))

    def collapse(self, sigma):
        """Remove the free face sigma and its unique coface; returns an
        undo token."""
        tau = self.coface_of(sigma)
        if self.up[tau]:
            raise NotFree(sigma)
        self._remove(tau)
        self._remove(sigma)
        return (sigma, tau)

    def undo(self, token):
        sigma, tau = token
        self._revive(sigma)
        self._revive(tau)

    def is_single_point(self) -> bool:
        return len(self.alive) == 1 and self.c.fdim(next(iter(self.alive))) == 0

    def facets_now(self) -> list:
        return sorted(f for f in self.alive if not self.up[f])


# ---------------------------------------------------------------------------
# basics

def free_faces(c) -> set:
    state = MutableComplexState(c)
    return set(state.free)


def elementary_collapse(c, sigma):
    """Functional single collapse step: returns c minus sigma and its
    unique strict coface."""
    sigma = tuple(sigma)
    cofaces = [f for f in c.faces if f != sigma and c.fcontains(f, sigma)]
    if len(cofaces) != 1:
        raise NotFree(sigma)
    return c.with_faces(c.faces - {sigma, cofaces[0]})


# ---------------------------------------------------------------------------
# cones

def cone_apexes(c: SimplicialComplex) -> list:
    """Vertices contained in every facet."""
    common = set(c.facets[0])
    for f in c.facets[1:]:
        common &= set(f)
    return sorted(v for v in common if (v,) in c.faces)


def cone_collapse_steps(c: SimplicialComplex, apex, keep=frozenset()) -> list:
    """Collapse a cone with the given apex down to the cone over `keep`
    (a subcomplex of the base, given as a face set; empty means collapse
    to the apex).  Pairs (sigma, apex*sigma) in decreasing dimension."""
    base = [f for f in c.faces if apex not in f and f not in keep]
    steps = []
    for sigma in sorted(base, key=lambda f: (-len(f), f)):
        steps.append((sigma, face(sigma + (apex,))))
    return steps


def ne_cone(c: SimplicialComplex, apex=None) -> NECertificate:
    """Constructive non-evasiveness of a cone: delete non-apex vertices
    one by one; every link is again a cone."""
    if c.is_point():
        return NECertificate()
    if apex is None or (apex,) not in c.faces:
        apexes = cone_apexes(c)
        if not apexes:
            raise ValueError("complex is not a cone")
        apex = apexes[0]
    v = min(u for u in c.vertices if u != apex)
    link = c.link((v,))
    rest = c.delete_face((v,))
    return NECertificate(v, ne_cone(link, apex), ne_cone(rest, apex))


# ---------------------------------------------------------------------------
# search

def _canonical_key(state: MutableComplexState):
    facets = state.facets_now()
    verts = sorted({v for f in facets for v in _face_vertices(f)})
    vmap = {v: i for i, v in enumerate(verts)}
    return tuple(sorted(tuple(vmap[v] for v in _face_vertices(f))
                        for f in facets))


def _face_vertices(f):
    # works for simplicial faces; boxes canonicalize by identity
    return f


def collapse_search(c, target=None, budget: SearchBudget = None) -> CollapseCertificate:
    """Backtracking search for a collapse sequence from c to `target`
    (None: any single vertex).  Memoizes failed states; raises
    ProvedImpossible on exhaustion, BudgetExceeded on the node budget."""
    budget = budget or SearchBudget()
    state = MutableComplexState(c)
    if target is not None:
        target_faces = frozenset(target.faces)
        if not target_faces <= frozenset(c.faces):
            raise ValueError("target is not a subcomplex")
    else:
        target_faces = None
    failed: Set = set()
    nodes = [0]
    steps: List[Tuple] = []

    def done() -> bool:
        if target_faces is None:
            return state.is_single_point()
        return state.alive == target_faces

    def key():
        if target_faces is None and c.kind == "simplicial":
            return _canonical_key(state)
        return frozenset(state.alive)

    def dfs() -> bool:
        if done():
            return True
        k = key()
        if k in failed:
            return False
        nodes[0] += 1
        if nodes[0] > budget.max_nodes:
            raise BudgetExceeded(nodes[0])
        choices = sorted(state.free, key=lambda f: (-c.fdim(f), f))
        if target_faces is not None:
            choices = [f for f in choices if f not in target_faces
                       and state.coface_of(f) not in target_faces]
        for sigma in choices:
            token = state.collapse(sigma)
            steps.append(token)
            if dfs():
                return True
            steps.pop()
            state.undo(token)
        failed.add(k)
        return False

    if dfs():
        cert = CollapseCertificate(tuple(steps), tuple(state.facets_now()))
        from .verify import verify_certificate
        ok, why = verify_certificate(c, cert, target)
        if not ok:
            raise AssertionError(f"internal: produced invalid certificate: {why}")
        return cert
    raise ProvedImpossible("no collapse sequence exists")


def is_non_evasive(c: SimplicialComplex, budget: SearchBudget = None,
                   _failed=None, _nodes=None) -> NECertificate:
    """Recursive search for a non-evasiveness certificate.  Cones are
    handled constructively; otherwise vertices are tried in order with
    memoized failures.  Raises ProvedEvasive or BudgetExceeded."""
    budget = budget or SearchBudget()
    failed = _failed if _failed is not None else set()
    nodes = _nodes if _nodes is not None else [0]
    if c.is_empty():
        raise ProvedEvasive("empty complex")
    if c.is_point():
        return NECertificate()
    apexes = cone_apexes(c)
    if apexes:
        return ne_cone(c, apexes[0])
    k = _canonical_faces_key(c)
    if k in failed:
        raise ProvedEvasive("memoized")
    nodes[0] += 1
    if nodes[0] > budget.max_nodes:
        raise BudgetExceeded(nodes[0])
    for v in c.vertices:
        link = c.link((v,))
        rest = c.delete_face((v,))
        try:
            lc = is_non_evasive(link, budget, failed, nodes)
            rc = is_non_evasive(rest, budget, failed, nodes)
        except ProvedEvasive:
            continue
        return NECertificate(v, lc, rc)
    failed.add(k)
    raise ProvedEvasive("all vertex choices fail")


def _canonical_faces_key(c: SimplicialComplex):
    verts = c.vertices
    vmap = {v: i for i, v in enumerate(verts)}
    return tuple(sorted(tuple(vmap[v] for v in f) for f in c.facets))


# ---------------------------------------------------------------------------
# certificate transformers

def ne_to_collapse(c: SimplicialComplex, cert: NECertificate) -> CollapseCertificate:
    """Turn a non-evasiveness certificate into a collapse-to-point
    certificate: play the link's collapse inside the vertex star, drop the
    vertex along its last edge, recurse on the deletion."""
    steps = _ne_to_collapse_steps(c, cert)
    final = _replay_final(c, steps)
    return CollapseCertificate(tuple(steps), tuple(final))


def _ne_to_collapse_steps(c: SimplicialComplex, cert: NECertificate) -> list:
    if cert.is_leaf:
        return []
    v = cert.vertex
    link = c.link((v,))
    link_steps = _ne_to_collapse_steps(link, cert.link)
    steps = [(face(s + (v,)), face(t + (v,))) for s, t in link_steps]
    # the link is now a single vertex w; remove v along the edge vw
    w = _ne_final_vertex(link, cert.link)
    steps.append(((v,), face((v, w))))
    rest = c.delete_face((v,))
    steps.extend(_ne_to_collapse_steps(rest, cert.rest))
    return steps


def _ne_final_vertex(c: SimplicialComplex, cert: NECertificate):
    cur = c
    while not cert.is_leaf:
        cur = cur.delete_face((cert.vertex,))
        cert = cert.rest
    return cur.vertices[0]


def _replay_final(c, steps):
    removed = set()
    for s, t in steps:
        removed.add(s)
        removed.add(t)
    return c.with_faces(c.faces - removed).facets


def union_collapse(d, c, cert: CollapseCertificate) -> CollapseCertificate:
    """Given complexes with d ∩ c equal to the certificate's target, replay
    c ↘ target inside d ∪ c, yielding d ∪ c ↘ d.  Legal because a face of
    c outside the target has no coface in d."""
    return CollapseCertificate(cert.steps, tuple(d.facets))


# -- subdivision lifters ----------------------------------------------------

def _relabel_ne(cert: NECertificate, fn) -> NECertificate:
    if cert.is_leaf:
        return cert
    return NECertificate(fn(cert.vertex),
                         _relabel_ne(cert.link, fn),
                         _relabel_ne(cert.rest, fn))


def _chain(records: list, tail: NECertificate) -> NECertificate:
    out = tail
    for v, link_cert in reversed(records):
        out = NECertificate(v, link_cert, out)
    return out


def sd_vertex_elimination_records(c: SimplicialComplex, v) -> list:
    """Deletion records showing sd(c) - {v} collapses non-evasively onto
    sd(c - v): remove the sd-vertices of faces strictly containing v, by
    increasing dimension; each link at its turn is a cone with apex the
    sd-vertex of the face minus v."""
    records = []
    doomed = sorted((f for f in c.faces if v in f and len(f) > 1),
                    key=lambda f: (len(f), f))
    for tau in doomed:
        # chains through tau in the current complex: elements are either
        # subfaces of tau - v, or cofaces of tau (none deleted yet)
        sub = [s for s in c.fsubfaces(tau) if v not in s]
        sup = [s for s in c.faces if s != tau and set(tau) < set(s)]
        elems = sub + sup
        link = _order_complex(elems)
        apex = tuple(u for u in tau if u != v)
        records.append((tau, ne_cone(link, apex)))
    return records


def _order_complex(elements: list) -> SimplicialComplex:
    """Order complex of a set of faces under strict inclusion."""
    elements = sorted(set(elements), key=lambda f: (len(f), f))
    faces = []

    def grow(chain, rest):
        faces.append(tuple(sorted(chain)))
        for i, e in enumerate(rest):
            if set(chain[-1]) < set(e):
                grow(chain + [e], rest[i + 1:])

    for i, e in enumerate(elements):
        grow([e], elements[i + 1:])
    return SimplicialComplex.from_faces(faces)


def ne_to_sd_ne(c: SimplicialComplex, cert: NECertificate) -> NECertificate:
    """Lift a non-evasiveness certificate of c to one of sd(c)."""
    if cert.is_leaf:
        return NECertificate()
    v = cert.vertex
    link = c.link((v,))
    link_sd = ne_to_sd_ne(link, cert.link)
    link_sd = _relabel_ne(link_sd, lambda f: face(f + (v,)))
    records = sd_vertex_elimination_records(c, v)
    tail = ne_to_sd_ne(c.delete_face((v,)), cert.rest)
    return NECertificate((v,), link_sd, _chain(records, tail))


def ne_cone_lemma_steps(c: SimplicialComplex, v, m: int) -> list:
    """Deletion records for sd^m(c) - v collapsing non-evasively onto
    sd^m(c - v).  m = 0 gives no steps; m >= 2 recurses through one level
    of subdivision."""
    if m == 0:
        return []
    if m == 1:
        return sd_vertex_elimination_records(c, v)
    prev = sd_m_complex(c, m - 1)
    label = v
    for _ in range(m - 1):
        label = (label,)
    first = sd_vertex_elimination_records(prev, label)
    inner = ne_cone_lemma_steps(c, v, m - 1)
    lifted = _lift_deletion_records(prev.delete_face((label,)), inner)
    return first + lifted


def sd_m_complex(c: SimplicialComplex, m: int) -> SimplicialComplex:
    from .subdivision import sd as sd_op
    cur = c
    for _ in range(m):
        cur = sd_op(cur).complex
    return cur


def _lift_deletion_records(c: SimplicialComplex, records: list) -> list:
    """Lift a valid deletion sequence on c (records of (vertex, link
    certificate)) to one on sd(c)."""
    out = []
    cur = c
    for u, link_cert in records:
        link = cur.link((u,))
        lifted_link = _relabel_ne(ne_to_sd_ne(link, link_cert),
                                  lambda f: face(f + (u,)))
        out.append(((u,), lifted_link))
        out.extend(sd_vertex_elimination_records(cur, u))
        cur = cur.delete_face((u,))
    return out
