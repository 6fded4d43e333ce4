# Constructive collapsing procedures: facet-star collapses of simplices and
# cubes, distance-driven collapse of cubical complexes, star-shapedness to
# non-evasiveness after derived subdivision, the split-collapse engine on
# convex supports, and transfer of collapse certificates to subdivisions.
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Optional, Set, Tuple

from .collapse import (
    BudgetExceeded,
    CollapseCertificate,
    MutableComplexState,
    NECertificate,
    NotFree,
    ProvedEvasive,
    ProvedImpossible,
    SearchBudget,
    _chain,
    collapse_search,
    cone_apexes,
    cone_collapse_steps,
    is_non_evasive,
)
from .complexes import (
    CubicalComplex,
    SimplicialComplex,
    box_dim,
    face,
    face_dim,
)
from .geometry import (
    GeometricComplex,
    Halfspace,
    _affine_coords,
    barycentric_in_facet,
    dot,
    generic_direction,
    is_convex_support,
    is_star_shaped,
    vec,
)
from .morse import StarMinimalityViolation
from .subdivision import derived_neighborhood, derived_order, h_splitting_sd, sd
from .verify import verify_certificate, verify_ne


class UnsupportedCell(ValueError):
    """The cell is neither a simplex nor a cube."""


class RealizationSearchFailed(RuntimeError):
    """No geometric realization schedule produced a verified certificate."""


class GenericityFailure(RuntimeError):
    """All perturbation retries were exhausted."""


class RecursionBudgetExceeded(RuntimeError):
    pass


class NotConvex(ValueError):
    pass


class CarrierMissing(KeyError):
    """A face of the subdivision has no carrier in the parent complex."""


# ---------------------------------------------------------------------------
# facet-star collapses (single cells)

def _simplex_star_steps(top: tuple, mu: tuple) -> list:
    """Steps collapsing the simplex `top` onto St(mu, boundary): remove the
    faces whose union with mu is the whole vertex set, paired across a fixed
    vertex of mu, from the free face opposite mu inwards."""
    rest = tuple(x for x in top if x not in mu)
    a = mu[0]
    others = [x for x in mu if x != a]
    steps = []
    for k in range(len(others) + 1):
        for extra in combinations(others, k):
            sigma = face(rest + extra)
            steps.append((sigma, face(sigma + (a,))))
    steps.sort(key=lambda st: (-len(st[0]), st[0]))
    return steps


def _cube_star_steps(top: tuple, mu: tuple) -> list:
    """Steps collapsing the box `top` onto St(mu, boundary): remove the
    faces avoiding mu in every coordinate where mu is pinned, sweeping along
    the first pinned coordinate."""
    fixed = [i for i, ((plo, phi), (mlo, mhi)) in enumerate(zip(top, mu))
             if phi > plo and mhi == mlo]
    if not fixed:
        raise UnsupportedCell((top, mu))
    c = fixed[0]
    lo, hi = top[c]
    opp = (hi, hi) if mu[c] == (lo, lo) else (lo, lo)
    choices = []
    for i, (plo, phi) in enumerate(top):
        if i == c:
            choices.append([None])
        elif plo == phi:
            choices.append([(plo, phi)])
        elif i in fixed:
            away = (phi, phi) if mu[i] == (plo, plo) else (plo, plo)
            choices.append([away, (plo, phi)])
        else:
            choices.append([(plo, plo), (phi, phi), (plo, phi)])
    steps = []
    for combo in product(*choices):
        sigma = tuple(opp if i == c else iv for i, iv in enumerate(combo))
        tau = tuple(top[c] if i == c else iv for i, iv in enumerate(combo))
        steps.append((sigma, tau))
    steps.sort(key=lambda st: (-box_dim(st[0]), st[0]))
    return steps


def facet_star_collapse(p, mu) -> CollapseCertificate:
    """Collapse a single cell (simplex or cube, given as a complex with one
    facet) onto the closed star of the proper face mu in its boundary."""
    if len(p.facets) != 1:
        raise UnsupportedCell("expected a complex with a single facet")
    top = p.facets[0]
    mu = tuple(mu)
    if mu not in p.faces or mu == top:
        raise ValueError("mu must be a proper face of the cell")
    if p.kind == "simplicial":
        steps = _simplex_star_steps(top, mu)
    elif p.kind == "cubical":
        steps = _cube_star_steps(top, mu)
    else:
        raise UnsupportedCell(p.kind)
    removed = {f for st in steps for f in st}
    remaining = p.with_faces(p.faces - removed)
    cert = CollapseCertificate(tuple(steps), tuple(remaining.facets))
    ok, why = verify_certificate(p, cert, remaining)
    if not ok:
        raise AssertionError(f"internal: invalid facet-star collapse: {why}")
    return cert


# ---------------------------------------------------------------------------
# distance-driven cubical collapse

def _clamp_face(w, p):
    """(squared distance, support face) of the point of the box p closest
    to the integer point w."""
    d2 = 0
    mu = []
    for wi, (lo, hi) in zip(w, p):
        x = min(max(wi, lo), hi)
        d2 += (wi - x) * (wi - x)
        if lo == hi:
            mu.append((lo, hi))
        elif lo < x < hi:
            mu.append((lo, hi))
        else:
            mu.append((x, x))
    return d2, tuple(mu)


def collapse_cubical_cat0(k: CubicalComplex, w) -> CollapseCertificate:
    """Collapse a cubical complex with convex vertex stars to the vertex w:
    repeatedly take the facet whose closest point to w is farthest, and
    collapse every facet sharing that minimizing face onto the rest of its
    boundary.  Raises StarMinimalityViolation when a required step is not
    free, which signals that the convexity precondition fails."""
    w = tuple(int(x) for x in w)
    wbox = k.vertex_box(w)
    if wbox not in k.faces:
        raise ValueError(f"{w} is not a vertex of the complex")
    state = MutableComplexState(k)
    steps: List[Tuple] = []
    while not state.is_single_point():
        facets = state.facets_now()
        clamp = {p: _clamp_face(w, p) for p in facets}
        best = max(facets, key=lambda p: (clamp[p][0], [-c for cc in p for c in cc]))
        # deterministic: farthest minimum, ties by face
        best = min((p for p in facets if clamp[p][0] == clamp[best][0]))
        mu = clamp[best][1]
        if mu == best:
            if best == wbox:
                raise StarMinimalityViolation(
                    "root vertex is maximal while other cells remain")
            raise StarMinimalityViolation(
                f"cell {best} carries its own star minimum")
        group = sorted(p for p in facets if clamp[p][1] == mu and p != mu)
        progressed = False
        for p in group:
            for sigma, tau in _cube_star_steps(p, mu):
                try:
                    token = state.collapse(sigma)
                except NotFree as exc:
                    raise StarMinimalityViolation((p, mu, sigma)) from exc
                if token != (sigma, tau):
                    state.undo(token)
                    raise StarMinimalityViolation((p, mu, sigma))
                steps.append((sigma, tau))
                progressed = True
        if not progressed:
            raise StarMinimalityViolation((best, mu))
    if state.alive != {wbox}:
        raise StarMinimalityViolation("terminal vertex is not the root")
    cert = CollapseCertificate(tuple(steps), (wbox,))
    ok, why = verify_certificate(k, cert)
    if not ok:
        raise AssertionError(f"internal: invalid cubical collapse: {why}")
    return cert


# ---------------------------------------------------------------------------
# link-collapse helpers shared by the elimination engines

def _collapse_link_to_point(link: SimplicialComplex, budget):
    apexes = cone_apexes(link)
    if apexes:
        a = apexes[0]
        return cone_collapse_steps(link, a), a
    cert = collapse_search(link, budget=budget)
    return list(cert.steps), cert.target[0][0]


def _collapse_link_onto(link: SimplicialComplex, keep: frozenset, budget):
    for a in cone_apexes(link):
        base_ok = all(face(f + (a,)) in keep for f in keep if a not in f)
        apex_ok = (a,) in keep and all(
            len(f) == 1 or tuple(x for x in f if x != a) in keep
            for f in keep if a in f)
        if base_ok and apex_ok:
            return cone_collapse_steps(link, a, keep=keep)
    target = SimplicialComplex.from_faces(keep)
    cert = collapse_search(link, target=target, budget=budget)
    return list(cert.steps)


def _eliminate_labels(s: SimplicialComplex, labels_desc, keep, budget):
    """Remove, label by label, every face containing the label and not in
    `keep` (a subcomplex of s), by collapsing the label's current link onto
    the kept part.  Returns (steps, final alive set)."""
    keep = frozenset(keep)
    alive: Set = set(s.faces)
    by_label: Dict[object, Set] = {}
    for f in alive:
        for l in f:
            by_label.setdefault(l, set()).add(f)
    steps: List[Tuple] = []
    for u in labels_desc:
        star = by_label.get(u)
        if not star:
            continue
        doomed = {f for f in star if f not in keep}
        if not doomed:
            continue
        link_faces = set()
        kept_link = set()
        for f in star:
            if len(f) == 1:
                continue
            lf = tuple(x for x in f if x != u)
            link_faces.add(lf)
            if f in keep:
                kept_link.add(lf)
        if kept_link:
            link = SimplicialComplex.from_faces(link_faces)
            link_steps = _collapse_link_onto(link, frozenset(kept_link), budget)
            sub = [(face(a + (u,)), face(b + (u,))) for a, b in link_steps]
        else:
            if (u,) in keep:
                raise ProvedImpossible(f"cannot clear the star of {u}")
            if not link_faces:
                raise ProvedImpossible(f"label {u} is isolated")
            link = SimplicialComplex.from_faces(link_faces)
            link_steps, w = _collapse_link_to_point(link, budget)
            sub = [(face(a + (u,)), face(b + (u,))) for a, b in link_steps]
            sub.append(((u,), face((u, w))))
        removed = {f for st in sub for f in st}
        if removed != doomed:
            raise ProvedImpossible((u, "link collapse misses the star"))
        for f in removed:
            alive.discard(f)
            for l in f:
                by_label[l].discard(f)
        steps.extend(sub)
    return steps, alive


# ---------------------------------------------------------------------------
# star-shaped complexes: non-evasiveness after subdivision

def collapse_star_shaped(g: GeometricComplex, x, budget: SearchBudget = None) -> NECertificate:
    """Non-evasiveness certificate for sd^(d-2) of a star-shaped geometric
    d-complex with star-center x (d = 2 or 3).  For d = 3: split along a
    generic hyperplane through x, then delete the subdivision vertices
    strictly above and strictly below it in derived order; every link is a
    cone or a small planar complex handled by exhaustive search."""
    budget = budget or SearchBudget()
    c = g.complex
    d = c.dim
    if d < 2 or d != g.ambient_dim:
        raise ValueError("need a full-dimensional complex of dimension >= 2")
    if not is_star_shaped(g, x):
        raise ValueError("x is not a star-center of the complex")
    if d == 2:
        try:
            return is_non_evasive(c, budget)
        except ProvedEvasive as exc:
            raise RealizationSearchFailed("planar base case failed") from exc
    if d > 3:
        raise RealizationSearchFailed(
            "no realization schedule beyond ambient dimension 3")
    x = vec(x)
    last = None
    for attempt in range(8):
        nu = generic_direction(g, seed=attempt, extra_points=[x])
        h = Halfspace(nu, dot(nu, x))
        try:
            return _split_and_delete(g, h, budget)
        except (ProvedEvasive, ProvedImpossible) as exc:
            last = exc
    raise RealizationSearchFailed("all splitting directions failed") from last


def _split_and_delete(g: GeometricComplex, h: Halfspace, budget) -> NECertificate:
    c = g.complex
    der = h_splitting_sd(g, h)
    s = der.complex
    lvl = {u: h.value(der.positions[u]) for u in c.faces}
    seed_up = [(v,) for v in sorted(c.vertices, key=lambda v: (lvl[(v,)], v))]
    order_up = derived_order(c, seed_up)
    order_dn = derived_order(c, list(reversed(seed_up)))
    above = sorted((u for u in c.faces if lvl[u] > 0),
                   key=lambda u: -order_up.index[u])
    below = sorted((u for u in c.faces if lvl[u] < 0),
                   key=lambda u: -order_dn.index[u])
    alive = set(s.faces)
    by_label: Dict[object, Set] = {}
    for f in alive:
        for l in f:
            by_label.setdefault(l, set()).add(f)
    records = []
    for u in above + below:
        star = by_label[u]
        link_faces = {tuple(x for x in f if x != u) for f in star if len(f) > 1}
        if not link_faces:
            raise ProvedEvasive(f"label {u} is isolated")
        link = SimplicialComplex.from_faces(link_faces)
        records.append((u, is_non_evasive(link, budget)))
        for f in list(star):
            alive.discard(f)
            for l in f:
                by_label[l].discard(f)
    middle = SimplicialComplex.from_faces(alive)
    cert = _chain(records, is_non_evasive(middle, budget))
    ok, why = verify_ne(s, cert)
    if not ok:
        raise AssertionError(f"internal: invalid star-shaped certificate: {why}")
    return cert


# ---------------------------------------------------------------------------
# convex supports: the split-collapse engine

def _upper_flag(c: SimplicialComplex, bnd: SimplicialComplex, lvl) -> tuple:
    """A maximal chain of boundary faces climbing from the topmost vertex,
    extending greedily by the cover with the highest barycenter."""
    vtop = max(c.vertices, key=lambda v: (lvl[v], v))
    cur = (vtop,)
    flag = [cur]
    while face_dim(cur) < bnd.dim:
        covers = [t for t in bnd.faces
                  if len(t) == len(cur) + 1 and set(cur) < set(t)]
        cur = max(covers, key=lambda t: (sum(lvl[v] for v in t) / len(t), t))
        flag.append(cur)
    return tuple(sorted(flag))


def _mode_c(g: GeometricComplex, nu, budget):
    """sd C collapses onto sd(boundary C) minus one boundary facet F, by
    eliminating the subdivision vertices in decreasing derived order seeded
    by height.  Returns (certificate, F, sd complex, kept subcomplex)."""
    c = g.complex
    nu = vec(nu)
    lvl = {v: dot(g.pos(v), nu) for v in c.vertices}
    if len(set(lvl.values())) != len(lvl):
        raise ProvedImpossible("direction is not generic on the vertices")
    seed = [(v,) for v in sorted(c.vertices, key=lambda v: (lvl[v], v))]
    order = derived_order(c, seed)
    s = sd(c).complex
    bnd = c.boundary()
    if bnd.is_empty():
        raise NotConvex("complex has no boundary")
    flag = _upper_flag(c, bnd, lvl)
    keep = frozenset(f for f in s.faces
                     if all(l in bnd.faces for l in f) and f != flag)
    labels_desc = sorted(c.faces, key=lambda u: -order.index[u])
    steps, alive = _eliminate_labels(s, labels_desc, keep, budget)
    if alive != set(keep):
        raise ProvedImpossible("elimination left extra faces")
    kept = SimplicialComplex.from_faces(keep)
    cert = CollapseCertificate(tuple(steps), tuple(kept.facets))
    ok, why = verify_certificate(s, cert, kept)
    if not ok:
        raise AssertionError(f"internal: invalid split collapse: {why}")
    return cert, flag, s, kept


def _mode_c_retry(g: GeometricComplex, nu, budget, tries: int = 6):
    last = None
    for attempt in range(tries):
        direction = nu if nu is not None and attempt == 0 else \
            generic_direction(g, seed=attempt)
        try:
            return _mode_c(g, direction, budget)
        except ProvedImpossible as exc:
            last = exc
        except BudgetExceeded as exc:
            raise RecursionBudgetExceeded(str(exc)) from exc
    raise GenericityFailure("all perturbation retries failed") from last


def convex_split_collapse(g: GeometricComplex, h: Halfspace = None,
                          mode: str = "C", nu=None,
                          budget: SearchBudget = None) -> CollapseCertificate:
    """Split-collapse a convex geometric complex.

    Mode C: sd C collapses onto sd(boundary C) minus one facet (no halfspace
    needed; `nu` optionally fixes the sweep direction).  Mode A: the derived
    neighborhood of the part of C inside the closed halfspace collapses to a
    point.  Mode B: that neighborhood collapses onto the corresponding
    neighborhood in the boundary."""
    budget = budget or SearchBudget()
    if g.complex.dim != g.ambient_dim:
        raise ValueError("complex must be full-dimensional")
    if not is_convex_support(g):
        raise NotConvex("support is not convex")
    mode = mode.upper()
    if mode == "C":
        cert, _, _, _ = _mode_c_retry(g, nu, budget)
        return cert
    if mode not in ("A", "B"):
        raise ValueError(f"unknown mode {mode!r}")
    if h is None:
        raise ValueError("modes A and B need a halfspace")
    c = g.complex
    inside = c.restriction(lambda v: h.value(g.pos(v)) >= 0)
    if inside.is_empty():
        raise ValueError("the halfspace misses every vertex")
    hood = derived_neighborhood(inside, c)
    lvl = {v: dot(g.pos(v), h.normal) for v in c.vertices}
    if mode == "A":
        keep = None  # fixed per attempt: the deepest vertex label goes last
    else:
        bnd = c.boundary()
        if bnd.is_empty():
            raise ValueError("mode B needs a complex with boundary")
        inside_b = SimplicialComplex.from_faces(bnd.faces & inside.faces)
        keep = frozenset(derived_neighborhood(inside_b, bnd).faces)
    last = None
    for attempt in range(6):
        # sweep inward: the deepest vertex inside the halfspace goes last;
        # level ties are broken by a generic secondary direction
        sec = generic_direction(g, seed=attempt)
        seed = [(v,) for v in sorted(
            c.vertices, key=lambda v: (-lvl[v], dot(g.pos(v), sec), v))]
        order = derived_order(c, seed)
        labels = sorted({l for f in hood.faces for l in f},
                        key=lambda u: -order.index[u])
        trial_keep = keep if keep is not None else frozenset({(labels[-1],)})
        try:
            steps, alive = _eliminate_labels(hood, labels, trial_keep, budget)
        except ProvedImpossible as exc:
            last = exc
            continue
        except BudgetExceeded as exc:
            raise RecursionBudgetExceeded(str(exc)) from exc
        if alive == set(trial_keep):
            keep = trial_keep
            break
        last = ProvedImpossible("elimination left extra faces")
    else:
        raise GenericityFailure(str(last)) from last
    kept = SimplicialComplex.from_faces(keep)
    cert = CollapseCertificate(tuple(steps), tuple(kept.facets))
    ok, why = verify_certificate(hood, cert,
                                 None if mode == "A" else kept)
    if not ok:
        raise AssertionError(f"internal: invalid neighborhood collapse: {why}")
    return cert


# ---------------------------------------------------------------------------
# matchings, endo-collapses with a prescribed facet

def matching_to_collapse(c, pairs, target) -> list:
    """Linearize a matching covering exactly c.faces minus `target` into an
    elementary collapse sequence (Kahn ordering on firing constraints)."""
    import heapq
    target = frozenset(target)
    plist = sorted(pairs)
    pair_of: Dict[object, int] = {}
    for i, (a, b) in enumerate(plist):
        pair_of[a] = i
        pair_of[b] = i
    up: Dict[object, list] = {f: [] for f in c.faces}
    for f in c.faces:
        for r in c.fcovers(f):
            if r in up:
                up[r].append(f)
    succ: Dict[int, Set[int]] = {i: set() for i in range(len(plist))}
    indeg = [0] * len(plist)
    for i, (a, b) in enumerate(plist):
        for f in up[a]:
            if f == b:
                continue
            j = pair_of[f]
            if i not in succ[j]:
                succ[j].add(i)
                indeg[i] += 1
        for f in up[b]:
            j = pair_of[f]
            if i not in succ[j]:
                succ[j].add(i)
                indeg[i] += 1
    ready = [i for i in range(len(plist)) if indeg[i] == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        i = heapq.heappop(ready)
        out.append(plist[i])
        for j in sorted(succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(ready, j)
    if len(out) != len(plist):
        raise ValueError("matching admits no collapsing order")
    return out


def _sd_endo(g: GeometricComplex, delta, budget):
    """sd C minus the facet `delta` collapses onto sd(boundary C); if delta
    is None the facet paired across the spared boundary face is used.
    Returns (certificate, delta)."""
    cert, flag, s, kept = _mode_c_retry(g, None, budget)
    steps = list(cert.steps)
    idx = next(i for i, st in enumerate(steps) if st[0] == flag)
    partner = steps[idx][1]
    boundary_faces = frozenset(kept.faces | {flag})
    target = SimplicialComplex.from_faces(boundary_faces)
    if delta is None or delta == partner:
        delta = partner
        new_steps = steps[:idx] + steps[idx + 1:]
    else:
        if delta not in s.faces or s.fdim(delta) != s.dim:
            raise ValueError("delta is not a facet of the subdivision")
        matching = {a: b for a, b in steps}
        del matching[flag]
        d = s.dim
        ridge_of = {b: a for a, b in matching.items() if s.fdim(b) == d}
        cof: Dict[object, list] = {}
        for f in s.faces:
            if s.fdim(f) == d:
                for r in s.fcovers(f):
                    cof.setdefault(r, []).append(f)
        # walk the dual tree from delta to the cell paired with the spared
        # boundary face, then flip the matching along the walk
        path = [delta]
        while path[-1] != partner:
            r = ridge_of[path[-1]]
            others = [q for q in cof[r] if q != path[-1]]
            if len(others) != 1:
                raise GenericityFailure("dual walk left the interior")
            path.append(others[0])
        for a, b in zip(path, path[1:]):
            matching[ridge_of[a]] = b
        pruned = s.with_faces(s.faces - {delta})
        new_steps = matching_to_collapse(pruned, matching.items(),
                                         boundary_faces)
    pruned = s.with_faces(s.faces - {delta})
    out = CollapseCertificate(tuple(new_steps), tuple(target.facets))
    ok, why = verify_certificate(pruned, out, target)
    if not ok:
        raise AssertionError(f"internal: invalid endo collapse: {why}")
    return out, delta


def endo_collapse(c, sigma=None, budget: SearchBudget = None) -> CollapseCertificate:
    """For a convex geometric complex: sd C minus the facet `sigma` of sd C
    collapses onto sd(boundary C), constructively.  For a plain complex:
    search for a collapse of C minus the facet onto its boundary (or to a
    point when the boundary is empty)."""
    budget = budget or SearchBudget()
    if isinstance(c, GeometricComplex):
        cert, _ = _sd_endo(c, sigma, budget)
        return cert
    if sigma not in c.facets:
        raise ValueError("sigma must be a facet")
    bnd = c.boundary()
    pruned = c.with_faces(c.faces - {sigma})
    target = None if bnd.is_empty() else bnd
    return collapse_search(pruned, target=target, budget=budget)


# ---------------------------------------------------------------------------
# carriers and the subdivision transfer

def carrier_map(d: GeometricComplex, parent: GeometricComplex) -> dict:
    """Smallest parent face containing each face of the subdivision d."""
    vcarrier = {}
    for v in d.complex.vertices:
        p = d.pos(v)
        best = None
        for f in parent.complex.facets:
            lam = barycentric_in_facet(p, parent.points_of(f))
            if lam is None or any(x < 0 for x in lam):
                continue
            supp = face(u for u, x in zip(f, lam) if x > 0)
            if best is None or len(supp) < len(best):
                best = supp
        if best is None:
            raise CarrierMissing(v)
        vcarrier[v] = best
    out = {}
    for f in d.complex.faces:
        u = face(w for v in f for w in vcarrier[v])
        if u not in parent.complex.faces:
            raise CarrierMissing(f)
        out[f] = u
    return out


def _projected_geometric(c: SimplicialComplex, positions) -> GeometricComplex:
    """Restrict positions to c and map them affinely onto coordinates of
    the complex's own dimension."""
    verts = c.vertices
    pts = [vec(positions[v]) for v in verts]
    k = c.dim
    if k == len(pts[0]):
        return GeometricComplex(c, dict(zip(verts, pts)))
    flat = _affine_coords(pts, k)
    if flat is None:
        raise ValueError("complex is degenerate in its affine hull")
    mapped, _ = flat
    return GeometricComplex(c, dict(zip(verts, mapped)))


def hudson_collapse(c, cert: CollapseCertificate, d: GeometricComplex,
                    carriers: dict, budget: SearchBudget = None) -> CollapseCertificate:
    """Transfer a collapse of c to sd of the subdivision d: for each step
    (sigma, Sigma), remove one free flag pair crossing from the sigma-region
    into the Sigma-region, then collapse both regions onto their boundary
    parts.  Ends at the restriction of sd d over the final complex."""
    budget = budget or SearchBudget()
    for f in d.complex.faces:
        if f not in carriers:
            raise CarrierMissing(f)
    s = sd(d.complex).complex
    steps_all: List[Tuple] = []
    for sig, big in cert.steps:
        sigset, bigset = set(sig), set(big)
        xs_faces = {f for f, cr in carriers.items() if set(cr) <= sigset}
        xb_faces = {f for f, cr in carriers.items() if set(cr) <= bigset}
        if not xs_faces or not xb_faces:
            raise CarrierMissing((sig, big))
        if len(sig) == 1:
            (vface,) = xs_faces
            delta = (vface,)
            sub2: List[Tuple] = []
        else:
            xs = SimplicialComplex.from_faces(xs_faces)
            gs = _projected_geometric(xs, d.positions)
            cert_s, delta = _sd_endo(gs, None, budget)
            sub2 = list(cert_s.steps)
        top = max(delta, key=len)
        cands = [q for q in xb_faces
                 if len(q) == len(big) and q not in xs_faces
                 and set(top) < set(q)]
        if len(cands) != 1:
            raise CarrierMissing((sig, big, top))
        full = tuple(sorted(delta + (cands[0],)))
        xb = SimplicialComplex.from_faces(xb_faces)
        gb = _projected_geometric(xb, d.positions)
        cert_b, _ = _sd_endo(gb, full, budget)
        steps_all.append((delta, full))
        steps_all.extend(cert_b.steps)
        steps_all.extend(sub2)
    kept_parent = {f for f in c.faces
                   if any(set(f) <= set(t) for t in cert.target)}
    final_faces = {f for f in s.faces
                   if all(carriers[l] in kept_parent for l in f)}
    final = SimplicialComplex.from_faces(final_faces)
    out = CollapseCertificate(tuple(steps_all), tuple(final.facets))
    ok, why = verify_certificate(s, out, final)
    if not ok:
        raise AssertionError(f"internal: invalid transferred collapse: {why}")
    return out


def collapse_convex(g: GeometricComplex, parent: GeometricComplex = None,
                    budget: SearchBudget = None) -> CollapseCertificate:
    """Collapse certificate for sd of a convex geometric complex down to a
    point.  When the convex hull of g is the simplex `parent`, the parent's
    trivial collapse is transferred through the subdivision; otherwise the
    split-collapse engine reduces sd g onto a punctured boundary sphere,
    which a search finishes off."""
    budget = budget or SearchBudget()
    if not is_convex_support(g):
        raise NotConvex("support is not convex")
    if parent is not None:
        carriers = carrier_map(g, parent)
        base = collapse_search(parent.complex, budget=budget)
        return hudson_collapse(parent.complex, base, g, carriers, budget)
    cert, flag, s, kept = _mode_c_retry(g, None, budget)
    tail = collapse_search(kept, budget=budget)
    out = CollapseCertificate(cert.steps + tail.steps, tail.target)
    ok, why = verify_certificate(s, out)
    if not ok:
        raise AssertionError(f"internal: invalid convex collapse: {why}")
    return out
