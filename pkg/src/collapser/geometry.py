# Exact rational geometry: projections onto stars, star-shapedness,
# convexity of supports, generic directions, halfspace restrictions and
# spherical comparisons.  No floating point anywhere.
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .complexes import SimplicialComplex, face_dim


class NonUniqueMinimum(Exception):
    """Two facets of a star yield distinct minimizing points at equal
    squared distance."""


class PointOutsideComplex(ValueError):
    pass


class DegenerateFacet(ValueError):
    pass


class RetryBudgetExceeded(RuntimeError):
    pass


class NonGenericDirection(ValueError):
    pass


class AntipodalAmbiguity(ValueError):
    pass


Vec = Tuple[Fraction, ...]


def vec(coords: Iterable) -> Vec:
    return tuple(Fraction(c) for c in coords)


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(t, a: Vec) -> Vec:
    t = Fraction(t)
    return tuple(t * x for x in a)


def dot(a: Vec, b: Vec) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def sqdist(a: Vec, b: Vec) -> Fraction:
    d = vsub(a, b)
    return dot(d, d)


def barycenter(points: Sequence[Vec]) -> Vec:
    n = len(points)
    return tuple(sum(c) / n for c in zip(*points))


def solve_linear(rows: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """Gaussian elimination over the rationals; None if singular."""
    n = len(rows)
    a = [list(r) + [v] for r, v in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        a[col] = [x / inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def det(rows: List[List[Fraction]]) -> Fraction:
    n = len(rows)
    a = [list(r) for r in rows]
    sign = 1
    out = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        out *= a[col][col]
        inv = a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return sign * out


@dataclass(frozen=True)
class Halfspace:
    """Points with <x, normal> >= offset (closed side)."""
    normal: Vec
    offset: Fraction

    def value(self, p: Vec) -> Fraction:
        return dot(p, self.normal) - self.offset


@dataclass
class GeometricComplex:
    complex: SimplicialComplex
    positions: Dict[object, Vec]

    def __post_init__(self):
        self.positions = {v: vec(p) for v, p in self.positions.items()}

    @property
    def ambient_dim(self) -> int:
        return len(next(iter(self.positions.values())))

    def pos(self, v) -> Vec:
        return self.positions[v]

    def points_of(self, f) -> List[Vec]:
        return [self.positions[v] for v in f]


# ---------------------------------------------------------------------------
# projections

def closest_point_on_simplex(w: Vec, pts: Sequence[Vec]):
    """Closest point of conv(pts) to w.

    Returns (point, squared distance, support) where support is the index
    set of the face of the simplex whose relative interior holds the point.
    """
    best = None
    for k in range(1, len(pts) + 1):
        for idx in combinations(range(len(pts)), k):
            sub = [pts[i] for i in idx]
            p0 = sub[0]
            dirs = [vsub(p, p0) for p in sub[1:]]
            if dirs:
                gram = [[dot(di, dj) for dj in dirs] for di in dirs]
                rhs = [dot(vsub(w, p0), di) for di in dirs]
                ts = solve_linear(gram, rhs)
                if ts is None:
                    continue  # affinely dependent; smaller subsets cover it
                lam = [1 - sum(ts)] + ts
                if any(v <= 0 for v in lam):
                    continue
                point = p0
                for t, dvec in zip(ts, dirs):
                    point = vadd(point, vscale(t, dvec))
            else:
                point = p0
            d2 = sqdist(w, point)
            if best is None or d2 < best[1]:
                best = (point, d2, idx)
    return best


def closest_point_on_star(w, sigma, g: GeometricComplex, _cache=None):
    """The unique closest point of |St(sigma)| to w and the inclusion-minimal
    face whose relative interior holds it.  Raises NonUniqueMinimum when two
    facets of the star disagree at equal distance."""
    sigma = tuple(sigma)
    star_facets = [f for f in g.complex.facets
                   if set(sigma) <= set(f)]
    if not star_facets:
        from .complexes import FaceNotInComplex
        raise FaceNotInComplex(sigma)
    best = None  # (d2, point, carrier)
    for f in star_facets:
        if _cache is not None and f in _cache:
            point, d2, idx = _cache[f]
        else:
            point, d2, idx = closest_point_on_simplex(w, g.points_of(f))
            if _cache is not None:
                _cache[f] = (point, d2, idx)
        carrier = tuple(sorted(f[i] for i in idx))
        if best is None or d2 < best[0]:
            best = (d2, point, carrier)
        elif d2 == best[0] and point != best[1]:
            raise NonUniqueMinimum((sigma, best[2], carrier))
    return best[1], best[2], best[0]


# ---------------------------------------------------------------------------
# membership and star-shapedness

def barycentric_in_facet(p: Vec, pts: Sequence[Vec]) -> Optional[List[Fraction]]:
    """Barycentric coordinates of p w.r.t. a full-dimensional simplex, or
    None if the simplex is degenerate."""
    d = len(p)
    if len(pts) != d + 1:
        raise ValueError("facet is not full-dimensional")
    rows = [[pts[j][i] for j in range(d + 1)] for i in range(d)]
    rows.append([Fraction(1)] * (d + 1))
    rhs = list(p) + [Fraction(1)]
    return solve_linear(rows, rhs)


def point_in_complex(p: Vec, g: GeometricComplex) -> bool:
    for f in g.complex.facets:
        lam = barycentric_in_facet(p, g.points_of(f))
        if lam is not None and all(v >= 0 for v in lam):
            return True
    return False


def segment_in_complex(a: Vec, b: Vec, g: GeometricComplex) -> bool:
    """Exact test that [a, b] lies in the union of the (full-dimensional)
    facets, by covering [0,1] with per-facet parameter intervals."""
    if a == b:
        return point_in_complex(a, g)
    intervals = []
    d = len(a)
    for f in g.complex.facets:
        pts = g.points_of(f)
        # lam(t) = lam(a) + t (lam(b) - lam(a)); feasible iff all >= 0
        la = barycentric_in_facet(a, pts)
        if la is None:
            continue
        lb = barycentric_in_facet(b, pts)
        lo, hi = Fraction(0), Fraction(1)
        ok = True
        for ca, cb in zip(la, lb):
            slope = cb - ca
            if slope == 0:
                if ca < 0:
                    ok = False
                    break
            elif slope > 0:
                lo = max(lo, -ca / slope)
            else:
                hi = min(hi, -ca / slope)
        if ok and lo <= hi:
            intervals.append((lo, hi))
    intervals.sort()
    reach = Fraction(0)
    for lo, hi in intervals:
        if lo > reach:
            return False
        reach = max(reach, hi)
        if reach >= 1:
            return True
    return reach >= 1


def star_shaped_witnesses(g: GeometricComplex) -> List[Vec]:
    pts = [g.pos(v) for v in g.complex.vertices]
    pts += [barycenter(g.points_of(f)) for f in g.complex.facets]
    return pts


def is_star_shaped(g: GeometricComplex, x, return_witness: bool = False):
    x = vec(x)
    if not point_in_complex(x, g):
        raise PointOutsideComplex(x)
    for y in star_shaped_witnesses(g):
        if not segment_in_complex(x, y, g):
            return (False, y) if return_witness else False
    return (True, None) if return_witness else True


# ---------------------------------------------------------------------------
# convexity of the support

def simplex_det(pts: Sequence[Vec]) -> Fraction:
    p0 = pts[0]
    return det([list(vsub(p, p0)) for p in pts[1:]])


def hull_facet_triangulation(points: List[Vec], d: int) -> List[Tuple[Vec, ...]]:
    """Triangulate conv(points) in R^d into d-simplices (brute-force
    supporting-hyperplane enumeration; exact; desk scale only)."""
    points = sorted(set(points))
    if d == 0:
        return [tuple(points)]
    if d == 1:
        return [(points[0], points[-1])] if len(points) > 1 else []
    q = points[0]
    simplices = []
    seen_planes = set()
    for idx in combinations(range(len(points)), d):
        sub = [points[i] for i in idx]
        # normal of the hyperplane through sub via cofactor expansion
        p0 = sub[0]
        rows = [list(vsub(p, p0)) for p in sub[1:]]
        normal = []
        for i in range(d):
            minor = [[r[j] for j in range(d) if j != i] for r in rows]
            normal.append((-1) ** i * det(minor))
        if all(c == 0 for c in normal):
            continue
        normal_t = tuple(normal)
        vals = [dot(vsub(p, p0), normal_t) for p in points]
        if all(v <= 0 for v in vals) or all(v >= 0 for v in vals):
            on_plane = tuple(sorted(p for p, v in zip(points, vals) if v == 0))
            key = on_plane
            if key in seen_planes or q in on_plane:
                continue
            seen_planes.add(key)
            # triangulate the facet in affine coordinates of its hyperplane
            base = _affine_coords(list(on_plane), d - 1)
            if base is None:
                continue
            for s in hull_facet_triangulation(base[0], d - 1):
                orig = tuple(base[1][p] for p in s)
                simplices.append((q,) + orig)
    return [s for s in simplices if simplex_det(s) != 0]


def _affine_coords(points: List[Vec], k: int):
    """Map points lying in a k-flat to coordinates in R^k.  Returns
    (mapped points, back map) or None if the flat has lower dimension."""
    p0 = points[0]
    basis: List[Vec] = []
    for p in points[1:]:
        d = vsub(p, p0)
        # check independence from current basis by solving least squares
        if _independent(basis, d):
            basis.append(d)
        if len(basis) == k:
            break
    if len(basis) < k:
        return None
    gram = [[dot(a, b) for b in basis] for a in basis]
    mapped = []
    back = {}
    for p in points:
        rhs = [dot(vsub(p, p0), b) for b in basis]
        coords = tuple(solve_linear(gram, rhs))
        mapped.append(coords)
        back[coords] = p
    return mapped, back


def _independent(basis: List[Vec], d: Vec) -> bool:
    if not basis:
        return any(c != 0 for c in d)
    gram = [[dot(a, b) for b in basis] for a in basis]
    rhs = [dot(d, b) for b in basis]
    sol = solve_linear(gram, rhs)
    proj = tuple(Fraction(0) for _ in d)
    for t, b in zip(sol, basis):
        proj = vadd(proj, vscale(t, b))
    return proj != d


def is_convex_support(g: GeometricComplex) -> bool:
    """True iff the facet volumes add up to the volume of the convex hull
    of the vertex set (exact)."""
    d = g.ambient_dim
    if g.complex.dim != d:
        raise ValueError("complex must be full-dimensional")
    total = Fraction(0)
    for f in g.complex.facets:
        v = abs(simplex_det(g.points_of(f)))
        if v == 0:
            raise DegenerateFacet(f)
        total += v
    pts = [g.pos(v) for v in g.complex.vertices]
    hull = sum(abs(simplex_det(s)) for s in hull_facet_triangulation(pts, d))
    return total == hull


# ---------------------------------------------------------------------------
# directions and halfspaces

def generic_direction(g: GeometricComplex, seed=0, extra_points: Sequence[Vec] = (),
                      max_tries: int = 256) -> Vec:
    """Random rational direction with pairwise distinct values on vertices
    (and any extra points) and no edge orthogonal to it; verified, retried."""
    rng = random.Random(seed)
    d = g.ambient_dim
    pts = [g.pos(v) for v in g.complex.vertices] + [vec(p) for p in extra_points]
    for attempt in range(max_tries):
        span = 8 * (1 + attempt)
        nu = vec([rng.randint(-span, span) for _ in range(d)])
        if all(c == 0 for c in nu):
            continue
        vals = [dot(p, nu) for p in pts]
        if len(set(vals)) == len(vals):
            return nu
    raise RetryBudgetExceeded("no generic direction found")


def lower_link(v, nu: Vec, g: GeometricComplex) -> SimplicialComplex:
    """Subcomplex of Lk(v) spanned by neighbours strictly on the -nu side."""
    nu = vec(nu)
    lk = g.complex.link((v,))
    pv = g.pos(v)
    sign = {u: dot(vsub(g.pos(u), pv), nu) for u in lk.vertices}
    if any(s == 0 for s in sign.values()):
        raise NonGenericDirection(nu)
    return lk.restriction(lambda u: sign[u] < 0)


def _triangulate_cut_cell(neg: list, pos: list) -> list:
    """Triangulate the piece of a simplex on the negative side of a cut
    separating neg from pos vertices.  Vertices of the piece: the neg
    vertices and one crossing point per neg-pos edge.  Realized on standard
    basis vectors with midpoint crossings, triangulated exactly."""
    n, p = len(neg), len(pos)
    dim = n + p
    def e(i):
        out = [Fraction(0)] * dim
        out[i] = Fraction(1)
        return tuple(out)
    label_of = {}
    points = []
    for i, u in enumerate(neg):
        label_of[e(i)] = (0, u)
        points.append(e(i))
    for i, a in enumerate(neg):
        for j, b in enumerate(pos):
            c = vscale(Fraction(1, 2), vadd(e(i), e(n + j)))
            label_of[c] = (1, (min(a, b), max(a, b)))
            points.append(c)
    k = n + p - 1  # the piece is full-dimensional in the cell
    flat = _affine_coords(points, k)
    if flat is None:
        raise DegenerateFacet((tuple(neg), tuple(pos)))
    mapped, back = flat
    out = []
    for s in hull_facet_triangulation(mapped, k):
        out.append(tuple(sorted(label_of[back[q]] for q in s)))
    return out


def split_link(v, nu: Vec, g: GeometricComplex) -> SimplicialComplex:
    """Link of v cut by the hyperplane through v orthogonal to nu, keeping
    the -nu side.  Original neighbours keep label (0, u); a crossing edge
    (a, b) contributes a cut vertex labeled (1, (a, b)).  Cut cells are
    triangulated (consistently across cells: crossing labels only depend on
    the edge)."""
    nu = vec(nu)
    lk = g.complex.link((v,))
    pv = g.pos(v)
    sign = {u: dot(vsub(g.pos(u), pv), nu) for u in lk.vertices}
    if any(s == 0 for s in sign.values()):
        raise NonGenericDirection(nu)
    out = []
    for f in lk.facets:
        neg = [u for u in f if sign[u] < 0]
        pos = [u for u in f if sign[u] > 0]
        if not neg:
            continue
        if not pos:
            out.append(tuple(sorted((0, u) for u in neg)))
        else:
            out.extend(_triangulate_cut_cell(neg, pos))
    if not out:
        return SimplicialComplex.from_faces([])
    return SimplicialComplex.from_facets(out)


def restrict_to_halfspace(g: GeometricComplex, h: Halfspace,
                          strict: bool = False) -> SimplicialComplex:
    if strict:
        return g.complex.restriction(lambda v: h.value(g.pos(v)) > 0)
    return g.complex.restriction(lambda v: h.value(g.pos(v)) >= 0)


# ---------------------------------------------------------------------------
# spherical comparisons (points as rational rays)

def _ray_cos_key(a: Vec, x: Vec):
    num = dot(a, x)
    return num, num * num, dot(a, a)


def spherical_distance_less(a, b, x) -> int:
    """Compare angular distances to x: -1 if a is closer, 0 equal, 1 if b.

    Rays are rational vectors up to positive scaling; the comparison uses
    sign-adjusted squared normalized inner products only."""
    a, b, x = vec(a), vec(b), vec(x)
    xx = dot(x, x)
    if xx == 0 or dot(a, a) == 0 or dot(b, b) == 0:
        raise ValueError("rays must be nonzero")
    na, na2, aa = _ray_cos_key(a, x)
    nb, nb2, bb = _ray_cos_key(b, x)
    if _antipodal(a, x) and _antipodal(b, x):
        raise AntipodalAmbiguity((a, b))
    sa = (na > 0) - (na < 0)
    sb = (nb > 0) - (nb < 0)
    if sa != sb:
        return -1 if sa > sb else 1
    # same sign: compare cos^2 scaled, orientation depends on the sign
    lhs = na2 * bb
    rhs = nb2 * aa
    if lhs == rhs:
        return 0
    bigger_cos2_is_closer = sa >= 0
    if (lhs > rhs) == bigger_cos2_is_closer and sa != 0:
        return -1
    if sa == 0:
        return 0
    return 1


def _antipodal(a: Vec, x: Vec) -> bool:
    num = dot(a, x)
    if num >= 0:
        return False
    return num * num == dot(a, a) * dot(x, x)
