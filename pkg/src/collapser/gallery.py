# Deterministic generators for the example complexes used in the tests and
# the command-line interface.
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Dict

from .complexes import CubicalComplex, SimplicialComplex, cone as cone_complex
from .geometry import GeometricComplex, barycenter, hull_facet_triangulation, vec


class UnknownSpec(ValueError):
    pass


class BadParameters(ValueError):
    pass


@dataclass
class GallerySpec:
    name: str
    parameters: Dict[str, int] = field(default_factory=dict)


def simplex(d: int) -> SimplicialComplex:
    if d < 0:
        raise BadParameters("d must be >= 0")
    return SimplicialComplex.from_facets([range(1, d + 2)])


def boundary_sphere(d: int) -> SimplicialComplex:
    if d < 1:
        raise BadParameters("d must be >= 1")
    return simplex(d).boundary()


def wheel(k: int) -> SimplicialComplex:
    """Disk with a single interior vertex of degree k."""
    if k < 3:
        raise BadParameters("k must be >= 3")
    facets = [[0, i, i % k + 1] for i in range(1, k + 1)]
    return SimplicialComplex.from_facets(facets)


def dunce_hat() -> SimplicialComplex:
    """Contractible but non-collapsible 2-complex on 8 vertices: a disk
    whose boundary circle is glued to an interior circle twice one way and
    once the other.  No face is free."""
    facets = [
        (1, 2, 4), (2, 3, 4), (1, 3, 5), (1, 2, 5), (2, 3, 6), (1, 3, 6),
        (1, 3, 7), (2, 3, 8), (1, 2, 8),
        (3, 4, 5), (2, 5, 6), (1, 6, 7), (3, 7, 8), (1, 4, 8),
        (4, 5, 6), (4, 6, 7), (4, 7, 8),
    ]
    return SimplicialComplex.from_facets(facets)


def _square_triangles(corners):
    """Split a unit square (4 corner points) along its lexicographically
    extreme diagonal."""
    pts = sorted(corners)
    return [(pts[0], pts[1], pts[3]), (pts[0], pts[2], pts[3])]


def bing_house() -> SimplicialComplex:
    """House with two rooms on a 4x3x2 box: each room is entered through a
    tube crossing the other room, and each tube carries a stabilizing wall
    panel.  Contractible but with no free faces."""
    squares = []

    def sq(p, axes):
        a, b = axes
        out = [p]
        for da, db in [(1, 0), (0, 1), (1, 1)]:
            q = list(p)
            q[a] += da
            q[b] += db
            out.append(tuple(q))
        squares.append(tuple(out))

    tube_low = (1, 1)    # crosses the lower room, opens the upper one
    tube_up = (2, 1)     # crosses the upper room, opens the lower one
    for x in range(4):
        for y in range(3):
            if (x, y) != tube_low:
                sq((x, y, 0), (0, 1))          # floor
            if (x, y) != tube_up:
                sq((x, y, 2), (0, 1))          # roof
            if (x, y) not in (tube_low, tube_up):
                sq((x, y, 1), (0, 1))          # middle floor
    for z in range(2):
        for y in range(3):
            sq((0, y, z), (1, 2))              # outer walls
            sq((4, y, z), (1, 2))
        for x in range(4):
            sq((x, 0, z), (0, 2))
            sq((x, 3, z), (0, 2))
    for (x, y), zlo in [(tube_low, 0), (tube_up, 1)]:
        sq((x, y, zlo), (0, 2))                # tube walls
        sq((x, y + 1, zlo), (0, 2))
        sq((x, y, zlo), (1, 2))
        sq((x + 1, y, zlo), (1, 2))
    sq((2, 1, 0), (0, 2))                      # panel: lower tube to x=4
    sq((3, 1, 0), (0, 2))
    sq((0, 1, 1), (0, 2))                      # panel: upper tube to x=0
    sq((1, 1, 1), (0, 2))

    tris = [t for s in squares for t in _square_triangles(s)]
    return SimplicialComplex.from_facets(tris)


def grid(m: int, n: int) -> CubicalComplex:
    if m < 1 or n < 1:
        raise BadParameters("grid needs m, n >= 1")
    return CubicalComplex.from_facets(
        [[(i, i + 1), (j, j + 1)] for i in range(m) for j in range(n)])


def staircase(n: int, seed: int = 0) -> CubicalComplex:
    """Random Young-diagram-shaped cubical complex inside an n x n grid."""
    if n < 1:
        raise BadParameters("n must be >= 1")
    rng = random.Random(seed)
    heights = sorted((rng.randint(1, n) for _ in range(n)), reverse=True)
    cells = [[(i, i + 1), (j, j + 1)]
             for i in range(n) for j in range(heights[i])]
    return CubicalComplex.from_facets(cells)


def tri_grid(m: int, n: int, pattern: str = "\\") -> GeometricComplex:
    """m x n grid of unit squares, each triangulated by a slash or
    backslash diagonal.  `pattern` is a single character or one character
    per column (repeated down each column)."""
    if m < 1 or n < 1:
        raise BadParameters("tri_grid needs m, n >= 1")
    if any(ch not in "/\\" for ch in pattern) or not pattern:
        raise BadParameters("pattern must consist of '/' and '\\'")
    facets = []
    for i in range(m):
        ch = pattern[i % len(pattern)]
        for j in range(n):
            a, b = (i, j), (i + 1, j)
            c, d = (i, j + 1), (i + 1, j + 1)
            if ch == "\\":
                facets += [(a, b, c), (b, c, d)]
            else:
                facets += [(a, b, d), (a, c, d)]
    pos = {p: p for f in facets for p in f}
    return GeometricComplex(SimplicialComplex.from_facets(facets), pos)


def surface_mg(g: int, pi=None, seed: int = 0):
    """Closed orientable genus-g surface with exactly 20g triangles: sphere
    over a triangulated strip, minus 2g disjoint triangle interiors, with g
    triangulated prisms glued along the bijection pi."""
    if g < 1:
        raise BadParameters("g must be >= 1")
    if pi is None:
        rng = random.Random(seed)
        targets = list(range(1, g + 1))
        rng.shuffle(targets)
        pi = dict(zip(range(1, g + 1), targets))
    else:
        pi = dict(pi)
    if sorted(pi) != list(range(1, g + 1)) or \
            sorted(pi.values()) != list(range(1, g + 1)):
        raise BadParameters("pi must be a bijection on {1..g}")

    # strip of 4g squares, first half backslash, second half slash,
    # triangles numbered 1..8g left to right
    tris = []
    for k in range(1, 4 * g + 1):
        a, b = (k - 1, 0), (k, 0)
        c, d = (k - 1, 1), (k, 1)
        if k <= 2 * g:
            tris += [(a, c, b), (c, b, d)]
        else:
            tris += [(a, c, d), (a, b, d)]
    tris = [tuple(sorted(t)) for t in tris]
    del tris[8 * g - 1]                       # cut away the last triangle

    disc = SimplicialComplex.from_facets(tris)
    apex = (-1, -1)
    rim = [e for e in disc.faces if len(e) == 2
           and sum(1 for t in disc.facets if set(e) <= set(t)) == 1]
    sphere_facets = list(disc.facets) + \
        [tuple(sorted(e + (apex,))) for e in rim]

    holes = {}
    for j in range(1, 2 * g + 1):
        a_j = 4 * j - 2 if j <= g else 4 * j - 1
        holes[j] = tris[a_j - 1]
    sphere_facets = [f for f in sphere_facets if f not in set(holes.values())]

    prisms = []
    for i in range(1, g + 1):
        t1 = holes[i]                    # backslash square 2i-1, right half
        t2 = holes[g + pi[i]]            # slash square 2(g+pi(i)), left half
        left = min(t1, key=lambda p: (p[0], -p[1]))
        top1 = max((p for p in t1 if p != left), key=lambda p: (p[1], p[0]))
        rest1 = next(p for p in t1 if p not in (left, top1))
        right = max(t2, key=lambda p: (p[0], p[1]))
        top2 = max((p for p in t2 if p != right), key=lambda p: (p[1], -p[0]))
        rest2 = next(p for p in t2 if p not in (right, top2))
        rim1 = [left, top1, rest1]
        rim2 = [right, top2, rest2]
        for k in range(3):
            p, q = rim1[k], rim1[(k + 1) % 3]
            pp, qq = rim2[k], rim2[(k + 1) % 3]
            prisms += [tuple(sorted((p, q, pp))), tuple(sorted((q, pp, qq)))]
    return SimplicialComplex.from_facets(sphere_facets + prisms)


def lshape_2d() -> GeometricComplex:
    """Star-shaped non-convex union of three unit squares, six triangles;
    the inner corner point (1/2, 1/2) is in the kernel."""
    squares = [(0, 0), (1, 0), (0, 1)]
    facets = []
    for x, y in squares:
        facets += _square_triangles(
            [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)])
    pos = {p: p for f in facets for p in f}
    return GeometricComplex(SimplicialComplex.from_facets(facets), pos)


def lshape_3d() -> GeometricComplex:
    """Solid L-shaped prism from three path-triangulated unit cubes; the
    point (1/2, 1/2, 1/2) is in the kernel."""
    tets = []
    for a, b, c in [(0, 0, 0), (1, 0, 0), (0, 1, 0)]:
        for perm in permutations(range(3)):
            pts = [(a, b, c)]
            cur = [a, b, c]
            for ax in perm:
                cur = list(cur)
                cur[ax] += 1
                pts.append(tuple(cur))
            tets.append(tuple(pts))
    pos = {p: p for t in tets for p in t}
    return GeometricComplex(SimplicialComplex.from_facets(tets), pos)


def _circle_point(t: Fraction):
    """Rational point on the unit circle from the tangent half-angle t."""
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


def random_convex(n: int, seed: int = 0, d: int = 2) -> GeometricComplex:
    """Fan triangulation of a random rational convex polygon (d=2) or a
    coned hull triangulation of random rational points on the sphere-like
    curve (d=3)."""
    if n < d + 1:
        raise BadParameters("need at least d+1 points")
    rng = random.Random(seed)
    if d == 2:
        ts = sorted({Fraction(rng.randint(-400, 400), 100)
                     for _ in range(n)})
        pts = [_circle_point(t) for t in ts]
        if len(pts) < 3:
            raise BadParameters("degenerate sample; change the seed")
        facets = [(0, i, i + 1) for i in range(1, len(pts) - 1)]
        return GeometricComplex(SimplicialComplex.from_facets(facets),
                                {i: p for i, p in enumerate(pts)})
    if d == 3:
        pts = set()
        while len(pts) < n:
            t = Fraction(rng.randint(-300, 300), 100)
            s = Fraction(rng.randint(-300, 300), 100)
            x, y = _circle_point(t)
            z, w = _circle_point(s)
            pts.add((x * w, y * w, z))
        pts = sorted(pts)
        tets = hull_facet_triangulation(list(pts), 3)
        pid = {p: i for i, p in enumerate(pts)}
        facets = [tuple(sorted(pid[p] for p in tet)) for tet in tets]
        pos = {i: p for p, i in pid.items()}
        return GeometricComplex(SimplicialComplex.from_facets(facets), pos)
    raise BadParameters("d must be 2 or 3")


def random_subdivision(d: int, size: int, seed: int = 0):
    """Random stellar subdivision of the standard d-simplex with roughly
    `size` facets.  Returns (subdivision, parent) geometric complexes."""
    if d not in (2, 3):
        raise BadParameters("d must be 2 or 3")
    base = simplex(d)
    origin = tuple(0 for _ in range(d))
    pos = {1: origin}
    for i in range(d):
        e = [0] * d
        e[i] = 1
        pos[2 + i] = tuple(e)
    parent = GeometricComplex(base, pos)
    rng = random.Random(seed)
    c, p = base, dict(pos)
    nid = d + 10
    while len(c.facets) < size:
        f = rng.choice(sorted(x for x in c.faces if len(x) >= 2))
        new = []
        for t in c.facets:
            if set(f) <= set(t):
                rest = tuple(x for x in t if x not in f)
                for sub in (tuple(x for x in f if x != v) for v in f):
                    new.append(tuple(sorted(sub + rest + (nid,))))
            else:
                new.append(t)
        p[nid] = barycenter([vec(p[v]) for v in f])
        c = SimplicialComplex.from_facets(new)
        nid += 1
    return GeometricComplex(c, p), parent


_GENERATORS = {
    "simplex": (simplex, ("d",)),
    "boundary_sphere": (boundary_sphere, ("d",)),
    "cone": (lambda d: cone_complex(0, boundary_sphere(d)), ("d",)),
    "dunce_hat": (dunce_hat, ()),
    "bing_house": (bing_house, ()),
    "grid": (grid, ("m", "n")),
    "staircase": (staircase, ("n", "seed")),
    "tri_grid": (tri_grid, ("m", "n")),
    "surface_mg": (surface_mg, ("g", "seed")),
    "wheel": (wheel, ("k",)),
    "lshape_2d": (lshape_2d, ()),
    "lshape_3d": (lshape_3d, ()),
    "random_convex": (random_convex, ("n", "seed", "d")),
}

_DEFAULTS = {"seed": 0, "d": 2}


def generate(spec: GallerySpec):
    """Instantiate a gallery complex by name; geometric where applicable."""
    if spec.name not in _GENERATORS:
        raise UnknownSpec(spec.name)
    fn, names = _GENERATORS[spec.name]
    args = []
    for p in names:
        if p in spec.parameters:
            args.append(spec.parameters[p])
        elif p in _DEFAULTS:
            args.append(_DEFAULTS[p])
        else:
            raise BadParameters(f"missing parameter {p!r}")
    extra = set(spec.parameters) - set(names)
    if extra:
        raise BadParameters(f"unknown parameters {sorted(extra)}")
    try:
        return fn(*args)
    except BadParameters:
        raise
    except (TypeError, ValueError) as exc:
        raise BadParameters(str(exc)) from exc
