# Combinatorial core: simplicial complexes (faces = sorted vertex tuples) and
# axis-aligned cubical complexes (faces = boxes of integer intervals).
from __future__ import annotations

from dataclasses import dataclass
from itertools import chain, combinations, product
from typing import Iterable, Tuple


class EmptyInput(ValueError):
    pass


class FaceNotInComplex(KeyError):
    pass


class VertexClash(ValueError):
    pass


class NotPseudomanifold(ValueError):
    pass


# ---------------------------------------------------------------------------
# simplicial faces

Face = Tuple  # sorted tuple of vertex ids (ints, or nested tuples after sd)


def face(vertices: Iterable) -> Face:
    vs = tuple(sorted(set(vertices)))
    if not vs:
        raise EmptyInput("a face needs at least one vertex")
    return vs


def face_dim(f: Face) -> int:
    return len(f) - 1


def subfaces(f: Face) -> list:
    """All nonempty faces of a simplex, including f itself."""
    return [c for k in range(1, len(f) + 1) for c in combinations(f, k)]


def proper_subfaces(f: Face) -> list:
    return [c for k in range(1, len(f)) for c in combinations(f, k)]


def covers_of(f: Face) -> list:
    """Codimension-one faces of f."""
    if len(f) == 1:
        return []
    return [f[:i] + f[i + 1:] for i in range(len(f))]


@dataclass(frozen=True)
class SimplicialComplex:
    faces: frozenset
    facets: tuple

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable]) -> "SimplicialComplex":
        raw = [face(f) for f in facets]
        if not raw:
            raise EmptyInput("no facets given")
        return cls.from_faces(chain.from_iterable(subfaces(f) for f in raw))

    @classmethod
    def from_faces(cls, faces: Iterable[Face]) -> "SimplicialComplex":
        fs = frozenset(faces)
        covered = set()
        for f in fs:
            covered.update(proper_subfaces(f))
        maximal = [f for f in fs if f not in covered]
        return cls(fs, tuple(sorted(maximal)))

    def is_empty(self) -> bool:
        return not self.faces

    def is_point(self) -> bool:
        return len(self.faces) == 1

    def __contains__(self, f) -> bool:
        return tuple(f) in self.faces

    def __len__(self) -> int:
        return len(self.faces)

    @property
    def dim(self) -> int:
        if not self.facets:
            return -1
        return max(face_dim(f) for f in self.facets)

    @property
    def vertices(self) -> list:
        return sorted(v for (v,) in (f for f in self.faces if len(f) == 1))

    def f_vector(self) -> tuple:
        counts = [0] * (self.dim + 1)
        for f in self.faces:
            counts[face_dim(f)] += 1
        return tuple(counts)

    def euler_characteristic(self) -> int:
        return sum((-1) ** face_dim(f) for f in self.faces)

    def is_pure(self) -> bool:
        d = self.dim
        return all(face_dim(f) == d for f in self.facets)

    # -- local structure ----------------------------------------------------

    def star(self, sigma) -> "SimplicialComplex":
        sigma = tuple(sigma)
        if sigma not in self.faces:
            raise FaceNotInComplex(sigma)
        s = set(sigma)
        tops = [f for f in self.faces if s <= set(f)]
        return SimplicialComplex.from_faces(
            chain.from_iterable(subfaces(f) for f in tops))

    def link(self, sigma) -> "SimplicialComplex":
        """Lk(sigma, C); by convention the empty face gives back C."""
        sigma = tuple(sigma)
        if not sigma:
            return self
        if sigma not in self.faces:
            raise FaceNotInComplex(sigma)
        s = set(sigma)
        lk = [tuple(v for v in f if v not in s)
              for f in self.faces if s <= set(f)]
        return SimplicialComplex.from_faces([f for f in lk if f])

    def delete_face(self, sigma) -> "SimplicialComplex":
        """C - sigma: drop every face containing sigma."""
        sigma = tuple(sigma)
        if sigma not in self.faces:
            raise FaceNotInComplex(sigma)
        s = set(sigma)
        return SimplicialComplex.from_faces(
            [f for f in self.faces if not s <= set(f)])

    def deletion(self, d) -> "SimplicialComplex":
        """Delete a face (faces containing it go) or a subcomplex (faces
        meeting its vertex set go)."""
        if isinstance(d, SimplicialComplex):
            vs = set(d.vertices)
            return SimplicialComplex.from_faces(
                [f for f in self.faces if not vs & set(f)])
        return self.delete_face(d)

    def restriction(self, keep_vertex) -> "SimplicialComplex":
        """Faces all of whose vertices satisfy the predicate."""
        return SimplicialComplex.from_faces(
            [f for f in self.faces if all(keep_vertex(v) for v in f)])

    def boundary(self) -> "SimplicialComplex":
        if not self.is_pure():
            raise NotPseudomanifold("complex is not pure")
        d = self.dim
        ridge_count = {}
        for f in self.facets:
            for r in covers_of(f):
                ridge_count[r] = ridge_count.get(r, 0) + 1
        if any(c > 2 for c in ridge_count.values()):
            raise NotPseudomanifold("a ridge lies in more than two facets")
        rim = [r for r, c in ridge_count.items() if c == 1]
        if not rim:
            return SimplicialComplex.from_faces([])
        return SimplicialComplex.from_facets(rim)

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self.faces <= other.faces

    # -- generic hooks used by the collapse machinery -----------------------

    kind = "simplicial"

    @staticmethod
    def fdim(f) -> int:
        return face_dim(f)

    @staticmethod
    def fcontains(big, small) -> bool:
        return set(small) <= set(big)

    @staticmethod
    def fcovers(f) -> list:
        return covers_of(f)

    @staticmethod
    def fsubfaces(f) -> list:
        return subfaces(f)

    def with_faces(self, faces: Iterable) -> "SimplicialComplex":
        return SimplicialComplex.from_faces(faces)


def join_faces(sigma, tau) -> Face:
    if set(sigma) & set(tau):
        raise VertexClash(f"{sigma} and {tau} share vertices")
    return face(tuple(sigma) + tuple(tau))


def cone(v, c: SimplicialComplex) -> SimplicialComplex:
    if (v,) in c.faces:
        raise VertexClash(f"{v} is already a vertex of the base")
    joined = [face(f + (v,)) for f in c.faces]
    return SimplicialComplex.from_faces(list(c.faces) + joined + [(v,)])


def join_complexes(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    if set(a.vertices) & set(b.vertices):
        raise VertexClash("vertex sets are not disjoint")
    faces = list(a.faces) + list(b.faces)
    faces += [face(f + g) for f in a.faces for g in b.faces]
    return SimplicialComplex.from_faces(faces)


# ---------------------------------------------------------------------------
# cubical complexes: a face is a box, i.e. a tuple of (lo, hi) integer
# intervals with hi - lo in {0, 1}

Box = Tuple[Tuple[int, int], ...]


def box(intervals: Iterable) -> Box:
    b = tuple((int(lo), int(hi)) for lo, hi in intervals)
    if not b:
        raise EmptyInput("a box needs at least one coordinate")
    for lo, hi in b:
        if hi - lo not in (0, 1):
            raise ValueError(f"interval ({lo},{hi}) is not of length 0 or 1")
    return b


def box_dim(b: Box) -> int:
    return sum(1 for lo, hi in b if hi > lo)


def box_contains(big: Box, small: Box) -> bool:
    return len(big) == len(small) and all(
        blo <= slo and shi <= bhi
        for (blo, bhi), (slo, shi) in zip(big, small))


def box_subfaces(b: Box) -> list:
    """All faces of a box, including b itself."""
    choices = []
    for lo, hi in b:
        if hi > lo:
            choices.append([(lo, lo), (hi, hi), (lo, hi)])
        else:
            choices.append([(lo, hi)])
    return [tuple(c) for c in product(*choices)]


def box_covers(b: Box) -> list:
    out = []
    for i, (lo, hi) in enumerate(b):
        if hi > lo:
            out.append(b[:i] + ((lo, lo),) + b[i + 1:])
            out.append(b[:i] + ((hi, hi),) + b[i + 1:])
    return out


def box_vertices(b: Box) -> list:
    """Corner points of a box, as coordinate tuples."""
    return [tuple(c) for c in product(*[(lo,) if lo == hi else (lo, hi)
                                        for lo, hi in b])]


@dataclass(frozen=True)
class CubicalComplex:
    faces: frozenset
    facets: tuple

    @classmethod
    def from_facets(cls, facets: Iterable) -> "CubicalComplex":
        raw = [box(b) for b in facets]
        if not raw:
            raise EmptyInput("no facets given")
        return cls.from_faces(chain.from_iterable(box_subfaces(b) for b in raw))

    @classmethod
    def from_faces(cls, faces: Iterable[Box]) -> "CubicalComplex":
        fs = frozenset(faces)
        if not fs:
            raise EmptyInput("no faces given")
        covered = set()
        for b in fs:
            covered.update(s for s in box_subfaces(b) if s != b)
        maximal = [f for f in fs if f not in covered]
        return cls(fs, tuple(sorted(maximal)))

    def __contains__(self, b) -> bool:
        return tuple(b) in self.faces

    def __len__(self) -> int:
        return len(self.faces)

    @property
    def dim(self) -> int:
        return max(box_dim(b) for b in self.facets)

    @property
    def vertices(self) -> list:
        return sorted(tuple(lo for lo, _ in b)
                      for b in self.faces if box_dim(b) == 0)

    def f_vector(self) -> tuple:
        counts = [0] * (self.dim + 1)
        for b in self.faces:
            counts[box_dim(b)] += 1
        return tuple(counts)

    def euler_characteristic(self) -> int:
        return sum((-1) ** box_dim(b) for b in self.faces)

    def vertex_box(self, point) -> Box:
        return tuple((int(x), int(x)) for x in point)

    # -- generic hooks used by the collapse machinery -----------------------

    kind = "cubical"

    @staticmethod
    def fdim(b) -> int:
        return box_dim(b)

    @staticmethod
    def fcontains(big, small) -> bool:
        return box_contains(big, small)

    @staticmethod
    def fcovers(b) -> list:
        return box_covers(b)

    @staticmethod
    def fsubfaces(b) -> list:
        return box_subfaces(b)

    def with_faces(self, faces: Iterable) -> "CubicalComplex":
        return CubicalComplex.from_faces(faces)
