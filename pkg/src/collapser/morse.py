# Discrete vector fields, star-minimal oracles and gradient matchings.
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Optional, Set, Tuple

from .complexes import SimplicialComplex, face_dim
from .geometry import (
    GeometricComplex,
    NonUniqueMinimum,
    closest_point_on_star,
    sqdist,
    vec,
)


class StarMinimalityViolation(Exception):
    """A star has no unique closest point to the reference point."""


class OracleInconsistency(Exception):
    pass


class JoinMissing(Exception):
    pass


@dataclass(frozen=True)
class DiscreteVectorField:
    pairs: frozenset  # of (sigma, Sigma), sigma a codim-1 face of Sigma

    def __post_init__(self):
        seen = set()
        for s, t in self.pairs:
            for f in (s, t):
                if f in seen:
                    raise ValueError(f"face {f} occurs in two pairs")
                seen.add(f)


@dataclass(frozen=True)
class MorseMatching:
    field: DiscreteVectorField
    critical: frozenset

    def morse_vector(self, dim: int = None) -> tuple:
        if not self.critical:
            return () if dim is None else (0,) * (dim + 1)
        top = max(face_dim(f) for f in self.critical)
        if dim is not None:
            top = max(top, dim)
        out = [0] * (top + 1)
        for f in self.critical:
            out[face_dim(f)] += 1
        return tuple(out)


class StarMinimalOracle:
    """Answers mu(sigma) (carrier of the star minimum) and y(sigma) (the
    distinguished minimal vertex of mu(sigma))."""

    def query(self, sigma) -> Tuple[tuple, object]:
        raise NotImplementedError

    def y(self, sigma):
        return self.query(sigma)[1]


class DistanceOracle(StarMinimalOracle):
    """Star minimality via exact squared distance to a reference point;
    vertex ties inside the carrier break by (squared distance, vertex id)."""

    def __init__(self, g: GeometricComplex, w):
        self.g = g
        self.w = vec(w)
        self._facet_cache: Dict[tuple, object] = {}
        self._memo: Dict[tuple, Tuple[tuple, object]] = {}

    def vertex_key(self, v):
        return (sqdist(self.g.pos(v), self.w), v)

    def query(self, sigma):
        sigma = tuple(sigma)
        if sigma in self._memo:
            return self._memo[sigma]
        try:
            point, carrier, d2 = closest_point_on_star(
                self.w, sigma, self.g, _cache=self._facet_cache)
        except NonUniqueMinimum as exc:
            raise StarMinimalityViolation(sigma) from exc
        y = min(carrier, key=self.vertex_key)
        self._memo[sigma] = (carrier, y)
        return carrier, y


def distance_oracle(g: GeometricComplex, w) -> DistanceOracle:
    return DistanceOracle(g, w)


def gradient_matching(c: SimplicialComplex, oracle: StarMinimalOracle) -> MorseMatching:
    """Pair each face with its join to the distinguished star-minimal
    vertex, by increasing dimension; unmatched faces are critical."""
    pairs = []
    matched: Set[tuple] = set()
    for sigma in sorted(c.faces, key=lambda f: (len(f), f)):
        mu, y = oracle.query(sigma)
        joined = tuple(sorted(set(mu) | set(sigma)))
        if (y,) not in c.faces or joined not in c.faces:
            raise OracleInconsistency((sigma, mu, y))
        if y in sigma:
            continue
        target = tuple(sorted(sigma + (y,)))
        if target not in c.faces:
            raise JoinMissing((sigma, y))
        if sigma in matched or target in matched:
            # a face already claimed as a join target must carry its
            # distinguished vertex; anything else breaks injectivity
            raise OracleInconsistency((sigma, target))
        pairs.append((sigma, target))
        matched.add(sigma)
        matched.add(target)
    critical = frozenset(f for f in c.faces if f not in matched)
    return MorseMatching(DiscreteVectorField(frozenset(pairs)), critical)


def is_acyclic(v: DiscreteVectorField, c=None):
    """(acyclic?, witness closed gradient path or None)."""
    by_source = {s: t for s, t in v.pairs}
    # edges between pairs: (s, t) -> (s', t') when s' is a facet of t, s' != s
    adj = {}
    for s, t in v.pairs:
        outs = []
        for i in range(len(t)):
            s2 = t[:i] + t[i + 1:]
            if s2 != s and s2 in by_source and len(by_source[s2]) == len(t):
                outs.append(s2)
        adj[s] = outs
    state: Dict[tuple, int] = {}
    parent: Dict[tuple, Optional[tuple]] = {}
    for start in adj:
        if state.get(start):
            continue
        stack = [(start, iter(adj[start]))]
        state[start] = 1
        parent[start] = None
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if state.get(nxt) == 1:
                    path = [nxt, node]
                    cur = parent[node]
                    while cur is not None and path[-1] != nxt:
                        path.append(cur)
                        cur = parent.get(cur)
                    cycle = list(reversed(path))
                    witness = []
                    for s in cycle:
                        witness.append((s, by_source[s]))
                    return False, witness
                if nxt not in state:
                    state[nxt] = 1
                    parent[nxt] = node
                    stack.append((nxt, iter(adj[nxt])))
                    advanced = True
                    break
            if not advanced:
                state[node] = 2
                stack.pop()
    return True, None


def predicted_critical_pairs(c: SimplicialComplex, oracle: StarMinimalOracle):
    """The pairs (v, tau) with y(tau) = v in tau and y(tau - v) != v; for a
    vertex tau the second condition is vacuous."""
    out = set()
    for tau in c.faces:
        y = oracle.y(tau)
        if y not in tau:
            continue
        if len(tau) == 1:
            out.add((y, tau))
            continue
        delta = tuple(u for u in tau if u != y)
        if oracle.y(delta) != y:
            out.add((y, tau))
    return out


def is_gradient_matching(m: MorseMatching, c: SimplicialComplex) -> bool:
    """Characterization: each matched pair (sigma, sigma*v) admits a facet
    containing sigma*v such that every face tau between sigma and that
    facet avoiding v is matched with tau*v."""
    theta = {s: t for s, t in m.field.pairs}
    for sigma, target in m.field.pairs:
        (v,) = set(target) - set(sigma)
        ok = False
        for big in c.facets:
            if not set(target) <= set(big):
                continue
            rest = [u for u in big if u not in sigma and u != v]
            good = True
            for k in range(len(rest) + 1):
                for extra in combinations(rest, k):
                    tau = tuple(sorted(sigma + extra))
                    want = tuple(sorted(tau + (v,)))
                    if theta.get(tau) != want:
                        good = False
                        break
                if not good:
                    break
            if good:
                ok = True
                break
        if not ok:
            return False
    return True
