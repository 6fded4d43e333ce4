# Independent certificate verification.  This module deliberately avoids
# the producer-side machinery: containment, coface counting and closures
# are reimplemented here on raw face sets.
from __future__ import annotations

from itertools import combinations, product


def _proper_subfaces(f, cubical: bool):
    if cubical:
        choices = []
        for lo, hi in f:
            if hi > lo:
                choices.append([(lo, lo), (hi, hi), (lo, hi)])
            else:
                choices.append([(lo, hi)])
        return [b for b in (tuple(c) for c in product(*choices)) if b != f]
    return [c for k in range(1, len(f)) for c in combinations(f, k)]


def _contains(big, small, cubical: bool) -> bool:
    if cubical:
        return len(big) == len(small) and all(
            blo <= slo and shi <= bhi
            for (blo, bhi), (slo, shi) in zip(big, small))
    return set(small) < set(big)


def _dim(f, cubical: bool) -> int:
    if cubical:
        return sum(1 for lo, hi in f if hi > lo)
    return len(f) - 1


def _closure(facets, cubical: bool):
    out = set()
    for f in facets:
        out.add(f)
        out.update(_proper_subfaces(f, cubical))
    return out


def verify_certificate(c, cert, target=None):
    """Replay every step of a collapse certificate.  Returns (ok, reason);
    reason locates the first illegal step on failure."""
    cubical = getattr(c, "kind", "simplicial") == "cubical"
    alive = set(c.faces)
    cof_count = {f: 0 for f in alive}
    for f in alive:
        for s in _proper_subfaces(f, cubical):
            if s in cof_count:
                cof_count[s] += 1

    def remove(x):
        alive.discard(x)
        for s in _proper_subfaces(x, cubical):
            if s in cof_count:
                cof_count[s] -= 1

    for i, (free, coface) in enumerate(cert.steps):
        if free not in alive:
            return False, f"step {i}: free face {free} not present"
        if coface not in alive:
            return False, f"step {i}: coface {coface} not present"
        if not _contains(coface, free, cubical):
            return False, f"step {i}: {coface} does not contain {free}"
        if cof_count[free] != 1:
            return False, (f"step {i}: {free} has {cof_count[free]} "
                           "cofaces, expected exactly 1")
        if cof_count[coface] != 0:
            return False, f"step {i}: coface {coface} is not maximal"
        remove(coface)
        remove(free)

    want = _closure(cert.target, cubical)
    if alive != want:
        return False, "final state does not match the declared target"
    if target is None:
        if len(alive) != 1 or _dim(next(iter(alive)), cubical) != 0:
            return False, "final state is not a single vertex"
    else:
        target_faces = target if isinstance(target, (set, frozenset)) \
            else set(target.faces)
        if alive != target_faces:
            return False, "final state does not match the requested target"
    return True, None


def verify_ne(c, cert):
    """Check a non-evasiveness certificate by recursive replay on raw face
    sets.  Returns (ok, reason)."""
    faces = frozenset(c.faces)
    return _verify_ne(faces, cert, path=())


def _verify_ne(faces, cert, path):
    if not faces:
        return False, f"{path}: empty complex"
    if cert.is_leaf:
        if len(faces) == 1 and len(next(iter(faces))) == 1:
            return True, None
        return False, f"{path}: leaf but complex is not a point"
    v = cert.vertex
    if (v,) not in faces:
        return False, f"{path}: {v} is not a vertex here"
    link = frozenset(tuple(u for u in f if u != v)
                     for f in faces if v in f and len(f) > 1)
    rest = frozenset(f for f in faces if v not in f)
    ok, why = _verify_ne(link, cert.link, path + (v, "link"))
    if not ok:
        return ok, why
    return _verify_ne(rest, cert.rest, path + (v, "rest"))
