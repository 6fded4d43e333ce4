"""Command-line front end: build gallery complexes, run the collapse and
Morse pipelines, and verify certificates from JSON files.

Complexes travel as JSON documents {name, kind, dim, vertices, facets},
with rational coordinates encoded as "p/q" strings.  Certificates travel
as {type, source, steps|tree, target}; producing subcommands emit a
combined {complex, certificate} report so pipelines like

    collapser gallery simplex --param d=3 | collapser convex-collapse \
        | collapser verify

work without intermediate files.  Exit codes: 0 success, 1 verification
failure or a proved negative, 2 inconclusive (budget or genericity), 3
bad input.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from .collapse import (
    BudgetExceeded,
    CollapseCertificate,
    NECertificate,
    ProvedEvasive,
    ProvedImpossible,
    SearchBudget,
    collapse_search,
    free_faces,
    is_non_evasive,
)
from .complexes import CubicalComplex, SimplicialComplex
from .constructive import (
    CarrierMissing,
    GenericityFailure,
    NotConvex,
    RealizationSearchFailed,
    RecursionBudgetExceeded,
    UnsupportedCell,
    carrier_map,
    collapse_convex,
    collapse_cubical_cat0,
    collapse_star_shaped,
    hudson_collapse,
)
from .gallery import BadParameters, GallerySpec, UnknownSpec, generate
from .geometry import GeometricComplex
from .morse import (
    OracleInconsistency,
    StarMinimalityViolation,
    distance_oracle,
    gradient_matching,
    is_acyclic,
    predicted_critical_pairs,
)
from .subdivision import sd_m
from .verify import verify_certificate, verify_ne

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# JSON plumbing

def _read_doc(path):
    try:
        if path in (None, "-"):
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path or 'stdin'}: {exc}") from exc


def _write_doc(doc, path):
    text = json.dumps(doc, indent=1, sort_keys=True)
    if path in (None, "-"):
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _frac_str(x) -> str:
    return str(Fraction(x))


def _parse_frac(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {s!r}") from exc


def _parse_point(text) -> tuple:
    return tuple(_parse_frac(t) for t in text.split(","))


def _vertex_sort_key(v):
    return (0, v) if isinstance(v, int) else (1, repr(v))


def _label_map(c) -> dict:
    """Map vertex ids to JSON-safe ids: keep ints and strings, otherwise
    relabel deterministically by sorted order."""
    vs = c.vertices
    if all(isinstance(v, (int, str)) for v in vs):
        return {v: v for v in vs}
    try:
        ordered = sorted(vs)
    except TypeError:
        ordered = sorted(vs, key=_vertex_sort_key)
    return {v: i for i, v in enumerate(ordered)}


def _face_to_json(f, kind, labels):
    if kind == "cubical":
        return [list(iv) for iv in f]
    return [labels[v] for v in f]


def _face_from_json(f, kind):
    if kind == "cubical":
        return tuple((int(lo), int(hi)) for lo, hi in f)
    return tuple(f)


def complex_to_doc(c, name="complex", positions=None, labels=None) -> dict:
    labels = labels if labels is not None else _label_map(c)
    doc = {"name": name, "kind": c.kind, "dim": c.dim}
    verts = []
    for v in sorted(c.vertices, key=_vertex_sort_key):
        entry = {"id": list(v) if c.kind == "cubical" else labels[v]}
        if positions is not None and v in positions:
            entry["coords"] = [_frac_str(x) for x in positions[v]]
        verts.append(entry)
    doc["vertices"] = verts
    doc["facets"] = sorted(_face_to_json(f, c.kind, labels) for f in c.facets)
    return doc


def complex_from_doc(doc):
    """Returns (complex, positions or None)."""
    try:
        kind = doc["kind"]
        facets = [_face_from_json(f, kind) for f in doc["facets"]]
        if kind == "simplicial":
            c = SimplicialComplex.from_facets(facets)
        elif kind == "cubical":
            c = CubicalComplex.from_facets(facets)
        else:
            raise InputError(f"unknown kind {kind!r}")
        positions = None
        for entry in doc.get("vertices", []):
            if "coords" in entry:
                positions = positions or {}
                positions[entry["id"]] = tuple(
                    _parse_frac(s) for s in entry["coords"])
        if "dim" in doc and doc["dim"] != c.dim:
            raise InputError(f"declared dim {doc['dim']} != actual {c.dim}")
        return c, positions
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed complex document: {exc}") from exc


def _doc_hash(doc) -> str:
    # certificates are combinatorial, so coordinates stay out of the hash
    payload = {k: doc[k] for k in ("kind", "dim", "facets") if k in doc}
    raw = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(raw).hexdigest()[:12]


def _geometric(doc) -> GeometricComplex:
    c, positions = complex_from_doc(doc)
    if positions is None:
        raise InputError("this command needs vertex coordinates")
    missing = [v for v in c.vertices if v not in positions]
    if missing:
        raise InputError(f"no coordinates for vertices {missing[:3]}")
    return GeometricComplex(c, positions)


def _ne_tree_to_json(cert, labels):
    if cert is None or cert.is_leaf:
        return None
    return {"vertex": labels[cert.vertex],
            "link": _ne_tree_to_json(cert.link, labels),
            "rest": _ne_tree_to_json(cert.rest, labels)}


def _ne_tree_from_json(node) -> NECertificate:
    if node is None:
        return NECertificate()
    try:
        return NECertificate(node["vertex"],
                             _ne_tree_from_json(node["link"]),
                             _ne_tree_from_json(node["rest"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed ne tree: {exc}") from exc


def cert_to_doc(cert, complex_doc, kind, labels) -> dict:
    source = {"name": complex_doc.get("name", "complex"),
              "hash": _doc_hash(complex_doc)}
    if isinstance(cert, NECertificate):
        return {"type": "ne", "source": source,
                "tree": _ne_tree_to_json(cert, labels), "target": None}
    return {"type": "collapse", "source": source,
            "steps": [[_face_to_json(a, kind, labels),
                       _face_to_json(b, kind, labels)] for a, b in cert.steps],
            "target": [_face_to_json(f, kind, labels) for f in cert.target]}


def cert_from_doc(doc, kind):
    try:
        if doc["type"] == "ne":
            return _ne_tree_from_json(doc["tree"])
        if doc["type"] == "collapse":
            steps = tuple((_face_from_json(a, kind), _face_from_json(b, kind))
                          for a, b in doc["steps"])
            target = tuple(_face_from_json(f, kind) for f in doc["target"])
            return CollapseCertificate(steps, target)
        raise InputError(f"unknown certificate type {doc['type']!r}")
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed certificate document: {exc}") from exc


def _combined(command, c, cert, name, positions=None) -> dict:
    labels = _label_map(c)
    cdoc = complex_to_doc(c, name=name, positions=positions, labels=labels)
    return {"command": command, "status": "ok",
            "complex": cdoc,
            "certificate": cert_to_doc(cert, cdoc, c.kind, labels)}


def _budget(args) -> SearchBudget:
    return SearchBudget(max_nodes=args.budget, seed=args.seed)


def _emit(args, doc, human_lines):
    """Reports: JSON when asked or when piping documents, text otherwise."""
    if args.json or human_lines is None:
        _write_doc(doc, getattr(args, "output", None))
    elif getattr(args, "output", None) not in (None, "-"):
        _write_doc(doc, args.output)
        for line in human_lines:
            print(line)
    else:
        for line in human_lines:
            print(line)


# ---------------------------------------------------------------------------
# subcommands

def cmd_gallery(args):
    params = {}
    for token in args.param:
        if "=" not in token:
            raise InputError(f"--param expects k=v, got {token!r}")
        k, v = token.split("=", 1)
        try:
            params[k] = int(v)
        except ValueError:
            params[k] = v
    made = generate(GallerySpec(args.name, params))
    if isinstance(made, GeometricComplex):
        doc = complex_to_doc(made.complex, name=args.name,
                             positions=made.positions)
    else:
        doc = complex_to_doc(made, name=args.name)
    _write_doc(doc, args.output)
    return EXIT_OK


def cmd_fvector(args):
    c, _ = complex_from_doc(_read_doc(args.complex))
    counts = {}
    for f in c.faces:
        d = (sum(1 for lo, hi in f if hi > lo) if c.kind == "cubical"
             else len(f) - 1)
        counts[d] = counts.get(d, 0) + 1
    fv = [counts.get(i, 0) for i in range(c.dim + 1)]
    _emit(args, {"command": "fvector", "fvector": fv,
                 "euler": c.euler_characteristic()},
          [f"f-vector: {tuple(fv)}",
           f"euler characteristic: {c.euler_characteristic()}"])
    return EXIT_OK


def cmd_sd(args):
    doc = _read_doc(args.complex)
    c, positions = complex_from_doc(doc)
    der = sd_m(c, args.m, positions)
    out = complex_to_doc(der.complex,
                         name=f"sd^{args.m} {doc.get('name', 'complex')}",
                         positions=der.positions)
    _write_doc(out, args.output)
    return EXIT_OK


def cmd_ne(args):
    doc = _read_doc(args.complex)
    c, _ = complex_from_doc(doc)
    if c.kind != "simplicial":
        raise InputError("non-evasiveness is defined for simplicial input")
    try:
        cert = is_non_evasive(c, _budget(args))
    except ProvedEvasive:
        _emit(args, {"command": "ne", "status": "evasive"},
              ["evasive: every vertex deletion order gets stuck"])
        return EXIT_FAIL
    report = _combined("ne", c, cert, doc.get("name", "complex"))
    _emit(args, report, None)
    return EXIT_OK


def cmd_collapse(args):
    doc = _read_doc(args.complex)
    c, _ = complex_from_doc(doc)
    target = None
    if args.target != "point":
        tdoc = _read_doc(args.target)
        target, _ = complex_from_doc(tdoc)
        if target.kind != c.kind:
            raise InputError("target kind differs from complex kind")
    try:
        cert = collapse_search(c, target=target, budget=_budget(args))
    except ProvedImpossible:
        free = sorted(free_faces(c))
        _emit(args, {"command": "collapse", "status": "impossible",
                     "free_faces": [_face_to_json(f, c.kind, _label_map(c))
                                    for f in free]},
              ["impossible: search exhausted every collapse order",
               f"free faces now: {len(free)}"])
        return EXIT_FAIL
    report = _combined("collapse", c, cert, doc.get("name", "complex"))
    _emit(args, report, None)
    return EXIT_OK


def cmd_morse(args):
    doc = _read_doc(args.complex)
    g = _geometric(doc)
    if args.from_vertex is not None:
        vid = args.from_vertex
        try:
            vid = int(vid)
        except ValueError:
            pass
        if (vid,) not in g.complex.faces:
            raise InputError(f"{vid} is not a vertex")
        w = g.pos(vid)
    elif args.from_point is not None:
        w = _parse_point(args.from_point)
    else:
        raise InputError("morse needs --from-vertex or --from-point")
    oracle = distance_oracle(g, w)
    matching = gradient_matching(g.complex, oracle)
    vec_ = matching.morse_vector(g.complex.dim)
    pairs = sorted(matching.field.pairs)
    critical = sorted(matching.critical)
    report = {"command": "morse", "morse_vector": list(vec_),
              "pairs": [[list(a), list(b)] for a, b in pairs],
              "critical": [list(f) for f in critical]}
    lines = [f"morse vector: {vec_}",
             f"matched pairs: {len(pairs)}",
             f"critical faces: {critical}"]
    if args.check_bijection:
        predicted = {tau for _, tau in
                     predicted_critical_pairs(g.complex, oracle)}
        acyclic = is_acyclic(matching.field, g.complex)
        ok = acyclic and predicted == set(matching.critical)
        report["check_bijection"] = "ok" if ok else "mismatch"
        lines.append(f"bijection check: {'ok' if ok else 'mismatch'}")
        _emit(args, report, lines)
        return EXIT_OK if ok else EXIT_FAIL
    _emit(args, report, lines)
    return EXIT_OK


def cmd_cat0_collapse(args):
    doc = _read_doc(args.complex)
    c, _ = complex_from_doc(doc)
    if c.kind != "cubical":
        raise InputError("cat0-collapse expects a cubical complex")
    root = tuple(int(t) for t in args.root.split(","))
    cert = collapse_cubical_cat0(c, root)
    report = _combined("cat0-collapse", c, cert, doc.get("name", "complex"))
    _emit(args, report, None)
    return EXIT_OK


def cmd_star_collapse(args):
    doc = _read_doc(args.complex)
    g = _geometric(doc)
    x = _parse_point(args.center)
    cert = collapse_star_shaped(g, x, _budget(args))
    d = g.complex.dim
    s = g.complex if d == 2 else sd_m(g.complex, d - 2).complex
    report = _combined("star-collapse", s, cert, doc.get("name", "complex"))
    report["subdivisions"] = d - 2
    _emit(args, report, None)
    return EXIT_OK


def cmd_convex_collapse(args):
    doc = _read_doc(args.complex)
    c, positions = complex_from_doc(doc)
    if positions is None and len(c.facets) == 1:
        # a bare simplex gets the standard embedding
        vs = c.facets[0]
        d = len(vs) - 1
        positions = {v: tuple(Fraction(int(i == j + 1)) for j in range(d))
                     for i, v in enumerate(vs)}
        g = GeometricComplex(c, positions)
    else:
        g = _geometric(doc)
    parent = _geometric(_read_doc(args.parent)) if args.parent else None
    cert = collapse_convex(g, parent=parent, budget=_budget(args))
    der = sd_m(g.complex, 1, g.positions)
    report = _combined("convex-collapse", der.complex, cert,
                       doc.get("name", "complex"), positions=der.positions)
    _emit(args, report, None)
    return EXIT_OK


def cmd_hudson(args):
    pdoc = _read_doc(args.complex)
    parent = _geometric(pdoc)
    cert_doc = _read_doc(args.cert)
    if cert_doc.get("type") != "collapse":
        raise InputError("hudson needs a collapse certificate")
    src = cert_doc.get("source", {})
    if src.get("hash") and src["hash"] != _doc_hash(pdoc):
        raise InputError("certificate does not reference this complex")
    cert = cert_from_doc(cert_doc, parent.complex.kind)
    sdoc = _read_doc(args.subdivision)
    d = _geometric(sdoc)
    carriers = carrier_map(d, parent)
    out = hudson_collapse(parent.complex, cert, d, carriers, _budget(args))
    der = sd_m(d.complex, 1, d.positions)
    report = _combined("hudson", der.complex, out,
                       f"sd {sdoc.get('name', 'subdivision')}",
                       positions=der.positions)
    _emit(args, report, None)
    return EXIT_OK


def cmd_verify(args):
    if args.complex_file and args.cert:
        cdoc = _read_doc(args.complex_file)
        vdoc = _read_doc(args.cert)
    else:
        doc = _read_doc(args.report)
        if "complex" not in doc or "certificate" not in doc:
            raise InputError("expected --complex/--cert or a combined report")
        cdoc, vdoc = doc["complex"], doc["certificate"]
    c, _ = complex_from_doc(cdoc)
    src = vdoc.get("source", {})
    if src.get("hash") and src["hash"] != _doc_hash(cdoc):
        raise InputError("certificate does not reference this complex")
    cert = cert_from_doc(vdoc, c.kind)
    if isinstance(cert, NECertificate):
        ok, why = verify_ne(c, cert)
    elif args.target == "point":
        ok, why = verify_certificate(c, cert)
    else:
        if c.kind == "cubical":
            declared = CubicalComplex.from_facets(cert.target)
        else:
            declared = SimplicialComplex.from_facets(cert.target)
        ok, why = verify_certificate(c, cert, declared)
    status = {"command": "verify", "status": "ok" if ok else "failed"}
    if not ok:
        status["reason"] = why
    _emit(args, status, ["verified" if ok else f"failed: {why}"])
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument wiring

def _add_io(p, complex_help="complex file (default: stdin)"):
    p.add_argument("complex", nargs="?", default="-", help=complex_help)
    p.add_argument("-o", "--output", default=None,
                   help="write the result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="collapser",
        description="Collapse complexes and check the certificates.")
    top.add_argument("--seed", type=int, default=0)
    top.add_argument("--budget", type=int, default=200000,
                     help="search node budget")
    top.add_argument("--json", action="store_true",
                     help="machine-readable reports")
    # the global flags are also accepted after the subcommand name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true",
                        default=argparse.SUPPRESS)
    sub = top.add_subparsers(dest="cmd", required=True,
                             parser_class=lambda **kw: argparse.ArgumentParser(
                                 parents=[common], **kw))

    p = sub.add_parser("gallery", help="build a named example complex")
    p.add_argument("name")
    p.add_argument("--param", nargs="+", action="extend", default=[],
                   metavar="K=V")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_gallery)

    p = sub.add_parser("fvector", help="face counts and Euler characteristic")
    _add_io(p)
    p.set_defaults(fn=cmd_fvector)

    p = sub.add_parser("sd", help="derived subdivision")
    p.add_argument("--m", type=int, default=1)
    _add_io(p)
    p.set_defaults(fn=cmd_sd)

    p = sub.add_parser("ne", help="search for a non-evasiveness certificate")
    _add_io(p)
    p.set_defaults(fn=cmd_ne)

    p = sub.add_parser("collapse", help="search for a collapse sequence")
    p.add_argument("--target", default="point",
                   help="'point' or a complex file to collapse onto")
    _add_io(p)
    p.set_defaults(fn=cmd_collapse)

    p = sub.add_parser("morse", help="gradient matching from a base point")
    p.add_argument("--from-vertex", default=None, metavar="ID")
    p.add_argument("--from-point", default=None, metavar="P/Q,...")
    p.add_argument("--check-bijection", action="store_true")
    _add_io(p)
    p.set_defaults(fn=cmd_morse)

    p = sub.add_parser("cat0-collapse",
                       help="collapse a cubical complex to a root vertex")
    p.add_argument("--root", required=True, metavar="X,Y,...")
    _add_io(p)
    p.set_defaults(fn=cmd_cat0_collapse)

    p = sub.add_parser("star-collapse",
                       help="non-evasiveness of sd^(d-2) of a star-shaped "
                            "complex")
    p.add_argument("--center", required=True, metavar="P/Q,...")
    _add_io(p)
    p.set_defaults(fn=cmd_star_collapse)

    p = sub.add_parser("convex-collapse",
                       help="collapse sd of a convex complex to a point")
    p.add_argument("--parent", default=None,
                   help="simplex the complex subdivides (transfer route)")
    _add_io(p)
    p.set_defaults(fn=cmd_convex_collapse)

    p = sub.add_parser("hudson",
                       help="transfer a collapse through a subdivision")
    p.add_argument("--complex", required=True, help="parent complex file")
    p.add_argument("--cert", required=True, help="parent collapse certificate")
    p.add_argument("--subdivision", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_hudson)

    p = sub.add_parser("verify", help="replay a certificate independently")
    p.add_argument("report", nargs="?", default=None,
                   help="combined report file (default: stdin)")
    p.add_argument("--complex", dest="complex_file", default=None)
    p.add_argument("--cert", default=None)
    p.add_argument("--target", default="declared",
                   choices=["declared", "point"],
                   help="also insist the collapse ends at a single vertex")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_verify)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UnknownSpec, BadParameters, NotConvex, UnsupportedCell,
            CarrierMissing, OracleInconsistency, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ProvedImpossible, ProvedEvasive, StarMinimalityViolation) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (BudgetExceeded, RecursionBudgetExceeded, RealizationSearchFailed,
            GenericityFailure) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
