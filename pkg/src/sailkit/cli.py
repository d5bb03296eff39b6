"""sailkit command line: batch pipelines with JSON in and JSON out.

Exit codes: 0 success, 2 validation error (JSON error object on stdout),
64 bad command line, 65 missing or malformed input file.
"""

import argparse
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .errors import InvalidInput, SailkitError
from . import serialize as S

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_INPUT = 0, 2, 64, 65


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --- input helpers -------------------------------------------------------------------

def _load_json(path, inputs):
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")
    inputs[path] = S.hashlib.sha256(raw).hexdigest()
    try:
        return json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise InputError(f"{path} is not valid JSON: {e}")


def _load_cone(path, inputs):
    d = _load_json(path, inputs)
    return S.cone_from_json(d.get("cone", d) if isinstance(d, dict) and "kind" not in d else d)


def _load_patch(path, inputs):
    d = _load_json(path, inputs)
    if not isinstance(d, dict):
        raise InputError(f"{path} does not hold a patch object")
    try:
        return S.patch_from_json(d)
    except InvalidInput as e:
        raise InputError(f"{path}: {e}")


def _matrix_arg(text):
    try:
        return S.parse_int_mat(json.loads(text))
    except (json.JSONDecodeError, InvalidInput) as e:
        raise InvalidInput(f"--matrix must be a JSON integer matrix: {e}")


def _vector_arg(text):
    try:
        v = json.loads(text) if text.strip().startswith("[") else text.split(",")
        return S.parse_int_vec(list(v))
    except (json.JSONDecodeError, InvalidInput) as e:
        raise InvalidInput(f"bad vertex {text!r}: {e}")


def _number_arg(text):
    try:
        r = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"not an exact number: {text!r}")
    return r


def _alpha_arg(text):
    """``p/q`` or a JSON object {"min_poly": [...], "interval": [lo, hi]}."""
    t = text.strip()
    if t.startswith("{"):
        try:
            return S.algebraic_from_json(json.loads(t))
        except json.JSONDecodeError as e:
            raise InvalidInput(f"--alpha is not valid JSON: {e}")
    return _number_arg(t)


def _threads():
    v = os.environ.get("SAILKIT_THREADS")
    if v is None:
        return 1
    try:
        n = int(v)
    except ValueError:
        raise InvalidInput("SAILKIT_THREADS must be a positive integer")
    if n < 1:
        raise InvalidInput("SAILKIT_THREADS must be a positive integer")
    return n


# --- subcommands -----------------------------------------------------------------------

def cmd_cone(a, inputs):
    from .cone import cone_from_matrix, irrationality_check
    if a.spec:
        c = _load_cone(a.spec, inputs)
    elif a.matrix:
        rays = json.loads(a.rays) if a.rays else None
        if rays is not None:
            rays = [{"index": S.parse_int(r["index"]), "sign": S.parse_int(r.get("sign", 1))}
                    if isinstance(r, dict) else S.parse_int(r) for r in rays]
        c = cone_from_matrix(_matrix_arg(a.matrix), rays=rays)
    else:
        raise UsageError("cone needs --spec or --matrix")
    out = {"cone": S.cone_to_json(c), "dimension": S.num(c.n), "irrational": irrationality_check(c),
           "rays": [S.elems_to_json(r.coords) for r in c.rays],
           "forms": [S.elems_to_json(L.coords) for L in c.forms],
           "fields": [S.algebraic_to_json(f) for f in c.fields]}
    return out, S.cone_to_json(c)


def cmd_sail(a, inputs):
    from .sail import invariant_sail_patch, sail_patch
    c = _load_cone(a.cone, inputs)
    if a.translates is not None:
        if c.matrix is None:
            raise InvalidInput("--translates needs a cone given by a matrix")
        H = _number_arg(a.height) if a.height else None
        p = invariant_sail_patch(c.matrix, c, a.translates, base_height=H, prune=not a.no_prune)
    else:
        if not a.height:
            raise UsageError("sail needs --height (or --translates)")
        p = sail_patch(c, _number_arg(a.height), prune=not a.no_prune)
    pj = S.patch_to_json(p)
    summary = {"vertices": S.num(len(p.vertices)), "faces": S.num(len(p.faces)),
               "certified_faces": S.num(len(p.certified_faces())),
               "complete_vertices": S.num(len(p.complete_vertices())), "height": S.num(p.height)}
    return (summary if a.out else pj), pj


def cmd_invariants(a, inputs):
    if a.matrix:
        from .exact.eigen import eigen_decomposition
        from .exact import intmat
        from .operators import check_properties, classify_unimodular_3d, is_hyperbolic
        A = _matrix_arg(a.matrix)
        flags = check_properties(A)
        out = {"matrix": S.mat(A), "char_poly": S.vec(intmat.char_poly(A)),
               "flags": {k: S._flag_json(v) for k, v in sorted(flags.items())},
               "hyperbolic": is_hyperbolic(A),
               "eigen": [e.to_json() for e in eigen_decomposition(A)]}
        if len(A) == 3:
            try:
                out["classification"] = classify_unimodular_3d(A).to_json()
            except SailkitError as e:
                out["classification"] = e.to_json()
        return out, out
    if not a.patch:
        raise UsageError("invariants needs --patch or --matrix")
    from .lattice import det_edge_star, det_face, integer_distance
    from .stars import edge_star
    p = _load_patch(a.patch, inputs)
    faces = []
    for fi in p.certified_faces():
        F = p.face_record(fi)
        faces.append({"face": S.num(fi), "vertices": S.mat(F.vertices), "normal": S.vec(F.normal),
                      "det_face": S.num(det_face(F)),
                      "distance_to_origin": S.num(integer_distance(F, (0,) * p.n))})
    verts = []
    for vi in p.complete_vertices():
        st = edge_star(p, vi)
        verts.append({"vertex": S.vec(p.vertices[vi]), "edges": S.mat(st.edge_vectors),
                      "det_edge_star": S.num(det_edge_star(st))})
    out = {"faces": faces, "vertices": verts}
    return out, out


def cmd_stars(a, inputs):
    from .lattice import det_edge_star
    from .stars import configuration, edge_star, equivalences, star_cells
    p = _load_patch(a.patch, inputs)
    v = _vector_arg(a.vertex)
    st = edge_star(p, v)
    out = {"vertex": S.vec(st.vertex), "edges": S.mat(st.edge_vectors), "det_edge_star": S.num(det_edge_star(st))}
    if a.other:
        w = _vector_arg(a.other)
        maps = list(equivalences(configuration(star_cells(p, v)), configuration(star_cells(p, w)), a.group,
                                 limit=a.limit))
        out["other"] = S.vec(w)
        out["group"] = a.group
        out["equivalent"] = bool(maps)
        out["maps"] = [S.map_to_json(m) for m in sorted(maps, key=lambda m: (m.linear, m.translation))]
    return out, out


def cmd_period(a, inputs):
    from .chains import Chain, auto_chain, colour_sequence, recover_shift_operator
    from .operators import preserves_cone
    p = _load_patch(a.patch, inputs)
    if a.chain == "auto":
        chain = auto_chain(p)
    else:
        try:
            chain = Chain(tuple(S.parse_int_vec(v) for v in json.loads(a.chain)))
        except (json.JSONDecodeError, TypeError):
            raise InvalidInput("--chain must be 'auto' or a JSON list of vertices")
    k = a.k if a.k is not None else p.n
    col = colour_sequence(chain, p, k, a.group)
    out = {"chain": S.mat(chain.vertices), "colouring": col.to_json()}
    try:
        m = recover_shift_operator(chain, p, a.group)
        out["shift"] = S.map_to_json(m)
        out["preserves_cone"] = preserves_cone(m.linear, p.cone)
    except SailkitError as e:
        out["shift"] = None
        out["shift_error"] = e.to_json()
    return out, out


def cmd_cf2d(a, inputs):
    from .cf2d import cf_expand, cone_for_surd, klein_polygon_quotients, lagrange_roundtrip, match_alignment
    from .export import patch_svg
    from .sail import sail_patch
    x = _alpha_arg(a.alpha)
    cf = cf_expand(x, max_terms=a.terms)
    out = {"alpha": a.alpha, "cf": cf.to_json()}
    if isinstance(x, Fraction) or x.is_rational:
        return out, out
    H = _number_arg(a.height)
    c = cone_for_surd(x)
    patch = sail_patch(c, H)
    kq = klein_polygon_quotients(c, H, patch)
    seq = kq["interleaved"]
    al = match_alignment(seq, cf.quotients(len(seq) + 2 * (cf.preperiod + cf.period) + 2))
    out.update({"height": S.num(H), "sail_vertices": S.mat(kq["vertices"]), "lengths": S.vec(kq["lengths"]),
                "angles": S.vec(kq["angles"]), "interleaved": S.vec(seq),
                "alignment": None if al is None else {"offset": S.num(al[0]), "orientation": S.num(al[1])}})
    if a.roundtrip:
        rt = lagrange_roundtrip(x, H)
        out["roundtrip"] = {"shift": S.map_to_json(rt["shift"]), "det": S.num(rt["det"]),
                            "distinct_real_positive": rt["distinct_real_positive"],
                            "preserves_cone": rt["preserves_cone"], "height": S.num(rt["height"])}
    if a.svg:
        S.write_atomic(a.svg, patch_svg(patch))
    return out, out


def cmd_bounds(a, inputs):
    from .bounds import all_witnesses
    p = _load_patch(a.patch, inputs)
    kinds = ["theorem6", "corollary1"] if a.kind == "all" else [a.kind]
    ws = [w for k in kinds for w in all_witnesses(p, k)]
    lines = "".join(json.dumps(w.to_json(), sort_keys=True, separators=(",", ":")) + "\n" for w in ws)
    summary = {"witnesses": S.num(len(ws)), "all_ok": all(w.ok for w in ws),
               "max_ratio": S.num(max((w.ratio for w in ws), default=Fraction(0)))}
    return summary, lines


def cmd_oppenheim(a, inputs):
    from .diagnostics import (build_face_vertex_graph, determinant_profile, irrationality_report,
                              norm_form_min, periodic_chain_probe, vertex_edge_colouring, UNKNOWN)
    from .sail import invariant_sail_patch, sail_patch
    c = _load_cone(a.cone, inputs)
    val, arg = norm_form_min(c.forms, a.radius)
    from .exact.algebraic import to_algebraic
    out = {"radius": S.num(a.radius), "norm_min": S.algebraic_to_json(to_algebraic(val)),
           "argmin": S.vec(arg), "irrationality": {k: (S.vec(v) if isinstance(v, tuple) else v)
                                                   for k, v in irrationality_report(c.forms).items()}}
    if a.translates is not None and c.matrix is not None:
        p = invariant_sail_patch(c.matrix, c, a.translates,
                                 base_height=_number_arg(a.height) if a.height else None)
    else:
        if not a.height:
            raise UsageError("oppenheim needs --height (or --translates)")
        p = sail_patch(c, _number_arg(a.height))
    prof = determinant_profile(p)
    out["det_profile"] = _plain_profile(prof)
    if p.n == 3:
        g = vertex_edge_colouring(build_face_vertex_graph(p), p)
        probe = periodic_chain_probe(g, a.max_chain)
        out["graph_stats"] = {
            "nodes": S.num(len(g.nodes)), "edges": S.num(len(g.edges())), "boundary": S.num(len(g.boundary)),
            "node_colours": S.num(len({x for x in g.node_colour.values() if x != UNKNOWN})),
            "edge_colours": S.num(len({x for x in g.edge_colour.values() if x != UNKNOWN})),
            "probe": {"found": probe["found"], "period": S.num(probe["period"]) if probe["found"] else None,
                      "length": S.num(len(probe["chain"])) if probe["found"] else None}}
    else:
        out["graph_stats"] = None
    return out, out


def _plain_profile(prof):
    def one(d):
        return {"max_det_face": None if d["max_det_face"] is None else S.num(d["max_det_face"]),
                "max_det_star": None if d["max_det_star"] is None else S.num(d["max_det_star"]),
                "face_hist": {str(k): S.num(v) for k, v in d["face_hist"].items()},
                "star_hist": {str(k): S.num(v) for k, v in d["star_hist"].items()},
                "faces": S.num(d["faces"]), "vertices": S.num(d["vertices"])}
    out = one(prof)
    if "per_translate" in prof:
        out["per_translate"] = {str(j): one(d) for j, d in prof["per_translate"].items()}
    return out


def cmd_export(a, inputs):
    from .export import patch_obj, patch_svg
    p = _load_patch(a.patch, inputs)
    fmt = a.format or ("svg" if p.n == 2 else "obj")
    text = patch_svg(p) if fmt == "svg" else patch_obj(p)
    return {"format": fmt, "bytes": S.num(len(text.encode()))}, text


COMMANDS = {"cone": cmd_cone, "sail": cmd_sail, "invariants": cmd_invariants, "stars": cmd_stars,
            "period": cmd_period, "cf2d": cmd_cf2d, "bounds": cmd_bounds, "oppenheim": cmd_oppenheim,
            "export": cmd_export}


def build_parser():
    ap = _Parser(prog="sailkit", description="Exact sails of simplicial cones.")
    ap.add_argument("--version", action="version", version=f"sailkit {__version__}")
    ap.add_argument("--manifest", help="write a run manifest to this path")
    ap.add_argument("--replay", help="re-run a manifest and compare output digests")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--manifest", default=argparse.SUPPRESS, help="write a run manifest to this path")

    p = sub.add_parser("cone", parents=[common], help="build a cone and report its forms")
    p.add_argument("--spec")
    p.add_argument("--matrix")
    p.add_argument("--rays")
    p.add_argument("--out")

    p = sub.add_parser("sail", parents=[common], help="compute a sail patch")
    p.add_argument("--cone", required=True)
    p.add_argument("--height")
    p.add_argument("--translates", type=int)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("invariants", parents=[common], help="lattice invariants of a patch or spectral data of a matrix")
    p.add_argument("--patch")
    p.add_argument("--matrix")
    p.add_argument("--out")

    p = sub.add_parser("stars", parents=[common], help="edge star of a vertex, optionally compared with another")
    p.add_argument("--patch", required=True)
    p.add_argument("--vertex", required=True)
    p.add_argument("--other")
    p.add_argument("--group", default="aff_pm")
    p.add_argument("--limit", type=int, default=8)
    p.add_argument("--out")

    p = sub.add_parser("period", parents=[common], help="colouring period and shift operator along a chain")
    p.add_argument("--patch", required=True)
    p.add_argument("--chain", default="auto")
    p.add_argument("--group", default="aff_pm")
    p.add_argument("--k", type=int)
    p.add_argument("--out")

    p = sub.add_parser("cf2d", parents=[common], help="continued fraction versus Klein polygon")
    p.add_argument("--alpha", required=True)
    p.add_argument("--height", default="64")
    p.add_argument("--terms", type=int, default=64)
    p.add_argument("--roundtrip", action="store_true")
    p.add_argument("--svg")
    p.add_argument("--out")

    p = sub.add_parser("bounds", parents=[common], help="distance bound witnesses as JSON lines")
    p.add_argument("--patch", required=True)
    p.add_argument("--kind", choices=["theorem6", "corollary1", "all"], default="all")
    p.add_argument("--out")

    p = sub.add_parser("oppenheim", parents=[common], help="norm-form minimum against determinant profiles")
    p.add_argument("--cone", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--height")
    p.add_argument("--translates", type=int)
    p.add_argument("--max-chain", type=int, default=30)
    p.add_argument("--out")

    p = sub.add_parser("export", parents=[common], help="SVG (planar) or OBJ (spatial) drawing of a patch")
    p.add_argument("--patch", required=True)
    p.add_argument("--format", choices=["svg", "obj"])
    p.add_argument("--out", required=True)
    return ap


def _execute(argv, stdout):
    """Run one command; returns (exit code, inputs, outputs)."""
    inputs, outputs = {}, {}
    try:
        a = build_parser().parse_args(argv)
        if a.replay:
            return _replay(a.replay, stdout), inputs, outputs
        if not a.command:
            raise UsageError("a subcommand is required")
        _threads()
        report, artifact = COMMANDS[a.command](a, inputs)
        if getattr(a, "out", None):
            text = artifact if isinstance(artifact, str) else S.dumps(artifact)
            S.write_atomic(a.out, text)
            outputs[a.out] = S.hashlib.sha256(text.encode()).hexdigest()
            stdout.write(S.dumps(report))
        else:
            stdout.write(artifact if isinstance(artifact, str) else S.dumps(report))
        if getattr(a, "svg", None):
            outputs[a.svg] = S.digest(a.svg)
        if a.manifest:
            man = {"command": list(argv), "inputs": inputs, "outputs": outputs, "version": __version__,
                   "parameters": {k: v for k, v in sorted(vars(a).items())
                                  if k not in ("manifest", "replay") and v is not None}}
            S.write_atomic(a.manifest, S.dumps(man))
        return EXIT_OK, inputs, outputs
    except UsageError as e:
        sys.stderr.write(f"sailkit: {e}\n")
        return EXIT_USAGE, inputs, outputs
    except InputError as e:
        stdout.write(S.dumps({"error": "MalformedInput", "message": str(e)}))
        return EXIT_INPUT, inputs, outputs
    except SailkitError as e:
        stdout.write(S.dumps(e.to_json()))
        return EXIT_INVALID, inputs, outputs
    except (ValueError, ZeroDivisionError) as e:
        stdout.write(S.dumps({"error": "InvalidInput", "message": str(e)}))
        return EXIT_INVALID, inputs, outputs


def _replay(path, stdout):
    inputs = {}
    man = _load_json(path, inputs)
    argv = [x for x in man["command"]]
    # drop the manifest flag so the replay does not overwrite it
    if "--manifest" in argv:
        i = argv.index("--manifest")
        del argv[i:i + 2]
    buf = io.StringIO()
    code, got_in, got_out = _execute(argv, buf)
    same = code == EXIT_OK and got_in == man["inputs"] and got_out == man["outputs"]
    stdout.write(S.dumps({"replayed": man["command"], "identical": same}))
    return EXIT_OK if same else EXIT_INVALID


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    code, _, _ = _execute(argv, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
