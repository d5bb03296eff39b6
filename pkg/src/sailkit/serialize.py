"""JSON forms of the exact objects. Every number is written as a decimal
string (integers as "12", rationals as "-3/7"); parsers also accept JSON
integers for hand-written inputs."""

import hashlib
import json
import os
import tempfile
from fractions import Fraction

from .errors import InvalidInput
from .exact.algebraic import AlgebraicReal, NumberFieldElem


def num(x):
    if isinstance(x, bool):
        raise InvalidInput("booleans are not numbers")
    if isinstance(x, (int, Fraction)):
        return str(x)
    raise InvalidInput(f"cannot write {x!r} as an exact number")


def parse_num(s):
    if isinstance(s, bool):
        raise InvalidInput("booleans are not numbers")
    if isinstance(s, int):
        return s
    if isinstance(s, str):
        try:
            r = Fraction(s.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"not an exact number: {s!r}")
        return r.numerator if r.denominator == 1 else r
    raise InvalidInput(f"not an exact number: {s!r}")


def parse_int(s):
    v = parse_num(s)
    if not isinstance(v, int):
        raise InvalidInput(f"expected an integer, got {s!r}")
    return v


def vec(v):
    return [num(x) for x in v]


def mat(m):
    return [vec(r) for r in m]


def parse_vec(v):
    if not isinstance(v, list):
        raise InvalidInput("expected a list")
    return tuple(parse_num(x) for x in v)


def parse_int_vec(v):
    if not isinstance(v, list):
        raise InvalidInput("expected a list")
    return tuple(parse_int(x) for x in v)


def parse_int_mat(m):
    if not isinstance(m, list) or not m:
        raise InvalidInput("expected a nonempty matrix")
    rows = [parse_int_vec(r) for r in m]
    if len({len(r) for r in rows}) != 1:
        raise InvalidInput("ragged matrix")
    return rows


# --- algebraic numbers ------------------------------------------------------------

_CANON = {}


def canonical_interval(a):
    """The isolating interval produced by a fresh root isolation of the minimal
    polynomial, so that output does not depend on earlier refinement."""
    if a.is_rational:
        return a.interval
    key = a.key()
    if key not in _CANON:
        from .exact import polys as P
        _CANON[key] = P.real_roots(a.min_poly)[a.root_index()]
    return _CANON[key]


def algebraic_to_json(a):
    if a is None:
        return None
    lo, hi = canonical_interval(a)
    return {"min_poly": vec(a.min_poly), "interval": [num(lo), num(hi)]}


def algebraic_from_json(d):
    try:
        poly = parse_vec(d["min_poly"])
        lo, hi = (parse_num(x) for x in d["interval"])
    except (KeyError, TypeError, ValueError):
        raise InvalidInput("algebraic number needs min_poly and a two-element interval")
    try:
        return AlgebraicReal.from_polynomial(poly, lo, hi)
    except ValueError as e:
        raise InvalidInput(str(e))


def elem_to_json(x):
    """A field element as its power-basis coefficients; rationals as one string."""
    if isinstance(x, NumberFieldElem):
        if x.is_rational():
            return num(x.as_fraction())
        return vec(x.coeffs)
    return num(Fraction(x) if not isinstance(x, int) else x)


def elem_from_json(d, field):
    if isinstance(d, list):
        if field is None:
            raise InvalidInput("field coefficients given without theta")
        return NumberFieldElem(field, parse_vec(d))
    return parse_num(d)


def elems_to_json(v):
    return [elem_to_json(x) for x in v]


# --- cones -----------------------------------------------------------------------

def _source_json(src):
    kind = src.get("kind")
    if kind == "eigen" and isinstance(src.get("rays"), list):
        return {"kind": "eigen", "matrix": mat(src["matrix"]),
                "rays": [{"index": num(r["index"]), "sign": num(r["sign"])} for r in src["rays"]]}
    if kind == "rational":
        return {"kind": "rational", "generators": mat(src["generators"])}
    if kind == "transformed":
        base = _source_json(src["base"])
        if base is not None:
            return {"kind": "transformed", "matrix": mat(src["matrix"]), "base": base}
    return None


def cone_to_json(c):
    out = _source_json(c.source or {})
    if out is not None:
        return out
    theta = next((r.field for r in c.rays if r.field is not None), None)
    out = {"kind": "algebraic", "theta": algebraic_to_json(theta),
           "generators": [elems_to_json(r.coords) for r in c.rays]}
    if c.matrix is not None:
        out["matrix"] = mat(c.matrix)
    return out


def cone_from_json(d):
    from .cone import cone_from_generators, cone_from_matrix, rational_cone
    if not isinstance(d, dict) or "kind" not in d:
        raise InvalidInput("cone spec must be an object with a kind")
    kind = d["kind"]
    try:
        if kind == "eigen":
            rays = d.get("rays")
            if rays is not None:
                rays = [{"index": parse_int(r["index"]), "sign": parse_int(r.get("sign", 1))}
                        if isinstance(r, dict) else parse_int(r) for r in rays]
            return cone_from_matrix(parse_int_mat(d["matrix"]), rays=rays)
        if kind == "rational":
            return rational_cone(parse_int_mat(d["generators"]))
        if kind == "algebraic":
            theta = algebraic_from_json(d["theta"]) if d.get("theta") is not None else None
            gens = [[elem_from_json(x, theta) for x in g] for g in d["generators"]]
            c = cone_from_generators(gens, field=theta)
            if "matrix" in d:
                c.matrix = tuple(parse_int_mat(d["matrix"]))
            return c
        if kind == "transformed":
            return cone_from_json(d["base"]).transformed(parse_int_mat(d["matrix"]))
    except KeyError as e:
        raise InvalidInput(f"cone spec is missing {e}")
    raise InvalidInput(f"unknown cone kind {kind!r}")


# --- patches ---------------------------------------------------------------------

def patch_to_json(p):
    return {
        "cone": cone_to_json(p.cone),
        "height": num(p.height),
        "vertices": [vec(v) for v in p.vertices],
        "edges": [[num(a), num(b)] for a, b in p.edges],
        "faces": [{"vertices": vec(f.vertices), "normal": vec(f.normal), "level": num(f.level),
                   "certified": bool(f.certified), "translates": vec(f.translates)} for f in p.faces],
        "complete": [bool(x) for x in p.vertex_complete],
        "operator": None if p.operator is None else mat(p.operator),
        "translate_range": None if p.translate_range is None else vec(p.translate_range),
        "point_count": num(p.point_count),
    }


def patch_from_json(d):
    from .sail import PatchFace, SailPatch
    try:
        cone = cone_from_json(d["cone"])
        faces = [PatchFace(parse_int_vec(f["vertices"]), parse_int_vec(f["normal"]), parse_num(f["level"]),
                           bool(f["certified"]), parse_int_vec(f.get("translates", [])))
                 for f in d["faces"]]
        p = SailPatch(cone, Fraction(parse_num(d["height"])), [parse_int_vec(v) for v in d["vertices"]],
                      [parse_int_vec(e) for e in d["edges"]], faces, [bool(x) for x in d["complete"]],
                      None if d.get("operator") is None else tuple(tuple(r) for r in parse_int_mat(d["operator"])),
                      None if d.get("translate_range") is None else parse_int_vec(d["translate_range"]),
                      parse_int(d.get("point_count", 0)))
    except (KeyError, TypeError) as e:
        raise InvalidInput(f"malformed patch: {e}")
    nv = len(p.vertices)
    if len(p.vertex_complete) != nv or any(not 0 <= i < nv for f in faces for i in f.vertices):
        raise InvalidInput("patch indices out of range")
    return p


# --- maps and colourings -----------------------------------------------------------

def _flag_json(v):
    if isinstance(v, bool) or v is None:
        return v
    return num(v) if isinstance(v, (int, Fraction)) else str(v)


def map_to_json(m):
    return {"linear": mat(m.linear), "translation": vec(m.translation),
            "flags": {k: _flag_json(v) for k, v in sorted(m.flags.items())}}


def map_from_json(d):
    from .stars import AffineMap
    return AffineMap(parse_int_mat(d["linear"]), parse_int_vec(d["translation"]))


def colouring_to_json(col):
    return col.to_json()


# --- files --------------------------------------------------------------------------

def dumps(obj):
    """Canonical text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


def write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".sailkit-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def digest(path):
    with open(path, "rb") as f:
        return hashlib.sha256(f.read()).hexdigest()
