"""Two-sided diagnostics for sails: norm-form minima against determinant
boundedness, the face-vertex graph of a spatial sail with its colouring, and
a bounded search for periodically coloured chains in that graph."""

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .cone import SHIFT, FieldVec
from .errors import DependentForms, EmptyPatch, WrongDimension
from .exact import intmat
from .exact import polys as P
from .exact.algebraic import sign_of
from .lattice import det_edge_star, det_face
from .stars import configuration, edge_star, equivalences

UNKNOWN = "Unknown"
NOT_FOUND = {"found": False}


# --- norm forms ------------------------------------------------------------------

def _as_forms(forms):
    return [f if isinstance(f, FieldVec) else FieldVec(f) for f in forms]


def _mult_matrix(c, f):
    """Integer-scaled matrix of multiplication by c on the power basis of Q[t]/f,
    with the common denominator."""
    d = P.degree(f)
    cols = []
    for k in range(d):
        r = P.rem(P.mul(tuple(c.coeffs), (0,) * k + (1,)), f) if any(c.coeffs) else ()
        cols.append([Fraction(r[i]) if i < len(r) else Fraction(0) for i in range(d)])
    den = 1
    for col in cols:
        for x in col:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return [[int(cols[j][i] * den) for j in range(d)] for i in range(d)], den


def _norm_groups(forms):
    """Split the forms into complete conjugate sets and the rest.

    A conjugate set is d forms whose coordinates share coefficient vectors in
    the d distinct roots of one degree-d polynomial; its product is the field
    norm, a rational number computed as a determinant.
    """
    buckets = {}
    rest = []
    for i, L in enumerate(forms):
        if L.field is None:
            rest.append(i)
            continue
        key = (L.field.min_poly, tuple(tuple(c.coeffs) for c in L.coords))
        buckets.setdefault(key, []).append(i)
    groups = []
    for (f, coeffs), idx in buckets.items():
        roots = {forms[i].field.root_index() for i in idx}
        if len(idx) == P.degree(f) and len(roots) == len(idx):
            mats = [_mult_matrix(c, P.primitive(f)) for c in forms[idx[0]].coords]
            groups.append((idx, mats))
        else:
            rest.extend(idx)
    return groups, sorted(rest)


class _ExactProduct:
    def __init__(self, forms):
        self.forms = forms
        self.groups, self.rest = _norm_groups(forms)

    def __call__(self, x):
        val = Fraction(1)
        for _, mats in self.groups:
            den = 1
            for _, dj in mats:
                den = den * dj // math.gcd(den, dj)
            d = len(mats[0][0])
            M = [[sum(m[i][j] * (den // dj) * xj for (m, dj), xj in zip(mats, x)) for j in range(d)]
                 for i in range(d)]
            val *= Fraction(intmat.det(M), den ** d)
        val = abs(val)
        for i in self.rest:
            v = self.forms[i].dot(x)
            if sign_of(v) < 0:
                v = -v
            val = v * val
        return val


def norm_form_min(forms, R):
    """Minimum of |L_1(x) ... L_n(x)| over nonzero integer x with |x|_inf <= R.

    Returns ``(value, witness)``; ``value`` is an exact expression (0 if some
    form vanishes). Integer enclosures of every form discard most points; the
    survivors are compared exactly, ties broken by the lexicographic witness.
    """
    forms = _as_forms(forms)
    n = len(forms)
    if sign_of(intmat.det_any([list(L.coords) for L in forms])) == 0:
        raise DependentForms("the forms are linearly dependent")
    R = int(R)
    axis = np.arange(-R, R + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), -1).reshape(-1, n)
    grid = grid[np.any(grid != 0, axis=1)]
    lo_abs = np.ones(len(grid))
    hi_abs = np.ones(len(grid))
    for L in forms:
        lo_c = np.array(L.lo, dtype=np.int64)
        hi_c = np.array(L.hi, dtype=np.int64)
        pos = grid >= 0
        lo = np.where(pos, grid * lo_c, grid * hi_c).sum(1)
        hi = np.where(pos, grid * hi_c, grid * lo_c).sum(1)
        straddle = (lo <= 0) & (hi >= 0)
        a = np.where(straddle, 0.0, np.minimum(np.abs(lo), np.abs(hi)).astype(float)) / 2.0**SHIFT
        b = np.maximum(np.abs(lo), np.abs(hi)).astype(float) / 2.0**SHIFT
        lo_abs *= a
        hi_abs *= b
    lo_abs *= 1 - 1e-9
    hi_abs *= 1 + 1e-9
    best_hi = hi_abs.min()
    cand = [tuple(int(t) for t in grid[i]) for i in np.nonzero(lo_abs <= best_hi)[0]]
    prod = _ExactProduct(forms)
    best, arg = None, None
    for x in sorted(cand):
        v = prod(x)
        if best is None or _less(v, best):
            best, arg = v, x
            if sign_of(v) == 0:
                break
    return best, arg


def _less(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a < b
    return sign_of(a - b) < 0


def irrationality_report(forms, R=None):
    """Cone irrationality of the forms' kernels and, with R, whether some form
    vanishes on a nonzero integer point of the box."""
    from .cone import facet_lattice_rank
    forms = _as_forms(forms)
    out = {"irrational_cone": all(facet_lattice_rank(L) == len(L) for L in forms)}
    if R is not None:
        hit = None
        for x in product(range(-R, R + 1), repeat=len(forms)):
            if any(x) and any(L.sign_dot(x) == 0 for L in forms):
                hit = x
                break
        out["no_form_vanishes"] = hit is None
        out["vanishing_witness"] = hit
    return out


# --- determinant profiles --------------------------------------------------------

def _profile(patch, faces, verts):
    fd = [det_face(patch.face_record(fi)) for fi in faces]
    sd = [det_edge_star(edge_star(patch, vi)) for vi in verts]
    return {"max_det_face": max(fd) if fd else None, "max_det_star": max(sd) if sd else None,
            "face_hist": dict(sorted(Counter(fd).items())), "star_hist": dict(sorted(Counter(sd).items())),
            "faces": len(fd), "vertices": len(sd)}


def determinant_profile(patch):
    """Exact maxima and histograms of face and edge-star determinants.

    On invariant patches there is also one profile per translate j: faces
    certified through j, and vertices all of whose faces are among them.
    """
    cert = patch.certified_faces()
    if not cert:
        raise EmptyPatch("patch has no certified faces")
    out = _profile(patch, cert, patch.complete_vertices())
    if patch.translate_range is not None:
        per = {}
        lo, hi = patch.translate_range
        for j in range(lo, hi + 1):
            fj = [fi for fi in cert if j in patch.faces[fi].translates]
            fs = set(fj)
            vj = [vi for vi in patch.complete_vertices() if set(patch.faces_at(vi)) <= fs]
            per[j] = _profile(patch, fj, vj)
        out["per_translate"] = per
    return out


# --- the face-vertex graph --------------------------------------------------------

@dataclass
class FaceVertexGraph:
    """Nodes (face index, vertex index); (F, v) is joined to (F, next) and
    (F, previous) along the ccw boundary of F, and to (G, next) where G is the
    other face on the edge from v to its ccw successor in F."""

    nodes: list
    adjacency: dict
    boundary: set = field(default_factory=set)
    node_colour: dict = field(default_factory=dict)
    edge_colour: dict = field(default_factory=dict)

    def degree(self, node):
        return len(self.adjacency[node])

    def edges(self):
        return sorted({tuple(sorted((a, b))) for a in self.adjacency for b in self.adjacency[a]})


def _succ_pred(face, v):
    vs = face.vertices
    i = vs.index(v)
    return vs[(i + 1) % len(vs)], vs[(i - 1) % len(vs)]


def build_face_vertex_graph(patch):
    if patch.n != 3:
        raise WrongDimension("the face-vertex graph is defined for spatial sails")
    cert = patch.certified_faces()
    if not cert:
        raise EmptyPatch("patch has no certified faces")
    edge_faces = {}
    for fi in cert:
        vs = patch.faces[fi].vertices
        for k in range(len(vs)):
            edge_faces.setdefault(frozenset((vs[k], vs[(k + 1) % len(vs)])), []).append(fi)
    nodes = sorted((fi, v) for fi in cert for v in patch.faces[fi].vertices)
    adj = {nd: set() for nd in nodes}
    boundary = set()
    for fi, v in nodes:
        s, p = _succ_pred(patch.faces[fi], v)
        adj[(fi, v)].update({(fi, s), (fi, p)})
        other = [g for g in edge_faces[frozenset((v, s))] if g != fi]
        if other:
            adj[(fi, v)].add((other[0], s))
            adj[(other[0], s)].add((fi, v))
        else:
            boundary.add((fi, v))
    g = FaceVertexGraph(nodes, {k: sorted(x) for k, x in adj.items()}, boundary)
    for nd in nodes:
        if nd not in boundary and g.degree(nd) != 3:
            raise AssertionError(f"interior node {nd} has degree {g.degree(nd)}")
    return g


def _faces_around(patch, verts):
    """Cells of all faces incident to the given vertex indices, or None if some
    vertex is not complete."""
    cells = set()
    for vi in verts:
        if not patch.vertex_complete[vi]:
            return None
        for fi in patch.faces_at(vi):
            cells.add(frozenset(patch.vertices[i] for i in patch.faces[fi].vertices))
    return configuration(cells)


def _assign(items, group):
    """Colour ids by first occurrence over (key, configuration) pairs."""
    palette, out = [], {}
    for key, S in items:
        if S is None:
            out[key] = UNKNOWN
            continue
        for cid, R in enumerate(palette):
            if next(iter(equivalences(R, S, group, limit=1)), None) is not None:
                out[key] = cid
                break
        else:
            out[key] = len(palette)
            palette.append(S)
    return out


def _node_sort_key(patch, nd):
    fi, v = nd
    return (tuple(sorted(patch.vertices[i] for i in patch.faces[fi].vertices)), patch.vertices[v])


def vertex_edge_colouring(g, patch, group="aff_pm"):
    """Colour nodes by the faces around {a, v, b} (a, b the neighbours of v in F)
    and edges by the faces around the four vertices a1, v1, v2, a2."""
    node_items = []
    for nd in sorted(g.nodes, key=lambda x: _node_sort_key(patch, x)):
        fi, v = nd
        s, p = _succ_pred(patch.faces[fi], v)
        node_items.append((nd, _faces_around(patch, (p, v, s))))
    g.node_colour = _assign(node_items, group)
    edge_items = []
    for e in sorted(g.edges(), key=lambda e: (_node_sort_key(patch, e[0]), _node_sort_key(patch, e[1]))):
        (f1, v1), (f2, v2) = e
        a1 = [x for x in _succ_pred(patch.faces[f1], v1) if x != v2]
        a2 = [x for x in _succ_pred(patch.faces[f2], v2) if x != v1]
        verts = {v1, v2} | set(a1[:1]) | set(a2[:1])
        edge_items.append((e, _faces_around(patch, sorted(verts))))
    g.edge_colour = _assign(edge_items, group)
    return g


def _ekey(a, b):
    return (a, b) if a <= b else (b, a)


def periodic_chain_probe(g, max_len, repeats=3, budget=200000, spread=True):
    """Bounded search for a path of nodes whose node and edge colours repeat
    with some period p at least ``repeats`` times. Not finding one proves nothing.

    With ``spread`` the node one period ahead must sit at a different sail
    vertex, which rules out chains circling a single vertex.
    """
    nc, ec = g.node_colour, g.edge_colour
    known = [nd for nd in g.nodes if nc.get(nd, UNKNOWN) != UNKNOWN]
    steps = 0
    for p in range(1, max_len // repeats + 1):
        target = repeats * p + 1
        if target > max_len:
            break
        for start in known:
            stack = [[start]]
            while stack:
                path = stack.pop()
                steps += 1
                if steps > budget:
                    return dict(NOT_FOUND, reason="budget exhausted")
                if len(path) == target:
                    return {"found": True, "period": p, "chain": path,
                            "node_colours": [nc[x] for x in path],
                            "edge_colours": [ec.get(_ekey(a, b), UNKNOWN) for a, b in zip(path, path[1:])]}
                i = len(path)
                for nxt in reversed(g.adjacency[path[-1]]):
                    if nxt in path or nc.get(nxt, UNKNOWN) == UNKNOWN:
                        continue
                    e = ec.get(_ekey(path[-1], nxt), UNKNOWN)
                    if e == UNKNOWN:
                        continue
                    if i >= p and nc[nxt] != nc[path[i - p]]:
                        continue
                    if spread and i >= p and nxt[1] == path[i - p][1]:
                        continue
                    if i - 1 >= p and e != ec.get(_ekey(path[i - 1 - p], path[i - p])):
                        continue
                    stack.append(path + [nxt])
    return dict(NOT_FOUND)
