"""Sail patches: exact hulls of cone points with certified faces."""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cone import SHIFT, FieldVec, enumerate_cone_points
from .errors import EmptyPatch, InvalidInput, NotInvariant
from .exact import intmat
from .exact.algebraic import NumberFieldElem, sign_of
from .hull import hull_faces
from .lattice import FaceRecord


@dataclass
class PatchFace:
    vertices: tuple          # vertex indices; cyclic ccw order seen from outside in 3D
    normal: tuple            # inward primitive normal u
    level: int               # the hull lies in <u, x> >= level
    certified: bool
    translates: tuple = ()   # certifying translate indices (invariant patches)


@dataclass(eq=False)
class SailPatch:
    cone: object
    height: Fraction
    vertices: list
    edges: list
    faces: list
    vertex_complete: list
    operator: tuple = None
    translate_range: tuple = None
    point_count: int = 0
    _index: dict = field(default=None, repr=False)
    _incident: list = field(default=None, repr=False)

    @property
    def n(self):
        return len(self.vertices[0]) if self.vertices else self.cone.n

    @property
    def certified(self):
        return [f.certified for f in self.faces]

    def index_of(self, v):
        if self._index is None:
            self._index = {p: i for i, p in enumerate(self.vertices)}
        return self._index.get(tuple(v))

    def faces_at(self, vi):
        """Indices of all hull faces containing vertex ``vi``."""
        if self._incident is None:
            inc = [[] for _ in self.vertices]
            for fi, f in enumerate(self.faces):
                for x in f.vertices:
                    inc[x].append(fi)
            self._incident = inc
        return self._incident[vi]

    def certified_faces(self):
        return [i for i, f in enumerate(self.faces) if f.certified]

    def complete_vertices(self):
        return [i for i, ok in enumerate(self.vertex_complete) if ok]

    def neighbours(self, vi):
        out = set()
        for a, b in self.edges:
            if a == vi:
                out.add(b)
            elif b == vi:
                out.add(a)
        return sorted(out)

    def face_record(self, fi):
        f = self.faces[fi]
        return FaceRecord(tuple(self.vertices[i] for i in f.vertices))

    def certified_vertex_set(self):
        s = set()
        for f in self.faces:
            if f.certified:
                s.update(self.vertices[i] for i in f.vertices)
        return s

    def canonical(self):
        """Coordinate-level description independent of internal numbering."""
        faces = sorted((tuple(sorted(self.vertices[i] for i in f.vertices)), f.normal, f.level, f.certified)
                       for f in self.faces)
        edges = sorted(tuple(sorted((self.vertices[a], self.vertices[b]))) for a, b in self.edges)
        complete = sorted(v for v, ok in zip(self.vertices, self.vertex_complete) if ok)
        return {"vertices": sorted(self.vertices), "faces": faces, "edges": edges, "complete": complete}


# --- domination prefilter ---------------------------------------------------

def _form_bounds(c, pts):
    return [[L.dot_bounds(x) for L in c.forms] for x in pts]


def _dominates(c, p, x):
    """Exact test x - p in the cone (then x is not a sail vertex)."""
    d = tuple(a - b for a, b in zip(x, p))
    return all(L.sign_dot(d) >= 0 for L in c.forms)


def minimal_points(c, pts):
    """Points x of ``pts`` such that no other p in ``pts`` has x - p in the cone.

    Dominated points are never vertices of the Klein polyhedron, since any
    x = p + q with q a nonzero cone point is the midpoint of p and p + 2q.
    Interval bounds on the form values decide most comparisons; the rest
    are decided exactly.
    """
    pts = list(pts)
    if not pts:
        return []
    B = _form_bounds(c, pts)
    n = c.n
    big = max(max(abs(a), abs(b)) for row in B for a, b in row)
    dtype = np.int64 if big < 2**61 else object
    lo = np.array([[b[0] for b in row] for row in B], dtype=dtype)
    hi = np.array([[b[1] for b in row] for row in B], dtype=dtype)
    order = sorted(range(len(pts)), key=lambda i: (sum(B[i][k][0] for k in range(n)), pts[i]))
    kept = []

    def dominated_by_kept(i, among):
        if not among:
            return False
        idx = np.array(among)
        certain = np.all(hi[idx] <= lo[i], axis=1)
        if certain.any():
            return True
        possible = np.all(lo[idx] <= hi[i], axis=1)
        for j in idx[possible]:
            if _dominates(c, pts[j], pts[i]):
                return True
        return False

    # points certainly dominated by an already kept point are dropped a chunk
    # at a time; the few survivors are examined one by one
    chunk = 2048
    for s in range(0, len(order), chunk):
        block = np.array(order[s:s + chunk])
        if kept and dtype is np.int64:
            K = np.array(kept)
            gone = np.any(np.all(hi[K][None, :, :] <= lo[block][:, None, :], axis=2), axis=1)
            block = block[~gone]
        for i in block.tolist():
            if not dominated_by_kept(i, kept):
                kept.append(i)
    final = [i for i in kept if not dominated_by_kept(i, [j for j in kept if j != i])]
    return sorted(pts[i] for i in final)


# --- certification -----------------------------------------------------------

def _ray_pairing(c, u):
    return [r.dot(u) for r in c.rays]


def certify_face(c, u, level, H, scales=None):
    """Exact margin test for a hull facet <u, x> >= level.

    True iff level > 0, <u, omega_i> > 0 for all i, and
    H * <u, omega_i> >= level * t_i with default t_i = <h, omega_i> = 1.
    Then every cone point of height above H lies strictly inside the facet's
    halfspace.
    """
    if level <= 0:
        return False
    for i, r in enumerate(c.rays):
        if r.sign_dot(u) <= 0:
            return False
    H = Fraction(H)
    for i, r in enumerate(c.rays):
        s = r.dot(u)
        t = 1 if scales is None else scales[i]
        diff = s * H - t * level
        if sign_of(diff) < 0:
            return False
    return True


def _build(c, H, points, certify, operator=None, translate_range=None, point_count=0):
    n = c.n
    hf = hull_faces(points)
    verts = sorted({v for f in hf for v in f.vertices})
    index = {v: i for i, v in enumerate(verts)}
    faces = []
    for f in hf:
        ok, tr = certify(f)
        faces.append(PatchFace(tuple(index[v] for v in f.vertices), f.normal, f.level, ok, tr))
    edges = set()
    for f in faces:
        if not f.certified:
            continue
        vs = f.vertices
        if n == 2:
            edges.add(tuple(sorted(vs)))
        else:
            for k in range(len(vs)):
                edges.add(tuple(sorted((vs[k], vs[(k + 1) % len(vs)]))))
    incident = [[] for _ in verts]
    for fi, f in enumerate(faces):
        for x in f.vertices:
            incident[x].append(fi)
    complete = [bool(inc) and all(faces[fi].certified for fi in inc) for inc in incident]
    # only vertices on certified faces can be complete; keep them ordered
    return SailPatch(c, Fraction(H), verts, sorted(edges), faces, complete, operator,
                     translate_range, point_count)


def sail_patch(c, H, prune=True):
    """Exact hull of the cone's lattice points up to height H, with certified faces.

    With ``prune`` the hull is taken over the non-dominated points only; this
    leaves every certified face unchanged but may alter uncertified ones.
    """
    pts = enumerate_cone_points(c, H)
    if not pts:
        raise EmptyPatch(f"no lattice points up to height {H}")
    hp = minimal_points(c, pts) if prune else pts
    if len(hp) < c.n + 1 and c.n > 1:
        hp = pts
    cert = lambda f: (certify_face(c, f.normal, f.level, H), ())
    try:
        return _build(c, H, hp, cert, point_count=len(pts))
    except InvalidInput as e:
        if len(hp) == len(pts):
            raise EmptyPatch(f"hull of the enumerated points is degenerate: {e}")
    # the minimal points can be flat (a rational sail with a single face)
    try:
        return _build(c, H, pts, cert, point_count=len(pts))
    except InvalidInput as e:
        raise EmptyPatch(f"hull of the enumerated points is degenerate: {e}")


# --- operator action ---------------------------------------------------------

def _apply(A, r):
    """A * omega for a FieldVec ray, as a FieldVec in the same field."""
    n = len(r.coords)
    coords = []
    for i in range(n):
        acc = 0
        for j in range(n):
            if A[i][j]:
                acc = r.coords[j] * A[i][j] + acc
        coords.append(acc)
    return FieldVec(coords, r.field)


def _parallel_positive(y, w):
    """For y, w in R^n with exact coordinates: y = t w with t > 0 ?"""
    n = len(y.coords)
    k = next((i for i in range(n) if sign_of(w.coords[i]) != 0), None)
    if k is None:
        return False
    for i in range(n):
        d = y.coords[i] * w.coords[k] - y.coords[k] * w.coords[i]
        if sign_of(d) != 0:
            return False
    return sign_of(y.coords[k]) * sign_of(w.coords[k]) > 0


def ray_action(A, c):
    """For each ray i, the index m with A omega_i = t omega_m (t > 0), or None."""
    out = []
    for r in c.rays:
        y = _apply(A, r)
        m = next((j for j, w in enumerate(c.rays) if _parallel_positive(y, w)), None)
        out.append(m)
    return out


def _height_scale(c, A_pow, i):
    """h(A^j omega_i) as an exact value, given the integer matrix A^j."""
    y = _apply(A_pow, c.rays[i])
    total = 0
    for L in c.forms:
        v = 0
        for a, b in zip(L.coords, y.coords):
            v = a * b + v
        total = v + total
    return total


def _translate_points(A, pts, jrange):
    out = set()
    for j in jrange:
        M = intmat.matpow(A, j)
        out.update(intmat.matvec(M, p) for p in pts)
    return out


def invariant_sail_patch(A, c, k, base_height=None, prune=True):
    """Sail patch built from A-translates of a base patch.

    Points are the non-dominated lattice points of the base region
    ``h <= H0`` mapped by A^j for j in [-1, k+1]. A hull face is certified
    when its cap ``{x in C : <u, x> <= level}`` lies in a single translate
    region A^j(base) with j in [-1, k]; then A maps every certified face onto
    a (hull) face of the patch. With k = 0 only the base region is used.
    """
    A = intmat.as_matrix(A)
    act = ray_action(A, c)
    if any(m is None for m in act) or sorted(act) != list(range(c.n)):
        raise NotInvariant("operator does not permute the cone rays")
    if intmat.det(A) not in (1, -1):
        raise NotInvariant("operator is not unimodular")
    H0 = Fraction(base_height) if base_height is not None else default_base_height(A, c)
    base = enumerate_cone_points(c, H0)
    if not base:
        raise EmptyPatch("empty base region")
    mbase = minimal_points(c, base) if prune else base
    if k <= 0:
        jpts, jcert = [0], [0]
    else:
        jpts, jcert = list(range(-1, k + 2)), list(range(-1, k + 1))
    pts = _translate_points(A, mbase, jpts)
    hp = minimal_points(c, pts) if prune else sorted(pts)
    # scale data: t_i^(j) = h(A^{-j} omega_i)
    scales = {}
    for j in jcert:
        M = intmat.matpow(A, -j)
        scales[j] = [_height_scale(c, M, i) for i in range(c.n)]

    def certify(f):
        ok = [j for j in jcert if certify_face(c, f.normal, f.level, H0, scales[j])]
        return bool(ok), tuple(ok)

    return _build(c, H0, hp, certify, operator=A, translate_range=(jcert[0], jcert[-1]),
                  point_count=len(pts))


def default_base_height(A, c):
    """A base height large enough for the translates of the base region to overlap."""
    # grow the base until A maps some certified vertex of sail_patch(H0) to a certified vertex
    H0 = Fraction(4)
    for _ in range(12):
        p = sail_patch(c, H0)
        cv = p.certified_vertex_set()
        if cv and any(tuple(intmat.matvec(A, v)) in cv for v in cv):
            return H0 * 2
        H0 *= 2
    return H0
