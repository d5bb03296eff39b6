"""Exact convex hulls of integer point sets in the plane and in space.

Hull facets are returned as ``HullFace`` records: inward primitive normal
``u``, level ``c`` (the hull lies in ``<u, x> >= c``) and the face polygon.
Coplanar triangles are merged, so faces may have any number of vertices.
"""

import math
import random
from dataclasses import dataclass

from .errors import InvalidInput


@dataclass(frozen=True)
class HullFace:
    normal: tuple      # inward, primitive
    level: int
    vertices: tuple    # polygon in ccw order seen from outside (3D), or segment endpoints (2D)


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _prim(v):
    g = math.gcd(*v)
    return tuple(x // g for x in v)


def cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull2d(points):
    """Strictly convex hull in counter-clockwise order (collinear points dropped)."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross2(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross2(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def faces2d(points):
    poly = hull2d(points)
    if len(poly) < 3:
        raise InvalidInput("planar point set is degenerate (collinear)")
    out = []
    for i, a in enumerate(poly):
        b = poly[(i + 1) % len(poly)]
        d = _sub(b, a)
        u = _prim((-d[1], d[0]))  # left of a ccw edge is the interior
        out.append(HullFace(u, _dot(u, a), (a, b)))
    return out


class _Hull3:
    """Incremental hull with conflict lists; strict visibility, integer arithmetic."""

    def __init__(self, pts):
        self.p = pts
        self.faces = {}      # id -> (a, b, c, normal, offset)
        self.edge = {}       # directed edge (a, b) -> face id
        self.fconf = {}      # face id -> set of point ids
        self.pconf = {}      # point id -> set of face ids
        self.next_id = 0

    def _add_face(self, a, b, c):
        P = self.p
        nrm = _cross(_sub(P[b], P[a]), _sub(P[c], P[a]))
        f = self.next_id
        self.next_id += 1
        self.faces[f] = (a, b, c, nrm, _dot(nrm, P[a]))
        for e in ((a, b), (b, c), (c, a)):
            self.edge[e] = f
        self.fconf[f] = set()
        return f

    def visible(self, f, q):
        a, b, c, nrm, off = self.faces[f]
        return _dot(nrm, self.p[q]) > off

    def build(self, order):
        P = self.p
        i0 = order[0]
        i1 = next((i for i in order if P[i] != P[i0]), None)
        if i1 is None:
            raise InvalidInput("point set is degenerate")
        d01 = _sub(P[i1], P[i0])
        i2 = next((i for i in order if any(_cross(d01, _sub(P[i], P[i0])))), None)
        if i2 is None:
            raise InvalidInput("point set is degenerate (collinear)")
        nrm = _cross(d01, _sub(P[i2], P[i0]))
        i3 = next((i for i in order if _dot(nrm, _sub(P[i], P[i0])) != 0), None)
        if i3 is None:
            raise InvalidInput("point set is degenerate (coplanar)")
        if _dot(nrm, _sub(P[i3], P[i0])) > 0:
            i1, i2 = i2, i1
        init = [(i0, i1, i2), (i0, i3, i1), (i1, i3, i2), (i2, i3, i0)]
        for t in init:
            self._add_face(*t)
        used = {i0, i1, i2, i3}
        rest = [i for i in order if i not in used]
        for q in rest:
            self.pconf[q] = set()
            for f in self.faces:
                if self.visible(f, q):
                    self.fconf[f].add(q)
                    self.pconf[q].add(f)
        for q in rest:
            self._insert(q)

    def _insert(self, q):
        vis = self.pconf.pop(q, set())
        if not vis:
            return
        horizon = []
        for f in vis:
            a, b, c = self.faces[f][:3]
            for e in ((a, b), (b, c), (c, a)):
                g = self.edge.get((e[1], e[0]))
                if g not in vis:
                    horizon.append((e, g, f))
        cand_pts = {}
        for e, g, f in horizon:
            cand_pts[e] = self.fconf[f] | (self.fconf[g] if g is not None else set())
        for f in vis:
            a, b, c = self.faces[f][:3]
            for e in ((a, b), (b, c), (c, a)):
                if self.edge.get(e) == f:
                    del self.edge[e]
            for r in self.fconf[f]:
                if r in self.pconf:
                    self.pconf[r].discard(f)
            del self.fconf[f]
            del self.faces[f]
        for e, g, f in horizon:
            nf = self._add_face(e[0], e[1], q)
            for r in cand_pts[e]:
                if r != q and r in self.pconf and self.visible(nf, r):
                    self.fconf[nf].add(r)
                    self.pconf[r].add(nf)


def faces3d(points, seed=0):
    """Faces of the convex hull of integer points in space."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) < 4:
        raise InvalidInput("need at least 4 points for a spatial hull")
    order = list(range(len(pts)))
    random.Random(seed).shuffle(order)
    h = _Hull3(pts)
    h.build(order)
    groups = {}
    for a, b, c, nrm, off in h.faces.values():
        u = _prim(tuple(-x for x in nrm))
        lvl = _dot(u, pts[a])
        groups.setdefault((u, lvl), set()).update((a, b, c))
    out = []
    for (u, lvl), idx in groups.items():
        poly = _polygon(u, [pts[i] for i in idx])
        out.append(HullFace(u, lvl, poly))
    out.sort(key=lambda f: (f.vertices, f.normal))
    return out


def _polygon(u, verts):
    """Convex polygon of coplanar points, ccw seen along the outward normal -u."""
    # drop the coordinate where the normal is largest and hull in the projection
    k = max(range(3), key=lambda i: abs(u[i]))
    keep = [i for i in range(3) if i != k]
    proj = {(v[keep[0]], v[keep[1]]): v for v in verts}
    ring = [proj[p] for p in hull2d(proj.keys())]
    if len(ring) >= 3:
        out = tuple(-x for x in u)
        d = _dot(_cross(_sub(ring[1], ring[0]), _sub(ring[2], ring[1])), out)
        if d < 0:
            ring.reverse()
    # canonical rotation: start at the lexicographically smallest vertex
    i = ring.index(min(ring))
    return tuple(ring[i:] + ring[:i])


def hull_faces(points, seed=0):
    pts = list(points)
    if not pts:
        raise InvalidInput("empty point set")
    n = len(pts[0])
    if n == 2:
        return faces2d(pts)
    if n == 3:
        return faces3d(pts, seed)
    raise InvalidInput("hulls are supported in dimensions 2 and 3")


def brute_force_vertices(points):
    """Oracle: a point is a hull vertex iff some facet-defining test fails to
    express it as a non-extreme point. Uses the hull of all points but no
    incremental structure (all-triples facet enumeration, small inputs only)."""
    from itertools import combinations
    pts = sorted(set(tuple(p) for p in points))
    n = len(pts[0])
    verts = set()
    if n == 2:
        for a, b in combinations(pts, 2):
            d = _sub(b, a)
            u = (-d[1], d[0])
            vals = [_dot(u, _sub(p, a)) for p in pts]
            if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
                line = [p for p, v in zip(pts, vals) if v == 0]
                line.sort()
                verts.update((line[0], line[-1]))
        return sorted(verts)
    for a, b, c in combinations(pts, 3):
        nrm = _cross(_sub(b, a), _sub(c, a))
        if not any(nrm):
            continue
        vals = [_dot(nrm, _sub(p, a)) for p in pts]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            plane = [p for p, v in zip(pts, vals) if v == 0]
            u = _prim(nrm)
            k = max(range(3), key=lambda i: abs(u[i]))
            keep = [i for i in range(3) if i != k]
            proj = {(p[keep[0]], p[keep[1]]): p for p in plane}
            verts.update(proj[q] for q in hull2d(proj.keys()))
    return sorted(verts)
