"""Executable checks of the auxiliary lemmas and of the distance bounds for
sail faces in terms of edge-star determinants."""

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .errors import (FaceNotIncident, IncompleteVertex, MalformedInstance, NotATriangulation,
                     NotContained, PreconditionViolated)
from .exact import intmat
from .hull import hull2d, hull_faces
from .lattice import FaceRecord, det_edge_star, integer_distance
from .stars import edge_star


# --- first lemma: a polynomial positivity statement -------------------------

def lemma1_bound(n, V, B):
    return Fraction(B) ** (n - 1) / n / (1 + 1 / Fraction(V))


def lemma1_f(n, A, B, x):
    return A * (B - x) ** (n - 1) * (1 - x) - x


def lemma1_positivity(n, V, A, B, xs):
    """f(x) = A (B - x)^(n-1) (1 - x) - x is positive at every sample x."""
    V, A, B = Fraction(V), Fraction(A), Fraction(B)
    if n < 1 or V <= 0 or A <= V / n or not 0 < B < 1:
        raise PreconditionViolated("need n >= 1, V > 0, A > V/n and 0 < B < 1")
    top = lemma1_bound(n, V, B)
    xs = [Fraction(x) for x in xs]
    for x in xs:
        if not 0 <= x <= top:
            raise PreconditionViolated(f"sample {x} outside [0, {top}]")
    return all(lemma1_f(n, A, B, x) > 0 for x in xs)


# --- second lemma: simplex volume comparison ---------------------------------

def lemma2_constant(n, V):
    """prod_k k^(n!/k!) (1 + 1/V)^((n-1)!/(k-1)!) as an exact rational."""
    V = Fraction(V)
    out = Fraction(1)
    for k in range(1, n + 1):
        out *= Fraction(k) ** (math.factorial(n) // math.factorial(k))
        out *= (1 + 1 / V) ** (math.factorial(n - 1) // math.factorial(k - 1))
    return out


@dataclass
class Lemma2Instance:
    """Simplex Delta = conv(v0, v1..vn), lattice point v inside it, lattice basis, constant V."""

    v0: tuple
    vs: tuple
    v: tuple
    V: Fraction
    basis: tuple = None

    def __post_init__(self):
        self.v0 = tuple(Fraction(x) for x in self.v0)
        self.vs = tuple(tuple(Fraction(x) for x in p) for p in self.vs)
        self.v = tuple(Fraction(x) for x in self.v)
        self.V = Fraction(self.V)
        n = len(self.v0)
        if len(self.vs) != n or any(len(p) != n for p in self.vs) or len(self.v) != n:
            raise MalformedInstance("need n points v1..vn in dimension n")
        if self.basis is None:
            self.basis = intmat.identity(n)


def _simplex_det(pts):
    p0 = pts[0]
    return intmat.det_any([tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]])


def _barycentric(pts, x):
    """Barycentric coordinates of x in the simplex pts (n+1 points in Q^n)."""
    n = len(x)
    M = [[pts[j][i] for j in range(n + 1)] for i in range(n)] + [[1] * (n + 1)]
    return intmat.solve_rational(M, list(x) + [1])


def _lattice_coords(basis, pts):
    inv = intmat.inverse_rational(basis)
    # columns of basis are the lattice vectors: x = B y  ->  y = B^-1 x
    return [tuple(sum(Fraction(inv[i][j]) * p[j] for j in range(len(p))) for i in range(len(p))) for p in pts]


def _face_ratio(face):
    """k-volume of a simplex over the determinant of the lattice in its affine hull,
    or None when that affine hull has no lattice point."""
    k = len(face) - 1
    n = len(face[0])
    p0 = face[0]
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in face[1:]]
    den = math.lcm(*(x.denominator for d in diffs for x in d))
    idiffs = [tuple(int(x * den) for x in d) for d in diffs]
    if k < n:
        # the integer kernel is a saturated basis N of the normals, so N x = N p0
        # has an integer solution iff N p0 is integral
        for h in intmat.integer_kernel(idiffs):
            if sum(a * b for a, b in zip(h, p0)).denominator != 1:
                return None
    basis = intmat.saturation(idiffs, n)
    coords = [_solve_in_basis(basis, d) for d in diffs]
    return abs(intmat.det_any(coords)) / math.factorial(k)


def _solve_in_basis(basis, d):
    """Coordinates of d in the independent vectors ``basis`` (d in their span)."""
    k = len(basis)
    a = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(d[i])] for i in range(len(d))]
    r = 0
    for c in range(k):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            raise MalformedInstance("dependent basis")
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return tuple(a[i][k] for i in range(k))


class _SimplexTest:
    """Strict point-in-simplex test with integer arithmetic after scaling."""

    def __init__(self, verts):
        d = len(verts[0])
        M = [[Fraction(verts[j][i]) for j in range(d + 1)] for i in range(d)] + [[Fraction(1)] * (d + 1)]
        inv = intmat.inverse_rational(M)         # lambda = inv (x, 1)
        den = 1
        for r in inv:
            for x in r:
                den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
        self.K = [[int(Fraction(x) * den) for x in r] for r in inv]

    def inside(self, X, D, closed=False):
        """Is X / D in the simplex (open unless ``closed``)?"""
        for row in self.K:
            s = sum(a * b for a, b in zip(row, X)) + row[-1] * D
            if s < 0 or (s == 0 and not closed):
                return False
        return True


def _points_in_simplex(pts):
    """All integer points of the closed simplex with rational vertices pts."""
    n = len(pts[0])
    lo = [math.floor(min(p[i] for p in pts)) for i in range(n)]
    hi = [math.ceil(max(p[i] for p in pts)) for i in range(n)]
    test = _SimplexTest(pts)
    return [x for x in product(*(range(a, b + 1) for a, b in zip(lo, hi))) if test.inside(x, 1, closed=True)]


def lemma2_check(inst):
    """Verify the hypotheses by brute force, then compare both volumes exactly."""
    n = len(inst.v0)
    if abs(intmat.det(inst.basis)) != 1:
        return {"hypotheses_ok": False, "reason": "lattice determinant is not 1",
                "inequality_ok": None, "lhs": None, "rhs": None}
    B = [[inst.basis[j][i] for j in range(n)] for i in range(n)]    # columns = basis vectors
    v0, v, *vs = _lattice_coords(B, [inst.v0, inst.v] + list(inst.vs))
    if any(x.denominator != 1 for x in v):
        raise MalformedInstance("v is not a lattice point")
    delta = [v0] + vs
    delta0 = [v] + vs
    vol = abs(_simplex_det(delta))
    vol0 = abs(_simplex_det(delta0))
    if vol == 0:
        raise MalformedInstance("Delta is degenerate")
    reasons = []
    lam = _barycentric(delta, v)
    if not all(t > 0 for t in lam):
        reasons.append("v is not interior to Delta")
    for k in range(1, n + 1):
        for face in combinations(delta0, k + 1):
            r = _face_ratio(list(face))
            if r is None:
                reasons.append(f"affine hull of a {k}-face has no lattice points")
            elif r < inst.V:
                reasons.append(f"a {k}-face has volume ratio {r} < V")
    t = 1 - vol0 / vol
    cut = [v0] + [tuple(a + t * (b - a) for a, b in zip(v0, p)) for p in vs]
    stray = [x for x in _points_in_simplex(cut) if tuple(Fraction(c) for c in x) not in (v, v0)]
    if stray:
        reasons.append(f"cut simplex holds lattice points {stray[:3]}")
    lhs = vol / math.factorial(n)
    rhs = vol0 / math.factorial(n) * lemma2_constant(n, inst.V)
    ok = not reasons
    return {"hypotheses_ok": ok, "reason": "; ".join(reasons), "inequality_ok": (lhs <= rhs) if ok else None,
            "lhs": lhs, "rhs": rhs}


def random_lemma2_instance(rng, n, L=None):
    """A unimodular image of a simplex with apex over a planted lattice point.

    In standard position v0 = 0, v = e_n and v_i = (w_i, L) with 0 interior to
    conv(w_i) and |w_i| < L, so the cut simplex meets the lattice in {0, v}.
    V is the smallest face ratio of Delta_0, scaled down at random.
    """
    L = L or rng.randint(2, 5)
    while True:
        if n == 1:
            ws = [()]
        else:
            ws = [tuple(rng.randint(-(L - 1), L - 1) for _ in range(n - 1)) for _ in range(n)]
        vs = [w + (L,) for w in ws]
        v0 = (0,) * n
        v = (0,) * (n - 1) + (1,)
        delta = [tuple(map(Fraction, p)) for p in [v0] + vs]
        if _simplex_det(delta) == 0:
            continue
        lam = _barycentric(delta, v)
        if all(x > 0 for x in lam):
            break
    U = intmat.random_unimodular(rng, n, bound=2) if n > 1 else ((1,),)
    s = tuple(rng.randint(-3, 3) for _ in range(n))

    def img(p):
        return tuple(a + b for a, b in zip(intmat.matvec(U, p), s))

    d0 = [tuple(map(Fraction, v))] + [tuple(map(Fraction, p)) for p in vs]
    ratios = [_face_ratio(list(f)) for k in range(1, n + 1) for f in combinations(d0, k + 1)]
    V = min(r for r in ratios if r is not None) * Fraction(rng.randint(1, 4), 4)
    return Lemma2Instance(img(v0), tuple(img(p) for p in vs), img(v), V)


# --- third lemma: covering by cones over boundary simplices ------------------

def _weighted_centre(pts, masses):
    tot = sum(masses)
    d = len(pts[0])
    return tuple(sum(m * p[i] for p, m in zip(pts, masses)) / tot for i in range(d))


def _check_triangulation(verts, simplices):
    """Each simplex spans a piece of one facet and, facet by facet, the pieces
    tile it (volumes add up, no two pieces overlap in their interiors)."""
    d = len(verts[0])
    vset = set(verts)
    for s in simplices:
        if len(s) != d or any(p not in vset for p in s):
            raise NotATriangulation("simplices must have d vertices from ext P")
    if d == 1:
        lo, hi = min(verts), max(verts)
        if sorted(simplices) != sorted([(lo,), (hi,)]):
            raise NotATriangulation("the boundary of a segment is its two endpoints")
        return
    if any(Fraction(x).denominator != 1 for p in verts for x in p):
        raise NotATriangulation("polytope vertices must be integral")
    facets = hull_faces([tuple(int(x) for x in p) for p in verts])
    by_facet = {}
    for s in simplices:
        hit = [f for f in facets if all(sum(a * b for a, b in zip(f.normal, p)) == f.level for p in s)]
        if not hit:
            raise NotATriangulation(f"simplex {s} is not on the boundary")
        by_facet.setdefault(hit[0], []).append(s)
    for f in facets:
        pieces = by_facet.get(f, [])
        if _facet_measure(f.vertices, f.normal) != sum(_facet_measure(s, f.normal) for s in pieces):
            raise NotATriangulation(f"facet {f.vertices} is not covered exactly")
        if d == 3:
            for a, b in combinations(pieces, 2):
                if _triangles_overlap(a, b, f.normal):
                    raise NotATriangulation("overlapping boundary simplices")


def _facet_measure(poly, u):
    """(d-1)-volume of a facet piece after dropping the coordinate where u is largest
    (a fixed positive multiple of the true volume within one facet)."""
    d = len(poly[0])
    k = max(range(d), key=lambda i: abs(u[i]))
    keep = [i for i in range(d) if i != k]
    pts = [tuple(p[i] for i in keep) for p in poly]
    if d == 2:
        return max(p[0] for p in pts) - min(p[0] for p in pts)
    ring = hull2d(pts)
    area2 = 0
    for i in range(len(ring)):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % len(ring)]
        area2 += x1 * y2 - x2 * y1
    return abs(area2)


def _triangles_overlap(a, b, u):
    k = max(range(3), key=lambda i: abs(u[i]))
    keep = [i for i in range(3) if i != k]
    A = [(p[keep[0]], p[keep[1]]) for p in a]
    B = [(p[keep[0]], p[keep[1]]) for p in b]
    # separating axis test on the edges, strict interiors
    for poly in (A, B):
        for i in range(3):
            p, q = poly[i], poly[(i + 1) % 3]
            nx, ny = q[1] - p[1], p[0] - q[0]
            pa = [nx * x + ny * y for x, y in A]
            pb = [nx * x + ny * y for x, y in B]
            if max(pa) <= min(pb) or max(pb) <= min(pa):
                return False
    return True


def _random_interior_points(rng, verts, count):
    """Relative-interior points as (X, D) with X integral: positive combinations of vertices."""
    d = len(verts[0])
    out = []
    for _ in range(count):
        w = [rng.randint(1, 50) for _ in verts]
        X = tuple(int(sum(wi * p[i] for wi, p in zip(w, verts))) for i in range(d))
        out.append(X + (sum(w),))
    return out


def lemma3_cover(verts, masses, simplices, samples=1000, seed=0):
    """Every sampled relative-interior point of P lies in some open simplex
    conv(D u {c(ext P \\ ext D)}), D running over the boundary triangulation."""
    verts = [tuple(Fraction(x) for x in p) for p in verts]
    masses = [Fraction(m) for m in masses]
    if len(masses) != len(verts) or any(m <= 0 for m in masses):
        raise PreconditionViolated("masses must be positive, one per vertex")
    simplices = [tuple(tuple(Fraction(x) for x in p) for p in s) for s in simplices]
    _check_triangulation(verts, simplices)
    mass_of = dict(zip(verts, masses))
    tests = []
    for s in simplices:
        rest = [p for p in verts if p not in s]
        c = _weighted_centre(rest, [mass_of[p] for p in rest])
        tests.append(_SimplexTest(list(s) + [c]))
    rng = random.Random(seed)
    if isinstance(samples, int):
        pts = _random_interior_points(rng, verts, samples)
    else:
        pts = []
        for x in samples:
            x = [Fraction(t) for t in x]
            den = math.lcm(*(t.denominator for t in x))
            pts.append(tuple(t * den for t in x) + (den,))
    for P_ in pts:
        X = tuple(int(t) for t in P_[:-1])
        D = int(P_[-1])
        if not any(t.inside(X, D) for t in tests):
            return False
    return True


# --- distance bounds for sail faces ------------------------------------------

@dataclass
class BoundWitness:
    vertex: tuple
    face: tuple
    rho: int
    m: int
    det_star: int
    bound: int
    ratio: Fraction
    kind: str = "theorem6"

    @property
    def ok(self):
        return self.rho < self.bound

    def to_json(self):
        return {"kind": self.kind, "vertex": [str(x) for x in self.vertex],
                "face": [[str(x) for x in p] for p in self.face], "rho": str(self.rho), "m": str(self.m),
                "det_star": str(self.det_star), "bound": str(self.bound), "ratio": str(self.ratio),
                "ok": self.ok}


def _witness_data(patch, v, fi):
    vi = v if isinstance(v, int) else patch.index_of(v)
    if vi is None:
        raise FaceNotIncident(f"{v} is not a patch vertex")
    if not patch.vertex_complete[vi]:
        raise IncompleteVertex(f"vertex {patch.vertices[vi]} is not complete")
    if fi not in patch.faces_at(vi) or not patch.faces[fi].certified:
        raise FaceNotIncident(f"face {fi} is not a certified face at {patch.vertices[vi]}")
    F = patch.face_record(fi)
    star = edge_star(patch, vi)
    rho = integer_distance(F, (0,) * patch.n)
    return patch.vertices[vi], F, rho, len(star.edge_vectors), det_edge_star(star)


def theorem6_witness(patch, v, fi):
    """rho_int(F, 0) against (n m)^(4 n!) det St_v for a complete vertex v and a face F at it."""
    vtx, F, rho, m, ds = _witness_data(patch, v, fi)
    n = patch.n
    bound = (n * m) ** (4 * math.factorial(n)) * ds
    return BoundWitness(vtx, F.vertices, rho, m, ds, bound, Fraction(rho, bound), "theorem6")


def corollary1_witness(patch, v, fi):
    """rho_int(F, 0) against (n det St_v)^(8 n!)."""
    vtx, F, rho, m, ds = _witness_data(patch, v, fi)
    n = patch.n
    bound = (n * ds) ** (8 * math.factorial(n))
    return BoundWitness(vtx, F.vertices, rho, m, ds, bound, Fraction(rho, bound), "corollary1")


def all_witnesses(patch, kind="theorem6"):
    fn = theorem6_witness if kind == "theorem6" else corollary1_witness
    out = []
    for vi in patch.complete_vertices():
        for fi in patch.faces_at(vi):
            out.append(fn(patch, vi, fi))
    return out


# --- second corollary on explicit instances -----------------------------------

def _halfspace_vertices(hs):
    """Vertices of a bounded polyhedron {x : <f, x> >= D for (f, D) in hs}."""
    n = len(hs[0][0])
    out = set()
    for sub in combinations(hs, n):
        M = [list(map(Fraction, f)) for f, _ in sub]
        if intmat.det_any(M) == 0:
            continue
        x = tuple(intmat.solve_rational(M, [Fraction(d) for _, d in sub]))
        if all(sum(Fraction(a) * b for a, b in zip(f, x)) >= d for f, d in hs):
            out.add(x)
    return sorted(out)


def _lattice_points(hs, strict_shift=None):
    verts = _halfspace_vertices(hs)
    if not verts:
        return set()
    n = len(verts[0])
    lo = [math.floor(min(p[i] for p in verts)) for i in range(n)]
    hi = [math.ceil(max(p[i] for p in verts)) for i in range(n)]
    out = set()
    for x in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if all(sum(a * b for a, b in zip(f, x)) >= d for f, d in hs):
            out.add(x)
    return out


def corollary2_instance_check(P_hs, delta_hs, D, m):
    """Check the relaxed-halfspace hypothesis and the conclusion inside Delta.

    The hypothesis is tested on the lattice points of the bounded polyhedron
    Delta only: a point of Delta outside P must violate some relaxed
    inequality <x, f_i> > D_i - D (n m)^(4 n!).
    """
    n = len(P_hs[0][0])
    for f, _ in P_hs:
        if math.gcd(*f) != 1:
            raise MalformedInstance(f"normal {f} is not primitive")
    pv = _halfspace_vertices(P_hs)
    if not pv or not _halfspace_vertices(delta_hs):
        raise MalformedInstance("P and Delta must be bounded and nonempty")
    for x in pv:
        if not all(sum(Fraction(a) * b for a, b in zip(g, x)) >= e for g, e in delta_hs):
            raise NotContained(f"vertex {x} of P lies outside Delta")
    margin = D * (n * m) ** (4 * math.factorial(n))
    in_delta = _lattice_points(delta_hs)
    in_P = {x for x in in_delta if all(sum(a * b for a, b in zip(f, x)) >= d for f, d in P_hs)}
    relaxed = {x for x in in_delta if all(sum(a * b for a, b in zip(f, x)) > d - margin for f, d in P_hs)}
    hyp = relaxed == in_P
    concl = in_delta == in_P
    return {"hypothesis_ok": hyp, "conclusion_ok": concl if hyp else None, "conclusion": concl,
            "margin": margin, "lattice_points_delta": len(in_delta), "lattice_points_P": len(in_P)}
