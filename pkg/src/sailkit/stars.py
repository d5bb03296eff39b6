"""Edge stars, complete stars and lattice affine equivalence of configurations.

A configuration is a finite set of cells, each cell a frozenset of integer
points: segments (edge stars) or polygons (face stars). Two configurations
are equivalent when an integer affine map sends the cell set of one onto the
cell set of the other.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DegenerateConfiguration, IncompleteVertex, InvalidInput
from .exact import intmat
from .lattice import EdgeStar, FaceRecord, primitive

GROUPS = ("sl", "aff", "aff_pm")


def _norm_group(g):
    g = str(g).lower().replace("±", "_pm").replace("-", "_")
    aliases = {"sl": "sl", "aff": "aff", "aff_pm": "aff_pm", "affpm": "aff_pm", "aff_pm1": "aff_pm"}
    if g not in aliases:
        raise InvalidInput(f"unknown group {g!r}; expected one of {GROUPS}")
    return aliases[g]


@dataclass(frozen=True)
class CompleteStar:
    vertex: tuple
    faces: tuple

    def __post_init__(self):
        for f in self.faces:
            if tuple(self.vertex) not in f.vertices:
                raise InvalidInput("face does not contain the star vertex")
        if len({frozenset(f.vertices) for f in self.faces}) != len(self.faces):
            raise InvalidInput("faces must be pairwise distinct")


def _require_complete(patch, vi):
    if not patch.vertex_complete[vi]:
        raise IncompleteVertex(f"vertex {patch.vertices[vi]} has uncertified incident faces")


def _vi(patch, v):
    if isinstance(v, int):
        return v
    i = patch.index_of(v)
    if i is None:
        raise InvalidInput(f"{v} is not a patch vertex")
    return i


def edge_star(patch, v):
    vi = _vi(patch, v)
    _require_complete(patch, vi)
    p = patch.vertices[vi]
    vecs = sorted(primitive(tuple(b - a for a, b in zip(p, patch.vertices[w]))) for w in patch.neighbours(vi))
    return EdgeStar(p, tuple(vecs))


def complete_star(patch, v):
    vi = _vi(patch, v)
    _require_complete(patch, vi)
    faces = tuple(patch.face_record(fi) for fi in patch.faces_at(vi))
    return CompleteStar(patch.vertices[vi], faces)


def star_cells(patch, v):
    """The edge star of a vertex as cells: the full incident sail edges."""
    vi = _vi(patch, v)
    _require_complete(patch, vi)
    p = patch.vertices[vi]
    return {frozenset((p, patch.vertices[w])) for w in patch.neighbours(vi)}


def face_cells(patch, v):
    vi = _vi(patch, v)
    _require_complete(patch, vi)
    return {frozenset(patch.vertices[i] for i in patch.faces[fi].vertices) for fi in patch.faces_at(vi)}


def configuration(cells):
    return frozenset(frozenset(tuple(p) for p in c) for c in cells)


class AffineMap:
    """Integer affine map x -> linear x + translation with |det linear| = 1.

    ``flags`` (P1, P2, distinct eigenvalues, hyperbolicity, det one) are
    computed on first access.
    """

    __slots__ = ("linear", "translation", "_flags")

    def __init__(self, linear, translation=None, flags=None, check=True):
        self.linear = tuple(tuple(int(x) for x in r) for r in linear)
        n = len(self.linear)
        self.translation = tuple(int(x) for x in translation) if translation is not None else (0,) * n
        if check:
            d = intmat.det(self.linear)
            if abs(d) != 1:
                raise InvalidInput(f"linear part has determinant {d}, expected +-1")
        self._flags = flags

    @property
    def flags(self):
        if self._flags is None:
            self._flags = affine_flags(self.linear)
        return self._flags

    def __call__(self, x):
        return tuple(a + b for a, b in zip(intmat.matvec(self.linear, x), self.translation))

    def compose(self, other):
        """self o other."""
        return AffineMap(intmat.matmul(self.linear, other.linear), self(other.translation), check=False)

    def inverse(self):
        inv = intmat.inverse_unimodular(self.linear)
        return AffineMap(inv, tuple(-x for x in intmat.matvec(inv, self.translation)), check=False)

    def power(self, k):
        out = AffineMap(intmat.identity(len(self.linear)), check=False)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = base.compose(out)
        return out

    def apply_cells(self, cells):
        return frozenset(frozenset(self(p) for p in c) for c in cells)

    def __eq__(self, other):
        return isinstance(other, AffineMap) and self.linear == other.linear and self.translation == other.translation

    def __hash__(self):
        return hash((self.linear, self.translation))

    def __repr__(self):
        return f"AffineMap({self.linear}, {self.translation})"


def affine_flags(linear):
    from .operators import check_properties
    props = check_properties(linear)
    props["det_one"] = intmat.det(linear) == 1
    from .operators import is_hyperbolic
    props["hyperbolic"] = is_hyperbolic(linear)
    return props


# --- equivalence search -----------------------------------------------------

def _seg_len(c):
    a, b = tuple(c)
    return math.gcd(*(x - y for x, y in zip(a, b)))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _cell_invariant(c):
    """Affine-unimodular invariant of a single cell."""
    pts = sorted(c)
    if len(pts) == 1:
        return (1,)
    if len(pts) == 2:
        return (2, _seg_len(c))
    n = len(pts[0])
    # integer lengths of all pairwise differences (a multiset) and the lattice volume
    lens = sorted(math.gcd(*(x - y for x, y in zip(a, b))) for a, b in combinations(pts, 2))
    vol = 0
    if n == 2 or n == 3:
        p0 = pts[0]
        diffs = [tuple(x - y for x, y in zip(p, p0)) for p in pts[1:]]
        if n == 2:
            vol = 0
            for a, b in combinations(diffs, 2):
                vol = math.gcd(vol, a[0] * b[1] - a[1] * b[0])
        else:
            for a, b in combinations(diffs, 2):
                vol = math.gcd(vol, *_cross(a, b))
    return (len(pts), tuple(lens), vol)


def _point_signatures(cells):
    sig = {}
    for c in cells:
        inv = _cell_invariant(c)
        for p in c:
            sig.setdefault(p, []).append(inv)
    return {p: tuple(sorted(v)) for p, v in sig.items()}


def _affinely_independent(pts):
    if len(pts) <= 1:
        return True
    p0 = pts[0]
    diffs = [tuple(x - y for x, y in zip(p, p0)) for p in pts[1:]]
    return intmat.rank(diffs) == len(diffs)


def _choose_basis(points, cells, n):
    """Affine basis of n+1 points, grown along cell adjacency from a canonical start."""
    adj = {p: set() for p in points}
    for c in cells:
        for p in c:
            adj[p].update(q for q in c if q != p)
    # start from the point in most cells, ties broken lexicographically
    deg = {p: sum(1 for c in cells if p in c) for p in points}
    start = min(points, key=lambda p: (-deg[p], p))
    basis = [start]
    while len(basis) < n + 1:
        near = sorted({q for b in basis for q in adj[b]} - set(basis))
        far = sorted(set(points) - set(basis) - set(near))
        nxt = next((q for q in near + far if _affinely_independent(basis + [q])), None)
        if nxt is None:
            return None
        basis.append(nxt)
    return basis


def _solve_map(src, dst):
    """Integer affine map sending src[i] to dst[i], or None if not integral."""
    n = len(src[0])
    B = [tuple(x - y for x, y in zip(p, src[0])) for p in src[1:]]   # rows
    C = [tuple(x - y for x, y in zip(p, dst[0])) for p in dst[1:]]
    # M B^T = C^T  ->  B M^T = C
    Binv = intmat.inverse_rational(B)
    MT = [[sum(Binv[i][k] * C[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    if any(Fraction(x).denominator != 1 for r in MT for x in r):
        return None
    M = tuple(tuple(int(MT[j][i]) for j in range(n)) for i in range(n))
    t = tuple(d - s for d, s in zip(dst[0], intmat.matvec(M, src[0])))
    return M, t


def _group_ok(M, t, group):
    d = intmat.det(M)
    if group == "sl":
        return d == 1 and not any(t)
    if group == "aff":
        return d == 1
    return d in (1, -1)


def equivalences(S, T, group="aff_pm", limit=None):
    """All integer affine maps in ``group`` taking cell set S onto T (at most ``limit``)."""
    group = _norm_group(group)
    S = configuration(S)
    T = configuration(T)
    if len(S) != len(T):
        return
    if sorted(_cell_invariant(c) for c in S) != sorted(_cell_invariant(c) for c in T):
        return
    sp = sorted({p for c in S for p in c})
    tp = sorted({p for c in T for p in c})
    if len(sp) != len(tp):
        return
    n = len(sp[0])
    basis = _choose_basis(sp, S, n)
    if basis is None:
        raise DegenerateConfiguration("configuration has no affine basis")
    ssig, tsig = _point_signatures(S), _point_signatures(T)
    if sorted(ssig.values()) != sorted(tsig.values()):
        return
    share_s = {(a, b): any(a in c and b in c for c in S) for a in basis for b in basis}
    share_t = {}

    def shares_t(a, b):
        key = (a, b)
        if key not in share_t:
            share_t[key] = any(a in c and b in c for c in T)
        return share_t[key]

    cands = [[q for q in tp if tsig[q] == ssig[b]] for b in basis]
    found = 0
    img = []

    def rec(k):
        nonlocal found
        if limit is not None and found >= limit:
            return
        if k == len(basis):
            if not _affinely_independent(img):
                return
            sol = _solve_map(basis, img)
            if sol is None:
                return
            M, t = sol
            if not _group_ok(M, t, group):
                return
            m = AffineMap(M, t, check=False)
            if m.apply_cells(S) == T:
                found += 1
                maps.append(m)
            return
        for q in cands[k]:
            if q in img:
                continue
            if any(share_s[(basis[i], basis[k])] != shares_t(img[i], q) for i in range(k)):
                continue
            img.append(q)
            rec(k + 1)
            img.pop()

    maps = []
    rec(0)
    yield from maps


def affine_equivalence(S, T, group="aff_pm"):
    """An integer affine map taking configuration S onto T, or None."""
    for m in equivalences(S, T, group, limit=1):
        return m
    return None
