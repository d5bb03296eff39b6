"""Lattice invariants: integer length and angle, integer distance, and the
determinants of edge stars and faces."""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (DegenerateSegment, IrrationalHull, NoCommonEndpoint, ParallelSegments,
                     PointOnPlane, TooFewEdges, TooFewVertices, VerificationFailed, WrongDimension,
                     ZeroVector, InvalidInput)
from .exact import intmat


def _ivec(v):
    return tuple(int(x) for x in v)


def primitive(v):
    v = _ivec(v)
    g = math.gcd(*v)
    if g == 0:
        raise ZeroVector("primitive() of the zero vector")
    return tuple(x // g for x in v)


def is_primitive(v):
    return math.gcd(*v) == 1


@dataclass(frozen=True)
class Segment:
    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", _ivec(self.a))
        object.__setattr__(self, "b", _ivec(self.b))
        if len(self.a) != len(self.b):
            raise InvalidInput("segment endpoints differ in dimension")
        if self.a == self.b:
            raise DegenerateSegment(f"endpoints coincide at {self.a}")

    @property
    def direction(self):
        return tuple(y - x for x, y in zip(self.a, self.b))


def integer_length(s):
    if not isinstance(s, Segment):
        s = Segment(*s)
    return math.gcd(*s.direction)


def integer_angle(s1, s2):
    """Integer angle between two planar segments with a common endpoint."""
    s1 = s1 if isinstance(s1, Segment) else Segment(*s1)
    s2 = s2 if isinstance(s2, Segment) else Segment(*s2)
    if len(s1.a) != 2:
        raise WrongDimension("integer angles are defined in the plane only")
    common = {s1.a, s1.b} & {s2.a, s2.b}
    if not common:
        raise NoCommonEndpoint("segments share no endpoint")
    c = min(common)
    d1 = tuple(y - x for x, y in zip(c, s1.b if s1.a == c else s1.a))
    d2 = tuple(y - x for x, y in zip(c, s2.b if s2.a == c else s2.a))
    area = abs(d1[0] * d2[1] - d1[1] * d2[0])
    if area == 0:
        raise ParallelSegments("segments are parallel; integer angle is 0")
    return Fraction(area, math.gcd(*d1) * math.gcd(*d2))


@dataclass(frozen=True)
class EdgeStar:
    """A vertex with the primitive vectors of its incident edges."""

    vertex: tuple
    edge_vectors: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertex", _ivec(self.vertex))
        vecs = tuple(_ivec(r) for r in self.edge_vectors)
        if not vecs:
            raise InvalidInput("edge star needs at least one edge")
        for r in vecs:
            if not any(r):
                raise ZeroVector("zero edge vector")
            if not is_primitive(r):
                raise InvalidInput(f"edge vector {r} is not primitive")
        if len(set(vecs)) != len(vecs):
            raise InvalidInput("edge vectors must be pairwise distinct")
        object.__setattr__(self, "edge_vectors", vecs)

    @property
    def dimension(self):
        return len(self.vertex)

    def points(self):
        """The star as a point configuration: the vertex and the unit steps along each edge."""
        v = self.vertex
        return [v] + [tuple(a + b for a, b in zip(v, r)) for r in self.edge_vectors]


@dataclass(frozen=True)
class FaceRecord:
    """A sail face: its vertices plus the primitive normal ``h`` and level ``c``
    with ``<h, v> = c`` on every vertex."""

    vertices: tuple
    normal: tuple = None
    level: int = None

    def __post_init__(self):
        verts = tuple(_ivec(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if self.normal is None and verts:
            h, c = face_normal(verts)
            object.__setattr__(self, "normal", h)
            object.__setattr__(self, "level", c)
        elif self.normal is not None:
            object.__setattr__(self, "normal", _ivec(self.normal))
            object.__setattr__(self, "level", Fraction(self.level) if not isinstance(self.level, int) else self.level)
            for v in verts:
                if sum(a * b for a, b in zip(self.normal, v)) != self.level:
                    raise InvalidInput(f"vertex {v} is off the face plane")

    @property
    def dimension(self):
        return len(self.normal)

    @classmethod
    def from_plane(cls, normal, level):
        return cls((), normal, level)


def face_normal(vertices):
    """Primitive normal and level of the affine hyperplane spanned by ``vertices``.

    The normal is recovered from the integer kernel (via HNF) of the vertex
    differences; its sign makes the first nonzero coordinate positive.
    """
    v0 = vertices[0]
    n = len(v0)
    diffs = [tuple(a - b for a, b in zip(v, v0)) for v in vertices[1:]]
    diffs = [d for d in diffs if any(d)]
    if not diffs:
        if n == 1:
            return (1,), v0[0]
        raise InvalidInput("face vertices span a point only")
    ker = intmat.integer_kernel(diffs)
    if len(ker) != 1:
        raise InvalidInput(f"face vertices do not span a hyperplane (codimension {len(ker)})")
    h = primitive(ker[0])
    if next(x for x in h if x) < 0:
        h = tuple(-x for x in h)
    return h, sum(a * b for a, b in zip(h, v0))


def _lattice_point_on_plane(h, c):
    """Some integer x with <h, x> = c, or None."""
    if isinstance(c, Fraction):
        if c.denominator != 1:
            return None
        c = int(c)
    g, coeffs = 0, [0] * len(h)
    for i, a in enumerate(h):
        g, s, t = intmat._xgcd(g, a)
        coeffs = [s * q for q in coeffs]
        coeffs[i] += t
    if g == 0 or c % g:
        return None
    return tuple(q * (c // g) for q in coeffs)


def integer_distance_hnf(F, a):
    """Index of the group generated by the lattice points of aff(F) shifted by -a."""
    a = _ivec(a)
    n = len(a)
    if F.vertices:
        v0 = F.vertices[0]
        diffs = [tuple(x - y for x, y in zip(v, v0)) for v in F.vertices[1:]]
        basis = intmat.saturation(diffs, n)
    else:
        v0 = _lattice_point_on_plane(F.normal, F.level)
        if v0 is None:
            raise IrrationalHull("the face plane contains no lattice points")
        basis = intmat.integer_kernel([F.normal])
    gens = [tuple(x - y for x, y in zip(v0, a))] + list(basis)
    idx = intmat.sublattice_index(gens, n)
    if idx == math.inf:
        raise PointOnPlane(f"{a} lies in the affine hull of the face")
    return idx


def integer_distance_normal(F, a):
    """|<h, v0 - a>| for the primitive integer normal ``h``."""
    a = _ivec(a)
    if isinstance(F.level, Fraction) and F.level.denominator != 1:
        raise IrrationalHull("the face plane contains no lattice points")
    if math.gcd(*F.normal) != 1:
        h = primitive(F.normal)
        if F.level % math.gcd(*F.normal):
            raise IrrationalHull("the face plane contains no lattice points")
        c = F.level // math.gcd(*F.normal)
    else:
        h, c = F.normal, F.level
    d = abs(int(c) - sum(x * y for x, y in zip(h, a)))
    if d == 0:
        raise PointOnPlane(f"{a} lies in the affine hull of the face")
    return d


def integer_distance(F, a):
    """Integer distance from the face plane to ``a``, computed two ways and cross-checked."""
    d1 = integer_distance_hnf(F, a)
    d2 = integer_distance_normal(F, a)
    if d1 != d2:
        raise VerificationFailed(f"integer distance routes disagree: {d1} != {d2}")
    return d1


def _abs_det(vs):
    return abs(intmat.det(tuple(vs)))


def det_edge_star(S):
    n = S.dimension
    if len(S.edge_vectors) < n:
        raise TooFewEdges(f"{len(S.edge_vectors)} edges in dimension {n}")
    return sum(_abs_det(c) for c in combinations(S.edge_vectors, n))


def det_face(F):
    n = len(F.vertices[0]) if F.vertices else 0
    if len(F.vertices) < max(n, 1):
        raise TooFewVertices(f"{len(F.vertices)} vertices in dimension {n}")
    return sum(_abs_det(c) for c in combinations(F.vertices, n))
