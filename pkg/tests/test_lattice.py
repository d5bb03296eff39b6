import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from sailkit.errors import (DegenerateSegment, NoCommonEndpoint, ParallelSegments, PointOnPlane,
                            TooFewEdges, TooFewVertices, ZeroVector)
from sailkit.exact import intmat
from sailkit.lattice import (EdgeStar, FaceRecord, Segment, det_edge_star, det_face, integer_angle,
                             integer_distance, integer_distance_hnf, integer_distance_normal,
                             integer_length, primitive)


def interior_points(a, b):
    """Lattice points strictly inside the segment, by direct scan of the box."""
    lo = [min(x, y) for x, y in zip(a, b)]
    hi = [max(x, y) for x, y in zip(a, b)]
    d = [y - x for x, y in zip(a, b)]
    count = 0
    for p in product(*[range(l, h + 1) for l, h in zip(lo, hi)]):
        if p in (tuple(a), tuple(b)):
            continue
        q = [x - y for x, y in zip(p, a)]
        # on the line through a with direction d
        if all(q[i] * d[j] == q[j] * d[i] for i in range(len(d)) for j in range(len(d))):
            count += 1
    return count


def test_primitive_examples():
    assert primitive((2, 4, 6)) == (1, 2, 3)
    assert primitive((0, 0, 5)) == (0, 0, 1)
    assert primitive((3, 5)) == (3, 5)
    with pytest.raises(ZeroVector):
        primitive((0, 0))


def test_integer_length_examples():
    assert integer_length(((0, 0), (3, 0))) == 3
    assert integer_length(((0, 0), (2, 4))) == 2
    assert integer_length(((1, 1), (2, 3))) == 1
    with pytest.raises(DegenerateSegment):
        integer_length(((1, 1), (1, 1)))


def test_integer_length_counts_interior_points():
    rng = random.Random(1)
    for _ in range(1000):
        a = tuple(rng.randint(-6, 6) for _ in range(2))
        b = tuple(rng.randint(-6, 6) for _ in range(2))
        if a == b:
            continue
        assert integer_length((a, b)) == interior_points(a, b) + 1


def test_integer_angle_examples():
    assert integer_angle(((0, 0), (1, 0)), ((0, 0), (0, 1))) == 1
    assert integer_angle(((0, 0), (1, 0)), ((0, 0), (1, 2))) == 2
    assert integer_angle(((0, 0), (2, 0)), ((0, 0), (0, 3))) == 1
    with pytest.raises(NoCommonEndpoint):
        integer_angle(((0, 0), (1, 0)), ((5, 5), (6, 7)))
    with pytest.raises(ParallelSegments):
        integer_angle(((0, 0), (1, 0)), ((0, 0), (3, 0)))


@settings(max_examples=200, deadline=None)
@given(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
def test_integer_angle_is_index_of_primitive_pair(d1, d2):
    if d1[0] * d2[1] - d1[1] * d2[0] == 0:
        return
    ang = integer_angle(((0, 0), d1), ((0, 0), d2))
    assert ang == intmat.sublattice_index([primitive(d1), primitive(d2)])


def test_integer_distance_examples():
    F = FaceRecord(((1, 0, 0), (1, 1, 0), (1, 0, 1)))
    assert integer_distance(F, (0, 0, 0)) == 1
    G = FaceRecord(((2, 0, 0), (0, 2, 0), (0, 0, 2)))
    assert integer_distance(G, (0, 0, 0)) == 2
    with pytest.raises(PointOnPlane):
        integer_distance(G, (1, 1, 0))


def test_integer_distance_routes_agree():
    rng = random.Random(2)
    done = 0
    while done < 1000:
        n = rng.choice([2, 3])
        h = tuple(rng.randint(-5, 5) for _ in range(n))
        if not any(h):
            continue
        c = rng.randint(-12, 12)
        a = tuple(rng.randint(-8, 8) for _ in range(n))
        F = FaceRecord.from_plane(h, c)
        try:
            d1 = integer_distance_hnf(F, a)
        except Exception as e:
            with pytest.raises(type(e)):
                integer_distance_normal(F, a)
            continue
        assert d1 == integer_distance_normal(F, a)
        done += 1


def test_det_edge_star_examples():
    assert det_edge_star(EdgeStar((0, 0, 0), ((1, 0, 0), (0, 1, 0), (0, 0, 1)))) == 1
    assert det_edge_star(EdgeStar((0, 0, 0), ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)))) == 4
    assert det_edge_star(EdgeStar((0, 0), ((1, 0), (1, 2), (0, 1)))) == 4
    with pytest.raises(TooFewEdges):
        det_edge_star(EdgeStar((0, 0, 0), ((1, 0, 0), (0, 1, 0))))


def test_det_face_examples():
    assert det_face(FaceRecord(((1, 0, 0), (0, 1, 0), (0, 0, 1)))) == 1
    assert det_face(FaceRecord(((1, 0, 1), (0, 1, 1), (1, 1, 1)))) == 1
    assert det_face(FaceRecord(((0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)))) == 4
    with pytest.raises(TooFewVertices):
        det_face(FaceRecord(((1, 0, 1), (0, 1, 1)), (0, 0, 1), 1))


def _random_star(rng, n):
    while True:
        vecs = set()
        for _ in range(rng.randint(n, n + 3)):
            v = tuple(rng.randint(-4, 4) for _ in range(n))
            if any(v):
                vecs.add(primitive(v))
        if len(vecs) >= n:
            return EdgeStar(tuple(rng.randint(-3, 3) for _ in range(n)), tuple(sorted(vecs)))


def test_det_invariance_under_unimodular_maps():
    rng = random.Random(3)
    for _ in range(1000):
        n = rng.choice([2, 3])
        U = intmat.random_unimodular(rng, n)
        S = _random_star(rng, n)
        moved = EdgeStar(intmat.matvec(U, S.vertex), tuple(intmat.matvec(U, r) for r in S.edge_vectors))
        assert det_edge_star(moved) == det_edge_star(S)
        # faces: a triangle (or segment) off the origin; the determinant uses the
        # vertices themselves, so the check is for linear maps
        verts = [tuple(rng.randint(-5, 5) for _ in range(n)) for _ in range(n)]
        if intmat.det(verts) == 0:
            continue
        F = FaceRecord(tuple(verts))
        G = FaceRecord(tuple(intmat.matvec(U, v) for v in verts))
        assert det_face(F) == det_face(G)


def test_outputs_ignore_input_order():
    rng = random.Random(4)
    for _ in range(100):
        S = _random_star(rng, 3)
        vecs = list(S.edge_vectors)
        rng.shuffle(vecs)
        assert det_edge_star(EdgeStar(S.vertex, tuple(vecs))) == det_edge_star(S)
    quad = [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
    assert det_face(FaceRecord(tuple(reversed(quad)))) == det_face(FaceRecord(tuple(quad)))


def test_segment_rejects_mixed_dimensions():
    from sailkit.errors import InvalidInput
    with pytest.raises(InvalidInput):
        Segment((0, 0), (1, 1, 1))
