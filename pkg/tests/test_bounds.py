import math
import random
from fractions import Fraction
from itertools import combinations

import pytest

from sailkit.bounds import (Lemma2Instance, all_witnesses, corollary1_witness, corollary2_instance_check,
                            lemma1_bound, lemma1_f, lemma1_positivity, lemma2_check, lemma2_constant,
                            lemma3_cover, random_lemma2_instance, theorem6_witness)
from sailkit.cone import rational_cone
from sailkit.errors import (FaceNotIncident, IncompleteVertex, NotATriangulation, NotContained,
                            PreconditionViolated)
from sailkit.hull import hull2d, hull_faces
from sailkit.sail import sail_patch


# --- Lemma 1 ---------------------------------------------------------------------

def test_lemma1_at_zero():
    # f(0) = A B^(n-1)
    assert lemma1_f(3, Fraction(2), Fraction(1, 2), 0) == Fraction(1, 2)
    assert lemma1_positivity(3, 1, 2, Fraction(1, 2), [0])


def test_lemma1_worked_value():
    assert lemma1_f(2, 1, Fraction(1, 2), Fraction(1, 8)) == Fraction(13, 64)
    assert lemma1_positivity(2, 1, 1, Fraction(1, 2), [Fraction(1, 8)])


def test_lemma1_preconditions():
    with pytest.raises(PreconditionViolated):
        lemma1_positivity(2, 2, 1, Fraction(1, 2), [0])     # A = V/n
    with pytest.raises(PreconditionViolated):
        lemma1_positivity(2, 1, 1, Fraction(3, 2), [0])
    with pytest.raises(PreconditionViolated):
        lemma1_positivity(2, 1, 1, Fraction(1, 2), [1])     # outside the interval


def random_rational(rng, lo, hi, den=97):
    return lo + (hi - lo) * Fraction(rng.randint(1, den - 1), den)


def lemma1_trials(count, seed=0):
    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        n = rng.randint(1, 6)
        V = random_rational(rng, 0, 10)
        A = V / n + random_rational(rng, 0, 5)
        B = random_rational(rng, 0, 1)
        top = lemma1_bound(n, V, B)
        xs = [top * Fraction(k, 16) for k in range(17)] + [top * random_rational(rng, 0, 1) for _ in range(8)]
        if not lemma1_positivity(n, V, A, B, xs):
            failures += 1
    return failures


def test_lemma1_suite():
    assert lemma1_trials(1000) == 0


# --- Lemma 2 ---------------------------------------------------------------------

def test_lemma2_constant_small():
    # n = 1: 1 * (1 + 1/V)
    assert lemma2_constant(1, 2) == Fraction(3, 2)
    # n = 2: 1^2 (1 + 1/V) * 2^1 (1 + 1/V)^1
    assert lemma2_constant(2, 1) == 2 * 2 * 2


def test_lemma2_segments():
    # Delta = [0, 5/2], v = 1, Delta_0 = [1, 5/2]; the cut segment [0, 1] holds only 0 and 1
    r = lemma2_check(Lemma2Instance((0,), ((Fraction(5, 2),),), (1,), Fraction(1, 2)))
    assert r["hypotheses_ok"]
    assert r["lhs"] == Fraction(5, 2) and r["inequality_ok"]


def test_lemma2_emptiness_violation():
    # the cut segment [0, 2] also contains the lattice point 1
    r = lemma2_check(Lemma2Instance((0,), ((Fraction(7, 2),),), (2,), Fraction(1, 2)))
    assert not r["hypotheses_ok"]
    assert r["inequality_ok"] is None


def lemma2_trials(count, seed=1):
    rng = random.Random(seed)
    valid = failures = 0
    while valid < count:
        inst = random_lemma2_instance(rng, rng.choice([1, 2, 2, 3]))
        r = lemma2_check(inst)
        if not r["hypotheses_ok"]:
            continue
        valid += 1
        if not r["inequality_ok"]:
            failures += 1
    return valid, failures


def test_lemma2_suite():
    valid, failures = lemma2_trials(100)
    assert valid == 100 and failures == 0


# --- Lemma 3 ---------------------------------------------------------------------

def fan_triangulation(verts):
    """Boundary simplices of a full-dimensional lattice polytope in the plane or space."""
    if len(verts[0]) == 2:
        ring = hull2d(verts)
        return [(ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]
    out = []
    for f in hull_faces(verts):
        vs = f.vertices
        out += [(vs[0], vs[k], vs[k + 1]) for k in range(1, len(vs) - 1)]
    return out


def random_polytope(rng, d):
    while True:
        pts = {tuple(rng.randint(-6, 6) for _ in range(d)) for _ in range(rng.randint(d + 1, 9))}
        if len(pts) < d + 1:
            continue
        try:
            if d == 2:
                ring = hull2d(pts)
                if len(ring) >= 3:
                    return ring
            else:
                fs = hull_faces(pts)
                return sorted({v for f in fs for v in f.vertices})
        except Exception:
            continue


def test_lemma3_triangle_and_square():
    tri = [(0, 0), (4, 0), (0, 4)]
    assert lemma3_cover(tri, [1, 1, 1], fan_triangulation(tri))
    sq = [(0, 0), (2, 0), (2, 2), (0, 2)]
    assert lemma3_cover(sq, [1, 1, 1, 1], fan_triangulation(sq))


def test_lemma3_rejects_bad_input():
    tri = [(0, 0), (4, 0), (0, 4)]
    with pytest.raises(PreconditionViolated):
        lemma3_cover(tri, [1, 0, 1], fan_triangulation(tri))
    with pytest.raises(NotATriangulation):
        lemma3_cover(tri, [1, 1, 1], fan_triangulation(tri)[:2])


def lemma3_trials(count, samples, seed=2):
    rng = random.Random(seed)
    failures = 0
    for t in range(count):
        d = 2 if t % 2 == 0 else 3
        verts = random_polytope(rng, d)
        masses = [Fraction(rng.randint(1, 20), rng.randint(1, 5)) for _ in verts]
        if not lemma3_cover(verts, masses, fan_triangulation(verts), samples=samples, seed=t):
            failures += 1
    return failures


def test_lemma3_suite():
    assert lemma3_trials(100, 1000) == 0


# --- Theorem 6 and Corollary 1 ------------------------------------------------------

def rho_planar(a, b):
    """Integer distance from the origin to the line through lattice points a, b."""
    return abs(a[0] * b[1] - a[1] * b[0]) // math.gcd(b[0] - a[0], b[1] - a[1])


@pytest.fixture(scope="module")
def rational_patch():
    return sail_patch(rational_cone([[1, 0], [3, 7]]), 12)


def test_theorem6_planar(rational_patch):
    p = rational_patch
    v = p.complete_vertices()[0]
    for fi in p.faces_at(v):
        w = theorem6_witness(p, v, fi)
        a, b = (p.vertices[i] for i in p.faces[fi].vertices)
        assert w.rho == rho_planar(a, b)
        assert w.m == 2
        assert w.bound == 4 ** 8 * w.det_star
        assert w.ok


def test_witness_errors(rational_patch):
    p = rational_patch
    v = p.complete_vertices()[0]
    far = next(fi for fi in range(len(p.faces)) if fi not in p.faces_at(v))
    with pytest.raises(FaceNotIncident):
        theorem6_witness(p, v, far)
    bad = next(i for i, ok in enumerate(p.vertex_complete) if not ok)
    with pytest.raises(IncompleteVertex):
        corollary1_witness(p, bad, p.faces_at(bad)[0])


def test_all_witnesses_hold(golden_patch, cubic_patch):
    for p in (golden_patch, cubic_patch):
        for kind in ("theorem6", "corollary1"):
            ws = all_witnesses(p, kind)
            assert ws and all(w.ok for w in ws)
            assert all(0 < w.ratio < 1 for w in ws)


def test_cubic_bound_shape(cubic_patch):
    v = cubic_patch.complete_vertices()[0]
    fi = cubic_patch.faces_at(v)[0]
    w = theorem6_witness(cubic_patch, v, fi)
    assert w.bound == (3 * w.m) ** 24 * w.det_star
    assert corollary1_witness(cubic_patch, v, fi).bound == (3 * w.det_star) ** 48


# --- Corollary 2 ---------------------------------------------------------------------

# Delta: x >= 0, y >= 0, 2x + 2y <= 5; its integer hull P: x + y <= 2
DELTA = [((1, 0), 0), ((0, 1), 0), ((-2, -2), -5)]
HULL = [((1, 0), 0), ((0, 1), 0), ((-1, -1), -2)]


def test_corollary2_identical_polytopes():
    r = corollary2_instance_check(HULL, HULL, 1, 2)
    assert r["hypothesis_ok"] and r["conclusion_ok"]


def test_corollary2_integer_hull():
    r = corollary2_instance_check(HULL, DELTA, 1, 2)
    assert r["hypothesis_ok"] and r["conclusion_ok"]
    assert r["lattice_points_delta"] == r["lattice_points_P"] == 6


def test_corollary2_stray_point():
    # P = the triangle x + y <= 1 misses (1, 1), (2, 0), (0, 2) of Delta
    small = [((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)]
    r = corollary2_instance_check(small, DELTA, 1, 2)
    assert not r["hypothesis_ok"]
    assert r["conclusion_ok"] is None and not r["conclusion"]


def test_corollary2_containment():
    big = [((1, 0), -1), ((0, 1), 0), ((-1, -1), -2)]
    with pytest.raises(NotContained):
        corollary2_instance_check(big, DELTA, 1, 2)
