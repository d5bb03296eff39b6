"""Acceptance criteria, one test each, at zero tolerance.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import json
import math
import random
import time
from pathlib import Path

import pytest

from sailkit.bounds import all_witnesses
from sailkit.cf2d import cone_for_surd, klein_polygon_quotients, lagrange_roundtrip
from sailkit.chains import auto_chain, colour_sequence, recover_shift_operator
from sailkit.cone import FieldVec, cone_from_matrix, rational_cone
from sailkit.diagnostics import determinant_profile, norm_form_min
from sailkit.exact import intmat
from sailkit.exact import polys as P
from sailkit.exact.algebraic import NumberFieldElem, sign_of
from sailkit.exact.eigen import eigen_decomposition
from sailkit.lattice import (EdgeStar, FaceRecord, det_edge_star, det_face, integer_distance_hnf,
                             integer_distance_normal)
from sailkit.operators import (check_properties, classify_unimodular_3d, is_hyperbolic, preserves_cone)
from sailkit.sail import invariant_sail_patch, sail_patch
from sailkit.stars import configuration, star_cells

from conftest import CUBIC, FIB, FIB_RAYS, golden, sqrt2, sqrt3
from test_bounds import lemma1_trials, lemma2_trials, lemma3_trials
from test_cone_sail import image_of, random_unimodular
from test_lattice import _random_star
from test_operators import BLOCK, FORMS, I3

ARCHIVE = Path(__file__).resolve().parent.parent / "acceptance_artifacts"

# (P, Q, D) with x = (P + sqrt D) / Q, and the sail height used for each surd
SURDS = [("golden", golden, (1, 2, 5), 64), ("sqrt2", sqrt2, (0, 1, 2), 256), ("sqrt3", sqrt3, (0, 1, 3), 128)]


def surd_oracle(P_, Q, D, count):
    """Partial quotients of (P + sqrt D)/Q by the (P, Q) recurrence; needs Q > 0 and Q | D - P^2."""
    r = math.isqrt(D)
    out = []
    while len(out) < count:
        a = (P_ + r) // Q
        out.append(a)
        P_ = a * Q - P_
        Q = (D - P_ * P_) // Q
    return out


def aligned(seq, quotients):
    for off in range(len(quotients) - len(seq) + 1):
        window = quotients[off:off + len(seq)]
        if window == seq or window == seq[::-1]:
            return off
    return None


@pytest.fixture(scope="module")
def timed_cubic():
    t0 = time.perf_counter()
    A = CUBIC
    c = cone_from_matrix(A)
    p = invariant_sail_patch(A, c, 3)
    return c, p, time.perf_counter() - t0


@pytest.mark.criterion(1, "Lagrange correspondence")
@pytest.mark.parametrize("name,make,pqd,H", SURDS)
def test_criterion_1(name, make, pqd, H):
    t0 = time.perf_counter()
    seq = klein_polygon_quotients(cone_for_surd(make()), H)["interleaved"]
    secs = time.perf_counter() - t0
    assert len(seq) >= 10
    assert aligned(seq, surd_oracle(*pqd, len(seq) + 8)) is not None
    assert secs < 5


@pytest.mark.criterion(2, "Lagrange round trip")
def test_criterion_2():
    t0 = time.perf_counter()
    for _, make, _, _ in SURDS:
        r = lagrange_roundtrip(make())
        M = r["shift"].linear
        assert r["det"] == 1 and intmat.det(M) == 1
        # det 1 and trace > 2 give two distinct positive real eigenvalues
        tr = M[0][0] + M[1][1]
        assert tr > 2 and r["distinct_real_positive"]
        assert r["preserves_cone"] and preserves_cone(M, r["cone"])
    assert time.perf_counter() - t0 < 10


@pytest.mark.criterion(3, "3D invariance of the cubic sail")
def test_criterion_3(timed_cubic):
    c, p, secs = timed_cubic
    t0 = time.perf_counter()
    assert is_hyperbolic(CUBIC)
    assert p.translate_range[1] - p.translate_range[0] + 1 >= 3
    verts = set(p.vertices)
    cv = p.certified_vertex_set()
    assert cv
    assert all(tuple(intmat.matvec(CUBIC, v)) in verts for v in cv)
    chain = auto_chain(p)
    assert colour_sequence(chain, p, p.n).period is not None
    assert secs + time.perf_counter() - t0 <= 60


@pytest.mark.criterion(4, "shift operator of the cubic chain")
def test_criterion_4(timed_cubic):
    c, p, _ = timed_cubic
    chain = auto_chain(p)
    m = recover_shift_operator(chain, p)
    vs = chain.vertices
    t = vs.index(m(vs[0]))
    assert t > 0
    cells = [configuration(star_cells(p, v)) for v in vs]
    assert len(vs) - t >= 1
    for i in range(len(vs) - t):
        assert m(vs[i]) == vs[i + t]
        assert m.apply_cells(cells[i]) == cells[i + t]
    f = check_properties(m.linear)
    assert f["in_A1"]


@pytest.mark.criterion(5, "distance bounds of Theorem 6 and Corollary 1")
def test_criterion_5(golden_patch):
    planar = [golden_patch, sail_patch(rational_cone([[1, 0], [3, 7]]), 12),
              sail_patch(cone_from_matrix(FIB, rays=FIB_RAYS), 60)]
    spatial = [invariant_sail_patch(CUBIC, cone_from_matrix(CUBIC), 3)]
    t0 = time.perf_counter()
    rows = []
    for p in planar + spatial:
        pairs = {(v, fi) for v in p.complete_vertices() for fi in p.faces_at(v) if p.faces[fi].certified}
        for kind in ("theorem6", "corollary1"):
            ws = all_witnesses(p, kind)
            assert len(ws) == len(pairs)
            for w in ws:
                assert w.rho < w.bound
                rows.append({"n": p.n, "kind": kind, "rho": str(w.rho), "ratio": str(w.ratio)})
    secs = time.perf_counter() - t0
    ARCHIVE.mkdir(exist_ok=True)
    (ARCHIVE / "witness_ratios.jsonl").write_text("".join(json.dumps(r, sort_keys=True) + "\n" for r in rows))
    assert secs < 10


@pytest.mark.criterion(6, "Lemma 1, 2 and 3 suites")
def test_criterion_6():
    assert lemma1_trials(1000) == 0
    assert lemma2_trials(100) == (100, 0)
    assert lemma3_trials(100, 1000) == 0


@pytest.mark.criterion(7, "invariant cross-checks")
def test_criterion_7():
    rng = random.Random(11)
    agree = 0
    while agree < 1000:
        n = rng.choice([2, 3])
        h = tuple(rng.randint(-5, 5) for _ in range(n))
        c = rng.randint(-12, 12)
        a = tuple(rng.randint(-8, 8) for _ in range(n))
        if not any(h) or sum(x * y for x, y in zip(h, a)) == c:
            continue
        if c % math.gcd(*h):
            continue
        F = FaceRecord.from_plane(h, c)
        assert integer_distance_hnf(F, a) == integer_distance_normal(F, a)
        agree += 1

    maps = 0
    while maps < 1000:
        n = rng.choice([2, 3])
        U = intmat.random_unimodular(rng, n)
        S = _random_star(rng, n)
        moved = EdgeStar(intmat.matvec(U, S.vertex), tuple(intmat.matvec(U, r) for r in S.edge_vectors))
        assert det_edge_star(moved) == det_edge_star(S)
        verts = [tuple(rng.randint(-5, 5) for _ in range(n)) for _ in range(n)]
        if intmat.det(verts) == 0:
            continue
        assert det_face(FaceRecord(tuple(verts))) == det_face(FaceRecord(tuple(intmat.matvec(U, v) for v in verts)))
        maps += 1

    cones = 0
    for _ in range(100):
        if rng.random() < 0.6:
            n, H = 2, rng.choice([12, 20])
            c = (rational_cone([[1, 0], [rng.randint(-6, 6), rng.randint(1, 6)]]) if rng.random() < 0.5
                 else cone_from_matrix(FIB, rays=FIB_RAYS))
        else:
            n, H = 3, 6
            c = (cone_from_matrix(CUBIC) if rng.random() < 0.25
                 else rational_cone([[1, 0, 0], [rng.randint(0, 2), rng.randint(1, 3), 0],
                                     [rng.randint(0, 2), rng.randint(0, 2), rng.randint(1, 3)]]))
        U = random_unimodular(rng, n)
        assert sail_patch(c.transformed(U), H).canonical() == image_of(U, sail_patch(c, H).canonical())
        cones += 1
    assert cones >= 100


@pytest.mark.criterion(8, "spectral classification")
def test_criterion_8():
    f = check_properties(I3)
    assert not f["P1"]
    f = check_properties(FIB)
    assert f["P1"] and f["P2"] and f["in_A1"] and is_hyperbolic(FIB)
    f = check_properties(BLOCK)
    assert f["P1"] and f["P2"]
    assert not is_hyperbolic(BLOCK)
    # the characteristic polynomial is a square: (x^2 - 3x + 1)^2
    assert P.trim(intmat.char_poly(BLOCK)) == P.trim(P.mul((1, -3, 1), (1, -3, 1)))
    seen = set()
    for A, form in FORMS:
        assert classify_unimodular_3d(A).form == form
        seen.add(form)
    assert seen == set(range(1, 8))


@pytest.mark.criterion(9, "norm form and determinant diagnostics")
def test_criterion_9():
    t0 = time.perf_counter()
    c = cone_from_matrix(CUBIC)
    values = [norm_form_min(c.forms, R)[0] for R in (10, 20, 40)]
    assert all(sign_of(v - values[0]) == 0 for v in values)
    p = invariant_sail_patch(CUBIC, c, 3)
    per = determinant_profile(p)["per_translate"]
    assert len(per) >= 3
    first = next(iter(per.values()))
    assert all(d == first for d in per.values())
    r2 = sqrt2()
    one = NumberFieldElem.const(r2, 1)
    value, arg = norm_form_min([FieldVec([1, -1]), FieldVec([one, r2.elem()], r2)], 6)
    assert sign_of(value) == 0 and arg[0] - arg[1] == 0 and any(arg)
    assert time.perf_counter() - t0 <= 120


def companion(coeffs):
    """Companion matrix of the monic polynomial with low-to-high coefficients."""
    n = len(coeffs) - 1
    M = [[0] * n for _ in range(n)]
    for i in range(1, n):
        M[i][i - 1] = 1
    for i in range(n):
        M[i][n - 1] = -coeffs[i]
    return M


@pytest.mark.criterion(10, "degree six example")
def test_criterion_10():
    A = companion((1, 0, 0, -3, 0, 0, 1))
    assert P.trim(intmat.char_poly(A)) == (1, 0, 0, -3, 0, 0, 1)
    eig = eigen_decomposition(A)
    real = [e for e in eig if e.kind == "real"]
    assert len(real) == 2 and all(sign_of(e.value) > 0 for e in real)
    assert len([e for e in eig if e.kind == "complex"]) == 2
    assert not is_hyperbolic(A)
    f = check_properties(A)
    assert f["P1"]
    # each complex pair shares its modulus with a real eigenvalue, so (P2) fails here
    assert f["P2"], "P2 is false: |zeta * cbrt(l)| = cbrt(l) for both roots l"
