import random
from collections import Counter
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from sailkit.cf2d import cone_for_surd
from sailkit.chains import (Chain, auto_chain, build_chain_graph, colour_sequence, definition3_report,
                            detect_period, recover_shift_operator, window_configuration)
from sailkit.cone import rational_cone
from sailkit.errors import (ChainTooShort, DegenerateConfiguration, Definition3Violation, IncompleteVertex,
                            NoPeriod)
from sailkit.exact import intmat, polys as P
from sailkit.lattice import det_edge_star
from sailkit.operators import preserves_cone
from sailkit.sail import invariant_sail_patch, sail_patch
from sailkit.stars import (AffineMap, _choose_basis, _solve_map, affine_equivalence, complete_star,
                           configuration, edge_star, equivalences, star_cells)

from conftest import CUBIC, FIB, golden
from test_cone_sail import random_unimodular


@pytest.fixture(scope="module")
def long_rational_patch():
    return sail_patch(rational_cone([[1, 0], [3, 7]]), 12)


@pytest.fixture(scope="module")
def fib_invariant(fib_cone):
    return invariant_sail_patch(FIB, fib_cone, 3)


def random_map(rng, n):
    return AffineMap(random_unimodular(rng, n), [rng.randint(-5, 5) for _ in range(n)])


# --- stars ------------------------------------------------------------------------

def test_planar_edge_star(long_rational_patch):
    p = long_rational_patch
    inner = p.complete_vertices()
    assert inner
    for v in inner:
        assert len(edge_star(p, v).edge_vectors) == 2


def test_incomplete_vertex_rejected(long_rational_patch, cubic_patch):
    for p in (long_rational_patch, cubic_patch):
        bad = next(i for i, ok in enumerate(p.vertex_complete) if not ok)
        with pytest.raises(IncompleteVertex):
            edge_star(p, bad)
        with pytest.raises(IncompleteVertex):
            complete_star(p, bad)


def test_spatial_edge_star(cubic_patch):
    for v in cubic_patch.complete_vertices():
        S = edge_star(cubic_patch, v)
        assert len(S.edge_vectors) >= 3
        assert det_edge_star(S) >= 1


def test_planar_complete_star_is_edge_star(long_rational_patch):
    p = long_rational_patch
    for v in p.complete_vertices():
        faces = {frozenset(f.vertices) for f in complete_star(p, v).faces}
        edges = {frozenset((p.vertices[v], p.vertices[w])) for w in p.neighbours(v)}
        assert faces == edges


def test_spatial_complete_star_faces_share_edges(cubic_patch):
    p = cubic_patch
    for v in p.complete_vertices():
        here = p.vertices[v]
        faces = [f.vertices for f in complete_star(p, v).faces]
        assert len(faces) >= 3

        def edges_at_v(f):
            k = f.index(here)
            return {f[k - 1], f[(k + 1) % len(f)]}

        # around a complete vertex every face meets exactly two others along an edge through v
        for f in faces:
            mates = [g for g in faces if g is not f and edges_at_v(f) & edges_at_v(g)]
            assert len(mates) == 2


# --- affine equivalence -----------------------------------------------------------

def test_self_equivalence_is_identity(cubic_patch):
    v = cubic_patch.complete_vertices()[0]
    S = star_cells(cubic_patch, v)
    m = affine_equivalence(S, S, "sl")
    assert m.linear == tuple(tuple(int(i == j) for j in range(3)) for i in range(3))
    assert m.translation == (0, 0, 0)


def test_construct_then_recover(cubic_patch, long_rational_patch):
    rng = random.Random(3)
    for p in (cubic_patch, long_rational_patch):
        for v in p.complete_vertices()[:6]:
            S = configuration(star_cells(p, v))
            m = random_map(rng, p.n)
            T = m.apply_cells(S)
            found = affine_equivalence(S, T, "aff_pm")
            assert found is not None
            assert found.apply_cells(S) == T
            assert abs(intmat.det(found.linear)) == 1


def test_determinant_mismatch_gives_none(cubic_patch):
    o = (0, 0, 0)
    S = [frozenset({o, (1, 0, 0)}), frozenset({o, (0, 1, 0)}), frozenset({o, (0, 0, 1)})]
    T = [frozenset({o, (1, 0, 0)}), frozenset({o, (0, 1, 0)}), frozenset({o, (1, 1, 2)})]
    assert affine_equivalence(S, T) is None
    # the cubic stars all have the same determinant, and none matches the unit corner
    v = cubic_patch.complete_vertices()[0]
    assert det_edge_star(edge_star(cubic_patch, v)) == 50
    assert affine_equivalence(S, star_cells(cubic_patch, v)) is None


def test_degenerate_configuration():
    S = [frozenset({(0, 0, 0), (1, 0, 0)}), frozenset({(0, 0, 0), (2, 0, 0)})]
    with pytest.raises(DegenerateConfiguration):
        affine_equivalence(S, S)


def test_sl_forbids_translation():
    S = [frozenset({(0, 0), (1, 0)}), frozenset({(0, 0), (0, 1)})]
    T = [frozenset({(5, 0), (6, 0)}), frozenset({(5, 0), (5, 1)})]
    assert affine_equivalence(S, T, "sl") is None
    assert affine_equivalence(S, T, "aff").translation == (5, 0)


def test_rigidity_on_star_points(cubic_patch):
    # a map is pinned down by its values on any complete star
    rng = random.Random(11)
    p = cubic_patch
    for v in p.complete_vertices()[:5]:
        cells = configuration(star_cells(p, v))
        pts = sorted({q for c in cells for q in c})
        basis = _choose_basis(pts, cells, 3)
        for _ in range(10):
            m = random_map(rng, 3)
            M, t = _solve_map(basis, [m(b) for b in basis])
            assert AffineMap(M, t) == m
            other = random_map(rng, 3)
            if other != m:
                assert any(other(q) != m(q) for q in pts)


def test_colour_is_a_congruence(cubic_patch):
    rng = random.Random(5)
    p = cubic_patch
    for v in p.complete_vertices()[:5]:
        S = configuration(star_cells(p, v))
        m1, m2 = random_map(rng, 3), random_map(rng, 3)
        T = m1.apply_cells(S)
        R = m2.apply_cells(T)
        a, b = affine_equivalence(S, T), affine_equivalence(T, R)
        assert a is not None and b is not None
        assert b.compose(a).apply_cells(S) == R
        assert affine_equivalence(S, R) is not None


# --- chain graphs and periods -----------------------------------------------------

def test_chain_graph_sizes():
    chain = Chain(tuple((i, 1) for i in range(6)))
    g = build_chain_graph(chain, 3)
    assert len(g.nodes) == 4 and len(g.edges) == 3
    short = Chain(tuple((i, 1) for i in range(5)))
    assert len(build_chain_graph(short, 3).nodes) == 3
    assert len(build_chain_graph(short, 3).edges) == 2
    assert len(build_chain_graph(Chain(((0, 1), (1, 1))), 2).nodes) == 1
    with pytest.raises(ChainTooShort):
        build_chain_graph(short, 6)


@given(st.integers(1, 12), st.integers(1, 6))
def test_edge_graph_is_next_window_graph(l, k):
    if k > l:
        return
    chain = Chain(tuple((i, 0) for i in range(l)))
    g = build_chain_graph(chain, k)
    if k + 1 <= l:
        assert g.edge_graph() == build_chain_graph(chain, k + 1)


def test_detect_period_examples():
    assert detect_period(list("aaaa")) == (0, 1)
    assert detect_period(list("abcabcabc")) == (0, 3)
    assert detect_period(list("xyabab"), 2) == (2, 2)
    assert detect_period(list("abcd")) is None


def periods_by_brute_force(c, min_repeats):
    L = len(c)
    for p in range(1, L + 1):
        for off in range(L):
            if L - off < min_repeats * p:
                break
            if all(c[i] == c[i + p] for i in range(off, L - p)):
                return off, p
    return None


@settings(max_examples=300)
@given(st.lists(st.integers(0, 2), min_size=0, max_size=14), st.integers(1, 3))
def test_detect_period_matches_oracle(c, r):
    assert detect_period(c, r) == periods_by_brute_force(c, r)


# --- colourings --------------------------------------------------------------------

def test_golden_chain_single_colour(golden_patch):
    chain = auto_chain(golden_patch)
    assert len(chain) >= 6
    col = colour_sequence(chain, golden_patch, 2, "aff")
    assert set(col.colours) == {0}
    assert col.period == (0, 1)


def test_orbit_chain_colouring(fib_invariant):
    chain = auto_chain(fib_invariant)
    col = colour_sequence(chain, fib_invariant, 2, "aff")
    off, per = col.period
    assert col.colours[off:] == [col.colours[off]] * (len(col.colours) - off)


def test_definition3_violation(cubic_patch):
    v = cubic_patch.vertices[cubic_patch.complete_vertices()[0]]
    chain = Chain((v, v, v))
    rows = definition3_report(chain, cubic_patch)
    assert not rows[0]["independent"]
    with pytest.raises(Definition3Violation):
        colour_sequence(chain, cubic_patch, 3)


def test_cubic_colouring_periodic(cubic_patch):
    chain = auto_chain(cubic_patch)
    for k in (3, 4):
        assert colour_sequence(chain, cubic_patch, k).period is not None


# --- shift recovery -----------------------------------------------------------------

def test_fibonacci_shift_is_a_power(fib_invariant, fib_cone):
    chain = auto_chain(fib_invariant)
    m = recover_shift_operator(chain, fib_invariant, "aff")
    powers = [intmat.matpow(FIB, k) for k in range(1, 6)]
    assert [list(r) for r in m.linear] in [[list(r) for r in M] for M in powers]
    assert preserves_cone(m.linear, fib_cone)


def test_short_chain_has_no_period(cubic_patch):
    chain = auto_chain(cubic_patch)
    with pytest.raises(NoPeriod):
        recover_shift_operator(Chain(chain.vertices[:3]), cubic_patch)


def test_cubic_shift(cubic_patch, cubic_cone):
    chain = auto_chain(cubic_patch)
    m = recover_shift_operator(chain, cubic_patch)
    assert P.trim(intmat.char_poly(m.linear)) == (-1, 5, -6, 1)
    assert preserves_cone(m.linear, cubic_cone)
    # the map shifts every star of the chain
    cells = [configuration(star_cells(cubic_patch, v)) for v in chain.vertices]
    idx = {v: i for i, v in enumerate(chain.vertices)}
    moved = [(i, idx[m(v)]) for i, v in enumerate(chain.vertices) if m(v) in idx]
    assert moved
    for i, j in moved:
        assert m.apply_cells(cells[i]) == cells[j] and j > i
