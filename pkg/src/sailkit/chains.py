"""Vertex chains of a sail, window graphs, colourings and shift recovery."""

import math
from collections import deque
from dataclasses import dataclass, field

from .errors import ChainTooShort, Definition3Violation, InvalidInput, NoPeriod, VerificationFailed
from .exact import intmat
from .stars import _norm_group, configuration, equivalences, star_cells


@dataclass(frozen=True)
class Chain:
    """Sail vertices in order; consecutive vertices share a sail edge."""

    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(tuple(int(x) for x in v) for v in self.vertices))

    def __len__(self):
        return len(self.vertices)

    def window(self, i, k):
        return self.vertices[i:i + k]


@dataclass(frozen=True)
class ChainGraph:
    k: int
    nodes: tuple      # k-windows as vertex tuples
    edges: tuple      # (i, i+1) index pairs

    def edge_graph(self):
        """Nodes are the edges of this path, adjacent when they share a node."""
        return ChainGraph(self.k + 1, tuple(self.nodes[i] + self.nodes[j][-1:] for i, j in self.edges),
                          tuple((i, i + 1) for i in range(len(self.edges) - 1)))


def build_chain_graph(chain, k):
    l = len(chain)
    if k < 1:
        raise InvalidInput("window size must be positive")
    if l < k:
        raise ChainTooShort(f"chain of length {l} has no windows of size {k}")
    nodes = tuple(chain.window(i, k) for i in range(l + 1 - k))
    return ChainGraph(k, nodes, tuple((i, i + 1) for i in range(len(nodes) - 1)))


# --- Definition 3 side conditions -------------------------------------------

def _rank_of_differences(pts):
    if len(pts) <= 1:
        return 0
    p0 = pts[0]
    return intmat.rank([tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]])


def definition3_report(chain, patch):
    """Check every n-1 consecutive vertices under both readings of the condition.

    ``independent``: the points are affinely independent (span an
    (n-2)-plane). ``not_in_low_plane``: no (n-3)-plane contains them. For
    n-1 points both say the affine rank is n-2, and both are reported.
    ``common_face``: one certified face contains all of them.
    """
    n = patch.n
    w = max(n - 1, 1)
    cert_faces = [frozenset(patch.vertices[i] for i in f.vertices) for f in patch.faces if f.certified]
    rows = []
    for i in range(len(chain) - w + 1):
        pts = list(chain.window(i, w))
        r = _rank_of_differences(pts)
        rows.append({
            "start": i,
            "independent": r == len(pts) - 1,
            "not_in_low_plane": r >= n - 2,
            "common_face": any(all(p in f for p in pts) for f in cert_faces),
        })
    return rows


@dataclass
class Colouring:
    k: int
    group: str
    colours: list
    witnesses: list = field(default_factory=list)   # map from the palette representative, per window
    palette: list = field(default_factory=list)
    period: tuple = None

    def to_json(self):
        return {"k": str(self.k), "group": self.group, "colours": [str(c) for c in self.colours],
                "period": None if self.period is None else [str(x) for x in self.period]}


def window_configuration(patch, verts):
    cells = set()
    for v in verts:
        cells |= star_cells(patch, v)
    return configuration(cells)


def colour_sequence(chain, patch, k, group="aff_pm", check=True, min_repeats=2):
    """Colour the k-windows of the chain by equivalence of their edge-star unions.

    Colour ids are assigned in order of first occurrence; each new window is
    compared with one representative per colour.
    """
    group = _norm_group(group)
    if check:
        bad = [r for r in definition3_report(chain, patch)
               if not (r["independent"] and r["not_in_low_plane"] and r["common_face"])]
        if bad:
            raise Definition3Violation("side conditions fail on some windows", windows=bad)
    g = build_chain_graph(chain, k)
    colours, witnesses, palette = [], [], []
    for node in g.nodes:
        S = window_configuration(patch, node)
        for cid, R in enumerate(palette):
            m = next(iter(equivalences(R, S, group, limit=1)), None)
            if m is not None:
                colours.append(cid)
                witnesses.append(m)
                break
        else:
            colours.append(len(palette))
            witnesses.append(None)
            palette.append(S)
    col = Colouring(k, group, colours, witnesses, palette)
    col.period = detect_period(colours, min_repeats)
    return col


def detect_period(colours, min_repeats=2):
    """Smallest p (with smallest offset) such that colours[i] == colours[i + p]
    for all i >= offset and the tail holds at least ``min_repeats`` periods."""
    c = list(colours)
    L = len(c)
    for p in range(1, L + 1):
        off = 0
        for i in range(L - p - 1, -1, -1):
            if c[i] != c[i + p]:
                off = i + 1
                break
        if (L - off) >= min_repeats * p:
            return off, p
    return None


# --- shift recovery -----------------------------------------------------------

def _shift_of(m, chain, cells):
    """The s with m(St v_j) = St v_{j+s} for every j where both are in the chain,
    or (None, reversed_sum) data when the map reverses the chain order."""
    idx = {v: i for i, v in enumerate(chain.vertices)}
    shifts, sums = set(), set()
    for j, v in enumerate(chain.vertices):
        w = m(v)
        if w in idx:
            shifts.add(idx[w] - j)
            sums.add(idx[w] + j)
    return shifts, sums


def _verify_shift(m, chain, cells, s):
    L = len(chain)
    checked = 0
    for j in range(L):
        if 0 <= j + s < L:
            if m.apply_cells(cells[j]) != cells[j + s]:
                return False
            checked += 1
    return checked > 0


def recover_shift_operator(chain, patch, group="aff_pm", min_repeats=2):
    """An integer affine map shifting the edge stars of the chain by a common period.

    The period t is the lcm of the periods of the colourings for windows of
    size n and n + 1. Candidate maps come from the equivalence of two windows
    t apart; an order-reversing candidate is composed with another one.
    """
    group = _norm_group(group)
    n = patch.n
    if len(chain) < n + 1:
        raise NoPeriod("chain too short for windows of size n + 1")
    pers = []
    for k in (n, n + 1):
        col = colour_sequence(chain, patch, k, group, min_repeats=min_repeats)
        if col.period is None:
            raise NoPeriod(f"colouring with windows of size {k} is not periodic", colours=col.colours)
        pers.append(col.period)
    t = math.lcm(pers[0][1], pers[1][1])
    off = max(pers[0][0], pers[1][0])
    cells = [configuration(star_cells(patch, v)) for v in chain.vertices]
    reversing = []
    for i in range(off, len(chain) - t - n):
        S = window_configuration(patch, chain.window(i, n + 1))
        T = window_configuration(patch, chain.window(i + t, n + 1))
        for m in equivalences(S, T, group):
            shifts, sums = _shift_of(m, chain, cells)
            if len(shifts) == 1:
                s = shifts.pop()
                if s > 0 and _verify_shift(m, chain, cells, s):
                    return m
            elif len(sums) == 1:
                reversing.append((m, sums.pop()))
        if reversing:
            break
    # two order-reversing maps compose to a shift
    for (m1, a), (m2, b) in ((x, y) for x in reversing for y in reversing):
        s = a - b
        if s > 0:
            m = m1.compose(m2)
            if _verify_shift(m, chain, cells, s):
                return m
    if len(chain) - t - n <= off:
        raise NoPeriod("chain too short to compare windows one period apart")
    raise VerificationFailed("no candidate map shifts the whole chain")


# --- chain selection -------------------------------------------------------------

def _adjacency(patch, allowed):
    adj = {i: [] for i in allowed}
    for a, b in patch.edges:
        if a in allowed and b in allowed:
            adj[a].append(b)
            adj[b].append(a)
    for i in adj:
        adj[i].sort(key=lambda j: patch.vertices[j])
    return adj


def _shortest_path(adj, s, t):
    prev = {s: None}
    dq = deque([s])
    while dq:
        x = dq.popleft()
        if x == t:
            break
        for y in adj[x]:
            if y not in prev:
                prev[y] = x
                dq.append(y)
    if t not in prev:
        return None
    path = [t]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def _orbit_chain(patch, complete):
    A = patch.operator
    Ainv = intmat.inverse_unimodular(A)
    adj = _adjacency(patch, complete)
    best = None
    for s in sorted(complete, key=lambda i: patch.vertices[i]):
        v = patch.vertices[s]
        t = patch.index_of(intmat.matvec(A, v))
        if t is None or t not in complete or t == s:
            continue
        path = _shortest_path(adj, s, t)
        if path is None:
            continue
        period = [patch.vertices[i] for i in path[:-1]]
        verts = list(period)
        # extend forwards and backwards by whole translates while possible
        fwd = period
        while True:
            fwd = [tuple(intmat.matvec(A, p)) for p in fwd]
            take = []
            for p in fwd:
                i = patch.index_of(p)
                if i is None or i not in complete:
                    break
                take.append(p)
            verts.extend(take)
            if len(take) < len(fwd):
                break
        bwd = period
        while True:
            bwd = [tuple(intmat.matvec(Ainv, p)) for p in bwd]
            take = []
            for p in reversed(bwd):
                i = patch.index_of(p)
                if i is None or i not in complete:
                    break
                take.append(p)
            verts[:0] = take[::-1]
            if len(take) < len(bwd):
                break
        if _is_walk(patch, verts) and (best is None or len(verts) > len(best)):
            best = verts
    return best


def _is_walk(patch, verts):
    es = {frozenset((patch.vertices[a], patch.vertices[b])) for a, b in patch.edges}
    return len(set(verts)) == len(verts) and all(frozenset((p, q)) in es for p, q in zip(verts, verts[1:]))


def _greedy_walk(patch, complete):
    adj = _adjacency(patch, complete)
    best = []
    for s in sorted(complete, key=lambda i: patch.vertices[i]):
        walk, seen = [s], {s}
        while True:
            nxt = next((y for y in adj[walk[-1]] if y not in seen), None)
            if nxt is None:
                break
            walk.append(nxt)
            seen.add(nxt)
        if len(walk) > len(best):
            best = walk
    return [patch.vertices[i] for i in best]


def auto_chain(patch):
    """A deterministic chain of complete vertices.

    On invariant patches this follows an orbit: a shortest path from a
    vertex v to A v, continued by its translates. Otherwise the longest
    greedy walk from the lexicographically first start is used (in the
    plane this is the sail polyline itself).
    """
    complete = set(patch.complete_vertices())
    if not complete:
        raise InvalidInput("patch has no complete vertices")
    if patch.operator is not None:
        verts = _orbit_chain(patch, complete)
        if verts:
            return Chain(tuple(verts))
    return Chain(tuple(_greedy_walk(patch, complete)))
