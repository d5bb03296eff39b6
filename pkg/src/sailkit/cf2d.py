"""Continued fractions, Klein polygons and the planar Lagrange correspondence."""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EmptyPatch, NotASurd, UnsupportedDegree
from .exact import polys as P
from .exact.algebraic import AlgebraicReal, NumberFieldElem, sign_of
from .lattice import integer_angle, integer_length


@dataclass
class CFExpansion:
    """Partial quotients a_0, a_1, ... of a rational or quadratic number.

    Rational input: ``terms`` is the whole expansion and ``terminated`` is
    true. Quadratic input: ``terms`` holds the preperiod followed by one
    period, with ``preperiod`` and ``period`` giving the split.
    """

    terms: tuple
    terminated: bool = False
    preperiod: int = None
    period: int = None
    states: list = field(default_factory=list, repr=False)

    def quotient(self, k):
        if k < len(self.terms):
            return self.terms[k]
        if self.terminated:
            raise IndexError("expansion terminated")
        return self.terms[self.preperiod + (k - self.preperiod) % self.period]

    def quotients(self, count):
        if self.terminated:
            return list(self.terms[:count])
        return [self.quotient(k) for k in range(count)]

    def convergents(self, count):
        """p_k / q_k for k < count."""
        out = []
        p0, q0, p1, q1 = 1, 0, self.quotient(0), 1
        out.append(Fraction(p1, q1))
        for k in range(1, count):
            try:
                a = self.quotient(k)
            except IndexError:
                break
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            out.append(Fraction(p1, q1))
        return out

    def to_json(self):
        return {"terms": [str(a) for a in self.terms], "terminated": self.terminated,
                "preperiod": None if self.preperiod is None else str(self.preperiod),
                "period": None if self.period is None else str(self.period)}


def _rational_cf(r):
    r = Fraction(r)
    out = []
    p, q = r.numerator, r.denominator
    while q:
        a = p // q
        out.append(a)
        p, q = q, p - a * q
    return tuple(out)


def surd_data(x):
    """(P, Q, D) with x = (P + sqrt(D)) / Q, Q | D - P^2, for a quadratic AlgebraicReal."""
    f = P.primitive(x.min_poly)
    c, b, a = f
    if a < 0:
        a, b, c = -a, -b, -c
    D = b * b - 4 * a * c
    # the larger root is (-b + sqrt D) / 2a
    other_lo = Fraction(-b, 2 * a)
    plus = sign_of(x.elem() - other_lo) > 0
    if plus:
        return -b, 2 * a, D
    return b, -2 * a, D


def _floor_surd(Pk, Qk, D, r):
    """floor((Pk + sqrt D) / Qk) for non-square D, r = isqrt(D)."""
    if Qk > 0:
        return (Pk + r) // Qk
    return -((Pk + r) // (-Qk)) - 1


def cf_expand(x, max_terms=64):
    """Continued fraction of a rational (Euclid) or a quadratic irrational ((P, Q) recurrence)."""
    if isinstance(x, (int, Fraction)):
        return CFExpansion(_rational_cf(x), terminated=True)
    if isinstance(x, NumberFieldElem):
        from .exact.algebraic import to_algebraic
        x = to_algebraic(x)
    if x.is_rational:
        return CFExpansion(_rational_cf(x.as_fraction()), terminated=True)
    if x.degree != 2:
        raise UnsupportedDegree(f"degree {x.degree} numbers are not supported")
    Pk, Qk, D = surd_data(x)
    r = math.isqrt(D)
    seen = {}
    terms, states = [], []
    while (Pk, Qk) not in seen:
        if len(terms) >= max_terms:
            return CFExpansion(tuple(terms), states=states)
        seen[(Pk, Qk)] = len(terms)
        states.append((Pk, Qk))
        a = _floor_surd(Pk, Qk, D, r)
        terms.append(a)
        Pk = a * Qk - Pk
        Qk = (D - Pk * Pk) // Qk
    start = seen[(Pk, Qk)]
    return CFExpansion(tuple(terms), preperiod=start, period=len(terms) - start, states=states)


def quadratic(min_poly, lo, hi):
    return AlgebraicReal(min_poly, Fraction(lo), Fraction(hi))


def conjugate(x):
    """The other root of a quadratic AlgebraicReal, as an element of Q(x)."""
    c, b, a = P.primitive(x.min_poly)
    return NumberFieldElem.const(x, Fraction(-b, a)) - x.elem()


# --- Klein polygons ---------------------------------------------------------------

def _polyline(patch):
    """Sail vertices in order along the certified edges (a path in the plane)."""
    adj = {}
    for a, b in patch.edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if not adj:
        return []
    ends = sorted((i for i, nb in adj.items() if len(nb) == 1), key=lambda i: patch.vertices[i])
    start = ends[0] if ends else min(adj, key=lambda i: patch.vertices[i])
    path, prev = [start], None
    while True:
        nxt = [j for j in adj[path[-1]] if j != prev]
        if not nxt or nxt[0] in path:
            break
        prev = path[-1]
        path.append(nxt[0])
    return [patch.vertices[i] for i in path]


def klein_polygon_quotients(c, H, patch=None):
    """Integer lengths of the certified sail edges and integer angles at the
    vertices between them, in order along the sail, also interleaved."""
    from .sail import sail_patch
    patch = patch or sail_patch(c, H)
    path = _polyline(patch)
    if len(path) < 2:
        raise EmptyPatch("no certified sail edges at this height")
    lengths = [integer_length((a, b)) for a, b in zip(path, path[1:])]
    angles = [integer_angle((path[i - 1], path[i]), (path[i], path[i + 1])) for i in range(1, len(path) - 1)]
    inter = []
    for i, l in enumerate(lengths):
        inter.append(l)
        if i < len(angles):
            inter.append(int(angles[i]))
    return {"vertices": path, "lengths": lengths, "angles": [int(a) for a in angles], "interleaved": inter}


def match_alignment(seq, quotients):
    """First (offset, orientation) at which ``seq`` occurs as a contiguous block of
    ``quotients``; orientation -1 means ``seq`` reversed."""
    q = list(quotients)
    for orient, s in ((1, list(seq)), (-1, list(seq)[::-1])):
        for off in range(len(q) - len(s) + 1):
            if q[off:off + len(s)] == s:
                return off, orient
    return None


def cone_for_surd(x):
    """The cone spanned by (1, x) and (1, x') for the conjugate x', in Q(x)."""
    from .cone import cone_from_generators
    one = NumberFieldElem.const(x, 1)
    return cone_from_generators([(one, x.elem()), (one, conjugate(x))], field=x)


def lagrange_roundtrip(x, H=None, group="aff"):
    """CF period, sail colouring period and a recovered shift operator for a surd."""
    from .chains import auto_chain, colour_sequence, recover_shift_operator
    from .operators import check_properties, preserves_cone
    from .exact.eigen import eigen_decomposition
    from .sail import sail_patch
    if isinstance(x, (int, Fraction)) or x.is_rational:
        raise NotASurd(f"{x} is rational")
    if x.degree != 2:
        raise NotASurd(f"{x} has degree {x.degree}")
    cf = cf_expand(x)
    c = cone_for_surd(x)
    H = Fraction(H) if H is not None else Fraction(64)
    while True:
        patch = sail_patch(c, H)
        chain = auto_chain(patch)
        try:
            m = recover_shift_operator(chain, patch, group)
            break
        except Exception:
            if H > 2**20:
                raise
            H *= 2
    col = colour_sequence(chain, patch, 2, group)
    eig = eigen_decomposition(m.linear)
    real_pos = all(e.kind == "real" and e.value.sign() > 0 for e in eig)
    flags = check_properties(m.linear)
    return {
        "cf": cf,
        "cf_period": cf.period,
        "colour_period": col.period,
        "shift": m,
        "det": flags["det"],
        "distinct_real_positive": real_pos and flags["distinct"],
        "preserves_cone": preserves_cone(m.linear, c),
        "height": H,
        "chain": chain,
        "cone": c,
    }
