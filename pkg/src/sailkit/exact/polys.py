"""Dense univariate polynomials over Q.

A polynomial is a tuple of coefficients ``(c0, c1, ..., cd)`` in increasing
degree, entries ``int`` or ``Fraction``. The zero polynomial is ``()``.
Everything here is exact; no floating point is used.
"""

from fractions import Fraction
from functools import reduce
from math import gcd

import sympy

_X = sympy.Symbol("x")


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p):
    return len(trim(p)) - 1


def lead(p):
    return trim(p)[-1]


def add(p, q):
    n = max(len(p), len(q))
    return trim(
        [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]
    )


def neg(p):
    return tuple(-c for c in p)


def sub(p, q):
    return add(p, neg(q))


def scale(p, c):
    return trim([c * a for a in p])


def mul(p, q):
    p, q = trim(p), trim(q)
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def power(p, k):
    out = (1,)
    for _ in range(k):
        out = mul(out, p)
    return out


def divmod_poly(p, q):
    """Quotient and remainder over Q."""
    p, q = [Fraction(c) for c in trim(p)], trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    lq = Fraction(q[-1])
    dq = len(q) - 1
    quo = [Fraction(0)] * max(len(p) - dq, 0)
    while len(p) - 1 >= dq and p:
        k = len(p) - 1 - dq
        c = p[-1] / lq
        quo[k] = c
        for i, b in enumerate(q):
            p[i + k] -= c * b
        p = list(trim(p))
    return _norm(trim(quo)), _norm(trim(p))


def rem(p, q):
    return divmod_poly(p, q)[1]


def _norm(p):
    return tuple(int(c) if isinstance(c, Fraction) and c.denominator == 1 else c for c in p)


def monic(p):
    p = trim(p)
    lc = Fraction(p[-1])
    return _norm(tuple(Fraction(c) / lc for c in p))


def gcd_poly(p, q):
    """Monic gcd over Q (``()`` when both vanish)."""
    p, q = trim(p), trim(q)
    while q:
        p, q = q, rem(p, q)
    return monic(p) if p else ()


def xgcd_poly(p, q):
    """Return (g, s, t) with s*p + t*q = g monic."""
    r0, r1 = trim(p), trim(q)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        quo, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    lc = Fraction(lead(r0))
    return monic(r0), scale(s0, 1 / lc), scale(t0, 1 / lc)


def derivative(p):
    return trim([i * c for i, c in enumerate(p)][1:])


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def compose(p, q):
    """p(q(x))."""
    out = ()
    for c in reversed(trim(p)):
        out = add(mul(out, q), (c,))
    return out


def primitive(p):
    """Scale to a primitive integer polynomial with positive leading coefficient."""
    p = trim(p)
    if not p:
        return ()
    den = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(c).denominator for c in p), 1)
    ints = [int(Fraction(c) * den) for c in p]
    g = reduce(gcd, (abs(c) for c in ints if c), 0) or 1
    s = -1 if ints[-1] < 0 else 1
    return tuple(s * c // g for c in ints)


def squarefree(p):
    p = trim(p)
    if degree(p) <= 0:
        return p
    g = gcd_poly(p, derivative(p))
    return primitive(divmod_poly(p, g)[0]) if degree(g) > 0 else primitive(p)


def is_squarefree(p):
    return degree(gcd_poly(p, derivative(p))) == 0


def variation(values):
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_sequence(p):
    p = trim(p)
    seq = [p, derivative(p)]
    while seq[-1]:
        r = rem(seq[-2], seq[-1])
        seq.append(neg(r) if r else ())
    return [s for s in seq if s]


def root_bound(p):
    """Cauchy bound: every complex root has modulus < bound."""
    p = trim(p)
    lc = abs(Fraction(p[-1]))
    return 1 + max((abs(Fraction(c)) / lc for c in p[:-1]), default=0)


def count_roots(p, lo, hi, seq=None):
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    seq = seq or sturm_sequence(p)
    return variation([evaluate(s, lo) for s in seq]) - variation([evaluate(s, hi) for s in seq])


def count_positive_roots(p):
    """Distinct real roots in (0, oo)."""
    p = squarefree(p)
    return count_roots(p, 0, root_bound(p))


def real_roots(p):
    """Isolate the distinct real roots of ``p``.

    Returns sorted ``(lo, hi)`` pairs, each bracketing exactly one root in the
    open interval; endpoints are never roots.
    """
    p = squarefree(p)
    if degree(p) <= 0:
        return []
    seq = sturm_sequence(p)
    b = Fraction(root_bound(p))
    out = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        k = count_roots(p, lo, hi, seq)
        if k == 0:
            continue
        if k == 1:
            out.append((lo, hi))
            continue
        mid = _split_point(p, lo, hi)
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort()
    return out


def _split_point(p, lo, hi):
    for num, den in ((1, 2), (1, 3), (2, 3), (2, 5), (3, 5), (3, 7), (4, 7)):
        mid = lo + (hi - lo) * num / den
        if evaluate(p, mid) != 0:
            return mid
    k = 8
    while True:
        mid = lo + (hi - lo) * Fraction(k - 1, 2 * k - 1)
        if evaluate(p, mid) != 0:
            return mid
        k += 1


def refine_root(p, lo, hi, width):
    """Bisect an isolating interval of a simple root until ``hi - lo <= width``."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo == hi:
        return lo, hi
    slo = evaluate(p, lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = evaluate(p, mid)
        if sm == 0:
            return mid, mid
        if (sm > 0) == (slo > 0):
            lo, slo = mid, sm
        else:
            hi = mid
    return lo, hi


# --- sympy bridge (factorization and bivariate resultants only) -------------

def to_sympy(p, var=_X):
    return sympy.Poly(list(reversed(trim(p))) or [0], var, domain="QQ")


def from_sympy(poly):
    coeffs = poly.all_coeffs()
    return _norm(trim(Fraction(int(c.p), int(c.q)) for c in reversed(coeffs)))


def factor(p):
    """Factor an integer polynomial over Q.

    Returns ``(content, [(factor, multiplicity), ...])`` with primitive integer
    factors of positive leading coefficient, sorted by (degree, coefficients).
    """
    p = trim(p)
    content, facs = sympy.factor_list(to_sympy(p).as_expr(), _X)
    out = []
    for f, e in facs:
        out.append((primitive(from_sympy(sympy.Poly(f, _X))), int(e)))
    out.sort(key=lambda fe: (len(fe[0]), fe[0]))
    return Fraction(str(content)), out


def is_irreducible(p):
    _, facs = factor(p)
    return len(facs) == 1 and facs[0][1] == 1
