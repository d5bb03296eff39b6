"""Eigenvalues of integer matrices, grouped by irreducible factor of the
characteristic polynomial."""

from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from . import polys as P
from .algebraic import AlgebraicReal, NumberFieldElem, _SortKey, iv_add, iv_mul
from .fieldlin import kernel, normalize_first
from .intmat import char_poly

_Y, _X = sympy.symbols("y x")


@dataclass
class Eigen:
    """One eigenvalue (``kind='real'``) or complex-conjugate pair (``kind='complex'``).

    Real entries carry the value and a kernel basis over Q(value). Complex
    pairs carry the exact modulus squared and trace ``2 Re(z)``.
    """

    kind: str
    factor: tuple
    multiplicity: int
    value: AlgebraicReal = None
    eigenvectors: list = field(default_factory=list)
    modulus_sq: AlgebraicReal = None
    trace: AlgebraicReal = None
    rectangle: tuple = None

    @property
    def geometric_multiplicity(self):
        return len(self.eigenvectors) if self.kind == "real" else None

    def to_json(self):
        from ..serialize import algebraic_to_json, elems_to_json
        out = {"kind": self.kind, "factor": [str(c) for c in self.factor],
               "multiplicity": str(self.multiplicity)}
        if self.kind == "real":
            out["value"] = algebraic_to_json(self.value)
            out["eigenvectors"] = [elems_to_json(v) for v in self.eigenvectors]
        else:
            out["modulus_sq"] = algebraic_to_json(self.modulus_sq)
            out["trace"] = algebraic_to_json(self.trace)
        return out


def eigenspace(A, lam):
    """Basis of ker(A - lam E) over Q(lam), each vector with first nonzero coordinate 1."""
    n = len(A)
    if lam.is_rational:
        r = lam.as_fraction()
        rows = [[Fraction(A[i][j]) - (r if i == j else 0) for j in range(n)] for i in range(n)]
        return [normalize_first(v) for v in kernel(rows, Fraction(1))]
    t = lam.elem()
    one = NumberFieldElem(lam, (1,))
    rows = [[one * A[i][j] - (t if i == j else 0) for j in range(n)] for i in range(n)]
    return [normalize_first(v) for v in kernel(rows, one)]


def left_eigenspace(A, lam):
    At = [list(c) for c in zip(*A)]
    return eigenspace(At, lam)


def _unique_root(facs, lo, hi):
    """The single root of the factor list in [lo, hi], or None if not unique yet."""
    hits = []
    for f, _ in facs:
        if P.degree(f) == 1:
            r = Fraction(-f[0], f[1])
            if lo <= r <= hi:
                hits.append(AlgebraicReal.rational(r))
        elif P.evaluate(f, lo) != 0 and P.evaluate(f, hi) != 0:
            c = P.count_roots(f, lo, hi)
            if c == 1:
                hits.append(AlgebraicReal(f, lo, hi, check=False))
            elif c > 1:
                return None
        elif lo < hi:
            return None
    return hits[0] if len(hits) == 1 else None


def _sq(iv):
    if iv[0] >= 0 or iv[1] <= 0:
        return iv_mul(iv, iv)
    return Fraction(0), max(iv[0] ** 2, iv[1] ** 2)


def _complex_pairs(f):
    """Upper-half-plane roots of ``f`` with exact modulus squared and trace.

    Certified complex isolating rectangles come from sympy; the modulus
    squared and trace are then identified among the real roots of resultant
    polynomials vanishing at every ``z*conj(z)`` and ``z+conj(z)``.
    """
    d = P.degree(f)
    F = P.to_sympy(f, _X)
    e = F.as_expr()
    prod_poly = sympy.resultant(e, sympy.expand(_X**d * e.subs(_X, _Y / _X)), _X)
    sum_poly = sympy.resultant(e, e.subs(_X, _Y - _X), _X)
    _, pf = P.factor(P.from_sympy(sympy.Poly(prod_poly, _Y)))
    _, sf = P.factor(P.from_sympy(sympy.Poly(sum_poly, _Y)))

    def q(v):
        return Fraction(int(v.p), int(v.q))

    k = 4
    while True:
        _, cplx = F.intervals(all=True, eps=sympy.Rational(1, 2**k))
        out = []
        for (z0, z1), _mult in cplx:
            re = (q(sympy.re(z0)), q(sympy.re(z1)))
            im = (q(sympy.im(z0)), q(sympy.im(z1)))
            if im[0] <= 0:
                continue
            ms = _unique_root(pf, *iv_add(_sq(re), _sq(im)))
            tr = _unique_root(sf, 2 * re[0], 2 * re[1])
            if ms is None or tr is None:
                break
            out.append((ms, tr, (re, im)))
        else:
            if 2 * len(out) == d - len(P.real_roots(f)):
                return out
        k += 8


def eigen_decomposition(A):
    """Eigen data of a square integer matrix.

    Returns a list of ``Eigen`` records: real roots ascending, then complex
    pairs ordered by (modulus squared, trace).
    """
    cp = char_poly(A)
    _, facs = P.factor(cp)
    reals, cplx = [], []
    for f, e in facs:
        if P.degree(f) == 1:
            roots = [AlgebraicReal.rational(Fraction(-f[0], f[1]))]
        else:
            roots = [AlgebraicReal(f, lo, hi, check=False) for lo, hi in P.real_roots(f)]
        for lam in roots:
            reals.append(Eigen("real", f, e, value=lam, eigenvectors=eigenspace(A, lam)))
        if P.degree(f) - len(roots) > 0:
            for ms, tr, rect in _complex_pairs(f):
                cplx.append(Eigen("complex", f, e, modulus_sq=ms, trace=tr, rectangle=rect))
    reals.sort(key=lambda r: _SortKey(r.value))
    cplx.sort(key=lambda c: (_SortKey(c.modulus_sq), _SortKey(c.trace)))
    return reals + cplx
