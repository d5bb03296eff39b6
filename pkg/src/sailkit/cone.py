"""Simplicial cones with real algebraic generators.

A cone stores its generator rays ``omega_i`` and dual forms ``L_i`` with
``<L_i, omega_j> = delta_ij``. Each ray and its form live in one number
field; for eigen cones different rays may live in different (conjugate)
fields, which never need to be combined except in the height functional.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (ComplexEigenvalueSelected, DefectiveEigenvalue, HeightNotPositive,
                     InvalidInput, WrongDimension)
from .exact import intmat
from .exact import polys as P
from .exact.algebraic import QQ, AlgebraicReal, NumberFieldElem, Expr, sign_of, to_algebraic
from .exact.eigen import eigen_decomposition, eigenspace, left_eigenspace
from .exact import fieldlin

SHIFT = 40  # bits of the dyadic enclosures used by fast sign prefilters


def _frac_floor(x):
    return x.numerator // x.denominator


def _frac_ceil(x):
    return -((-x.numerator) // x.denominator)


class FieldVec:
    """A vector with coordinates in Q or in a single field Q(theta).

    Rational vectors are held as integer numerators over a common
    denominator. Irrational vectors also keep integer dyadic enclosures
    ``lo_j <= 2^SHIFT * c_j <= hi_j`` for fast sign decisions.
    """

    __slots__ = ("field", "coords", "num", "den", "lo", "hi")

    def __init__(self, coords, field=None):
        coords = list(coords)
        fld = field
        if fld is None:
            for c in coords:
                if isinstance(c, NumberFieldElem) and not c.field.is_rational and not c.is_rational():
                    fld = c.field
                    break
        if fld is not None and fld.is_rational:
            fld = None
        self.field = fld
        if fld is None:
            fr = [c.as_fraction() if isinstance(c, NumberFieldElem) else Fraction(c) for c in coords]
            den = 1
            for c in fr:
                den = den * c.denominator // math.gcd(den, c.denominator)
            self.num = tuple(int(c * den) for c in fr)
            self.den = den
            self.coords = tuple(fr)
            self.lo = tuple(_frac_floor(Fraction(x << SHIFT, den)) for x in self.num)
            self.hi = tuple(_frac_ceil(Fraction(x << SHIFT, den)) for x in self.num)
        else:
            self.coords = tuple(c if isinstance(c, NumberFieldElem) else NumberFieldElem(fld, (Fraction(c),))
                                for c in coords)
            self.num = self.den = None
            w = Fraction(1, 2 ** (SHIFT + 2))
            lo, hi = [], []
            for c in self.coords:
                a, b = c.enclosure(w)
                lo.append(_frac_floor(a * 2**SHIFT))
                hi.append(_frac_ceil(b * 2**SHIFT))
            self.lo, self.hi = tuple(lo), tuple(hi)

    @property
    def rational(self):
        return self.field is None

    def __len__(self):
        return len(self.coords)

    def dot(self, x):
        """Exact value of <self, x> for a rational/integer vector x."""
        if self.field is None:
            return Fraction(sum(a * b for a, b in zip(self.num, x)), self.den)
        acc = NumberFieldElem(self.field, ())
        for c, xi in zip(self.coords, x):
            if xi:
                acc = acc + c * xi
        return acc

    def dot_bounds(self, x):
        """Integer bounds on 2^SHIFT * <self, x> for an integer vector x."""
        lo = hi = 0
        for a, b, xi in zip(self.lo, self.hi, x):
            if xi >= 0:
                lo += a * xi
                hi += b * xi
            else:
                lo += b * xi
                hi += a * xi
        return lo, hi

    def sign_dot(self, x):
        if self.field is None:
            s = sum(a * b for a, b in zip(self.num, x))
            return (s > 0) - (s < 0)
        lo, hi = self.dot_bounds(x)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        return sign_of(self.dot(x))

    def scaled(self, c):
        return FieldVec([a * c for a in self.coords], self.field)

    def __repr__(self):
        return f"FieldVec({[str(c) if not isinstance(c, NumberFieldElem) else c for c in self.coords]})"


def field_dot(u, v):
    """<u, v> for FieldVecs in the same field, or a rational vector u."""
    total = 0
    for a, b in zip(u.coords, v.coords):
        total = a * b + total
    return total


Interior, Boundary, Exterior = "Interior", "Boundary", "Exterior"


@dataclass(eq=False)
class ConeSpec:
    """An n-dimensional simplicial cone ``{x : <L_i, x> >= 0}``.

    ``rays[i]`` is the generator ``omega_i`` and ``forms[i]`` the dual form
    ``L_i``, normalized by ``<L_i, omega_i> = 1``. ``height`` is the
    functional ``h = sum L_i``: a tuple of Fractions when rational,
    otherwise ``None`` and heights are evaluated form by form.
    """

    rays: tuple
    forms: tuple
    source: dict = field(default_factory=dict)
    matrix: tuple = None
    height: tuple = None

    def __post_init__(self):
        n = len(self.rays)
        if n < 1 or any(len(r) != n for r in self.rays) or len(self.forms) != n:
            raise InvalidInput("cone needs n rays and n forms in dimension n")
        if self.height is None:
            self.height = _rational_height(self.forms)

    @property
    def n(self):
        return len(self.rays)

    @property
    def fields(self):
        return [r.field for r in self.rays]

    @property
    def field(self):
        """The common field of all generators (``QQ`` for rational cones), or None."""
        fs = {(f.key() if f else None) for f in self.fields}
        if fs == {None}:
            return QQ
        if len(fs) == 1:
            return next(f for f in self.fields if f)
        return None

    def form_values(self, x):
        return [L.dot(x) for L in self.forms]

    def height_of(self, x):
        """Exact value of h(x): a Fraction when h is rational, else an expression."""
        if self.height is not None:
            return sum(a * b for a, b in zip(self.height, x))
        vals = [L.dot(x) for L in self.forms]
        out = vals[0]
        for v in vals[1:]:
            out = out + v
        return out

    def height_bounds(self, x):
        lo = hi = 0
        for L in self.forms:
            a, b = L.dot_bounds(x)
            lo += a
            hi += b
        return lo, hi

    def within_height(self, x, H):
        """Exact test h(x) <= H."""
        H = Fraction(H)
        if self.height is not None:
            return sum(a * b for a, b in zip(self.height, x)) <= H
        lo, hi = self.height_bounds(x)
        scaled = H * 2**SHIFT
        if hi <= scaled:
            return True
        if lo > scaled:
            return False
        return sign_of(H - self.height_of(x)) >= 0

    def transformed(self, U):
        """The cone U(C) for a unimodular integer matrix U."""
        Uinv = intmat.inverse_unimodular(U)
        rays = [FieldVec([_lin(U[i], r.coords) for i in range(self.n)], r.field) for r in self.rays]
        forms = [FieldVec([_lin([Uinv[k][j] for k in range(self.n)], L.coords) for j in range(self.n)], L.field)
                 for L in self.forms]
        src = {"kind": "transformed", "matrix": [list(r) for r in U], "base": self.source}
        m = None
        if self.matrix is not None:
            m = intmat.matmul(intmat.matmul(U, self.matrix), Uinv)
        return ConeSpec(tuple(rays), tuple(forms), src, m)


def _lin(row, coords):
    total = 0
    for a, c in zip(row, coords):
        if a:
            total = c * a + total
    return total


def _rational_height(forms):
    """h = sum of forms, if every coordinate is rational; else None."""
    n = len(forms)
    out = []
    for j in range(n):
        parts = [L.coords[j] for L in forms]
        val = 0
        for p in parts:
            val = p + val
        if isinstance(val, (int, Fraction)):
            out.append(Fraction(val))
            continue
        if isinstance(val, NumberFieldElem):
            if not val.is_rational():
                return None
            out.append(val.as_fraction())
            continue
        a = to_algebraic(val)
        if not a.is_rational:
            return None
        out.append(a.as_fraction())
    return tuple(out)


def classify_point(c, x):
    x = tuple(int(v) for v in x)
    signs = [L.sign_dot(x) for L in c.forms]
    if all(s > 0 for s in signs):
        return Interior
    if all(s >= 0 for s in signs):
        return Boundary
    return Exterior


def in_cone(c, x):
    return all(L.sign_dot(x) >= 0 for L in c.forms)


def irrationality_check(c):
    """True iff no facet hyperplane <L_i, x> = 0 contains a nonzero lattice point."""
    return all(facet_lattice_rank(L) == c.n for L in c.forms)


def facet_lattice_rank(L):
    """Rank of the rational system obtained by expanding <L, x> = 0 over the power basis."""
    n = len(L)
    if L.field is None:
        rows = [list(L.coords)]
    else:
        d = L.field.degree
        rows = [[L.coords[j].coeffs[k] for j in range(n)] for k in range(d)]
    return intmat.rank(rows)


def cone_from_generators(generators, *, field=None, source=None):
    """Cone over vectors whose coordinates lie in one field (or Q)."""
    n = len(generators)
    rays = [FieldVec(g, field) for g in generators]
    flds = {r.field.key() if r.field else None for r in rays}
    flds.discard(None)
    if len(flds) > 1:
        raise InvalidInput("generators from different fields need an eigen cone construction")
    fld = next((r.field for r in rays if r.field), None)
    if fld is None:
        W = [[rays[j].coords[i] for j in range(n)] for i in range(n)]
        try:
            inv = intmat.inverse_rational(W)
        except ZeroDivisionError:
            raise InvalidInput("generators are linearly dependent")
        forms = [FieldVec(inv[i]) for i in range(n)]
    else:
        one = NumberFieldElem(fld, (1,))
        W = [[rays[j].coords[i] for j in range(n)] for i in range(n)]
        try:
            inv = fieldlin.inverse([[one * x if not isinstance(x, NumberFieldElem) else x for x in r] for r in W], one)
        except ZeroDivisionError:
            raise InvalidInput("generators are linearly dependent")
        forms = [FieldVec(inv[i], fld) for i in range(n)]
    src = source or {"kind": "algebraic"}
    return ConeSpec(tuple(rays), tuple(forms), src)


def rational_cone(generators):
    gens = [tuple(int(x) for x in g) for g in generators]
    if intmat.det(tuple(gens)) == 0:
        raise InvalidInput("generators are linearly dependent")
    return cone_from_generators(gens, source={"kind": "rational", "generators": [list(g) for g in gens]})


def _parse_ray(r):
    if isinstance(r, dict):
        return int(r["index"]), int(r.get("sign", 1))
    return int(r), 1


def real_eigen_list(A):
    """Real eigenvalues of A in ascending order, each with its Eigen record."""
    return [e for e in eigen_decomposition(A) if e.kind == "real"]


def cone_from_matrix(A, rays=None, generators=None):
    """Eigen cone of an integer matrix.

    ``rays`` selects real eigenvalues by position in ascending order; an entry
    may be ``{"index": i, "sign": -1}`` to take the opposite eigenray. With
    ``generators`` given instead, the cone is spanned by them directly and A
    is only recorded.
    """
    A = intmat.as_matrix(A)
    n = len(A)
    if len(A[0]) != n:
        from .errors import NonSquare
        raise NonSquare("matrix must be square")
    if generators is not None:
        c = cone_from_generators(generators)
        c.matrix = A
        c.source = {"kind": "eigen", "matrix": [list(r) for r in A], "generators": "explicit"}
        return c
    decomp = eigen_decomposition(A)
    real = [e for e in decomp if e.kind == "real"]
    if rays is None:
        bad = [i for i, e in enumerate(real) if e.multiplicity != 1 or len(e.eigenvectors) != 1]
        if bad:
            raise DefectiveEigenvalue(f"eigenvalue #{bad[0]} has no simple eigenray")
        rays = list(range(len(real)))
    sel = [_parse_ray(r) for r in rays]
    if len(sel) != n:
        raise InvalidInput(f"need {n} rays, got {len(sel)}")
    ray_vecs, form_vecs = [], []
    for idx, sgn in sel:
        if idx < 0:
            raise InvalidInput("ray index must be nonnegative")
        if idx >= len(real):
            if idx < len(decomp):
                raise ComplexEigenvalueSelected(f"eigenvalue #{idx} is not real")
            raise InvalidInput(f"ray index {idx} out of range")
        e = real[idx]
        if e.multiplicity != 1 or len(e.eigenvectors) != 1:
            raise DefectiveEigenvalue(f"eigenvalue #{idx} has no simple eigenray")
        lam = e.value
        w = e.eigenvectors[0]
        left = left_eigenspace(A, lam)[0]
        if sgn < 0:
            w = tuple(-x for x in w)
        fld = None if lam.is_rational else lam
        wv = FieldVec(w, fld)
        pair = field_dot(FieldVec(left, fld), wv)
        inv = 1 / pair if not isinstance(pair, NumberFieldElem) else pair.inverse()
        form_vecs.append(FieldVec([x * inv for x in left], fld))
        ray_vecs.append(wv)
    keys = [(i) for i, _ in sel]
    if len(set(keys)) != n:
        raise InvalidInput("rays must select distinct eigenvalues")
    src = {"kind": "eigen", "matrix": [list(r) for r in A],
           "rays": [{"index": i, "sign": s} for i, s in sel]}
    return ConeSpec(tuple(ray_vecs), tuple(form_vecs), src, A)


def _box_bounds(c, H):
    """Integer box containing the simplex conv(0, H*omega_1, ..., H*omega_n)."""
    n = c.n
    lo, hi = [0] * n, [0] * n
    H = Fraction(H)
    for r in c.rays:
        for j in range(n):
            a = Fraction(r.lo[j], 2**SHIFT) * H
            b = Fraction(r.hi[j], 2**SHIFT) * H
            lo[j] = min(lo[j], _frac_floor(a) - 1)
            hi[j] = max(hi[j], _frac_ceil(b) + 1)
    return lo, hi


def _last_coord_range(c, prefix, H):
    """Outer bound on the last coordinate t with (prefix, t) in the height-H simplex.

    Every constraint <L_i, x> >= 0 and sum <L_i, x> <= H is affine in t;
    dyadic enclosures of the coefficients give a safe integer interval.
    """
    n = c.n
    k = len(prefix)
    lo_t, hi_t = None, None
    scale = 2**SHIFT
    cons = []
    for L in c.forms:
        a_lo = sum((L.lo[j] if prefix[j] >= 0 else L.hi[j]) * prefix[j] for j in range(k))
        a_hi = sum((L.hi[j] if prefix[j] >= 0 else L.lo[j]) * prefix[j] for j in range(k))
        cons.append(((a_lo, a_hi), (L.lo[k], L.hi[k])))
    # constraint L >= 0: alpha + beta t >= 0
    lo_b, hi_b = -math.inf, math.inf
    for (al, ah), (bl, bh) in cons:
        if bl > 0:
            # t >= -alpha/beta; the weakest bound uses alpha max and beta smallest
            lo_b = max(lo_b, _bound_div(-ah, bl, bh, "lo"))
        elif bh < 0:
            hi_b = min(hi_b, _bound_div(-ah, bl, bh, "hi"))
    # height: sum alpha + t sum beta <= H
    sal = sum(a[0] for a, _ in cons)
    sbl = sum(b[0] for _, b in cons)
    sbh = sum(b[1] for _, b in cons)
    Hs = Fraction(H) * scale
    if sbl > 0:
        hi_b = min(hi_b, _bound_div(Hs - sal, sbl, sbh, "hi"))
    elif sbh < 0:
        lo_b = max(lo_b, _bound_div(Hs - sal, sbl, sbh, "lo"))
    return lo_b, hi_b


def _bound_div(num, bl, bh, side):
    """Safe integer bound for t where t*beta compares with num, beta in [bl, bh] same sign."""
    cands = [Fraction(num) / bl, Fraction(num) / bh]
    if side == "lo":
        return _frac_floor(min(cands)) - 1
    return _frac_ceil(max(cands)) + 1


def _slice_range(c, j, prefix, H):
    """Outer bound for coordinate j given prefix coordinates, n = 3, j = 1."""
    # vertices of the simplex as enclosures; intersect its edges with x_0 = a
    a = Fraction(prefix[0])
    scale = Fraction(1, 2**SHIFT)
    H = Fraction(H)
    verts = [((Fraction(0), Fraction(0)),) * c.n] + [
        tuple((r.lo[i] * scale * H, r.hi[i] * scale * H) for i in range(c.n)) for r in c.rays]
    vals = []
    for p in range(len(verts)):
        for q in range(p + 1, len(verts)):
            P0, Q0 = verts[p], verts[q]
            for (u, v) in ((P0, Q0),):
                # parameter s on [0,1] with x0 = a; enclosure by endpoint intervals
                d_lo = v[0][0] - u[0][1]
                d_hi = v[0][1] - u[0][0]
                if d_lo <= 0 <= d_hi:
                    # nearly parallel: the whole edge may qualify; take endpoint ranges
                    lo0 = min(u[0][0], v[0][0])
                    hi0 = max(u[0][1], v[0][1])
                    if lo0 <= a <= hi0:
                        vals.extend([u[j][0], u[j][1], v[j][0], v[j][1]])
                    continue
                s_cands = []
                for u0 in u[0]:
                    for v0 in v[0]:
                        if v0 != u0:
                            s_cands.append((a - u0) / (v0 - u0))
                smin, smax = max(min(s_cands), Fraction(0)), min(max(s_cands), Fraction(1))
                if smin > smax:
                    continue
                for s in (smin, smax):
                    for uj in u[j]:
                        for vj in v[j]:
                            vals.append(uj + s * (vj - uj))
    if not vals:
        return None
    return _frac_floor(min(vals)) - 1, _frac_ceil(max(vals)) + 1


def enumerate_cone_points(c, H):
    """All nonzero lattice points of the cone with h(x) <= H, sorted lexicographically."""
    H = Fraction(H)
    if H <= 0:
        raise HeightNotPositive(f"height bound {H} is not positive")
    n = c.n
    if n not in (1, 2, 3):
        raise WrongDimension("enumeration supports n in {1, 2, 3}")
    lo, hi = _box_bounds(c, H)
    cand = []

    def last(prefix):
        a, b = _last_coord_range(c, prefix, H)
        a = max(a, lo[len(prefix)])
        b = min(b, hi[len(prefix)])
        if a <= b:
            cand.append((tuple(prefix), a, b))

    if n == 1:
        last(())
    elif n == 2:
        for x0 in range(lo[0], hi[0] + 1):
            last((x0,))
    else:
        for x0 in range(lo[0], hi[0] + 1):
            rng = _slice_range(c, 1, (x0,), H)
            if rng is None:
                continue
            for x1 in range(max(rng[0], lo[1]), min(rng[1], hi[1]) + 1):
                last((x0, x1))
    out = _filter_candidates(c, cand, H)
    out.sort()
    return out


def _filter_candidates(c, cand, H):
    """Exact filter of the candidate runs (prefix, t_lo, t_hi): nonzero, in the
    cone and within height H. Dyadic enclosures decide most points at once;
    the undecided ones go through the exact predicates."""
    if not cand:
        return []
    rows = []
    for prefix, a, b in cand:
        for t in range(a, b + 1):
            rows.append(prefix + (t,))
    big = max(abs(v) for r in rows for v in r)
    coef = max(max(abs(v) for v in L.lo + L.hi) for L in c.forms)
    if big * coef * c.n * (c.n + 1) >= 2**62:
        out = []
        for x in rows:
            if any(x) and in_cone(c, x) and c.within_height(x, H):
                out.append(x)
        return out
    X = np.array(rows, dtype=np.int64)
    pos = X >= 0
    keep = np.any(X != 0, axis=1)
    unsure = np.zeros(len(X), dtype=bool)
    slo = np.zeros(len(X), dtype=np.int64)
    shi = np.zeros(len(X), dtype=np.int64)
    for L in c.forms:
        lo_c = np.array(L.lo, dtype=np.int64)
        hi_c = np.array(L.hi, dtype=np.int64)
        flo = np.where(pos, X * lo_c, X * hi_c).sum(1)
        fhi = np.where(pos, X * hi_c, X * lo_c).sum(1)
        slo += flo
        shi += fhi
        keep &= fhi >= 0
        unsure |= (flo <= 0) & (fhi >= 0)
    if c.height is not None:
        den = 1
        for h in c.height:
            den = den * h.denominator // math.gcd(den, h.denominator)
        hn = [int(h * den) for h in c.height]
        lhs = [sum(a * b for a, b in zip(hn, x)) for x in rows]
        ok_h = np.array([v * H.denominator <= H.numerator * den for v in lhs], dtype=bool)
        keep &= ok_h
    else:
        Hs = H * 2**SHIFT
        keep &= np.array([v <= Hs for v in slo.tolist()], dtype=bool)
        unsure |= np.array([l <= Hs < h for l, h in zip(slo.tolist(), shi.tolist())], dtype=bool)
    out = []
    for i in np.nonzero(keep)[0]:
        x = rows[i]
        if not unsure[i] or (in_cone(c, x) and c.within_height(x, H)):
            out.append(x)
    return out


def box_scan(c, H, bound):
    """Oracle: scan the box |x_i| <= bound and filter by exact predicates."""
    from itertools import product
    H = Fraction(H)
    return sorted(x for x in product(range(-bound, bound + 1), repeat=c.n)
                  if any(x) and classify_point(c, x) != Exterior and c.within_height(x, H))


def box_radius(c, H):
    lo, hi = _box_bounds(c, H)
    return max(max(abs(v) for v in lo), max(abs(v) for v in hi))
