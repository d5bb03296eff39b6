"""Exact real algebraic numbers and certified sign determination.

``AlgebraicReal`` is a root of an irreducible integer polynomial together
with an isolating rational interval. ``NumberFieldElem`` is a polynomial in
one such root, reduced modulo its minimal polynomial. Arithmetic between
elements of different fields builds an ``Expr`` tree.

Signs are decided by interval refinement; a zero is only ever reported after
symbolic certification (minimal-polynomial divisibility for a single field,
an annihilating polynomial built from resultants for mixed expressions).
"""

from fractions import Fraction

import sympy

from . import polys as P

_Z, _T = sympy.symbols("z t")


# --- interval helpers -------------------------------------------------------

def iv_add(a, b):
    return a[0] + b[0], a[1] + b[1]


def iv_neg(a):
    return -a[1], -a[0]


def iv_mul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(ps), max(ps)


def iv_scale(a, c):
    return (a[0] * c, a[1] * c) if c >= 0 else (a[1] * c, a[0] * c)


def iv_horner(p, x):
    acc = (Fraction(0), Fraction(0))
    for c in reversed(p):
        acc = iv_mul(acc, x)
        acc = (acc[0] + c, acc[1] + c)
    return acc


def iv_sign(a):
    if a[0] > 0:
        return 1
    if a[1] < 0:
        return -1
    if a[0] == a[1] == 0:
        return 0
    return None


class AlgebraicReal:
    """A real root of an irreducible primitive integer polynomial.

    The isolating interval is refined in place on demand; the represented
    value never changes, so objects behave as immutable values.
    """

    __slots__ = ("min_poly", "_iv", "_index")

    def __init__(self, min_poly, lo, hi, *, check=True):
        p = P.primitive(min_poly)
        lo, hi = Fraction(lo), Fraction(hi)
        if P.degree(p) < 1:
            raise ValueError("minimal polynomial must have degree >= 1")
        if check:
            if not P.is_irreducible(p):
                raise ValueError(f"polynomial {p} is not irreducible")
        if P.degree(p) == 1:
            r = Fraction(-p[0], p[1])
            if not lo <= r <= hi:
                raise ValueError("interval does not contain the rational root")
            lo = hi = r
        else:
            if not lo < hi:
                raise ValueError("isolating interval needs lo < hi")
            if P.evaluate(p, lo) == 0 or P.evaluate(p, hi) == 0 or P.count_roots(p, lo, hi) != 1:
                raise ValueError("interval does not isolate exactly one root")
        self.min_poly = p
        self._iv = (lo, hi)
        self._index = None

    @classmethod
    def rational(cls, r):
        r = Fraction(r)
        return cls((-r.numerator, r.denominator), r, r, check=False)

    @classmethod
    def from_polynomial(cls, p, lo, hi):
        """Root of an arbitrary integer polynomial ``p`` isolated in (lo, hi).

        The minimal polynomial is found by factoring ``p``.
        """
        lo, hi = Fraction(lo), Fraction(hi)
        _, facs = P.factor(p)
        for f, _ in facs:
            if P.degree(f) == 1:
                r = Fraction(-f[0], f[1])
                if lo < r < hi or lo == r == hi:
                    return cls.rational(r)
                continue
            if P.count_roots(f, lo, hi) == 1 and P.evaluate(f, hi) != 0:
                return cls(f, lo, hi, check=False)
        raise ValueError("interval does not isolate a root of the polynomial")

    @classmethod
    def roots_of(cls, p):
        """All distinct real roots of an integer polynomial, sorted ascending."""
        _, facs = P.factor(p)
        out = []
        for f, _ in facs:
            if P.degree(f) == 1:
                out.append(cls.rational(Fraction(-f[0], f[1])))
                continue
            for lo, hi in P.real_roots(f):
                out.append(cls(f, lo, hi, check=False))
        out.sort(key=_SortKey)
        return out

    @property
    def degree(self):
        return len(self.min_poly) - 1

    @property
    def is_rational(self):
        return self.degree == 1

    def as_fraction(self):
        if not self.is_rational:
            raise ValueError("not rational")
        return self._iv[0]

    @property
    def interval(self):
        return self._iv

    def refine(self, width):
        lo, hi = self._iv
        if hi - lo > width:
            self._iv = P.refine_root(self.min_poly, lo, hi, Fraction(width))
        return self._iv

    def root_index(self):
        """Position of this root among the real roots of its minimal polynomial."""
        if self._index is None:
            lo, _ = self._iv
            if self.is_rational:
                self._index = 0
            else:
                b = P.root_bound(self.min_poly)
                self._index = P.count_roots(self.min_poly, -b, lo)
        return self._index

    def key(self):
        return (self.min_poly, self.root_index())

    def __eq__(self, other):
        if isinstance(other, AlgebraicReal):
            return self.key() == other.key()
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self._iv[0] == other
        return NotImplemented

    def __hash__(self):
        return hash(self.key())

    def __float__(self):
        lo, hi = self.refine(Fraction(1, 2**60))
        return float((lo + hi) / 2)

    def __repr__(self):
        lo, hi = self._iv
        return f"AlgebraicReal({list(self.min_poly)}, {lo}, {hi})"

    def elem(self):
        """This number as an element of its own field."""
        if self.is_rational:
            return NumberFieldElem(QQ, (self._iv[0],))
        return NumberFieldElem(self, (0, 1) + (0,) * (self.degree - 2))

    def sign(self):
        return sign_of(self.elem())


class _SortKey:
    """Exact ordering key for AlgebraicReal values."""

    __slots__ = ("a",)

    def __init__(self, a):
        self.a = a

    def __lt__(self, other):
        return compare(self.a.elem(), other.a.elem()) < 0

    def __eq__(self, other):
        return self.a == other.a


QQ = AlgebraicReal.rational(0)


def _same_field(f, g):
    return f is g or (f.min_poly == g.min_poly and f.key() == g.key())


class NumberFieldElem:
    """``c0 + c1*theta + ... + c_{d-1}*theta^{d-1}`` with rational ``c_i``."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        d = field.degree
        c = [Fraction(x) for x in coeffs]
        if len(c) > d:
            red = P.rem(P.trim(c), field.min_poly)
            c = [Fraction(x) for x in red]
        c = c + [Fraction(0)] * (d - len(c))
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def const(cls, field, r):
        return cls(field, (r,))

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return NumberFieldElem(self.field, (other,))
        if isinstance(other, NumberFieldElem):
            if _same_field(self.field, other.field):
                return other
            if other.field.is_rational or other.is_rational():
                return NumberFieldElem(self.field, (other.as_fraction(),))
            if self.field.is_rational or self.is_rational():
                return None
            return None
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, NumberFieldElem) and self.is_rational():
                return other + self.as_fraction()
            return Expr("add", self, other) if isinstance(other, (NumberFieldElem, Expr)) else NotImplemented
        return NumberFieldElem(self.field, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElem(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NumberFieldElem(self.field, [a * other for a in self.coeffs])
        o = self._coerce(other)
        if o is None:
            if isinstance(other, NumberFieldElem) and self.is_rational():
                return other * self.as_fraction()
            return Expr("mul", self, other) if isinstance(other, (NumberFieldElem, Expr)) else NotImplemented
        prod = P.mul(self.coeffs, o.coeffs)
        return NumberFieldElem(self.field, P.rem(prod, self.field.min_poly) if prod else ())

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        g, s, _ = P.xgcd_poly(P.trim(self.coeffs), self.field.min_poly)
        if P.degree(g) != 0:
            raise ArithmeticError("element not invertible; minimal polynomial reducible?")
        return NumberFieldElem(self.field, s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return NumberFieldElem(self.field, [a / Fraction(other) for a in self.coeffs])
        o = self._coerce(other)
        if o is None:
            raise TypeError("division across different number fields is not supported")
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        out = NumberFieldElem(self.field, (1,))
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.as_fraction() == other
        if isinstance(other, NumberFieldElem):
            o = self._coerce(other)
            if o is None:
                return sign_of(self - other) == 0
            return self.coeffs == o.coeffs
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.as_fraction())
        return hash((self.field.key(), self.coeffs))

    def enclosure(self, width):
        """Rational interval of width <= ``width`` containing the value."""
        if self.field.is_rational or self.is_rational():
            v = P.evaluate(self.coeffs, self.field.interval[0]) if self.field.is_rational else self.coeffs[0]
            return (v, v)
        w = Fraction(width)
        tw = w
        while True:
            iv = iv_horner(self.coeffs, self.field.refine(tw))
            if iv[1] - iv[0] <= w:
                return iv
            tw /= 256

    def annihilator(self):
        """Squarefree integer polynomial vanishing at this value."""
        if self.is_rational():
            r = self.as_fraction()
            return (-r.numerator, r.denominator)
        m = P.to_sympy(self.field.min_poly, _T).as_expr()
        q = P.to_sympy(self.coeffs, _T).as_expr()
        res = sympy.resultant(m, _Z - q, _T)
        return P.squarefree(P.from_sympy(sympy.Poly(res, _Z)))

    def sign(self):
        return sign_of(self)

    def __float__(self):
        lo, hi = self.enclosure(Fraction(1, 2**60))
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"NumberFieldElem({list(self.field.min_poly)}#{self.field.root_index()}, {[str(c) for c in self.coeffs]})"


class Expr:
    """Mixed-field expression tree with ``add``, ``mul`` and ``neg`` nodes."""

    __slots__ = ("op", "args")

    def __init__(self, op, *args):
        self.op = op
        self.args = args

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self
            other = NumberFieldElem(QQ, (other,))
        return Expr("add", self, other)

    __radd__ = __add__

    def __neg__(self):
        return Expr("neg", self)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NumberFieldElem(QQ, (other,))
        return Expr("mul", self, other)

    __rmul__ = __mul__

    def enclosure(self, width):
        return _enclose(self, Fraction(width))

    def annihilator(self):
        return _annihilator(self)

    def sign(self):
        return sign_of(self)

    def __float__(self):
        lo, hi = self.enclosure(Fraction(1, 2**60))
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"Expr({self.op}, {', '.join(map(repr, self.args))})"


def _leaf_count(e):
    if isinstance(e, Expr):
        return sum(_leaf_count(a) for a in e.args)
    return 1


def _enclose(e, width):
    if isinstance(e, NumberFieldElem):
        return e.enclosure(width)
    if isinstance(e, AlgebraicReal):
        return e.elem().enclosure(width)
    if isinstance(e, (int, Fraction)):
        return (Fraction(e), Fraction(e))
    # crude but sufficient width budgeting: shrink children until the result fits
    child = width / (2 * _leaf_count(e))
    while True:
        ivs = [_enclose(a, child) for a in e.args]
        if e.op == "add":
            iv = iv_add(*ivs)
        elif e.op == "mul":
            iv = iv_mul(*ivs)
        else:
            iv = iv_neg(ivs[0])
        if iv[1] - iv[0] <= width:
            return iv
        mag = max(abs(x) for v in ivs for x in v) + 1
        child = min(child / 4, width / (4 * mag * _leaf_count(e)))


def _strip_zero_root(poly):
    poly = P.trim(poly)
    while poly and poly[0] == 0:
        poly = poly[1:]
    return poly


def _annihilator(e):
    if isinstance(e, (NumberFieldElem,)):
        return e.annihilator()
    if isinstance(e, AlgebraicReal):
        return e.min_poly
    if isinstance(e, (int, Fraction)):
        r = Fraction(e)
        return (-r.numerator, r.denominator)
    if e.op == "neg":
        a = _annihilator(e.args[0])
        return P.primitive(tuple(c * (-1) ** i for i, c in enumerate(a)))
    a, b = e.args
    pa, pb = _annihilator(a), _annihilator(b)
    A = P.to_sympy(pa, _T).as_expr()
    if e.op == "add":
        B = P.to_sympy(pb, _T).as_expr().subs(_T, _Z - _T)
        res = sympy.resultant(A, B, _T)
    else:
        sa, sb = sign_of(a), sign_of(b)
        if sa == 0 or sb == 0:
            return (0, 1)
        pa, pb = _strip_zero_root(pa), _strip_zero_root(pb)
        A = P.to_sympy(pa, _T).as_expr()
        db = P.degree(pb)
        B = sympy.expand(_T**db * P.to_sympy(pb, _T).as_expr().subs(_T, _Z / _T))
        res = sympy.resultant(A, B, _T)
    poly = P.from_sympy(sympy.Poly(sympy.expand(res), _Z))
    return P.squarefree(poly)


def sign_of(x):
    """Exact sign (-1, 0, +1) of a rational, algebraic or mixed expression."""
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    if isinstance(x, AlgebraicReal):
        x = x.elem()
    if isinstance(x, NumberFieldElem):
        if x.is_zero():
            return 0
        if x.is_rational():
            c = x.coeffs[0]
            return (c > 0) - (c < 0)
        w = Fraction(1, 2**16)
        while True:
            s = iv_sign(x.enclosure(w))
            if s:
                return s
            w /= 2**16
    # mixed expression: cheap refinement first, then certification
    w = Fraction(1, 2**16)
    for _ in range(4):
        s = iv_sign(_enclose(x, w))
        if s is not None:
            return s
        w /= 2**32
    ann = _annihilator(x)
    if P.evaluate(ann, 0) != 0:
        while True:
            s = iv_sign(_enclose(x, w))
            if s is not None:
                return s
            w /= 2**32
    seq = P.sturm_sequence(ann)
    while True:
        lo, hi = _enclose(x, w)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if lo == hi == 0:
            return 0
        # the enclosure contains 0, a root of ann; it is the value iff it is
        # the only root of ann in the enclosure
        a, b = lo - w, hi
        if P.evaluate(ann, a) != 0 and P.evaluate(ann, b) != 0 and P.count_roots(ann, a, b, seq) == 1:
            return 0
        w /= 2**32


def compare(a, b):
    """Exact sign of ``a - b``."""
    return sign_of(a - b)


def to_algebraic(x):
    """Convert an exact value (rational, field element, expression) to AlgebraicReal."""
    if isinstance(x, AlgebraicReal):
        return x
    if isinstance(x, (int, Fraction)):
        return AlgebraicReal.rational(x)
    if isinstance(x, NumberFieldElem) and x.is_rational():
        return AlgebraicReal.rational(x.as_fraction())
    ann = _annihilator(x)
    _, facs = P.factor(ann)
    w = Fraction(1, 2**8)
    while True:
        lo, hi = _enclose(x, w)
        cands = []
        for f, _ in facs:
            if P.degree(f) == 1:
                r = Fraction(-f[0], f[1])
                if lo <= r <= hi:
                    cands.append(("r", r))
            else:
                a, b = lo - w, hi + w
                if P.evaluate(f, a) != 0 and P.evaluate(f, b) != 0:
                    k = P.count_roots(f, a, b)
                    if k >= 1:
                        cands.append(("a", f, a, b, k))
                else:
                    cands.append(("?",))
        if len(cands) == 1:
            c = cands[0]
            if c[0] == "r":
                return AlgebraicReal.rational(c[1])
            if c[0] == "a" and c[4] == 1:
                return AlgebraicReal(c[1], c[2], c[3], check=False)
        w /= 2**16
