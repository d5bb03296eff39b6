"""Gaussian elimination over a single exact field (Q or some Q(theta))."""

from fractions import Fraction

from .algebraic import NumberFieldElem


def _is_zero(x):
    if isinstance(x, NumberFieldElem):
        return x.is_zero()
    return x == 0


def lift(rows, field=None):
    """Convert a matrix of ints/Fractions/field elements into one field."""
    if field is None or field.is_rational:
        return [[x if isinstance(x, NumberFieldElem) and not x.field.is_rational else _to_q(x) for x in r] for r in rows]
    return [[x if isinstance(x, NumberFieldElem) and not x.field.is_rational
             else NumberFieldElem(field, (_to_q(x),)) for x in r] for r in rows]


def _to_q(x):
    if isinstance(x, NumberFieldElem):
        return x.as_fraction()
    return Fraction(x)


def rref(rows):
    a = [list(r) for r in rows]
    nr = len(a)
    nc = len(a[0]) if a else 0
    pivots = []
    i = 0
    for j in range(nc):
        p = next((k for k in range(i, nr) if not _is_zero(a[k][j])), None)
        if p is None:
            continue
        a[i], a[p] = a[p], a[i]
        inv = 1 / a[i][j] if not isinstance(a[i][j], NumberFieldElem) else a[i][j].inverse()
        a[i] = [x * inv for x in a[i]]
        for k in range(nr):
            if k != i and not _is_zero(a[k][j]):
                f = a[k][j]
                a[k] = [x - f * y for x, y in zip(a[k], a[i])]
        pivots.append(j)
        i += 1
        if i == nr:
            break
    return a, pivots


def kernel(rows, one=1):
    """Basis of the right kernel, each vector with a 1 in its free coordinate."""
    a, piv = rref(rows)
    nc = len(rows[0])
    zero = one - one
    out = []
    for free in range(nc):
        if free in piv:
            continue
        v = [zero] * nc
        v[free] = one
        for i, pj in enumerate(piv):
            v[pj] = -a[i][free]
        out.append(tuple(v))
    return out


def inverse(rows, one=1):
    n = len(rows)
    zero = one - one
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    a, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix over the field")
    return [tuple(r[n:]) for r in a]


def normalize_first(v):
    """Scale so the first nonzero coordinate equals 1."""
    for x in v:
        if not _is_zero(x):
            inv = x.inverse() if isinstance(x, NumberFieldElem) else 1 / Fraction(x)
            return tuple(y * inv for y in v)
    raise ValueError("zero vector")
