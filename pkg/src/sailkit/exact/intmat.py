"""Integer and rational matrix utilities.

Matrices are tuples of row tuples. Integer entries stay Python ints, so every
result is exact regardless of size.
"""

import math
from fractions import Fraction

from ..errors import NonSquare


def as_matrix(rows):
    m = tuple(tuple(int(x) for x in r) for r in rows)
    if not m or not m[0]:
        raise ValueError("matrix must be nonempty")
    if any(len(r) != len(m[0]) for r in m):
        raise ValueError("matrix rows must have equal length")
    return m


def shape(m):
    return len(m), len(m[0])


def _square(m):
    r, c = shape(m)
    if r != c:
        raise NonSquare(f"matrix is {r}x{c}")
    return r


def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m):
    return tuple(zip(*m))


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in bt) for r in a)


def matvec(a, v):
    return tuple(sum(x * y for x, y in zip(r, v)) for r in a)


def matpow(a, k):
    n = _square(a)
    if k < 0:
        a = inverse_unimodular(a)
        k = -k
    out = identity(n)
    base = a
    while k:
        if k & 1:
            out = matmul(out, base)
        base = matmul(base, base)
        k >>= 1
    return out


def det(m):
    """Determinant by fraction-free Bareiss elimination."""
    n = _square(m)
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det_any(m):
    """Determinant of a square matrix with entries in any exact ring (Laplace/elimination-free)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(n):
        if isinstance(m[0][j], int) and m[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in m[1:]]
        term = m[0][j] * det_any(minor)
        total = term + total if j % 2 == 0 else -term + total
    return total


def char_poly(m):
    """Coefficients (low to high) of det(xE - m), computed by Berkowitz's algorithm."""
    n = _square(m)
    a = [list(r) for r in m]
    # vect holds the char poly of the leading principal submatrix, high to low
    vect = [1]
    for r in range(n):
        if r == 0:
            vect = [1, -a[0][0]]
            continue
        R = a[r][:r]            # row r, columns < r
        C = [a[i][r] for i in range(r)]  # column r, rows < r
        Asub = [row[:r] for row in a[:r]]
        # Toeplitz column: 1, -a_rr, -R C, -R A C, ...
        col = [1, -a[r][r]]
        v = C[:]
        for _ in range(r):
            col.append(-sum(x * y for x, y in zip(R, v)))
            v = [sum(Asub[i][j] * v[j] for j in range(r)) for i in range(r)]
        # multiply the (r+2) x (r+1) lower-triangular Toeplitz matrix by vect
        new = []
        for i in range(r + 2):
            s = 0
            for j in range(min(i, r) + 1):
                if j < len(vect):
                    s += col[i - j] * vect[j]
            new.append(s)
        vect = new
    return tuple(reversed(vect))


def rank(m):
    return len(_row_echelon([[Fraction(x) for x in r] for r in m])[1])


def _row_echelon(a):
    a = [r[:] for r in a]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots = []
    i = 0
    for j in range(cols):
        p = next((k for k in range(i, rows) if a[k][j] != 0), None)
        if p is None:
            continue
        a[i], a[p] = a[p], a[i]
        pv = a[i][j]
        a[i] = [x / pv for x in a[i]]
        for k in range(rows):
            if k != i and a[k][j] != 0:
                f = a[k][j]
                a[k] = [x - f * y for x, y in zip(a[k], a[i])]
        pivots.append(j)
        i += 1
        if i == rows:
            break
    return a, pivots


def solve_rational(a, b):
    """Unique solution of a x = b over Q, or None if singular or inconsistent."""
    cols = len(a[0])
    aug = [[Fraction(x) for x in r] + [Fraction(bi)] for r, bi in zip(a, b)]
    red, piv = _row_echelon(aug)
    if piv != list(range(cols)):
        return None
    return tuple(red[i][-1] for i in range(cols))


def inverse_rational(m):
    n = _square(m)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    red, piv = _row_echelon(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(r[n:]) for r in red)


def inverse_unimodular(m):
    inv = inverse_rational(m)
    if any(x.denominator != 1 for r in inv for x in r):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in r) for r in inv)


def hnf(m):
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U * M = H``. Pivots are
    positive, entries above a pivot lie in ``[0, pivot)``, zero rows come last.
    """
    rows, cols = len(m), len(m[0])
    a = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    piv_row = 0
    pivots = []
    for j in range(cols):
        if piv_row == rows:
            break
        # gcd-combine all entries of column j at or below piv_row into piv_row
        for i in range(piv_row + 1, rows):
            if a[i][j] == 0:
                continue
            x, y = a[piv_row][j], a[i][j]
            g, s, t = _xgcd(x, y)
            p, q = x // g, y // g
            ra, rb = a[piv_row], a[i]
            a[piv_row] = [s * e + t * f for e, f in zip(ra, rb)]
            a[i] = [-q * e + p * f for e, f in zip(ra, rb)]
            ua, ub = u[piv_row], u[i]
            u[piv_row] = [s * e + t * f for e, f in zip(ua, ub)]
            u[i] = [-q * e + p * f for e, f in zip(ua, ub)]
        if a[piv_row][j] == 0:
            continue
        if a[piv_row][j] < 0:
            a[piv_row] = [-e for e in a[piv_row]]
            u[piv_row] = [-e for e in u[piv_row]]
        pv = a[piv_row][j]
        for i in range(piv_row):
            f = a[i][j] // pv
            if f:
                a[i] = [e - f * g for e, g in zip(a[i], a[piv_row])]
                u[i] = [e - f * g for e, g in zip(u[i], u[piv_row])]
        pivots.append(j)
        piv_row += 1
    return tuple(map(tuple, a)), tuple(map(tuple, u))


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf_basis(gens):
    """Nonzero rows of the HNF: a canonical basis of the generated lattice."""
    if not gens:
        return ()
    h, _ = hnf(gens)
    return tuple(r for r in h if any(r))


def sublattice_index(gens, n=None):
    """Index in Z^n of the group generated by ``gens``; ``math.inf`` if rank < n."""
    gens = [tuple(int(x) for x in g) for g in gens]
    if n is None:
        if not gens:
            raise ValueError("dimension unknown for empty generator list")
        n = len(gens[0])
    basis = hnf_basis(gens) if gens else ()
    if len(basis) < n:
        return math.inf
    out = 1
    for i, r in enumerate(basis):
        out *= next(x for x in r if x)
    return abs(out)


def integer_kernel(m):
    """Basis (HNF-canonical) of {x in Z^n : m x = 0}."""
    cols = len(m[0])
    h, u = hnf(transpose(m))
    ker = [u[i] for i in range(cols) if not any(h[i])]
    return hnf_basis(ker) if ker else ()


def saturation(vectors, n):
    """Basis of Z^n intersected with the real span of ``vectors``."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return ()
    perp = integer_kernel(vectors)
    if not perp:
        return tuple(identity(n))
    return integer_kernel(perp)


def primitive_vector(v):
    g = math.gcd(*v)
    if g == 0:
        raise ValueError("zero vector")
    return tuple(x // g for x in v)


def clear_denominators(v):
    """Scale a rational vector to a primitive integer vector (same direction)."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    return primitive_vector([int(Fraction(x) * den) for x in v])


def random_unimodular(rng, n, steps=None, bound=2):
    """Random element of GL_n(Z) as a product of elementary moves and sign flips."""
    m = [list(r) for r in identity(n)]
    steps = steps if steps is not None else 3 * n
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if n > 1:
            c = rng.choice([k for k in range(-bound, bound + 1) if k])
            m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    if n > 1:
        rng.shuffle(m)
    if rng.random() < 0.5:
        m[0] = [-a for a in m[0]]
    return tuple(map(tuple, m))
