"""Spectral classification of integer operators.

Covers the conditions (P1) and (P2), hyperbolicity, cone invariance, the
reduction of an affine operator to a linear one, the modulus filtration of
R^n, a growth probe for single Jordan cells and the list of exceptional
unimodular forms in dimension three.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .errors import ConeNotInvariant, CoordinateZero, NonIntegralFixedData, P1Violated, PreconditionViolated
from .exact import fieldlin, intmat
from .exact import polys as P
from .exact.algebraic import AlgebraicReal, NumberFieldElem, _SortKey, sign_of, to_algebraic
from .exact.eigen import eigen_decomposition

NOT_UNIT_MODULUS = "NotUnitModulus"


def _modulus_sq(e):
    if e.kind == "complex":
        return e.modulus_sq
    x = e.value.elem()
    return to_algebraic(x * x)


def check_properties(A):
    """Flags P1, P2, distinct eigenvalues and membership in the classes A0, A1.

    Membership needs det A = 1. The ``*_linear`` variants drop (P1), which is
    not needed when the operator has no translation part.
    """
    A = intmat.as_matrix(A)
    cp = intmat.char_poly(A)
    d = intmat.det(A)
    eig = eigen_decomposition(A)
    p1 = P.evaluate(cp, 1) != 0
    p2 = True
    for i, e in enumerate(eig):
        if e.kind != "complex":
            continue
        for j, g in enumerate(eig):
            if j != i and _modulus_sq(g) == e.modulus_sq:
                p2 = False
    distinct = P.is_squarefree(cp)
    a0 = d == 1 and p1 and p2
    return {
        "P1": p1,
        "P2": p2,
        "distinct": distinct,
        "det": d,
        "in_A0": a0,
        "in_A1": a0 and distinct,
        "in_A0_linear": d == 1 and p2,
        "in_A1_linear": d == 1 and p2 and distinct,
    }


def is_hyperbolic(A):
    """det A = 1, char poly irreducible over Q, every root real and positive."""
    A = intmat.as_matrix(A)
    if intmat.det(A) != 1:
        return False
    cp = intmat.char_poly(A)
    if not P.is_irreducible(cp):
        return False
    deg = P.degree(cp)
    return len(P.real_roots(cp)) == deg and P.count_positive_roots(cp) == deg


def preserves_cone(A, c):
    """True iff A permutes the generator rays of ``c`` up to positive scaling."""
    from .sail import ray_action
    act = ray_action(intmat.as_matrix(A), c)
    return all(m is not None for m in act) and sorted(act) == list(range(c.n))


def linearize_affine(m, samples=8, seed=0):
    """The integer fixed-point shift b with (E - A) b = a, and the linear part A.

    Then m(b + x) = b + A x for every x, which is checked on random points.
    """
    A = m.linear
    a = m.translation
    n = len(A)
    if P.evaluate(intmat.char_poly(A), 1) == 0:
        raise P1Violated("1 is an eigenvalue; E - A is singular")
    EA = [[(1 if i == j else 0) - A[i][j] for j in range(n)] for i in range(n)]
    b = intmat.solve_rational(EA, list(a))
    if any(Fraction(x).denominator != 1 for x in b):
        raise NonIntegralFixedData(f"(E - A)^-1 a = {[str(x) for x in b]} is not integral")
    b = tuple(int(x) for x in b)
    rng = random.Random(seed)
    for _ in range(samples):
        x = tuple(rng.randint(-50, 50) for _ in range(n))
        lhs = m(tuple(p + q for p, q in zip(b, x)))
        rhs = tuple(p + q for p, q in zip(b, intmat.matvec(A, x)))
        assert lhs == rhs
    return b, A


# --- spectral filtration -----------------------------------------------------

_MIXED = object()


def _common_field(*vals):
    """A single field containing all the given AlgebraicReals (None for Q), or _MIXED."""
    fld = None
    for v in vals:
        if v.is_rational:
            continue
        if fld is None:
            fld = v
        elif fld != v:
            return _MIXED
    return fld


def _as_elem(v, fld):
    if v.is_rational:
        return v.as_fraction() if fld is None else NumberFieldElem(fld, (v.as_fraction(),))
    return v.elem()


def _matpoly_kernel(A, factor, power, fld):
    """ker q(A)^power with q given by coefficients in ``fld`` (low to high)."""
    n = len(A)
    one = Fraction(1) if fld is None else NumberFieldElem(fld, (1,))
    zero = one - one
    lifted = [[one * A[i][j] for j in range(n)] for i in range(n)]

    def mm(X, Y):
        return [[sum((X[i][k] * Y[k][j] for k in range(n)), zero) for j in range(n)] for i in range(n)]

    Q = [[zero] * n for _ in range(n)]
    Pk = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for c in factor:
        Q = [[Q[i][j] + c * Pk[i][j] for j in range(n)] for i in range(n)]
        Pk = mm(Pk, lifted)
    M = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for _ in range(power):
        M = mm(M, Q)
    return fieldlin.kernel(M, one)


def _record_factor(e):
    """Local factor of an eigen record: (x - lam) or (x^2 - t x + ms), with its field."""
    if e.kind == "real":
        fld = _common_field(e.value)
        return (-_as_elem(e.value, fld), 1), fld
    fld = _common_field(e.trace, e.modulus_sq)
    if fld is _MIXED:
        return None, None
    return (_as_elem(e.modulus_sq, fld), -_as_elem(e.trace, fld), 1), fld


@dataclass
class SpectralFiltration:
    """Graduation R^n = M_1 + ... + M_k by eigenvalue modulus, with partial sums."""

    matrix: tuple
    moduli: list                      # exact squared moduli, strictly increasing
    groups: list                      # eigen records per modulus
    dims: list
    bases: list = field(default_factory=list)   # per M_i, a list of vectors or None

    @property
    def k(self):
        return len(self.moduli)

    def L(self, i):
        """Dimension and basis of M_1 + ... + M_i (1-based)."""
        return self._sum(range(i))

    def Lprime(self, i):
        """Dimension and basis of M_i + ... + M_k (1-based)."""
        return self._sum(range(i - 1, self.k))

    def _sum(self, idx):
        idx = list(idx)
        dim = sum(self.dims[j] for j in idx)
        if any(self.bases[j] is None for j in idx):
            return dim, None
        return dim, [v for j in idx for v in self.bases[j]]


def spectral_filtration(A):
    A = intmat.as_matrix(A)
    eig = eigen_decomposition(A)
    keyed = [(_modulus_sq(e), e) for e in eig]
    moduli = []
    for m, _ in keyed:
        if m not in moduli:
            moduli.append(m)
    moduli.sort(key=_SortKey)
    groups = [[e for m2, e in keyed if m2 == m] for m in moduli]
    dims, bases = [], []
    for grp in groups:
        dims.append(sum(e.multiplicity * (2 if e.kind == "complex" else 1) for e in grp))
        basis = []
        for e in grp:
            q, fld = _record_factor(e)
            if q is None:
                basis = None
                break
            basis.extend(_matpoly_kernel(A, q, e.multiplicity, fld))
        bases.append(basis)
    return SpectralFiltration(A, moduli, groups, dims, bases)


def _apply_factor(A, v, q):
    """q(A) v for a vector of exact entries and a polynomial q (low to high)."""
    n = len(A)
    out = [0] * n
    power = list(v)
    for c in q:
        out = [o + c * p for o, p in zip(out, power)]
        power = [sum((power[j] * A[i][j] for j in range(n) if A[i][j]), 0) for i in range(n)]
    return out


def in_subspace(filtration, i, vec):
    """Exact test that ``vec`` lies in M_i (0-based index)."""
    w = list(vec)
    for e in filtration.groups[i]:
        if e.kind == "real":
            q = (-e.value.elem() if not e.value.is_rational else -e.value.as_fraction(), 1)
        else:
            tr = e.trace.as_fraction() if e.trace.is_rational else e.trace.elem()
            ms = e.modulus_sq.as_fraction() if e.modulus_sq.is_rational else e.modulus_sq.elem()
            q = (ms, -tr, 1)
        for _ in range(e.multiplicity):
            w = _apply_factor(filtration.matrix, w, q)
    return all(sign_of(x) == 0 for x in w)


def edge_count_in_subspaces(filtration, c):
    """Number of cone generators in each M_i, and whether it equals dim M_i throughout."""
    if not preserves_cone(filtration.matrix, c):
        raise ConeNotInvariant("the operator does not preserve the cone")
    counts = [sum(1 for r in c.rays if in_subspace(filtration, i, r.coords)) for i in range(filtration.k)]
    return {"counts": counts, "dims": list(filtration.dims), "matches": counts == list(filtration.dims)}


# --- growth probe ------------------------------------------------------------

def _jordan_eigenvalue(A):
    n = len(A)
    lam = Fraction(A[0][0])
    for i in range(n):
        for j in range(n):
            want = lam if i == j else (1 if j == i + 1 else 0)
            if Fraction(A[i][j]) != want:
                raise PreconditionViolated("matrix is not a single upper Jordan cell")
    if lam == 0:
        raise PreconditionViolated("the cell must be invertible")
    return lam


def jordan_growth_probe(A, h, e, m_range, burn_in=None):
    """Exact values <A^m h, e_i> and their ratios to lam^m m^(n-i).

    ``e`` is the 1-based index i of the basis vector. The ratios tend to
    h_n lam^(i-n) / (n-i)!; ``ok`` reports that every ratio from ``burn_in``
    on lies within a factor 2 of that limit.
    """
    A = [[Fraction(x) for x in r] for r in A]
    n = len(A)
    lam = _jordan_eigenvalue(A)
    h = [Fraction(x) for x in h]
    if any(x == 0 for x in h):
        raise CoordinateZero("h must have nonzero coordinates")
    if not 1 <= e <= n:
        raise PreconditionViolated(f"basis index {e} out of range 1..{n}")
    i = e - 1
    ms = [m for m in m_range if m >= 1]
    values, ratios = [], []
    for m in ms:
        # (lam E + N)^m h, coordinate i: sum_j C(m, j-i) lam^(m-j+i) h_j
        v = sum(comb(m, j - i) * lam ** (m - j + i) * h[j] for j in range(i, n) if j - i <= m)
        values.append(v)
        ratios.append(v / (lam ** m * Fraction(m) ** (n - e)))
    limit = h[n - 1] * lam ** (e - n) / factorial(n - e)
    start = ms[0] if burn_in is None else burn_in
    tail = [abs(r) for m, r in zip(ms, ratios) if m >= start]
    ok = bool(tail) and all(abs(limit) / 2 <= r <= 2 * abs(limit) for r in tail)
    return {"eigenvalue": lam, "ms": ms, "values": values, "ratios": ratios, "limit": limit,
            "min": min(tail) if tail else None, "max": max(tail) if tail else None, "ok": ok}


# --- exceptional unimodular forms in dimension three ------------------------

@dataclass
class FormClassification:
    form: object            # 1..7, or NOT_UNIT_MODULUS
    params: dict
    char_poly: tuple

    def to_json(self):
        return {"form": str(self.form), "params": {k: str(v) for k, v in self.params.items()},
                "char_poly": [str(c) for c in self.char_poly]}


def _shift(A, lam):
    return [[A[i][j] - (lam if i == j else 0) for j in range(3)] for i in range(3)]


_ROTATION_ANGLE = {2: Fraction(0), 1: Fraction(1, 3), 0: Fraction(1, 2), -1: Fraction(2, 3), -2: Fraction(1)}


def classify_unimodular_3d(A):
    """Label A among the seven Jordan forms with an eigenvalue of modulus one.

    Forms 1-6 have det 1, form 7 (a reflection times a rotation) has det -1.
    Rotation data is the exact trace ``2 cos phi`` and ``phi / pi``.
    """
    A = intmat.as_matrix(A)
    if len(A) != 3:
        raise PreconditionViolated("classification is for 3x3 matrices")
    cp = intmat.char_poly(A)
    d = intmat.det(A)
    r1 = intmat.rank(_shift(A, 1))
    rm1 = intmat.rank(_shift(A, -1))
    if d == 1 and P.evaluate(cp, 1) == 0:
        q, rest = P.divmod_poly(cp, (-1, 1))        # cp = (x - 1) q, q = x^2 - t x + 1
        t = -q[1]
        if t == 2:
            return FormClassification({0: 1, 1: 2, 2: 3}[r1], {}, cp)
        if t == -2:
            return FormClassification(4 if rm1 == 2 else 5, {"lambda": -1} if rm1 == 1 else {}, cp)
        if abs(t) < 2:
            return FormClassification(6, {"two_cos_phi": t, "phi_over_pi": _ROTATION_ANGLE[t]}, cp)
        lam = max(P.real_roots(q), key=lambda iv: iv[0])
        return FormClassification(5, {"lambda_plus_inverse": t,
                                      "lambda": AlgebraicReal(P.primitive(q), *lam, check=False)}, cp)
    if d == -1 and P.evaluate(cp, -1) == 0:
        q, _ = P.divmod_poly(cp, (1, 1))            # cp = (x + 1) q
        t = -q[1]
        if q[0] == 1 and abs(t) <= 2:
            # the rotation block must be diagonalizable for t = +-2
            if (t == 2 and r1 == 1) or (t == -2 and rm1 == 0) or abs(t) < 2:
                return FormClassification(7, {"two_cos_phi": t, "phi_over_pi": _ROTATION_ANGLE[t]}, cp)
    return FormClassification(NOT_UNIT_MODULUS, {}, cp)
