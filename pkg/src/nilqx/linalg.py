"""Exact linear algebra over Q[x] and over the residue rings Q[x]/(p^i).

Matrices are row-major tuples of :class:`~nilqx.poly.Poly`. Over Q[x] the
canonical row form is the Hermite normal form; over a residue ring it is the
Howell form, which stays canonical in the presence of zero divisors.
"""

from dataclasses import dataclass

from .errors import InputError
from .poly import (EXACT, ONE, ZERO, Poly, RingTag, gcd_ext, poly_divmod, unit_inverse,
                   valuation)


@dataclass(frozen=True)
class Mat:
    entries: tuple
    ncols: int
    tag: RingTag = EXACT

    @classmethod
    def from_rows(cls, rows, ncols=None, tag=EXACT):
        rows = [tuple(tag.reduce(_as_poly(e)) for e in r) for r in rows]
        if ncols is None:
            if not rows:
                raise InputError("ncols is required for an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise InputError("ragged matrix rows", code="dimension-mismatch")
        return cls(tuple(rows), ncols, tag)

    @classmethod
    def identity(cls, n, tag=EXACT):
        return cls(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n, tag)

    @property
    def nrows(self):
        return len(self.entries)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, idx):
        return self.entries[idx]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise InputError("shape mismatch in matrix product", code="dimension-mismatch")
        cols = list(zip(*other.entries)) if other.nrows else [()] * other.ncols
        rows = []
        for r in self.entries:
            rows.append(tuple(self.tag.reduce(_dot(r, c)) for c in cols))
        return Mat(tuple(rows), other.ncols, self.tag)

    def transpose(self):
        return Mat(tuple(zip(*self.entries)) if self.entries else (), self.nrows, self.tag)

    def det(self):
        if self.nrows != self.ncols:
            raise InputError("determinant of a non-square matrix", code="dimension-mismatch")
        return bareiss_det([list(r) for r in self.entries])

    def is_zero(self):
        return all(not e for r in self.entries for e in r)


def _as_poly(e):
    return e if isinstance(e, Poly) else Poly((e,))


def _dot(u, v):
    acc = ZERO
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def _axpy(row, q, other, tag):
    # row - q*other, reduced under tag
    return [tag.reduce(a - q * b) if b else a for a, b in zip(row, other)]


def bareiss_det(m):
    """Fraction-free determinant over Q[x]."""
    n = len(m)
    if n == 0:
        return ONE
    m = [list(r) for r in m]
    sign, prev = 1, ONE
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return ZERO
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = poly_divmod(num, prev)[0]
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


def _pivot_key(p):
    return (p.degree, p.monic().sort_key())


# ---------------------------------------------------------------------------
# Q[x]: Hermite form


def echelon(rows, ncols, track=False):
    """Hermite reduction over Q[x].

    Returns ``(H, U, pivots)`` with ``U @ A == H`` (``U`` unimodular when
    tracked), ``H`` in Hermite form with zero rows last, and ``pivots`` the
    pivot column of each nonzero row.
    """
    A = [list(r) for r in rows]
    m = len(A)
    U = [[ONE if i == j else ZERO for j in range(m)] for i in range(m)] if track else None
    pivots = []
    top = 0
    for col in range(ncols):
        if top >= m:
            break
        while True:
            cands = [r for r in range(top, m) if A[r][col]]
            if not cands:
                break
            best = min(cands, key=lambda r: (_pivot_key(A[r][col]), r))
            if best != top:
                A[top], A[best] = A[best], A[top]
                if track:
                    U[top], U[best] = U[best], U[top]
            piv = A[top][col]
            clean = True
            for r in range(top + 1, m):
                if A[r][col]:
                    q = poly_divmod(A[r][col], piv)[0]
                    A[r] = _axpy(A[r], q, A[top], EXACT)
                    if track:
                        U[r] = _axpy(U[r], q, U[top], EXACT)
                    if A[r][col]:
                        clean = False
            if clean:
                break
        if not A[top][col]:
            continue
        lc = A[top][col].lc
        if lc != 1:
            A[top] = [e / lc for e in A[top]]
            if track:
                U[top] = [e / lc for e in U[top]]
        piv = A[top][col]
        for r in range(top):
            if A[r][col]:
                q = poly_divmod(A[r][col], piv)[0]
                if q:
                    A[r] = _axpy(A[r], q, A[top], EXACT)
                    if track:
                        U[r] = _axpy(U[r], q, U[top], EXACT)
        pivots.append(col)
        top += 1
    return A, U, pivots


def _insert_row(form, pivots, v):
    """Merge row ``v`` into a reduced Hermite form in place."""
    v = list(v)
    for k, col in enumerate(pivots):
        if any(v[:col]):
            # v now leads in a non-pivot column left of col
            break
        b = v[col]
        if not b:
            continue
        a = form[k][col]
        q, r = poly_divmod(b, a)
        if not r:
            v = _axpy(v, q, form[k], EXACT)
            continue
        g, s, t = gcd_ext(a, b)
        ag, bg = a.exact_div(g), b.exact_div(g)
        form[k], v = ([s * x + t * y for x, y in zip(form[k], v)],
                      [ag * y - bg * x for x, y in zip(form[k], v)])
    lead = next((j for j, e in enumerate(v) if e), None)
    if lead is None:
        return
    pos = next((k for k, col in enumerate(pivots) if col > lead), len(pivots))
    lc = v[lead].lc
    form.insert(pos, [e / lc for e in v])
    pivots.insert(pos, lead)


def _normalise(form, pivots):
    for k, col in enumerate(pivots):
        piv = form[k][col]
        if piv.lc != 1:
            form[k] = [e / piv.lc for e in form[k]]
            piv = form[k][col]
        for r in range(k):
            if form[r][col]:
                q = poly_divmod(form[r][col], piv)[0]
                if q:
                    form[r] = _axpy(form[r], q, form[k], EXACT)


def hermite_rows(rows, ncols):
    """Hermite form by inserting one row at a time into a reduced form.

    Keeping the form reduced after every insertion bounds intermediate
    entries by the size of the output, unlike a full column sweep.
    """
    form, pivots = [], []
    for v in rows:
        if any(v):
            _insert_row(form, pivots, v)
            _normalise(form, pivots)
    return form, pivots


def hermite_nf(A):
    """Row Hermite form of ``A`` (nonzero rows only)."""
    if not A.tag.is_exact:
        raise InputError("hermite_nf needs an Exact matrix; use howell_nf", code="wrong-ring")
    form, _ = hermite_rows(A.entries, A.ncols)
    return Mat(tuple(tuple(r) for r in form), A.ncols, EXACT)


def rank(A):
    """Rank over the fraction field Q(x)."""
    if not A.tag.is_exact:
        raise InputError("rank is defined over the Exact ring only", code="wrong-ring")
    return len(hermite_rows(A.entries, A.ncols)[1])


# ---------------------------------------------------------------------------
# Q[x]: Smith form


@dataclass(frozen=True)
class SnfResult:
    U: Mat
    D: Mat
    V: Mat

    @property
    def invariant_factors(self):
        return tuple(self.D[i][i] for i in range(min(self.D.shape)) if self.D[i][i])


def _mul(X, Y, ncols):
    return [[_dot(row, [Y[k][j] for k in range(len(Y))]) for j in range(ncols)] for row in X]


def _transpose(rows, ncols):
    return [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]


def _is_diagonal_like(D):
    """At most one nonzero entry in every row and every column."""
    cols = set()
    for row in D:
        nz = [j for j, e in enumerate(row) if e]
        if len(nz) > 1 or (nz and nz[0] in cols):
            return False
        cols.update(nz)
    return True


def _smith(A):
    """Alternate row and column Hermite passes until diagonal, then fix the chain.

    Hermite forms keep off-pivot entries reduced, which avoids the coefficient
    growth of naive pivot-and-sweep elimination.
    """
    r, c = A.nrows, A.ncols
    D = [list(row) for row in A.entries]
    U = [[ONE if i == j else ZERO for j in range(r)] for i in range(r)]
    V = [[ONE if i == j else ZERO for j in range(c)] for i in range(c)]
    while not _is_diagonal_like(D):
        D, U1, _ = echelon(D, c, track=True)
        U = _mul(U1, U, r)
        if _is_diagonal_like(D):
            break
        Ht, V1, _ = echelon(_transpose(D, c), r, track=True)
        D = _transpose(Ht, r)
        V = _mul(V, _transpose(V1, c), c)
    # move the nonzero entries onto the diagonal
    pairs = sorted((i, j) for i in range(r) for j in range(c) if D[i][j])
    rows = [i for i, _ in pairs] + [i for i in range(r) if i not in {p[0] for p in pairs}]
    cols = [j for _, j in pairs] + [j for j in range(c) if j not in {p[1] for p in pairs}]
    D = [[D[i][j] for j in cols] for i in rows]
    U = [U[i] for i in rows]
    V = [[row[j] for j in cols] for row in V]
    k = len(pairs)
    # divisibility chain via diag(a, b) -> diag(g, ab/g)
    changed = True
    while changed:
        changed = False
        for i in range(k):
            for j in range(i + 1, k):
                a, b = D[i][i], D[j][j]
                if poly_divmod(b, a)[1]:
                    g, s, t = gcd_ext(a, b)
                    ag, bg = a.exact_div(g), b.exact_div(g)
                    U[i], U[j] = ([s * x + t * y for x, y in zip(U[i], U[j])],
                                  [ag * y - bg * x for x, y in zip(U[i], U[j])])
                    for row in V:
                        vi, vj = row[i], row[j]
                        row[i], row[j] = vi + vj, s * ag * vj - t * bg * vi
                    D[i][i], D[j][j] = g, a * bg
                    changed = True
    for i in range(k):
        lc = D[i][i].lc
        if lc != 1:
            D[i][i] = D[i][i] / lc
            U[i] = [e / lc for e in U[i]]
    _, Vinv, _ = echelon(V, c, track=True)
    return U, D, V, Vinv


def _freeze(rows, ncols):
    return Mat(tuple(tuple(r) for r in rows), ncols, EXACT)


def smith_nf(A):
    """Smith form: returns ``U, D, V`` with ``U @ A @ V == D``."""
    if not A.tag.is_exact:
        raise InputError("smith_nf needs an Exact matrix", code="wrong-ring")
    U, D, V, _ = _smith(A)
    return SnfResult(_freeze(U, A.nrows), _freeze(D, A.ncols), _freeze(V, A.ncols))


def smith_with_inverse(A):
    """Like :func:`smith_nf` but also returns ``V^{-1}``."""
    U, D, V, Vinv = _smith(A)
    return SnfResult(_freeze(U, A.nrows), _freeze(D, A.ncols), _freeze(V, A.ncols)), \
        _freeze(Vinv, A.ncols)


def saturate(A):
    """Canonical generators of {v : lambda*v in rowspan(A) for some lambda != 0}."""
    if not A.tag.is_exact:
        raise InputError("saturate needs an Exact matrix", code="wrong-ring")
    if not A.nrows:
        return A
    snf, Vinv = smith_with_inverse(A)
    rows = [Vinv[t] for t in range(min(A.shape)) if snf.D[t][t]]
    return hermite_nf(Mat(tuple(rows), A.ncols, EXACT))


# ---------------------------------------------------------------------------
# Q[x]/(p^i): Howell form


def _howell_echelon(A, U, ncols, tag):
    m = len(A)
    pivots = []
    top = 0
    for col in range(ncols):
        if top >= m:
            break
        cands = [r for r in range(top, m) if A[r][col]]
        if not cands:
            continue
        best = min(cands, key=lambda r: (valuation(A[r][col], tag), r))
        if best != top:
            A[top], A[best] = A[best], A[top]
            if U is not None:
                U[top], U[best] = U[best], U[top]
        e = valuation(A[top][col], tag)
        pe = tag.prime.poly ** e
        unit = poly_divmod(A[top][col], pe)[0]
        inv = unit_inverse(unit, tag)
        if inv != ONE:
            A[top] = [tag.reduce(a * inv) for a in A[top]]
            if U is not None:
                U[top] = [tag.reduce(a * inv) for a in U[top]]
        for r in range(top + 1, m):
            if A[r][col]:
                q = poly_divmod(A[r][col], pe)[0]
                A[r] = _axpy(A[r], q, A[top], tag)
                if U is not None:
                    U[r] = _axpy(U[r], q, U[top], tag)
        pivots.append(col)
        top += 1
    return pivots


def _reduce_against(v, form, pivots, tag, coeffs=None):
    """Reduce ``v`` by an echelon form; returns the remainder (and updates ``coeffs``)."""
    v = list(v)
    for k, col in enumerate(pivots):
        if not v[col]:
            continue
        q = poly_divmod(v[col], form[k][col])[0]
        if q:
            v = _axpy(v, q, form[k], tag)
            if coeffs is not None:
                coeffs[k] = tag.reduce(coeffs[k] + q)
    return v


def howell(rows, ncols, tag, track=False):
    """Howell form over a residue ring; returns ``(H, U, pivots)`` with ``U @ A == H``."""
    A = [[tag.reduce(e) for e in r] for r in rows]
    m0 = len(A)
    U = [[ONE if i == j else ZERO for j in range(m0)] for i in range(m0)] if track else None
    pi = tag.prime.poly
    while True:
        pivots = _howell_echelon(A, U, ncols, tag)
        r = len(pivots)
        A, U = A[:r], (U[:r] if track else None)
        added = False
        for k, col in enumerate(pivots):
            e = valuation(A[k][col], tag)
            if e == 0:
                continue
            mult = pi ** (tag.power - e)
            w = [tag.reduce(mult * a) for a in A[k]]
            rem = _reduce_against(w, A, pivots, tag)
            if any(rem):
                A.append(w)
                if track:
                    U.append([tag.reduce(mult * a) for a in U[k]])
                added = True
        if not added:
            break
    # reduce entries above each pivot modulo that pivot
    for k, col in enumerate(pivots):
        piv = A[k][col]
        for r in range(k):
            if A[r][col]:
                q = poly_divmod(A[r][col], piv)[0]
                if q:
                    A[r] = _axpy(A[r], q, A[k], tag)
                    if track:
                        U[r] = _axpy(U[r], q, U[k], tag)
    return A, U, pivots


def howell_nf(A):
    """Howell form of a residue-ring matrix (nonzero rows only)."""
    if A.tag.is_exact:
        raise InputError("howell_nf needs a Residue matrix", code="wrong-ring")
    H, _, _ = howell(A.entries, A.ncols, A.tag)
    return Mat(tuple(tuple(r) for r in H), A.ncols, A.tag)


def row_form(A):
    """Canonical row form for either ring."""
    return hermite_nf(A) if A.tag.is_exact else howell_nf(A)


# ---------------------------------------------------------------------------
# membership, reduction, kernels


def form_pivots(form):
    out = []
    for r in form.entries:
        out.append(next(j for j, e in enumerate(r) if e))
    return out


def reduce_vector(v, form):
    """Canonical representative of ``v`` modulo the span of a canonical row form."""
    tag = form.tag
    v = [tag.reduce(e) for e in v]
    return tuple(_reduce_against(v, form.entries, form_pivots(form), tag))


def module_member(v, gens):
    """Coefficients ``c`` with ``c @ gens == v``, or ``None`` if ``v`` is not in the row span."""
    tag = gens.tag
    if len(v) != gens.ncols:
        raise InputError("vector length does not match generator width", code="dimension-mismatch")
    v = [tag.reduce(_as_poly(e)) for e in v]
    if tag.is_exact:
        H, U, pivots = echelon(gens.entries, gens.ncols, track=True)
    else:
        H, U, pivots = howell(gens.entries, gens.ncols, tag, track=True)
    coeffs = [ZERO] * len(pivots)
    rem = _reduce_against(v, H, pivots, tag, coeffs)
    if any(rem):
        return None
    out = [ZERO] * gens.nrows
    for k, c in enumerate(coeffs):
        if c:
            for j, u in enumerate(U[k]):
                if u:
                    out[j] = tag.reduce(out[j] + c * u)
    return tuple(out)


def left_kernel(A):
    """Canonical generators of {y : y @ A == 0} over the matrix's ring."""
    tag = A.tag
    if tag.is_exact:
        _, U, pivots = echelon(A.entries, A.ncols, track=True)
        return hermite_nf(Mat(tuple(tuple(r) for r in U[len(pivots):]), A.nrows, EXACT)) \
            if A.nrows > len(pivots) else Mat((), A.nrows, EXACT)
    # lift: y @ A is zero mod p^i  <=>  (y, z) kills [A; p^i I] over Q[x]
    mod = tag.modulus
    lifted = [list(r) for r in A.entries]
    lifted += [[mod if i == j else ZERO for j in range(A.ncols)] for i in range(A.ncols)]
    ker = left_kernel(Mat(tuple(tuple(r) for r in lifted), A.ncols, EXACT))
    rows = [r[:A.nrows] for r in ker.entries]
    if not rows:
        return Mat((), A.nrows, tag)
    return howell_nf(Mat.from_rows(rows, A.nrows, tag))
