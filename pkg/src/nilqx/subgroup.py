"""Finitely generated Q[x]-subgroups of class-2 presentations.

A subgroup H is stored canonically as

* ``arows``: elements whose a-parts are the Hermite (or Howell) basis of the
  projection of H onto the a-coordinates, with c-parts reduced modulo
  ``crows``;
* ``crows``: the canonical row form of H's central part, taken as a full
  preimage in Q[x]^m (so it always contains the presentation's relations).

Two generating sets give the same subgroup iff their canonical forms are equal.
"""

from dataclasses import dataclass
from typing import Optional

from .errors import InputError
from .group import Element, inverse, multiply, power, word
from .linalg import (Mat, echelon, howell, left_kernel, module_member, rank, reduce_vector,
                     row_form, saturate, smith_with_inverse)
from .poly import EXACT, ZERO, Poly, PrimePoly, Rat, binom, poly_divmod, poly_gcd

ISOLATOR_MAX_ROUNDS = 64


@dataclass(frozen=True)
class Subgroup:
    group: object
    arows: tuple
    crows: Mat

    def generators(self):
        """Canonical generators: the arows followed by one central element per crow."""
        G = self.group
        return list(self.arows) + [G.element(None, r) for r in self.crows]

    def __contains__(self, g):
        return member(g, self)

    def __str__(self):
        a = ", ".join(map(str, self.arows))
        c = ", ".join("(" + ", ".join(map(str, r)) + ")" for r in self.crows)
        return f"<arows [{a}] crows [{c}]>"


@dataclass(frozen=True)
class RootResult:
    root: Optional[Element]

    def __bool__(self):
        return self.root is not None


def _group_of(gens, group):
    if group is None:
        if not gens:
            raise InputError("an empty generating set needs an explicit group")
        group = gens[0].group
    for g in gens:
        if g.group is not group and g.group != group:
            raise InputError("generators belong to different presentations",
                             code="presentation-mismatch")
    return group


def canonicalize(gens, group=None):
    """Canonical form of the Q[x]-subgroup generated by ``gens``."""
    gens = list(gens)
    G = _group_of(gens, group)
    tag = G.tag
    A = [g.a for g in gens]
    if tag.is_exact:
        H, U, piv = echelon(A, G.n, track=True)
        r = len(piv)
        basis, T, syz = H[:r], U[:r], U[r:]
    else:
        basis, T, _ = howell(A, G.n, tag, track=True)
        syz = left_kernel(Mat.from_rows(A, G.n, tag)).entries if gens else ()
    lifts = [word(gens, t) for t in T]
    central = [list(word(gens, z).c) for z in syz]
    for k in range(len(basis)):
        for l in range(k + 1, len(basis)):
            central.append(G.bracket(basis[k], basis[l]))
    central += [list(r) for r in G.relations.entries]
    crows = row_form(Mat.from_rows(central, G.m, tag))
    arows = tuple(G.element(h.a, reduce_vector(h.c, crows)) for h in lifts)
    return Subgroup(G, arows, crows)


def whole_group(G):
    return canonicalize([G.gen(k + 1) for k in range(G.n)] +
                        [G.central_gen(k + 1) for k in range(G.m)], G)


def trivial_subgroup(G):
    return canonicalize([], G)


def _amat(H):
    G = H.group
    return Mat.from_rows([h.a for h in H.arows], G.n, G.tag)


def member(g, H):
    """Decide g in H."""
    G = H.group
    if g.group is not G and g.group != G:
        raise InputError("element and subgroup live in different presentations",
                         code="presentation-mismatch")
    if H.arows:
        coeffs = module_member(g.a, _amat(H))
        if coeffs is None:
            return False
        residual = multiply(g, inverse(word(H.arows, coeffs)))
    else:
        if any(g.a):
            return False
        residual = g
    return not any(reduce_vector(residual.c, H.crows))


def is_normal(H):
    """Is H closed under conjugation by every generator of the ambient group?"""
    G = H.group
    for h in H.arows:
        for k in range(G.n):
            x = G.gen(k + 1)
            if not member(multiply(multiply(inverse(x), h), x), H):
                return False
    return True


def _require_exact(G, what):
    if not G.tag.is_exact:
        raise InputError(f"{what} is defined for Exact presentations", code="wrong-ring")


def extract_root(g, lam):
    """The lambda-th root of g, if one exists (unique when the group is torsion-free)."""
    G = g.group
    _require_exact(G, "root extraction")
    lam = lam if isinstance(lam, Poly) else Poly((lam,))
    if not lam:
        raise InputError("cannot extract a zero-th root", code="zero-lambda")
    beta = []
    for v in g.a:
        q, r = poly_divmod(v, lam)
        if r:
            return RootResult(None)
        beta.append(q)
    b2 = binom(lam, 2)
    target = [w - b2 * q for w, q in zip(g.c, G.quad(beta))]
    rows = [[lam if j == k else ZERO for j in range(G.m)] for k in range(G.m)]
    rows += [list(r) for r in G.relations.entries]
    sol = module_member(target, Mat.from_rows(rows, G.m, EXACT)) if G.m else ()
    if sol is None:
        return RootResult(None)
    root = G.element(beta, sol[:G.m])
    assert power(root, lam) == g
    return RootResult(root)


def max_root_exponent(g, pi):
    """Largest n such that g has a pi^n-th root."""
    if g.is_identity():
        raise InputError("the identity has roots of every order", code="identity-input")
    p = pi.poly if isinstance(pi, PrimePoly) else pi
    bound = ISOLATOR_MAX_ROUNDS + sum(max(v.degree, 0) for v in g.a + g.c)
    cur, n = g, 0
    while True:
        res = extract_root(cur, p)
        if not res:
            return n
        cur, n = res.root, n + 1
        if n > bound:
            raise InputError(f"root chain longer than {bound}; is the group torsion-free?",
                             code="iteration-limit")


# ---------------------------------------------------------------------------
# isolators


def _vecmat(v, rows, width):
    out = [ZERO] * width
    for c, r in zip(v, rows):
        if c:
            for j, e in enumerate(r):
                if e:
                    out[j] = out[j] + c * e
    return out


def _adapted_basis(C, m):
    """Basis of Q[x]^m whose first rho rows span the saturated module C.

    Returns ``(V, Vinv, rho)``: coordinates of v are ``v @ V`` and a
    coordinate vector y maps back to ``y @ Vinv``.
    """
    if not C.nrows:
        ident = Mat.identity(m)
        return ident.entries, ident.entries, 0
    snf, Vinv = smith_with_inverse(C)
    return snf.V.entries, Vinv.entries, len(snf.invariant_factors)


def _isolator_step(H):
    G = H.group
    csat = saturate(H.crows) if H.crows.nrows else H.crows
    central = [G.element(None, r) for r in csat]
    if not H.arows:
        return canonicalize(central, G)
    V, Vinv, rho = _adapted_basis(csat, G.m)

    def complement(v):
        return _vecmat(v, V, G.m)[rho:]

    def embed(p):
        return _vecmat([ZERO] * rho + list(p), Vinv, G.m)

    half = Rat(1, 2)
    B = [h.a for h in H.arows]
    E = saturate(Mat.from_rows(B, G.n)).entries
    r = len(B)
    T = Mat.from_rows([module_member(b, Mat(E, G.n)) for b in B], r)
    W = [complement([w - half * q for w, q in zip(h.c, G.quad(h.a))]) for h in H.arows]
    snf, VTinv = smith_with_inverse(T)
    Y = [_vecmat(u, W, G.m - rho) for u in snf.U.entries]
    gens = []
    for i in range(r):
        d = snf.D[i][i]
        content = ZERO
        for y in Y[i]:
            content = poly_gcd(content, y)
        delta = poly_gcd(d, content) if content else d.monic()
        e = poly_divmod(d, delta)[0]
        alpha = _vecmat([e * v for v in VTinv[i]], E, G.n)
        fw = [poly_divmod(y, delta)[0] for y in Y[i]]
        pq = complement([half * q for q in G.quad(alpha)])
        gamma = embed([u + v for u, v in zip(fw, pq)])
        gens.append(G.element(alpha, gamma))
    return canonicalize(gens + central, G)


def isolator(H, max_rounds=ISOLATOR_MAX_ROUNDS):
    """I(H, G) = {g : g^lambda in H for some lambda != 0}, iterated to a fixed point."""
    _require_exact(H.group, "the isolator")
    cur = H
    for _ in range(max_rounds):
        nxt = _isolator_step(cur)
        if nxt == cur:
            return cur
        cur = nxt
    raise InputError(f"isolator did not stabilise within {max_rounds} rounds",
                     code="iteration-limit")


def is_isolated(H):
    return isolator(H) == H


def torsion_subgroup(G):
    _require_exact(G, "the torsion subgroup")
    return isolator(trivial_subgroup(G))


def subgroup_rank(H):
    """Torsion-free rank: a-basis size plus the rank of the central part modulo relations."""
    G = H.group
    _require_exact(G, "subgroup rank")
    return len(H.arows) + rank(H.crows) - rank(G.relations)


def power_into(g, H, candidates):
    """First lambda in ``candidates`` with g^lambda in H, else None."""
    for lam in candidates:
        if lam and member(power(g, lam), H):
            return lam
    return None
