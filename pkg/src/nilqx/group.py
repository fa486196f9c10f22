"""Class-2 nilpotent Q[x]-powered groups given by polycyclic-style presentations.

An element is stored in the normal form

    g_1^{a_1} ... g_n^{a_n} c_1^{g_1} ... c_m^{g_m}

where the c_j are central and ``[g_i, g_j] = prod_k c_k^{comm(i,j)_k}`` for
i > j. Exponents are polynomials in Q[x] (or residues modulo p^i). The
central part is the module Q[x]^m / rowspan(relations).
"""

from dataclasses import dataclass, field
from typing import Optional

from .errors import InputError
from .linalg import Mat, module_member, rank, reduce_vector, row_form, smith_nf
from .poly import EXACT, ONE, ZERO, Poly, PrimePoly, RingTag, binom, factor_primes


@dataclass(frozen=True)
class GroupPresentation:
    n: int
    m: int
    comm: tuple          # ((i, j, c-vector), ...), 0-based, i > j, nonzero vectors only
    relations: Mat       # canonical row form of the central relations
    tag: RingTag = EXACT
    _table: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_table", {(i, j): c for i, j, c in self.comm})

    # -- construction ------------------------------------------------------

    @classmethod
    def build(cls, n, m, comm=None, relations=(), tag=EXACT):
        """Validate and normalise a presentation.

        ``comm`` maps 1-based pairs ``(i, j)`` with i > j to the c-exponents
        of ``[g_i, g_j]``.
        """
        if n < 0 or m < 0:
            raise InputError("generator counts must be nonnegative")
        entries = []
        for (i, j), vec in sorted((comm or {}).items()):
            if not (n >= i > j >= 1):
                raise InputError(f"commutator index ({i}, {j}) must satisfy n >= i > j >= 1")
            if len(vec) != m:
                raise InputError(f"commutator ({i}, {j}) needs {m} central exponents",
                                 code="dimension-mismatch")
            vec = tuple(tag.reduce(_poly(v)) for v in vec)
            if any(vec):
                entries.append((i - 1, j - 1, vec))
        rel_rows = [tuple(_poly(v) for v in r) for r in relations]
        for r in rel_rows:
            if len(r) != m:
                raise InputError("central relation has wrong length", code="dimension-mismatch")
        rel = row_form(Mat.from_rows(rel_rows, m, tag))
        entries = [(i, j, reduce_vector(c, rel)) for i, j, c in entries]
        entries = [(i, j, c) for i, j, c in entries if any(c)]
        return cls(n, m, tuple(entries), rel, tag)

    # -- elements ----------------------------------------------------------

    def element(self, a=None, c=None):
        a = tuple(self.tag.reduce(_poly(v)) for v in (a if a is not None else [ZERO] * self.n))
        c = tuple(_poly(v) for v in (c if c is not None else [ZERO] * self.m))
        if len(a) != self.n or len(c) != self.m:
            raise InputError(f"element needs {self.n} a-coordinates and {self.m} c-coordinates",
                             code="dimension-mismatch")
        return Element(self, a, reduce_vector(c, self.relations))

    @property
    def identity(self):
        return self.element()

    def gen(self, k):
        """Noncentral generator g_k (1-based)."""
        a = [ZERO] * self.n
        a[k - 1] = ONE
        return self.element(a)

    def central_gen(self, k):
        c = [ZERO] * self.m
        c[k - 1] = ONE
        return self.element(None, c)

    def comm_vector(self, i, j):
        """c-exponents of [g_i, g_j] for 0-based indices (any order)."""
        if i > j:
            return self._table.get((i, j), (ZERO,) * self.m)
        if i < j:
            return tuple(-v for v in self._table.get((j, i), (ZERO,) * self.m))
        return (ZERO,) * self.m

    def is_abelian(self):
        return not self.comm

    # -- the bilinear collection data --------------------------------------

    def cross(self, left, right):
        """Collection correction sum_{i>j} left_i * right_j * comm(i, j)."""
        out = [ZERO] * self.m
        for i, j, vec in self.comm:
            s = left[i] * right[j] if left[i] and right[j] else ZERO
            if s:
                for k, v in enumerate(vec):
                    if v:
                        out[k] = out[k] + s * v
        return out

    def quad(self, a):
        return self.cross(a, a)

    def bracket(self, left, right):
        """c-part of the commutator of elements with a-parts ``left`` and ``right``."""
        return [u - v for u, v in zip(self.cross(left, right), self.cross(right, left))]

    def _make(self, a, c):
        tag = self.tag
        return Element(self, tuple(tag.reduce(v) for v in a),
                       reduce_vector(c, self.relations))

    def __str__(self):
        return f"<class-2 group n={self.n} m={self.m} over {self.tag}>"


def _poly(v):
    return v if isinstance(v, Poly) else Poly((v,))


@dataclass(frozen=True)
class Element:
    group: GroupPresentation = field(repr=False)
    a: tuple
    c: tuple

    def __mul__(self, other):
        return multiply(self, other)

    def __pow__(self, lam):
        return power(self, lam)

    def __invert__(self):
        return inverse(self)

    def is_identity(self):
        return not any(self.a) and not any(self.c)

    def is_central_coords(self):
        return not any(self.a)

    def __str__(self):
        a = ", ".join(map(str, self.a))
        c = ", ".join(map(str, self.c))
        return f"({a}; {c})"


def _check_same(g, h):
    if g.group is not h.group and g.group != h.group:
        raise InputError("elements belong to different presentations",
                         code="presentation-mismatch")


def multiply(g, h):
    _check_same(g, h)
    G = g.group
    a = [u + v for u, v in zip(g.a, h.a)]
    corr = G.cross(g.a, h.a)
    c = [u + v + w for u, v, w in zip(g.c, h.c, corr)]
    return G._make(a, c)


def inverse(g):
    G = g.group
    q = G.quad(g.a)
    return G._make([-v for v in g.a], [w - v for v, w in zip(g.c, q)])


def power(g, lam):
    """g^lambda via the closed form (lambda*a; lambda*c + binom(lambda, 2)*Q(a))."""
    G = g.group
    lam = G.tag.reduce(_poly(lam))
    b2 = binom(lam, 2)
    q = G.quad(g.a)
    return G._make([lam * v for v in g.a], [lam * v + b2 * w for v, w in zip(g.c, q)])


def commutator(g, h):
    """[g, h] = g^-1 h^-1 g h."""
    _check_same(g, h)
    G = g.group
    return G._make([ZERO] * G.n, G.bracket(g.a, h.a))


def conjugate(g, x):
    """x^-1 g x."""
    return multiply(multiply(inverse(x), g), x)


def word(elements, exponents):
    """prod_k elements[k]^exponents[k], left to right."""
    if not elements:
        raise InputError("empty word needs a group; use group.identity")
    out = elements[0].group.identity
    for e, lam in zip(elements, exponents):
        if lam:
            out = multiply(out, power(e, lam))
    return out


def tau2(g, h):
    """Second Hall-Petresco word (gh)^-2 g^2 h^2."""
    gh = multiply(g, h)
    return multiply(multiply(inverse(power(gh, 2)), power(g, 2)), power(h, 2))


def hall_petresco_check(g, h, alpha):
    """Does g^alpha h^alpha == (gh)^alpha tau2(g, h)^binom(alpha, 2) hold exactly?"""
    lhs = multiply(power(g, alpha), power(h, alpha))
    rhs = multiply(power(multiply(g, h), alpha), power(tau2(g, h), binom(_poly(alpha), 2)))
    return lhs == rhs


# ---------------------------------------------------------------------------
# quotients by p^i-th powers


@dataclass(frozen=True)
class Projection:
    """Coordinate reduction G -> G/G^{p^i}."""

    source: GroupPresentation
    target: GroupPresentation

    def __call__(self, g):
        if g.group != self.source:
            raise InputError("element is not in the projection's source group",
                             code="presentation-mismatch")
        return self.target.element(g.a, g.c)


def quotient_mod_prime_power(G, pi, i):
    """Return ``(G/G^{pi^i}, projection)``.

    The kernel of coordinate reduction is exactly the set of pi^i-th powers.
    """
    if not G.tag.is_exact:
        raise InputError("quotients are taken of Exact presentations", code="wrong-ring")
    if i < 1:
        raise InputError("power must be positive")
    if isinstance(pi, Poly):
        pi = PrimePoly.of(pi)
    tag = RingTag.residue(pi, i)
    comm = {(ii + 1, jj + 1): vec for ii, jj, vec in G.comm}
    Q = GroupPresentation.build(G.n, G.m, comm, G.relations.entries, tag)
    return Q, Projection(G, Q)


def power_root_of_kernel(g, pi, i):
    """For g in the kernel of the projection mod pi^i, return y with y^{pi^i} == g."""
    G = g.group
    mod = _poly(pi.poly if isinstance(pi, PrimePoly) else pi) ** i
    u = []
    for v in g.a:
        q, r = divmod(v, mod)
        if r:
            raise InputError("element is not in the kernel", code="not-in-kernel")
        u.append(q)
    # solve mod*delta == c - binom(mod,2)*Q(u) modulo the relations
    target = [w - binom(mod, 2) * q for w, q in zip(g.c, G.quad(u))]
    gens = [[mod if r == k else ZERO for k in range(G.m)] for r in range(G.m)]
    gens += [list(r) for r in G.relations.entries]
    sol = module_member(target, Mat.from_rows(gens, G.m, EXACT))
    if sol is None:
        raise InputError("element is not in the kernel", code="not-in-kernel")
    return G.element(u, sol[:G.m])


# ---------------------------------------------------------------------------
# structure


def bracket_matrix(G):
    """Rows i: concatenation over k of the c-exponents of [g_i, g_k]."""
    return [[v for k in range(G.n) for v in G.comm_vector(i, k)] for i in range(G.n)]


def center(G):
    """Z(G) as a canonical subgroup."""
    from .subgroup import canonicalize
    from .linalg import left_kernel

    rows = bracket_matrix(G)
    width = G.n * G.m
    for k in range(G.n):
        for rel in G.relations.entries:
            row = [ZERO] * width
            row[k * G.m:(k + 1) * G.m] = rel
            rows.append(row)
    gens = [G.central_gen(k + 1) for k in range(G.m)]
    if G.n:
        if width:
            ker = left_kernel(Mat.from_rows(rows, width, G.tag))
            gens += [G.element(r[:G.n]) for r in ker.entries]
        else:
            gens += [G.gen(k + 1) for k in range(G.n)]
    return canonicalize(gens, G)


@dataclass(frozen=True)
class TypeReport:
    is_torsion_group: bool
    is_finite_type: bool
    pi_type: Optional[PrimePoly]
    exponent: Optional[tuple]    # sorted multiset of PrimePoly


def _central_annihilator_power(G):
    """Least k with pi^k killing Q[x]^m / relations (residue tag)."""
    pi = G.tag.prime.poly
    for k in range(G.tag.power + 1):
        pk = pi ** k
        if all(module_member([pk if j == r else ZERO for j in range(G.m)], G.relations) is not None
               for r in range(G.m)):
            return k
    return G.tag.power


def classify(G):
    if not G.tag.is_exact:
        pi = G.tag.prime
        k = G.tag.power if G.n else 0
        if G.m:
            k = max(k, _central_annihilator_power(G))
        return TypeReport(True, True, pi, (pi,) * k)
    if G.n:
        return TypeReport(False, False, None, None)
    if rank(G.relations) < G.m:
        return TypeReport(False, False, None, None)
    if G.m == 0:
        return TypeReport(True, True, None, ())
    factors = smith_nf(G.relations).invariant_factors
    ann = factors[-1]
    primes = factor_primes(ann)
    exponent = tuple(p for p, mult in primes for _ in range(mult))
    pi_type = primes[0][0] if len(primes) == 1 else None
    return TypeReport(True, True, pi_type, exponent)


def torsion_free_rank(G):
    if not G.tag.is_exact:
        raise InputError("torsion-free rank is defined for Exact presentations", code="wrong-ring")
    return G.n + G.m - rank(G.relations)


def is_torsion_free(G):
    """True iff Q[x]^m / relations has no torsion (the a-part is always free)."""
    if not G.tag.is_exact:
        return False if (G.n or G.m) else True
    if not G.relations.nrows:
        return True
    return all(d.degree == 0 for d in smith_nf(G.relations).invariant_factors)


# ---------------------------------------------------------------------------
# bundled presentations


def heisenberg(tag=EXACT):
    return GroupPresentation.build(2, 1, {(2, 1): [ONE]}, (), tag)


def abelian(n, tag=EXACT):
    return GroupPresentation.build(0, n, {}, (), tag)


def heisenberg_torsion(pi, k, tag=EXACT):
    """Heisenberg group with the extra central relation c^{pi^k} = 1."""
    p = pi.poly if isinstance(pi, PrimePoly) else _poly(pi)
    return GroupPresentation.build(2, 1, {(2, 1): [ONE]}, [[p ** k]], tag)


def heisenberg_ext(tag=EXACT):
    """Heisenberg group times a free cyclic factor g_3 commuting with everything."""
    return GroupPresentation.build(3, 1, {(2, 1): [ONE]}, (), tag)


def free_class2(n, tag=EXACT):
    """Free nilpotent class-2 group of rank n: one central generator per pair."""
    pairs = [(i, j) for i in range(2, n + 1) for j in range(1, i)]
    comm = {}
    for k, (i, j) in enumerate(pairs):
        vec = [ZERO] * len(pairs)
        vec[k] = ONE
        comm[(i, j)] = vec
    return GroupPresentation.build(n, len(pairs), comm, (), tag)


PRESETS = {
    "heisenberg": heisenberg,
    "heisenberg-ext": heisenberg_ext,
    "abelian": abelian,
    "heisenberg-torsion": heisenberg_torsion,
    "free-class2": free_class2,
}


def random_poly(rng, max_degree, coeff_range=3, allow_zero=True):
    while True:
        deg = rng.randint(0, max_degree)
        p = Poly(rng.randint(-coeff_range, coeff_range) for _ in range(deg + 1))
        if p or allow_zero:
            return p


def random_presentation(rng, n=3, m=2, max_degree=2):
    """Random torsion-free class-2 presentation with nonzero structure constants."""
    comm = {}
    for i in range(2, n + 1):
        for j in range(1, i):
            comm[(i, j)] = [random_poly(rng, max_degree) for _ in range(m)]
    if all(not any(v) for v in comm.values()):
        comm[(2, 1)] = [ONE] + [ZERO] * (m - 1)
    return GroupPresentation.build(n, m, comm, (), EXACT)


def random_element(rng, G, max_degree=2, coeff_range=3):
    return G.element([random_poly(rng, max_degree, coeff_range) for _ in range(G.n)],
                     [random_poly(rng, max_degree, coeff_range) for _ in range(G.m)])
