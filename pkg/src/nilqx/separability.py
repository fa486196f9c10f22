"""Conjugacy decisions and constructive separation by prime-power quotients G/G^{p^k}."""

from dataclasses import dataclass
from functools import lru_cache

from .errors import HypothesisError, InputError, SearchExhausted
from .group import (Element, commutator, is_torsion_free, multiply, power,
                    quotient_mod_prime_power)
from .linalg import Mat, module_member, smith_nf
from .poly import PrimePoly, X, factor_primes
from .subgroup import canonicalize, isolator, is_isolated, max_root_exponent, member

DEFAULT_MAX_POWER = 8


def default_pool():
    return [PrimePoly.of(X), PrimePoly.of(X - 1), PrimePoly.of(X + 1), PrimePoly.of(X ** 2 + 1)]


def _as_prime(pi):
    if isinstance(pi, PrimePoly):
        return pi
    return PrimePoly.of(pi)


def _associate(p, q):
    return p.poly == q.poly


@dataclass(frozen=True)
class Check:
    """One recorded verification.

    ``power == 0`` means the check runs in G itself; otherwise in G/G^{prime^power}.
    ``op`` is one of ``conjugate``, ``coset-member``, ``is-identity``, ``member``.
    """

    op: str
    power: int
    args: tuple
    result: bool


@dataclass(frozen=True)
class SeparationWitness:
    kind: str
    prime: PrimePoly
    power: int
    transcript: tuple


@dataclass(frozen=True)
class Thm2Demo:
    alpha_prime: PrimePoly
    n: int
    u: Element
    v: Element
    z1: Element
    pi: PrimePoly
    checked_powers: tuple
    transcript: tuple


# ---------------------------------------------------------------------------
# conjugacy


def _conjugacy_module(g):
    """Rows spanning {[g, x].c} together with the presentation's relations."""
    G = g.group
    rows = [G.bracket(g.a, G.gen(k + 1).a) for k in range(G.n)]
    rows += [list(r) for r in G.relations.entries]
    return Mat.from_rows(rows, G.m, G.tag)


def conjugacy_test(g, h):
    """g ~ h iff equal a-parts and h.c - g.c lies in the commutator image of g plus relations."""
    if g.group is not h.group and g.group != h.group:
        raise InputError("elements belong to different presentations",
                         code="presentation-mismatch")
    if g.a != h.a:
        return False
    diff = [v - u for u, v in zip(g.c, h.c)]
    if not any(diff):
        return True
    return module_member(diff, _conjugacy_module(g)) is not None


@lru_cache(maxsize=None)
def _quotient(G, pi, k):
    return quotient_mod_prime_power(G, pi, k)


def conjugate_in_quotient(g, h, pi, k):
    _, proj = _quotient(g.group, pi, k)
    return conjugacy_test(proj(g), proj(h))


def _relevant_primes(g, h):
    """Degree <= 3 prime factors of the invariant factors attached to the pair."""
    found = []
    polys = []
    if g.a != h.a:
        polys += [u - v for u, v in zip(g.a, h.a) if u != v]
    else:
        M = _conjugacy_module(g)
        if M.nrows:
            polys += list(smith_nf(M).invariant_factors)
        polys += [v - u for u, v in zip(g.c, h.c) if u != v]
    for p in polys:
        if p.degree < 1:
            continue
        try:
            fac = factor_primes(p)
        except InputError:
            fac = []
        for q, _ in fac:
            if q not in found:
                found.append(q)
    return found


def conjugacy_witness(g, h, prime_pool=None, max_power=DEFAULT_MAX_POWER):
    """Find (p, k) with the images of g, h non-conjugate in G/G^{p^k}.

    Candidates are ranked by pool order and then by k ascending; the first
    success is returned. The default pool is extended by the degree <= 3
    prime factors relevant to the pair; an explicit pool is used as given.
    """
    G = g.group
    if not G.tag.is_exact:
        raise InputError("witness searches run on Exact presentations", code="wrong-ring")
    if conjugacy_test(g, h):
        raise HypothesisError("the elements are conjugate", code="inputs-conjugate")
    if prime_pool is not None:
        pool = [_as_prime(p) for p in prime_pool]
    else:
        pool = default_pool()
        for q in _relevant_primes(g, h):
            if q not in pool:
                pool.append(q)
    for pi in pool:
        for k in range(1, max_power + 1):
            if not conjugate_in_quotient(g, h, pi, k):
                transcript = [Check("conjugate", 0, (g, h), False)]
                transcript += [Check("conjugate", j, (g, h), True) for j in range(1, k)]
                transcript.append(Check("conjugate", k, (g, h), False))
                return SeparationWitness("Thm1", pi, k, tuple(transcript))
    raise SearchExhausted(f"no prime-power quotient with power <= {max_power} over "
                          f"{len(pool)} primes separates the pair")


# ---------------------------------------------------------------------------
# subgroup separation


def _image_subgroup(H, pi, k):
    Q, proj = _quotient(H.group, pi, k)
    return canonicalize([proj(x) for x in H.generators()], Q), proj


def power_coset_member(g, pi, i, H):
    """Decide g in G^{pi^i} H via membership of images in G/G^{pi^i}."""
    if not H.group.tag.is_exact:
        raise InputError("power_coset_member runs on Exact presentations", code="wrong-ring")
    pi = _as_prime(pi)
    image, proj = _image_subgroup(H, pi, i)
    return member(proj(g), image)


def _first_separating_power(g, H, pi, max_power):
    for i in range(1, max_power + 1):
        if not power_coset_member(g, pi, i, H):
            return i
    return None


def _coset_transcript(g, H, i):
    checks = [Check("member", 0, (g, H), False)]
    checks += [Check("coset-member", j, (g, H), True) for j in range(1, i)]
    checks.append(Check("coset-member", i, (g, H), False))
    return tuple(checks)


def thm3_witness(g, H, pi, max_power=DEFAULT_MAX_POWER):
    """Least i with g outside G^{pi^i} H, for isolated H in a torsion-free group."""
    G = H.group
    if not G.tag.is_exact:
        raise InputError("thm3_witness runs on Exact presentations", code="wrong-ring")
    pi = _as_prime(pi)
    if not is_torsion_free(G):
        raise HypothesisError("the group has Q[x]-torsion", code="not-torsion-free")
    if member(g, H):
        raise HypothesisError("g lies in H", code="g-in-H")
    if not is_isolated(H):
        raise HypothesisError("H is not Q[x]-isolated", code="not-isolated")
    i = _first_separating_power(g, H, pi, max_power)
    if i is None:
        raise SearchExhausted(f"g stays in G^(pi^i)H for all i <= {max_power}",
                              code="bound-exceeded")
    return SeparationWitness("Thm3", pi, i, _coset_transcript(g, H, i))


def thm4_witness(g, H, pi, max_power=DEFAULT_MAX_POWER):
    """Separate g from H when no nonzero power of g lies in H."""
    G = H.group
    if not G.tag.is_exact:
        raise InputError("thm4_witness runs on Exact presentations", code="wrong-ring")
    pi = _as_prime(pi)
    iso = isolator(H)
    if member(g, iso):
        raise HypothesisError("some nonzero power of g lies in H", code="hypothesis-violated")
    j = _first_separating_power(g, iso, pi, max_power)
    if j is None:
        raise SearchExhausted(f"g stays in G^(pi^i)I(H) for all i <= {max_power}",
                              code="bound-exceeded")
    if power_coset_member(g, pi, j, H):
        raise AssertionError("G^(pi^j)H is not contained in G^(pi^j)I(H)")
    transcript = _coset_transcript(g, iso, j) + (Check("coset-member", j, (g, H), False),)
    return SeparationWitness("Thm4", pi, j, transcript)


def residual_witness(g, pi, max_power=DEFAULT_MAX_POWER):
    """Least i with g not the identity in G/G^{pi^i}."""
    G = g.group
    if not G.tag.is_exact:
        raise InputError("residual_witness runs on Exact presentations", code="wrong-ring")
    if g.is_identity():
        raise InputError("the identity survives in no quotient", code="identity-input")
    pi = _as_prime(pi)
    for i in range(1, max_power + 1):
        _, proj = _quotient(G, pi, i)
        if not proj(g).is_identity():
            checks = tuple(Check("is-identity", j, (g,), True) for j in range(1, i))
            return SeparationWitness("Residual", pi, i,
                                     checks + (Check("is-identity", i, (g,), False),))
    raise SearchExhausted(f"g dies in every quotient up to power {max_power}",
                          code="bound-exceeded")


# ---------------------------------------------------------------------------
# the non-separable pair for non-abelian groups


def thm2_demo(G, pi, z2, h, max_power=5, prime_pool=None):
    """Exhibit u, v non-conjugate in G but conjugate in every G/G^{pi^m}, m <= max_power."""
    if not G.tag.is_exact:
        raise InputError("thm2_demo runs on Exact presentations", code="wrong-ring")
    pi = _as_prime(pi)
    if G.is_abelian():
        raise HypothesisError("the group is abelian", code="abelian-input")
    if not is_torsion_free(G):
        raise HypothesisError("the group has Q[x]-torsion", code="not-torsion-free")
    z1 = commutator(z2, h)
    if z1.is_identity():
        raise HypothesisError("[z2, h] is trivial", code="z1-trivial")
    pool = [_as_prime(p) for p in (prime_pool if prime_pool is not None else default_pool())]
    alpha = next((p for p in pool if not _associate(p, pi)), None)
    if alpha is None:
        raise InputError("the prime pool has no prime distinct from pi", code="pool-exhausted")
    n = max_root_exponent(z1, alpha) + 1
    u = power(z2, alpha.poly ** n)
    v = multiply(u, z1)
    transcript = [Check("conjugate", 0, (u, v), conjugacy_test(u, v))]
    for m in range(1, max_power + 1):
        transcript.append(Check("conjugate", m, (u, v), conjugate_in_quotient(u, v, pi, m)))
    if transcript[0].result or not all(c.result for c in transcript[1:]):
        raise AssertionError("the demonstration pair failed its own verification")
    return Thm2Demo(alpha, n, u, v, z1, pi, tuple(range(1, max_power + 1)), tuple(transcript))


# ---------------------------------------------------------------------------
# transcript replay


def replay_check(check, prime):
    """Recompute one transcript entry and return its verdict."""
    if check.op == "conjugate":
        g, h = check.args
        if check.power == 0:
            return conjugacy_test(g, h)
        return conjugate_in_quotient(g, h, prime, check.power)
    if check.op == "coset-member":
        g, H = check.args
        return power_coset_member(g, prime, check.power, H)
    if check.op == "member":
        g, H = check.args
        return member(g, H)
    if check.op == "is-identity":
        (g,) = check.args
        _, proj = _quotient(g.group, prime, check.power)
        return proj(g).is_identity()
    raise InputError(f"unknown transcript operation {check.op!r}")


def verify_witness(w):
    """Re-run every transcript check; True iff all recorded verdicts reproduce."""
    prime = w.pi if isinstance(w, Thm2Demo) else w.prime
    return all(replay_check(c, prime) == c.result for c in w.transcript)
