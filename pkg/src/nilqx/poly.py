"""Exact arithmetic in Q[x] and its residue rings Q[x]/(p^i).

Coefficients are exact rationals in lowest terms: ``gmpy2.mpq`` when gmpy2
is installed, :class:`fractions.Fraction` otherwise.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, isqrt, lcm
from typing import Optional

from .errors import InputError, PolyDivisionByZero

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - pure Python fallback
    Rat = Fraction

_SCALARS = (int, Fraction, Rat)


class Poly:
    """Immutable univariate polynomial over Q, coefficients in ascending degree."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs=()):
        cs = [c if type(c) is Rat else Rat(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def monomial(cls, k, c=1):
        return cls((0,) * k + (c,))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Rat(0)

    def __bool__(self):
        return bool(self.coeffs)

    def is_constant(self):
        return len(self.coeffs) <= 1

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, _SCALARS):
            return self.coeffs == Poly((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- ring operations ---------------------------------------------------

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            if not other:
                return ZERO
            return Poly(c * other for c in self.coeffs)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [Rat(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise InputError("polynomial exponent must be a nonnegative integer")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        # scalar division only; polynomial quotients go through divmod
        if isinstance(other, Poly):
            if other.degree != 0:
                return NotImplemented
            other = other.coeffs[0]
        if not other:
            raise PolyDivisionByZero("division by zero")
        return Poly(c / other for c in self.coeffs)

    def __divmod__(self, other):
        return poly_divmod(self, _coerce(other))

    def __floordiv__(self, other):
        return poly_divmod(self, _coerce(other))[0]

    def __mod__(self, other):
        return poly_divmod(self, _coerce(other))[1]

    def exact_div(self, other):
        """Quotient ``self / other``; ``None`` if ``other`` does not divide ``self``."""
        q, r = poly_divmod(self, other)
        return None if r else q

    def divides(self, other):
        return not poly_divmod(other, self)[1]

    def monic(self):
        if not self.coeffs:
            return self
        return self / self.lc

    def __call__(self, value):
        acc = Rat(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def derivative(self):
        return Poly(k * c for k, c in enumerate(self.coeffs) if k)

    def sort_key(self):
        """Order by degree, then lexicographically from the leading coefficient."""
        return (self.degree, tuple(reversed(self.coeffs)))


def _coerce(value):
    if isinstance(value, Poly):
        return value
    if isinstance(value, _SCALARS):
        return Poly((value,))
    return None


ZERO = Poly()
ONE = Poly((1,))
X = Poly.x()


def poly_divmod(a, b):
    """Euclidean division: ``a = q*b + r`` with ``deg r < deg b``."""
    if not b:
        raise PolyDivisionByZero("polynomial division by zero")
    if a.degree < b.degree:
        return ZERO, a
    rem = list(a.coeffs)
    db = b.degree
    inv_lc = 1 / b.lc
    bc = b.coeffs
    q = [Rat(0)] * (a.degree - db + 1)
    for k in range(a.degree - db, -1, -1):
        coef = rem[k + db] * inv_lc
        if coef:
            q[k] = coef
            for j in range(db + 1):
                rem[k + j] -= coef * bc[j]
    return Poly(q), Poly(rem[:db])


def gcd_ext(a, b):
    """Extended Euclid. Returns monic ``g`` with ``g = s*a + t*b``."""
    if not a and not b:
        raise InputError("gcd of two zero polynomials", code="both-zero")
    # Monic remainders keep coefficients small; t is recovered at the end.
    r0, r1 = a, b
    s0, s1 = ONE, ZERO
    while r1:
        lc = r1.lc
        r1, s1 = r1 / lc, s1 / lc
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    lc = r0.lc
    g, s = r0 / lc, s0 / lc
    t = (g - s * a).exact_div(b) if b else ZERO
    return g, s, t


def poly_gcd(a, b):
    if not a and not b:
        return ZERO
    return gcd_ext(a, b)[0]


def binom(alpha, k):
    """Generalised binomial coefficient alpha(alpha-1)...(alpha-k+1)/k!."""
    if k < 0:
        raise InputError("binomial index must be nonnegative")
    num = ONE
    for j in range(k):
        num = num * (alpha - j)
    return num / factorial(k)


def _int_coeffs(p):
    den = lcm(*(c.denominator for c in p.coeffs))
    return [int(c * den) for c in p.coeffs]


def _divisors(n):
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(p):
    """All rational roots of ``p`` via the rational-root theorem."""
    if not p:
        raise InputError("zero polynomial has every root")
    cs = _int_coeffs(p)
    roots = set()
    while cs and cs[0] == 0:
        roots.add(Rat(0))
        cs = cs[1:]
    if len(cs) <= 1:
        return sorted(roots)
    trimmed = Poly(cs)
    for num in _divisors(cs[0]):
        for den in _divisors(cs[-1]):
            for cand in (Rat(num, den), Rat(-num, den)):
                if cand not in roots and not trimmed(cand):
                    roots.add(cand)
    return sorted(roots)


def is_prime_poly(p):
    """Irreducibility over Q, decided exactly for degree at most 3."""
    if p.degree < 1:
        return False
    if p.degree == 1:
        return True
    if p.degree > 3:
        raise InputError(f"irreducibility of degree {p.degree} is not decided",
                         code="unsupported-degree")
    return not rational_roots(p)


@dataclass(frozen=True)
class PrimePoly:
    poly: Poly
    certified: str = "proved"

    def __post_init__(self):
        if self.certified not in ("proved", "assumed"):
            raise InputError(f"unknown certification {self.certified!r}")
        if self.poly.degree < 1 or self.poly.lc != 1:
            raise InputError("a prime must be monic of positive degree", code="not-prime")
        if self.certified == "proved" and self.poly.degree > 3:
            raise InputError("proved primes have degree at most 3", code="unsupported-degree")

    @classmethod
    def of(cls, p, assume=False):
        """Normalise ``p`` to monic and certify it (or mark it assumed)."""
        p = p.monic()
        if p.degree > 3:
            if not assume:
                raise InputError(f"cannot certify degree-{p.degree} prime; pass assume=True",
                                 code="unsupported-degree")
            return cls(p, "assumed")
        if not is_prime_poly(p):
            raise InputError(f"{p} is not irreducible over Q", code="not-prime")
        return cls(p, "proved")

    def __str__(self):
        return str(self.poly)


@dataclass(frozen=True)
class RingTag:
    """Either Q[x] itself (``prime is None``) or the residue ring Q[x]/(prime^power)."""

    prime: Optional[PrimePoly] = None
    power: int = 0

    def __post_init__(self):
        if self.prime is not None and self.power < 1:
            raise InputError("residue power must be at least 1")
        if self.prime is None and self.power:
            raise InputError("exact ring tag carries no power")

    @classmethod
    def residue(cls, prime, power):
        return cls(prime, power)

    @property
    def kind(self):
        return "Exact" if self.prime is None else "Residue"

    @property
    def is_exact(self):
        return self.prime is None

    @property
    def modulus(self):
        if self.prime is None:
            return None
        mod = self.__dict__.get("_modulus")
        if mod is None:
            mod = self.prime.poly ** self.power
            object.__setattr__(self, "_modulus", mod)
        return mod

    def reduce(self, a):
        if self.prime is None:
            return a
        mod = self.modulus
        if a.degree < mod.degree:
            return a
        return poly_divmod(a, mod)[1]

    def __str__(self):
        if self.prime is None:
            return "Q[x]"
        return f"Q[x]/({self.prime})^{self.power}"


EXACT = RingTag()


def residue_reduce(a, tag):
    """Canonical remainder of ``a`` modulo prime^power."""
    if tag.is_exact:
        raise InputError("residue_reduce needs a Residue ring tag", code="not-residue")
    return tag.reduce(a)


def valuation(a, tag):
    """Largest e <= power with prime^e dividing ``a`` in the residue ring."""
    pi = tag.prime.poly
    a = tag.reduce(a)
    e = 0
    while a and e < tag.power:
        q, r = poly_divmod(a, pi)
        if r:
            break
        a, e = q, e + 1
    return tag.power if not a else e


def unit_inverse(u, tag):
    """Inverse of a unit of the residue ring."""
    g, s, _ = gcd_ext(tag.reduce(u), tag.modulus)
    if g != ONE:
        raise InputError(f"{u} is not a unit in {tag}", code="not-unit")
    return tag.reduce(s)


def factor_primes(p):
    """Monic irreducible factors of ``p`` with multiplicity, sorted by (degree, coefficients).

    Factors of degree 4 or more cannot be certified as primes and raise
    ``exponent-unfactorable``.
    """
    if not p:
        raise InputError("cannot factor the zero polynomial")
    if p.degree == 0:
        return []
    import sympy

    xs = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * xs**k
               for k, c in enumerate(p.coeffs))
    _, factors = sympy.factor_list(sympy.Poly(expr, xs, domain="QQ"))
    out = []
    for fac, mult in factors:
        coeffs = [Rat(int(c.p), int(c.q)) for c in reversed(fac.all_coeffs())]
        f = Poly(coeffs).monic()
        if f.degree > 3:
            raise InputError(f"irreducible factor {f} has degree {f.degree} > 3",
                             code="exponent-unfactorable")
        out.append((PrimePoly(f, "proved"), mult))
    out.sort(key=lambda pm: pm[0].poly.sort_key())
    return out
