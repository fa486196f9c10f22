"""Exact computation in class-2 nilpotent Q[x]-powered groups."""

from .errors import HypothesisError, InputError, NilqxError, SearchExhausted
from .poly import EXACT, ONE, X, ZERO, Poly, PrimePoly, RingTag, binom, gcd_ext, poly_divmod
from .linalg import (Mat, hermite_nf, howell_nf, left_kernel, module_member, saturate,
                     smith_nf)
from .group import (Element, GroupPresentation, center, classify, commutator, conjugate,
                    hall_petresco_check, heisenberg, inverse, multiply, power,
                    quotient_mod_prime_power)
from .subgroup import (Subgroup, canonicalize, extract_root, is_isolated, is_normal, isolator,
                       max_root_exponent, member, subgroup_rank, torsion_subgroup)
from .separability import (conjugacy_test, conjugacy_witness, residual_witness, thm2_demo,
                           thm3_witness, thm4_witness, verify_witness)

__all__ = [
    "HypothesisError", "InputError", "NilqxError", "SearchExhausted",
    "EXACT", "ONE", "X", "ZERO", "Poly", "PrimePoly", "RingTag", "binom", "gcd_ext", "poly_divmod",
    "Mat", "hermite_nf", "howell_nf", "left_kernel", "module_member", "saturate", "smith_nf",
    "Element", "GroupPresentation", "center", "classify", "commutator", "conjugate",
    "hall_petresco_check", "heisenberg", "inverse", "multiply", "power",
    "quotient_mod_prime_power",
    "Subgroup", "canonicalize", "extract_root", "is_isolated", "is_normal", "isolator",
    "max_root_exponent", "member", "subgroup_rank", "torsion_subgroup",
    "conjugacy_test", "conjugacy_witness", "residual_witness", "thm2_demo", "thm3_witness",
    "thm4_witness", "verify_witness",
]

__version__ = "0.1.0"
