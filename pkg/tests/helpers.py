"""Shared rings, groups and algebras for the test modules."""

from autopoietic.based_algebra import (AmalgamCategory, FiniteGroup, FinitePoset, amalgam_algebra,
                                       group_ring, poset_algebra)
from autopoietic.coeff import CoefficientRing

Z = CoefficientRing.integers()
Q = CoefficientRing.rationals()
Z2 = CoefficientRing.mod(2)
Z3 = CoefficientRing.mod(3)

C2 = FiniteGroup.cyclic(2)
C3 = FiniteGroup.cyclic(3)
KLEIN = FiniteGroup.direct_product(C2, C2)
TRIVIAL = FiniteGroup.trivial()


def z2_chain() -> AmalgamCategory:
    """Objects 0 < 1, Z/2 at object 0, trivial group at object 1."""
    return AmalgamCategory(FinitePoset.chain(2), (C2, TRIVIAL))


def example_algebras(ring=Z):
    return {
        "Z/2": group_ring(C2, ring),
        "Z/3": group_ring(C3, ring),
        "Z/2xZ/2": group_ring(KLEIN, ring),
        "chain2": poset_algebra(FinitePoset.chain(2), ring),
        "chain3": poset_algebra(FinitePoset.chain(3), ring),
        "antichain2": poset_algebra(FinitePoset.antichain(2), ring),
        "amalgam": amalgam_algebra(z2_chain(), ring),
    }

