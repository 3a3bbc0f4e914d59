"""Maps between Hochschild cochains and simplicial cochains.

* ``phi_n``: Hochschild cochains of k[G] to cochains on the cyclic bar
  construction, ``phi_n(f)(g0..gn) = <g0, f(g1..gn)>`` with the Frobenius
  pairing ``<g, h> = [h = g^-1]``.
* ``psi``: cochains on :func:`~autopoietic.simplicial.algebra_bar` to AP
  cochains, ``lambda_t = alpha(t)``.
* ``phi_general``: the inverse direction, reading off ``lambda``.
* ``cup_i_on_ap``: cup-i products transported to AP cochains.
* ``psi_nerve``: nerve cochains of an amalgam to E-relative cochains.

>>> from autopoietic.based_algebra import FiniteGroup, group_ring
>>> from autopoietic.coeff import CoefficientRing
>>> A = group_ring(FiniteGroup.cyclic(2), CoefficientRing.integers())
>>> frobenius(A, (2, 1), (1, 0))
2
"""

from __future__ import annotations

from typing import Sequence

from .based_algebra import AmalgamCategory, BasedAlgebra, multiply_chain
from .hochschild import (APCochain, HochschildCochain, RelativeCochain, _memo, ap_split, ap_tuples,
                         composable_tuples, delta, embed, gerstenhaber, pre_lie)
from .simplicial import (SimplicialCochain, SimplicialSlice, SliceMismatch, algebra_bar, cup_i,
                         cyclic_bar)


class NotGroupRing(ValueError):
    pass


class NotIdempotent(ValueError):
    pass


def _group(A: BasedAlgebra):
    if A.group is None:
        raise NotGroupRing(f"{A.name} is not a group ring")
    return A.group


def _require_idempotent(A: BasedAlgebra):
    if not A.idempotent_flag:
        raise NotIdempotent(f"{A.name} is not flagged as having idempotent structure constants")


def frobenius(A: BasedAlgebra, z: Sequence, w: Sequence):
    """``<z, w> = sum_g z_g w_(g^-1)``."""
    G = _group(A)
    return A.ring(sum(z[g] * w[G.inverse[g]] for g in range(G.order)))


def phi_n(f: HochschildCochain, X: SimplicialSlice | None = None) -> SimplicialCochain:
    """``phi_n(f)(g0, .., gn) = <g0, f(g1..gn)>`` on the cyclic bar construction."""
    A = f.algebra
    G = _group(A)
    X = X or cyclic_bar(G, f.degree)
    if X.simplices[0] and len(X.simplices[0][0]) != 1:
        raise SliceMismatch("phi_n lands on a cyclic bar construction")
    return SimplicialCochain.from_function(X, f.degree, lambda s: f.value(s[1:])[G.inverse[s[0]]], A.ring)


def bar_slice(A: BasedAlgebra, degree: int) -> SimplicialSlice:
    """The tuple slice used by :func:`psi` and :func:`phi_general`, cached per algebra."""
    return _memo("bar", A, degree, lambda: algebra_bar(A, degree))


def psi(alpha: SimplicialCochain, A: BasedAlgebra) -> APCochain:
    """``Psi(alpha)(t) = alpha(t) * (product of t)``, as an AP cochain on ``A``.

    ``alpha`` lives on a slice whose degree-n simplices are basis tuples of
    ``A``; tuples with vanishing product are ignored.
    """
    _require_idempotent(A)
    n = alpha.degree
    X = alpha.slice
    lookup = X._lookup[n]
    lambdas = []
    for t in ap_tuples(A, n):
        k = lookup.get(t)
        if k is None:
            raise SliceMismatch(f"{X} has no simplex {t}")
        lambdas.append(alpha.values[k])
    return APCochain(A, n, tuple(lambdas))


def phi_general(f: APCochain, X: SimplicialSlice | None = None) -> SimplicialCochain:
    """``lambda_t`` on tuples with nonvanishing product, 0 on the others."""
    A = f.algebra
    X = X or bar_slice(A, f.degree)
    return SimplicialCochain.from_function(X, f.degree, f.lam, A.ring)


def psi_hochschild(alpha: SimplicialCochain, A: BasedAlgebra) -> HochschildCochain:
    return embed(psi(alpha, A))


def ap_of(f: HochschildCochain) -> APCochain:
    """The AP cochain of an autopoietic Hochschild cochain (raises otherwise)."""
    ap, rest = ap_split(f)
    if not rest.is_zero():
        raise ValueError("cochain is not autopoietic")
    return ap


def cup_i_on_ap(f: APCochain, g: APCochain, i: int) -> APCochain:
    """``Psi(Phi f cup_i Phi g)``; ``i = 0`` is the cup product."""
    A = f.algebra
    _require_idempotent(A)
    if g.algebra is not A:
        raise SliceMismatch("AP cochains on different algebras")
    X = bar_slice(A, max(f.degree, g.degree, f.degree + g.degree - i + 1))
    return psi(cup_i(phi_general(f, X), phi_general(g, X), i), A)


def gerstenhaber_ap(f: APCochain, g: APCochain) -> APCochain:
    return ap_of(gerstenhaber(embed(f), embed(g)))


def pre_lie_ap(f: APCochain, g: APCochain) -> APCochain:
    return ap_of(pre_lie(embed(f), embed(g)))


def ap_delta(f: APCochain) -> APCochain:
    return ap_of(delta(embed(f)))


def ap_product(f: APCochain, g: APCochain, i: int) -> APCochain:
    """Gerstenhaber product for ``i = 0``, transported cup-i otherwise."""
    return gerstenhaber_ap(f, g) if i == 0 else cup_i_on_ap(f, g, i)


# ---------------------------------------------------------------------------
# amalgams

def psi_nerve(gamma: SimplicialCochain, C: AmalgamCategory, A: BasedAlgebra) -> RelativeCochain:
    """Nerve cochain to E-relative cochain: ``gamma(i) e_ii`` in degree 0,
    ``gamma(t) * (product of t)`` in positive degree."""
    X = gamma.slice
    if A.category is None or A.dim != C.num_morphisms or X.count(0) != C.num_objects:
        raise SliceMismatch("psi_nerve needs a nerve cochain and the algebra of the same amalgam")
    n = gamma.degree
    if n == 0:
        v = [A.ring.zero] * A.dim
        for i in range(C.num_objects):
            v[C.identity_morphism(i)] = gamma((i,))
        return RelativeCochain(A, 0, (tuple(A.ring(x) for x in v),))
    vals = []
    for t in composable_tuples(A, n):
        mu, m = multiply_chain(A, t)
        vals.append(A.basis_vector(m, gamma(t) * mu))
    return RelativeCochain(A, n, tuple(vals))


def ap_restrict(f: APCochain) -> RelativeCochain:
    """AP cochain on full tensor powers to a cochain on ``(x)_E`` powers."""
    return RelativeCochain.from_full(embed(f))


def ap_extend(r: RelativeCochain) -> APCochain:
    """Inverse of :func:`ap_restrict`: extend by zero; raises unless autopoietic."""
    return ap_of(r.to_full())
