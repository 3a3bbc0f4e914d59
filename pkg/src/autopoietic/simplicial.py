"""Truncated simplicial sets, simplicial cochains, cup and cup-i products.

A :class:`SimplicialSlice` stores, for degrees ``0..N``, the list of
simplices and the face maps as index tables (``faces[n][s][i]`` is the index
of ``d_i`` of simplex ``s`` in degree ``n - 1``).  Degeneracies are stored
when the model has them.

Faces of a simplex spanned by a subset ``S`` of its vertices are computed by
deleting the vertices outside ``S`` from the top down.  Cup products and the
cup-i products are expressed through such vertex faces:

* ``(a cup b)(s) = a(s|0..p) b(s|p..p+q)``
* ``a cup_i b`` sums, over ``j0 < ... < ji`` in ``0..m`` (``m = p+q-i``), the
  products ``a(s|A) b(s|B)`` with ``A = [0,j0] + [j1,j2] + ...`` and
  ``B = [j0,j1] + [j2,j3] + ...`` (intervals closed, last one ends at ``m``).

Cup-i signs for ``i = 1, 2, 3`` are fixed integrally (see :func:`cup_i_terms`).
Two forms of the coboundary formula are available through
:class:`SignConvention`: ``UNIFORM`` is

    d(a cup_i b) = da cup_i b + (-1)^(p-1) a cup_i db
                   + (-1)^p [(-1)^((i-1)(p+q+1)) a cup_(i-1) b - (-1)^(pq) b cup_(i-1) a]

and ``INTEGRAL`` multiplies the two bracketed terms by the factors of
:func:`bracket_factors`.  The two agree for ``i = 1`` and modulo 2.  For
``i >= 2``, ``UNIFORM`` has no integral solution: its obstruction involves
only cup-1 and is nonzero.

>>> from autopoietic.based_algebra import FiniteGroup
>>> B = bar(FiniteGroup.cyclic(2), 2)
>>> [len(B.simplices[n]) for n in range(3)]
[1, 2, 4]
>>> B.simplices[1][B.faces[2][B.index(2, (1, 1))][1]]
(0,)
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

from .based_algebra import AmalgamCategory, BasedAlgebra, FiniteGroup, multiply_chain
from .coeff import CoefficientRing, IntegerMatrix


class SliceMismatch(ValueError):
    pass


class UnsupportedArity(ValueError):
    pass


class NotClosed(ValueError):
    """A restricted family of simplices is not closed under a face map."""


@dataclass(frozen=True, eq=False)
class SimplicialSlice:
    name: str
    max_degree: int
    simplices: tuple[tuple[tuple, ...], ...]
    faces: tuple  # faces[n][s] = (d_0 s, ..., d_n s) as indices into degree n-1; faces[0] = ()
    degeneracies: Optional[tuple] = None  # degeneracies[n][s] = (s_0 s, ..., s_n s) into degree n+1
    _lookup: tuple = field(init=False, repr=False)
    _vertex_cache: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_lookup", tuple({s: i for i, s in enumerate(level)} for level in self.simplices))
        object.__setattr__(self, "_vertex_cache", {})

    def __repr__(self):
        return f"SimplicialSlice({self.name}, N={self.max_degree})"

    def index(self, n: int, simplex: tuple) -> int:
        return self._lookup[n][tuple(simplex)]

    def count(self, n: int) -> int:
        return len(self.simplices[n])

    def face(self, n: int, s: int, i: int) -> int:
        return self.faces[n][s][i]

    def vertex_face(self, n: int, s: int, keep: Sequence[int]) -> int:
        """Index of the face of simplex ``s`` spanned by the sorted vertices ``keep``."""
        key = (n, s, tuple(keep))
        hit = self._vertex_cache.get(key)
        if hit is not None:
            return hit
        kept = set(keep)
        cur, deg = s, n
        for v in range(n, -1, -1):
            if v not in kept:
                cur = self.faces[deg][cur][v]
                deg -= 1
        self._vertex_cache[key] = cur
        return cur

    def check_identities(self) -> None:
        """Raise if any stored face/degeneracy identity fails."""
        F, S = self.faces, self.degeneracies
        for n in range(2, self.max_degree + 1):
            for s in range(self.count(n)):
                for j in range(n + 1):
                    for i in range(j):
                        if F[n - 1][F[n][s][j]][i] != F[n - 1][F[n][s][i]][j - 1]:
                            raise AssertionError(f"{self.name}: d{i} d{j} != d{j - 1} d{i} on {self.simplices[n][s]}")
        if S is None:
            return
        for n in range(self.max_degree):
            for s in range(self.count(n)):
                for j in range(n + 1):
                    t = S[n][s][j]
                    for i in range(n + 2):
                        got = F[n + 1][t][i]
                        if i < j:
                            want = S[n - 1][F[n][s][i]][j - 1]
                        elif i in (j, j + 1):
                            want = s
                        else:
                            want = S[n - 1][F[n][s][i - 1]][j]
                        if got != want:
                            raise AssertionError(f"{self.name}: d{i} s{j} identity fails on {self.simplices[n][s]}")
                    if n + 1 < self.max_degree:
                        for i in range(j + 1):
                            if S[n + 1][t][i] != S[n + 1][S[n][s][i]][j + 1]:
                                raise AssertionError(f"{self.name}: s{i} s{j} identity fails")

    def coboundary_matrix(self, n: int) -> IntegerMatrix:
        """Matrix of ``d*`` from degree n to n+1 (rows: (n+1)-simplices)."""
        rows = self.count(n + 1)
        cols = [dict() for _ in range(self.count(n))]
        for t in range(rows):
            for i, s in enumerate(self.faces[n + 1][t]):
                c = cols[s]
                c[t] = c.get(t, 0) + (-1 if i % 2 else 1)
        return IntegerMatrix.from_columns(rows, [{k: v for k, v in c.items() if v} for c in cols])


def _build(name: str, N: int, level: Callable[[int], list], face: Callable[[int, tuple, int], tuple],
           degen: Optional[Callable[[int, tuple, int], tuple]] = None) -> SimplicialSlice:
    simplices = tuple(tuple(level(n)) for n in range(N + 1))
    lookup = [{s: i for i, s in enumerate(lv)} for lv in simplices]

    def find(n, s, what):
        try:
            return lookup[n][s]
        except KeyError:
            raise NotClosed(f"{name}: {what} = {s} is not a degree {n} simplex") from None

    faces = [()]
    for n in range(1, N + 1):
        faces.append(tuple(tuple(find(n - 1, face(n, s, i), f"d{i}{s}") for i in range(n + 1))
                           for s in simplices[n]))
    degeneracies = None
    if degen is not None:
        degeneracies = tuple(tuple(tuple(find(n + 1, degen(n, s, j), f"s{j}{s}") for j in range(n + 1))
                                   for s in simplices[n]) for n in range(N))
    return SimplicialSlice(name, N, simplices, tuple(faces), degeneracies)


# ---------------------------------------------------------------------------
# models

def bar(G: FiniteGroup, N: int) -> SimplicialSlice:
    """``B_n = G^n``; ``d_0`` drops the first entry, ``d_n`` the last, inner faces multiply."""
    def face(n, s, i):
        if i == 0:
            return s[1:]
        if i == n:
            return s[:-1]
        return s[:i - 1] + (G.mul(s[i - 1], s[i]),) + s[i + 1:]

    def degen(n, s, j):
        return s[:j] + (G.identity,) + s[j:]

    return _build(f"bar(G{G.order})", N, lambda n: list(itertools.product(range(G.order), repeat=n)), face, degen)


def _cyclic_face(G):
    def face(n, s, i):
        if i < n:
            return s[:i] + (G.mul(s[i], s[i + 1]),) + s[i + 2:]
        return (G.mul(s[n], s[0]),) + s[1:n]
    return face


def _cyclic_degen(G):
    def degen(n, s, j):
        return s[:j + 1] + (G.identity,) + s[j + 1:]
    return degen


def cyclic_bar(G: FiniteGroup, N: int) -> SimplicialSlice:
    """``N_n = G^(n+1)`` with the wrap-around last face ``(g_n g_0, g_1, .., g_(n-1))``."""
    return _build(f"cyclic(G{G.order})", N, lambda n: list(itertools.product(range(G.order), repeat=n + 1)),
                  _cyclic_face(G), _cyclic_degen(G))


def cyclic_bar_unit(G: FiniteGroup, N: int) -> SimplicialSlice:
    """Sub-object of :func:`cyclic_bar` on tuples with ``g_0 g_1 .. g_n = e``.

    Closure under the faces is checked while building, not assumed.
    """
    def level(n):
        return [s for s in itertools.product(range(G.order), repeat=n + 1) if G.product(s) == G.identity]
    return _build(f"cyclic-unit(G{G.order})", N, level, _cyclic_face(G), _cyclic_degen(G))


def nerve(C: AmalgamCategory, N: int) -> SimplicialSlice:
    """Objects in degree 0, composable strings of n morphisms in degree n."""
    def level(n):
        if n == 0:
            return [(i,) for i in range(C.num_objects)]
        return [s for s in itertools.product(range(C.num_morphisms), repeat=n) if C.is_composable(s)]

    def face(n, s, i):
        if n == 1:
            return (C.target[s[0]],) if i == 0 else (C.source[s[0]],)
        if i == 0:
            return s[1:]
        if i == n:
            return s[:-1]
        return s[:i - 1] + (C.compose(s[i - 1], s[i]),) + s[i + 1:]

    def degen(n, s, j):
        if n == 0:
            return (C.identity_morphism(s[0]),)
        obj = C.source[s[j]] if j < n else C.target[s[-1]]
        return s[:j] + (C.identity_morphism(obj),) + s[j:]

    return _build("nerve", N, level, face, degen)


def algebra_bar(A: BasedAlgebra, N: int) -> SimplicialSlice:
    """Basis n-tuples with nonvanishing product; inner faces multiply.

    The family is closed under faces (a subword of a nonvanishing product
    does not vanish), and degree 0 is a single point.  For a group ring this
    is exactly :func:`bar` of the group.
    """
    def level(n):
        return [s for s in itertools.product(range(A.dim), repeat=n) if n == 0 or multiply_chain(A, s) is not None]

    def face(n, s, i):
        if i == 0:
            return s[1:]
        if i == n:
            return s[:-1]
        return s[:i - 1] + (A.product[s[i - 1]][s[i]][1],) + s[i + 1:]

    return _build(f"bar({A.name})", N, level, face)


# ---------------------------------------------------------------------------
# cochains

@dataclass(frozen=True, eq=False)
class SimplicialCochain:
    slice: SimplicialSlice
    degree: int
    values: tuple
    ring: CoefficientRing

    def __post_init__(self):
        if not 0 <= self.degree <= self.slice.max_degree:
            raise ValueError(f"degree {self.degree} not stored in {self.slice}")
        if len(self.values) != self.slice.count(self.degree):
            raise ValueError("cochain must be total on the simplices of its degree")

    @classmethod
    def from_function(cls, X: SimplicialSlice, n: int, fn: Callable[[tuple], object], ring: CoefficientRing):
        return cls(X, n, tuple(ring(fn(s)) for s in X.simplices[n]), ring)

    @classmethod
    def zero(cls, X: SimplicialSlice, n: int, ring: CoefficientRing):
        return cls(X, n, (ring.zero,) * X.count(n), ring)

    @classmethod
    def constant(cls, X: SimplicialSlice, n: int, c, ring: CoefficientRing):
        return cls(X, n, (ring(c),) * X.count(n), ring)

    @classmethod
    def indicator(cls, X: SimplicialSlice, n: int, simplex: tuple, ring: CoefficientRing):
        k = X.index(n, simplex)
        return cls(X, n, tuple(ring.one if i == k else ring.zero for i in range(X.count(n))), ring)

    @classmethod
    def random(cls, X: SimplicialSlice, n: int, rng: random.Random, ring: CoefficientRing):
        return cls(X, n, tuple(ring.random_element(rng) for _ in range(X.count(n))), ring)

    def __call__(self, simplex: tuple):
        return self.values[self.slice.index(self.degree, simplex)]

    def __eq__(self, other):
        return (isinstance(other, SimplicialCochain) and self.slice is other.slice
                and self.degree == other.degree and self.values == other.values)

    def __hash__(self):
        return hash((self.degree, self.values))

    def _same(self, other):
        if self.slice is not other.slice:
            raise SliceMismatch("cochains live on different slices")

    def __add__(self, other):
        self._same(other)
        if self.degree != other.degree:
            raise ValueError("degrees differ")
        R = self.ring
        return SimplicialCochain(self.slice, self.degree, tuple(R(a + b) for a, b in zip(self.values, other.values)), R)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        R = self.ring
        return SimplicialCochain(self.slice, self.degree, tuple(R(c * a) for a in self.values), R)

    def is_zero(self) -> bool:
        return not any(self.values)


def coboundary(a: SimplicialCochain) -> SimplicialCochain:
    """``(d* a)(s) = sum_i (-1)^i a(d_i s)``."""
    X, n, R = a.slice, a.degree, a.ring
    if n + 1 > X.max_degree:
        raise ValueError(f"{X} does not store degree {n + 1}")
    vals = []
    for fs in X.faces[n + 1]:
        acc = 0
        for i, s in enumerate(fs):
            acc += -a.values[s] if i % 2 else a.values[s]
        vals.append(R(acc))
    return SimplicialCochain(X, n + 1, tuple(vals), R)


def _check_stored(X: SimplicialSlice, m: int):
    if m > X.max_degree:
        raise ValueError(f"{X} does not store degree {m}")


def cup(a: SimplicialCochain, b: SimplicialCochain) -> SimplicialCochain:
    """Front p-face times back q-face."""
    a._same(b)
    X, p, q, R = a.slice, a.degree, b.degree, a.ring
    m = p + q
    _check_stored(X, m)
    front, back = tuple(range(p + 1)), tuple(range(p, m + 1))
    vals = tuple(R(a.values[X.vertex_face(m, s, front)] * b.values[X.vertex_face(m, s, back)])
                 for s in range(X.count(m)))
    return SimplicialCochain(X, m, vals, R)


# ---------------------------------------------------------------------------
# cup-i

MAX_CUP_INDEX = 3


def _cup_sign_parity(i: int, p: int, q: int, J: Sequence[int]) -> int:
    if i == 1:
        return (p - 1 - J[0]) * (q - 1)
    if i == 2:
        j0, j1 = J[0], J[1]
        return 1 + p + q + p * j0 + p * j1 + j0 * j1
    if i == 3:
        j0, j1, j2 = J[0], J[1], J[2]
        return p + p * q + q * (j0 + j1 + j2) + j0 * j1 + j0 * j2 + j1 * j2
    raise UnsupportedArity(f"cup_{i} is implemented for 1 <= i <= {MAX_CUP_INDEX}")


def cup_i_terms(i: int, p: int, q: int) -> list[tuple[int, tuple, tuple]]:
    """``(sign, alpha vertices, beta vertices)`` for each term of ``cup_i`` in degree p+q-i."""
    if i == 0:
        m = p + q
        return [(1, tuple(range(p + 1)), tuple(range(p, m + 1)))]
    if not 1 <= i <= MAX_CUP_INDEX:
        raise UnsupportedArity(f"cup_{i} is implemented for 0 <= i <= {MAX_CUP_INDEX}")
    m = p + q - i
    if m < 0:
        return []
    terms = []
    for J in itertools.combinations(range(m + 1), i + 1):
        cuts = (0,) + J + (m,)
        A, B = [], []
        for k in range(i + 2):
            part = range(cuts[k], cuts[k + 1] + 1)
            (A if k % 2 == 0 else B).extend(part)
        if len(A) != p + 1 or len(B) != q + 1:
            continue
        sign = -1 if _cup_sign_parity(i, p, q, J) % 2 else 1
        terms.append((sign, tuple(A), tuple(B)))
    return terms


def cup_i(a: SimplicialCochain, b: SimplicialCochain, i: int) -> SimplicialCochain:
    """Steenrod cup-i product; ``i = 0`` is :func:`cup`.  Negative degree raises ``ValueError``."""
    a._same(b)
    X, p, q, R = a.slice, a.degree, b.degree, a.ring
    m = p + q - i
    if m < 0:
        raise ValueError(f"cup_{i} of degrees {p}, {q} has negative degree")
    _check_stored(X, m)
    terms = cup_i_terms(i, p, q)
    vals = []
    for s in range(X.count(m)):
        acc = 0
        for sign, A, B in terms:
            x = a.values[X.vertex_face(m, s, A)]
            if x:
                acc += sign * x * b.values[X.vertex_face(m, s, B)]
        vals.append(R(acc))
    return SimplicialCochain(X, m, tuple(vals), R)


class SignConvention(Enum):
    UNIFORM = "uniform"
    INTEGRAL = "integral"


def bracket_factors(i: int, p: int, q: int, convention: SignConvention) -> tuple[int, int]:
    """Extra signs on ``a cup_(i-1) b`` and ``b cup_(i-1) a`` in the coboundary formula."""
    if convention is SignConvention.UNIFORM or i == 1:
        return 1, 1
    if i == 2:
        s = -1 if (p + 1) % 2 else 1
        return s, s
    if i == 3:
        return (-1 if q % 2 else 1), (-1 if p % 2 else 1)
    raise UnsupportedArity(f"no coboundary formula for cup_{i}")


def coboundary_formula_terms(a, b, i, product, differential, convention=SignConvention.UNIFORM):
    """Both sides of the cup-i coboundary formula for any product/differential pair.

    ``product(x, y, k)`` is the k-th product (k = 0 the cup product) and
    ``differential`` the coboundary.  Returns ``(lhs, rhs)``.
    """
    p, q = a.degree, b.degree
    lhs = differential(product(a, b, i))
    rhs = product(differential(a), b, i)
    t = product(a, differential(b), i)
    rhs = rhs + (t if (p - 1) % 2 == 0 else -t)
    ka, kb = bracket_factors(i, p, q, convention)
    s_ab = (-1 if p % 2 else 1) * (-1 if ((i - 1) * (p + q + 1)) % 2 else 1) * ka
    s_ba = -(-1 if p % 2 else 1) * (-1 if (p * q) % 2 else 1) * kb
    rhs = rhs + product(a, b, i - 1).scale(s_ab) + product(b, a, i - 1).scale(s_ba)
    return lhs, rhs


def coboundary_identity_defect(a: SimplicialCochain, b: SimplicialCochain, i: int,
                               convention: SignConvention = SignConvention.UNIFORM) -> SimplicialCochain:
    """``lhs - rhs`` of the cup-i coboundary formula (zero when it holds)."""
    lhs, rhs = coboundary_formula_terms(a, b, i, cup_i, coboundary, convention)
    return lhs - rhs


# ---------------------------------------------------------------------------
# the maps between bar(G) and the unit cyclic bar construction

def iota_map(G: FiniteGroup, simplex: tuple) -> tuple:
    """``(g_1..g_n) -> ((g_1..g_n)^-1, g_1, .., g_n)``."""
    return (G.inverse[G.product(simplex)],) + tuple(simplex)


def pi_map(G: FiniteGroup, simplex: tuple) -> tuple:
    """``(g_0, g_1, .., g_n) -> (g_1, .., g_n)``."""
    return tuple(simplex[1:])


def pull_back(a: SimplicialCochain, target: SimplicialSlice, simplicial_map: Callable[[tuple], tuple]) -> SimplicialCochain:
    """Cochain on ``target`` given by ``s -> a(map(s))``."""
    return SimplicialCochain.from_function(target, a.degree, lambda s: a(simplicial_map(s)), a.ring)
