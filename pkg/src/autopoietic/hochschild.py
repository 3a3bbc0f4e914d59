"""Hochschild cochains of a based algebra.

A degree-n cochain is stored densely: one coefficient vector per basis
n-tuple, tuples enumerated lexicographically.  Degree 0 has the single
empty tuple, whose value is ``f(1)``.

The coboundary is

    (delta f)(a1..a_{n+1}) = a1 f(a2..) + sum_i (-1)^i f(.. a_i a_{i+1} ..)
                             + (-1)^(n+1) f(a1..a_n) a_{n+1}

A cochain is *autopoietic* (AP) when ``f(t) = lambda_t * (product of t)`` for
every tuple ``t`` and *non-autopoietic* (NP) when ``f(t)`` has no component
along the product of ``t``.  In degree 0 the product of the empty tuple is
the unit, and the component "along the unit" is read at the first basis
element in the unit's support (the pivot).

>>> from autopoietic.based_algebra import FiniteGroup, group_ring
>>> from autopoietic.coeff import CoefficientRing
>>> A = group_ring(FiniteGroup.cyclic(2), CoefficientRing.integers())
>>> ident = HochschildCochain.from_function(A, 1, lambda t: A.basis_vector(t[0]))
>>> delta(ident).value((1, 1))
(1, 0)
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

from .based_algebra import BasedAlgebra, multiply_chain
from .coeff import IntegerMatrix


class NotAmalgam(ValueError):
    pass


class NotSubcomplex(ArithmeticError):
    pass


class NotSplittable(ValueError):
    """The algebra has structure constants other than 1, so AP and NP do not split."""


class AlgebraMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# tuple enumeration

def tuple_index(t: Sequence[int], dim: int) -> int:
    i = 0
    for a in t:
        i = i * dim + a
    return i


def all_tuples(dim: int, n: int):
    return itertools.product(range(dim), repeat=n)


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


# ---------------------------------------------------------------------------
# cochains

@dataclass(frozen=True, eq=False)
class HochschildCochain:
    algebra: BasedAlgebra
    degree: int
    values: tuple  # values[tuple_index(t)] is a coefficient vector

    def __post_init__(self):
        if len(self.values) != self.algebra.dim ** self.degree:
            raise ValueError("cochain table must cover every basis tuple")

    @classmethod
    def from_function(cls, A: BasedAlgebra, n: int, fn: Callable[[tuple], Sequence]) -> HochschildCochain:
        return cls(A, n, tuple(tuple(A.ring(x) for x in fn(t)) for t in all_tuples(A.dim, n)))

    @classmethod
    def zero(cls, A: BasedAlgebra, n: int) -> HochschildCochain:
        return cls(A, n, (A.zero_vector(),) * A.dim ** n)

    @classmethod
    def random(cls, A: BasedAlgebra, n: int, rng: random.Random, density: float = 1.0) -> HochschildCochain:
        def fn(_t):
            return [A.ring.random_element(rng) if rng.random() < density else 0 for _ in range(A.dim)]
        return cls.from_function(A, n, fn)

    def value(self, t: Sequence[int]) -> tuple:
        return self.values[tuple_index(t, self.algebra.dim)]

    def __eq__(self, other):
        return (isinstance(other, HochschildCochain) and self.algebra is other.algebra
                and self.degree == other.degree and self.values == other.values)

    def __hash__(self):
        return hash((self.degree, self.values))

    def _check(self, other):
        if self.algebra is not other.algebra:
            raise AlgebraMismatch("cochains live on different algebras")

    def __add__(self, other: HochschildCochain) -> HochschildCochain:
        self._check(other)
        if self.degree != other.degree:
            raise ValueError("degrees differ")
        R = self.algebra.ring
        return HochschildCochain(self.algebra, self.degree, tuple(
            tuple(R(x + y) for x, y in zip(u, v)) for u, v in zip(self.values, other.values)))

    def __neg__(self):
        R = self.algebra.ring
        return HochschildCochain(self.algebra, self.degree, tuple(tuple(R(-x) for x in u) for u in self.values))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> HochschildCochain:
        R = self.algebra.ring
        return HochschildCochain(self.algebra, self.degree, tuple(tuple(R(c * x) for x in u) for u in self.values))

    def is_zero(self) -> bool:
        return all(not x for u in self.values for x in u)

    def coordinates(self) -> dict[int, object]:
        """Sparse coordinates in the Full basis ``tuple_index * dim + b``."""
        d = self.algebra.dim
        return {i * d + b: x for i, u in enumerate(self.values) for b, x in enumerate(u) if x}

    @classmethod
    def from_coordinates(cls, A: BasedAlgebra, n: int, coords: dict) -> HochschildCochain:
        vals = [[A.ring.zero] * A.dim for _ in range(A.dim ** n)]
        for c, x in coords.items():
            i, b = divmod(c, A.dim)
            vals[i][b] = A.ring(vals[i][b] + x)
        return cls(A, n, tuple(tuple(v) for v in vals))


@dataclass(frozen=True, eq=False)
class APCochain:
    """Scalars ``lambda_t`` on the tuples whose product does not vanish.

    ``lambdas`` follows the order of :func:`ap_tuples`; in degree 0 it holds a
    single scalar and the cochain is ``f(1) = lambda * unit``.
    """

    algebra: BasedAlgebra
    degree: int
    lambdas: tuple
    strict: bool = True

    def __post_init__(self):
        if len(self.lambdas) != len(ap_tuples(self.algebra, self.degree)):
            raise ValueError("one lambda per tuple with nonzero product")

    def __eq__(self, other):
        return (isinstance(other, APCochain) and self.algebra is other.algebra
                and self.degree == other.degree and self.lambdas == other.lambdas)

    def __hash__(self):
        return hash((self.degree, self.lambdas))

    @classmethod
    def from_function(cls, A: BasedAlgebra, n: int, fn: Callable[[tuple], object]) -> APCochain:
        return cls(A, n, tuple(A.ring(fn(t)) for t in ap_tuples(A, n)))

    @classmethod
    def random(cls, A: BasedAlgebra, n: int, rng: random.Random) -> APCochain:
        return cls.from_function(A, n, lambda _t: A.ring.random_element(rng))

    def lam(self, t: Sequence[int]):
        """``lambda_t``; zero-product tuples carry no data and read as 0."""
        pos = _ap_position(self.algebra, self.degree).get(tuple(t))
        return self.algebra.ring.zero if pos is None else self.lambdas[pos]

    def is_zero(self) -> bool:
        return not any(self.lambdas)

    def __add__(self, other: APCochain) -> APCochain:
        if self.algebra is not other.algebra or self.degree != other.degree:
            raise AlgebraMismatch("AP cochains of different algebras or degrees")
        R = self.algebra.ring
        return APCochain(self.algebra, self.degree, tuple(R(x + y) for x, y in zip(self.lambdas, other.lambdas)))

    def scale(self, c) -> APCochain:
        R = self.algebra.ring
        return APCochain(self.algebra, self.degree, tuple(R(c * x) for x in self.lambdas))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)


@dataclass(frozen=True, eq=False)
class RelativeCochain:
    """Cochain on composable morphism tuples with ``f(t)`` in ``k[Mor(src t, tgt t)]``.

    Degree 0 holds one element of ``k[G_i]`` per object, packed as a single
    vector supported on loops.
    """

    algebra: BasedAlgebra
    degree: int
    values: tuple  # aligned with composable_tuples(A, degree)

    def __post_init__(self):
        cat = _category(self.algebra)
        tuples = composable_tuples(self.algebra, self.degree)
        if len(self.values) != len(tuples):
            raise ValueError("one value per composable tuple")
        for t, v in zip(tuples, self.values):
            allowed = _allowed_targets(self.algebra, t)
            if any(x and b not in allowed for b, x in enumerate(v)):
                raise ValueError(f"value on {t} leaves the allowed morphism span")

    def __eq__(self, other):
        return (isinstance(other, RelativeCochain) and self.algebra is other.algebra
                and self.degree == other.degree and self.values == other.values)

    def __hash__(self):
        return hash((self.degree, self.values))

    def to_full(self) -> HochschildCochain:
        """Extension by zero to all basis tuples."""
        A = self.algebra
        table = dict(zip(composable_tuples(A, self.degree), self.values))
        return HochschildCochain.from_function(A, self.degree, lambda t: table.get(t, A.zero_vector()))

    @classmethod
    def from_full(cls, f: HochschildCochain) -> RelativeCochain:
        """Restriction to composable tuples; raises if ``f`` is not E-relative."""
        A = f.algebra
        tuples = set(composable_tuples(A, f.degree))
        for t in all_tuples(A.dim, f.degree):
            if t not in tuples and any(f.value(t)):
                raise ValueError(f"nonzero value on non-composable tuple {t}")
        return cls(A, f.degree, tuple(f.value(t) for t in composable_tuples(A, f.degree)))

    @classmethod
    def random(cls, A: BasedAlgebra, n: int, rng: random.Random) -> RelativeCochain:
        vals = []
        for t in composable_tuples(A, n):
            allowed = _allowed_targets(A, t)
            vals.append(tuple(A.ring.random_element(rng) if b in allowed else A.ring.zero
                              for b in range(A.dim)))
        return cls(A, n, tuple(vals))


# ---------------------------------------------------------------------------
# tuple bookkeeping (memoised per algebra)

_MEMO: dict = {}


def _memo(kind: str, A: BasedAlgebra, n: int, build):
    key = (kind, id(A), n)
    hit = _MEMO.get(key)
    if hit is None or hit[0] is not A:
        hit = (A, build())
        _MEMO[key] = hit
    return hit[1]


def ap_tuples(A: BasedAlgebra, n: int) -> list[tuple]:
    """Basis n-tuples with nonvanishing product, in lexicographic order."""
    return _memo("ap", A, n, lambda: [()] if n == 0 else
                 [t for t in all_tuples(A.dim, n) if multiply_chain(A, t) is not None])


def _ap_position(A: BasedAlgebra, n: int) -> dict:
    return _memo("ap-pos", A, n, lambda: {t: i for i, t in enumerate(ap_tuples(A, n))})


def _category(A: BasedAlgebra):
    if A.category is None:
        raise NotAmalgam(f"{A.name} carries no category structure")
    return A.category


def _endpoints(cat, t):
    return cat.source[t[0]], cat.target[t[-1]]


def composable_tuples(A: BasedAlgebra, n: int) -> list[tuple]:
    cat = _category(A)
    return _memo("comp", A, n, lambda: [()] if n == 0 else
                 [t for t in all_tuples(A.dim, n) if cat.is_composable(t)])


def _allowed_targets(A: BasedAlgebra, t: tuple) -> set[int]:
    cat = _category(A)
    if not t:
        return {b for b in range(A.dim) if cat.source[b] == cat.target[b]}
    i, j = _endpoints(cat, t)
    return {b for b in range(A.dim) if cat.source[b] == i and cat.target[b] == j}


def product_of(A: BasedAlgebra, t: Sequence[int]) -> Optional[tuple]:
    """``(mu, m)`` with ``phi_t1 ... phi_tn = mu phi_m``; degree 0 gives the unit pivot."""
    if not t:
        return (A.ring.one, A.unit_pivot())
    return multiply_chain(A, t)


# ---------------------------------------------------------------------------
# coboundary and products

def _left(A, a, v):
    """``phi_a * v`` for a coefficient vector v."""
    out = [A.ring.zero] * A.dim
    row = A.product[a]
    for b, x in enumerate(v):
        if x and row[b] is not None:
            mu, m = row[b]
            out[m] += mu * x
    return out


def _right(A, v, a):
    out = [A.ring.zero] * A.dim
    for b, x in enumerate(v):
        if x:
            e = A.product[b][a]
            if e is not None:
                mu, m = e
                out[m] += mu * x
    return out


def delta(f: HochschildCochain) -> HochschildCochain:
    """Hochschild coboundary, evaluated tuple by tuple."""
    A, n, R = f.algebra, f.degree, f.algebra.ring

    def fn(t):
        acc = _left(A, t[0], f.value(t[1:]))
        for i in range(1, n + 1):
            e = A.product[t[i - 1]][t[i]]
            if e is None:
                continue
            mu, m = e
            v = f.value(t[:i - 1] + (m,) + t[i + 1:])
            s = _sign(i) * mu
            for b, x in enumerate(v):
                if x:
                    acc[b] += s * x
        last = _right(A, f.value(t[:n]), t[n])
        s = _sign(n + 1)
        return [R(x + s * y) for x, y in zip(acc, last)]

    return HochschildCochain.from_function(A, n + 1, fn)


def gerstenhaber(f: HochschildCochain, g: HochschildCochain) -> HochschildCochain:
    """``(f . g)(a1..a_{p+q}) = f(a1..ap) g(a_{p+1}..a_{p+q})``."""
    f._check(g)
    A, p, q = f.algebra, f.degree, g.degree
    return HochschildCochain.from_function(A, p + q, lambda t: A.multiply(f.value(t[:p]), g.value(t[p:])))


def partial_composition(f: HochschildCochain, g: HochschildCochain, j: int) -> HochschildCochain:
    """Insert ``g`` into slot ``j`` of ``f`` (slots counted from 0)."""
    f._check(g)
    A, p, q = f.algebra, f.degree, g.degree
    if not 0 <= j < p:
        raise IndexError(f"slot {j} out of range for a degree {p} cochain")

    def fn(t):
        inner = g.value(t[j:j + q])
        out = [A.ring.zero] * A.dim
        for b, c in enumerate(inner):
            if c:
                v = f.value(t[:j] + (b,) + t[j + q:])
                for m, x in enumerate(v):
                    out[m] += c * x
        return out

    return HochschildCochain.from_function(A, p + q - 1, fn)


def pre_lie(f: HochschildCochain, g: HochschildCochain) -> HochschildCochain:
    """``sum_j (-1)^((p-1-j)(q-1)) f o_j g``."""
    p, q = f.degree, g.degree
    if p < 1:
        raise ValueError("pre-Lie product needs a left operand of degree >= 1")
    out = HochschildCochain.zero(f.algebra, p + q - 1)
    for j in range(p):
        term = partial_composition(f, g, j)
        out = out + (term if (p - 1 - j) * (q - 1) % 2 == 0 else -term)
    return out


# ---------------------------------------------------------------------------
# AP / NP splitting

def embed(f: APCochain) -> HochschildCochain:
    """``f(t) = lambda_t * (product of t)``; degree 0 gives ``lambda * unit``."""
    A = f.algebra
    if f.degree == 0:
        return HochschildCochain(A, 0, (tuple(A.ring(f.lambdas[0] * u) for u in A.unit),))

    def fn(t):
        e = multiply_chain(A, t)
        if e is None:
            return A.zero_vector()
        mu, m = e
        return A.basis_vector(m, f.lam(t) * mu)

    return HochschildCochain.from_function(A, f.degree, fn)


def ap_split(f: HochschildCochain) -> tuple[APCochain, HochschildCochain]:
    """``f = embed(ap) + np`` with ``np`` non-autopoietic."""
    A = f.algebra
    if not A.unital_constants:
        raise NotSplittable("AP/NP splitting needs every nonzero structure constant to be 1")
    if f.degree == 0:
        lam = f.values[0][A.unit_pivot()]
        ap = APCochain(A, 0, (lam,))
    else:
        ap = APCochain.from_function(A, f.degree, lambda t: f.value(t)[multiply_chain(A, t)[1]])
    return ap, f - embed(ap)


def is_autopoietic(f: HochschildCochain) -> bool:
    A, R = f.algebra, f.algebra.ring
    if f.degree == 0:
        v = f.values[0]
        lam = v[A.unit_pivot()]
        return all(R(lam * u) == x for u, x in zip(A.unit, v))
    for t in all_tuples(A.dim, f.degree):
        v = f.value(t)
        e = multiply_chain(A, t)
        if e is None:
            if any(v):
                return False
            continue
        mu, m = e
        if any(x for b, x in enumerate(v) if b != m) or R(v[m] * mu) != v[m]:
            return False
    return True


def is_non_autopoietic(f: HochschildCochain) -> bool:
    A = f.algebra
    if f.degree == 0:
        return not f.values[0][A.unit_pivot()]
    for t in all_tuples(A.dim, f.degree):
        e = multiply_chain(A, t)
        if e is not None and f.value(t)[e[1]]:
            return False
    return True


# ---------------------------------------------------------------------------
# differential matrices

class Variant(Enum):
    FULL = "full"
    AP = "ap"
    NP = "np"
    RELATIVE = "relative"


@dataclass(frozen=True)
class _Basis:
    """Cochains spanning a subcomplex, as sparse Full coordinates.

    Each vector has coefficient 1 at its pivot coordinate and every other
    basis vector vanishes there, so coordinates are read off at pivots.
    """

    vectors: tuple[dict, ...]
    pivots: tuple[int, ...]

    def __len__(self):
        return len(self.vectors)


def _full_basis(A, n):
    N = A.dim ** (n + 1)
    return _Basis(tuple({c: 1} for c in range(N)), tuple(range(N)))


def _ap_basis(A, n):
    if not A.unital_constants:
        raise NotSplittable("AP complex needs every nonzero structure constant to be 1")
    d = A.dim
    if n == 0:
        unit = {b: u for b, u in enumerate(A.unit) if u}
        return _Basis((unit,), (A.unit_pivot(),))
    vecs, piv = [], []
    for t in ap_tuples(A, n):
        c = tuple_index(t, d) * d + multiply_chain(A, t)[1]
        vecs.append({c: 1})
        piv.append(c)
    return _Basis(tuple(vecs), tuple(piv))


def _np_basis(A, n):
    if not A.unital_constants:
        raise NotSplittable("NP complex needs every nonzero structure constant to be 1")
    d = A.dim
    if n == 0:
        p = A.unit_pivot()
        cs = [b for b in range(d) if b != p]
    else:
        cs = []
        for t in all_tuples(d, n):
            e = multiply_chain(A, t)
            base = tuple_index(t, d) * d
            cs.extend(base + b for b in range(d) if e is None or b != e[1])
    return _Basis(tuple({c: 1} for c in cs), tuple(cs))


def _relative_basis(A, n):
    d = A.dim
    cs = []
    for t in composable_tuples(A, n):
        base = tuple_index(t, d) * d
        cs.extend(base + b for b in sorted(_allowed_targets(A, t)))
    return _Basis(tuple({c: 1} for c in cs), tuple(cs))


_BASES = {Variant.FULL: _full_basis, Variant.AP: _ap_basis, Variant.NP: _np_basis,
          Variant.RELATIVE: _relative_basis}


def complex_basis(A: BasedAlgebra, variant: Variant, n: int) -> _Basis:
    return _BASES[variant](A, n)


def _preimages(A):
    """For each basis index m, the pairs (x, y, mu) with phi_x phi_y = mu phi_m."""
    pre = [[] for _ in range(A.dim)]
    for x in range(A.dim):
        for y in range(A.dim):
            e = A.product[x][y]
            if e is not None:
                pre[e[1]].append((x, y, e[0]))
    return pre


def _delta_unit_column(A, n, t, b, pre, out, scale):
    """Add ``scale * delta(e_{t,b})`` to ``out`` (Full coordinates of degree n+1)."""
    d = A.dim
    R = A.ring
    for a in range(d):
        # left action: s = (a,) + t, value a * phi_b
        e = A.product[a][b]
        if e is not None:
            c = tuple_index((a,) + t, d) * d + e[1]
            out[c] = out.get(c, 0) + scale * e[0]
        # right action: s = t + (a,), value phi_b * a
        e = A.product[b][a]
        if e is not None:
            c = tuple_index(t + (a,), d) * d + e[1]
            out[c] = out.get(c, 0) + scale * _sign(n + 1) * e[0]
    for i in range(1, n + 1):
        for x, y, mu in pre[t[i - 1]]:
            s = t[:i - 1] + (x, y) + t[i:]
            c = tuple_index(s, d) * d + b
            out[c] = out.get(c, 0) + scale * _sign(i) * mu
    for c in [c for c, v in out.items() if not R(v)]:
        del out[c]


def _delta_vector(A, n, vec, pre):
    out: dict[int, object] = {}
    d = A.dim
    for c, x in vec.items():
        ti, b = divmod(c, d)
        t = _decode(ti, d, n)
        _delta_unit_column(A, n, t, b, pre, out, x)
    return {c: A.ring(v) for c, v in out.items() if A.ring(v)}


def _decode(i, d, n):
    t = []
    for _ in range(n):
        i, a = divmod(i, d)
        t.append(a)
    return tuple(reversed(t))


def differential(A: BasedAlgebra, variant: Variant, n: int, pre=None,
                 source: Optional[_Basis] = None, target: Optional[_Basis] = None) -> IntegerMatrix:
    """Matrix of delta from degree n to degree n+1 in the variant's basis."""
    pre = pre if pre is not None else _preimages(A)
    source = source or complex_basis(A, variant, n)
    target = target or complex_basis(A, variant, n + 1)
    where = {p: k for k, p in enumerate(target.pivots)}
    columns = []
    for vec in source.vectors:
        image = _delta_vector(A, n, vec, pre)
        col: dict[int, object] = {}
        residual = dict(image)
        for c, x in image.items():
            k = where.get(c)
            if k is None:
                continue
            col[k] = x
            for cc, y in target.vectors[k].items():
                residual[cc] = A.ring(residual.get(cc, 0) - x * y)
        if any(A.ring(v) for v in residual.values()):
            raise NotSubcomplex(f"{variant.value} cochains are not closed under delta in degree {n}")
        columns.append(col)
    return IntegerMatrix.from_columns(len(target), columns)


def build_complex(A: BasedAlgebra, variant: Variant, max_degree: int) -> list[IntegerMatrix]:
    """Differentials ``delta^0 .. delta^(max_degree-1)``."""
    if variant is Variant.RELATIVE:
        _category(A)
    pre = _preimages(A)
    bases = [complex_basis(A, variant, n) for n in range(max_degree + 1)]
    return [differential(A, variant, n, pre, bases[n], bases[n + 1]) for n in range(max_degree)]


def cochain_dimension(A: BasedAlgebra, variant: Variant, n: int) -> int:
    if variant is Variant.FULL:
        return A.dim ** (n + 1)
    if variant is Variant.AP:
        return len(ap_tuples(A, n))
    if variant is Variant.NP:
        return A.dim ** (n + 1) - len(ap_tuples(A, n))
    return sum(len(_allowed_targets(A, t)) for t in composable_tuples(A, n))


# ---------------------------------------------------------------------------
# contracting homotopy for the E-relative bar resolution

def _bar_prime(A, L, index_to, source):
    """b'(a0..a_{L-1}) = sum_{i<L-1} (-1)^i (.. a_i a_{i+1} ..) on composable L-tuples."""
    cols = []
    for t in source:
        col: dict[int, int] = {}
        for i in range(L - 1):
            mu, m = A.product[t[i]][t[i + 1]]
            k = index_to[t[:i] + (m,) + t[i + 2:]]
            col[k] = col.get(k, 0) + _sign(i) * mu
        cols.append({k: v for k, v in col.items() if v})
    return IntegerMatrix.from_columns(len(index_to), cols)


def _homotopy(A, source, index_to):
    """phi(a0..) = e_{src(a0)} (x) a0 (x) ..."""
    cat = _category(A)
    cols = [{index_to[(cat.identities[cat.source[t[0]]],) + t]: 1} for t in source]
    return IntegerMatrix.from_columns(len(index_to), cols)


def verify_contracting_homotopy(A: BasedAlgebra, n: int) -> bool:
    """Check ``b' phi + phi b' = id`` on composable (n+1)-tuples, as matrices."""
    L = n + 1
    tuples = {k: composable_tuples(A, k) for k in range(max(L - 1, 1), L + 2)}
    idx = {k: {t: i for i, t in enumerate(ts)} for k, ts in tuples.items()}
    up = _homotopy(A, tuples[L], idx[L + 1])
    down_from_up = _bar_prime(A, L + 1, idx[L], tuples[L + 1])
    total = down_from_up @ up
    if L >= 2:
        down = _bar_prime(A, L, idx[L - 1], tuples[L])
        back = _homotopy(A, tuples[L - 1], idx[L])
        total = _add(total, back @ down)
    return total == IntegerMatrix.identity(len(tuples[L]))


def _add(X: IntegerMatrix, Y: IntegerMatrix) -> IntegerMatrix:
    return IntegerMatrix(X.rows, X.cols, tuple(a + b for a, b in zip(X.entries, Y.entries)))
