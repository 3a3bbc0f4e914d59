"""Algebras with a distinguished monomial basis.

A :class:`BasedAlgebra` has basis ``0..dim-1`` and a product table sending a
pair of basis indices to ``(mu, m)`` (meaning ``phi_a phi_b = mu * phi_m``) or
to ``None`` (the product vanishes).  Group rings, poset (incidence) algebras
and category algebras of group/poset amalgams are built here; all three come
with structure constants equal to 1.

Category algebras also record, for every basis morphism, its source and
target object so that the E-relative complex and the nerve can be built.
Composition is read left to right: ``a * b`` means "first a, then b".

>>> from autopoietic.coeff import CoefficientRing
>>> A = poset_algebra(FinitePoset.chain(2), CoefficientRing.integers())
>>> A.labels, A.mul_basis(0, 1), A.mul_basis(1, 1)
(('e11', 'e12', 'e22'), (1, 1), None)
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .coeff import CoefficientRing

Product = Optional[tuple]  # (mu, m) or None


class InvalidStructure(ValueError):
    pass


# ---------------------------------------------------------------------------
# groups

@dataclass(frozen=True)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    identity: int = 0
    labels: tuple[str, ...] = ()
    inverse: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        n = len(self.table)
        if n == 0:
            raise InvalidStructure("a group needs at least one element")
        table = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", table)
        if any(len(row) != n for row in table):
            raise InvalidStructure("multiplication table must be square")
        if any(not 0 <= x < n for row in table for x in row):
            raise InvalidStructure("table entries out of range")
        e = self.identity
        if not 0 <= e < n or any(table[e][g] != g or table[g][e] != g for g in range(n)):
            raise InvalidStructure(f"element {e} is not a two-sided identity")
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise InvalidStructure(f"not associative at ({a}, {b}, {c})")
        inv = []
        for g in range(n):
            right = [h for h in range(n) if table[g][h] == e]
            if len(right) != 1 or table[right[0]][g] != e:
                raise InvalidStructure(f"element {g} has no inverse")
            inv.append(right[0])
        object.__setattr__(self, "inverse", tuple(inv))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"g{g}" if g != e else "1" for g in range(n)))

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def product(self, elements: Sequence[int]) -> int:
        out = self.identity
        for g in elements:
            out = self.table[out][g]
        return out

    @classmethod
    def cyclic(cls, n: int) -> FiniteGroup:
        if n < 1:
            raise InvalidStructure("cyclic group order must be positive")
        labels = ["1"] + ["x" if k == 1 else f"x^{k}" for k in range(1, n)]
        return cls(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)), 0, tuple(labels))

    @classmethod
    def trivial(cls) -> FiniteGroup:
        return cls.cyclic(1)

    @classmethod
    def direct_product(cls, G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
        pairs = list(itertools.product(range(G.order), range(H.order)))
        index = {p: i for i, p in enumerate(pairs)}
        table = tuple(tuple(index[(G.mul(a, c), H.mul(b, d))] for (c, d) in pairs) for (a, b) in pairs)
        labels = tuple(f"({G.labels[a]},{H.labels[b]})" for a, b in pairs)
        return cls(table, index[(G.identity, H.identity)], labels)


# ---------------------------------------------------------------------------
# posets

@dataclass(frozen=True)
class FinitePoset:
    size: int
    leq: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        N = self.size
        if N < 1:
            raise InvalidStructure("poset must be nonempty")
        if len(self.leq) != N or any(len(r) != N for r in self.leq):
            raise InvalidStructure("leq must be an N x N relation")
        for i in range(N):
            if not self.leq[i][i]:
                raise InvalidStructure("relation is not reflexive")
        for i, j in itertools.product(range(N), repeat=2):
            if i != j and self.leq[i][j] and self.leq[j][i]:
                raise InvalidStructure(f"relation contains a cycle through {i} and {j}")
        for i, j, k in itertools.product(range(N), repeat=3):
            if self.leq[i][j] and self.leq[j][k] and not self.leq[i][k]:
                raise InvalidStructure("relation is not transitive")

    @classmethod
    def from_relations(cls, size: int, relations: Sequence[Sequence[int]]) -> FinitePoset:
        """Reflexive-transitive closure of ``relations`` (pairs ``i <= j``, 0-based)."""
        leq = [[i == j for j in range(size)] for i in range(size)]
        for i, j in relations:
            if not (0 <= i < size and 0 <= j < size):
                raise InvalidStructure(f"relation ({i}, {j}) out of range")
            leq[i][j] = True
        for k in range(size):
            for i in range(size):
                if leq[i][k]:
                    for j in range(size):
                        if leq[k][j]:
                            leq[i][j] = True
        return cls(size, tuple(tuple(r) for r in leq))

    @classmethod
    def chain(cls, n: int) -> FinitePoset:
        return cls.from_relations(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def antichain(cls, n: int) -> FinitePoset:
        return cls.from_relations(n, [])

    def strictly_below(self, i: int, j: int) -> bool:
        return i != j and self.leq[i][j]


# ---------------------------------------------------------------------------
# amalgams

@dataclass(frozen=True)
class AmalgamCategory:
    """Objects of a poset, group ``G_i`` of loops at object ``i``, and a unique
    morphism ``e_ij`` for every strict relation ``i < j``.

    Morphisms are enumerated object by object (the loops ``G_i`` with the
    identity ``e_ii`` first), followed by the strict morphisms in
    lexicographic order of ``(i, j)``.
    """

    poset: FinitePoset
    groups: tuple[FiniteGroup, ...]
    source: tuple[int, ...] = field(init=False, repr=False)
    target: tuple[int, ...] = field(init=False, repr=False)
    loop_element: tuple[int, ...] = field(init=False, repr=False)
    labels: tuple[str, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.groups) != self.poset.size:
            raise InvalidStructure("need exactly one group per object")
        src, tgt, elem, labels = [], [], [], []
        for i, G in enumerate(self.groups):
            order = [G.identity] + [g for g in range(G.order) if g != G.identity]
            for g in order:
                src.append(i)
                tgt.append(i)
                elem.append(g)
                labels.append(f"e{i + 1}{i + 1}" if g == G.identity else f"{G.labels[g]}@{i + 1}")
        N = self.poset.size
        for i, j in itertools.product(range(N), repeat=2):
            if self.poset.strictly_below(i, j):
                src.append(i)
                tgt.append(j)
                elem.append(-1)
                labels.append(f"e{i + 1}{j + 1}")
        object.__setattr__(self, "source", tuple(src))
        object.__setattr__(self, "target", tuple(tgt))
        object.__setattr__(self, "loop_element", tuple(elem))
        object.__setattr__(self, "labels", tuple(labels))

    @property
    def num_morphisms(self) -> int:
        return len(self.source)

    @property
    def num_objects(self) -> int:
        return self.poset.size

    def identity_morphism(self, i: int) -> int:
        for a in range(self.num_morphisms):
            if self.source[a] == i and self.target[a] == i and self.loop_element[a] == self.groups[i].identity:
                return a
        raise AssertionError("unreachable")

    def morphism(self, i: int, j: int, g: int | None = None) -> int:
        """Index of the loop ``g`` at ``i`` (``i == j``) or of ``e_ij``."""
        for a in range(self.num_morphisms):
            if self.source[a] == i and self.target[a] == j:
                if i != j or self.loop_element[a] == (self.groups[i].identity if g is None else g):
                    return a
        raise KeyError(f"no morphism {i} -> {j}")

    def hom(self, i: int, j: int) -> list[int]:
        return [a for a in range(self.num_morphisms) if self.source[a] == i and self.target[a] == j]

    def compose(self, a: int, b: int) -> int | None:
        """``a`` then ``b``; ``None`` when not composable."""
        if self.target[a] != self.source[b]:
            return None
        i, j, l = self.source[a], self.target[a], self.target[b]
        if i == j == l:
            G = self.groups[i]
            return self.morphism(i, i, G.mul(self.loop_element[a], self.loop_element[b]))
        return self.morphism(i, l)

    def is_composable(self, morphisms: Sequence[int]) -> bool:
        return all(self.target[a] == self.source[b] for a, b in zip(morphisms, morphisms[1:]))

    def random_chain(self, rng: random.Random, length: int, start: int | None = None) -> list[int]:
        """A random composable string of morphisms."""
        obj = rng.randrange(self.num_objects) if start is None else start
        chain = []
        for _ in range(length):
            choices = [a for a in range(self.num_morphisms) if self.source[a] == obj]
            a = rng.choice(choices)
            chain.append(a)
            obj = self.target[a]
        return chain


@dataclass(frozen=True)
class CategoryData:
    """Source/target objects of basis morphisms of a category algebra."""

    num_objects: int
    source: tuple[int, ...]
    target: tuple[int, ...]
    identities: tuple[int, ...]

    def is_composable(self, morphisms: Sequence[int]) -> bool:
        return all(self.target[a] == self.source[b] for a, b in zip(morphisms, morphisms[1:]))


# ---------------------------------------------------------------------------
# based algebras

@dataclass(frozen=True, eq=False)
class BasedAlgebra:
    dim: int
    product: tuple[tuple[Product, ...], ...]
    unit: tuple
    ring: CoefficientRing
    labels: tuple[str, ...] = ()
    name: str = "A"
    idempotent_flag: bool = True
    group: Optional[FiniteGroup] = None
    category: Optional[CategoryData] = None

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidStructure("dim must be positive")
        if len(self.product) != self.dim or any(len(r) != self.dim for r in self.product):
            raise InvalidStructure("product table must be dim x dim")
        if len(self.unit) != self.dim:
            raise InvalidStructure("unit must be a coefficient vector over the basis")
        object.__setattr__(self, "unit", tuple(self.ring(x) for x in self.unit))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"b{i}" for i in range(self.dim)))
        for row in self.product:
            for entry in row:
                if entry is None:
                    continue
                mu, m = entry
                if not 0 <= m < self.dim:
                    raise InvalidStructure("product index out of range")
                if self.idempotent_flag and not self.ring.is_idempotent(mu):
                    raise InvalidStructure(f"structure constant {mu} is not idempotent")
        # structure constants as ring elements, zero products normalised to None
        table = tuple(tuple(None if e is None or self.ring.is_zero(e[0]) else (self.ring(e[0]), e[1])
                            for e in row) for row in self.product)
        object.__setattr__(self, "product", table)

    def __repr__(self):
        return f"BasedAlgebra({self.name}, dim={self.dim}, ring={self.ring})"

    def mul_basis(self, a: int, b: int) -> Product:
        return self.product[a][b]

    @property
    def is_total(self) -> bool:
        """No product of basis elements vanishes."""
        return all(e is not None for row in self.product for e in row)

    @property
    def unital_constants(self) -> bool:
        """Every nonvanishing structure constant equals 1."""
        return all(e is None or e[0] == 1 for row in self.product for e in row)

    def multiply(self, x: Sequence, y: Sequence) -> tuple:
        """Product of two coefficient vectors."""
        out = [self.ring.zero] * self.dim
        for a, xa in enumerate(x):
            if not xa:
                continue
            row = self.product[a]
            for b, yb in enumerate(y):
                if yb and row[b] is not None:
                    mu, m = row[b]
                    out[m] += xa * yb * mu
        return tuple(self.ring(v) for v in out)

    def basis_vector(self, a: int, scale=1) -> tuple:
        return tuple(self.ring(scale) if i == a else self.ring.zero for i in range(self.dim))

    def zero_vector(self) -> tuple:
        return (self.ring.zero,) * self.dim

    def unit_pivot(self) -> int:
        """First basis index in the support of the unit (its coefficient is 1)."""
        for i, c in enumerate(self.unit):
            if c:
                if c != 1:
                    raise InvalidStructure("unit has a non-1 leading coefficient")
                return i
        raise InvalidStructure("zero unit")

    def check_associative(self) -> None:
        for a, b, c in itertools.product(range(self.dim), repeat=3):
            left = _mul_opt(self, _mul_opt(self, (self.ring.one, a), b), c)
            right = _mul_opt_left(self, a, _mul_opt(self, (self.ring.one, b), c))
            if left != right:
                raise InvalidStructure(f"not associative at {(a, b, c)}: {left} != {right}")

    def check_unit(self) -> None:
        for a in range(self.dim):
            e = self.basis_vector(a)
            if self.multiply(self.unit, e) != e or self.multiply(e, self.unit) != e:
                raise InvalidStructure(f"unit does not act as identity on {self.labels[a]}")


def _mul_opt(A, x, b):
    if x is None:
        return None
    mu, a = x
    e = A.product[a][b]
    if e is None:
        return None
    nu, m = e
    s = A.ring(mu * nu)
    return None if s == 0 else (s, m)


def _mul_opt_left(A, a, y):
    if y is None:
        return None
    mu, b = y
    e = A.product[a][b]
    if e is None:
        return None
    nu, m = e
    s = A.ring(mu * nu)
    return None if s == 0 else (s, m)


def multiply_chain(A: BasedAlgebra, indices: Sequence[int]) -> Product:
    """Left-to-right product ``phi_1 ... phi_n`` as ``(scalar, index)`` or ``None``."""
    if not indices:
        raise ValueError("multiply_chain needs at least one factor")
    acc = (A.ring.one, indices[0])
    for b in indices[1:]:
        acc = _mul_opt(A, acc, b)
        if acc is None:
            return None
    return acc


def group_ring(G: FiniteGroup, k: CoefficientRing) -> BasedAlgebra:
    product = tuple(tuple((1, G.mul(g, h)) for h in range(G.order)) for g in range(G.order))
    unit = tuple(int(g == G.identity) for g in range(G.order))
    return BasedAlgebra(G.order, product, unit, k, G.labels, name=f"{k}[G{G.order}]", group=G)


def poset_algebra(P: FinitePoset, k: CoefficientRing) -> BasedAlgebra:
    """Incidence algebra with basis ``e_ij`` (``i <= j``) in lexicographic order."""
    pairs = [(i, j) for i in range(P.size) for j in range(P.size) if P.leq[i][j]]
    index = {p: n for n, p in enumerate(pairs)}
    product = tuple(tuple((1, index[(i, l)]) if j == kk else None for (kk, l) in pairs)
                    for (i, j) in pairs)
    unit = tuple(int(i == j) for i, j in pairs)
    cat = CategoryData(P.size, tuple(i for i, _ in pairs), tuple(j for _, j in pairs),
                       tuple(index[(i, i)] for i in range(P.size)))
    labels = tuple(f"e{i + 1}{j + 1}" for i, j in pairs)
    return BasedAlgebra(len(pairs), product, unit, k, labels, name=f"{k}[P{P.size}]", category=cat)


def amalgam_algebra(C: AmalgamCategory, k: CoefficientRing) -> BasedAlgebra:
    n = C.num_morphisms
    product = tuple(tuple(None if C.compose(a, b) is None else (1, C.compose(a, b)) for b in range(n))
                    for a in range(n))
    ids = tuple(C.identity_morphism(i) for i in range(C.num_objects))
    unit = tuple(int(a in ids) for a in range(n))
    cat = CategoryData(C.num_objects, C.source, C.target, ids)
    return BasedAlgebra(n, product, unit, k, C.labels, name=f"{k}[C]", category=cat)


# ---------------------------------------------------------------------------
# JSON specs

def group_from_spec(spec) -> FiniteGroup:
    """``{"cyclic": n}``, ``{"table": [[...]], "identity": i}`` or ``{"product": [g, h]}``."""
    if isinstance(spec, dict):
        if "cyclic" in spec:
            return FiniteGroup.cyclic(int(spec["cyclic"]))
        if "table" in spec:
            return FiniteGroup(tuple(tuple(r) for r in spec["table"]), int(spec.get("identity", 0)))
        if "product" in spec:
            factors = [group_from_spec(s) for s in spec["product"]]
            G = factors[0]
            for H in factors[1:]:
                G = FiniteGroup.direct_product(G, H)
            return G
    raise InvalidStructure(f"unrecognised group spec: {spec!r}")


def poset_from_spec(spec) -> FinitePoset:
    try:
        return FinitePoset.from_relations(int(spec["size"]), [tuple(r) for r in spec.get("relations", [])])
    except (KeyError, TypeError) as exc:
        raise InvalidStructure(f"unrecognised poset spec: {spec!r}") from exc


def amalgam_from_spec(spec) -> AmalgamCategory:
    try:
        P = poset_from_spec(spec["poset"])
        groups = spec.get("groups")
        if groups is None:
            groups = [{"cyclic": 1}] * P.size
        return AmalgamCategory(P, tuple(group_from_spec(g) for g in groups))
    except (KeyError, TypeError) as exc:
        raise InvalidStructure(f"unrecognised amalgam spec: {spec!r}") from exc
