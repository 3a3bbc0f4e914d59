"""Exact coefficient rings, integer matrices, Smith normal form and cohomology.

Everything here is exact: ring elements are Python ints (for Z and Z/m) or
``fractions.Fraction`` (for Q).  Differentials of cochain complexes are
stored as :class:`IntegerMatrix` with columns indexed by the source basis,
so ``d_out @ d_in`` is the composite of consecutive differentials.

>>> smith_normal_form(IntegerMatrix.from_rows([[2, 4], [6, 8]])).diagonal()
[2, 4]
>>> Z = CoefficientRing.integers()
>>> times2 = IntegerMatrix.from_rows([[2]])
>>> str(cohomology_at(times2, IntegerMatrix.zeros(0, 1), Z))
'Z/2'
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from sympy import isprime


class CompositionNonzero(ValueError):
    """Raised when two consecutive differentials do not compose to zero."""


class RingKind(Enum):
    INTEGERS = "Z"
    INTEGERS_MOD = "Z/m"
    RATIONALS = "Q"


@dataclass(frozen=True)
class CoefficientRing:
    kind: RingKind
    modulus: int = 0

    def __post_init__(self):
        if self.kind is RingKind.INTEGERS_MOD and self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        if self.kind is not RingKind.INTEGERS_MOD and self.modulus != 0:
            raise ValueError("only Z/m carries a modulus")

    @classmethod
    def integers(cls) -> CoefficientRing:
        return cls(RingKind.INTEGERS)

    @classmethod
    def rationals(cls) -> CoefficientRing:
        return cls(RingKind.RATIONALS)

    @classmethod
    def mod(cls, m: int) -> CoefficientRing:
        return cls(RingKind.INTEGERS_MOD, m)

    @classmethod
    def parse(cls, text: str) -> CoefficientRing:
        """Parse ``Z``, ``Q`` or ``Z/m``."""
        text = text.strip()
        if text in ("Z", "ZZ"):
            return cls.integers()
        if text in ("Q", "QQ"):
            return cls.rationals()
        match = re.fullmatch(r"Z/(\d+)", text)
        if match is None:
            raise ValueError(f"unknown coefficient ring {text!r}; expected Z, Q or Z/m")
        return cls.mod(int(match.group(1)))

    def __str__(self):
        if self.kind is RingKind.INTEGERS_MOD:
            return f"Z/{self.modulus}"
        return self.kind.value

    @property
    def is_field(self) -> bool:
        if self.kind is RingKind.RATIONALS:
            return True
        return self.kind is RingKind.INTEGERS_MOD and isprime(self.modulus)

    @property
    def characteristic(self) -> int:
        return self.modulus

    @property
    def zero(self):
        return Fraction(0) if self.kind is RingKind.RATIONALS else 0

    @property
    def one(self):
        return Fraction(1) if self.kind is RingKind.RATIONALS else 1

    def __call__(self, x):
        """Canonical representative of ``x`` in this ring."""
        if self.kind is RingKind.INTEGERS:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if self.kind is RingKind.INTEGERS_MOD:
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus
            return int(x) % self.modulus
        return Fraction(x)

    def is_zero(self, x) -> bool:
        return self(x) == 0

    def is_idempotent(self, x) -> bool:
        return self(x * x) == self(x)

    def divides(self, a, b) -> bool:
        """Whether ``b`` lies in the principal ideal ``a * k``."""
        a, b = self(a), self(b)
        if b == 0:
            return True
        if a == 0:
            return False
        if self.kind is RingKind.RATIONALS:
            return True
        if self.kind is RingKind.INTEGERS:
            return b % a == 0
        return b % math.gcd(a, self.modulus) == 0

    def random_element(self, rng: random.Random, bound: int = 9):
        if self.kind is RingKind.INTEGERS_MOD:
            return rng.randrange(self.modulus)
        if self.kind is RingKind.RATIONALS:
            return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
        return rng.randint(-bound, bound)


@dataclass(frozen=True)
class IntegerMatrix:
    """Dense exact matrix; entries are ring elements (ints or Fractions)."""

    rows: int
    cols: int
    entries: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> IntegerMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntegerMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[dict]) -> IntegerMatrix:
        """Build from sparse columns ``{row_index: value}``."""
        data = [0] * (rows * len(columns))
        ncols = len(columns)
        for j, column in enumerate(columns):
            for i, v in column.items():
                data[i * ncols + j] = v
        return cls(rows, ncols, tuple(data))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def sparse_rows(self) -> list[dict[int, object]]:
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.append({j: v for j, v in enumerate(r) if v})
        return out

    def sparse_columns(self) -> list[dict[int, object]]:
        cols = [dict() for _ in range(self.cols)]
        for idx, v in enumerate(self.entries):
            if v:
                cols[idx % self.cols][idx // self.cols] = v
        return cols

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], self.rows)

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        left = self.sparse_rows()
        right = other.sparse_rows()
        data = []
        for r in left:
            acc = [0] * other.cols
            for k, a in r.items():
                for j, b in right[k].items():
                    acc[j] += a * b
            data.extend(acc)
        return IntegerMatrix(self.rows, other.cols, tuple(data))

    def reduce(self, ring: CoefficientRing) -> IntegerMatrix:
        return IntegerMatrix(self.rows, self.cols, tuple(ring(x) for x in self.entries))

    def is_zero(self, ring: CoefficientRing | None = None) -> bool:
        if ring is None:
            return not any(self.entries)
        return all(ring.is_zero(x) for x in self.entries)

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)


@dataclass(frozen=True)
class SmithForm:
    U: IntegerMatrix
    S: IntegerMatrix
    V: IntegerMatrix

    def diagonal(self) -> list[int]:
        return [self.S[i, i] for i in range(min(self.S.rows, self.S.cols))]

    def invariant_factors(self) -> list[int]:
        """Nonzero diagonal entries (including 1s)."""
        return [d for d in self.diagonal() if d]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors())


@dataclass(frozen=True)
class CohomologyGroup:
    """``k^free_rank`` plus cyclic torsion summands ``Z/t`` with ``t[i] | t[i+1]``.

    Over ``Z/m`` the free part counts summands isomorphic to ``Z/m`` itself.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()
    ring: CoefficientRing = field(default_factory=CoefficientRing.integers, compare=False)

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        if any(x < 2 for x in t):
            raise ValueError(f"torsion coefficients must be >= 2: {t}")
        if any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion is not a divisibility chain: {t}")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_cyclic(cls, orders: Iterable[int], free_rank: int = 0,
                    ring: CoefficientRing | None = None) -> CohomologyGroup:
        """Normalise an arbitrary list of cyclic orders into invariant factors."""
        ring = ring or CoefficientRing.integers()
        orders = [int(o) for o in orders if o != 1]
        if any(o < 1 for o in orders):
            raise ValueError("cyclic orders must be positive")
        factors = invariant_factors_of_diagonal(orders)
        if ring.kind is RingKind.INTEGERS_MOD:
            free_rank += sum(1 for f in factors if f == ring.modulus)
            factors = [f for f in factors if f != ring.modulus]
        return cls(free_rank, tuple(factors), ring)

    def direct_sum(self, other: CohomologyGroup) -> CohomologyGroup:
        return CohomologyGroup.from_cyclic(self.torsion + other.torsion,
                                           self.free_rank + other.free_rank, self.ring)

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_dict(self) -> dict:
        return {"free": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = [f"Z/{t}" for t in self.torsion]
        if self.free_rank:
            name = str(self.ring)
            if "/" in name:
                name = f"({name})"
            parts.append(name if self.free_rank == 1 else f"{name}^{self.free_rank}")
        return " ⊕ ".join(parts) if parts else "0"


def invariant_factors_of_diagonal(orders: Sequence[int]) -> list[int]:
    """Invariant factors (> 1) of ``Z/o_1 + ... + Z/o_k``."""
    if not orders:
        return []
    n = len(orders)
    A = IntegerMatrix(n, n, tuple(orders[i] if i == j else 0 for i in range(n) for j in range(n)))
    return [d for d in _diagonalize(A.to_rows()) if d > 1]


# ---------------------------------------------------------------------------
# Smith normal form

def _identity_rows(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _snf_dense(M: list[list[int]], track: bool):
    """In-place Smith reduction of integer rows ``M``.

    With ``track`` returns ``(U, V, Vinv)`` such that ``U*A*V`` is the final
    ``M``.  ``Vinv`` is kept because the Z/m cohomology path needs it.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    U = _identity_rows(m) if track else None
    V = _identity_rows(n) if track else None
    Vinv = _identity_rows(n) if track else None

    def swap_rows(a, b):
        M[a], M[b] = M[b], M[a]
        if track:
            U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for r in M:
            r[a], r[b] = r[b], r[a]
        if track:
            for r in V:
                r[a], r[b] = r[b], r[a]
            Vinv[a], Vinv[b] = Vinv[b], Vinv[a]

    def add_row(dst, src, c):  # row dst += c * row src
        if c:
            Md, Ms = M[dst], M[src]
            for k in range(n):
                if Ms[k]:
                    Md[k] += c * Ms[k]
            if track:
                Ud, Us = U[dst], U[src]
                for k in range(m):
                    if Us[k]:
                        Ud[k] += c * Us[k]

    def add_col(dst, src, c):  # col dst += c * col src
        if c:
            for r in M:
                if r[src]:
                    r[dst] += c * r[src]
            if track:
                for r in V:
                    if r[src]:
                        r[dst] += c * r[src]
                # inverse: row src of Vinv -= c * row dst
                Vd, Vs = Vinv[dst], Vinv[src]
                for k in range(n):
                    if Vd[k]:
                        Vs[k] -= c * Vd[k]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // p))
                    if M[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // p))
                    if M[t][j]:
                        dirty = True
            if dirty:
                # move the smallest leftover in row/column t to the pivot
                cand = [(abs(M[i][t]), i, t) for i in range(t + 1, m) if M[i][t]]
                cand += [(abs(M[t][j]), t, j) for j in range(t + 1, n) if M[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if M[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            if track:
                U[t] = [-x for x in U[t]]
        t += 1
    return U, V, Vinv


def _diagonalize(rows: list[list[int]]) -> list[int]:
    M = [list(r) for r in rows]
    _snf_dense(M, track=False)
    return [M[i][i] for i in range(min(len(M), len(M[0]) if M else 0))]


def smith_normal_form(A: IntegerMatrix) -> SmithForm:
    """Smith normal form ``U A V = S`` of an integer matrix."""
    if any(isinstance(x, Fraction) and x.denominator != 1 for x in A.entries):
        raise ValueError("smith_normal_form needs integer entries")
    M = [[int(x) for x in A.row(i)] for i in range(A.rows)]
    U, V, _ = _snf_dense(M, track=True)
    if A.rows == 0:
        U, V = [], [[int(i == j) for j in range(A.cols)] for i in range(A.cols)]
    if A.cols == 0:
        U, V = [[int(i == j) for j in range(A.rows)] for i in range(A.rows)], []
    return SmithForm(IntegerMatrix.from_rows(U, A.rows), IntegerMatrix.from_rows(M, A.cols),
                     IntegerMatrix.from_rows(V, A.cols))


def _sparse_unit_elimination(rows: list[dict[int, int]], modulus: int = 0):
    """Eliminate unit pivots from sparse integer rows.

    Each unit pivot contributes an invariant factor 1 and is removed together
    with its row and column.  Returns ``(unit_count, remaining_rows)``.  With a
    prime ``modulus`` every nonzero entry is a unit, so the remainder is empty
    and ``unit_count`` is the rank mod p.
    """
    rows = [dict(r) for r in rows if r]
    col_index: dict[int, set[int]] = {}
    for ri, r in enumerate(rows):
        for c in r:
            col_index.setdefault(c, set()).add(ri)
    alive = set(range(len(rows)))
    units = 0

    def is_unit(v):
        return v in (1, -1) if not modulus else v % modulus != 0

    progress = True
    while progress:
        progress = False
        for ri in sorted(alive, key=lambda i: len(rows[i])):
            if ri not in alive:
                continue
            r = rows[ri]
            if not r:
                alive.discard(ri)
                continue
            cands = [c for c, v in r.items() if is_unit(v)]
            if not cands:
                continue
            c = min(cands, key=lambda k: len(col_index[k]))
            pv = r[c]
            inv = pv if not modulus else pow(pv, -1, modulus)  # pv = +-1 over Z
            for rj in list(col_index[c]):
                if rj == ri:
                    continue
                s = rows[rj]
                factor = s[c] * inv
                if modulus:
                    factor %= modulus
                for k, v in r.items():
                    nv = s.get(k, 0) - factor * v
                    if modulus:
                        nv %= modulus
                    if nv:
                        if k not in s:
                            col_index[k].add(rj)
                        s[k] = nv
                    elif k in s:
                        del s[k]
                        col_index[k].discard(rj)
                if not s:
                    alive.discard(rj)
            for k in r:
                col_index[k].discard(ri)
            alive.discard(ri)
            units += 1
            progress = True
    return units, [rows[i] for i in sorted(alive) if rows[i]]


def _integer_rows(A: IntegerMatrix) -> list[dict[int, int]]:
    """Sparse integer rows, clearing denominators row by row (rank-preserving only)."""
    out = []
    for r in A.sparse_rows():
        if any(isinstance(v, Fraction) for v in r.values()):
            den = reduce(math.lcm, (Fraction(v).denominator for v in r.values()), 1)
            r = {k: int(Fraction(v) * den) for k, v in r.items()}
        out.append(r)
    return out


def integer_invariant_factors(A: IntegerMatrix) -> list[int]:
    """Nonzero invariant factors (with 1s) of an integer matrix, via sparse elimination."""
    units, rest = _sparse_unit_elimination(_integer_rows(A))
    if not rest:
        return [1] * units
    cols = sorted({c for r in rest for c in r})
    pos = {c: i for i, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rest]
    for i, r in enumerate(rest):
        for c, v in r.items():
            dense[i][pos[c]] = v
    return [1] * units + [abs(d) for d in _diagonalize(dense) if d]


def _bareiss_rank(rows: list[dict[int, int]]) -> int:
    """Rank of integer rows by fraction-free elimination."""
    cols = sorted({c for r in rows for c in r})
    pos = {c: i for i, c in enumerate(cols)}
    M = [[0] * len(cols) for _ in rows]
    for i, r in enumerate(rows):
        for c, v in r.items():
            M[i][pos[c]] = v
    rk, prev = 0, 1
    for c in range(len(cols)):
        piv = next((i for i in range(rk, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        p = M[rk][c]
        for i in range(rk + 1, len(M)):
            a = M[i][c]
            Mi, Mr = M[i], M[rk]
            for j in range(c, len(cols)):
                Mi[j] = (p * Mi[j] - a * Mr[j]) // prev
        prev = p
        rk += 1
    return rk


def rank(A: IntegerMatrix, ring: CoefficientRing) -> int:
    """Rank over Q (for Z and Q) or over the prime field Z/p."""
    if ring.kind is RingKind.INTEGERS_MOD:
        if not ring.is_field:
            raise ValueError("rank is only defined here over fields and Z")
        rows = [{k: ring(v) for k, v in r.items() if ring(v)} for r in A.sparse_rows()]
        units, rest = _sparse_unit_elimination(rows, ring.modulus)
        assert not rest
        return units
    units, rest = _sparse_unit_elimination(_integer_rows(A))
    return units + (_bareiss_rank(rest) if rest else 0)


def check_composition(d_in: IntegerMatrix, d_out: IntegerMatrix, ring: CoefficientRing) -> None:
    if d_out.cols != d_in.rows:
        raise ValueError(f"differentials not composable: {d_out.rows}x{d_out.cols} "
                         f"after {d_in.rows}x{d_in.cols}")
    if d_in.cols and d_out.rows and not (d_out @ d_in).is_zero(ring):
        raise CompositionNonzero("d_out . d_in != 0")


def cohomology_at(d_in: IntegerMatrix, d_out: IntegerMatrix, ring: CoefficientRing) -> CohomologyGroup:
    """``ker(d_out) / im(d_in)`` over ``ring``.

    Over Z the torsion is read off the invariant factors of ``d_in`` (the
    kernel of ``d_out`` is a direct summand since the next cochain group is
    free).  Over fields only ranks are needed.  Over composite Z/m the kernel
    is parametrised through the Smith form of the lifted ``d_out``.
    """
    check_composition(d_in, d_out, ring)
    n = d_in.rows
    if ring.kind is RingKind.INTEGERS:
        fin = integer_invariant_factors(d_in)
        r_out = rank(d_out, ring)
        return CohomologyGroup.from_cyclic([f for f in fin if f > 1], n - r_out - len(fin), ring)
    if ring.is_field:
        return CohomologyGroup(n - rank(d_out, ring) - rank(d_in, ring), (), ring)
    return _cohomology_mod_composite(d_in, d_out, ring)


def _cohomology_mod_composite(d_in, d_out, ring):
    m = ring.modulus
    n = d_in.rows
    if n == 0:
        return CohomologyGroup(0, (), ring)
    D = [[ring(x) for x in d_out.row(i)] for i in range(d_out.rows)]
    if not D:
        D = [[0] * n]
    _, V, Vinv = _snf_dense(D, track=True)
    diag = [D[i][i] if i < len(D) else 0 for i in range(n)]
    gens = [math.gcd(s, m) for s in diag]  # ker = sum Z/g_i, generator (m/g_i) e_i
    Y = IntegerMatrix.from_rows(Vinv, n) @ d_in.reduce(ring)
    rows = []
    for i in range(n):
        step = m // gens[i]
        coords = []
        for j in range(Y.cols):
            y = Y[i, j] % m
            if y % step:
                raise CompositionNonzero("image of d_in leaves ker d_out mod m")
            coords.append((y // step) % gens[i])
        rows.append(coords + [gens[i] if k == i else 0 for k in range(n)])
    orders = [abs(d) for d in _diagonalize(rows)]
    return CohomologyGroup.from_cyclic(orders, 0, ring)
