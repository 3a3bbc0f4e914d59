"""Cohomology tables and the verification reports built on them.

Every report is a plain dict::

    {"check": name, "inputs": {...},
     "per_degree": [{"degree": n, "lhs": {"free", "torsion"}, "rhs": {...}, "match": bool}],
     "pass": bool}

Identity reports (:func:`verify_einfty_identities`) carry a ``checks`` list
instead of ``per_degree`` entries for cohomology.
"""

from __future__ import annotations

import random
from typing import Callable, Optional

from . import bridge
from .based_algebra import AmalgamCategory, BasedAlgebra, FiniteGroup, amalgam_algebra, group_ring
from .coeff import CoefficientRing, CohomologyGroup, IntegerMatrix, cohomology_at
from .hochschild import (APCochain, HochschildCochain, Variant, _memo, ap_split, build_complex,
                         cochain_dimension, delta, embed, gerstenhaber, is_autopoietic,
                         is_non_autopoietic, pre_lie)
from .simplicial import (SignConvention, SimplicialCochain, SimplicialSlice, bar, coboundary,
                         coboundary_formula_terms, cup, cup_i, cyclic_bar, nerve)

DEFAULT_COCHAIN_LIMIT = 50_000


class DegreeCapExceeded(ValueError):
    pass


def default_degree_cap(dim: int) -> int:
    """Highest cohomological degree computed by default for a basis of size ``dim``."""
    if dim <= 4:
        return 4
    if dim <= 8:
        return 3
    return 2


def check_degree(max_degree: int, cap: int, dims: Callable[[int], int], limit: int = DEFAULT_COCHAIN_LIMIT):
    """Reject requests above the degree cap or whose cochain groups exceed ``limit``."""
    if max_degree < 1:
        raise DegreeCapExceeded("max_degree must be at least 1")
    if max_degree - 1 > cap:
        raise DegreeCapExceeded(f"degrees up to {max_degree - 1} requested, cap is {cap}")
    biggest = dims(max_degree)
    if biggest > limit:
        raise DegreeCapExceeded(f"cochain group of rank {biggest} in degree {max_degree} exceeds limit {limit}")


def cohomology_from_differentials(diffs: list[IntegerMatrix], dims: list[int],
                                  ring: CoefficientRing) -> list[CohomologyGroup]:
    """``H^n`` for ``n < len(diffs)``; ``diffs[n]`` maps degree n to n+1."""
    out = []
    for n, d_out in enumerate(diffs):
        d_in = diffs[n - 1] if n else IntegerMatrix.zeros(dims[0], 0)
        out.append(cohomology_at(d_in, d_out, ring))
    return out


def hochschild_cohomology(A: BasedAlgebra, variant: Variant, max_degree: int,
                          ring: Optional[CoefficientRing] = None, cap: Optional[int] = None,
                          limit: int = DEFAULT_COCHAIN_LIMIT) -> list[CohomologyGroup]:
    """``HH^n`` of the chosen complex for ``n = 0 .. max_degree - 1``."""
    ring = ring or A.ring
    check_degree(max_degree, default_degree_cap(A.dim) if cap is None else cap,
                 lambda n: cochain_dimension(A, variant, n), limit)
    diffs = build_complex(A, variant, max_degree)
    dims = [d.cols for d in diffs]
    return cohomology_from_differentials(diffs, dims, ring)


def simplicial_cohomology(X: SimplicialSlice, ring: CoefficientRing, max_degree: int) -> list[CohomologyGroup]:
    """``H^n(X; ring)`` for ``n = 0 .. max_degree - 1`` (X must store degree max_degree)."""
    if X.max_degree < max_degree:
        raise DegreeCapExceeded(f"{X} stores degrees up to {X.max_degree}, need {max_degree}")
    diffs = [X.coboundary_matrix(n) for n in range(max_degree)]
    return cohomology_from_differentials(diffs, [X.count(n) for n in range(max_degree + 1)], ring)


# ---------------------------------------------------------------------------
# reports

def construction_ring(ring: CoefficientRing) -> CoefficientRing:
    # complexes are assembled over Z (all structure constants are 1) and reduced later
    return CoefficientRing.integers() if ring.kind.name != "RATIONALS" else ring


def _compare(check: str, inputs: dict, lhs: list[CohomologyGroup], rhs: list[CohomologyGroup], **extra) -> dict:
    rows = [{"degree": n, "lhs": a.to_dict(), "rhs": b.to_dict(), "match": a == b}
            for n, (a, b) in enumerate(zip(lhs, rhs))]
    report = {"check": check, "inputs": inputs, "per_degree": rows,
              "pass": len(lhs) == len(rhs) and all(r["match"] for r in rows)}
    report.update(extra)
    return report


def _table(groups: list[CohomologyGroup]) -> list[dict]:
    return [g.to_dict() for g in groups]


def _sum_tables(*tables: list[CohomologyGroup]) -> list[CohomologyGroup]:
    out = list(tables[0])
    for t in tables[1:]:
        out = [a.direct_sum(b) for a, b in zip(out, t)]
    return out


def group_inputs(G: FiniteGroup, ring: CoefficientRing, max_degree: int) -> dict:
    return {"group_order": G.order, "ring": str(ring), "max_degree": max_degree}


def verify_ap_iso(G: FiniteGroup, ring: CoefficientRing, max_degree: int, cap: Optional[int] = None) -> dict:
    """``H^n(AP(k[G]))`` against ``H^n(BG; k)`` from the bar construction."""
    A = group_ring(G, construction_ring(ring))
    lhs = hochschild_cohomology(A, Variant.AP, max_degree, ring, cap)
    rhs = simplicial_cohomology(bar(G, max_degree), ring, max_degree)
    return _compare("ap_iso", group_inputs(G, ring, max_degree), lhs, rhs)


def verify_splitting(G: FiniteGroup, ring: CoefficientRing, max_degree: int, cap: Optional[int] = None) -> dict:
    """``H^n(Full) = H^n(AP) + H^n(NP)`` degree by degree."""
    A = group_ring(G, construction_ring(ring))
    full = hochschild_cohomology(A, Variant.FULL, max_degree, ring, cap)
    ap = hochschild_cohomology(A, Variant.AP, max_degree, ring, cap)
    np_ = hochschild_cohomology(A, Variant.NP, max_degree, ring, cap)
    dims = [{"degree": n, "full": cochain_dimension(A, Variant.FULL, n),
             "ap": cochain_dimension(A, Variant.AP, n), "np": cochain_dimension(A, Variant.NP, n)}
            for n in range(max_degree + 1)]
    report = _compare("splitting", group_inputs(G, ring, max_degree), full, _sum_tables(ap, np_),
                      tables={"full": _table(full), "ap": _table(ap), "np": _table(np_)}, dimensions=dims)
    report["pass"] = report["pass"] and all(d["ap"] + d["np"] == d["full"] for d in dims)
    return report


def amalgam_inputs(C: AmalgamCategory, ring: CoefficientRing, max_degree: int) -> dict:
    P = C.poset
    relations = [[i, j] for i in range(P.size) for j in range(P.size) if P.strictly_below(i, j)]
    return {"objects": P.size, "relations": relations, "group_orders": [G.order for G in C.groups],
            "ring": str(ring), "max_degree": max_degree}


def verify_amalgam_theorem(C: AmalgamCategory, ring: CoefficientRing, max_degree: int,
                           cap: Optional[int] = None) -> dict:
    """``HH^*(k[C])`` (E-relative complex) against ``H^*(BC) + sum_i H^*(NP(k[G_i]))``."""
    A = amalgam_algebra(C, construction_ring(ring))
    lhs = hochschild_cohomology(A, Variant.RELATIVE, max_degree, ring, cap)
    base = simplicial_cohomology(nerve(C, max_degree), ring, max_degree)
    tables = {"relative": _table(lhs), "nerve": _table(base)}
    pieces = [base]
    for i, G in enumerate(C.groups):
        Ai = group_ring(G, construction_ring(ring))
        np_ = hochschild_cohomology(Ai, Variant.NP, max_degree, ring, cap)
        full = hochschild_cohomology(Ai, Variant.FULL, max_degree, ring, cap)
        ap = hochschild_cohomology(Ai, Variant.AP, max_degree, ring, cap)
        tables[f"object{i}"] = {"full": _table(full), "ap": _table(ap), "np": _table(np_)}
        pieces.append(np_)
    rhs = _sum_tables(*pieces)
    return _compare("amalgam_theorem", amalgam_inputs(C, ring, max_degree), lhs, rhs, tables=tables)


# ---------------------------------------------------------------------------
# randomized cochain identities

def _identity_checks(A: BasedAlgebra, rng: random.Random, trials: int, max_p: int) -> list[tuple]:
    """``(name, predicate, informational)`` triples; each predicate draws its own inputs."""
    R = A.ring
    grp = A.group is not None
    top = 2 * max_p + 1
    X = bridge.bar_slice(A, top)

    def deg(lo=0):
        return rng.randint(lo, max_p)

    def rand_alpha(n):
        return SimplicialCochain.random(X, n, rng, R)

    def delta_squared():
        f = HochschildCochain.random(A, deg(), rng)
        return delta(delta(f)).is_zero()

    def coboundary_squared():
        a = rand_alpha(deg())
        return coboundary(coboundary(a)).is_zero()

    def ap_closed():
        f = APCochain.random(A, deg(), rng)
        return is_autopoietic(delta(embed(f)))

    def np_closed():
        _, np_ = ap_split(HochschildCochain.random(A, deg(), rng))
        return is_non_autopoietic(delta(np_))

    def ap_gerstenhaber():
        f, g = APCochain.random(A, deg(), rng), APCochain.random(A, deg(), rng)
        return is_autopoietic(gerstenhaber(embed(f), embed(g)))

    def ap_pre_lie():
        f, g = APCochain.random(A, deg(1), rng), APCochain.random(A, deg(1), rng)
        return is_autopoietic(pre_lie(embed(f), embed(g)))

    def phi_psi():
        a = rand_alpha(deg())
        return bridge.phi_general(bridge.psi(a, A), X) == a

    def psi_phi():
        f = APCochain.random(A, deg(), rng)
        return bridge.psi(bridge.phi_general(f, X), A) == f

    def psi_cochain_map():
        a = rand_alpha(deg())
        return embed(bridge.psi(coboundary(a), A)) == delta(embed(bridge.psi(a, A)))

    def phi_cochain_map():
        f = APCochain.random(A, deg(), rng)
        return bridge.phi_general(bridge.ap_delta(f), X) == coboundary(bridge.phi_general(f, X))

    def phi_n_cochain_map():
        n = deg()
        f = HochschildCochain.random(A, n, rng)
        Y = _cyclic(A, n + 1)
        return bridge.phi_n(delta(f), Y) == coboundary(bridge.phi_n(f, Y))

    def psi_cup():
        a, b = rand_alpha(deg()), rand_alpha(deg())
        return embed(bridge.psi(cup(a, b), A)) == gerstenhaber(embed(bridge.psi(a, A)), embed(bridge.psi(b, A)))

    def psi_cup1():
        a, b = rand_alpha(deg(1)), rand_alpha(deg(1))
        return embed(bridge.psi(cup_i(a, b, 1), A)) == pre_lie(embed(bridge.psi(a, A)), embed(bridge.psi(b, A)))

    def cup_i_formula(i, convention):
        def check():
            while True:
                p, q = deg(), deg()
                if p + q >= i:
                    break
            a, b = rand_alpha(p), rand_alpha(q)
            lhs, rhs = coboundary_formula_terms(a, b, i, cup_i, coboundary, convention)
            return lhs == rhs
        return check

    def ap_cup_i_formula(i, convention):
        def check():
            while True:
                p, q = deg(), deg()
                if p + q >= i:
                    break
            f, g = APCochain.random(A, p, rng), APCochain.random(A, q, rng)
            lhs, rhs = coboundary_formula_terms(f, g, i, bridge.ap_product, bridge.ap_delta, convention)
            return lhs == rhs
        return check

    checks = [
        ("delta_squared", delta_squared, False),
        ("coboundary_squared", coboundary_squared, False),
        ("ap_subcomplex", ap_closed, False),
    ]
    if grp:
        checks.append(("np_subcomplex", np_closed, False))
    checks += [
        ("ap_closed_gerstenhaber", ap_gerstenhaber, False),
        ("ap_closed_pre_lie", ap_pre_lie, False),
        ("phi_after_psi", phi_psi, False),
        ("psi_after_phi_on_ap", psi_phi, False),
        ("psi_cochain_map", psi_cochain_map, False),
        ("phi_cochain_map", phi_cochain_map, False),
    ]
    if grp:
        checks.append(("phi_n_cochain_map", phi_n_cochain_map, False))
    checks += [
        ("psi_cup_is_gerstenhaber", psi_cup, False),
        ("psi_cup1_is_pre_lie", psi_cup1, False),
        ("cup1_coboundary_formula", cup_i_formula(1, SignConvention.UNIFORM), False),
        ("cup2_coboundary_formula_integral", cup_i_formula(2, SignConvention.INTEGRAL), False),
        ("cup3_coboundary_formula_integral", cup_i_formula(3, SignConvention.INTEGRAL), False),
        ("ap_cup1_coboundary_formula", ap_cup_i_formula(1, SignConvention.UNIFORM), False),
        ("ap_cup2_coboundary_formula_integral", ap_cup_i_formula(2, SignConvention.INTEGRAL), False),
        ("ap_cup3_coboundary_formula_integral", ap_cup_i_formula(3, SignConvention.INTEGRAL), False),
        ("cup2_coboundary_formula_uniform", cup_i_formula(2, SignConvention.UNIFORM), True),
        ("cup3_coboundary_formula_uniform", cup_i_formula(3, SignConvention.UNIFORM), True),
    ]
    return checks


def _cyclic(A: BasedAlgebra, n: int) -> SimplicialSlice:
    return _memo("cyclic", A, n, lambda: cyclic_bar(A.group, n))


def verify_einfty_identities(A: BasedAlgebra, trials: int = 100, seed: int = 0, max_p: int = 3) -> dict:
    """Randomized exact checks of the cochain-level identities on ``A``.

    Checks flagged ``informational`` are reported but do not affect ``pass``.
    """
    rng = random.Random(seed)
    results = []
    for name, check, informational in _identity_checks(A, rng, trials, max_p):
        passed = sum(1 for _ in range(trials) if check())
        results.append({"name": name, "trials": trials, "passed": passed,
                        "pass": passed == trials, "informational": informational})
    return {"check": "einfty_identities",
            "inputs": {"algebra": A.name, "dim": A.dim, "ring": str(A.ring), "trials": trials,
                       "seed": seed, "max_p": max_p},
            "per_degree": [], "checks": results,
            "pass": all(r["pass"] for r in results if not r["informational"])}
