"""Redundancy elimination with irredundancy witnesses.

A constraint is redundant iff no point satisfies all the others while
violating it.  Each kept constraint therefore comes with a witness point
violating it alone; the region traversal uses those witnesses as its next
probe directions.  The parallel driver mirrors the shared atomic flag array
scheme: a constraint may be tested against a stale (still larger) survivor
set, which can only keep extra work, never extra constraints.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Optional, Sequence

from .exact_arith import (
    EQ,
    LE,
    CanonicalConstraint,
    RationalVector,
    TRIVIALLY_FALSE,
    TRIVIALLY_TRUE,
    rat,
    vec,
    vec_dot,
)
from .lp_core import ConstraintLPResult, LPStatus, optimize_over_constraints


class EmptyPolyhedron(Exception):
    """The constraint system is unsatisfiable."""


class OracleCapExceeded(RuntimeError):
    """A test oracle was asked to run beyond its configured size guard."""


class RedundancyFlags:
    """Grow-only array of booleans; a flag set true never reverts."""

    def __init__(self, n: int):
        self._flags = [False] * n
        self._lock = threading.Lock()

    def get(self, i: int) -> bool:
        return self._flags[i]  # single read, atomic under the GIL

    def set_true(self, i: int) -> None:
        with self._lock:
            self._flags[i] = True

    def snapshot(self) -> list:
        return list(self._flags)


_SNAP_DENOMINATORS = (16, 512, 65536)


def snap_point(
    point: Sequence,
    acceptable,
    tiers: tuple = _SNAP_DENOMINATORS,
    skip_below: int = _SNAP_DENOMINATORS[0],
) -> tuple:
    """Low-denominator approximation of a rational point, exactly verified.

    LP vertices carry determinant-sized denominators that would otherwise
    cascade into every downstream computation; `acceptable(candidate)` must
    re-check the property the point is meant to certify.  Falls back to the
    original point when no approximation qualifies.
    """
    point = tuple(rat(v) for v in point)
    if all(v.denominator <= skip_below for v in point):
        return point
    for den in tiers:
        cand = tuple(
            rat(Fraction(int(v.numerator), int(v.denominator)).limit_denominator(den))
            for v in point
        )
        if acceptable(cand):
            return cand
    return point


def syntactic_minimize(constraints: Sequence) -> list:
    """Drop trivially-true rows and bound-dominated duplicates.

    Identical coefficient vectors keep the smaller bound; a trivially false
    row (or contradictory equality pair) raises EmptyPolyhedron.
    """
    by_key: dict = {}
    order: list = []
    for con in constraints:
        if con is TRIVIALLY_TRUE:
            continue
        if con is TRIVIALLY_FALSE:
            raise EmptyPolyhedron("trivially false constraint")
        key = (con.coeffs, con.relation)
        prev = by_key.get(key)
        if prev is None:
            by_key[key] = con
            order.append(key)
        elif con.relation == EQ:
            if prev.bound != con.bound:
                raise EmptyPolyhedron("contradictory equalities")
        elif con.bound < prev.bound:
            by_key[key] = con
    return [by_key[k] for k in order]


def check_sat(
    weak: Sequence[CanonicalConstraint],
    negated: CanonicalConstraint,
    slack_cap: int = 1,
    assume_feasible: bool = False,
) -> Optional[RationalVector]:
    """Point satisfying all of `weak` while strictly violating `negated`.

    Maximizes a slack t with negated.coeffs·x >= bound + t·|a|_1 (t capped
    to keep the LP bounded; measuring the slack in units of the coefficient
    scale keeps witnesses well clear of the facet).  A strictly positive
    optimum yields the witness, a nonpositive one proves redundancy.  Raises
    EmptyPolyhedron when `weak` itself is unsatisfiable.

    `assume_feasible` lets a weak-duality bound t* <= 0 settle redundancy
    without an exact simplex; only valid when the caller knows `weak` is
    satisfiable (a dual bound on an empty system proves nothing).
    """
    if negated.relation != LE:
        raise ValueError("only inequalities can be negated")
    dim = negated.dim
    ext = []
    for con in weak:
        ext.append(
            CanonicalConstraint(con.coeffs + (0,), con.bound, con.relation)
        )
    norm1 = sum(abs(c) for c in negated.coeffs)
    ext.append(
        CanonicalConstraint(
            tuple(-c for c in negated.coeffs) + (norm1,), -negated.bound, LE
        )
    )
    ext.append(CanonicalConstraint((0,) * dim + (1,), slack_cap, LE))
    objective = (0,) * dim + (1,)
    # any exact feasible point with t > 0 is a witness; a redundancy verdict
    # (max t <= 0) needs the full certificate or a dual bound
    out: ConstraintLPResult = optimize_over_constraints(
        ext,
        dim + 1,
        objective,
        good_enough=lambda t: t > 0,
        bad_enough=(lambda ub: ub <= 0) if assume_feasible else None,
    )
    if out.status is LPStatus.INFEASIBLE:
        raise EmptyPolyhedron("weak constraint system is unsatisfiable")
    if out.status is LPStatus.UNBOUNDED:  # impossible: t is capped
        raise RuntimeError("slack LP unbounded despite cap")
    if out.bound_only or out.value <= 0:
        return None
    witness = out.point[:dim]
    return snap_point(
        witness,
        lambda p: negated.evaluate(p) > negated.bound
        and all(w.holds(p) for w in weak),
        tiers=(4096, 2**20),
        skip_below=4096,
    )


def eliminate_redundancy(
    constraints: Sequence[CanonicalConstraint],
    mode: str = "sequential",
    max_workers: Optional[int] = None,
    feasible_point: Optional[Sequence] = None,
) -> tuple[list, list]:
    """Irredundant subset plus one witness per kept constraint.

    `constraints` must already be syntactically minimized (no exact
    duplicates).  Returns (kept, witnesses) in input order.  A known
    `feasible_point` of the system unlocks cheaper redundancy verdicts
    (weak-duality bounds instead of exact simplex runs).
    """
    n = len(constraints)
    if n == 0:
        return [], []
    if feasible_point is not None and len(feasible_point) != constraints[0].dim:
        feasible_point = None
    assume_feasible = feasible_point is not None and all(
        con.holds(feasible_point) for con in constraints
    )
    flags = RedundancyFlags(n)
    witnesses: list = [None] * n

    def test(i: int) -> None:
        con = constraints[i]
        if assume_feasible:
            # cheap witness candidate: the feasible point pushed through
            # facet i; if it exactly violates only i, the LP is not needed
            cand = fallback_witness(feasible_point, con)
            if con.evaluate(cand) > con.bound and all(
                constraints[j].holds(cand)
                for j in range(n)
                if j != i and not flags.get(j)
            ):
                witnesses[i] = snap_point(
                    cand,
                    lambda p: con.evaluate(p) > con.bound
                    and all(
                        constraints[j].holds(p)
                        for j in range(n)
                        if j != i and not flags.get(j)
                    ),
                    tiers=(4096,),
                    skip_below=2**20,
                )
                return
        weak = [
            constraints[j]
            for j in range(n)
            if j != i and not flags.get(j)
        ]
        w = check_sat(weak, con, assume_feasible=assume_feasible)
        if w is None:
            flags.set_true(i)
        else:
            witnesses[i] = w

    if mode == "parallel":
        workers = max_workers or min(n, 8)
        with ThreadPoolExecutor(max_workers=workers) as ex:
            futures = [ex.submit(test, i) for i in range(n)]
            for f in futures:
                f.result()
    elif mode == "sequential":
        for i in range(n):
            test(i)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    kept = []
    kept_wits = []
    for i in range(n):
        if not flags.get(i):
            kept.append(constraints[i])
            kept_wits.append(witnesses[i])
    return kept, kept_wits


def chebyshev_point(
    ineqs: Sequence[CanonicalConstraint], dim: int
) -> Optional[tuple]:
    """Uniform-slack interior point: maximize t with a·x + t·|a|_1 <= b.

    The slack is capped at 1 so unbounded polyhedra stay solvable; returns
    (point, t) with t > 0 iff the system has a strict interior, t = 0 when it
    is flat, or None when it is empty.
    """
    if not ineqs:
        return (rat(0),) * dim, rat(1)
    ext = []
    for con in ineqs:
        if con.relation != LE:
            raise ValueError("chebyshev_point expects inequalities only")
        norm1 = sum(abs(c) for c in con.coeffs)
        ext.append(CanonicalConstraint(con.coeffs + (norm1,), con.bound, LE))
    ext.append(CanonicalConstraint((0,) * dim + (1,), 1, LE))
    ext.append(CanonicalConstraint((0,) * dim + (-1,), 0, LE))  # t >= 0
    objective = (0,) * dim + (1,)
    # any verified point with t > 0 is interior; only the flat/empty
    # distinction needs the exact optimum
    out = optimize_over_constraints(
        ext, dim + 1, objective, good_enough=lambda t: t > 0
    )
    if out.status is LPStatus.INFEASIBLE:
        return None
    if out.status is not LPStatus.OPTIMAL:
        raise RuntimeError("chebyshev LP should be bounded")
    point = out.point[:dim]
    if out.value > 0:
        point = snap_point(
            point, lambda p: all(c.holds_strictly(p) for c in ineqs)
        )
    return point, out.value


def fallback_witness(interior: Sequence, con: CanonicalConstraint) -> RationalVector:
    """Interior point pushed through facet `con` by half the inside distance.

    Used only when a kept constraint has no LP witness; the result violates
    `con` but may touch other constraints.
    """
    a = vec(con.coeffs)
    dist = rat(con.bound) - vec_dot(a, interior)
    norm2 = vec_dot(a, a)
    if dist > 0:
        step = rat(3, 2) * dist / norm2
    else:
        step = rat(1) / norm2
    return tuple(x + step * c for x, c in zip(vec(interior), a))
