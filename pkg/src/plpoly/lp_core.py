"""Non-parametric LP: untrusted float solve, exact certification, exact fallback.

The division of labour follows one rule: a floating-point simplex proposes a
basis, and every number we return is reconstructed and certified in exact
rational arithmetic from that basis alone.  A wrong or failed float answer
can cost time, never correctness, because refuted bases fall back to an exact
Bland-rule simplex.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .exact_arith import (
    EQ,
    LE,
    ONE,
    ZERO,
    CanonicalConstraint,
    RationalMatrix,
    RationalVector,
    SingularMatrixError,
    matrix_rank_reduce,
    rat,
    solve_many,
    solve_linear_system,
    transpose,
    vec,
    vec_dot,
)


class InfeasibleSystemError(ValueError):
    """An equality system reduced to 0 = c with c nonzero."""


class InvalidBasisError(ValueError):
    """Basis whose basic columns form a singular matrix."""


@dataclass(frozen=True)
class StandardLP:
    """maximize c'X subject to A·X = B, X >= 0 (rows of A independent)."""

    a: RationalMatrix
    b: RationalVector
    n: int

    @property
    def m(self) -> int:
        return len(self.a)

    def column(self, j: int) -> RationalVector:
        return tuple(row[j] for row in self.a)


def make_standard_lp(rows: Sequence[Sequence], rhs: Sequence, n: Optional[int] = None) -> StandardLP:
    """Build a StandardLP, dropping linearly dependent rows exactly.

    Raises InfeasibleSystemError when the equalities are inconsistent.
    """
    if n is None:
        if not rows:
            raise ValueError("cannot infer variable count from an empty system")
        n = len(rows[0])
    kept, kept_rhs, consistent = matrix_rank_reduce(rows, rhs)
    if not consistent:
        raise InfeasibleSystemError("inconsistent equality system")
    if len(kept) > n:
        raise ValueError("more independent rows than variables")
    return StandardLP(tuple(kept), tuple(kept_rhs), n)


@dataclass(frozen=True)
class Basis:
    """Partition of variable indices into nonbasic (set to 0) and basic."""

    nonbasic: tuple
    basic: tuple

    @staticmethod
    def from_nonbasic(nonbasic: Sequence[int], n: int) -> "Basis":
        nb = tuple(sorted(nonbasic))
        nbset = set(nb)
        if len(nbset) != len(nb) or any(j < 0 or j >= n for j in nb):
            raise ValueError(f"bad nonbasic indices {nonbasic!r} for n={n}")
        basic = tuple(j for j in range(n) if j not in nbset)
        return Basis(nb, basic)

    @property
    def key(self) -> tuple:
        return self.nonbasic


class LPStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPOutcome:
    status: LPStatus
    basis: Optional[Basis] = None
    x: Optional[RationalVector] = None


@dataclass(frozen=True)
class FloatBackendResult:
    """Untrusted answer of a floating-point backend."""

    status: str  # optimal | infeasible | unbounded | failed
    basis: Optional[Basis] = None


# --- internal double-precision simplex (default float backend) -------------

_EPS = 1e-9


def _pivot(t: np.ndarray, r: np.ndarray, row: int, col: int) -> None:
    t[row] = t[row] / t[row, col]
    piv_row = t[row]
    factors = t[:, col].copy()
    factors[row] = 0.0
    t -= np.outer(factors, piv_row)
    r -= r[col] * piv_row


def _run_phase(t, r, basic, ncols, max_iter):
    """Primal simplex loop; Dantzig first, Bland once iterations pile up."""
    rhs_col = t.shape[1] - 1
    bland_after = max_iter // 2
    for it in range(max_iter):
        cand = np.where(r[:ncols] > _EPS)[0]
        if cand.size == 0:
            return "optimal"
        if it < bland_after:
            j = int(cand[np.argmax(r[cand])])
        else:
            j = int(cand[0])
        col = t[:, j]
        rows = np.where(col > _EPS)[0]
        if rows.size == 0:
            return "unbounded"
        ratios = t[rows, rhs_col] / col[rows]
        best = ratios.min()
        tie = rows[np.where(ratios <= best + _EPS)[0]]
        i = int(min(tie, key=lambda k: basic[k]))
        _pivot(t, r, i, j)
        basic[i] = j
    return "failed"


def _internal_float_simplex(lp: StandardLP, c: Sequence) -> FloatBackendResult:
    m, n = lp.m, lp.n
    cf = np.array([float(x) for x in c], dtype=float)
    if m == 0:
        if np.all(cf <= _EPS):
            return FloatBackendResult("optimal", Basis.from_nonbasic(range(n), n))
        return FloatBackendResult("unbounded")
    a = np.array([[float(x) for x in row] for row in lp.a], dtype=float)
    b = np.array([float(x) for x in lp.b], dtype=float)
    neg = b < 0
    a[neg] *= -1.0
    b[neg] *= -1.0
    scale = max(1.0, float(np.abs(a).max()), float(np.abs(b).max()))

    t = np.hstack([a, np.eye(m), b[:, None]])
    basic = list(range(n, n + m))
    r = np.zeros(n + m + 1)
    r[:n] = a.sum(axis=0)
    r[-1] = b.sum()  # tracks -objective of phase 1
    max_iter = 50 * (n + m) + 200
    status = _run_phase(t, r, basic, n, max_iter)
    if status != "optimal":
        return FloatBackendResult("failed")
    if r[-1] > 1e-7 * scale:
        return FloatBackendResult("infeasible")
    for i in range(m):
        if basic[i] >= n:
            in_basis = set(basic)
            js = [j for j in range(n) if j not in in_basis and abs(t[i, j]) > 1e-7]
            if not js:
                return FloatBackendResult("failed")
            _pivot(t, r, i, js[0])
            basic[i] = js[0]

    t = np.hstack([t[:, :n], t[:, -1:]])
    r = np.zeros(n + 1)
    cb = cf[basic]
    r[:n] = cf - cb @ t[:, :n]
    status = _run_phase(t, r, basic, n, max_iter)
    if status == "unbounded":
        return FloatBackendResult("unbounded")
    if status != "optimal":
        return FloatBackendResult("failed")
    nonbasic = sorted(set(range(n)) - set(basic))
    return FloatBackendResult("optimal", Basis(tuple(nonbasic), tuple(sorted(basic))))


_float_backend: Callable[[StandardLP, Sequence], FloatBackendResult] = (
    _internal_float_simplex
)


def set_float_backend(fn: Callable[[StandardLP, Sequence], FloatBackendResult]):
    """Swap the float backend (must be reentrant); returns the previous one."""
    global _float_backend
    prev = _float_backend
    _float_backend = fn
    return prev


def float_lp(lp: StandardLP, c: Sequence) -> FloatBackendResult:
    """Candidate basis for maximize c'X; answers are untrusted."""
    try:
        res = _float_backend(lp, c)
    except Exception:
        return FloatBackendResult("failed")
    if res.status == "optimal":
        if res.basis is None or len(res.basis.nonbasic) != lp.n - lp.m:
            return FloatBackendResult("failed")
    return res


# --- exact reconstruction and certification ---------------------------------


def _basic_matrix(lp: StandardLP, basis: Basis) -> RationalMatrix:
    return tuple(tuple(row[j] for j in basis.basic) for row in lp.a)


def exact_point(lp: StandardLP, basis: Basis) -> RationalVector:
    """Exact X* for a basis: nonbasic coordinates 0, basic solve A_B·x = B.

    Raises InvalidBasisError when the basic block is singular.
    """
    try:
        xb = solve_linear_system(_basic_matrix(lp, basis), lp.b)
    except SingularMatrixError as exc:
        raise InvalidBasisError(str(exc)) from None
    x = [ZERO] * lp.n
    for idx, j in enumerate(basis.basic):
        x[j] = xb[idx]
    return tuple(x)


def _dual_vector(lp: StandardLP, basis: Basis, c: Sequence):
    """y solving A_B' y = c_B, so reduced costs are c_j - y·A_j."""
    bt = transpose(_basic_matrix(lp, basis))
    cb = tuple(c[j] for j in basis.basic)
    try:
        return solve_linear_system(bt, cb)
    except SingularMatrixError as exc:
        raise InvalidBasisError(str(exc)) from None


def reduced_costs(lp: StandardLP, basis: Basis, c: Sequence) -> dict:
    """Coefficients alpha_j of c'X = const + sum alpha_j x_j over nonbasic j."""
    c = vec(c)
    if lp.m == 0:
        return {j: c[j] for j in basis.nonbasic}
    y = _dual_vector(lp, basis, c)
    return {j: c[j] - vec_dot(y, lp.column(j)) for j in basis.nonbasic}


def dual_bound(lp: StandardLP, basis: Basis, c: Sequence):
    """Weak-duality upper bound b·y on max c'X, or None.

    Valid whenever y = A_B^-T c_B is dual feasible (every reduced cost
    <= 0), even if the basis is primal infeasible; everything is checked in
    exact arithmetic.
    """
    c = vec(c)
    if lp.m == 0:
        return ZERO if all(v <= 0 for v in c) else None
    try:
        y = _dual_vector(lp, basis, c)
    except InvalidBasisError:
        return None
    for j in basis.nonbasic:
        if c[j] - vec_dot(y, lp.column(j)) > 0:
            return None
    return vec_dot(y, lp.b)


def certify(lp: StandardLP, basis: Basis, c: Sequence) -> Optional[RationalVector]:
    """X* when the basis passes the exact optimality check, else None.

    Certified means: X* >= 0 and every reduced cost is <= 0 (maximization).
    """
    try:
        x = exact_point(lp, basis)
        alphas = reduced_costs(lp, basis, c)
    except InvalidBasisError:
        return None
    if any(v < 0 for v in x):
        return None
    if any(a > 0 for a in alphas.values()):
        return None
    return x


# --- exact simplex (Bland's rule, two phases) --------------------------------


def _exact_pivot(rows, obj, basic, i, j):
    piv = rows[i][j]
    rows[i] = [v / piv for v in rows[i]]
    pr = rows[i]
    for k in range(len(rows)):
        if k != i and rows[k][j] != 0:
            f = rows[k][j]
            rows[k] = [a - f * b for a, b in zip(rows[k], pr)]
    if obj[j] != 0:
        f = obj[j]
        for idx in range(len(obj)):
            obj[idx] -= f * pr[idx]
    basic[i] = j


def _bland_loop(rows, obj, basic, ncols):
    """Maximize; entering = least index with positive reduced cost."""
    while True:
        j = next((k for k in range(ncols) if obj[k] > 0), None)
        if j is None:
            return "optimal"
        best_i = None
        best_ratio = None
        for i, row in enumerate(rows):
            if row[j] > 0:
                ratio = row[-1] / row[j]
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basic[i] < basic[best_i])
                ):
                    best_ratio = ratio
                    best_i = i
        if best_i is None:
            return "unbounded"
        _exact_pivot(rows, obj, basic, best_i, j)


def _tableau_from_basis(lp: StandardLP, basis: Basis):
    """Rows [B^-1 A | B^-1 b] for a primal-feasible start basis, else None."""
    try:
        cols = [lp.column(j) for j in range(lp.n)] + [lp.b]
        sols = solve_many(_basic_matrix(lp, basis), cols)
    except SingularMatrixError:
        return None
    rhs = sols[-1]
    if any(v < 0 for v in rhs):
        return None
    rows = [[sols[j][i] for j in range(lp.n)] + [rhs[i]] for i in range(lp.m)]
    return rows, list(basis.basic)


def exact_lp(lp: StandardLP, c: Sequence, start: Optional[Basis] = None) -> LPOutcome:
    """Exact rational simplex; Bland's rule guarantees termination.

    Phase 1 minimizes the sum of auxiliary variables; a primal-feasible
    `start` basis skips phase 1.  Dependent rows are dropped on the fly.
    """
    c = vec(c)
    n = lp.n

    rows = None
    basic: list = []
    if lp.m > 0 and start is not None and len(start.nonbasic) == n - lp.m:
        prepared = _tableau_from_basis(lp, start)
        if prepared is not None:
            rows, basic = prepared

    if rows is None and lp.m > 0:
        rows = []
        for i in range(lp.m):
            row = list(lp.a[i]) + [ZERO] * lp.m + [lp.b[i]]
            if lp.b[i] < 0:
                row = [-v for v in row]
            row[n + i] = ONE
            rows.append(row)
        basic = list(range(n, n + lp.m))
        obj = [ZERO] * (n + lp.m + 1)
        for j in range(n):
            obj[j] = sum((row[j] for row in rows), ZERO)
        obj[-1] = sum((row[-1] for row in rows), ZERO)
        _bland_loop(rows, obj, basic, n + lp.m)
        if obj[-1] != 0:  # -objective stayed positive: infeasible
            return LPOutcome(LPStatus.INFEASIBLE)
        drop = []
        for i in range(len(rows)):
            if basic[i] >= n:
                j = next(
                    (k for k in range(n) if k not in basic and rows[i][k] != 0),
                    None,
                )
                if j is None:
                    drop.append(i)  # dependent row, aux stuck at value 0
                else:
                    _exact_pivot(rows, obj, basic, i, j)
        for i in reversed(drop):
            del rows[i]
            del basic[i]
        rows = [row[:n] + [row[-1]] for row in rows]
    elif rows is None:
        rows = []

    obj = [ZERO] * (n + 1)
    for j in range(n):
        obj[j] = c[j] - sum((c[basic[i]] * rows[i][j] for i in range(len(rows))), ZERO)
    status = _bland_loop(rows, obj, basic, n)
    if status == "unbounded":
        return LPOutcome(LPStatus.UNBOUNDED)
    x = [ZERO] * n
    for i, bv in enumerate(basic):
        x[bv] = rows[i][-1]
    basis = Basis.from_nonbasic(sorted(set(range(n)) - set(basic)), n)
    return LPOutcome(LPStatus.OPTIMAL, basis, tuple(x))


def certified_solve(
    lp: StandardLP,
    c: Sequence,
    start: Optional[Basis] = None,
    float_result: Optional[FloatBackendResult] = None,
) -> LPOutcome:
    """Float solve, exact certification, exact fallback: always exact answers."""
    res = float_result if float_result is not None else float_lp(lp, c)
    if res.status == "optimal":
        x = certify(lp, res.basis, c)
        if x is not None:
            return LPOutcome(LPStatus.OPTIMAL, res.basis, x)
        start = res.basis
    return exact_lp(lp, c, start)


# --- LPs over free variables given by canonical constraints -----------------


@dataclass(frozen=True)
class ConstraintLPResult:
    status: LPStatus
    point: Optional[RationalVector] = None
    value: Optional[object] = None
    certified_optimal: bool = True
    bound_only: bool = False  # value is a dual upper bound; no point


def optimize_over_constraints(
    constraints: Sequence[CanonicalConstraint],
    dim: int,
    objective: Sequence,
    good_enough=None,
    bad_enough=None,
) -> ConstraintLPResult:
    """Maximize objective·x over free x satisfying canonical constraints.

    Free variables are split x = u - v and inequalities get slack variables,
    then the certified float/exact pipeline runs on the standard form.

    Shortcuts (both exactly verified, skipping the full optimality
    certificate): `good_enough(value)` accepts the float basis's exact
    feasible point by value; `bad_enough(upper)` accepts a weak-duality
    upper bound on the optimum (result flagged bound_only, no point).
    Callers that need the true optimum leave both None.
    """
    ineqs = [c for c in constraints if c.relation == LE]
    eqs = [c for c in constraints if c.relation == EQ]
    n = 2 * dim + len(ineqs)
    rows = []
    rhs = []
    for k, con in enumerate(ineqs):
        row = [rat(v) for v in con.coeffs]
        row += [-v for v in row[:dim]]
        row += [ONE if s == k else ZERO for s in range(len(ineqs))]
        rows.append(row)
        rhs.append(rat(con.bound))
    if eqs:
        # inequality rows are independent through their unit slack columns;
        # only the slack-free equality rows can be mutually dependent
        eq_rows = []
        eq_rhs = []
        for con in eqs:
            row = [rat(v) for v in con.coeffs]
            row += [-v for v in row[:dim]]
            row += [ZERO] * len(ineqs)
            eq_rows.append(row)
            eq_rhs.append(rat(con.bound))
        kept, kept_rhs, consistent = matrix_rank_reduce(eq_rows, eq_rhs)
        if not consistent:
            return ConstraintLPResult(LPStatus.INFEASIBLE)
        rows.extend(list(r) for r in kept)
        rhs.extend(kept_rhs)
    lp = StandardLP(tuple(tuple(r) for r in rows), tuple(rhs), n)

    c = vec(objective) + tuple(-rat(v) for v in objective) + (ZERO,) * len(ineqs)

    def recover(x):
        point = tuple(x[i] - x[dim + i] for i in range(dim))
        return point, vec_dot(vec(objective), point)

    fres = float_lp(lp, c)
    if fres.status == "optimal":
        if good_enough is not None:
            try:
                x = exact_point(lp, fres.basis)
            except InvalidBasisError:
                x = None
            if x is not None and all(v >= 0 for v in x):
                point, value = recover(x)
                if good_enough(value):
                    return ConstraintLPResult(
                        LPStatus.OPTIMAL, point, value, certified_optimal=False
                    )
        if bad_enough is not None:
            upper = dual_bound(lp, fres.basis, c)
            if upper is not None and bad_enough(upper):
                return ConstraintLPResult(
                    LPStatus.OPTIMAL, None, upper,
                    certified_optimal=False, bound_only=True,
                )
    out = certified_solve(lp, c, float_result=fres)
    if out.status is not LPStatus.OPTIMAL:
        return ConstraintLPResult(out.status)
    point, value = recover(out.x)
    return ConstraintLPResult(LPStatus.OPTIMAL, point, value)
