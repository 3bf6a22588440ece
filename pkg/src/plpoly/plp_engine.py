"""Parametric LP: optimality regions and the worklist region traversal.

The objective C(mu) = C0 + sum mu_i C_i is rewritten over the nonbasic
variables of a basis as a bilinear tableau; requiring every nonbasic column
to be nonpositive yields the region of parameter space where that basis is
optimal.  The traversal pops (from_region, probe) tasks off a worklist,
solves at the probe, eliminates redundancy to get witness probes for the
neighbours, and inserts a midpoint repair task whenever the probe jumped
over a gap, so the final region set covers the whole parameter space even
under degeneracy.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .exact_arith import (
    LE,
    ZERO,
    CanonicalConstraint,
    RationalVector,
    SingularMatrixError,
    canonicalize,
    format_rational,
    parse_rational,
    primitive_direction,
    rat,
    solve_many,
    transpose,
    vec,
    vec_dot,
)
from .lp_core import (
    Basis,
    FloatBackendResult,
    InvalidBasisError,
    LPStatus,
    StandardLP,
    exact_lp,
    exact_point,
    float_lp,
)
from .redundancy import (
    chebyshev_point,
    eliminate_redundancy,
    fallback_witness,
    syntactic_minimize,
)


class PLPError(RuntimeError):
    """Hard failure: the LP is infeasible or unbounded at a probe direction."""


class EmptyConeError(ValueError):
    """A tableau column is a positive constant: the basis is never optimal."""


@dataclass(frozen=True)
class ParametricObjective:
    """Objective C(mu) = rows[0] + sum mu_i rows[i], each row of dim n."""

    rows: tuple  # (k+1) RationalVectors

    @staticmethod
    def make(c0: Sequence, directions: Sequence[Sequence]) -> "ParametricObjective":
        rows = (vec(c0),) + tuple(vec(r) for r in directions)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("objective rows must share one dimension")
        return ParametricObjective(rows)

    @property
    def k(self) -> int:
        return len(self.rows) - 1

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def is_homogeneous(self) -> bool:
        return all(c == 0 for c in self.rows[0])

    def at(self, mu: Sequence) -> RationalVector:
        c = list(self.rows[0])
        for coef, row in zip(mu, self.rows[1:]):
            if coef != 0:
                for j, v in enumerate(row):
                    c[j] += coef * v
        return tuple(c)


@dataclass(frozen=True)
class ObjectiveTableau:
    """Bilinear form of the objective over parameters and nonbasic variables.

    entries[i][j]: row i is the mu_i coefficient (row 0 the constant in mu),
    column j >= 1 the coefficient of the j-th nonbasic variable (column 0 the
    term without any nonbasic variable).
    """

    entries: tuple  # (k+1) x (n-m+1) rationals
    nonbasic: tuple

    @property
    def k(self) -> int:
        return len(self.entries) - 1

    @property
    def ncols(self) -> int:
        return len(self.entries[0])

    def column_value(self, j: int, mu: Sequence):
        total = self.entries[0][j]
        for i, coef in enumerate(mu):
            total += coef * self.entries[i + 1][j]
        return total


@dataclass(frozen=True)
class Region:
    """Optimality region: irredundant parameter constraints plus certificate."""

    constraints: tuple
    witnesses: tuple
    optimum: RationalVector
    basis: Basis
    interior_point: Optional[RationalVector]

    def covers(self, point: Sequence) -> bool:
        return all(con.holds(point) for con in self.constraints)

    def _filter_arrays(self):
        cached = self.__dict__.get("_flt", False)
        if cached is False:
            import numpy as np

            try:
                a = np.array(
                    [[float(c) for c in con.coeffs] for con in self.constraints]
                )
                b = np.array([float(con.bound) for con in self.constraints])
                cached = (a, np.abs(a), b, np.abs(b))
            except OverflowError:
                cached = None  # coefficients beyond float range: no filtering
            object.__setattr__(self, "_flt", cached)
        return cached


def probe_float_arrays(d: Sequence):
    """(values, magnitudes) of a probe as float arrays, or None on overflow."""
    import numpy as np

    try:
        fd = np.array([float(v) for v in d])
    except OverflowError:
        return None
    if not np.all(np.isfinite(fd)):
        return None
    return fd, np.abs(fd)


def region_covers_filtered(region: Region, d: Sequence, farrays) -> bool:
    """Exact covering test behind a cheap float rejection filter.

    A float false negative only skips the cache hit (the basis table catches
    the duplicate later); any float accept is confirmed exactly.
    """
    if farrays is not None and region.constraints:
        import numpy as np

        arrays = region._filter_arrays()
        if arrays is not None:
            a, abs_a, b, abs_b = arrays
            fd, afd = farrays
            tol = 1e-9 * (abs_a @ afd + abs_b + 1.0)
            if np.any(a @ fd - b > tol):
                return False
    return region.covers(d)


class CoveringIndex:
    """Batched float prefilter over a grow-only region sequence.

    Regions are appended in publish order; scans reject most regions with
    one stacked matrix product and confirm the survivors exactly, in index
    order (so the first-hit semantics of the plain scan are preserved).
    The stacked arrays are rebuilt geometrically and swapped atomically, so
    concurrent readers only ever see a complete snapshot.
    """

    def __init__(self):
        self._regions: list = []
        self._stack = None  # (n_regions, A, absA, b, absb, row_offsets)

    def append(self, region: Region) -> None:
        self._regions.append(region)

    def _stacked(self, upto: int):
        import numpy as np

        stack = self._stack
        if stack is not None and stack[0] >= min(upto, len(self._regions)):
            return stack
        if stack is not None and upto < max(8, 2 * stack[0]):
            return stack
        rows_a = []
        offsets = [0]
        bounds = []
        unfiltered = set()
        for idx, region in enumerate(self._regions[:upto]):
            arrays = region._filter_arrays()
            if arrays is None:
                unfiltered.add(idx)  # always confirmed exactly
                offsets.append(offsets[-1])
                continue
            a, _, b, _ = arrays
            if a.size:
                rows_a.append(a)
            bounds.append(b)
            offsets.append(offsets[-1] + len(b))
        if rows_a:
            a_all = np.vstack(rows_a)
            b_all = np.concatenate(bounds)
        else:
            a_all = np.zeros((0, 0))
            b_all = np.zeros(0) if not bounds else np.concatenate(bounds)
        stack = (
            len(offsets) - 1,
            a_all,
            np.abs(a_all),
            b_all,
            np.abs(b_all),
            offsets,
            unfiltered,
        )
        self._stack = stack
        return stack

    def scan(self, d: Sequence, start: int, upto: int, farrays, exact: bool = True):
        """Indices of regions in [start, upto) covering d, ascending.

        With exact=False the indices are float-filter candidates only (used
        by the coverage sweep, where a float-clear cover is decisive).
        """
        if farrays is None:
            for i in range(start, upto):
                if self._regions[i].covers(d):
                    yield i
            return
        stack = self._stacked(upto)
        n_stacked, a_all, abs_a, b_all, abs_b, offsets, unfiltered = stack
        n_stacked = min(n_stacked, upto)

        def confirm(i):
            if exact or i in unfiltered:
                return self._regions[i].covers(d)
            return True

        lo0 = offsets[start] if start < n_stacked else None
        if (
            lo0 is not None
            and n_stacked > start
            and a_all.size
            and a_all.shape[1] == farrays[0].shape[0]
        ):
            fd, afd = farrays
            end = offsets[n_stacked]
            margins = a_all[lo0:end] @ fd - b_all[lo0:end]
            tol = 1e-9 * (abs_a[lo0:end] @ afd + abs_b[lo0:end] + 1.0)
            bad = margins > tol
            for i in range(start, n_stacked):
                lo, hi = offsets[i] - lo0, offsets[i + 1] - lo0
                if not bad[lo:hi].any() and confirm(i):
                    yield i
        else:
            for i in range(start, n_stacked):
                if region_covers_filtered(self._regions[i], d, farrays):
                    yield i
        for i in range(max(start, n_stacked), upto):
            if region_covers_filtered(self._regions[i], d, farrays):
                yield i


@dataclass(frozen=True)
class Task:
    from_region: Optional[int]  # index into the region store, or None
    probe: RationalVector
    retries: int = 0
    repair: bool = False


@dataclass
class SolveStats:
    tasks_processed: int = 0
    regions_created: int = 0
    covered_skips: int = 0
    aborted_duplicate: int = 0
    midpoint_repairs: int = 0
    exact_fallbacks: int = 0


@dataclass
class PLPSolution:
    regions: list
    generation_edges: list  # (parent index or None, child index)
    stats: SolveStats = field(default_factory=SolveStats)


# --- tableau and sign conditions ---------------------------------------------


def exact_objective(
    lp: StandardLP, basis: Basis, pobj: ParametricObjective
) -> ObjectiveTableau:
    """Rewrite C(mu)'X over the nonbasic variables of `basis` (exactly)."""
    nb = basis.nonbasic
    if lp.m == 0:
        entries = tuple(
            (ZERO,) + tuple(row[j] for j in nb) for row in pobj.rows
        )
        return ObjectiveTableau(entries, nb)
    bt = transpose(tuple(tuple(row[j] for j in basis.basic) for row in lp.a))
    cbs = [tuple(row[j] for j in basis.basic) for row in pobj.rows]
    try:
        ys = solve_many(bt, cbs)
    except SingularMatrixError as exc:
        raise InvalidBasisError(str(exc)) from None
    entries = []
    for row, y in zip(pobj.rows, ys):
        const = vec_dot(y, lp.b)
        coefs = tuple(row[j] - vec_dot(y, lp.column(j)) for j in nb)
        entries.append((const,) + coefs)
    return ObjectiveTableau(tuple(entries), nb)


def sign_conditions(tableau: ObjectiveTableau) -> list:
    """Constraints on mu making every nonbasic column nonpositive.

    Trivially true columns are dropped; a column that is a positive constant
    means the basis is optimal nowhere (EmptyConeError).
    """
    out = []
    k = tableau.k
    for j in range(1, tableau.ncols):
        coeffs = tuple(tableau.entries[i][j] for i in range(1, k + 1))
        bound = -tableau.entries[0][j]
        con = canonicalize(coeffs, bound, LE)
        if isinstance(con, CanonicalConstraint):
            out.append(con)
        elif not con.truth:
            raise EmptyConeError(f"column {j} is a positive constant")
    return out


def normalize_probe(pobj: ParametricObjective, d: Sequence) -> RationalVector:
    """Scale rays to primitive integer vectors when regions are cones."""
    if pobj.is_homogeneous:
        return primitive_direction(d)
    return vec(d)


def default_probe(k: int) -> RationalVector:
    return vec([1] * k)


# --- region geometry ----------------------------------------------------------


def _segment_point(a: Sequence, b: Sequence, t) -> RationalVector:
    return tuple(x + t * (y - x) for x, y in zip(a, b))


def _exit_time(region: Region, start: Sequence, target: Sequence):
    """Earliest crossing time out of `region` along [start, target], or None."""
    t_exit = None
    for con in region.constraints:
        s = con.evaluate(start)
        e = con.evaluate(target)
        if e > con.bound:
            t = (rat(con.bound) - s) / (e - s)
            if t_exit is None or t < t_exit:
                t_exit = t
    return t_exit


def _entry_time(region: Region, start: Sequence, target: Sequence):
    """Latest crossing time into `region` (target must satisfy it)."""
    t_entry = rat(0)
    for con in region.constraints:
        s = con.evaluate(start)
        if s > con.bound:
            e = con.evaluate(target)
            t = (rat(con.bound) - s) / (e - s)
            if t > t_entry:
                t_entry = t
    return t_entry


def are_adjacent(r_from: Optional[Region], r_to: Region, d: Sequence) -> bool:
    """No gap along the probe segment: the exit point of
    [interior(r_from), d] through r_from's boundary lies in r_to's closure."""
    if r_from is None:
        return True
    t = _exit_time(r_from, r_from.interior_point, d)
    if t is None:
        return True  # d in closure of r_from, which touches r_to at d
    f = _segment_point(r_from.interior_point, d, t)
    return r_to.covers(f)


def midpoint(r_from: Region, r_to: Region, d: Sequence) -> RationalVector:
    """(F+G)/2 for F = exit of [interior(r_from), d] from r_from and G = its
    entry into r_to; lies strictly between the two regions."""
    start = r_from.interior_point
    t_f = _exit_time(r_from, start, d)
    assert t_f is not None, "midpoint requires d outside r_from"
    t_g = _entry_time(r_to, start, d)
    assert t_f != t_g, "segment exit equals entry: regions are adjacent"
    t_mid = (t_f + t_g) / 2
    return _segment_point(start, d, t_mid)


def compute_next(region: Region, i: int) -> RationalVector:
    """Stored witness for constraint i: violates it and no other."""
    return region.witnesses[i]


# --- per-probe kernels (pure; offloadable to worker processes) ----------------


def float_stage(lp: StandardLP, pobj: ParametricObjective, d: Sequence) -> FloatBackendResult:
    return float_lp(lp, pobj.at(d))


@dataclass(frozen=True)
class BuildOutcome:
    region: Region
    fallback_from: Optional[tuple] = None  # float basis key that failed certification
    used_exact: bool = False


def _certified_tableau(lp, basis, pobj, d):
    """(X*, tableau) when basis is exactly optimal at C(d), else None."""
    try:
        x = exact_point(lp, basis)
        tableau = exact_objective(lp, basis, pobj)
    except InvalidBasisError:
        return None
    if any(v < 0 for v in x):
        return None
    for j in range(1, tableau.ncols):
        if tableau.column_value(j, d) > 0:
            return None
    return x, tableau


def build_stage(
    lp: StandardLP,
    pobj: ParametricObjective,
    d: Sequence,
    basis: Optional[Basis],
    force_exact: bool = False,
    redundancy_mode: str = "sequential",
) -> BuildOutcome:
    """Certify (or exactly recompute) the basis at probe d and build its region."""
    fallback_from = None
    used_exact = False
    cert = None
    if basis is not None and not force_exact:
        cert = _certified_tableau(lp, basis, pobj, d)
        if cert is None:
            fallback_from = basis.key
    if cert is None:
        out = exact_lp(lp, pobj.at(d), start=basis)
        if out.status is LPStatus.INFEASIBLE:
            raise PLPError(f"LP infeasible at probe {d!r}")
        if out.status is LPStatus.UNBOUNDED:
            raise PLPError(f"LP unbounded at probe {d!r}")
        used_exact = True
        basis = out.basis
        if fallback_from == basis.key:
            fallback_from = None  # same basis after all; exact point stands
        tableau = exact_objective(lp, basis, pobj)
        x = out.x
    else:
        x, tableau = cert

    conditions = syntactic_minimize(sign_conditions(tableau))
    kept, wits = eliminate_redundancy(
        conditions, mode=redundancy_mode, feasible_point=vec(d)
    )
    if kept:
        cheb = chebyshev_point(kept, pobj.k)
        interior = cheb[0] if cheb is not None else vec(d)
    else:
        interior = vec(d)
    wits = tuple(
        w if w is not None else fallback_witness(interior, con)
        for w, con in zip(wits, kept)
    )
    region = Region(
        constraints=tuple(kept),
        witnesses=wits,
        optimum=x,
        basis=basis,
        interior_point=interior,
    )
    return BuildOutcome(region, fallback_from, used_exact)


# --- one-shot region computation (spec-level operation) -----------------------


@dataclass(frozen=True)
class RegionOutcome:
    kind: str  # "new" | "seen" | "empty"
    region: Optional[Region] = None
    basis_key: Optional[tuple] = None


class SimpleBasisSet:
    """Plain insert-or-test set of basis keys (single-threaded)."""

    def __init__(self):
        self._seen = set()

    def test_and_insert(self, key) -> bool:
        if key in self._seen:
            return True
        self._seen.add(key)
        return False


def compute_region(
    lp: StandardLP,
    pobj: ParametricObjective,
    d: Sequence,
    bases,
    redundancy_mode: str = "sequential",
) -> RegionOutcome:
    """Solve at direction C(d), dedup via the basis table, build the region."""
    d = normalize_probe(pobj, d)
    fres = float_stage(lp, pobj, d)
    basis = fres.basis if fres.status == "optimal" else None
    if basis is not None and bases.test_and_insert(basis.key):
        return RegionOutcome("seen", basis_key=basis.key)
    try:
        built = build_stage(
            lp, pobj, d, basis, force_exact=basis is None,
            redundancy_mode=redundancy_mode,
        )
    except EmptyConeError:
        return RegionOutcome("empty", basis_key=basis.key if basis else None)
    final_key = built.region.basis.key
    if basis is None or final_key != basis.key:
        if bases.test_and_insert(final_key):
            return RegionOutcome("seen", basis_key=final_key)
    return RegionOutcome("new", region=built.region, basis_key=final_key)


# --- worklist engine ----------------------------------------------------------

_RETRY_EXACT_AT = 2
_RETRY_LIMIT = 64
_SWEEP_SEED = 0x5EED
_SWEEP_DENOMINATORS = (1, 1, 2, 4)


def sweep_samples(k: int, count: Optional[int] = None) -> list:
    """Deterministic rational sample points used by the coverage sweep."""
    import random as _random

    if count is None:
        count = min(16384, max(1024, 1024 * k))
    rng = _random.Random(_SWEEP_SEED + k)
    out = []
    for _ in range(count):
        p = tuple(
            rat(rng.randint(-1000, 1000), rng.choice(_SWEEP_DENOMINATORS))
            for _ in range(k)
        )
        if any(v != 0 for v in p):
            out.append(p)
    return out


def coverage_sweep(state, samples: list) -> list:
    """Exactly-verified uncovered sample points of the current region set.

    Witness-guided traversal can leave pockets when degenerate regions
    overlap (the region fan is no longer face-to-face); sweeping repairs
    them: every uncovered sample becomes a fresh root task, and each such
    task must produce a new basis, so repeated sweeps terminate.
    """
    uncovered = []
    for point in samples:
        if state.maybe_covered(point):
            continue  # pockets are full-dimensional; float-clear is decisive
        if state.find_covering(point) is None:
            uncovered.append(point)
    return uncovered


def _solve_constant(lp: StandardLP, pobj: ParametricObjective) -> PLPSolution:
    """k = 0: a single LP solve covers the whole (empty) parameter space."""
    out = exact_lp(lp, pobj.rows[0])
    if out.status is not LPStatus.OPTIMAL:
        raise PLPError(f"constant objective LP is {out.status.value}")
    region = Region((), (), out.x, out.basis, ())
    stats = SolveStats(tasks_processed=1, regions_created=1)
    return PLPSolution([region], [(None, 0)], stats)


def process_task(task: Task, state) -> list:
    """One worklist step: covered-check, solve+dedup, witnesses, repair.

    `state` provides the shared structures (region store, basis table,
    compute hooks, stats); returns the tasks to enqueue.
    """
    if state.cancelled():
        return []
    d = task.probe
    state.stat("tasks_processed")
    out: list = []
    cov = state.find_covering(d)
    fresh = cov is None
    if cov is None:
        claimed_key = None
        basis = None
        force_exact = task.retries >= _RETRY_EXACT_AT
        if not force_exact:
            fres = state.run_float(d)
            basis = fres.basis if fres.status == "optimal" else None
        if basis is not None:
            kind, idx = state.claim_basis(basis.key)
            if kind == "region":
                state.stat("aborted_duplicate")
                if state.region_at(idx).covers(d):
                    cov = idx
                else:
                    # table hit but region does not cover d: float answer was
                    # wrong here; retry (escalating to the exact route)
                    return [_requeue(task)]
            elif kind == "busy":
                state.stat("aborted_duplicate")
                return [_requeue(task)]
            else:
                claimed_key = basis.key
        if cov is None:
            try:
                built = state.run_build(d, basis, force_exact or basis is None)
            except Exception:
                if claimed_key is not None:
                    state.mark_dead(claimed_key)
                raise
            if built.used_exact:
                state.stat("exact_fallbacks")
            if built.fallback_from is not None and claimed_key == built.fallback_from:
                state.mark_dead(claimed_key)
                claimed_key = None
            final_key = built.region.basis.key
            if claimed_key != final_key:
                kind, idx = state.claim_basis(final_key)
                if kind == "region":
                    # exactly optimal at d, so that region covers d
                    state.stat("aborted_duplicate")
                    cov = idx
                elif kind == "busy":
                    state.stat("aborted_duplicate")
                    return [_requeue(task)]
        if cov is None:
            idx = state.publish_region(built.region, task.from_region)
            state.stat("regions_created")
            cov = idx
            for wit in built.region.witnesses:
                out.append(
                    Task(from_region=idx, probe=normalize_probe(state.pobj, wit))
                )
    if not fresh:
        state.stat("covered_skips")
    if task.from_region is not None:
        r_from = state.region_at(task.from_region)
        r_cov = state.region_at(cov)
        if not are_adjacent(r_from, r_cov, d):
            mid = midpoint(r_from, r_cov, d)
            out.append(
                Task(
                    from_region=task.from_region,
                    probe=normalize_probe(state.pobj, mid),
                    repair=True,
                )
            )
            state.stat("midpoint_repairs")
    return out


def _requeue(task: Task) -> Task:
    if task.retries >= _RETRY_LIMIT:
        raise RuntimeError("task retried beyond limit; basis table wedged")
    return replace(task, retries=task.retries + 1)


class _SequentialState:
    """Plain single-threaded shared state for the worklist engine."""

    def __init__(self, lp, pobj, redundancy_mode="sequential"):
        self.lp = lp
        self.pobj = pobj
        self.redundancy_mode = redundancy_mode
        self.regions: list = []
        self.edges: list = []
        self.basis_states: dict = {}
        self.stats = SolveStats()
        self.index = CoveringIndex()

    def cancelled(self) -> bool:
        return False

    def stat(self, name: str, delta: int = 1) -> None:
        setattr(self.stats, name, getattr(self.stats, name) + delta)

    def find_covering(self, d):
        farrays = probe_float_arrays(d)
        for i in self.index.scan(d, 0, len(self.regions), farrays):
            return i
        return None

    def maybe_covered(self, d) -> bool:
        farrays = probe_float_arrays(d)
        if farrays is None:
            return False
        for _ in self.index.scan(d, 0, len(self.regions), farrays, exact=False):
            return True
        return False

    def region_at(self, i):
        return self.regions[i]

    def claim_basis(self, key):
        st = self.basis_states.get(key)
        if st is None or st[0] == "dead":
            self.basis_states[key] = ("busy", None)
            return "winner", None
        return st

    def publish_region(self, region, parent):
        idx = len(self.regions)
        self.regions.append(region)
        self.index.append(region)
        self.edges.append((parent, idx))
        self.basis_states[region.basis.key] = ("region", idx)
        return idx

    def mark_dead(self, key):
        self.basis_states[key] = ("dead", None)

    def run_float(self, d):
        return float_stage(self.lp, self.pobj, d)

    def run_build(self, d, basis, force_exact):
        return build_stage(
            self.lp, self.pobj, d, basis, force_exact, self.redundancy_mode
        )


def solve_sequential(
    lp: StandardLP,
    pobj: ParametricObjective,
    d0: Optional[Sequence] = None,
    redundancy_mode: str = "sequential",
    sweep: Optional[int] = None,
) -> PLPSolution:
    """Worklist traversal of the optimality regions, single-threaded.

    `sweep` is the coverage-sweep sample count (None for the default, 0 to
    disable).
    """
    if pobj.k == 0:
        return _solve_constant(lp, pobj)
    if d0 is None:
        d0 = default_probe(pobj.k)
    if all(v == 0 for v in d0):
        raise ValueError("initial probe must be nonzero")
    state = _SequentialState(lp, pobj, redundancy_mode)
    work = deque([Task(None, normalize_probe(pobj, d0))])
    samples = [] if sweep == 0 else sweep_samples(pobj.k, sweep)
    while True:
        while work:
            task = work.popleft()
            work.extend(process_task(task, state))
        gaps = coverage_sweep(state, samples) if samples else []
        if not gaps:
            break
        for point in gaps:
            work.append(Task(None, normalize_probe(pobj, point)))
    return PLPSolution(state.regions, state.edges, state.stats)


# --- solution text format ------------------------------------------------------


def format_solution(solution: PLPSolution) -> str:
    """Serialize regions: basis, constraints, optimum and parent per block."""
    parents = {child: parent for parent, child in solution.generation_edges}
    lines = []
    for i, region in enumerate(solution.regions):
        nb = ",".join(str(j) for j in region.basis.nonbasic)
        lines.append(f"region {i} basis {{{nb}}}")
        for con in region.constraints:
            lines.append(f"constraint {con}")
        opt = " ".join(format_rational(v) for v in region.optimum)
        lines.append(f"optimum {opt}")
        parent = parents.get(i, None)
        lines.append(f"parent {'none' if parent is None else parent}")
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> PLPSolution:
    """Rebuild a PLPSolution from its text form (no witnesses/interiors)."""
    regions: list = []
    edges: list = []
    current: Optional[dict] = None

    def flush():
        if current is None:
            return
        idx = len(regions)
        regions.append(
            Region(
                constraints=tuple(current["constraints"]),
                witnesses=(),
                optimum=current.get("optimum", ()),
                basis=current["basis"],
                interior_point=None,
            )
        )
        edges.append((current.get("parent"), idx))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "region":
            flush()
            nb_text = line[line.index("{") + 1 : line.index("}")]
            nonbasic = tuple(
                int(v) for v in nb_text.replace(",", " ").split()
            )
            current = {
                "constraints": [],
                "basis": Basis(nonbasic, ()),
                "parent": None,
            }
        elif parts[0] == "constraint":
            if current is None:
                raise ValueError(f"line {lineno}: constraint outside region")
            rel_idx = parts.index("<=") if "<=" in parts else parts.index("=")
            coeffs = tuple(int(v) for v in parts[1:rel_idx])
            bound = int(parts[rel_idx + 1])
            current["constraints"].append(
                CanonicalConstraint(coeffs, bound, parts[rel_idx])
            )
        elif parts[0] == "optimum":
            current["optimum"] = tuple(parse_rational(v) for v in parts[1:])
        elif parts[0] == "parent":
            current["parent"] = None if parts[1] == "none" else int(parts[1])
        else:
            raise ValueError(f"line {lineno}: unrecognized line {raw!r}")
    flush()
    return PLPSolution(regions, edges)
