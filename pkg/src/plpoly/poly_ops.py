"""Polyhedra-level operations reduced to parametric LP.

A polyhedron is a list of canonical constraints (a·x <= b and a·x = b) over
free variables.  Projection builds the multiplier LP: nonnegative row
combinations that cancel the eliminated coordinates, normalized to 1 at a
strict interior point; every optimality region of the resulting parametric
LP contributes one face of the projection, and the union over the covering
is exactly the projection.  Fourier-Motzkin elimination plays the
independent test oracle, and verify_covering samples parameter space to
check the covering and exact objective agreement on overlaps.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .exact_arith import (
    EQ,
    LE,
    ZERO,
    CanonicalConstraint,
    RationalVector,
    TRIVIALLY_FALSE,
    TRIVIALLY_TRUE,
    canonicalize,
    format_rational,
    parse_rational,
    rat,
    vec,
    vec_dot,
)
from .lp_core import (
    LPStatus,
    StandardLP,
    exact_lp,
    make_standard_lp,
    optimize_over_constraints,
)
from .plp_engine import ParametricObjective, PLPSolution
from .concurrent_runtime import solve_parallel
from .redundancy import (
    EmptyPolyhedron,
    OracleCapExceeded,
    chebyshev_point,
    eliminate_redundancy,
    syntactic_minimize,
)


class PolyhedronFormatError(ValueError):
    """Malformed poly v1 text; message carries the line number."""


@dataclass(frozen=True)
class Polyhedron:
    """Constraint-only polyhedron over free rational variables."""

    dim: int
    constraints: tuple = ()
    empty: bool = False

    @staticmethod
    def from_rows(dim: int, rows: Sequence) -> "Polyhedron":
        """Canonicalize (coeffs, bound, relation) rows; detects emptiness."""
        out = []
        for coeffs, bound, relation in rows:
            con = canonicalize(coeffs, bound, relation)
            if con is TRIVIALLY_TRUE:
                continue
            if con is TRIVIALLY_FALSE:
                return Polyhedron(dim, (), empty=True)
            out.append(con)
        return Polyhedron(dim, tuple(out))

    def contains(self, point: Sequence) -> bool:
        if self.empty:
            return False
        return all(con.holds(point) for con in self.constraints)

    def inequalities(self) -> list:
        return [c for c in self.constraints if c.relation == LE]

    def equalities(self) -> list:
        return [c for c in self.constraints if c.relation == EQ]

    def canonical_key(self) -> tuple:
        if self.empty:
            return (self.dim, "empty")
        return (
            self.dim,
            frozenset((c.coeffs, c.bound, c.relation) for c in self.constraints),
        )

    def sorted(self) -> "Polyhedron":
        order = sorted(
            self.constraints, key=lambda c: (c.relation, c.coeffs, c.bound)
        )
        return Polyhedron(self.dim, tuple(order), self.empty)


# --- poly v1 text format -------------------------------------------------------


def parse_polyhedron(text: str) -> Polyhedron:
    """Parse the "poly v1" text format.

    Line 1: "d m"; then m lines with d+1 rationals "a1 .. ad b" meaning
    a·x <= b, optionally prefixed "=" for an equality.  '#' starts a comment.
    """
    rows = []
    header: Optional[tuple] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise PolyhedronFormatError(
                    f"line {lineno}: expected header 'd m', got {raw!r}"
                )
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise PolyhedronFormatError(
                    f"line {lineno}: non-integer header {raw!r}"
                ) from None
            if header[0] < 0 or header[1] < 0:
                raise PolyhedronFormatError(f"line {lineno}: negative header")
            continue
        relation = LE
        if parts[0] == "=":
            relation = EQ
            parts = parts[1:]
        if len(parts) != header[0] + 1:
            raise PolyhedronFormatError(
                f"line {lineno}: expected {header[0] + 1} numbers, got {len(parts)}"
            )
        try:
            values = [parse_rational(v) for v in parts]
        except ValueError as exc:
            raise PolyhedronFormatError(f"line {lineno}: {exc}") from None
        rows.append((values[:-1], values[-1], relation))
    if header is None:
        raise PolyhedronFormatError("line 1: empty input")
    if len(rows) != header[1]:
        raise PolyhedronFormatError(
            f"header announced {header[1]} constraints, found {len(rows)}"
        )
    return Polyhedron.from_rows(header[0], rows)


def format_polyhedron(p: Polyhedron, comment: str = "") -> str:
    lines = []
    if comment:
        lines.append(f"# {comment}")
    p = p.sorted()
    if p.empty:
        lines.append(f"{p.dim} 1")
        lines.append(" ".join(["0"] * p.dim + ["-1"]))
    else:
        lines.append(f"{p.dim} {len(p.constraints)}")
        for con in p.constraints:
            prefix = "= " if con.relation == EQ else ""
            coeffs = " ".join(str(c) for c in con.coeffs)
            lines.append(f"{prefix}{coeffs} {con.bound}")
    return "\n".join(lines) + "\n"


# --- interior points and full-dimensional reduction -----------------------------


class InteriorStatus(enum.Enum):
    INTERIOR = "interior"
    EMPTY = "empty"
    NOT_FULL_DIM = "not_full_dim"


@dataclass(frozen=True)
class InteriorPointResult:
    status: InteriorStatus
    point: Optional[RationalVector] = None


@dataclass
class FullDimReduction:
    """Equality-free, full-dimensional core of a polyhedron.

    var_map maps reduced coordinates to original variable indices; the
    dropped originals are determined by `equalities` (echelon over the
    original space, including discovered implicit equalities).
    """

    empty: bool
    dim: int
    var_map: tuple = ()
    ineqs: tuple = ()
    equalities: tuple = ()
    interior: Optional[RationalVector] = None


def _rref(eq_rows: list, col_order: Sequence[int]):
    """Reduced row echelon form of [coeffs | bound] rows; None if 0 = c."""
    reduced: list = []
    pivots: list = []
    for coeffs, bound in eq_rows:
        row = list(coeffs)
        b = rat(bound)
        for (prow, pb), pcol in zip(reduced, pivots):
            if row[pcol] != 0:
                f = row[pcol] / prow[pcol]
                row = [x - f * y for x, y in zip(row, prow)]
                b -= f * pb
        pcol = next((j for j in col_order if row[j] != 0), None)
        if pcol is None:
            if b != 0:
                return None
            continue
        for idx, ((orow, ob), ocol) in enumerate(zip(reduced, pivots)):
            if orow[pcol] != 0:
                f = orow[pcol] / row[pcol]
                reduced[idx] = (
                    [x - f * y for x, y in zip(orow, row)],
                    ob - f * b,
                )
        reduced.append((row, b))
        pivots.append(pcol)
    return reduced, pivots


def _substitute(coeffs: list, bound, reduced: list, pivots: list):
    """Eliminate pivot variables from one constraint using RREF rows."""
    coeffs = list(coeffs)
    bound = rat(bound)
    for (erow, eb), pcol in zip(reduced, pivots):
        c = coeffs[pcol]
        if c != 0:
            f = c / erow[pcol]
            coeffs = [x - f * y for x, y in zip(coeffs, erow)]
            bound -= f * eb
    return coeffs, bound


def reduce_to_full_dim(p: Polyhedron, prefer: Optional[set] = None) -> FullDimReduction:
    """Extract (explicit and implicit) equalities; substitute them away.

    Pivot columns prefer the `prefer` variable set, so variables slated for
    elimination are consumed by equalities first and leftover equality rows
    live entirely in the complement.
    """
    d = p.dim
    if p.empty:
        return FullDimReduction(True, d)
    prefer = prefer or set()
    col_order = sorted(prefer) + sorted(set(range(d)) - prefer)
    eq_rows = [(vec(c.coeffs), c.bound) for c in p.equalities()]
    base_ineqs = [(vec(c.coeffs), c.bound) for c in p.inequalities()]

    while True:
        rref = _rref(eq_rows, col_order)
        if rref is None:
            return FullDimReduction(True, d)
        reduced, pivots = rref
        free = [j for j in range(d) if j not in pivots]
        nd = len(free)
        sub = []
        for coeffs, bound in base_ineqs:
            cs, b = _substitute(coeffs, bound, reduced, pivots)
            con = canonicalize([cs[j] for j in free], b, LE)
            if con is TRIVIALLY_FALSE:
                return FullDimReduction(True, d)
            if con is not TRIVIALLY_TRUE:
                sub.append(con)
        try:
            sub = syntactic_minimize(sub)
        except EmptyPolyhedron:
            return FullDimReduction(True, d)

        equalities = tuple(
            c
            for row, b in reduced
            for c in [canonicalize(row, b, EQ)]
            if isinstance(c, CanonicalConstraint)
        )
        if nd == 0:
            return FullDimReduction(False, d, (), (), equalities, ())
        cheb = chebyshev_point(sub, nd)
        if cheb is None:
            return FullDimReduction(True, d)
        point, radius = cheb
        if radius > 0:
            return FullDimReduction(
                False, d, tuple(free), tuple(sub), equalities, point
            )
        found = []
        for con in sub:
            # max of -a·x is always >= -b here; a point above -b rules the
            # equality out, a dual bound <= -b pins it exactly
            res = optimize_over_constraints(
                sub,
                nd,
                [-c for c in con.coeffs],
                good_enough=lambda v, b=con.bound: v > -b,
                bad_enough=lambda ub, b=con.bound: ub <= -b,
            )
            if res.status is LPStatus.OPTIMAL and res.value == -con.bound:
                coeffs_d = [ZERO] * d
                for pos, j in enumerate(free):
                    coeffs_d[j] = rat(con.coeffs[pos])
                found.append((vec(coeffs_d), con.bound))
        if not found:
            raise RuntimeError("flat polyhedron without detectable equality")
        eq_rows.extend(found)


def interior_point(p: Polyhedron) -> InteriorPointResult:
    """Uniform-slack interior point; Empty / NotFullDim when none exists."""
    if p.empty:
        return InteriorPointResult(InteriorStatus.EMPTY)
    red = reduce_to_full_dim(p)
    if red.empty:
        return InteriorPointResult(InteriorStatus.EMPTY)
    if red.equalities or red.interior is None or len(red.var_map) < p.dim:
        point = _lift_point(red, p.dim)
        return InteriorPointResult(InteriorStatus.NOT_FULL_DIM, point)
    cheb = chebyshev_point(list(p.inequalities()), p.dim)
    if cheb is None:  # pragma: no cover - reduction already proved nonempty
        return InteriorPointResult(InteriorStatus.EMPTY)
    point, radius = cheb
    if radius == 0:
        return InteriorPointResult(InteriorStatus.NOT_FULL_DIM, point)
    return InteriorPointResult(InteriorStatus.INTERIOR, point)


def _lift_point(red: FullDimReduction, dim: int) -> Optional[RationalVector]:
    """Map a reduced-space point back through the equality substitutions."""
    if red.interior is None:
        return None
    x = [None] * dim
    for pos, j in enumerate(red.var_map):
        x[j] = red.interior[pos]
    rref = _rref([(vec(c.coeffs), c.bound) for c in red.equalities], range(dim))
    if rref is None:
        return None
    for (row, b), pcol in zip(*rref):
        acc = rat(b)
        for j in range(dim):
            if j != pcol and row[j] != 0:
                if x[j] is None:
                    x[j] = ZERO
                acc -= row[j] * x[j]
        x[pcol] = acc / row[pcol]
    return tuple(v if v is not None else ZERO for v in x)


# --- projection via parametric LP ------------------------------------------------


@dataclass
class ProjectionEncoding:
    """Multiplier LP whose optimality regions are the projection's faces."""

    lambda_lp: Optional[StandardLP]
    pobj: Optional[ParametricObjective]
    kept: tuple
    eliminated: tuple
    interior: Optional[RationalVector]
    reduction: FullDimReduction
    reduced_kept: tuple = ()
    reduced_eliminated: tuple = ()
    infeasible: bool = False


def build_projection_plp(p: Polyhedron, eliminate: Sequence[int]) -> ProjectionEncoding:
    """Multiplier-cone encoding of proj onto the kept coordinates.

    Rows: one cancellation row per eliminated coordinate and one
    normalization row fixing the combination value at a strict interior
    point to 1; multipliers are nonnegative, parameters are the kept
    coordinates.  Raises EmptyPolyhedron for empty input.
    """
    elim = _check_eliminate(p.dim, eliminate)
    kept = tuple(j for j in range(p.dim) if j not in elim)
    red = reduce_to_full_dim(p, prefer=set(elim))
    if red.empty:
        raise EmptyPolyhedron("cannot encode an empty polyhedron")
    r_elim = tuple(i for i, j in enumerate(red.var_map) if j in elim)
    r_kept = tuple(i for i, j in enumerate(red.var_map) if j not in elim)
    enc = ProjectionEncoding(
        None, None, kept, tuple(sorted(elim)), red.interior, red,
        r_kept, r_elim,
    )
    if not red.ineqs:
        return enc
    rows = []
    rhs = []
    for j in r_elim:
        rows.append([rat(c.coeffs[j]) for c in red.ineqs])
        rhs.append(ZERO)
    rows.append(
        [
            rat(c.bound) - vec_dot(vec(c.coeffs), red.interior)
            for c in red.ineqs
        ]
    )
    rhs.append(rat(1))
    try:
        enc.lambda_lp = make_standard_lp(rows, rhs, len(red.ineqs))
    except Exception:
        enc.infeasible = True
        return enc
    c0 = [-rat(c.bound) for c in red.ineqs]
    dirs = [[rat(c.coeffs[j]) for c in red.ineqs] for j in r_kept]
    enc.pobj = ParametricObjective.make(c0, dirs)
    return enc


def _check_eliminate(dim: int, eliminate: Sequence[int]) -> set:
    elim = set(eliminate)
    if any(j < 0 or j >= dim for j in elim):
        raise ValueError(f"eliminate indices out of range for dim {dim}")
    return elim


def _region_face(enc: ProjectionEncoding, region) -> Optional[CanonicalConstraint]:
    """Projected constraint contributed by one region's optimal multipliers."""
    lam = region.optimum
    ineqs = enc.reduction.ineqs
    for j in enc.reduced_eliminated:
        cancel = sum((lam[i] * ineqs[i].coeffs[j] for i in range(len(ineqs))), ZERO)
        if cancel != 0:
            raise RuntimeError("eliminated coordinate failed to cancel exactly")
    coeffs = [
        sum((lam[i] * ineqs[i].coeffs[j] for i in range(len(ineqs))), ZERO)
        for j in enc.reduced_kept
    ]
    bound = sum((lam[i] * rat(ineqs[i].bound) for i in range(len(ineqs))), ZERO)
    con = canonicalize(coeffs, bound, LE)
    if isinstance(con, CanonicalConstraint):
        return con
    if con is TRIVIALLY_FALSE:  # pragma: no cover - impossible for feasible lp
        raise RuntimeError("projection face is trivially false")
    return None


def _embed(con: CanonicalConstraint, positions: Sequence[int], width: int):
    coeffs = [0] * width
    for pos, j in zip(positions, con.coeffs):
        coeffs[pos] = j
    return canonicalize(coeffs, con.bound, con.relation)


def _assemble_output(
    enc: ProjectionEncoding, face_constraints: list, redundancy_mode: str
) -> Polyhedron:
    kept = enc.kept
    width = len(kept)
    pos_of = {j: i for i, j in enumerate(kept)}
    out = []
    feasible = None
    if enc.interior is not None:
        feasible = tuple(enc.interior[i] for i in enc.reduced_kept)
    try:
        minimized = syntactic_minimize(face_constraints)
        kept_ineqs, _ = eliminate_redundancy(
            minimized, mode=redundancy_mode, feasible_point=feasible
        )
    except EmptyPolyhedron:
        return Polyhedron(width, (), empty=True)
    reduced_positions = [
        pos_of[enc.reduction.var_map[i]] for i in enc.reduced_kept
    ]
    for con in kept_ineqs:
        emb = _embed(con, reduced_positions, width)
        if isinstance(emb, CanonicalConstraint):
            out.append(emb)
    for eq in enc.reduction.equalities:
        if any(eq.coeffs[j] != 0 for j in enc.eliminated):
            continue  # consumed by substitution; relates eliminated variables
        sliced = canonicalize([eq.coeffs[j] for j in kept], eq.bound, EQ)
        if sliced is TRIVIALLY_FALSE:
            return Polyhedron(width, (), empty=True)
        if isinstance(sliced, CanonicalConstraint):
            out.append(sliced)
    return Polyhedron(width, tuple(out)).sorted()


def project(
    p: Polyhedron,
    eliminate: Sequence[int],
    threads: int = 1,
    scheduler: str = "pool",
    compute: str = "auto",
    redundancy_mode: str = "sequential",
    collect_solution: Optional[list] = None,
    capacity: Optional[int] = None,
) -> Polyhedron:
    """Projection of p onto the coordinates not in `eliminate`.

    Output variables keep their relative (ascending) order.  When
    `collect_solution` is given, the PLP solution and its encoding are
    appended to it (for graph export and covering verification).
    """
    elim = _check_eliminate(p.dim, eliminate)
    kept = tuple(j for j in range(p.dim) if j not in elim)
    if p.empty:
        return Polyhedron(len(kept), (), empty=True)
    try:
        enc = build_projection_plp(p, elim)
    except EmptyPolyhedron:
        return Polyhedron(len(kept), (), empty=True)
    if enc.lambda_lp is None or enc.infeasible or _lambda_infeasible(enc):
        return _assemble_output(enc, [], redundancy_mode)
    extra = {} if capacity is None else {"capacity": capacity}
    solution = solve_parallel(
        enc.lambda_lp,
        enc.pobj,
        threads=threads,
        scheduler=scheduler,
        compute=compute,
        redundancy_mode=redundancy_mode,
        **extra,
    )
    if collect_solution is not None:
        collect_solution.append((enc, solution))
    faces = []
    for region in solution.regions:
        con = _region_face(enc, region)
        if con is not None:
            faces.append(con)
    return _assemble_output(enc, faces, redundancy_mode)


def _lambda_infeasible(enc: ProjectionEncoding) -> bool:
    out = exact_lp(enc.lambda_lp, (ZERO,) * enc.lambda_lp.n)
    return out.status is LPStatus.INFEASIBLE


def convex_hull(
    p1: Polyhedron,
    p2: Polyhedron,
    threads: int = 1,
    scheduler: str = "pool",
    compute: str = "auto",
    capacity: Optional[int] = None,
) -> Polyhedron:
    """Closed convex hull via the lifted combination encoding.

    Variables (x, y, z, sigma) with x = y + z, y in sigma·p1,
    z in (1-sigma)·p2, 0 <= sigma <= 1; the hull is the projection onto x.
    """
    if p1.dim != p2.dim:
        raise ValueError("polyhedra must share a dimension")
    if p1.empty:
        return p2
    if p2.empty:
        return p1
    d = p1.dim
    width = 3 * d + 1
    sigma = 3 * d
    rows = []
    for i in range(d):
        coeffs = [0] * width
        coeffs[i] = 1
        coeffs[d + i] = -1
        coeffs[2 * d + i] = -1
        rows.append((coeffs, 0, EQ))
    for con in p1.constraints:
        coeffs = [0] * width
        for i, c in enumerate(con.coeffs):
            coeffs[d + i] = c
        coeffs[sigma] = -con.bound
        rows.append((coeffs, 0, con.relation))
    for con in p2.constraints:
        coeffs = [0] * width
        for i, c in enumerate(con.coeffs):
            coeffs[2 * d + i] = c
        coeffs[sigma] = con.bound
        rows.append((coeffs, con.bound, con.relation))
    lo = [0] * width
    lo[sigma] = -1
    hi = [0] * width
    hi[sigma] = 1
    rows.append((lo, 0, LE))
    rows.append((hi, 1, LE))
    lifted = Polyhedron.from_rows(width, rows)
    return project(
        lifted,
        range(d, width),
        threads=threads,
        scheduler=scheduler,
        compute=compute,
        capacity=capacity,
    )


# --- Fourier-Motzkin oracle -------------------------------------------------------


def fm_project(
    p: Polyhedron, eliminate: Sequence[int], cap: int = 5000
) -> Polyhedron:
    """Textbook Fourier-Motzkin projection; test oracle only.

    Eliminates one variable at a time in index order, pairing lower and
    upper bounds, with syntactic cleanup per step and LP-based redundancy
    elimination at the end (and between steps once the intermediate system
    grows past a threshold, to keep the notorious FM blowup in check).
    Refuses (OracleCapExceeded) past `cap` intermediate constraints.
    """
    elim = _check_eliminate(p.dim, eliminate)
    kept = tuple(j for j in range(p.dim) if j not in elim)
    if p.empty:
        return Polyhedron(len(kept), (), empty=True)
    red = reduce_to_full_dim(p, prefer=set(elim))
    if red.empty:
        return Polyhedron(len(kept), (), empty=True)
    enc = ProjectionEncoding(
        None,
        None,
        kept,
        tuple(sorted(elim)),
        red.interior,
        red,
        tuple(i for i, j in enumerate(red.var_map) if j not in elim),
        tuple(i for i, j in enumerate(red.var_map) if j in elim),
    )
    work = [(vec(c.coeffs), rat(c.bound)) for c in red.ineqs]
    for col in enc.reduced_eliminated:
        zeros = []
        lowers = []
        uppers = []
        for coeffs, bound in work:
            if coeffs[col] == 0:
                zeros.append((coeffs, bound))
            elif coeffs[col] < 0:
                lowers.append((coeffs, bound))
            else:
                uppers.append((coeffs, bound))
        combos = list(zeros)
        for lc, lb in lowers:
            for uc, ub in uppers:
                scale_l = uc[col]
                scale_u = -lc[col]
                coeffs = tuple(
                    scale_l * a + scale_u * b for a, b in zip(lc, uc)
                )
                combos.append((coeffs, scale_l * lb + scale_u * ub))
        if len(combos) > cap:
            raise OracleCapExceeded(
                f"fm_project exceeded {cap} intermediate constraints"
            )
        cleaned = []
        for coeffs, bound in combos:
            con = canonicalize(coeffs, bound, LE)
            if con is TRIVIALLY_FALSE:
                return Polyhedron(len(kept), (), empty=True)
            if con is not TRIVIALLY_TRUE:
                cleaned.append(con)
        try:
            cleaned = syntactic_minimize(cleaned)
        except EmptyPolyhedron:
            return Polyhedron(len(kept), (), empty=True)
        if len(cleaned) > 32:
            # the original interior point satisfies every nonnegative
            # combination, so it stays a valid feasibility hint throughout
            cleaned, _ = eliminate_redundancy(
                cleaned, feasible_point=red.interior
            )
        work = [(vec(c.coeffs), rat(c.bound)) for c in cleaned]

    faces = []
    for coeffs, bound in work:
        con = canonicalize([coeffs[j] for j in enc.reduced_kept], bound, LE)
        if con is TRIVIALLY_FALSE:
            return Polyhedron(len(kept), (), empty=True)
        if isinstance(con, CanonicalConstraint):
            faces.append(con)
    return _assemble_output(enc, faces, "sequential")


# --- covering verification ---------------------------------------------------------


@dataclass
class CoveringReport:
    samples: int
    covered: int
    multi_covered: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.covered == self.samples

    @property
    def overlap_rate(self) -> float:
        return self.multi_covered / self.samples if self.samples else 0.0

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return (
            f"{status}: {self.covered}/{self.samples} covered, "
            f"overlap rate {self.overlap_rate:.3f}, "
            f"{len(self.failures)} failure(s)"
        )


def verify_covering(
    solution: PLPSolution,
    pobj: ParametricObjective,
    samples: int = 1000,
    seed: int = 0,
) -> CoveringReport:
    """Sample parameter space: every point covered, overlaps agree exactly.

    Multiply-covered samples must give the same exact objective value
    C(mu)'X* for every covering region; disagreements and uncovered points
    are reported with exact rationals.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    k = pobj.k
    report = CoveringReport(samples, 0, 0)
    for _ in range(samples):
        mu = tuple(
            rat(rng.randint(-1000, 1000), rng.choice((1, 1, 2, 4))) for _ in range(k)
        )
        covering = [
            (i, r) for i, r in enumerate(solution.regions) if r.covers(mu)
        ]
        if not covering:
            report.failures.append(
                "uncovered point (" + ", ".join(map(format_rational, mu)) + ")"
            )
            continue
        report.covered += 1
        if len(covering) > 1:
            report.multi_covered += 1
            c_mu = pobj.at(mu)
            values = {}
            for i, region in covering:
                values.setdefault(vec_dot(c_mu, region.optimum), []).append(i)
            if len(values) > 1:
                detail = "; ".join(
                    f"regions {idx} -> {format_rational(v)}"
                    for v, idx in values.items()
                )
                report.failures.append(
                    "objective mismatch at ("
                    + ", ".join(map(format_rational, mu))
                    + f"): {detail}"
                )
    return report
