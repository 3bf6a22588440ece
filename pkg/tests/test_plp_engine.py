import random

import pytest

from plpoly.exact_arith import LE, CanonicalConstraint, canonicalize, rat, vec, vec_dot
from plpoly.fixtures import (
    pyramid_apex,
    pyramid_lp,
    pyramid_objective,
    square_polygon_lp,
    square_polygon_objective,
)
from plpoly.lp_core import Basis, certify, reduced_costs
from plpoly.plp_engine import (
    EmptyConeError,
    ObjectiveTableau,
    ParametricObjective,
    Region,
    SimpleBasisSet,
    are_adjacent,
    compute_next,
    compute_region,
    exact_objective,
    format_solution,
    midpoint,
    normalize_probe,
    parse_solution,
    sign_conditions,
    solve_sequential,
)


@pytest.fixture
def lp():
    return square_polygon_lp()


@pytest.fixture
def pobj():
    return square_polygon_objective()


def nb(*idx):
    return Basis.from_nonbasic(idx, 4)


class TestExactObjective:
    def test_bilinear_tableau_of_top_vertex(self, lp, pobj):
        t = exact_objective(lp, nb(2, 3), pobj)
        assert t.nonbasic == (2, 3)
        assert t.entries[0] == (rat(0), rat(0), rat(0))
        assert t.entries[1] == (rat(3), rat(-3, 8), rat(-1, 8))
        assert t.entries[2] == (rat(3), rat(-1, 8), rat(-3, 8))

    def test_zero_objective_rows(self, lp):
        zero = ParametricObjective.make([0] * 4, [[0] * 4, [0] * 4])
        t = exact_objective(lp, nb(2, 3), zero)
        assert all(v == 0 for row in t.entries for v in row)

    def test_no_parameters_reduces_to_reduced_costs(self, lp):
        c = vec([1, 1, 0, 0])
        flat = ParametricObjective.make(c, [])
        t = exact_objective(lp, nb(2, 3), flat)
        alphas = reduced_costs(lp, nb(2, 3), c)
        assert t.entries[0][1:] == tuple(alphas[j] for j in (2, 3))


class TestSignConditions:
    def test_polygon_cone(self, lp, pobj):
        t = exact_objective(lp, nb(2, 3), pobj)
        cones = sign_conditions(t)
        assert cones == [
            canonicalize([-3, -1], 0),
            canonicalize([-1, -3], 0),
        ]

    def test_zero_tableau_gives_whole_space(self):
        t = ObjectiveTableau(
            ((rat(0), rat(0)), (rat(0), rat(0))), (0,)
        )
        assert sign_conditions(t) == []

    def test_negative_constant_column_dropped(self):
        t = ObjectiveTableau(
            ((rat(0), rat(-1)), (rat(0), rat(0))), (0,)
        )
        assert sign_conditions(t) == []

    def test_positive_constant_column_is_empty_cone(self):
        t = ObjectiveTableau(
            ((rat(0), rat(1)), (rat(0), rat(0))), (0,)
        )
        with pytest.raises(EmptyConeError):
            sign_conditions(t)


def region_of(constraints, interior, witnesses=None):
    cons = tuple(canonicalize(c, b, LE) for c, b in constraints)
    return Region(
        constraints=cons,
        witnesses=tuple(witnesses or ()),
        optimum=(),
        basis=Basis((0,), ()),
        interior_point=vec(interior),
    )


class TestAdjacency:
    def test_shared_facet(self):
        left = region_of([(( 1,), 0)], [-1])
        right = region_of([((-1,), 0)], [1])
        assert are_adjacent(left, right, vec([1]))

    def test_gap_is_detected(self):
        left = region_of([((1,), 1)], [0])
        far = region_of([((-1,), -3)], [4])
        assert not are_adjacent(left, far, vec([4]))

    def test_none_is_always_adjacent(self):
        right = region_of([((-1,), 0)], [1])
        assert are_adjacent(None, right, vec([1]))

    def test_midpoint_one_dimensional(self):
        left = region_of([((1,), 1)], [0])
        far = region_of([((-1,), -3)], [4])
        assert midpoint(left, far, vec([4])) == vec([2])

    def test_midpoint_lands_in_gap_region(self):
        # 2-D configuration with an intermediate band between the regions
        left = region_of([((1, 0), 0)], [-1, 0])
        mid_band = region_of([((-1, 0), 0), ((1, 0), 2)], [1, 0])
        right = region_of([((-1, 0), -2)], [3, 0])
        probe = vec([3, 0])
        assert not are_adjacent(left, right, probe)
        point = midpoint(left, right, probe)
        assert mid_band.covers(point)
        assert not left.covers(point) and not right.covers(point)

    def test_midpoint_overlap_still_defined(self):
        # overlapping regions: the segment enters the target (at t=0, its
        # start is already inside) before it exits the source at x=2
        left = region_of([((1,), 2)], [0])
        overlapping = region_of([((-1,), 1)], [3])
        probe = vec([4])
        point = midpoint(left, overlapping, probe)
        assert point == vec([1])  # (exit 2 + entry 0) / 2
        assert overlapping.covers(point)  # handled as covered next round


def test_compute_next_returns_stored_witness():
    region = region_of(
        [((-1, 0), 0), ((0, -1), 0)],
        [1, 1],
        witnesses=[vec([-1, 1]), vec([1, -1])],
    )
    assert compute_next(region, 0) == vec([-1, 1])
    assert compute_next(region, 1) == vec([1, -1])


class TestComputeRegion:
    def test_new_region_at_diagonal(self, lp, pobj):
        bases = SimpleBasisSet()
        out = compute_region(lp, pobj, vec([1, 1]), bases)
        assert out.kind == "new"
        assert out.region.optimum == vec([3, 3, 0, 0])
        assert set(out.region.constraints) == {
            canonicalize([-3, -1], 0),
            canonicalize([-1, -3], 0),
        }

    def test_already_seen_on_same_cone(self, lp, pobj):
        bases = SimpleBasisSet()
        first = compute_region(lp, pobj, vec([1, 1]), bases)
        again = compute_region(lp, pobj, vec([2, 2]), bases)
        assert first.kind == "new" and again.kind == "seen"
        assert again.basis_key == first.region.basis.key

    def test_pyramid_apex_probe(self):
        lp8, pobj8 = pyramid_lp(8), pyramid_objective(8)
        bases = SimpleBasisSet()
        out = compute_region(lp8, pobj8, vec([0, 0, 1]), bases)
        assert out.kind == "new"
        assert out.region.optimum == pyramid_apex(8)
        assert len(out.region.basis.nonbasic) == 3
        again = compute_region(lp8, pobj8, vec([0, 0, 1]), bases)
        assert again.kind == "seen"


class TestSolveSequential:
    def test_polygon_quasi_partition(self, lp, pobj):
        sol = solve_sequential(lp, pobj)
        assert len(sol.regions) == 4
        cones = {tuple(sorted(str(c) for c in r.constraints)) for r in sol.regions}
        assert cones == {
            tuple(sorted(["-3 -1 <= 0", "-1 -3 <= 0"])),  # vertex (3,3)
            tuple(sorted(["3 1 <= 0", "0 -1 <= 0"])),     # vertex (0,2)
            tuple(sorted(["1 3 <= 0", "-1 0 <= 0"])),     # vertex (2,0)
            tuple(sorted(["1 0 <= 0", "0 1 <= 0"])),      # vertex (0,0)
        }
        optima = {r.optimum for r in sol.regions}
        assert optima == {
            vec([3, 3, 0, 0]), vec([0, 2, 8, 0]), vec([2, 0, 0, 8]), vec([0, 0, 6, 6])
        }

    def test_single_region_when_one_constraint(self):
        from plpoly.lp_core import make_standard_lp

        # objective constant on the feasible segment: one basis fits all mu
        lp1 = make_standard_lp([[1, 1]], [1], 2)
        pobj1 = ParametricObjective.make([0, 0], [[-1, -1]])
        sol = solve_sequential(lp1, pobj1)
        assert len(sol.regions) == 1
        assert sol.regions[0].constraints == ()

    def test_edges_form_rooted_forest(self, lp, pobj):
        sol = solve_sequential(lp, pobj)
        parents = {}
        for parent, child in sol.generation_edges:
            assert child not in parents
            parents[child] = parent
        roots = [c for c, p in parents.items() if p is None]
        assert len(roots) >= 1
        for child, parent in parents.items():
            seen = set()
            node = child
            while parents[node] is not None:
                assert node not in seen
                seen.add(node)
                node = parents[node]

    def test_region_invariants(self, lp, pobj):
        sol = solve_sequential(lp, pobj)
        for region in sol.regions:
            assert all(
                c.holds_strictly(region.interior_point) for c in region.constraints
            )
            for i, w in enumerate(region.witnesses):
                for j, c in enumerate(region.constraints):
                    assert c.holds(w) == (i != j)

    def test_random_mu_certifies_region_optimum(self, lp, pobj):
        sol = solve_sequential(lp, pobj)
        rng = random.Random(9)
        for region in sol.regions:
            hits = 0
            while hits < 25:
                mu = vec([rat(rng.randint(-50, 50), 4), rat(rng.randint(-50, 50), 4)])
                if not region.covers(mu):
                    continue
                hits += 1
                x = certify(lp, region.basis, pobj.at(mu))
                assert x == region.optimum

    def test_overlap_objective_agreement(self, lp, pobj):
        sol = solve_sequential(lp, pobj)
        rng = random.Random(4)
        for _ in range(1000):
            mu = vec([rat(rng.randint(-100, 100)), rat(rng.randint(-100, 100))])
            covering = [r for r in sol.regions if r.covers(mu)]
            assert covering
            values = {vec_dot(pobj.at(mu), r.optimum) for r in covering}
            assert len(values) == 1

    def test_pyramid4_covering(self):
        from plpoly.poly_ops import verify_covering

        lp4, pobj4 = pyramid_lp(4), pyramid_objective(4)
        sol = solve_sequential(lp4, pobj4)
        report = verify_covering(sol, pobj4, samples=800, seed=2)
        assert report.ok


class TestProbeNormalization:
    def test_homogeneous_probes_become_primitive(self, pobj):
        assert normalize_probe(pobj, vec([rat(2, 3), rat(4, 3)])) == vec([1, 2])

    def test_inhomogeneous_probes_unchanged(self):
        pobj = ParametricObjective.make([1, 0], [[0, 1]])
        assert normalize_probe(pobj, vec([rat(2, 3)])) == vec([rat(2, 3)])


def test_solution_text_roundtrip(lp, pobj):
    sol = solve_sequential(lp, pobj)
    text = format_solution(sol)
    assert "region 0 basis" in text and "parent none" in text
    back = parse_solution(text)
    assert len(back.regions) == len(sol.regions)
    for a, b in zip(back.regions, sol.regions):
        assert a.constraints == b.constraints
        assert a.optimum == b.optimum
        assert a.basis.nonbasic == b.basis.nonbasic
    assert back.generation_edges == sol.generation_edges


class TestHardErrors:
    def test_unbounded_direction_raises(self):
        from plpoly.lp_core import make_standard_lp
        from plpoly.plp_engine import PLPError

        # max mu*x0 with x0 - x1 = 0: unbounded for mu > 0
        lp = make_standard_lp([[1, -1]], [0], 2)
        pobj = ParametricObjective.make([0, 0], [[1, 0]])
        with pytest.raises(PLPError):
            solve_sequential(lp, pobj)

    def test_infeasible_lp_raises(self):
        from plpoly.lp_core import StandardLP
        from plpoly.plp_engine import PLPError
        from plpoly.exact_arith import vec as _vec

        lp = StandardLP((_vec([0, 0]),), _vec([1]), 2)
        pobj = ParametricObjective.make([0, 0], [[1, 0]])
        with pytest.raises(PLPError):
            solve_sequential(lp, pobj)


class TestAdversarialBackend:
    """A wrong or useless float backend costs speed only, never results."""

    def _canon(self, sol):
        return {(frozenset(r.constraints), r.optimum) for r in sol.regions}

    def test_always_failing_backend(self, lp, pobj):
        from plpoly.lp_core import FloatBackendResult, set_float_backend

        reference = self._canon(solve_sequential(lp, pobj))
        prev = set_float_backend(lambda lp_, c: FloatBackendResult("failed"))
        try:
            sol = solve_sequential(lp, pobj)
        finally:
            set_float_backend(prev)
        assert self._canon(sol) == reference

    def test_randomly_lying_backend(self, lp, pobj):
        import random as _random

        from plpoly.lp_core import Basis, FloatBackendResult, set_float_backend
        from plpoly.poly_ops import verify_covering

        reference = self._canon(solve_sequential(lp, pobj))
        rng = _random.Random(13)

        def liar(lp_, c):
            roll = rng.random()
            if roll < 0.3:
                nb = tuple(sorted(rng.sample(range(lp_.n), lp_.n - lp_.m)))
                return FloatBackendResult("optimal", Basis.from_nonbasic(nb, lp_.n))
            if roll < 0.4:
                return FloatBackendResult("infeasible")
            if roll < 0.5:
                return FloatBackendResult("unbounded")
            return FloatBackendResult("failed")

        prev = set_float_backend(liar)
        try:
            sol = solve_sequential(lp, pobj)
        finally:
            set_float_backend(prev)
        assert self._canon(sol) == reference
        assert verify_covering(sol, pobj, samples=400, seed=3).ok

    def test_lying_backend_projection_output_unchanged(self):
        import random as _random

        from plpoly.cli import InstanceSpec, generate
        from plpoly.lp_core import Basis, FloatBackendResult, set_float_backend
        from plpoly.poly_ops import project

        spec = InstanceSpec(8, 0, 4, 3, 2, 1, seed=21)
        poly = generate(spec)[0]
        reference = project(poly, [2, 3]).canonical_key()
        rng = _random.Random(7)

        def liar(lp_, c):
            if rng.random() < 0.5:
                nb = tuple(sorted(rng.sample(range(lp_.n), lp_.n - lp_.m)))
                return FloatBackendResult("optimal", Basis.from_nonbasic(nb, lp_.n))
            return FloatBackendResult("failed")

        prev = set_float_backend(liar)
        try:
            out = project(poly, [2, 3])
        finally:
            set_float_backend(prev)
        assert out.canonical_key() == reference


def test_covering_filter_handles_float_overflow():
    # coefficients beyond float range disable the filter for that region
    # only; scans stay exact and the sweep still rejects it exactly
    from plpoly.plp_engine import CoveringIndex, probe_float_arrays

    huge = 10**400
    unfilterable = Region(
        constraints=(CanonicalConstraint((huge, 1), 0),),
        witnesses=(), optimum=(), basis=Basis((0,), ()),
        interior_point=vec([-1, 0]),
    )
    plain = Region(
        constraints=(CanonicalConstraint((-1, 0), 0),),
        witnesses=(), optimum=(), basis=Basis((1,), ()),
        interior_point=vec([1, 0]),
    )
    index = CoveringIndex()
    index.append(unfilterable)
    index.append(plain)
    d = vec([1, 0])
    farrays = probe_float_arrays(d)
    assert list(index.scan(d, 0, 2, farrays)) == [1]
    assert list(index.scan(d, 0, 2, farrays, exact=False)) == [1]
    d2 = vec([-1, 5])
    assert list(index.scan(d2, 0, 2, probe_float_arrays(d2))) == [0]
    assert probe_float_arrays(vec([rat(huge)])) is None
