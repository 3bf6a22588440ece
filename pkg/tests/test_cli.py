import csv
import subprocess
import sys
from pathlib import Path

import pytest
from click.testing import CliRunner

from plpoly.cli import (
    InstanceSpec,
    export_generation_graph,
    generate,
    main,
    planted_redundant_rows,
)
from plpoly.exact_arith import vec
from plpoly.fixtures import square_polygon_lp, square_polygon_objective
from plpoly.plp_engine import solve_sequential
from plpoly.poly_ops import format_polyhedron, parse_polyhedron
from plpoly.redundancy import eliminate_redundancy, syntactic_minimize


POLYGON_TEXT = """\
# square polygon
2 4
-1 0 0
0 -1 0
3 -1 6
-1 3 6
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def polygon_file(tmp_path):
    path = tmp_path / "polygon.poly"
    path.write_text(POLYGON_TEXT)
    return path


class TestGenerate:
    def test_counts_respected(self):
        spec = InstanceSpec(9, 0, 16, 16, 2, 20, 7)
        polys = generate(spec)
        assert len(polys) == 20
        assert all(p.dim == 16 and len(p.constraints) == 9 for p in polys)
        origin = vec([0] * 16)
        assert all(
            c.holds_strictly(origin) for p in polys for c in p.constraints
        )

    def test_determinism_bit_identical(self):
        spec = InstanceSpec(9, 0, 16, 16, 2, 5, 7)
        a = [format_polyhedron(p) for p in generate(spec)]
        b = [format_polyhedron(p) for p in generate(spec)]
        assert a == b

    def test_density_respected(self):
        spec = InstanceSpec(6, 0, 8, 3, 1, 4, 1)
        for p in generate(spec):
            for con in p.constraints:
                assert sum(1 for c in con.coeffs if c != 0) == 3

    def test_planted_rows_are_removable(self):
        spec = InstanceSpec(12, 4, 4, 4, 1, 3, 5)
        for poly in generate(spec):
            planted = planted_redundant_rows(spec, poly)
            cs = syntactic_minimize(list(poly.constraints))
            kept, _ = eliminate_redundancy(cs)
            assert not (set(planted) & set(kept))

    def test_validation(self):
        with pytest.raises(ValueError):
            InstanceSpec(4, 4, 4, 4, 1, 1, 0).validate()
        with pytest.raises(ValueError):
            InstanceSpec(4, 0, 4, 5, 1, 1, 0).validate()
        with pytest.raises(ValueError):
            InstanceSpec(4, 0, 4, 4, 4, 1, 0).validate()


class TestGenerationGraph:
    def test_single_region(self):
        from plpoly.lp_core import make_standard_lp
        from plpoly.plp_engine import ParametricObjective

        lp1 = make_standard_lp([[1, 1]], [1], 2)
        pobj1 = ParametricObjective.make([0, 0], [[-1, -1]])
        sol = solve_sequential(lp1, pobj1)
        dot = export_generation_graph(sol)
        assert dot.count("->") == 0
        assert 'r0 [label="0" shape=doublecircle]' in dot

    def test_polygon_tree(self):
        sol = solve_sequential(square_polygon_lp(), square_polygon_objective())
        dot = export_generation_graph(sol)
        roots = dot.count("doublecircle")
        edges = dot.count("->")
        assert edges == len(sol.regions) - roots
        assert dot.startswith("digraph regions {") and dot.rstrip().endswith("}")


class TestCLICommands:
    def test_gen_then_project_roundtrip(self, runner, tmp_path):
        out = tmp_path / "corpus"
        res = runner.invoke(
            main,
            ["gen", "-m", "8", "-d", "4", "--count", "2", "--seed", "3",
             "--out", str(out)],
        )
        assert res.exit_code == 0, res.output
        files = sorted(out.glob("*.poly"))
        assert len(files) == 2

        proj = tmp_path / "proj"
        res = runner.invoke(
            main,
            ["project", *map(str, files), "--project-count", "2",
             "--out", str(proj)],
        )
        assert res.exit_code == 0, res.output
        outputs = sorted(proj.glob("*.proj.poly"))
        assert len(outputs) == 2
        for f in outputs:
            p = parse_polyhedron(f.read_text())
            assert p.dim == 2
        assert (proj / "records.csv").exists()

    def test_gen_same_seed_identical_files(self, runner, tmp_path):
        outs = []
        for sub in ("a", "b"):
            out = tmp_path / sub
            res = runner.invoke(
                main,
                ["gen", "-m", "6", "-d", "3", "--count", "2", "--seed", "11",
                 "--out", str(out)],
            )
            assert res.exit_code == 0
            outs.append(b"".join(f.read_bytes() for f in sorted(out.glob("*.poly"))))
        assert outs[0] == outs[1]

    def test_project_stdout(self, runner, polygon_file):
        res = runner.invoke(
            main, ["project", str(polygon_file), "--eliminate", "1"]
        )
        assert res.exit_code == 0, res.output
        p = parse_polyhedron(
            "\n".join(l for l in res.output.splitlines() if not l.startswith("#"))
        )
        assert p.dim == 1
        texts = {str(c) for c in p.constraints}
        assert texts == {"-1 <= 0", "1 <= 3"}

    def test_project_threads_agree(self, runner, polygon_file, tmp_path):
        outputs = []
        for threads in ("1", "2"):
            out = tmp_path / f"t{threads}"
            res = runner.invoke(
                main,
                ["project", str(polygon_file), "--eliminate", "1",
                 "--threads", threads, "--compute", "inline", "--out", str(out)],
            )
            assert res.exit_code == 0
            body = [
                l
                for l in (out / "polygon.proj.poly").read_text().splitlines()
                if not l.startswith("#")
            ]
            outputs.append("\n".join(body))
        assert outputs[0] == outputs[1]

    def test_malformed_file_is_input_error(self, runner, tmp_path):
        bad = tmp_path / "bad.poly"
        bad.write_text("2 1\n1 oops 3\n")
        res = runner.invoke(main, ["project", str(bad), "--eliminate", "1"])
        assert res.exit_code == 2
        assert "line 2" in res.output

    def test_missing_file_is_input_error(self, runner, tmp_path):
        res = runner.invoke(
            main, ["project", str(tmp_path / "nope.poly"), "--eliminate", "0"]
        )
        assert res.exit_code == 2

    def test_hull_command(self, runner, tmp_path):
        a = tmp_path / "a.poly"
        b = tmp_path / "b.poly"
        a.write_text("2 4\n1 0 1\n-1 0 0\n0 1 1\n0 -1 0\n")
        b.write_text("2 4\n1 0 3\n-1 0 -2\n0 1 3\n0 -1 -2\n")
        out = tmp_path / "hull.poly"
        res = runner.invoke(main, ["hull", str(a), str(b), "--out", str(out)])
        assert res.exit_code == 0, res.output
        h = parse_polyhedron(out.read_text())
        assert len(h.constraints) == 6

    def test_verify_pass(self, runner, polygon_file):
        res = runner.invoke(
            main,
            ["verify", str(polygon_file), "--eliminate", "1", "--samples", "300"],
        )
        assert res.exit_code == 0, res.output
        assert "PASS" in res.output

    def test_verify_corrupted_solution_fails(self, runner, polygon_file, tmp_path):
        proj = tmp_path / "proj"
        res = runner.invoke(
            main,
            ["project", str(polygon_file), "--eliminate", "1",
             "--out", str(proj), "--dump-solution"],
        )
        assert res.exit_code == 0
        region_file = proj / "polygon.regions"
        text = region_file.read_text()
        # drop every region but the first: the covering now has holes
        first_block = text.split("region 1")[0]
        region_file.write_text(first_block)
        res = runner.invoke(
            main,
            ["verify", str(polygon_file), "--eliminate", "1",
             "--samples", "300", "--solution", str(region_file)],
        )
        assert res.exit_code == 1
        assert "uncovered" in res.output

    def test_graph_command(self, runner, polygon_file, tmp_path):
        out = tmp_path / "graph.dot"
        res = runner.invoke(
            main,
            ["graph", str(polygon_file), "--eliminate", "1", "--out", str(out)],
        )
        assert res.exit_code == 0, res.output
        dot = out.read_text()
        assert dot.startswith("digraph regions {")
        # forest property: edge count = regions - roots
        nodes = dot.count("[label=")
        roots = dot.count("doublecircle")
        assert dot.count("->") == nodes - roots


class TestBenchCommand:
    def test_bench_csv_schema_and_figures(self, runner, tmp_path):
        out = tmp_path / "bench"
        res = runner.invoke(
            main,
            ["bench", "--gen-spec", "8,0,4,3,2,1", "--threads", "1,2",
             "--reps", "2", "--scheduler", "pool", "--compute", "inline",
             "--seed", "5", "--out", str(out)],
        )
        assert res.exit_code == 0, res.output
        with open(out / "bench.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 4  # 2 thread counts x 2 reps
        assert set(rows[0]) == {
            "instance", "scheduler", "threads", "rep", "seconds", "regions",
            "tasks_total", "tasks_completed", "aborted_duplicate",
            "midpoint_repairs",
        }
        with open(out / "summary.csv") as fh:
            summary = list(csv.DictReader(fh))
        by_threads = {int(r["threads"]): r for r in summary}
        assert float(by_threads[1]["speedup"]) == 1.0
        assert (out / "bench_P_8_0_1_4_2_i000.png").exists()

    def test_bench_no_figures(self, runner, tmp_path):
        out = tmp_path / "bench"
        res = runner.invoke(
            main,
            ["bench", "--gen-spec", "6,0,3,3,1,1", "--threads", "1",
             "--reps", "1", "--scheduler", "rounds", "--compute", "inline",
             "--no-figures", "--out", str(out)],
        )
        assert res.exit_code == 0, res.output
        assert not list(out.glob("*.png"))

    def test_bench_requires_work(self, runner, tmp_path):
        res = runner.invoke(main, ["bench", "--out", str(tmp_path / "b")])
        assert res.exit_code == 2


def test_entry_point_runs():
    out = subprocess.run(
        [sys.executable, "-m", "plpoly.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    for command in ("gen", "project", "hull", "verify", "bench", "graph"):
        assert command in out.stdout


def test_bench_single_region_plateau(runner, tmp_path):
    # a single-region parametric LP cannot parallelize: speedup stays flat
    out = tmp_path / "bench"
    res = runner.invoke(
        main,
        ["bench", "--gen-spec", "4,0,3,3,1,1", "--threads", "1,2",
         "--reps", "3", "--scheduler", "pool", "--compute", "inline",
         "--seed", "9", "--no-figures", "--out", str(out)],
    )
    assert res.exit_code == 0, res.output
    with open(out / "summary.csv") as fh:
        rows = {int(r["threads"]): r for r in csv.DictReader(fh)}
    assert float(rows[1]["speedup"]) == 1.0
    # generous bounds: no meaningful speedup is expected or required
    assert 0.2 < float(rows[2]["speedup"]) < 3.0


def test_gen_validation_is_input_error(runner, tmp_path):
    res = runner.invoke(
        main,
        ["gen", "-m", "4", "-r", "4", "-d", "3", "--out", str(tmp_path / "x")],
    )
    assert res.exit_code == 2


def test_bench_both_schedulers_default(runner, tmp_path):
    out = tmp_path / "bench"
    res = runner.invoke(
        main,
        ["bench", "--gen-spec", "6,0,3,3,1,1", "--threads", "1", "--reps", "1",
         "--compute", "inline", "--no-figures", "--out", str(out)],
    )
    assert res.exit_code == 0, res.output
    with open(out / "bench.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert {r["scheduler"] for r in rows} == {"pool", "rounds"}
