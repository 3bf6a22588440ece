"""Command-line front end: gen, project, hull, verify, bench, graph.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 internal
hard error (infeasible or unbounded parametric LP).
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import click

from . import bench as bench_mod
from .exact_arith import LE, rat
from .plp_engine import PLPError, PLPSolution, format_solution, parse_solution
from .poly_ops import (
    Polyhedron,
    PolyhedronFormatError,
    convex_hull,
    fm_project,
    format_polyhedron,
    parse_polyhedron,
    project,
    verify_covering,
)
from .redundancy import OracleCapExceeded

EXIT_VERIFY_FAIL = 1
EXIT_INPUT_ERROR = 2
EXIT_HARD_ERROR = 3


# --- random instance generation -------------------------------------------------


@dataclass(frozen=True)
class InstanceSpec:
    """Shape of a generated benchmark corpus (named m_r_count_d_projected)."""

    constraints: int
    redundant: int
    variables: int
    density: int
    projected: int
    count: int
    seed: int

    def validate(self) -> None:
        if self.redundant >= self.constraints:
            raise ValueError("redundant rows must be fewer than constraints")
        if self.density < 1 or self.density > self.variables:
            raise ValueError("density must be in 1..variables")
        if self.projected < 0 or self.projected >= self.variables:
            raise ValueError("projected count must be below the dimension")
        if self.count < 1:
            raise ValueError("instance count must be >= 1")
        if self.constraints - self.redundant < 2 and self.redundant > 0:
            raise ValueError("need >= 2 base rows to plant redundancies")

    @property
    def name(self) -> str:
        return (
            f"{self.constraints}_{self.redundant}_{self.count}"
            f"_{self.variables}_{self.projected}"
        )


_COMBO_WEIGHTS = (1, 2, 3, rat(1, 2), rat(3, 2))


def generate(spec: InstanceSpec) -> list[Polyhedron]:
    """Random nonempty full-dimensional polyhedra, deterministic per seed.

    Base rows have `density` nonzero integer coefficients in [-50, 50] and a
    bound in [1, 100], so the origin is strictly interior; each redundant row
    is a positive rational combination of two base rows with bound slack +1.
    """
    spec.validate()
    rng = random.Random(spec.seed)
    out = []
    for _ in range(spec.count):
        base = []
        for _ in range(spec.constraints - spec.redundant):
            coeffs = [0] * spec.variables
            for j in rng.sample(range(spec.variables), spec.density):
                value = 0
                while value == 0:
                    value = rng.randint(-50, 50)
                coeffs[j] = value
            base.append((coeffs, rng.randint(1, 100)))
        rows = [(coeffs, bound, LE) for coeffs, bound in base]
        for _ in range(spec.redundant):
            i1, i2 = rng.sample(range(len(base)), 2)
            w1 = rng.choice(_COMBO_WEIGHTS)
            w2 = rng.choice(_COMBO_WEIGHTS)
            coeffs = [
                w1 * a + w2 * b for a, b in zip(base[i1][0], base[i2][0])
            ]
            bound = w1 * base[i1][1] + w2 * base[i2][1] + 1
            rows.append((coeffs, bound, LE))
        out.append(Polyhedron.from_rows(spec.variables, rows))
    return out


def planted_redundant_rows(spec: InstanceSpec, instance: Polyhedron) -> list:
    """The canonical forms of the planted rows (the tail of the row list)."""
    return list(instance.constraints[spec.constraints - spec.redundant :])


# --- generation graph export ------------------------------------------------------


def export_generation_graph(solution: PLPSolution) -> str:
    """DOT text: one node per region, one edge per generation step.

    Roots (regions created by the initial task) are drawn as double circles;
    edge count = region count - root count.
    """
    lines = ["digraph regions {"]
    parents = {child: parent for parent, child in solution.generation_edges}
    for i in range(len(solution.regions)):
        shape = " shape=doublecircle" if parents.get(i) is None else ""
        lines.append(f'  r{i} [label="{i}"{shape}];')
    for parent, child in solution.generation_edges:
        if parent is not None:
            lines.append(f"  r{parent} -> r{child};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- shared CLI helpers -------------------------------------------------------------


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_poly(path: Path) -> Polyhedron:
    try:
        return parse_polyhedron(Path(path).read_text())
    except FileNotFoundError:
        _fail(EXIT_INPUT_ERROR, f"{path}: no such file")
    except PolyhedronFormatError as exc:
        _fail(EXIT_INPUT_ERROR, f"{path}: {exc}")


def _eliminate_indices(
    poly: Polyhedron, eliminate: Optional[str], project_count: Optional[int], path
) -> list[int]:
    if eliminate is not None and project_count is not None:
        _fail(EXIT_INPUT_ERROR, "--eliminate and --project-count are exclusive")
    if eliminate is not None:
        try:
            idx = sorted({int(v) for v in eliminate.split(",") if v.strip() != ""})
        except ValueError:
            _fail(EXIT_INPUT_ERROR, f"bad --eliminate list {eliminate!r}")
        if not idx:
            _fail(EXIT_INPUT_ERROR, "--eliminate list is empty")
        if idx[0] < 0 or idx[-1] >= poly.dim:
            _fail(
                EXIT_INPUT_ERROR,
                f"{path}: eliminate indices {idx} out of range for dim {poly.dim}",
            )
        return idx
    count = 1 if project_count is None else project_count
    if count < 0 or count >= poly.dim:
        _fail(EXIT_INPUT_ERROR, f"{path}: cannot project {count} of {poly.dim} dims")
    return list(range(poly.dim - count, poly.dim))


_threads_opt = click.option("--threads", default=1, show_default=True, type=int)
_scheduler_opt = click.option(
    "--scheduler",
    default="pool",
    show_default=True,
    type=click.Choice(["pool", "rounds"]),
)
_compute_opt = click.option(
    "--compute",
    default="auto",
    show_default=True,
    type=click.Choice(["auto", "inline", "processes"]),
    help="Run per-task kernels inline or in a process pool.",
)
_capacity_opt = click.option(
    "--capacity",
    default=None,
    type=int,
    help="Region store capacity (default 2**20).",
)


@click.group()
def main():
    """Convex polyhedra via task-parallel parametric linear programming."""


@main.command()
@click.option("--constraints", "-m", required=True, type=int)
@click.option("--redundant", "-r", default=0, show_default=True, type=int)
@click.option("--variables", "-d", required=True, type=int)
@click.option("--density", default=None, type=int, help="Nonzeros per row (default d).")
@click.option("--project-count", default=1, show_default=True, type=int)
@click.option("--count", default=1, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", required=True, type=click.Path(file_okay=False, path_type=Path))
def gen(constraints, redundant, variables, density, project_count, count, seed, out):
    """Generate a random polyhedron corpus (poly v1 files)."""
    spec = InstanceSpec(
        constraints=constraints,
        redundant=redundant,
        variables=variables,
        density=density if density is not None else variables,
        projected=project_count,
        count=count,
        seed=seed,
    )
    try:
        instances = generate(spec)
    except ValueError as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))
    out.mkdir(parents=True, exist_ok=True)
    for i, poly in enumerate(instances):
        path = out / f"P_{spec.name}_i{i:03d}.poly"
        path.write_text(
            format_polyhedron(poly, comment=f"seed={seed} instance={i} spec={spec.name}")
        )
        click.echo(str(path))


@main.command("project")
@click.argument("inputs", nargs=-1, required=True, type=click.Path(path_type=Path))
@click.option("--eliminate", default=None, help="Comma list of variable indices.")
@click.option("--project-count", default=None, type=int, help="Eliminate the last n variables.")
@_threads_opt
@_scheduler_opt
@_compute_opt
@_capacity_opt
@click.option(
    "--format",
    "fmt",
    default="poly",
    show_default=True,
    type=click.Choice(["poly", "csv", "dot"]),
    help="Emit projected polyhedra, per-run records, or generation graphs.",
)
@click.option("--out", default=None, type=click.Path(file_okay=False, path_type=Path))
@click.option("--dump-solution", is_flag=True, help="Also write the region file.")
def project_cmd(inputs, eliminate, project_count, threads, scheduler, compute,
                capacity, fmt, out, dump_solution):
    """Project polyhedra onto the kept coordinates."""
    records = []
    for path in inputs:
        poly = _load_poly(path)
        idx = _eliminate_indices(poly, eliminate, project_count, path)
        collected: list = []
        import time as _time

        t0 = _time.perf_counter()
        try:
            result = project(
                poly,
                idx,
                threads=threads,
                scheduler=scheduler,
                compute=compute,
                collect_solution=collected,
                capacity=capacity,
            )
        except PLPError as exc:
            _fail(EXIT_HARD_ERROR, f"{path}: {exc}")
        elapsed = _time.perf_counter() - t0
        if fmt == "dot":
            if not collected:
                _fail(EXIT_INPUT_ERROR, f"{path}: trivial projection has no graph")
            payload = export_generation_graph(collected[0][1])
            suffix = ".dot"
        else:
            payload = format_polyhedron(
                result, comment=f"projection of {Path(path).name}, eliminated {idx}"
            )
            suffix = ".proj.poly"
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            if fmt != "csv":
                target = out / (Path(path).stem + suffix)
                target.write_text(payload)
                click.echo(str(target))
            if dump_solution and collected:
                (out / (Path(path).stem + ".regions")).write_text(
                    format_solution(collected[0][1])
                )
        elif fmt != "csv":
            click.echo(payload, nl=False)
        regions = len(collected[0][1].regions) if collected else 0
        records.append((Path(path).name, elapsed, regions, len(result.constraints)))
    if out is not None or fmt == "csv":
        import csv
        import sys as _sys

        if out is not None:
            fh = open(out / "records.csv", "w", newline="")
        else:
            fh = _sys.stdout
        writer = csv.writer(fh)
        writer.writerow(["instance", "seconds", "regions", "constraints"])
        writer.writerows(records)
        if out is not None:
            fh.close()


@main.command()
@click.argument("first", type=click.Path(path_type=Path))
@click.argument("second", type=click.Path(path_type=Path))
@_threads_opt
@_scheduler_opt
@_compute_opt
@_capacity_opt
@click.option("--out", default=None, type=click.Path(dir_okay=False, path_type=Path))
def hull(first, second, threads, scheduler, compute, capacity, out):
    """Convex hull of two polyhedra."""
    p1 = _load_poly(first)
    p2 = _load_poly(second)
    if p1.dim != p2.dim:
        _fail(EXIT_INPUT_ERROR, f"dimension mismatch: {p1.dim} vs {p2.dim}")
    try:
        result = convex_hull(p1, p2, threads=threads, scheduler=scheduler,
                             compute=compute, capacity=capacity)
    except PLPError as exc:
        _fail(EXIT_HARD_ERROR, str(exc))
    text = format_polyhedron(
        result, comment=f"hull of {Path(first).name} and {Path(second).name}"
    )
    if out is not None:
        Path(out).write_text(text)
        click.echo(str(out))
    else:
        click.echo(text, nl=False)


@main.command()
@click.argument("inputs", nargs=-1, required=True, type=click.Path(path_type=Path))
@click.option("--eliminate", default=None)
@click.option("--project-count", default=None, type=int)
@click.option("--samples", default=1000, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--oracle-cap", default=5000, show_default=True, type=int)
@click.option(
    "--solution",
    default=None,
    type=click.Path(path_type=Path),
    help="Verify a stored region file instead of recomputing.",
)
@_threads_opt
@_scheduler_opt
@_compute_opt
def verify(inputs, eliminate, project_count, samples, seed, oracle_cap, solution,
           threads, scheduler, compute):
    """Check covering (and FM oracle agreement) of projections."""
    failures = 0
    for path in inputs:
        poly = _load_poly(path)
        idx = _eliminate_indices(poly, eliminate, project_count, path)
        collected: list = []
        try:
            result = project(
                poly,
                idx,
                threads=threads,
                scheduler=scheduler,
                compute=compute,
                collect_solution=collected,
            )
        except PLPError as exc:
            _fail(EXIT_HARD_ERROR, f"{path}: {exc}")
        if solution is not None:
            try:
                stored = parse_solution(Path(solution).read_text())
            except (OSError, ValueError) as exc:
                _fail(EXIT_INPUT_ERROR, f"{solution}: {exc}")
            if not collected:
                _fail(EXIT_INPUT_ERROR, f"{path}: projection produced no PLP to verify")
            report = verify_covering(stored, collected[0][0].pobj, samples, seed)
            click.echo(f"{path} [stored solution]: {report.summary()}")
            for failure in report.failures[:5]:
                click.echo(f"  {failure}")
            failures += 0 if report.ok else 1
            continue
        if collected:
            enc, plp_solution = collected[0]
            report = verify_covering(plp_solution, enc.pobj, samples, seed)
            click.echo(f"{path}: {report.summary()}")
            for failure in report.failures[:5]:
                click.echo(f"  {failure}")
            if not report.ok:
                failures += 1
        else:
            click.echo(f"{path}: trivial projection (no parametric LP)")
        try:
            oracle = fm_project(poly, idx, cap=oracle_cap)
            if oracle.canonical_key() == result.canonical_key():
                click.echo(f"{path}: PASS oracle agreement ({len(result.constraints)} constraints)")
            else:
                failures += 1
                click.echo(f"{path}: FAIL oracle disagreement")
                click.echo("  project: " + "; ".join(str(c) for c in result.constraints))
                click.echo("  fm     : " + "; ".join(str(c) for c in oracle.constraints))
        except OracleCapExceeded as exc:
            click.echo(f"{path}: oracle skipped ({exc})")
    sys.exit(EXIT_VERIFY_FAIL if failures else 0)


@main.command("bench")
@click.argument("inputs", nargs=-1, type=click.Path(path_type=Path))
@click.option("--gen-spec", default=None, help="m,r,d,density,projected,count to generate.")
@click.option("--threads", default="1,2", show_default=True, help="Comma list of thread counts.")
@click.option(
    "--scheduler",
    default="both",
    show_default=True,
    type=click.Choice(["pool", "rounds", "both"]),
)
@click.option("--reps", default=10, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--eliminate", default=None)
@click.option("--project-count", default=None, type=int)
@_compute_opt
@click.option("--out", required=True, type=click.Path(file_okay=False, path_type=Path))
@click.option("--figures/--no-figures", default=True, show_default=True)
def bench_cmd(inputs, gen_spec, threads, scheduler, reps, seed, eliminate,
              project_count, compute, out, figures):
    """Benchmark projections; CSV records plus time/speedup figures."""
    try:
        thread_list = sorted({int(v) for v in threads.split(",")})
    except ValueError:
        _fail(EXIT_INPUT_ERROR, f"bad --threads list {threads!r}")
    schedulers = ["pool", "rounds"] if scheduler == "both" else [scheduler]
    work: list[tuple[str, Polyhedron, list[int]]] = []
    if gen_spec is not None:
        try:
            m, r, d, density, projected, count = (int(v) for v in gen_spec.split(","))
            spec = InstanceSpec(m, r, d, density, projected, count, seed)
            instances = generate(spec)
        except ValueError as exc:
            _fail(EXIT_INPUT_ERROR, f"bad --gen-spec: {exc}")
        for i, poly in enumerate(instances):
            idx = list(range(d - projected, d))
            work.append((f"P_{spec.name}_i{i:03d}", poly, idx))
    for path in inputs:
        poly = _load_poly(path)
        idx = _eliminate_indices(poly, eliminate, project_count, path)
        work.append((Path(path).stem, poly, idx))
    if not work:
        _fail(EXIT_INPUT_ERROR, "nothing to benchmark: pass inputs or --gen-spec")

    out.mkdir(parents=True, exist_ok=True)
    records = []
    for name, poly, idx in work:
        try:
            records.extend(
                bench_mod.bench_projection(
                    name, poly, idx, thread_list, schedulers, reps, compute
                )
            )
        except PLPError as exc:
            _fail(EXIT_HARD_ERROR, f"{name}: {exc}")
    bench_mod.write_records_csv(records, out / "bench.csv")
    summary = bench_mod.summarize(records)
    bench_mod.write_summary_csv(summary, out / "summary.csv")
    click.echo(str(out / "bench.csv"))
    click.echo(str(out / "summary.csv"))
    if figures:
        for path in bench_mod.render_figures(summary, out):
            click.echo(str(path))


@main.command()
@click.argument("input_path", type=click.Path(path_type=Path))
@click.option("--eliminate", default=None)
@click.option("--project-count", default=None, type=int)
@_threads_opt
@_scheduler_opt
@_compute_opt
@click.option("--out", default=None, type=click.Path(dir_okay=False, path_type=Path))
def graph(input_path, eliminate, project_count, threads, scheduler, compute, out):
    """DOT export of the region generation graph of a projection."""
    poly = _load_poly(input_path)
    idx = _eliminate_indices(poly, eliminate, project_count, input_path)
    collected: list = []
    try:
        project(
            poly,
            idx,
            threads=threads,
            scheduler=scheduler,
            compute=compute,
            collect_solution=collected,
        )
    except PLPError as exc:
        _fail(EXIT_HARD_ERROR, f"{input_path}: {exc}")
    if not collected:
        _fail(EXIT_INPUT_ERROR, f"{input_path}: projection produced no parametric LP")
    dot = export_generation_graph(collected[0][1])
    if out is not None:
        Path(out).write_text(dot)
        click.echo(str(out))
    else:
        click.echo(dot, nl=False)


if __name__ == "__main__":
    main()
