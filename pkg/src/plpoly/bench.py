"""Benchmark records, statistics and figure rendering for the CLI.

Timing covers the region enumeration only (encoding construction, parsing
and I/O are excluded).  Each (instance, scheduler, threads) group is run for
a number of repetitions and summarized with mean, standard deviation and
speedup relative to the 1-thread mean of the same scheduler.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .concurrent_runtime import solve_parallel
from .poly_ops import Polyhedron, build_projection_plp
from .redundancy import EmptyPolyhedron

RECORD_FIELDS = [
    "instance",
    "scheduler",
    "threads",
    "rep",
    "seconds",
    "regions",
    "tasks_total",
    "tasks_completed",
    "aborted_duplicate",
    "midpoint_repairs",
]

SUMMARY_FIELDS = [
    "instance",
    "scheduler",
    "threads",
    "reps",
    "mean_seconds",
    "std_seconds",
    "speedup",
    "regions",
]


@dataclass
class BenchRecord:
    instance: str
    scheduler: str
    threads: int
    rep: int
    seconds: float
    regions: int
    tasks_total: int
    tasks_completed: int
    aborted_duplicate: int
    midpoint_repairs: int

    def row(self) -> list:
        return [getattr(self, f) for f in RECORD_FIELDS]


def bench_projection(
    name: str,
    poly: Polyhedron,
    eliminate: Sequence[int],
    thread_list: Sequence[int],
    schedulers: Sequence[str],
    reps: int,
    compute: str = "auto",
) -> list:
    """Run the PLP solve of one projection instance across configurations."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    enc = build_projection_plp(poly, eliminate)
    if enc.lambda_lp is None or enc.pobj is None:
        raise EmptyPolyhedron(f"instance {name} has no multiplier LP to solve")
    records = []
    for scheduler in schedulers:
        for threads in thread_list:
            for rep in range(reps):
                t0 = time.perf_counter()
                sol = solve_parallel(
                    enc.lambda_lp,
                    enc.pobj,
                    threads=threads,
                    scheduler=scheduler,
                    compute=compute,
                )
                elapsed = time.perf_counter() - t0
                records.append(
                    BenchRecord(
                        instance=name,
                        scheduler=scheduler,
                        threads=threads,
                        rep=rep,
                        seconds=elapsed,
                        regions=len(sol.regions),
                        tasks_total=sol.stats.tasks_processed,
                        tasks_completed=sol.stats.regions_created,
                        aborted_duplicate=sol.stats.aborted_duplicate,
                        midpoint_repairs=sol.stats.midpoint_repairs,
                    )
                )
    return records


def summarize(records: Sequence[BenchRecord]) -> list[dict]:
    """Mean/stddev per (instance, scheduler, threads) plus speedup vs 1 thread."""
    groups: dict = {}
    for rec in records:
        groups.setdefault((rec.instance, rec.scheduler, rec.threads), []).append(rec)
    base_mean: dict = {}
    for (instance, scheduler, threads), recs in groups.items():
        if threads == 1:
            base_mean[(instance, scheduler)] = statistics.fmean(
                r.seconds for r in recs
            )
    rows = []
    for (instance, scheduler, threads), recs in sorted(groups.items()):
        times = [r.seconds for r in recs]
        mean = statistics.fmean(times)
        std = statistics.stdev(times) if len(times) > 1 else 0.0
        base = base_mean.get((instance, scheduler))
        speedup = (base / mean) if base and mean > 0 else float("nan")
        if threads == 1:
            speedup = 1.0
        rows.append(
            {
                "instance": instance,
                "scheduler": scheduler,
                "threads": threads,
                "reps": len(recs),
                "mean_seconds": mean,
                "std_seconds": std,
                "speedup": speedup,
                "regions": recs[0].regions,
            }
        )
    return rows


def write_records_csv(records: Sequence[BenchRecord], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RECORD_FIELDS)
        for rec in records:
            writer.writerow(rec.row())


def write_summary_csv(rows: Sequence[dict], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def render_figures(rows: Sequence[dict], out_dir: Path) -> list[Path]:
    """Time and speedup curves per instance, one PNG each, next to the CSVs."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    instances = sorted({row["instance"] for row in rows})
    written = []
    for instance in instances:
        fig, (ax_time, ax_speed) = plt.subplots(1, 2, figsize=(9, 3.6))
        for scheduler in sorted({r["scheduler"] for r in rows}):
            series = [
                r
                for r in rows
                if r["instance"] == instance and r["scheduler"] == scheduler
            ]
            series.sort(key=lambda r: r["threads"])
            if not series:
                continue
            threads = [r["threads"] for r in series]
            ax_time.errorbar(
                threads,
                [r["mean_seconds"] for r in series],
                yerr=[r["std_seconds"] for r in series],
                marker="o",
                capsize=3,
                label=scheduler,
            )
            ax_speed.plot(
                threads,
                [r["speedup"] for r in series],
                marker="o",
                label=scheduler,
            )
        max_threads = max(r["threads"] for r in rows)
        ax_speed.plot(
            [1, max_threads], [1, max_threads], linestyle=":", color="gray",
            label="ideal",
        )
        ax_time.set_xlabel("threads")
        ax_time.set_ylabel("seconds")
        ax_time.set_title(f"{instance}: time")
        ax_time.legend()
        ax_speed.set_xlabel("threads")
        ax_speed.set_ylabel("speedup")
        ax_speed.set_title(f"{instance}: speedup")
        ax_speed.legend()
        fig.tight_layout()
        path = out_dir / f"bench_{instance}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
