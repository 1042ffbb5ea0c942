"""Corpus runner: heuristics + CAD builds per problem, CSV/JSON reports.

Each (problem x configuration) task runs under an optional cooperative
deadline; failures are recorded per row and never abort the run.  Rows are
sorted after execution, so reports are byte-deterministic for a fixed corpus
and seed regardless of the worker count (timing columns are blanked by the
``stable`` flag).
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .cadbuild import build_cad
from .errors import CadError, ComputeTimeout, Deadline, NotWellOrientedError, ParseError
from .heuristics import (
    brown_order,
    order_by_fulldim,
    order_by_ndrr,
    order_by_sotd,
)
from .ordering import admissible_orderings
from .probjson import parse_json
from .problem import Problem
from .smtlib import parse_smtlib

__all__ = ["BenchConfig", "BenchRow", "BenchReport", "run_bench", "write_csv", "write_json",
           "load_problem_file", "HEURISTIC_NAMES"]

HEURISTIC_NAMES = ("brown", "sotd", "greedy-sotd", "ndrr", "fulldim")

CSV_COLUMNS = (
    "problem",
    "heuristic",
    "ordering",
    "designation",
    "mode",
    "cells",
    "fulldim_cells",
    "time_ms",
    "status",
)


@dataclass(frozen=True)
class BenchConfig:
    heuristics: tuple[str, ...] = HEURISTIC_NAMES
    all_orders: bool = False
    mode: str = "sign"
    build: bool = True
    timeout_ms: float | None = None
    jobs: int = 1
    seed: int | None = None
    stable: bool = False


@dataclass
class BenchRow:
    problem: str
    heuristic: str
    ordering: str
    designation: str
    mode: str
    cells: int | None
    fulldim_cells: int | None
    time_ms: float | None
    status: str

    def sort_key(self):
        return (self.problem, self.heuristic, self.ordering, self.designation, self.mode)

    def as_record(self, stable: bool) -> dict:
        return {
            "problem": self.problem,
            "heuristic": self.heuristic,
            "ordering": self.ordering,
            "designation": self.designation,
            "mode": self.mode,
            "cells": "" if self.cells is None else self.cells,
            "fulldim_cells": "" if self.fulldim_cells is None else self.fulldim_cells,
            "time_ms": "" if (stable or self.time_ms is None) else f"{self.time_ms:.1f}",
            "status": self.status,
        }


@dataclass
class BenchReport:
    config: BenchConfig
    rows: list[BenchRow] = field(default_factory=list)


def load_problem_file(path: Path) -> Problem:
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".smt2":
        return parse_smtlib(text, name=path.stem)
    return parse_json(text, name=path.stem)


def _ordering_heuristic(name: str) -> Callable:
    if name == "brown":
        return lambda polys, nv, blocks, dl: brown_order(polys, nv, blocks)
    if name == "sotd":
        return lambda polys, nv, blocks, dl: order_by_sotd(
            polys, nv, blocks, strategy="exhaustive", deadline=dl
        )
    if name == "greedy-sotd":
        return lambda polys, nv, blocks, dl: order_by_sotd(
            polys, nv, blocks, strategy="greedy", deadline=dl
        )
    if name == "ndrr":
        return lambda polys, nv, blocks, dl: order_by_ndrr(polys, nv, blocks, deadline=dl)
    if name == "fulldim":
        return lambda polys, nv, blocks, dl: order_by_fulldim(polys, nv, blocks, deadline=dl)
    raise ValueError(f"unknown heuristic {name!r}")


def _run_task(problem: Problem, heuristic: str, config: BenchConfig) -> BenchRow:
    deadline = Deadline.after_ms(config.timeout_ms) if config.timeout_ms else None
    start = time.monotonic()
    ordering_label = "-"
    designation = "-"
    try:
        polys = problem.input_polys()
        if not polys:
            raise CadError("no nonconstant polynomials")
        chooser = _ordering_heuristic(heuristic)
        report = chooser(polys, problem.nvars, list(problem.blocks), deadline)
        ordering = report.chosen
        ordering_label = ordering.to_names(problem.var_names)
        cells = None
        fulldim = None
        if config.build:
            tree = build_cad(problem, ordering, mode=config.mode, deadline=deadline)
            cells = tree.cell_count
            fulldim = tree.fulldim_leaf_count()
            designation = tree.designation_label
        elapsed = (time.monotonic() - start) * 1000.0
        return BenchRow(
            problem.name, heuristic, ordering_label, designation, config.mode,
            cells, fulldim, elapsed, "ok",
        )
    except ComputeTimeout:
        return BenchRow(
            problem.name, heuristic, ordering_label, designation, config.mode,
            None, None, None, "timeout",
        )
    except NotWellOrientedError:
        return BenchRow(
            problem.name, heuristic, ordering_label, designation, config.mode,
            None, None, None, "not_well_oriented",
        )
    except Exception:
        return BenchRow(
            problem.name, heuristic, ordering_label, designation, config.mode,
            None, None, None, "error",
        )


def _run_order_task(problem: Problem, ordering, config: BenchConfig) -> BenchRow:
    deadline = Deadline.after_ms(config.timeout_ms) if config.timeout_ms else None
    start = time.monotonic()
    label = ordering.to_names(problem.var_names)
    try:
        tree = build_cad(problem, ordering, mode=config.mode, deadline=deadline)
        elapsed = (time.monotonic() - start) * 1000.0
        return BenchRow(
            problem.name, "order", label, tree.designation_label, config.mode,
            tree.cell_count, tree.fulldim_leaf_count(), elapsed, "ok",
        )
    except ComputeTimeout:
        return BenchRow(problem.name, "order", label, "-", config.mode, None, None, None, "timeout")
    except NotWellOrientedError:
        return BenchRow(
            problem.name, "order", label, "-", config.mode, None, None, None, "not_well_oriented"
        )
    except Exception:
        return BenchRow(problem.name, "order", label, "-", config.mode, None, None, None, "error")


def run_bench(corpus: Path | str, config: BenchConfig) -> BenchReport:
    """Run every requested configuration against every problem file in a directory."""
    corpus = Path(corpus)
    files = sorted(
        [p for p in corpus.iterdir() if p.suffix in (".json", ".smt2")],
        key=lambda p: p.name,
    )
    report = BenchReport(config)
    tasks: list[Callable[[], BenchRow]] = []
    for path in files:
        try:
            problem = load_problem_file(path)
        except (ParseError, OSError):
            report.rows.append(
                BenchRow(path.stem, "-", "-", "-", config.mode, None, None, None, "error")
            )
            continue
        if config.all_orders:
            try:
                orderings = admissible_orderings(problem.nvars, problem.blocks)
            except CadError:
                report.rows.append(
                    BenchRow(problem.name, "order", "-", "-", config.mode,
                             None, None, None, "error")
                )
                continue
            for ordering in orderings:
                tasks.append(
                    lambda p=problem, o=ordering: _run_order_task(p, o, config)
                )
        for heuristic in config.heuristics:
            tasks.append(lambda p=problem, h=heuristic: _run_task(p, h, config))
    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            report.rows.extend(pool.map(lambda t: t(), tasks))
    else:
        report.rows.extend(t() for t in tasks)
    report.rows.sort(key=BenchRow.sort_key)
    return report


def write_csv(report: BenchReport, out) -> None:
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in report.rows:
        writer.writerow(row.as_record(report.config.stable))


def csv_text(report: BenchReport) -> str:
    buf = io.StringIO()
    write_csv(report, buf)
    return buf.getvalue()


def write_json(report: BenchReport, out) -> None:
    doc = {
        "config": {
            "heuristics": list(report.config.heuristics),
            "all_orders": report.config.all_orders,
            "mode": report.config.mode,
            "build": report.config.build,
            "timeout_ms": report.config.timeout_ms,
            "jobs": report.config.jobs,
            "seed": report.config.seed,
            "stable": report.config.stable,
        },
        "rows": [row.as_record(report.config.stable) for row in report.rows],
    }
    json.dump(doc, out, indent=2)
    out.write("\n")
