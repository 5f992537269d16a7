"""Batch pipeline: ingest, solve, and write artifacts.

The stages run in a fixed order (ingest, blocking, negative rules,
distances, precompute, greedy) and the outputs are deterministic for a
fixed RunConfig: identical config, seed, and thread count produce
byte-identical joins.csv and solution.txt.  The manifest carries timings
and is exempt from that guarantee.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .functions import JoinResult, SPACE_PRESETS, save_solution
from .multicolumn import MultiSolveResult, solve_multi
from .negative_rules import dump_rules
from .solver import SolveResult, solve
from .tables import DataError, load_table


class ConfigError(Exception):
    """Invalid run configuration."""


class StageError(Exception):
    """Failure inside a named pipeline stage."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class RunConfig:
    left_path: str
    right_path: str
    column: str | None = None  # single-column mode
    columns: list[str] | None = None  # multi-column mode (None = shared columns)
    multi: bool = False
    id_column: str = "id"
    delimiter: str = ","
    tau: float = 0.9
    beta: float = 1.0
    s: int = 50
    g: int = 10
    space_preset: str = "full"
    seed: int = 0
    threads: int = 1
    use_negative_rules: bool = True
    out_path: str = "joins.csv"
    solution_path: str = "solution.txt"
    manifest_path: str | None = None
    dump_rules_path: str | None = None

    def validate(self) -> None:
        if not 0.0 < self.tau <= 1.0:
            raise ConfigError(f"precision target must be in (0, 1], got {self.tau}")
        if self.beta <= 0:
            raise ConfigError(f"blocking factor must be positive, got {self.beta}")
        if self.s < 1:
            raise ConfigError(f"threshold steps must be >= 1, got {self.s}")
        if self.g < 2:
            raise ConfigError(f"weight steps must be >= 2, got {self.g}")
        if self.threads < 1:
            raise ConfigError(f"thread count must be >= 1, got {self.threads}")
        if self.space_preset not in SPACE_PRESETS:
            raise ConfigError(
                f"unknown space preset {self.space_preset!r}; "
                f"choose from {sorted(SPACE_PRESETS)}"
            )
        if not self.multi and not self.column:
            raise ConfigError("single-column mode requires --column")


def write_joins_csv(result: JoinResult, path: str | Path) -> None:
    """right_id, left_id, estimated_precision, config_index; sorted by
    right id for reproducible bytes."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["right_id", "left_id", "estimated_precision", "config_index"])
        for rid in sorted(result.assignments):
            a = result.assignments[rid]
            writer.writerow([rid, a.left_id, repr(a.precision), a.config_index])


@dataclass
class PipelineOutcome:
    solve_result: SolveResult | MultiSolveResult
    manifest: dict
    warnings: list[str] = field(default_factory=list)


def run_pipeline(cfg: RunConfig) -> PipelineOutcome:
    cfg.validate()
    t_total = time.perf_counter()
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    try:
        L = load_table(cfg.left_path, cfg.id_column, cfg.delimiter, role="reference")
        R = load_table(cfg.right_path, cfg.id_column, cfg.delimiter, role="query")
    except DataError as exc:
        raise StageError("ingest", exc) from exc
    timings["ingest"] = time.perf_counter() - t0

    options = SPACE_PRESETS[cfg.space_preset]
    try:
        if cfg.multi:
            res: SolveResult | MultiSolveResult = solve_multi(
                L,
                R,
                tau=cfg.tau,
                g=cfg.g,
                seed=cfg.seed,
                columns=cfg.columns,
                space_options=options,
                s=cfg.s,
                beta=cfg.beta,
                threads=cfg.threads,
                use_negative_rules=cfg.use_negative_rules,
            )
        else:
            L.column_index(cfg.column)
            R.column_index(cfg.column)
            res = solve(
                L,
                R,
                cfg.column,
                tau=cfg.tau,
                space_options=options,
                s=cfg.s,
                beta=cfg.beta,
                seed=cfg.seed,
                threads=cfg.threads,
                use_negative_rules=cfg.use_negative_rules,
            )
    except DataError as exc:
        raise StageError("solve", exc) from exc
    timings.update(res.timings)

    t0 = time.perf_counter()
    write_joins_csv(res.result, cfg.out_path)
    save_solution(res.solution, cfg.solution_path)
    if cfg.dump_rules_path is not None:
        if cfg.multi:
            rules = set().union(*res.rules_by_column.values()) if res.rules_by_column else set()
        else:
            rules = res.rules
        dump_rules(rules, cfg.dump_rules_path)
    timings["write"] = time.perf_counter() - t0
    timings["total"] = time.perf_counter() - t_total

    manifest = {
        "config": asdict(cfg),
        "timings": timings,
        "pair_counts": res.pair_counts,
        "n_left": len(L),
        "n_right": len(R),
        "n_configs_selected": len(res.solution.configs),
        "n_joined": len(res.result.assignments),
        "estimated_precision": res.estimated_precision,
        "estimated_recall": res.estimated_recall,
        "warnings": res.warnings,
    }
    if cfg.multi:
        manifest["selected_columns"] = list(res.selected_columns)
        manifest["column_weights"] = list(res.weights)
        manifest["inner_invocations"] = res.invocations
    if cfg.manifest_path is not None:
        Path(cfg.manifest_path).write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return PipelineOutcome(res, manifest, list(res.warnings))
