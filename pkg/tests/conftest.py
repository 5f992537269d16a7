"""Shared helpers: CSV writers and random greedy-search instances."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np
import pytest

from fuzzyjoin import Table


def write_table_csv(table: Table, path: Path, id_column: str = "id") -> Path:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([id_column] + list(table.columns))
        for rec in table.records:
            writer.writerow([rec.id] + list(rec.values))
    return path


def write_gt_csv(matches: dict[str, str], path: Path) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["right_id", "left_id"])
        for rid in sorted(matches):
            writer.writerow([rid, matches[rid]])
    return path


@pytest.fixture
def table_csv_writer(tmp_path):
    def _write(table: Table, name: str) -> Path:
        return write_table_csv(table, tmp_path / name)

    return _write


def make_random_instance(
    rng: np.random.Generator,
    n_cfg: int | None = None,
    n_right: int | None = None,
    n_left: int = 8,
    dyadic: bool = False,
):
    """Random per-configuration assignment arrays mimicking the solver's
    precomputed tables: sparse assignments, precisions of the form 1/k.

    With ``dyadic`` the precisions are restricted to powers of two so that
    every sum is exact in both float32 and float64 and reference
    computations agree bitwise with the vectorized engine.
    """
    n_cfg = n_cfg or int(rng.integers(4, 65))
    n_right = n_right or int(rng.integers(4, 51))
    density = rng.uniform(0.1, 0.7)
    assigned = rng.random((n_cfg, n_right)) < density
    left = np.where(
        assigned, rng.integers(0, n_left, size=(n_cfg, n_right)), -1
    ).astype(np.int32)
    if dyadic:
        k = 2 ** rng.integers(0, 4, size=(n_cfg, n_right))
    else:
        k = rng.integers(1, 7, size=(n_cfg, n_right))
    prec = np.where(assigned, 1.0 / k, 0.0).astype(np.float32)
    return left, prec


def oracle_union(rows: list[tuple[np.ndarray, np.ndarray]], n_right: int):
    """Reference union semantics, computed naively from an ordered config
    list: per right, the strictly more confident assignment wins and the
    earlier configuration keeps ties."""
    best_prec = [0.0] * n_right
    best_left = [-1] * n_right
    for left_row, prec_row in rows:
        for r in range(n_right):
            if left_row[r] != -1 and float(prec_row[r]) > best_prec[r]:
                best_prec[r] = float(prec_row[r])
                best_left[r] = int(left_row[r])
    tp = sum(best_prec)
    n_assigned = sum(1 for l in best_left if l != -1)
    fp = max(n_assigned - tp, 0.0)
    return tp, fp, best_left, best_prec


def oracle_profit(tp: float, fp: float) -> float:
    if fp > 0:
        return tp / fp
    return math.inf if tp > 0 else 0.0
