"""Greedy search over join configurations.

The search space is the cross product of join functions with a per-function
grid of thresholds spanning the observed blocked cross-table distances.
Starting from an empty union, the configuration whose addition yields the
highest true-positive/false-positive ratio is added, until the estimated
precision of the union would fall to the target or no candidate adds any
true-positive mass.

All pair distances and per-configuration assignments are precomputed into
dense arrays; each greedy iteration is pure array arithmetic and touches no
string data.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .blocking import CandidateIndex, build_index
from .distances import distance_matrix
from .functions import (
    Assignment,
    Configuration,
    FunctionSpaceOptions,
    JoinFunction,
    JoinResult,
    Solution,
    enumerate_function_space,
)
from .negative_rules import (
    NegativeRule,
    learn_rules,
    pair_blocked,
    preprocess_for_rules,
)
from .tables import Table
from .text import IdfIndex, build_idf_from_values


def discretize_thresholds(distances: Sequence[float] | np.ndarray, s: int) -> np.ndarray:
    """s ascending thresholds dividing [min, max] of the observed distances
    into equal steps; a degenerate range yields the single maximum value."""
    if s < 1:
        raise ValueError(f"step count must be >= 1, got {s}")
    arr = np.asarray(distances, dtype=float)
    if arr.size == 0:
        raise ValueError("no observed distances to discretize")
    dmin = float(arr.min())
    dmax = float(arr.max())
    if dmin == dmax:
        return np.array([dmax])
    grid = dmin + np.arange(1, s + 1) * ((dmax - dmin) / s)
    # rounding may overshoot dmax (and 1.0) by a few ulp mid-grid
    np.clip(grid, dmin, dmax, out=grid)
    grid[-1] = dmax
    return grid


def profit(tp: float, fp: float) -> float:
    """True-positive mass per unit of false-positive mass; +inf when free
    of false positives, 0 for the empty solution."""
    if tp < 0 or fp < 0:
        raise ValueError("tp and fp must be nonnegative")
    if fp > 0:
        return tp / fp
    return math.inf if tp > 0 else 0.0


@dataclass
class SearchSpace:
    """Join functions plus their discretized threshold grids."""

    functions: list[JoinFunction]
    thresholds: list[np.ndarray]
    s: int

    def size(self) -> int:
        return sum(len(t) for t in self.thresholds)


def build_search_space(
    functions: Sequence[JoinFunction], d_lr: np.ndarray, s: int
) -> SearchSpace:
    grids = [discretize_thresholds(d_lr[fi], s) for fi in range(len(functions))]
    return SearchSpace(list(functions), grids, s)


# --- dense precomputation ---------------------------------------------------


@dataclass
class ConfigTable:
    """Per-configuration assignment arrays over all right records.

    Row c holds configuration c's join: ``left[c, r]`` is the left-record
    position joined to right r (-1 for none) and ``prec[c, r]`` its
    estimated precision under the ball of radius twice the threshold.
    """

    functions: list[JoinFunction]
    cfg_function: np.ndarray  # (n_cfg,) index into functions
    cfg_threshold: np.ndarray  # (n_cfg,)
    left: np.ndarray  # (n_cfg, n_right) int32
    prec: np.ndarray  # (n_cfg, n_right) float32

    @property
    def n_configs(self) -> int:
        return len(self.cfg_function)

    def configuration(self, c: int) -> Configuration:
        return Configuration(
            self.functions[self.cfg_function[c]], float(self.cfg_threshold[c])
        )


def _per_right_minima(
    lr_right: np.ndarray, d_row: np.ndarray, n_right: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per right record: minimum candidate distance, position of the left
    record achieving it (first on ties), and an exact-tie flag.

    ``lr_right`` must be sorted ascending.
    """
    dmin = np.full(n_right, np.inf)
    argmin_pair = np.full(n_right, -1, dtype=np.int64)
    tie = np.zeros(n_right, dtype=bool)
    if len(lr_right) == 0:
        return dmin, argmin_pair, tie
    uniq, starts, counts = np.unique(lr_right, return_index=True, return_counts=True)
    seg_min = np.minimum.reduceat(d_row, starts)
    expanded = np.repeat(seg_min, counts)
    is_min = d_row == expanded
    n_min = np.add.reduceat(is_min.astype(np.int64), starts)
    first = np.minimum.reduceat(
        np.where(is_min, np.arange(len(d_row)), len(d_row)), starts
    )
    dmin[uniq] = seg_min
    argmin_pair[uniq] = first
    tie[uniq] = n_min > 1
    return dmin, argmin_pair, tie


def _ll_padding(ll_a: np.ndarray, n_left: int):
    """Segment layout of the (sorted-by-a) self-join pair list."""
    if len(ll_a) == 0:
        return np.array([], dtype=np.int64), np.array([], dtype=np.int64), 0
    uniq, starts, counts = np.unique(ll_a, return_index=True, return_counts=True)
    return starts, counts, int(counts.max())


def _ll_sorted_matrix(
    ll_a: np.ndarray, d_row: np.ndarray, n_left: int, kmax: int
) -> np.ndarray:
    """(n_left, kmax) ascending neighbor distances per left record, padded
    with +inf."""
    pad = np.full((n_left, kmax), np.inf)
    if len(ll_a) == 0 or kmax == 0:
        return pad
    order = np.lexsort((d_row, ll_a))
    a_sorted = ll_a[order]
    d_sorted = d_row[order]
    _, starts, counts = np.unique(a_sorted, return_index=True, return_counts=True)
    ranks = np.arange(len(a_sorted)) - np.repeat(starts, counts)
    pad[a_sorted, ranks] = d_sorted
    return pad


def precompute_config_table(
    functions: Sequence[JoinFunction],
    space: SearchSpace,
    n_right: int,
    n_left: int,
    lr_right: np.ndarray,
    lr_left: np.ndarray,
    d_lr: np.ndarray,
    ll_a: np.ndarray,
    d_ll: np.ndarray,
) -> ConfigTable:
    """Expand every (function, threshold) pair into dense per-right
    assignment and precision rows."""
    _, _, kmax = _ll_padding(ll_a, n_left)
    cfg_function: list[np.ndarray] = []
    cfg_threshold: list[np.ndarray] = []
    left_blocks: list[np.ndarray] = []
    prec_blocks: list[np.ndarray] = []
    for fi in range(len(functions)):
        thetas = space.thresholds[fi]
        s_f = len(thetas)
        dmin, argmin_pair, tie = _per_right_minima(lr_right, d_lr[fi], n_right)
        has = argmin_pair >= 0
        argmin_left = np.where(has, lr_left[np.where(has, argmin_pair, 0)], -1)
        assigned = (
            has[None, :] & ~tie[None, :] & (dmin[None, :] <= thetas[:, None])
        )
        nb = _ll_sorted_matrix(ll_a, d_ll[fi], n_left, kmax)
        nb_rows = nb[np.where(has, argmin_left, 0)]  # (n_right, kmax)
        counts = (nb_rows[None, :, :] <= (2.0 * thetas)[:, None, None]).sum(axis=2)
        prec = np.where(assigned, 1.0 / (1.0 + counts), 0.0).astype(np.float32)
        left = np.where(assigned, argmin_left[None, :], -1).astype(np.int32)
        cfg_function.append(np.full(s_f, fi, dtype=np.int32))
        cfg_threshold.append(np.asarray(thetas, dtype=float))
        left_blocks.append(left)
        prec_blocks.append(prec)
    return ConfigTable(
        functions=list(functions),
        cfg_function=np.concatenate(cfg_function) if cfg_function else np.array([], dtype=np.int32),
        cfg_threshold=np.concatenate(cfg_threshold) if cfg_threshold else np.array([]),
        left=np.vstack(left_blocks) if left_blocks else np.empty((0, n_right), dtype=np.int32),
        prec=np.vstack(prec_blocks) if prec_blocks else np.empty((0, n_right), dtype=np.float32),
    )


# --- greedy selection -------------------------------------------------------


@dataclass
class GreedyOutcome:
    selected: list[int]  # config row indices, in insertion order
    cur_left: np.ndarray  # (n_right,) left position or -1
    cur_prec: np.ndarray  # (n_right,) float
    cur_source: np.ndarray  # (n_right,) index into selected, or -1
    tp: float
    fp: float

    @property
    def precision(self) -> float:
        total = self.tp + self.fp
        return self.tp / total if total > 0 else 1.0


def greedy_select(
    cfg_left: np.ndarray,
    cfg_prec: np.ndarray,
    tau: float,
    rng: np.random.Generator,
) -> GreedyOutcome:
    """Iteratively add the configuration maximizing the profit of the union.

    Candidates that add no true-positive mass are never picked; the loop
    stops when none remain, when the candidate pool is exhausted, or when
    the best addition would push estimated precision down to tau.  Profit
    ties are broken by larger tp among false-positive-free candidates, then
    by seeded randomness.
    """
    n_cfg, n_right = cfg_left.shape
    available = np.ones(n_cfg, dtype=bool)
    cur_left = np.full(n_right, -1, dtype=np.int32)
    cur_prec = np.zeros(n_right, dtype=np.float32)
    cur_source = np.full(n_right, -1, dtype=np.int32)
    selected: list[int] = []
    tp_cur = 0.0

    while available.any():
        take = (cfg_left != -1) & (cfg_prec > cur_prec[None, :])
        new_prec = np.where(take, cfg_prec, cur_prec[None, :])
        tp_new = new_prec.sum(axis=1, dtype=np.float64)
        n_assigned = ((cfg_left != -1) | (cur_left != -1)[None, :]).sum(axis=1)
        fp_new = np.maximum(n_assigned - tp_new, 0.0)

        eligible = available & (tp_new > tp_cur)
        if not eligible.any():
            break
        with np.errstate(divide="ignore"):
            prof = np.where(
                fp_new > 0,
                tp_new / np.where(fp_new > 0, fp_new, 1.0),
                np.where(tp_new > 0, np.inf, 0.0),
            )
        prof = np.where(eligible, prof, -np.inf)
        best_profit = prof.max()
        ties = prof == best_profit
        if np.isinf(best_profit):
            ties &= tp_new == tp_new[ties].max()
        tie_rows = np.nonzero(ties)[0]
        pick = int(tie_rows[0]) if len(tie_rows) == 1 else int(rng.choice(tie_rows))

        total = tp_new[pick] + fp_new[pick]
        union_precision = tp_new[pick] / total if total > 0 else 1.0
        if union_precision <= tau:
            break

        slot = len(selected)
        selected.append(pick)
        available[pick] = False
        row_take = (cfg_left[pick] != -1) & (cfg_prec[pick] > cur_prec)
        cur_left = np.where(row_take, cfg_left[pick], cur_left)
        cur_prec = np.where(row_take, cfg_prec[pick], cur_prec)
        cur_source = np.where(row_take, slot, cur_source)
        tp_cur = float(cur_prec.sum(dtype=np.float64))

    n_joined = int((cur_left != -1).sum())
    fp_cur = max(n_joined - tp_cur, 0.0)
    return GreedyOutcome(selected, cur_left, cur_prec, cur_source, tp_cur, fp_cur)


# --- end-to-end single-column solve ----------------------------------------


@dataclass
class SolveResult:
    solution: Solution
    result: JoinResult
    tp: float
    fp: float
    estimated_precision: float
    estimated_recall: float
    space: SearchSpace
    rules: set[NegativeRule] = field(default_factory=set)
    warnings: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    pair_counts: dict[str, int] = field(default_factory=dict)


def _empty_result(
    space: SearchSpace,
    columns: tuple[str, ...],
    warning: str,
    rules: set[NegativeRule] | None = None,
    timings: dict[str, float] | None = None,
    pair_counts: dict[str, int] | None = None,
) -> SolveResult:
    return SolveResult(
        solution=Solution((), (1.0,), columns),
        result=JoinResult({}),
        tp=0.0,
        fp=0.0,
        estimated_precision=1.0,
        estimated_recall=0.0,
        space=space,
        rules=rules or set(),
        warnings=[warning],
        timings=timings or {},
        pair_counts=pair_counts or {},
    )


@dataclass
class BlockedPairs:
    """Flattened blocked pair lists, sorted for segment arithmetic."""

    left_ids: list[str]
    right_ids: list[str]
    lr_right: np.ndarray  # (n_lr,) right positions, ascending
    lr_left: np.ndarray  # (n_lr,) left positions
    ll_a: np.ndarray  # (n_ll,) left positions, ascending
    ll_b: np.ndarray  # (n_ll,) neighbor left positions


def flatten_index(idx: CandidateIndex) -> BlockedPairs:
    left_pos = {lid: i for i, lid in enumerate(idx.left_ids)}
    right_pos = {rid: i for i, rid in enumerate(idx.right_ids)}
    lr = sorted(
        (right_pos[rid], left_pos[lid])
        for rid, cands in idx.lr.items()
        for lid, _ in cands
    )
    ll = sorted(
        (left_pos[a], left_pos[b])
        for a, cands in idx.ll.items()
        for b, _ in cands
    )
    return BlockedPairs(
        left_ids=list(idx.left_ids),
        right_ids=list(idx.right_ids),
        lr_right=np.array([p[0] for p in lr], dtype=np.int64),
        lr_left=np.array([p[1] for p in lr], dtype=np.int64),
        ll_a=np.array([p[0] for p in ll], dtype=np.int64),
        ll_b=np.array([p[1] for p in ll], dtype=np.int64),
    )


def filter_lr_by_rules(
    pairs: BlockedPairs,
    left_rule_values: Sequence[str],
    right_rule_values: Sequence[str],
    rules: set[NegativeRule],
) -> tuple[BlockedPairs, int]:
    """Drop cross-table pairs matching a learned negative rule."""
    if not rules or len(pairs.lr_right) == 0:
        return pairs, 0
    keep = np.array(
        [
            not pair_blocked(
                left_rule_values[l], right_rule_values[r], rules
            )
            for r, l in zip(pairs.lr_right, pairs.lr_left)
        ]
    )
    dropped = int((~keep).sum())
    if dropped == 0:
        return pairs, 0
    return (
        BlockedPairs(
            pairs.left_ids,
            pairs.right_ids,
            pairs.lr_right[keep],
            pairs.lr_left[keep],
            pairs.ll_a,
            pairs.ll_b,
        ),
        dropped,
    )


def solve_from_distances(
    functions: Sequence[JoinFunction],
    pairs: BlockedPairs,
    d_lr: np.ndarray,
    d_ll: np.ndarray,
    tau: float,
    s: int,
    rng: np.random.Generator,
    column_weights: tuple[float, ...] = (1.0,),
    columns: tuple[str, ...] = (),
) -> SolveResult:
    """Threshold discretization, precomputation, and greedy selection, given
    distance matrices over the blocked pairs."""
    t0 = time.perf_counter()
    space = build_search_space(functions, d_lr, s)
    table = precompute_config_table(
        functions,
        space,
        n_right=len(pairs.right_ids),
        n_left=len(pairs.left_ids),
        lr_right=pairs.lr_right,
        lr_left=pairs.lr_left,
        d_lr=d_lr,
        ll_a=pairs.ll_a,
        d_ll=d_ll,
    )
    t1 = time.perf_counter()
    outcome = greedy_select(table.left, table.prec, tau, rng)
    t2 = time.perf_counter()

    configs = tuple(table.configuration(c) for c in outcome.selected)
    solution = Solution(configs, column_weights, columns)
    assignments: dict[str, Assignment] = {}
    for r, rid in enumerate(pairs.right_ids):
        lpos = int(outcome.cur_left[r])
        if lpos >= 0:
            assignments[rid] = Assignment(
                pairs.left_ids[lpos],
                float(outcome.cur_prec[r]),
                int(outcome.cur_source[r]),
            )
    total = outcome.tp + outcome.fp
    return SolveResult(
        solution=solution,
        result=JoinResult(assignments),
        tp=outcome.tp,
        fp=outcome.fp,
        estimated_precision=outcome.tp / total if total > 0 else 1.0,
        estimated_recall=outcome.tp,
        space=space,
        timings={"precompute": t1 - t0, "greedy": t2 - t1},
        pair_counts={
            "lr_pairs": int(len(pairs.lr_right)),
            "ll_pairs": int(len(pairs.ll_a)),
        },
    )


def needed_idf_indexes(
    functions: Sequence[JoinFunction], values: Sequence[str]
) -> dict[tuple[str, str], IdfIndex]:
    """One IdfIndex per (preprocess, tokenizer) combination used by an IDFW
    function, built over the given corpus of raw cell values."""
    combos = sorted(
        {
            (f.preprocess, f.tokenizer)
            for f in functions
            if f.is_set_based and f.weights == "IDFW"
        }
    )
    return {
        (p, t): build_idf_from_values(values, p, t) for p, t in combos
    }


def solve(
    L: Table,
    R: Table,
    column: str,
    tau: float = 0.9,
    space_options: FunctionSpaceOptions | None = None,
    functions: Sequence[JoinFunction] | None = None,
    s: int = 50,
    beta: float = 1.0,
    seed: int = 0,
    threads: int = 1,
    use_negative_rules: bool = True,
) -> SolveResult:
    """Single-column end-to-end solve: blocking, negative rules, distance
    precomputation, threshold discretization, and greedy selection."""
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"precision target must be in (0, 1], got {tau}")
    fns = list(functions) if functions is not None else enumerate_function_space(space_options)
    timings: dict[str, float] = {}
    columns = (column,)

    t0 = time.perf_counter()
    idx = build_index(L, R, column, beta)
    pairs = flatten_index(idx)
    timings["blocking"] = time.perf_counter() - t0

    left_values = L.column_values(column)
    right_values = R.column_values(column)

    t0 = time.perf_counter()
    rules: set[NegativeRule] = set()
    dropped = 0
    if use_negative_rules:
        left_rule_values = [preprocess_for_rules(v) for v in left_values]
        right_rule_values = [preprocess_for_rules(v) for v in right_values]
        rules = learn_rules(
            (left_rule_values[a], left_rule_values[b])
            for a, b in zip(pairs.ll_a, pairs.ll_b)
        )
        pairs, dropped = filter_lr_by_rules(
            pairs, left_rule_values, right_rule_values, rules
        )
    timings["negative_rules"] = time.perf_counter() - t0

    pair_counts = {
        "ll_pairs": int(len(pairs.ll_a)),
        "lr_pairs": int(len(pairs.lr_right)),
        "lr_dropped_by_rules": dropped,
    }
    if len(pairs.lr_right) == 0:
        return _empty_result(
            SearchSpace(fns, [np.array([])] * len(fns), s),
            columns,
            "no candidate pairs survived blocking and negative rules",
            rules,
            timings,
            pair_counts,
        )

    t0 = time.perf_counter()
    corpus = left_values + right_values
    idf_by_pt = needed_idf_indexes(fns, corpus)
    lr_value_pairs = [
        (left_values[l], right_values[r])
        for r, l in zip(pairs.lr_right, pairs.lr_left)
    ]
    ll_value_pairs = [
        (left_values[a], left_values[b]) for a, b in zip(pairs.ll_a, pairs.ll_b)
    ]
    d_lr = distance_matrix(fns, lr_value_pairs, idf_by_pt, threads)
    d_ll = distance_matrix(fns, ll_value_pairs, idf_by_pt, threads)
    timings["distances"] = time.perf_counter() - t0

    rng = np.random.default_rng(seed)
    out = solve_from_distances(fns, pairs, d_lr, d_ll, tau, s, rng, (1.0,), columns)
    out.rules = rules
    out.timings = {**timings, **out.timings}
    out.pair_counts = {**pair_counts, **out.pair_counts}
    if not out.solution.configs:
        out.warnings.append("no configuration met the precision target")
    return out
