"""Multi-column joins: forward column selection with weight interpolation.

Columns are added one at a time, reminiscent of forward feature selection.
Each candidate column is tried at a grid of interpolation weights against
the weights inherited from previous rounds; every trial invokes the
single-column search on the weighted sum of per-column distances.  A column
is committed only when the best trial strictly improves estimated recall.

Within one configuration the same join function applies to every selected
column; per-column heterogeneous functions are excluded for tractability.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .blocking import build_index
from .distances import distance_matrix, evaluate
from .functions import (
    FunctionSpaceOptions,
    JoinFunction,
    JoinResult,
    Solution,
    enumerate_function_space,
)
from .negative_rules import NegativeRule, learn_rules, pair_blocked, preprocess_for_rules
from .solver import (
    BlockedPairs,
    SolveResult,
    flatten_index,
    needed_idf_indexes,
    solve_from_distances,
)
from .tables import DataError, Table
from .text import IdfIndex


def interpolate(
    w: Sequence[float], j: int, alpha: float
) -> tuple[float, ...]:
    """Pull the weight vector toward column j: (1-alpha) * w + alpha * e_j.

    From the all-zero starting vector the first selection jumps straight to
    e_j, so the vector always sums to 1 once any column is selected.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if all(x == 0.0 for x in w):
        return tuple(1.0 if i == j else 0.0 for i in range(len(w)))
    return tuple(
        (1.0 - alpha) * x + (alpha if i == j else 0.0) for i, x in enumerate(w)
    )


def combined_distance(
    functions: Sequence[JoinFunction],
    weights: Sequence[float],
    l_values: Sequence[str],
    r_values: Sequence[str],
    idfs: Sequence[IdfIndex | None] | None = None,
) -> float:
    """Weighted sum of per-column distances; stays in [0, 1] because the
    weights sum to 1 and each column distance is in [0, 1]."""
    if not len(functions) == len(weights) == len(l_values) == len(r_values):
        raise ValueError("functions, weights, and value vectors must align")
    idfs = idfs or [None] * len(functions)
    return sum(
        w * evaluate(f, lv, rv, idf)
        for f, w, lv, rv, idf in zip(functions, weights, l_values, r_values, idfs)
    )


@dataclass
class MultiSolveResult:
    solution: Solution
    result: JoinResult
    selected_columns: tuple[str, ...]
    weights: tuple[float, ...]  # aligned with selected_columns
    tp: float
    fp: float
    estimated_precision: float
    estimated_recall: float
    invocations: int
    history: list[dict] = field(default_factory=list)
    trials: list[dict] = field(default_factory=list)  # every grid evaluation
    rules_by_column: dict[str, set[NegativeRule]] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    pair_counts: dict[str, int] = field(default_factory=dict)


def shared_columns(L: Table, R: Table, columns: Sequence[str] | None) -> list[str]:
    if columns is not None:
        missing = [c for c in columns if c not in L.columns or c not in R.columns]
        if missing:
            raise DataError(
                f"columns {missing} not present in both tables; "
                f"left has {list(L.columns)}, right has {list(R.columns)}"
            )
        return list(columns)
    shared = [c for c in L.columns if c in R.columns]
    if not shared:
        raise DataError(
            f"no shared column names; left has {list(L.columns)}, "
            f"right has {list(R.columns)}"
        )
    return shared


class _ColumnSetCache:
    """Blocked pairs, per-column distances, and negative rules for one set
    of active columns; rebuilt only when the active set changes."""

    def __init__(
        self,
        L: Table,
        R: Table,
        cols: list[str],
        functions: list[JoinFunction],
        beta: float,
        threads: int,
        use_negative_rules: bool,
    ):
        self.L, self.R = L, R
        self.cols = cols
        self.functions = functions
        self.beta = beta
        self.threads = threads
        self.use_negative_rules = use_negative_rules
        self.idf_by_column = {
            c: needed_idf_indexes(
                functions, L.column_values(c) + R.column_values(c)
            )
            for c in cols
        }
        self.rule_values_left = {
            c: [preprocess_for_rules(v) for v in L.column_values(c)] for c in cols
        }
        self.rule_values_right = {
            c: [preprocess_for_rules(v) for v in R.column_values(c)] for c in cols
        }
        self._cache: dict[frozenset, tuple] = {}

    def get(self, active: tuple[str, ...]):
        """(pairs, per-column d_lr, per-column d_ll, rules per column)."""
        key = frozenset(active)
        if key in self._cache:
            return self._cache[key]
        block_cols = [c for c in self.cols if c in key]
        idx = build_index(
            self.L, self.R,
            block_cols if len(block_cols) > 1 else block_cols[0],
            self.beta,
        )
        pairs = flatten_index(idx)

        rules: dict[str, set[NegativeRule]] = {}
        if self.use_negative_rules:
            for c in block_cols:
                lv = self.rule_values_left[c]
                rules[c] = learn_rules(
                    (lv[a], lv[b]) for a, b in zip(pairs.ll_a, pairs.ll_b)
                )
            if any(rules.values()) and len(pairs.lr_right) > 0:
                keep = np.ones(len(pairs.lr_right), dtype=bool)
                for c in block_cols:
                    lv = self.rule_values_left[c]
                    rv = self.rule_values_right[c]
                    keep &= np.array(
                        [
                            not pair_blocked(lv[l], rv[r], rules[c])
                            for r, l in zip(pairs.lr_right, pairs.lr_left)
                        ]
                    )
                pairs = BlockedPairs(
                    pairs.left_ids,
                    pairs.right_ids,
                    pairs.lr_right[keep],
                    pairs.lr_left[keep],
                    pairs.ll_a,
                    pairs.ll_b,
                )

        d_lr: dict[str, np.ndarray] = {}
        d_ll: dict[str, np.ndarray] = {}
        for c in block_cols:
            lvals = self.L.column_values(c)
            rvals = self.R.column_values(c)
            lr_vals = [
                (lvals[l], rvals[r]) for r, l in zip(pairs.lr_right, pairs.lr_left)
            ]
            ll_vals = [(lvals[a], lvals[b]) for a, b in zip(pairs.ll_a, pairs.ll_b)]
            d_lr[c] = distance_matrix(
                self.functions, lr_vals, self.idf_by_column[c], self.threads
            )
            d_ll[c] = distance_matrix(
                self.functions, ll_vals, self.idf_by_column[c], self.threads
            )
        self._cache[key] = (pairs, d_lr, d_ll, rules)
        return self._cache[key]


def solve_multi(
    L: Table,
    R: Table,
    tau: float = 0.9,
    g: int = 10,
    seed: int = 0,
    columns: Sequence[str] | None = None,
    space_options: FunctionSpaceOptions | None = None,
    functions: Sequence[JoinFunction] | None = None,
    s: int = 50,
    beta: float = 1.0,
    threads: int = 1,
    use_negative_rules: bool = True,
) -> MultiSolveResult:
    """Forward column selection over shared columns (matched by name)."""
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"precision target must be in (0, 1], got {tau}")
    if g < 2:
        raise ValueError(f"weight step count must be >= 2, got {g}")
    cols = shared_columns(L, R, columns)
    fns = list(functions) if functions is not None else enumerate_function_space(space_options)
    m = len(cols)
    cache = _ColumnSetCache(L, R, cols, fns, beta, threads, use_negative_rules)
    alphas = [i / g for i in range(1, g)]

    t_start = time.perf_counter()
    invocations = 0
    evaluated: dict[tuple[float, ...], SolveResult] = {}

    def project(w: tuple[float, ...]) -> tuple[float, ...]:
        active = [x for x in w if x > 0.0]
        return tuple(active) if active else (1.0,)

    def empty_inner(active: tuple[str, ...], weights: tuple[float, ...]) -> SolveResult:
        return SolveResult(
            solution=Solution((), weights, active),
            result=JoinResult({}),
            tp=0.0,
            fp=0.0,
            estimated_precision=1.0,
            estimated_recall=0.0,
            space=None,
            warnings=["no candidate pairs survived blocking and negative rules"],
        )

    def run_inner(w: tuple[float, ...]) -> SolveResult:
        nonlocal invocations
        if w in evaluated:
            return evaluated[w]
        invocations += 1
        active = tuple(c for c, x in zip(cols, w) if x > 0.0)
        pairs, d_lr_cols, d_ll_cols, _ = cache.get(active)
        if len(pairs.lr_right) == 0:
            res = empty_inner(active, project(w))
        else:
            d_lr = sum(w[cols.index(c)] * d_lr_cols[c] for c in active)
            d_ll = sum(w[cols.index(c)] * d_ll_cols[c] for c in active)
            res = solve_from_distances(
                fns, pairs, d_lr, d_ll, tau, s,
                np.random.default_rng(seed), project(w), active,
            )
        evaluated[w] = res
        return res

    w = tuple(0.0 for _ in cols)
    remaining = list(range(m))
    selection_order: list[int] = []
    current: SolveResult | None = None
    best: SolveResult | None = None
    best_w = w
    best_col: int | None = None
    history: list[dict] = []
    trials: list[dict] = []
    iteration = 0

    while remaining:
        iteration += 1
        for j in remaining:
            if all(x == 0.0 for x in w):
                trial_ws = [interpolate(w, j, alphas[0])]
            else:
                trial_ws = [interpolate(w, j, a) for a in alphas]
            for w_trial in trial_ws:
                res = run_inner(w_trial)
                trials.append(
                    {
                        "iteration": iteration,
                        "column": cols[j],
                        "weights": w_trial,
                        "estimated_recall": res.estimated_recall,
                    }
                )
                if best is None or res.estimated_recall > best.estimated_recall:
                    best, best_w, best_col = res, w_trial, j
        current_recall = current.estimated_recall if current else 0.0
        if best is not None and best.estimated_recall > current_recall:
            current, w = best, best_w
            remaining.remove(best_col)
            selection_order.append(best_col)
            history.append(
                {
                    "column": cols[best_col],
                    "weights": dict(zip(cols, w)),
                    "estimated_recall": current.estimated_recall,
                    "estimated_precision": current.estimated_precision,
                }
            )
        else:
            break

    if current is None or not selection_order:
        current = empty_inner((cols[0],), (1.0,))
        current.warnings.append("no column produced any join")
        selected: tuple[str, ...] = (cols[0],)
        weights: tuple[float, ...] = (1.0,)
    else:
        # report in selection order, the inherited weights attached
        selected = tuple(cols[j] for j in selection_order)
        weights = tuple(w[j] for j in selection_order)
    active_rules = {}
    cached = cache._cache.get(frozenset(selected))
    if cached is not None:
        active_rules = cached[3]
    return MultiSolveResult(
        solution=Solution(current.solution.configs, weights, selected),
        result=current.result,
        selected_columns=selected,
        weights=weights,
        tp=current.tp,
        fp=current.fp,
        estimated_precision=current.estimated_precision,
        estimated_recall=current.estimated_recall,
        invocations=invocations,
        history=history,
        trials=trials,
        rules_by_column=active_rules,
        warnings=list(current.warnings),
        timings={"total": time.perf_counter() - t_start, **current.timings},
        pair_counts=current.pair_counts,
    )
