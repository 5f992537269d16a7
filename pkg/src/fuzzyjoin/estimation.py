"""Label-free precision estimation from reference-table geometry.

The likelihood that a join pair (l, r) at distance d is correct is
estimated as the inverse of the number of reference records lying within
distance 2d of l: a lone record in that ball means no plausible competitor
exists, while a crowded ball means the match could easily belong to a
missing neighbor instead.  Ball counting is restricted to each record's
blocked self-join neighbors; records outside that neighborhood are assumed
outside the ball.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .distances import evaluate
from .functions import Assignment, Configuration, JoinFunction
from .text import IdfIndex


@dataclass
class BallCounter:
    """Sorted self-join neighbor distances per left record, for one join
    function.  The count for radius rho includes the record itself."""

    neighbor_dists: dict[str, np.ndarray]

    @classmethod
    def from_distances(cls, dists: Mapping[str, Iterable[float]]) -> "BallCounter":
        return cls(
            {lid: np.sort(np.asarray(list(ds), dtype=float)) for lid, ds in dists.items()}
        )

    @classmethod
    def from_pairs(
        cls,
        neighbors: Mapping[str, Sequence[str]],
        values: Mapping[str, str],
        f: JoinFunction,
        idf: IdfIndex | None = None,
    ) -> "BallCounter":
        """Evaluate f over each record's neighbor list and sort."""
        return cls.from_distances(
            {
                lid: [evaluate(f, values[lid], values[nid], idf) for nid in nids]
                for lid, nids in neighbors.items()
            }
        )

    def count(self, left_id: str, radius: float) -> int:
        dists = self.neighbor_dists.get(left_id)
        if dists is None:
            return 1
        return 1 + int(np.searchsorted(dists, radius, side="right"))


def pair_precision(balls: BallCounter, left_id: str, distance: float) -> float:
    """Estimated precision of joining r to its closest left record at the
    given distance: 1 / (reference records within twice that distance)."""
    return 1.0 / balls.count(left_id, 2.0 * distance)


@dataclass
class ConfigStats:
    """Join outcome of a single configuration over the blocked pairs.

    ``tp`` is the sum of per-right estimated precisions, ``fp`` the sum of
    their complements, so tp + fp equals the number of joined rights.
    """

    assignments: dict[str, tuple[str, float]]
    tp: float
    fp: float


def config_stats(
    config: Configuration,
    candidates: Mapping[str, Sequence[tuple[str, float]]],
    balls: BallCounter,
) -> ConfigStats:
    """Apply one configuration to precomputed candidate distances.

    ``candidates`` maps each right id to (left id, distance) pairs under
    the configuration's join function.  A right record joins the candidate
    with minimum distance at or below the threshold; an exact tie for the
    minimum joins nothing.  Per-right precision uses the ball of radius
    twice the threshold.
    """
    theta = config.threshold
    assignments: dict[str, tuple[str, float]] = {}
    tp = 0.0
    fp = 0.0
    for rid, cands in candidates.items():
        best_d = None
        best_l = None
        tied = False
        for lid, d in cands:
            if d > theta:
                continue
            if best_d is None or d < best_d:
                best_d, best_l, tied = d, lid, False
            elif d == best_d:
                tied = True
        if best_d is None or tied:
            continue
        prec = 1.0 / balls.count(best_l, 2.0 * theta)
        assignments[rid] = (best_l, prec)
        tp += prec
        fp += 1.0 - prec
    return ConfigStats(assignments, tp, max(fp, 0.0))


@dataclass
class UnionStats:
    """Reduction of per-configuration stats over an ordered union."""

    tp: float
    fp: float
    assignments: dict[str, Assignment]

    @property
    def precision(self) -> float:
        total = self.tp + self.fp
        return self.tp / total if total > 0 else 1.0

    @property
    def recall(self) -> float:
        return self.tp


def union_stats(stats: Sequence[ConfigStats]) -> UnionStats:
    """Combine configurations in order.

    A right joined by several configurations to the same left counts once,
    at the maximum pair precision; conflicting assignments keep only the
    more confident one, with ties won by the earlier configuration.
    """
    best: dict[str, Assignment] = {}
    for idx, st in enumerate(stats):
        for rid, (lid, prec) in st.assignments.items():
            cur = best.get(rid)
            if cur is None or prec > cur.precision:
                best[rid] = Assignment(lid, prec, idx)
    tp = sum(a.precision for a in best.values())
    fp = max(len(best) - tp, 0.0)
    return UnionStats(tp, fp, best)
