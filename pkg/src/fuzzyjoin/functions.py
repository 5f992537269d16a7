"""Join functions, configurations, and solutions.

A join function is a 4-tuple (preprocessing, tokenizer, token weights,
distance kind) that maps a pair of strings to a distance in [0, 1].  A
configuration adds a cut-off threshold; a solution is an ordered union of
configurations plus a column-weight vector (a single 1.0 in single-column
mode).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional

PREPROCESS_OPTIONS = ("L", "L+S", "L+RP", "L+S+RP")
TOKENIZERS = ("3G", "SP")
CHAR_DISTANCES = ("ED", "JW")
SET_DISTANCES = ("JD", "CD", "DD", "ID", "MD", "CJD", "CCD", "CDD")
WEIGHT_SCHEMES = ("EW", "IDFW")

NONE = "NONE"
PLUGIN = "PLUGIN"


@dataclass(frozen=True)
class JoinFunction:
    """One point in the (P, T, W, D) space of distance functions.

    Character-based kinds (ED, JW) operate on the preprocessed strings and
    carry no tokenizer or weight scheme; set-based kinds operate on weighted
    token multisets.  PLUGIN defers to a caller-registered distance on the
    raw strings.
    """

    preprocess: str
    tokenizer: str
    weights: str
    distance: str
    plugin: Optional[str] = None

    def __post_init__(self):
        if self.preprocess not in PREPROCESS_OPTIONS:
            raise ValueError(f"unknown preprocess option {self.preprocess!r}")
        if self.distance in CHAR_DISTANCES or self.distance == PLUGIN:
            if self.tokenizer != NONE or self.weights != NONE:
                raise ValueError(
                    f"{self.distance} requires tokenizer=NONE and weights=NONE"
                )
        elif self.distance in SET_DISTANCES:
            if self.tokenizer not in TOKENIZERS:
                raise ValueError(
                    f"set-based {self.distance} requires tokenizer in {TOKENIZERS}"
                )
            if self.weights not in WEIGHT_SCHEMES:
                raise ValueError(
                    f"set-based {self.distance} requires weights in {WEIGHT_SCHEMES}"
                )
        else:
            raise ValueError(f"unknown distance kind {self.distance!r}")
        if self.distance == PLUGIN and not self.plugin:
            raise ValueError("PLUGIN distance needs a registered plugin name")
        if self.distance != PLUGIN and self.plugin is not None:
            raise ValueError("plugin name only valid with distance=PLUGIN")

    @property
    def is_set_based(self) -> bool:
        return self.distance in SET_DISTANCES

    def label(self) -> str:
        parts = [
            f"preprocess={self.preprocess}",
            f"tokenizer={self.tokenizer}",
            f"weights={self.weights}",
            f"distance={self.distance}",
        ]
        if self.plugin:
            parts.append(f"plugin={self.plugin}")
        return " ".join(parts)


@dataclass(frozen=True)
class FunctionSpaceOptions:
    """Which axis values to enumerate.  Defaults give the full 136-function space."""

    preprocess: tuple[str, ...] = PREPROCESS_OPTIONS
    tokenizers: tuple[str, ...] = TOKENIZERS
    weights: tuple[str, ...] = WEIGHT_SCHEMES
    char_distances: tuple[str, ...] = CHAR_DISTANCES
    set_distances: tuple[str, ...] = SET_DISTANCES

    @classmethod
    def reduced24(cls) -> "FunctionSpaceOptions":
        """Small 24-function space: full P/T/W axes, distances {ED, JW, JD}."""
        return cls(set_distances=("JD",))


SPACE_PRESETS = {
    "full": FunctionSpaceOptions(),
    "reduced24": FunctionSpaceOptions.reduced24(),
}


def enumerate_function_space(
    options: FunctionSpaceOptions | None = None,
) -> list[JoinFunction]:
    """Enumerate the join-function space, deterministically and duplicate-free.

    Character-based functions come first (preprocess x char kind), then the
    set-based block (preprocess x tokenizer x weights x set kind).
    """
    opts = options or FunctionSpaceOptions()

    def gen() -> Iterator[JoinFunction]:
        for p in opts.preprocess:
            for d in opts.char_distances:
                yield JoinFunction(p, NONE, NONE, d)
        for p in opts.preprocess:
            for t in opts.tokenizers:
                for w in opts.weights:
                    for d in opts.set_distances:
                        yield JoinFunction(p, t, w, d)

    return list(gen())


@dataclass(frozen=True)
class Configuration:
    """A join function plus a distance cut-off threshold."""

    function: JoinFunction
    threshold: float

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold {self.threshold} outside [0, 1]")


@dataclass(frozen=True)
class Solution:
    """An ordered union of configurations (order = greedy insertion order).

    ``column_weights`` always sums to 1; single-column solutions carry the
    one-element vector (1.0,).  ``columns`` names the joined column pairs so
    a serialized solution can be re-applied.
    """

    configs: tuple[Configuration, ...]
    column_weights: tuple[float, ...] = (1.0,)
    columns: tuple[str, ...] = ()

    def __post_init__(self):
        if any(w < 0 for w in self.column_weights):
            raise ValueError("column weights must be nonnegative")
        if abs(sum(self.column_weights) - 1.0) > 1e-9:
            raise ValueError(
                f"column weights sum to {sum(self.column_weights)}, expected 1"
            )

    def __len__(self) -> int:
        return len(self.configs)


@dataclass(frozen=True)
class Assignment:
    """One joined right record: its left match, estimated precision, and
    the index (into Solution.configs) of the configuration responsible."""

    left_id: str
    precision: float
    config_index: int


@dataclass(frozen=True)
class JoinResult:
    """Many-to-one join output: right id -> Assignment.

    Right records with no join are simply absent from ``assignments``.
    """

    assignments: dict[str, Assignment]

    def __len__(self) -> int:
        return len(self.assignments)


# --- solution (de)serialization -------------------------------------------
#
# Human-readable line format, one configuration per line; floats written
# with repr() so the round trip is exact.

def dump_solution(solution: Solution) -> str:
    lines = ["# fuzzyjoin solution v1"]
    lines.append("columns: " + ",".join(solution.columns))
    lines.append(
        "column_weights: " + ",".join(repr(w) for w in solution.column_weights)
    )
    for cfg in solution.configs:
        lines.append(f"config: {cfg.function.label()} threshold={cfg.threshold!r}")
    return "\n".join(lines) + "\n"


def save_solution(solution: Solution, path: str | Path) -> None:
    Path(path).write_text(dump_solution(solution), encoding="utf-8")


def parse_solution(text: str) -> Solution:
    columns: tuple[str, ...] = ()
    weights: tuple[float, ...] = (1.0,)
    configs: list[Configuration] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("columns:"):
            body = line[len("columns:"):].strip()
            columns = tuple(c for c in body.split(",") if c) if body else ()
        elif line.startswith("column_weights:"):
            body = line[len("column_weights:"):].strip()
            weights = tuple(float(w) for w in body.split(","))
        elif line.startswith("config:"):
            fields = dict(
                kv.split("=", 1) for kv in line[len("config:"):].strip().split()
            )
            fn = JoinFunction(
                preprocess=fields["preprocess"],
                tokenizer=fields["tokenizer"],
                weights=fields["weights"],
                distance=fields["distance"],
                plugin=fields.get("plugin"),
            )
            configs.append(Configuration(fn, float(fields["threshold"])))
        else:
            raise ValueError(f"solution line {line_no}: cannot parse {raw!r}")
    return Solution(tuple(configs), weights, columns)


def load_solution(path: str | Path) -> Solution:
    return parse_solution(Path(path).read_text(encoding="utf-8"))
