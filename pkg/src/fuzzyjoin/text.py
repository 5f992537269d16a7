"""String preprocessing, tokenization, and token weighting.

These are the P, T, and W axes of a join function.  All operations are pure
and an IdfIndex is read-only after construction, so everything here is safe
to share across workers.
"""

from __future__ import annotations

import math
import sys
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, TYPE_CHECKING

from .stem import stem

if TYPE_CHECKING:
    from .tables import Table

_punct_table: dict[int, None] | None = None


def _punctuation_table() -> dict[int, None]:
    # Deletion table for every code point in a Unicode punctuation
    # category (P*).  The full sweep costs a few hundred ms, so it is
    # built once on first use rather than at import.
    global _punct_table
    if _punct_table is None:
        _punct_table = {
            cp: None
            for cp in range(sys.maxunicode + 1)
            if unicodedata.category(chr(cp)).startswith("P")
        }
    return _punct_table


@lru_cache(maxsize=65536)
def _preprocess_cached(s: str, option: str) -> str:
    out = s.lower()
    if "RP" in option.split("+"):
        out = out.translate(_punctuation_table())
    if "S" in option.split("+"):
        out = " ".join(stem(w) for w in out.split())
    return out


def apply_preprocess(s: str, option: str) -> str:
    """Apply a preprocessing option: L (lowercase), optional RP (strip all
    Unicode punctuation), optional S (stem each whitespace word).

    Steps compose in the order L, then RP, then S.
    """
    if option not in ("L", "L+S", "L+RP", "L+S+RP"):
        raise ValueError(f"unknown preprocess option {option!r}")
    return _preprocess_cached(s, option)


@dataclass(frozen=True)
class TokenBag:
    """A multiset of tokens with an optional cached total weight."""

    tokens: Counter
    weight_sum: Optional[float] = field(default=None, compare=False)

    def __len__(self) -> int:
        return sum(self.tokens.values())

    def is_empty(self) -> bool:
        return not self.tokens


def tokenize(s: str, scheme: str) -> TokenBag:
    """Tokenize a preprocessed string.

    SP splits on whitespace runs; 3G emits all character trigrams after
    collapsing whitespace runs to single spaces (a collapsed string shorter
    than 3 yields itself as a single token).  The empty string yields an
    empty bag under both schemes.
    """
    if scheme == "SP":
        return TokenBag(Counter(s.split()))
    if scheme == "3G":
        collapsed = " ".join(s.split())
        if not collapsed:
            return TokenBag(Counter())
        if len(collapsed) < 3:
            return TokenBag(Counter([collapsed]))
        return TokenBag(
            Counter(collapsed[i : i + 3] for i in range(len(collapsed) - 2))
        )
    raise ValueError(f"unknown tokenizer {scheme!r}")


@dataclass(frozen=True)
class IdfIndex:
    """Document frequencies over a record corpus.

    ``doc_freq[t]`` is the number of records (rows, over both input tables)
    containing token t at least once; ``corpus_size`` is the total row
    count.  Unseen tokens are smoothed to document frequency 1.
    """

    doc_freq: dict[str, int]
    corpus_size: int

    def weight(self, token: str) -> float:
        df = self.doc_freq.get(token, 1)
        return math.log(self.corpus_size / df)


def build_idf_from_values(
    values: Iterable[str], preprocess: str, tokenizer: str
) -> IdfIndex:
    """IDF statistics from raw cell values, one document per value."""
    doc_freq: Counter = Counter()
    n = 0
    for v in values:
        n += 1
        bag = tokenize(apply_preprocess(v, preprocess), tokenizer)
        doc_freq.update(bag.tokens.keys())
    return IdfIndex(dict(doc_freq), n)


def build_idf(
    left: "Table",
    right: "Table",
    column: str,
    preprocess: str = "L",
    tokenizer: str = "3G",
) -> IdfIndex:
    """IDF statistics over the concatenation of both tables' rows for one column."""
    values = left.column_values(column) + right.column_values(column)
    return build_idf_from_values(values, preprocess, tokenizer)


def token_weight(token: str, scheme: str, idf: IdfIndex | None = None) -> float:
    """Weight of one token: EW gives 1.0, IDFW gives log(N / doc_freq)."""
    if scheme == "EW":
        return 1.0
    if scheme == "IDFW":
        if idf is None:
            raise ValueError("IDFW weighting requires a built IdfIndex")
        return idf.weight(token)
    raise ValueError(f"unknown weight scheme {scheme!r}")


def bag_weight(bag: TokenBag, scheme: str, idf: IdfIndex | None = None) -> float:
    """Total multiset weight of a bag under a weighting scheme."""
    if scheme == "EW":
        return float(len(bag))
    return sum(
        mult * token_weight(t, scheme, idf) for t, mult in bag.tokens.items()
    )
