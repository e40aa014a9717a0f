"""Sentence-level BLEU for filtering AMR-to-text outputs.

Single reference, n-gram orders 1-4, brevity penalty ``exp(1 - r/h)`` for
hypotheses shorter than the reference. Strings are lowercased and split on
whitespace; token lists are used as given.
"""

from __future__ import annotations

import csv
import math
import os
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

SMOOTHING = ("add-one", "none")

Tokens = Union[str, Sequence[str]]


def tokenize(text: str) -> list[str]:
    return text.lower().split()


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def sentence_bleu(
    reference: Tokens, hypothesis: Tokens, max_n: int = 4, smoothing: str = "add-one"
) -> float:
    """BLEU of ``hypothesis`` against one ``reference``.

    ``add-one`` smoothing turns a zero match count at orders 2 and up into
    ``1 / (total + 1)``; a zero unigram match still gives 0. ``none`` returns 0
    whenever any order has no match.
    """
    if smoothing not in SMOOTHING:
        raise ValueError(f"unknown smoothing {smoothing!r}, expected one of {SMOOTHING}")
    ref = tokenize(reference) if isinstance(reference, str) else list(reference)
    hyp = tokenize(hypothesis) if isinstance(hypothesis, str) else list(hypothesis)
    if not ref:
        raise ValueError("BLEU needs a non-empty reference")
    if not hyp:
        return 0.0

    log_sum = 0.0
    for n in range(1, max_n + 1):
        hyp_counts = _ngrams(hyp, n)
        ref_counts = _ngrams(ref, n)
        total = sum(hyp_counts.values())
        matched = sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())
        if matched == 0:
            if n == 1 or smoothing == "none":
                return 0.0
            matched, total = 1, total + 1
        log_sum += math.log(matched / total)

    bp = 1.0 if len(hyp) >= len(ref) else math.exp(1 - len(ref) / len(hyp))
    return min(1.0, bp * math.exp(log_sum / max_n))


@dataclass
class GenPair:
    original_text: str
    generated_text: str
    bleu: float
    id: Optional[str] = None

    @classmethod
    def scored(cls, original: str, generated: str, id: Optional[str] = None, smoothing: str = "add-one"):
        return cls(original, generated, sentence_bleu(original, generated, smoothing=smoothing), id)


def filter_generated(pairs: Iterable[GenPair], low: float = 0.1, high: float = 0.9) -> list[GenPair]:
    """Keep pairs with ``low <= bleu <= high``: drop near-copies and unrelated text."""
    if not 0.0 <= low < high <= 1.0:
        raise ValueError(f"need 0 <= low < high <= 1, got low={low}, high={high}")
    return [p for p in pairs if low <= p.bleu <= high]


def read_pairs_tsv(path: "str | os.PathLike", smoothing: str = "add-one") -> list[GenPair]:
    """Read ``id<TAB>original<TAB>generated`` rows; a header row is not expected."""
    pairs = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE), 1):
            if not row or not "".join(row).strip():
                continue
            if len(row) < 3:
                raise ValueError(f"{path}:{lineno}: expected 3 tab-separated columns, got {len(row)}")
            pairs.append(GenPair.scored(row[1], row[2], id=row[0], smoothing=smoothing))
    return pairs


def format_pairs_tsv(pairs: Iterable[GenPair]) -> str:
    return "".join(f"{p.id}\t{p.original_text}\t{p.generated_text}\t{p.bleu:.6f}\n" for p in pairs)
