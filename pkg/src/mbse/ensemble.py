"""Consensus selection over one sentence's candidate graphs.

Three selectors pick one of the candidate parses, never a new graph:

* :func:`greedy_select` finds the best-agreeing pair of candidates and keeps
  the member that agrees more with the rest; optionally discards the
  sentence when even the best pair agrees less than ``theta``.
* :func:`average_select` keeps the candidate with the highest mean Smatch
  against the others.
* :func:`majority_select` replaces Smatch by graph identity (up to variable
  renaming) and keeps a member of the largest class.

All ties go to the earliest candidate in input order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .amr import AmrGraph, extract_triples
from .smatch import SearchConfig, exact_smatch, smatch_pair

METHODS = ("greedy", "average", "majority")
MIN_CANDIDATES = {"greedy": 3, "average": 2, "majority": 2}


class ArityError(ValueError):
    """Too few candidates for the requested selection method."""


@dataclass
class CandidateSet:
    sentence_id: str
    candidates: list[tuple[str, AmrGraph]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.candidates)

    @property
    def graphs(self) -> list[AmrGraph]:
        return [g for _, g in self.candidates]

    @property
    def sources(self) -> list[str]:
        return [s for s, _ in self.candidates]


@dataclass
class EnsembleDecision:
    sentence_id: str
    method: str
    chosen_index: Optional[int]
    chosen_source: Optional[str]
    matrix: np.ndarray
    tie: bool = False
    discarded_by_threshold: bool = False

    @property
    def max_pair_score(self) -> float:
        n = len(self.matrix)
        if n < 2:
            return 0.0
        return float(self.matrix[~np.eye(n, dtype=bool)].max())

    def to_json(self) -> dict:
        return {
            "sentence_id": self.sentence_id,
            "method": self.method,
            "chosen_source": self.chosen_source,
            "chosen_index": self.chosen_index,
            "max_pair_score": round(self.max_pair_score, 6),
            "discarded": self.discarded_by_threshold,
            "tie": self.tie,
        }


def _require(cands: CandidateSet, method: str) -> None:
    need = MIN_CANDIDATES[method]
    if len(cands) < need:
        raise ArityError(
            f"{method} selection needs at least {need} candidates, "
            f"sentence {cands.sentence_id!r} has {len(cands)}"
        )


def pairwise_matrix(cands: CandidateSet, cfg: Optional[SearchConfig] = None) -> np.ndarray:
    """Symmetric matrix of sentence Smatch F1, each unordered pair scored once."""
    n = len(cands)
    if n < 2:
        raise ArityError(f"pairwise scoring needs at least 2 candidates, got {n}")
    graphs = cands.graphs
    m = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            m[i, j] = m[j, i] = smatch_pair(graphs[i], graphs[j], cfg)[0].f1
    return m


def _check_matrix(matrix: np.ndarray, n: int) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (n, n):
        raise ValueError(f"matrix shape {matrix.shape} does not match {n} candidates")
    return matrix


def _rest_mean(matrix: np.ndarray, i: int, exclude: tuple[int, ...]) -> float:
    others = [matrix[i, k] for k in range(len(matrix)) if k not in exclude]
    return math.fsum(others) / len(others)


def greedy_select(
    cands: CandidateSet, matrix: np.ndarray, theta: Optional[float] = None
) -> EnsembleDecision:
    n = len(cands)
    _require(cands, "greedy")
    if theta is not None and not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    matrix = _check_matrix(matrix, n)

    best_pair, best = (0, 1), -1.0
    for i in range(n):
        for j in range(i + 1, n):
            if matrix[i, j] > best:
                best_pair, best = (i, j), matrix[i, j]
    i, j = best_pair

    decision = EnsembleDecision(cands.sentence_id, "greedy", None, None, matrix)
    if theta is not None and best < theta:
        decision.discarded_by_threshold = True
        return decision

    score_i = _rest_mean(matrix, i, (i, j))
    score_j = _rest_mean(matrix, j, (i, j))
    chosen = j if score_j > score_i else i
    decision.tie = score_i == score_j
    decision.chosen_index = chosen
    decision.chosen_source = cands.sources[chosen]
    return decision


def average_select(cands: CandidateSet, matrix: np.ndarray) -> EnsembleDecision:
    n = len(cands)
    _require(cands, "average")
    matrix = _check_matrix(matrix, n)
    means = [_rest_mean(matrix, i, (i,)) for i in range(n)]
    top = max(means)
    winners = [i for i, v in enumerate(means) if v == top]
    chosen = winners[0]
    return EnsembleDecision(
        cands.sentence_id, "average", chosen, cands.sources[chosen], matrix, tie=len(winners) > 1
    )


def equivalent(
    g1: AmrGraph, g2: AmrGraph, cfg: Optional[SearchConfig] = None, var_limit: int = 8
) -> bool:
    """True when the graphs are identical up to a renaming of variables."""
    t1, t2 = extract_triples(g1), extract_triples(g2)
    if len(t1) != len(t2) or len(g1.nodes) != len(g2.nodes):
        return False
    if sorted(t.arg2 for t in t1 if t.kind != "relation") != sorted(
        t.arg2 for t in t2 if t.kind != "relation"
    ):
        return False
    if sorted(t.rel for t in t1) != sorted(t.rel for t in t2):
        return False
    if len(g1.nodes) <= var_limit:
        return exact_smatch(g1, g2, var_limit).matched == len(t1)
    score, _ = smatch_pair(g1, g2, cfg)
    return score.matched == len(t1)


def majority_select(cands: CandidateSet, cfg: Optional[SearchConfig] = None) -> EnsembleDecision:
    """Pick the earliest member of the largest class of equivalent graphs.

    The decision's matrix holds the 0/1 equivalence indicator in place of
    pairwise Smatch.
    """
    n = len(cands)
    _require(cands, "majority")
    graphs = cands.graphs
    classes: list[list[int]] = []
    for idx, g in enumerate(graphs):
        for cls in classes:
            if equivalent(graphs[cls[0]], g, cfg):
                cls.append(idx)
                break
        else:
            classes.append([idx])
    indicator = np.eye(n)
    for cls in classes:
        for a in cls:
            for b in cls:
                indicator[a, b] = 1.0
    largest = max(len(c) for c in classes)
    winners = [c for c in classes if len(c) == largest]
    chosen = winners[0][0]
    return EnsembleDecision(
        cands.sentence_id, "majority", chosen, cands.sources[chosen], indicator, tie=len(winners) > 1
    )


def select(
    cands: CandidateSet,
    method: str = "greedy",
    theta: Optional[float] = None,
    cfg: Optional[SearchConfig] = None,
) -> EnsembleDecision:
    """Run one selection method end to end (scoring included)."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")
    _require(cands, method)
    if method == "majority":
        return majority_select(cands, cfg)
    matrix = pairwise_matrix(cands, cfg)
    if method == "greedy":
        return greedy_select(cands, matrix, theta)
    return average_select(cands, matrix)
