"""Smatch: triple-overlap F1 between two AMRs under the best variable alignment.

Finding the best alignment is NP-complete. :func:`smatch_pair` approximates
it with restarted hill climbing; :func:`exact_smatch` enumerates every
injective mapping and is meant as a test oracle for small graphs.

The first graph is treated as the prediction and the second as the gold, so
precision is ``matched / |triples(g1)|`` and recall ``matched / |triples(g2)|``.
"""

from __future__ import annotations

import itertools
import random
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional, Sequence

from .amr import AmrGraph, Triple, TripleSet, extract_triples
from .parallel import pmap

Alignment = dict[str, str]


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 4
    seed: int = 0
    max_iterations: int = 1000
    init: str = "smart"

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.init not in ("smart", "random"):
            raise ValueError(f"init must be 'smart' or 'random', got {self.init!r}")


@dataclass(frozen=True)
class SmatchScore:
    matched: int
    total_pred: int
    total_gold: int

    @property
    def precision(self) -> float:
        return self.matched / self.total_pred if self.total_pred else 0.0

    @property
    def recall(self) -> float:
        return self.matched / self.total_gold if self.total_gold else 0.0

    @property
    def f1(self) -> float:
        # 2PR/(P+R) reduces to this; a single integer division keeps equal
        # ratios bit-identical, which the selection tie rules rely on.
        if self.matched == 0:
            return 0.0
        return 2 * self.matched / (self.total_pred + self.total_gold)

    def __add__(self, other: "SmatchScore") -> "SmatchScore":
        return SmatchScore(
            self.matched + other.matched,
            self.total_pred + other.total_pred,
            self.total_gold + other.total_gold,
        )


class VariableLimitError(ValueError):
    pass


def _variables(triples: TripleSet) -> list[str]:
    return [t.arg1 for t in triples if t.kind == "instance"]


class _Problem:
    """Match-count bookkeeping for mapping variables of ``a`` into ``b``.

    ``unary[i][j]`` counts instance/attribute triples that match when
    variable i maps to j. Each entry of ``quads`` is a pair of relation
    triples that match when both endpoint mappings hold.
    """

    def __init__(self, ta: TripleSet, tb: TripleSet):
        self.avars = _variables(ta)
        self.bvars = _variables(tb)
        ai = {v: i for i, v in enumerate(self.avars)}
        bi = {v: i for i, v in enumerate(self.bvars)}
        self.na, self.nb = len(self.avars), len(self.bvars)
        self.bound = min(len(ta), len(tb))

        b_unary = defaultdict(list)
        b_rel = defaultdict(list)
        self.b_concept = [None] * self.nb
        for t in tb:
            if t.kind == "relation":
                b_rel[t.rel].append((bi[t.arg1], bi[t.arg2]))
            else:
                b_unary[(t.kind, t.rel, t.arg2)].append(bi[t.arg1])
                if t.kind == "instance":
                    self.b_concept[bi[t.arg1]] = t.arg2

        self.unary = [[0] * self.nb for _ in range(self.na)]
        self.a_concept = [None] * self.na
        for t in ta:
            if t.kind == "relation":
                continue
            a = ai[t.arg1]
            if t.kind == "instance":
                self.a_concept[a] = t.arg2
            for b in b_unary.get((t.kind, t.rel, t.arg2), ()):
                self.unary[a][b] += 1

        self.quads: list[tuple[int, int, int, int]] = []
        # (a, b) -> quads that need a mapped to b
        self.by_pair: dict[tuple[int, int], list[int]] = defaultdict(list)
        for t in ta:
            if t.kind != "relation":
                continue
            a1, a2 = ai[t.arg1], ai[t.arg2]
            for b1, b2 in b_rel.get(t.rel, ()):
                if a1 == a2 or b1 == b2:
                    if a1 == a2 and b1 == b2:
                        self.unary[a1][b1] += 1
                    continue
                q = len(self.quads)
                self.quads.append((a1, b1, a2, b2))
                self.by_pair[(a1, b1)].append(q)
                self.by_pair[(a2, b2)].append(q)

        # Targets that can add a match for each variable; moves elsewhere
        # never have positive gain and are skipped by the climber.
        self.useful = [{b for b in range(self.nb) if self.unary[a][b]} for a in range(self.na)]
        for a1, b1, a2, b2 in self.quads:
            self.useful[a1].add(b1)
            self.useful[a2].add(b2)

    def score(self, m: list[int]) -> int:
        total = sum(self.unary[a][m[a]] for a in range(self.na))
        for a1, b1, a2, b2 in self.quads:
            if m[a1] == b1 and m[a2] == b2:
                total += 1
        return total

    # A quad never has the same variable at both ends (those became unary
    # weights above), so no quad is listed twice under one variable's keys.

    def move_gain(self, m: list[int], a: int, b: int) -> int:
        gain = self.unary[a][b] - self.unary[a][m[a]]
        quads = self.quads
        for key in ((a, m[a]), (a, b)):
            for q in self.by_pair.get(key, ()):
                x1, y1, x2, y2 = quads[q]
                before = m[x1] == y1 and m[x2] == y2
                n1 = b if x1 == a else m[x1]
                n2 = b if x2 == a else m[x2]
                gain += (n1 == y1 and n2 == y2) - before
        return gain

    def swap_gain(self, m: list[int], a1: int, a2: int) -> int:
        b1, b2 = m[a1], m[a2]
        u = self.unary
        gain = u[a1][b2] + u[a2][b1] - u[a1][b1] - u[a2][b2]
        quads = self.quads
        for key in ((a1, b1), (a1, b2), (a2, b1), (a2, b2)):
            skip_a1 = key[0] == a2
            for q in self.by_pair.get(key, ()):
                x1, y1, x2, y2 = quads[q]
                if skip_a1 and (x1 == a1 or x2 == a1):
                    continue  # already counted under a1's keys
                before = m[x1] == y1 and m[x2] == y2
                n1 = b2 if x1 == a1 else b1 if x1 == a2 else m[x1]
                n2 = b2 if x2 == a1 else b1 if x2 == a2 else m[x2]
                gain += (n1 == y1 and n2 == y2) - before
        return gain

    def initial(self, rng: random.Random, smart: bool) -> list[int]:
        m = [-1] * self.na
        free = set(range(self.nb))
        order = list(range(self.na))
        rng.shuffle(order)
        if smart:
            for a in order:
                cands = [b for b in sorted(free) if self.b_concept[b] == self.a_concept[a]]
                if not cands:
                    continue
                best = max(self.unary[a][b] for b in cands)
                m[a] = rng.choice([b for b in cands if self.unary[a][b] == best])
                free.discard(m[a])
        rest = sorted(free)
        rng.shuffle(rest)
        for a in order:
            if m[a] == -1:
                m[a] = rest.pop()
        return m

    def climb(self, m: list[int], max_iterations: int) -> tuple[list[int], int]:
        current = self.score(m)
        for _ in range(max_iterations):
            if current == self.bound:
                break
            used = set(m)
            best_gain, best_move = 0, None
            for a in range(self.na):
                for b in sorted(self.useful[a] - used):
                    g = self.move_gain(m, a, b)
                    if g > best_gain:
                        best_gain, best_move = g, ("move", a, b)
            for a1 in range(self.na):
                useful1 = self.useful[a1]
                for a2 in range(a1 + 1, self.na):
                    if m[a2] not in useful1 and m[a1] not in self.useful[a2]:
                        continue
                    g = self.swap_gain(m, a1, a2)
                    if g > best_gain:
                        best_gain, best_move = g, ("swap", a1, a2)
            if best_move is None:
                break
            kind, x, y = best_move
            if kind == "move":
                m[x] = y
            else:
                m[x], m[y] = m[y], m[x]
            current += best_gain
        return m, current


def _best_alignment(ta: TripleSet, tb: TripleSet, cfg: SearchConfig) -> tuple[int, Alignment]:
    """Hill-climb the mapping of ``ta``'s variables into ``tb``'s."""
    prob = _Problem(ta, tb)
    rng = random.Random(cfg.seed)
    best, best_map = -1, []
    for restart in range(cfg.restarts):
        # concept-guided start first, random starts after for diversity
        m = prob.initial(rng, smart=cfg.init == "smart" and restart == 0)
        m, matched = prob.climb(m, cfg.max_iterations)
        if matched > best:
            best, best_map = matched, list(m)
        if best == prob.bound:
            break
    alignment = {prob.avars[a]: prob.bvars[b] for a, b in enumerate(best_map)}
    return best, alignment


def smatch_pair(
    g1: AmrGraph, g2: AmrGraph, cfg: Optional[SearchConfig] = None
) -> tuple[SmatchScore, Alignment]:
    """Score ``g1`` (prediction) against ``g2`` (gold) by hill climbing.

    Returns the score and the alignment from variables of ``g1`` to
    variables of ``g2``. The smaller variable set is always mapped into the
    larger one; the alignment is inverted back when needed.
    """
    cfg = cfg or SearchConfig()
    t1, t2 = extract_triples(g1), extract_triples(g2)
    if len(_variables(t1)) <= len(_variables(t2)):
        matched, alignment = _best_alignment(t1, t2, cfg)
    else:
        matched, inverse = _best_alignment(t2, t1, cfg)
        alignment = {v: k for k, v in inverse.items()}
    return SmatchScore(matched, len(t1), len(t2)), alignment


def _map_triple(t: Triple, m: dict[str, str]) -> Triple:
    if t.kind == "relation":
        return Triple(t.kind, m[t.arg1], t.rel, m[t.arg2])
    return Triple(t.kind, m[t.arg1], t.rel, t.arg2)


def exact_smatch(g1: AmrGraph, g2: AmrGraph, var_limit: int = 8) -> SmatchScore:
    """Maximum matched-triple count over all injective variable mappings."""
    t1, t2 = extract_triples(g1), extract_triples(g2)
    v1, v2 = _variables(t1), _variables(t2)
    small, large = (t1, set(t2)) if len(v1) <= len(v2) else (t2, set(t1))
    vs, vl = (v1, v2) if len(v1) <= len(v2) else (v2, v1)
    if len(vs) > var_limit:
        raise VariableLimitError(
            f"exact Smatch refused: {len(vs)} variables exceeds var_limit={var_limit}"
        )
    best = 0
    for image in itertools.permutations(vl, len(vs)):
        m = dict(zip(vs, image))
        hits = sum(1 for t in small if _map_triple(t, m) in large)
        best = max(best, hits)
        if best == min(len(t1), len(t2)):
            break
    return SmatchScore(best, len(t1), len(t2))


def _score_pair(args) -> SmatchScore:
    g1, g2, cfg = args
    return smatch_pair(g1, g2, cfg)[0]


def sentence_scores(
    pairs: Sequence[tuple[AmrGraph, AmrGraph]], cfg: Optional[SearchConfig] = None, jobs: int = 1
) -> list[SmatchScore]:
    cfg = cfg or SearchConfig()
    for i, (g1, g2) in enumerate(pairs):
        if g1.id is not None and g2.id is not None and g1.id != g2.id:
            raise ValueError(f"pair {i}: id mismatch {g1.id!r} vs {g2.id!r}")
    return pmap(_score_pair, [(g1, g2, cfg) for g1, g2 in pairs], jobs)


def corpus_smatch(
    pairs: Sequence[tuple[AmrGraph, AmrGraph]], cfg: Optional[SearchConfig] = None, jobs: int = 1
) -> SmatchScore:
    """Micro-averaged Smatch: sum counts over all pairs, then compute F1 once."""
    if not pairs:
        raise ValueError("corpus_smatch needs at least one pair")
    scores = sentence_scores(pairs, cfg, jobs)
    return sum(scores[1:], scores[0])


_SENSE_RE = re.compile(r"-\d\d$")
UNLABELED_ROLE = "label"


def transform(graph: AmrGraph, mode: str) -> AmrGraph:
    """Graph rewrites behind the Unlabeled and NoWSD scores.

    ``unlabeled`` replaces every role (edges and constant attributes) with one
    fixed label; ``nowsd`` strips PropBank sense suffixes such as ``-01``.
    """
    if mode == "unlabeled":
        return graph.copy(
            edges=[(s, UNLABELED_ROLE, t) for s, _, t in graph.edges],
            attributes=[(s, UNLABELED_ROLE, v) for s, _, v in graph.attributes],
        )
    if mode == "nowsd":
        return graph.copy(nodes={v: _SENSE_RE.sub("", c) for v, c in graph.nodes.items()})
    raise ValueError(f"unknown transform mode {mode!r} (expected 'unlabeled' or 'nowsd')")
