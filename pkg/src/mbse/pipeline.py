"""Silver-data distillation over a corpus of parser outputs.

Typical flow::

    sets, dropped = align_parser_outputs(["apt.amr", "spring.amr", "sbart.amr"])
    result = distill(sets, method="greedy")
    write_amr_file("silver.amr", [r.to_graph() for r in result.records])

plus helpers to mix gold and silver corpora and the corpus diagnostics
(selection distribution, sentence/token counts, named-entity type OOV).
"""

from __future__ import annotations

import logging
import os
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .amr import AmrGraph, DroppedRecord, iter_blocks, read_records, validate
from .ensemble import METHODS, MIN_CANDIDATES, CandidateSet, EnsembleDecision, select
from .parallel import pmap
from .smatch import SearchConfig

log = logging.getLogger(__name__)


class AlignmentError(ValueError):
    pass


@dataclass
class SilverRecord:
    sentence_id: str
    sentence_text: Optional[str]
    graph: AmrGraph
    source_parser_id: str
    method: str
    max_pair_score: float

    def to_graph(self) -> AmrGraph:
        """The selected graph with provenance written into its metadata."""
        meta = {"id": self.sentence_id}
        if self.sentence_text is not None:
            meta["snt"] = self.sentence_text
        for key, value in self.graph.metadata.items():
            meta.setdefault(key, value)
        meta["mbse-source"] = self.source_parser_id
        meta["mbse-score"] = f"{self.max_pair_score:.4f}"
        return self.graph.copy(metadata=meta)


@dataclass
class SelectionStats:
    selected: dict[str, int]
    discarded: int = 0
    dropped: int = 0
    total: int = 0
    discarded_ids: list[str] = field(default_factory=list)
    dropped_ids: dict[str, str] = field(default_factory=dict)
    settings: dict = field(default_factory=dict)

    @property
    def n_selected(self) -> int:
        return sum(self.selected.values())

    def reconciles(self) -> bool:
        return self.n_selected + self.discarded + self.dropped == self.total

    def distribution(self) -> dict[str, int]:
        """Per-parser counts of selected parses with a ``Total`` row."""
        return selection_distribution(self.selected)

    def to_json(self) -> dict:
        return {
            "settings": self.settings,
            "total": self.total,
            "selected": self.n_selected,
            "discarded": self.discarded,
            "dropped": self.dropped,
            "distribution": self.distribution(),
            "discarded_ids": self.discarded_ids,
            "dropped_ids": self.dropped_ids,
        }


class DistillResult(NamedTuple):
    records: list[SilverRecord]
    stats: SelectionStats
    decisions: list[EnsembleDecision]


def _parser_ids(files: Sequence, parser_ids: Optional[Sequence[str]]) -> list[str]:
    if parser_ids is not None:
        if len(parser_ids) != len(files):
            raise ValueError(f"{len(parser_ids)} parser ids given for {len(files)} files")
        return list(parser_ids)
    stems = [os.path.splitext(os.path.basename(str(f)))[0] for f in files]
    if len(set(stems)) == len(stems):
        return stems
    return [f"{i}:{s}" for i, s in enumerate(stems)]


def _block_ids(path) -> list[Optional[str]]:
    from .amr import _sniff_id

    with open(path, "rb") as fh:
        data = fh.read()
    ids = []
    for block in iter_blocks(data):
        lines = block.split(b"\n")
        if all(line.lstrip().startswith(b"#") for line in lines) and b"::id" not in block:
            continue
        ids.append(_sniff_id(block))
    return ids


def align_parser_outputs(
    files: Sequence["str | os.PathLike"], parser_ids: Optional[Sequence[str]] = None
) -> tuple[list[CandidateSet], list[DroppedRecord]]:
    """Group the records of N parser-output files into per-sentence candidate sets.

    Records are matched by ``::id`` when every record in every file has one,
    otherwise by position (record counts must then agree). Unreadable
    records are left out of their sentence's candidates and reported in the
    returned drop list; the sentence itself is kept so totals stay exact.
    """
    if len(files) < 2:
        raise ValueError(f"need at least 2 parser output files, got {len(files)}")
    names = _parser_ids(files, parser_ids)
    dropped: list[DroppedRecord] = []
    per_file = [read_records(f, dropped) for f in files]
    ids = [_block_ids(f) for f in files]

    by_id = all(all(i is not None for i in file_ids) for file_ids in ids)
    sets: dict[str, CandidateSet] = {}
    if by_id:
        for f, file_ids in zip(files, ids):
            dupes = [k for k, c in Counter(file_ids).items() if c > 1]
            if dupes:
                raise AlignmentError(f"{f}: duplicate ids {dupes[:5]}")
        for name, records, file_ids in zip(names, per_file, ids):
            for sid, graph in zip(file_ids, records):
                cs = sets.setdefault(sid, CandidateSet(sid))
                if graph is not None:
                    cs.candidates.append((name, graph))
    else:
        counts = [len(r) for r in per_file]
        if len(set(counts)) != 1:
            detail = ", ".join(f"{f}={c}" for f, c in zip(files, counts))
            raise AlignmentError(f"records lack ids and counts differ: {detail}")
        for pos in range(counts[0]):
            sid = next((fi[pos] for fi in ids if fi[pos] is not None), str(pos))
            cs = sets.setdefault(sid, CandidateSet(sid))
            for name, records in zip(names, per_file):
                if records[pos] is not None:
                    cs.candidates.append((name, records[pos]))
    for d in dropped:
        if d.sentence_id is None and not by_id:
            d.sentence_id = next((fi[d.position] for fi in ids if fi[d.position] is not None), str(d.position))
    return list(sets.values()), dropped


def _decide(args) -> Union[EnsembleDecision, str]:
    cands, method, theta, cfg = args
    if len(cands) < MIN_CANDIDATES[method]:
        return f"only {len(cands)} usable candidates ({method} needs {MIN_CANDIDATES[method]})"
    return select(cands, method, theta if method == "greedy" else None, cfg)


def distill(
    cand_sets: Sequence[CandidateSet],
    method: str = "greedy",
    theta: Optional[float] = None,
    cfg: Optional[SearchConfig] = None,
    parser_ids: Optional[Sequence[str]] = None,
    jobs: int = 1,
) -> DistillResult:
    """Select one parse per sentence and keep the well-formed, connected ones."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")
    if theta is not None:
        if method != "greedy":
            raise ValueError("theta only applies to the greedy method")
        if not 0.0 <= theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {theta}")
    cfg = cfg or SearchConfig()
    names = list(parser_ids) if parser_ids else []
    for cs in cand_sets:
        for src in cs.sources:
            if src not in names:
                names.append(src)

    stats = SelectionStats(
        selected={n: 0 for n in names},
        total=len(cand_sets),
        settings={"method": method, "theta": theta, "restarts": cfg.restarts, "seed": cfg.seed},
    )
    records: list[SilverRecord] = []
    decisions: list[EnsembleDecision] = []
    outcomes = pmap(_decide, [(cs, method, theta, cfg) for cs in cand_sets], jobs)
    for cs, outcome in zip(cand_sets, outcomes):
        if isinstance(outcome, str):
            stats.dropped += 1
            stats.dropped_ids[cs.sentence_id] = outcome
            log.warning("sentence %s dropped: %s", cs.sentence_id, outcome)
            continue
        decisions.append(outcome)
        if outcome.discarded_by_threshold:
            stats.discarded += 1
            stats.discarded_ids.append(cs.sentence_id)
            continue
        source, graph = cs.candidates[outcome.chosen_index]
        report = validate(graph)
        if not report.ok:
            reason = f"selected parse from {source} is ill-formed: " + "; ".join(report.issues)
            stats.dropped += 1
            stats.dropped_ids[cs.sentence_id] = reason
            log.warning("sentence %s dropped: %s", cs.sentence_id, reason)
            continue
        text = next((g.metadata["snt"] for g in cs.graphs if "snt" in g.metadata), None)
        records.append(
            SilverRecord(cs.sentence_id, text, graph, source, method, outcome.max_pair_score)
        )
        stats.selected[source] += 1
    return DistillResult(records, stats, decisions)


def selection_distribution(selected: Union[dict[str, int], Iterable[AmrGraph]]) -> dict[str, int]:
    """Counts of selected parses per source parser, plus ``Total``.

    Accepts either a ``{parser: count}`` mapping or silver graphs carrying
    ``mbse-source`` metadata.
    """
    if isinstance(selected, dict):
        counts = dict(selected)
    else:
        counts = dict(Counter(g.metadata.get("mbse-source", "unknown") for g in selected))
    counts["Total"] = sum(counts.values())
    return counts


def mix_corpora(
    gold: Sequence[AmrGraph],
    silver: Union[Sequence[AmrGraph], tuple[Sequence[AmrGraph], Sequence[AmrGraph]]],
    how: str = "concat",
    ratio: Optional[float] = None,
    seed: int = 0,
    per_source: Optional[int] = None,
) -> list[AmrGraph]:
    """Combine gold and silver training data.

    ``concat``
        gold followed by all silver records.
    ``ratio``
        gold followed by a seeded sample of ``round(ratio * len(silver))``
        silver records, kept in their original order.
    ``random-equal``
        ``silver`` is a pair of sources; ``per_source`` records are drawn from
        each (default: half the smaller source), never taking the same
        sentence id twice.
    """
    rng = random.Random(seed)
    if how == "concat":
        return list(gold) + list(silver)
    if how == "ratio":
        if ratio is None or not 0.0 < ratio <= 1.0:
            raise ValueError(f"ratio must lie in (0, 1], got {ratio}")
        silver = list(silver)
        k = round(ratio * len(silver))
        picked = sorted(rng.sample(range(len(silver)), k))
        return list(gold) + [silver[i] for i in picked]
    if how == "random-equal":
        try:
            first, second = (list(s) for s in silver)
        except (TypeError, ValueError):
            raise ValueError("random-equal mixing needs silver as a pair of sources") from None
        if per_source is None:
            per_source = min(len(first), len(second)) // 2
        if per_source < 0 or per_source > len(first):
            raise ValueError(f"requested {per_source} records from a source of {len(first)}")
        take_a = sorted(rng.sample(range(len(first)), per_source))
        taken = {first[i].id for i in take_a if first[i].id is not None}
        pool = [i for i, g in enumerate(second) if g.id is None or g.id not in taken]
        if per_source > len(pool):
            raise ValueError(
                f"requested {per_source} records from a source with {len(pool)} available"
            )
        take_b = sorted(rng.sample(pool, per_source))
        return list(gold) + [first[i] for i in take_a] + [second[i] for i in take_b]
    raise ValueError(f"unknown mixing mode {how!r}")


class CorpusStats(NamedTuple):
    sentences: int
    tokens: int
    unparseable: int = 0


def corpus_stats(corpus: Union["str | os.PathLike", Iterable[AmrGraph]]) -> CorpusStats:
    """Sentence and token counts; tokens come from ``::tok`` or else ``::snt``."""
    unparseable = 0
    if isinstance(corpus, (str, os.PathLike)):
        dropped: list[DroppedRecord] = []
        graphs = [g for g in read_records(corpus, dropped) if g is not None]
        unparseable = len(dropped)
    else:
        graphs = list(corpus)
    tokens = 0
    for g in graphs:
        text = g.metadata.get("tok", g.metadata.get("snt", ""))
        tokens += len(text.split())
    return CorpusStats(len(graphs), tokens, unparseable)


class NoNamedEntitiesError(ValueError):
    """The test corpus has no named entities, so the OOV ratio is undefined."""


class OovResult(NamedTuple):
    ratio: float
    missing_types: list[str]


def ne_types(graph: AmrGraph) -> list[str]:
    """Concepts of nodes that carry a ``:name`` edge, one entry per occurrence."""
    named = dict.fromkeys(s for s, role, _ in graph.edges if role.lower() == "name")
    return [graph.nodes[s] for s in named]


def ne_type_oov(train: Iterable[AmrGraph], test: Iterable[AmrGraph]) -> OovResult:
    """Share of test named-entity occurrences whose type never occurs in train."""
    known = {t for g in train for t in ne_types(g)}
    occurrences = [t for g in test for t in ne_types(g)]
    if not occurrences:
        raise NoNamedEntitiesError("test corpus contains no named entities")
    missing = [t for t in occurrences if t not in known]
    return OovResult(len(missing) / len(occurrences), sorted(set(missing)))
