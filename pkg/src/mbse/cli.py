"""Command line: ``mbse {score,ensemble,distill,filter-gen,stats,validate}``.

Every command prints a one-line header with its effective settings to stderr
so that runs are self-describing. Output files are written atomically; ``-``
stands for stdout.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import __version__
from .amr import AmrGraph, read_amr_file, read_records, validate, write_amr_file
from .bleu import SMOOTHING, filter_generated, format_pairs_tsv, read_pairs_tsv
from .ensemble import METHODS, MIN_CANDIDATES, ArityError
from .io import write_json, write_jsonl, write_text
from .pipeline import (
    align_parser_outputs,
    corpus_stats,
    distill,
    mix_corpora,
    ne_type_oov,
    NoNamedEntitiesError,
    selection_distribution,
)
from .smatch import SearchConfig, sentence_scores, transform

log = logging.getLogger("mbse")


def _theta(value: str) -> float:
    x = float(value)
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError(f"theta must lie in [0, 1], got {value}")
    return x


def _positive(value: str) -> int:
    x = int(value)
    if x < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return x


def _search_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=_positive, default=4, help="hill-climbing restarts (default: 4)")
    p.add_argument("--seed", type=int, default=0, help="random seed for the alignment search (default: 0)")
    p.add_argument("--jobs", type=_positive, default=1, help="worker processes (default: 1)")


def _selection_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("files", nargs="+", help="parser output files, one per parser")
    p.add_argument("--method", choices=METHODS, default="greedy")
    p.add_argument("--theta", type=_theta, default=None, help="discard sentences whose best pair scores below this")
    p.add_argument("--parser-ids", default=None, help="comma-separated names for the input files")
    p.add_argument("--out", required=True, help="selected AMR output file")
    p.add_argument("--log", default=None, help="JSONL decision log")
    _search_args(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mbse", description="Smatch ensembling of AMR parser outputs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-q", "--quiet", action="store_true", help="only print errors")
    # -q is also accepted after the command name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-q", "--quiet", action="store_true", default=argparse.SUPPRESS, help="only print errors")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("score", parents=[common], help="corpus Smatch between gold and predicted AMRs")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--transform", choices=("unlabeled", "nowsd"), default=None)
    p.add_argument("--per-sentence", default=None, help="write id<TAB>f1 lines here")
    _search_args(p)

    _selection_args(sub.add_parser("ensemble", parents=[common], help="select one parse per sentence"))

    p = sub.add_parser("distill", parents=[common], help="build a silver corpus (selection, validation, mixing)")
    _selection_args(p)
    p.add_argument("--stats", default=None, help="JSON stats report")
    p.add_argument("--gold", default=None, help="gold AMR file to mix with the silver data")
    p.add_argument(
        "--mix",
        default="concat",
        help="concat | ratio:R | random-equal[:N] (random-equal draws N records from each of "
        "the first two input files instead of running the ensemble)",
    )
    p.add_argument("--mix-seed", type=int, default=0)

    p = sub.add_parser("filter-gen", parents=[common], help="BLEU-filter generated sentences")
    p.add_argument("--in", dest="input", required=True, help="TSV: id, original, generated")
    p.add_argument("--out", required=True)
    p.add_argument("--low", type=float, default=0.1)
    p.add_argument("--high", type=float, default=0.9)
    p.add_argument("--smoothing", choices=SMOOTHING, default="add-one")

    p = sub.add_parser("stats", parents=[common], help="corpus statistics and diagnostics")
    p.add_argument("files", nargs="+")
    p.add_argument("--train", default=None, help="training corpus for the NE-type OOV ratio")
    p.add_argument("--json", default=None, help="write the report as JSON")

    p = sub.add_parser("validate", parents=[common], help="report ill-formed or disconnected graphs")
    p.add_argument("file")
    p.add_argument("--strict", action="store_true", help="exit 1 if any graph has issues")
    return parser


def _header(args: argparse.Namespace) -> None:
    if args.quiet:
        return
    settings = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "quiet")}
    print(f"# mbse {args.command} " + " ".join(f"{k}={v}" for k, v in settings.items()), file=sys.stderr)


def _cfg(args) -> SearchConfig:
    return SearchConfig(restarts=args.restarts, seed=args.seed)


def _cmd_score(args) -> int:
    gold = read_amr_file(args.gold)
    pred = read_amr_file(args.pred)
    if len(gold) != len(pred):
        raise ValueError(f"{args.gold} has {len(gold)} AMRs but {args.pred} has {len(pred)}")
    if args.transform:
        gold = [transform(g, args.transform) for g in gold]
        pred = [transform(g, args.transform) for g in pred]
    pairs = list(zip(pred, gold))
    if not pairs:
        raise ValueError("no AMRs to score")
    scores = sentence_scores(pairs, _cfg(args), args.jobs)
    if args.per_sentence:
        lines = [f"{g.id if g.id is not None else i}\t{s.f1:.4f}\n" for i, (g, s) in enumerate(zip(gold, scores))]
        write_text(args.per_sentence, "".join(lines))
    total = sum(scores[1:], scores[0])
    print(f"Precision: {total.precision:.4f}")
    print(f"Recall: {total.recall:.4f}")
    print(f"F1: {total.f1:.4f}")
    return 0


def _check_arity(args) -> None:
    need = MIN_CANDIDATES[args.method]
    if len(args.files) < need:
        raise ArityError(f"--method {args.method} needs at least {need} input files, got {len(args.files)}")


def _parser_ids(args):
    return args.parser_ids.split(",") if args.parser_ids else None


def _cmd_ensemble(args) -> int:
    _check_arity(args)
    sets, dropped = align_parser_outputs(args.files, _parser_ids(args))
    result = distill(sets, args.method, args.theta, _cfg(args), jobs=args.jobs)
    # ensemble keeps every selection, even graphs that fail validation
    chosen = []
    by_id = {cs.sentence_id: cs for cs in sets}
    for d in result.decisions:
        if d.chosen_index is None:
            continue
        source, graph = by_id[d.sentence_id].candidates[d.chosen_index]
        meta = dict(graph.metadata, id=d.sentence_id)
        meta["mbse-source"] = source
        meta["mbse-score"] = f"{d.max_pair_score:.4f}"
        chosen.append(graph.copy(metadata=meta))
    _report_drops(dropped, result.stats)
    write_amr_file(args.out, chosen)
    if args.log:
        write_jsonl(args.log, [d.to_json() for d in result.decisions])
    return 0


def _report_drops(dropped, stats) -> None:
    # unreadable records and dropped sentences are already logged where they occur
    for sid in stats.discarded_ids:
        log.warning("sentence %s discarded: best pair below theta", sid)


def _parse_mix(spec: str):
    name, _, arg = spec.partition(":")
    if name == "concat" and not arg:
        return name, None
    if name == "ratio":
        return name, float(arg)
    if name == "random-equal":
        return name, int(arg) if arg else None
    raise ValueError(f"bad --mix value {spec!r}; expected concat, ratio:R or random-equal[:N]")


def _cmd_distill(args) -> int:
    _check_arity(args)
    how, mix_arg = _parse_mix(args.mix)
    gold: list[AmrGraph] = read_amr_file(args.gold) if args.gold else []
    if how == "random-equal":
        first, second = read_amr_file(args.files[0]), read_amr_file(args.files[1])
        corpus = mix_corpora(gold, (first, second), how, seed=args.mix_seed, per_source=mix_arg)
        write_amr_file(args.out, corpus)
        return 0

    sets, dropped = align_parser_outputs(args.files, _parser_ids(args))
    result = distill(sets, args.method, args.theta, _cfg(args), jobs=args.jobs)
    _report_drops(dropped, result.stats)
    silver = [r.to_graph() for r in result.records]
    corpus = mix_corpora(gold, silver, how, ratio=mix_arg, seed=args.mix_seed)
    write_amr_file(args.out, corpus)
    if args.log:
        write_jsonl(args.log, [d.to_json() for d in result.decisions])
    if args.stats:
        report = result.stats.to_json()
        report["settings"].update(mix=args.mix, mix_seed=args.mix_seed, gold_records=len(gold))
        report["dropped_records"] = [
            {"source": d.source, "position": d.position, "sentence_id": d.sentence_id, "reason": d.reason}
            for d in dropped
        ]
        write_json(args.stats, report)
    s = result.stats
    if not args.quiet:
        print(
            f"total={s.total} selected={s.n_selected} discarded={s.discarded} dropped={s.dropped}",
            file=sys.stderr,
        )
    return 0


def _cmd_filter_gen(args) -> int:
    pairs = read_pairs_tsv(args.input, smoothing=args.smoothing)
    kept = filter_generated(pairs, args.low, args.high)
    write_text(args.out, format_pairs_tsv(kept))
    if not args.quiet:
        print(f"kept {len(kept)} of {len(pairs)} pairs", file=sys.stderr)
    return 0


def _cmd_stats(args) -> int:
    train = read_amr_file(args.train) if args.train else None
    report = {}
    for path in args.files:
        st = corpus_stats(path)
        entry = {"sentences": st.sentences, "tokens": st.tokens, "unparseable": st.unparseable}
        print(f"{path}\tsentences={st.sentences}\ttokens={st.tokens}\tunparseable={st.unparseable}")
        graphs = read_amr_file(path)
        if any("mbse-source" in g.metadata for g in graphs):
            dist = selection_distribution(graphs)
            entry["distribution"] = dist
            for name, count in dist.items():
                print(f"  {name}\t{count}")
        if train is not None:
            try:
                oov = ne_type_oov(train, graphs)
                entry["ne_type_oov"] = {"ratio": oov.ratio, "missing_types": oov.missing_types}
                print(f"  ne-type-oov\t{oov.ratio:.4f}\tmissing={','.join(oov.missing_types)}")
            except NoNamedEntitiesError:
                entry["ne_type_oov"] = None
                print("  ne-type-oov\tundefined (no named entities)")
        report[path] = entry
    if args.json:
        write_json(args.json, report)
    return 0


def _cmd_validate(args) -> int:
    dropped: list = []
    records = read_records(args.file, dropped)
    bad = 0
    for i, g in enumerate(records):
        if g is None:
            continue
        rep = validate(g)
        if not rep.ok:
            bad += 1
            for issue in rep.issues:
                print(f"{g.id if g.id is not None else i}\t{issue}")
    for d in dropped:
        bad += 1
        print(f"{d.sentence_id if d.sentence_id is not None else d.position}\t{d.reason}")
    if not args.quiet:
        print(f"{len(records)} records, {bad} with issues", file=sys.stderr)
    return 1 if args.strict and bad else 0


COMMANDS = {
    "score": _cmd_score,
    "ensemble": _cmd_ensemble,
    "distill": _cmd_distill,
    "filter-gen": _cmd_filter_gen,
    "stats": _cmd_stats,
    "validate": _cmd_validate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.ERROR if args.quiet else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    _header(args)
    try:
        return COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"mbse: error: no such file: {exc.filename}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"mbse: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
