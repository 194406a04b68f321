"""Command-line entry point: ``colourlex <subcommand> ...``.

Exit status is 0 on success, 1 on bad input and 2 when an internal invariant
fails. Errors are reported on stderr as a single ``error: <Category>: message``
line.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
from collections import defaultdict

from . import formats
from .annotate import (
    aggregate,
    agreement_histogram,
    chance_distinct_probability,
    colour_distribution,
    generate_hit,
)
from .categories import (
    extract_gold_standard,
    imageability_scatter,
    pearson_correlation,
    score_categories,
    spearman_correlation,
)
from .core import COLOURS
from .corpus import (
    IngestStats,
    baseline_predict,
    build_cooc_table,
    colour_frequency_ranking,
    colour_unigram_counts,
    evaluate,
    load_ngrams,
    predict_by_cooccurrence,
    predict_by_cooccurrence_with_polarity,
    with_fallback,
)
from .errors import ColourLexError, DegenerateInput, InputError, InvariantViolation, MissingAuxiliary, NoNearSynonym
from .signatures import association_signature
from .wordnet import MEASURES, Closeness, load_information_content, load_wordnet, predict_by_wordnet

log = logging.getLogger("colourlex")


# settings that cannot change results (output paths, worker count); left out of
# the provenance header so outputs stay byte-identical across them
_EXECUTION_ONLY = {"func", "out", "parallel", "verbose", "key_out", "report", "scores", "scatter"}


@contextlib.contextmanager
def _output(path: str | None, args):
    config = {k: v for k, v in sorted(vars(args).items()) if k not in _EXECUTION_ONLY}
    if path in (None, "-"):
        sys.stdout.write(formats.header_line(config))
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(formats.header_line(config))
            yield fh


def cmd_hitgen(args) -> None:
    thesaurus = formats.read_thesaurus(args.thesaurus)
    pool = sorted({m for cat in thesaurus.values() for m in cat.members})
    hits, skipped = [], 0
    for cat in thesaurus.values():
        for sense in cat.senses():
            try:
                hits.append(generate_hit(sense, thesaurus, pool, sense.stable_seed(args.seed)))
            except NoNearSynonym:
                skipped += 1
    with _output(args.out, args) as fh:
        formats.write_hits(hits, fh)
    if args.key_out:
        with _output(args.key_out, args) as fh:
            formats.write_answer_key(hits, fh)
    if skipped:
        log.warning("skipped %d senses without a near-synonym", skipped)


def cmd_aggregate(args) -> None:
    assignments = formats.read_assignments(args.assignments)
    key = formats.read_answer_key(args.answer_key)
    entries, report = aggregate(assignments, key, args.min_valid, args.seed)
    with _output(args.out, args) as fh:
        formats.write_lexicon(entries, fh)
    if args.report:
        with _output(args.report, args) as fh:
            fh.write(f"assignments\t{report.n_assignments}\n")
            fh.write(f"discarded_wrong_q1\t{report.n_wrong_q1}\n")
            fh.write(f"discarded_duplicate\t{report.n_duplicates}\n")
            fh.write(f"discard_rate\t{report.discard_rate:.4f}\n")
            fh.write(f"terms_kept\t{report.n_kept}\n")
            fh.write(f"terms_dropped\t{len(report.dropped)}\n")
            fh.write(f"mean_valid_per_term\t{report.mean_valid_per_term:.4f}\n")
            for sense, n in report.dropped:
                fh.write(f"dropped\t{sense.term}\t{sense.category_id}\t{n}\n")


def cmd_stats(args) -> None:
    entries = formats.read_lexicon(args.lexicon)
    with _output(args.out, args) as fh:
        for mode in ("overall", "voted"):
            dist = colour_distribution(entries, mode)
            for c in COLOURS:
                fh.write(f"distribution.{mode}.{c.value}={dist[c]:.1f}\n")
        hist = agreement_histogram(entries)
        for size, share in hist.share.items():
            fh.write(f"majority_size.{size}={share:.1f}\n")
        fh.write(f"majority_size.ge2={hist.cumulative_ge2:.1f}\n")
        fh.write(f"majority_size.ge3={hist.cumulative_ge3:.1f}\n")
        fh.write(f"entries={len(entries)}\n")
        p = chance_distinct_probability(args.annotators, len(COLOURS))
        fh.write(f"chance_distinct({args.annotators},{len(COLOURS)})={p:.3f}\n")


def cmd_categories(args) -> None:
    thesaurus = formats.read_thesaurus(args.thesaurus)
    lexicon = formats.read_lexicon(args.lexicon)
    cats = list(thesaurus.values())
    gold = extract_gold_standard(cats, lexicon, args.gold_threshold, args.min_members)
    scores = score_categories(cats, lexicon, args.min_members)
    with _output(args.out, args) as fh:
        formats.write_gold(gold, thesaurus, fh)
    if args.scores:
        with _output(args.scores, args) as fh:
            formats.write_scores(scores, thesaurus, fh)
    floor = sum(1 for s in scores.values() if s.n_annotated == args.min_members and s.strength * s.n_annotated == 1)
    lines = [
        f"categories={len(cats)}",
        f"eligible={len(scores)}",
        f"at_floor={floor}",
        f"gold={len(gold)}",
    ]
    if args.imageability:
        ratings = formats.read_imageability(args.imageability)
        rows = imageability_scatter(cats, ratings, lexicon, args.min_members)
        if args.scatter:
            with _output(args.scatter, args) as fh:
                formats.write_scatter(rows, fh)
        xs = [r.imageability for r in rows]
        ys = [r.strength for r in rows]
        lines.append(f"imageability_categories={len(rows)}")
        try:
            lines.append(f"pearson={pearson_correlation(xs, ys):.3f}")
            lines.append(f"spearman={spearman_correlation(xs, ys):.3f}")
        except DegenerateInput as exc:
            lines.append(f"correlation=undefined ({exc})")
    sys.stdout.write("".join(line + "\n" for line in lines))


def cmd_signature(args) -> None:
    labels = formats.read_label_lexicon(args.labels)
    lexicon = formats.read_lexicon(args.lexicon)
    matrix = association_signature(labels, lexicon)
    with _output(args.out, args) as fh:
        formats.write_signature(matrix, fh)


def cmd_rank(args) -> None:
    stats = IngestStats()
    records = list(load_ngrams(args.unigrams, 1, args.min_count, stats))
    total = args.total_tokens or sum(r.count for r in records)
    if total <= 0:
        raise InputError("cannot rank colours: total token count is zero")
    ranking = colour_frequency_ranking(records, total)
    with _output(args.out, args) as fh:
        formats.write_ranking(ranking, fh)
    counts = colour_unigram_counts(records)
    sys.stdout.write(f"colour_tokens={sum(counts.values())}\ntotal_tokens={total}\n"
                     f"malformed_lines={stats.malformed}\nspearman_vs_bk={ranking.spearman_vs_bk():.3f}\n")


def _targets(args) -> list[str]:
    terms = set()
    if args.thesaurus:
        for cat in formats.read_thesaurus(args.thesaurus).values():
            terms.update(m for m in cat.members if " " not in m)
    if args.targets:
        with open(args.targets, encoding="utf-8") as fh:
            terms.update(line.strip().lower() for line in fh if line.strip() and not line.startswith("#"))
    if not terms:
        raise MissingAuxiliary("no target terms: pass --thesaurus or --targets")
    return sorted(terms)


def cmd_cooc(args) -> None:
    table = build_cooc_table(args.inputs, _targets(args), args.mode, args.window, args.parallel, args.min_count)
    with _output(args.out, args) as fh:
        formats.write_cooc(table, fh)


_BASELINE_ALIASES = {
    "random": "random",
    "corpus": "corpus_most_frequent",
    "corpus_most_frequent": "corpus_most_frequent",
    "gold": "gold_most_frequent",
    "gold_most_frequent": "gold_most_frequent",
}


def _make_predictor(method: str, args):
    """Return a function category -> Prediction for a ``--method`` value."""
    name, _, detail = method.partition(":")
    if name == "cooc":
        table = _need(args.table, "--table", method, formats.read_cooc)
        return lambda cat: predict_by_cooccurrence(cat, table)
    if name == "cooc-polarity":
        table = _need(args.table, "--table", method, formats.read_cooc)
        polarity = _need(args.polarity_lexicon, "--polarity-lexicon", method, formats.read_label_lexicon)
        return lambda cat: predict_by_cooccurrence_with_polarity(cat, table, polarity)
    if name == "wordnet":
        measure = detail or args.measure
        if measure not in MEASURES:
            raise InputError(f"wordnet method needs a measure from {MEASURES}")
        db = _need(args.wordnet, "--wordnet", method, load_wordnet)
        ic = load_information_content(args.ic, db) if args.ic else None
        closeness = Closeness(db, measure, ic, args.aggregate)
        return lambda cat: predict_by_wordnet(cat, db, measure, closeness=closeness)
    if name == "baseline":
        kind = _BASELINE_ALIASES.get(detail)
        if kind is None:
            raise InputError(f"unknown baseline {detail!r}; expected random, corpus or gold")
        if kind == "random":
            return lambda cat: baseline_predict(kind, cat, seed=args.seed)
        if kind == "corpus_most_frequent":
            ranking = _need(args.ranking, "--ranking", method, formats.read_ranking)
            return lambda cat: baseline_predict(kind, cat, ranking=ranking)
        gold = _need(args.gold, "--gold", method, formats.read_gold)
        return lambda cat: baseline_predict(kind, cat, gold=gold)
    raise InputError(f"unknown method {method!r}")


def _need(value, flag, method, loader):
    if not value:
        raise MissingAuxiliary(f"method {method} needs {flag}")
    return loader(value)


def cmd_predict(args) -> None:
    thesaurus = formats.read_thesaurus(args.thesaurus)
    cats = list(thesaurus.values())
    if args.categories:
        wanted = formats.read_gold(args.categories).entries
        unknown = [cid for cid in wanted if cid not in thesaurus]
        if unknown:
            raise InputError(f"category {unknown[0]!r} not in thesaurus")
        cats = [thesaurus[cid] for cid in sorted(wanted)]
    predict = _make_predictor(args.method, args)
    fallback = _make_predictor(args.fallback, args) if args.fallback else None
    preds = []
    for cat in cats:
        p = predict(cat)
        if fallback is not None:
            p = with_fallback(p, fallback(cat))
        preds.append(p)
    with _output(args.out, args) as fh:
        formats.write_predictions(preds, fh)


def cmd_evaluate(args) -> None:
    gold = formats.read_gold(args.gold)
    by_method = defaultdict(list)
    for path in args.predictions:
        for p in formats.read_predictions(path):
            by_method[p.method].append(p)
    with _output(args.out, args) as fh:
        fh.write("#method\taccuracy\tn_gold\tn_correct\tn_abstain\n")
        for method, preds in by_method.items():
            result = evaluate([p for p in preds if p.category_id in gold.entries], gold)
            fh.write(f"{method}\t{result.accuracy:.1f}\t{result.n_gold}\t{result.n_correct}\t{result.n_abstain}\n")


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors: exit 1 with the usual one-line message."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error: UsageError: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="colourlex", description="Word-colour association lexicon toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("--out", default="-", help="output path (default: stdout)")
        return p

    p = command("hitgen", cmd_hitgen, "generate word-choice + colour questionnaires")
    p.add_argument("--thesaurus", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--answer-key", dest="key_out", help="also write the Q1 answer key here")

    p = command("aggregate", cmd_aggregate, "majority-vote assignments into a lexicon (JSON lines)")
    p.add_argument("--assignments", required=True)
    p.add_argument("--answer-key", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--min-valid", type=int, default=3)
    p.add_argument("--report", help="write the aggregation report here")

    p = command("stats", cmd_stats, "colour distributions, agreement histogram, chance level")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--annotators", type=int, default=5)

    p = command("categories", cmd_categories, "category strength, gold standard, imageability")
    p.add_argument("--thesaurus", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--gold-threshold", type=float, default=0.5)
    p.add_argument("--min-members", type=int, default=4)
    p.add_argument("--scores", help="write every eligible category's score here")
    p.add_argument("--imageability")
    p.add_argument("--scatter", help="write (category, imageability, strength) rows here")

    p = command("signature", cmd_signature, "colour signature of labelled terms")
    p.add_argument("--labels", required=True)
    p.add_argument("--lexicon", required=True)

    p = command("rank", cmd_rank, "colour term frequency ranking from unigram files")
    p.add_argument("--unigrams", nargs="+", required=True)
    p.add_argument("--total-tokens", type=int, default=0, help="corpus size (default: sum of unigram counts)")
    p.add_argument("--min-count", type=int, default=0)

    p = command("cooc", cmd_cooc, "build a co-occurrence table cache")
    p.add_argument("--inputs", nargs="+", required=True)
    p.add_argument("--thesaurus", help="use single-token category members as targets")
    p.add_argument("--targets", help="file with one target term per line")
    p.add_argument("--mode", choices=("text", "5gram"), default="text")
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--min-count", type=int, default=0)
    p.add_argument("--parallel", type=int, default=1)

    p = command("predict", cmd_predict, "predict a colour per category")
    p.add_argument("--method", required=True,
                   help="cooc | cooc-polarity | wordnet[:<measure>] | baseline:<random|corpus|gold>")
    p.add_argument("--thesaurus", required=True)
    p.add_argument("--categories", help="gold-format TSV restricting the categories to predict")
    p.add_argument("--table")
    p.add_argument("--polarity-lexicon")
    p.add_argument("--wordnet")
    p.add_argument("--ic")
    p.add_argument("--measure", choices=MEASURES, default="vector")
    p.add_argument("--aggregate", choices=("max", "sum"), default="max")
    p.add_argument("--ranking")
    p.add_argument("--gold")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fallback", help="method used where the main method abstains")

    p = command("evaluate", cmd_evaluate, "accuracy of predictions against a gold standard")
    p.add_argument("--predictions", nargs="+", required=True)
    p.add_argument("--gold", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(format="%(levelname)s: %(message)s", level=logging.INFO if args.verbose else logging.WARNING)
    try:
        args.func(args)
    except InvariantViolation as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ColourLexError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
