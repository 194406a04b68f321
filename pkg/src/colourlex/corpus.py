"""N-gram ingestion, colour frequency rankings and co-occurrence based prediction."""

from __future__ import annotations

import glob
import gzip
import io
import logging
import os
import random
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .categories import GoldStandard, spearman_correlation
from .core import (
    COLOURS,
    N_COLOURS,
    Colour,
    ColourCounts,
    Polarity,
    ThesaurusCategory,
    argmax_colour,
    as_colour,
    normalize_colour_token,
    polarity_colour_set,
    stable_hash,
)
from .errors import FormatError, InputError, MissingAuxiliary, MissingPrediction
from .signatures import LabelLexicon

log = logging.getLogger(__name__)

WINDOW = 4
MAX_ORDER = 5
FORMAT_SAMPLE = 1000

_COLOUR_INDEX = {c.value: c.bk_rank - 1 for c in COLOURS}
_WORD_RE = re.compile(r"[^\W_]+")


class NgramRecord(NamedTuple):
    tokens: tuple[str, ...]
    count: int


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumerics, normalise colour spelling variants."""
    return [normalize_colour_token(t) for t in _WORD_RE.findall(text.lower())]


def expand_paths(patterns: str | os.PathLike | Iterable) -> list[str]:
    """Files named by paths, directories or glob patterns, sorted and de-duplicated."""
    if isinstance(patterns, (str, os.PathLike)):
        patterns = [patterns]
    out: list[str] = []
    for pattern in patterns:
        pattern = os.fspath(pattern)
        if os.path.isdir(pattern):
            matches = [os.path.join(pattern, f) for f in os.listdir(pattern)]
            matches = [m for m in matches if os.path.isfile(m)]
        elif os.path.exists(pattern):
            matches = [pattern]
        else:
            matches = glob.glob(pattern)
            if not matches:
                raise FileNotFoundError(pattern)
        out.extend(sorted(matches))
    return list(dict.fromkeys(out))


def open_text(path: str) -> io.TextIOBase:
    if path.endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


@dataclass
class IngestStats:
    lines: int = 0
    records: int = 0
    malformed: int = 0
    below_min_count: int = 0


def parse_ngram_line(line: str, n: int | None = None) -> NgramRecord | None:
    """Parse ``tokens<TAB>count`` (or Google's ``tokens<TAB>year<TAB>count<TAB>volumes``).

    Returns None for malformed lines.
    """
    fields = line.rstrip("\r\n").split("\t")
    if len(fields) == 2:
        ngram, count = fields
    elif len(fields) == 4:
        ngram, count = fields[0], fields[2]
    else:
        return None
    tokens = tuple(normalize_colour_token(t) for t in ngram.split())
    if not tokens or len(tokens) > MAX_ORDER or (n is not None and len(tokens) != n):
        return None
    try:
        count = int(count)
    except ValueError:
        return None
    if count < 1:
        return None
    return NgramRecord(tokens, count)


def iter_ngram_lines(lines: Iterable[str], n: int | None = None, min_count: int = 0, stats: IngestStats | None = None,
                     source: str = "<stream>", guard: bool = True) -> Iterator[NgramRecord]:
    stats = stats if stats is not None else IngestStats()
    checked = not guard
    for line in lines:
        if not line.strip():
            continue
        stats.lines += 1
        rec = parse_ngram_line(line, n)
        if rec is None:
            stats.malformed += 1
        elif rec.count < min_count:
            stats.below_min_count += 1
        else:
            stats.records += 1
            yield rec
        if not checked and stats.lines >= FORMAT_SAMPLE:
            checked = True
            _format_guard(stats, source)
    if not checked:
        _format_guard(stats, source)


def _format_guard(stats: IngestStats, source: str) -> None:
    if stats.lines and stats.malformed * 2 > stats.lines:
        raise FormatError(f"{source}: {stats.malformed} of {stats.lines} sampled lines malformed; wrong file?")


def load_ngrams(path, n: int | None = None, min_count: int = 0, stats: IngestStats | None = None) -> Iterator[NgramRecord]:
    """Stream n-gram records from files, directories or globs (plain or gzip).

    Malformed lines are skipped and counted in ``stats``; a file where more than
    half the sampled lines are malformed raises :class:`FormatError`.
    """
    stats = stats if stats is not None else IngestStats()
    for fname in expand_paths(path):
        file_stats = IngestStats()
        with open_text(fname) as fh:
            yield from iter_ngram_lines(fh, n, min_count, file_stats, fname)
        stats.lines += file_stats.lines
        stats.records += file_stats.records
        stats.malformed += file_stats.malformed
        stats.below_min_count += file_stats.below_min_count
        if file_stats.malformed:
            log.warning("%s: skipped %d malformed lines", fname, file_stats.malformed)


@dataclass(frozen=True)
class ColourRanking:
    per_million: dict[Colour, float]
    rank: dict[Colour, int]

    @classmethod
    def from_frequencies(cls, freqs: Mapping[Colour, float]) -> ColourRanking:
        """Rank colours by descending frequency; frequency ties go to the lower B&K rank."""
        ordered = sorted(COLOURS, key=lambda c: (-freqs.get(c, 0), c.bk_rank))
        return cls({c: float(freqs.get(c, 0)) for c in COLOURS}, {c: i for i, c in enumerate(ordered, 1)})

    def rank_vector(self) -> list[int]:
        return [self.rank[c] for c in COLOURS]

    def most_frequent(self) -> Colour:
        return min(COLOURS, key=lambda c: self.rank[c])

    def spearman_vs_bk(self) -> float:
        return spearman_correlation([c.bk_rank for c in COLOURS], self.rank_vector())


def colour_unigram_counts(unigrams: Iterable[NgramRecord]) -> Counter:
    counts: Counter = Counter()
    for rec in unigrams:
        if len(rec.tokens) != 1:
            continue
        colour = as_colour(rec.tokens[0])
        if colour is not None:
            counts[colour] += rec.count
    return counts


def colour_frequency_ranking(unigrams: Iterable[NgramRecord], total_tokens: int) -> ColourRanking:
    if total_tokens <= 0:
        raise InputError("total_tokens must be positive")
    counts = colour_unigram_counts(unigrams)
    return ColourRanking.from_frequencies({c: counts[c] * 1e6 / total_tokens for c in COLOURS})


class CoocTable:
    """Target term -> co-occurrence count with each colour.

    Tables merge by cell-wise addition; the empty table is the identity.
    """

    def __init__(self, rows: Mapping[str, Sequence[int] | ColourCounts] | None = None):
        self._rows: dict[str, list[int]] = {}
        for term, counts in (rows or {}).items():
            values = counts.values if isinstance(counts, ColourCounts) else counts
            if len(values) != N_COLOURS or any(v < 0 for v in values):
                raise InputError(f"bad count row for {term!r}")
            self._rows[term] = list(values)

    def add(self, term: str, colour: Colour | int, weight: int = 1) -> None:
        idx = colour if isinstance(colour, int) else colour.bk_rank - 1
        row = self._rows.get(term)
        if row is None:
            row = self._rows[term] = [0] * N_COLOURS
        row[idx] += weight

    def update(self, other: CoocTable) -> CoocTable:
        for term, values in other._rows.items():
            row = self._rows.setdefault(term, [0] * N_COLOURS)
            for i, v in enumerate(values):
                row[i] += v
        return self

    def merge(self, other: CoocTable) -> CoocTable:
        return CoocTable(self._rows).update(other)

    __add__ = merge

    def row(self, term: str) -> ColourCounts:
        values = self._rows.get(term)
        return ColourCounts(tuple(values)) if values is not None else ColourCounts()

    @property
    def rows(self) -> dict[str, ColourCounts]:
        return {t: ColourCounts(tuple(v)) for t, v in self._rows.items()}

    def terms(self) -> list[str]:
        return sorted(self._rows)

    def _nonzero(self) -> dict[str, tuple[int, ...]]:
        return {t: tuple(v) for t, v in self._rows.items() if any(v)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoocTable):
            return NotImplemented
        return self._nonzero() == other._nonzero()

    def __len__(self) -> int:
        return len(self._rows)

    def __repr__(self) -> str:
        return f"CoocTable({len(self._rows)} rows)"

    def to_tsv_lines(self) -> list[str]:
        return ["\t".join([t, *map(str, self._rows[t])]) for t in sorted(self._nonzero())]

    @classmethod
    def from_tsv_lines(cls, lines: Iterable[str]) -> CoocTable:
        table = cls()
        for lineno, line in enumerate(lines, 1):
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.rstrip("\r\n").split("\t")
            if len(fields) != N_COLOURS + 1:
                raise FormatError(f"co-occurrence line {lineno}: expected {N_COLOURS + 1} fields")
            try:
                values = [int(v) for v in fields[1:]]
            except ValueError:
                raise FormatError(f"co-occurrence line {lineno}: non-integer count") from None
            table.update(cls({fields[0]: values}))
        return table


def count_tokens(tokens: Sequence[str], targets, window: int, table: CoocTable, weight: int = 1) -> None:
    """Add ``weight`` for every (target, colour) token pair at distance 1..window."""
    colour_pos = [(j, _COLOUR_INDEX[t]) for j, t in enumerate(tokens) if t in _COLOUR_INDEX]
    if not colour_pos:
        return
    for i, tok in enumerate(tokens):
        if tok not in targets:
            continue
        for j, cidx in colour_pos:
            if j != i and abs(i - j) <= window:
                table.add(tok, cidx, weight)


def window_cooccurrence(source: Iterable, targets: Iterable[str], window: int = WINDOW, mode: str = "text") -> CoocTable:
    """Count colour terms within ``window`` tokens of each target occurrence.

    ``mode="text"``: ``source`` yields lines of running text (or token lists);
    windows do not span line breaks. ``mode="5gram"``: ``source`` yields
    :class:`NgramRecord` objects and each pair is weighted by the n-gram count.
    """
    if window < 1:
        raise InputError("window must be at least 1")
    targets = frozenset(normalize_colour_token(t) for t in targets)
    if not targets:
        raise InputError("no target terms")
    table = CoocTable()
    if mode == "text":
        for item in source:
            tokens = tokenize(item) if isinstance(item, str) else list(item)
            count_tokens(tokens, targets, window, table)
    elif mode == "5gram":
        for rec in source:
            count_tokens(rec.tokens, targets, window, table, rec.count)
    else:
        raise InputError(f"unknown co-occurrence mode {mode!r}")
    return table


def _count_chunk(args) -> dict[str, list[int]]:
    lines, targets, window, mode, min_count, source = args
    if mode == "5gram":
        stream = iter_ngram_lines(lines, None, min_count, IngestStats(), source, guard=False)
    else:
        stream = lines
    return window_cooccurrence(stream, targets, window, mode)._rows


def _chunks(paths: Sequence[str], size: int):
    for path in paths:
        with open_text(path) as fh:
            chunk = []
            for line in fh:
                chunk.append(line)
                if len(chunk) >= size:
                    yield path, chunk
                    chunk = []
            if chunk:
                yield path, chunk


def build_cooc_table(
    paths,
    targets: Iterable[str],
    mode: str = "text",
    window: int = WINDOW,
    parallel: int = 1,
    min_count: int = 0,
    chunk_lines: int = 20000,
) -> CoocTable:
    """Scan corpus files into a co-occurrence table, optionally across worker processes.

    Input is split into line chunks; each chunk is counted independently and the
    integer tables are summed, so the result does not depend on ``parallel``.
    """
    files = expand_paths(paths)
    targets = frozenset(normalize_colour_token(t) for t in targets)
    if not targets:
        raise InputError("no target terms")
    if mode == "5gram":
        # chunks skip the format guard; check each file's head once instead
        for path in files:
            with open_text(path) as fh:
                head = [line for _, line in zip(range(FORMAT_SAMPLE), fh)]
            for _ in iter_ngram_lines(head, None, 0, IngestStats(), path):
                pass
    jobs = ((lines, targets, window, mode, min_count, path) for path, lines in _chunks(files, chunk_lines))
    table = CoocTable()
    if parallel <= 1:
        for job in jobs:
            table.update(CoocTable(_count_chunk(job)))
    else:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            for rows in pool.map(_count_chunk, jobs):
                table.update(CoocTable(rows))
    return table


@dataclass(frozen=True)
class Prediction:
    category_id: str
    colour: Colour | None
    method: str
    score: float = 0.0

    def __post_init__(self):
        if self.colour is not None and not self.score > 0:
            raise InputError(f"prediction for {self.category_id!r} has non-positive score")

    @property
    def abstained(self) -> bool:
        return self.colour is None


def category_counts(cat: ThesaurusCategory, table: CoocTable) -> ColourCounts:
    total = ColourCounts()
    for member in cat.members:
        total = total + table.row(member)
    return total


def category_colour_conditional(cat: ThesaurusCategory, table: CoocTable) -> dict[Colour, float]:
    """p(colour | category) from summed member counts; empty when nothing co-occurs.

    Only colours with a non-zero count appear in the result.
    """
    counts = category_counts(cat, table)
    if counts.total == 0:
        return {}
    return {c: counts[c] / counts.total for c in COLOURS if counts[c]}


def _predict_from(cat, conditional, method, admissible=None) -> Prediction:
    colour = argmax_colour(conditional, admissible)
    if colour is None:
        return Prediction(cat.category_id, None, method, 0.0)
    return Prediction(cat.category_id, colour, method, conditional[colour])


def predict_by_cooccurrence(cat: ThesaurusCategory, table: CoocTable) -> Prediction:
    return _predict_from(cat, category_colour_conditional(cat, table), "cooc")


def category_polarity(cat: ThesaurusCategory, polarity_lexicon: LabelLexicon) -> Polarity:
    """Negative iff strictly more members are labelled negative than positive."""
    pos = neg = 0
    for member in cat.members:
        labels = polarity_lexicon.labels_for_term(member, cat.category_id)
        pos += "positive" in labels
        neg += "negative" in labels
    return Polarity.NEGATIVE if neg > pos else Polarity.POSITIVE


def predict_by_cooccurrence_with_polarity(cat: ThesaurusCategory, table: CoocTable,
                                          polarity_lexicon: LabelLexicon) -> Prediction:
    admissible = polarity_colour_set(category_polarity(cat, polarity_lexicon))
    return _predict_from(cat, category_colour_conditional(cat, table), "cooc-polarity", admissible)


BASELINES = ("random", "corpus_most_frequent", "gold_most_frequent")


def baseline_predict(kind: str, cat: ThesaurusCategory, *, seed: int | None = None,
                     ranking: ColourRanking | None = None, gold: GoldStandard | None = None) -> Prediction:
    """Unsupervised (random, corpus most frequent) and supervised (gold modal colour) baselines."""
    method = f"baseline:{kind}"
    if kind == "random":
        if seed is None:
            raise MissingAuxiliary("random baseline needs a seed")
        rng = random.Random(stable_hash("random", str(seed), cat.category_id))
        return Prediction(cat.category_id, rng.choice(COLOURS), method, 1 / N_COLOURS)
    if kind == "corpus_most_frequent":
        if ranking is None:
            raise MissingAuxiliary("corpus baseline needs a colour ranking")
        top = ranking.most_frequent()
        return Prediction(cat.category_id, top, method, ranking.per_million[top] or 1.0)
    if kind == "gold_most_frequent":
        if gold is None or not len(gold):
            raise MissingAuxiliary("supervised baseline needs a non-empty gold standard")
        modal = gold.modal_colour()
        share = sum(1 for c in gold.entries.values() if c is modal) / len(gold)
        return Prediction(cat.category_id, modal, method, share)
    raise InputError(f"unknown baseline {kind!r}; expected one of {BASELINES}")


def with_fallback(prediction: Prediction, fallback: Prediction) -> Prediction:
    if not prediction.abstained:
        return prediction
    return Prediction(prediction.category_id, fallback.colour, f"{prediction.method}+{fallback.method}",
                      fallback.score)


@dataclass
class Evaluation:
    accuracy: float
    n_gold: int
    n_correct: int
    n_abstain: int
    per_category: dict[str, bool] = field(default_factory=dict)


def evaluate(predictions: Iterable[Prediction], gold: GoldStandard) -> Evaluation:
    by_cat: dict[str, Prediction] = {}
    for p in predictions:
        if p.category_id in by_cat:
            raise InputError(f"more than one prediction for category {p.category_id!r}")
        by_cat[p.category_id] = p
    if not len(gold):
        raise InputError("empty gold standard")
    missing = [cid for cid in gold.entries if cid not in by_cat]
    if missing:
        raise MissingPrediction(f"no prediction for {len(missing)} gold categories, e.g. {missing[0]!r}")
    hits = {cid: by_cat[cid].colour is colour for cid, colour in gold.entries.items()}
    n_correct = sum(hits.values())
    n_abstain = sum(1 for cid in gold.entries if by_cat[cid].abstained)
    return Evaluation(100.0 * n_correct / len(gold), len(gold), n_correct, n_abstain, hits)


def evaluate_accuracy(predictions: Iterable[Prediction], gold: GoldStandard) -> float:
    """Percentage of gold categories whose predicted colour matches; abstentions count as wrong."""
    return evaluate(predictions, gold).accuracy
