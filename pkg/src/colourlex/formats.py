"""Readers and writers for the toolkit's TSV and JSON-lines formats.

Every reader skips blank lines and ``#`` comment lines, so files written by
this package (which open with a provenance comment) can be read back directly.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Iterator, TextIO

from . import __version__
from .annotate import Assignment, Hit
from .categories import CategoryColourScore, GoldStandard, ImageabilityTable, ScatterRow
from .core import COLOURS, ColourCounts, LexiconEntry, ThesaurusCategory, WordSense, parse_colour
from .corpus import ColourRanking, CoocTable, Prediction
from .errors import FormatError, InputError
from .signatures import LabelLexicon, SignatureMatrix

ABSTAIN = "ABSTAIN"


def header_line(config: dict) -> str:
    return f"# colourlex {__version__} {json.dumps(config, sort_keys=True, default=str)}\n"


def iter_rows(path: str, min_fields: int, header_first: str | None = None) -> Iterator[tuple[int, list[str]]]:
    with open(path, encoding="utf-8") as fh:
        first = True
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.rstrip("\r\n").split("\t")
            if first and header_first is not None and fields[0].strip().lower() == header_first:
                first = False
                continue
            first = False
            if len(fields) < min_fields:
                raise FormatError(f"{path}:{lineno}: expected at least {min_fields} tab-separated fields")
            yield lineno, [f.strip() for f in fields]


def _int(value: str, path: str, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise FormatError(f"{path}:{lineno}: expected an integer, got {value!r}") from None


def _colour(value: str, path: str, lineno: int):
    try:
        return parse_colour(value)
    except InputError as exc:
        raise FormatError(f"{path}:{lineno}: {exc}") from None


# thesaurus
def read_thesaurus(path: str) -> dict[str, ThesaurusCategory]:
    """``category_id<TAB>head<TAB>member,member,...``"""
    cats: dict[str, ThesaurusCategory] = {}
    for lineno, (cid, head, members, *_) in iter_rows(path, 3, "category_id"):
        if cid in cats:
            raise FormatError(f"{path}:{lineno}: duplicate category {cid!r}")
        cats[cid] = ThesaurusCategory(cid, head, tuple(m for m in members.split(",")))
    return cats


# annotation files
def read_assignments(path: str) -> list[Assignment]:
    out = []
    for lineno, (worker, term, cid, q1, q2, *_) in iter_rows(path, 5, "worker_id"):
        out.append(Assignment(worker, WordSense(term, cid), q1, _colour(q2, path, lineno)))
    return out


def write_assignments(assignments: Iterable[Assignment], fh: TextIO) -> None:
    for a in assignments:
        fh.write(f"{a.worker_id}\t{a.sense.term}\t{a.sense.category_id}\t{a.q1_answer}\t{a.q2_answer.value}\n")


def read_answer_key(path: str) -> dict[WordSense, str]:
    return {WordSense(term, cid): gold.lower() for _, (term, cid, gold, *_) in iter_rows(path, 3, "term")}


def write_answer_key(hits: Iterable[Hit], fh: TextIO) -> None:
    for hit in hits:
        fh.write(f"{hit.sense.term}\t{hit.sense.category_id}\t{hit.q1_gold}\n")


def write_hits(hits: Iterable[Hit], fh: TextIO) -> None:
    fh.write("#term\tcategory_id\tq1_options\tq1_gold\tq2_options\n")
    for hit in hits:
        fh.write("\t".join([
            hit.sense.term, hit.sense.category_id, ",".join(hit.q1_options), hit.q1_gold,
            ",".join(c.value for c in hit.q2_options),
        ]) + "\n")


# lexicon
def entry_to_json(entry: LexiconEntry) -> str:
    obj = {
        "term": entry.term,
        "category_id": entry.category_id,
        "near_synonym": entry.near_synonym,
        "votes": {c.value: entry.votes[c] for c in COLOURS},
        "majority": entry.majority.value,
        "confidence": round(float(entry.confidence), 6),
    }
    return json.dumps(obj)


def write_lexicon(entries: Iterable[LexiconEntry], fh: TextIO) -> None:
    for entry in entries:
        fh.write(entry_to_json(entry) + "\n")


def read_lexicon(path: str) -> list[LexiconEntry]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("#"):
                continue
            try:
                obj = json.loads(line)
                votes = ColourCounts.from_mapping({parse_colour(k): int(v) for k, v in obj["votes"].items()})
                entry = LexiconEntry(WordSense(obj["term"], str(obj["category_id"])), obj["near_synonym"],
                                     votes, parse_colour(obj["majority"]))
            except (ValueError, KeyError, TypeError) as exc:
                raise FormatError(f"{path}:{lineno}: bad lexicon entry ({exc})") from None
            entries.append(entry)
    return entries


# categories
def read_imageability(path: str) -> ImageabilityTable:
    table = ImageabilityTable()
    for lineno, (term, rating, *_) in iter_rows(path, 2, "term"):
        try:
            table[term] = float(rating)
        except ValueError:
            raise FormatError(f"{path}:{lineno}: bad rating {rating!r}") from None
    return table


def write_gold(gold: GoldStandard, thesaurus: dict[str, ThesaurusCategory], fh: TextIO) -> None:
    fh.write("#category_id\thead\tcolour\tstrength\tn_annotated\n")
    for cid in sorted(gold.entries):
        s = gold.scores[cid]
        fh.write(f"{cid}\t{thesaurus[cid].head}\t{s.best_colour.value}\t{float(s.strength):.6f}\t{s.n_annotated}\n")


def write_scores(scores: dict[str, CategoryColourScore], thesaurus, fh: TextIO) -> None:
    fh.write("#category_id\thead\tcolour\tstrength\tn_annotated\n")
    for cid in sorted(scores):
        s = scores[cid]
        fh.write(f"{cid}\t{thesaurus[cid].head}\t{s.best_colour.value}\t{float(s.strength):.6f}\t{s.n_annotated}\n")


def read_gold(path: str, threshold: float = 0.5) -> GoldStandard:
    entries, scores = {}, {}
    for lineno, fields in iter_rows(path, 3, "category_id"):
        cid, colour = fields[0], _colour(fields[2], path, lineno)
        entries[cid] = colour
        if len(fields) >= 5:
            n = _int(fields[4], path, lineno)
            strength = Fraction(fields[3]).limit_denominator(max(n, 1))
            scores[cid] = CategoryColourScore(cid, colour, strength, n)
    return GoldStandard(entries, threshold, scores)


def write_scatter(rows: Iterable[ScatterRow], fh: TextIO) -> None:
    fh.write("#category_id\timageability\tstrength\n")
    for r in rows:
        fh.write(f"{r.category_id}\t{r.imageability:.4f}\t{r.strength:.6f}\n")


# signatures
def read_label_lexicon(path: str, inventory: Iterable[str] | None = None) -> LabelLexicon:
    """NRC-style ``term<TAB>label<TAB>flag`` rows, or ``term<TAB>category_id<TAB>label<TAB>flag``
    for a sense-level lexicon. Rows with flag 0 are ignored."""
    rows = list(iter_rows(path, 3))
    widths = {len(f) for _, f in rows}
    if len(widths) > 1:
        raise FormatError(f"{path}: mixed term-level and sense-level rows")
    sense_level = widths == {4}
    assoc: dict = {}
    seen_labels = set()
    for lineno, fields in rows:
        if sense_level:
            term, cid, label, flag = fields
            key = WordSense(term, cid)
        else:
            term, label, flag = fields[:3]
            key = term.lower()
        label = label.lower()
        seen_labels.add(label)
        if _int(flag, path, lineno):
            assoc.setdefault(key, set()).add(label)
    inv = frozenset(inventory) if inventory is not None else frozenset(seen_labels)
    return LabelLexicon(assoc, inv, sense_level)


def write_signature(matrix: SignatureMatrix, fh: TextIO) -> None:
    fh.write("#label\t" + "\t".join(c.value for c in COLOURS) + "\tsupport\n")
    for label, row in matrix.rows.items():
        cells = "\t".join(f"{row[c]:.1f}" for c in COLOURS)
        fh.write(f"{label}\t{cells}\t{matrix.support[label]}\n")


# corpus
def write_ranking(ranking: ColourRanking, fh: TextIO) -> None:
    fh.write("#colour\tbk_rank\tper_million\trank\n")
    for c in COLOURS:
        fh.write(f"{c.value}\t{c.bk_rank}\t{ranking.per_million[c]:.4f}\t{ranking.rank[c]}\n")


def read_ranking(path: str) -> ColourRanking:
    """Reads ranking TSV (``colour, bk_rank, per_million[, rank]``) or plain ``colour, per_million``."""
    freqs = {}
    for lineno, fields in iter_rows(path, 2, "colour"):
        value = fields[2] if len(fields) >= 3 else fields[1]
        try:
            freqs[_colour(fields[0], path, lineno)] = float(value)
        except ValueError:
            raise FormatError(f"{path}:{lineno}: bad frequency {value!r}") from None
    if len(freqs) != len(COLOURS):
        raise FormatError(f"{path}: expected a frequency for each of the {len(COLOURS)} colours")
    return ColourRanking.from_frequencies(freqs)


def write_cooc(table: CoocTable, fh: TextIO) -> None:
    fh.write("#term\t" + "\t".join(c.value for c in COLOURS) + "\n")
    for line in table.to_tsv_lines():
        fh.write(line + "\n")


def read_cooc(path: str) -> CoocTable:
    with open(path, encoding="utf-8") as fh:
        return CoocTable.from_tsv_lines(fh)


def write_predictions(predictions: Iterable[Prediction], fh: TextIO) -> None:
    fh.write("#category_id\tmethod\tcolour\tscore\n")
    for p in predictions:
        colour = ABSTAIN if p.colour is None else p.colour.value
        fh.write(f"{p.category_id}\t{p.method}\t{colour}\t{p.score:.6g}\n")


def read_predictions(path: str) -> list[Prediction]:
    out = []
    for lineno, (cid, method, colour, score, *_) in iter_rows(path, 4, "category_id"):
        try:
            value = float(score)
        except ValueError:
            raise FormatError(f"{path}:{lineno}: bad score {score!r}") from None
        col = None if colour.upper() == ABSTAIN else _colour(colour, path, lineno)
        out.append(Prediction(cid, col, method, value))
    return out
