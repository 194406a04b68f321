"""Colour signatures of labelled terms (emotions, polarities)."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import COLOURS, Colour, ColourCounts, LexiconEntry, WordSense
from .errors import InputError, NoOverlap, UnknownLabel

EMOTIONS = ("anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust")
POLARITIES = ("negative", "positive")


@dataclass(frozen=True)
class LabelLexicon:
    """Term (or word sense) -> set of labels drawn from ``inventory``.

    Keys are plain lowercase terms, or :class:`WordSense` objects when
    ``sense_level`` is true.
    """

    associations: Mapping
    inventory: frozenset[str]
    sense_level: bool = False

    def __post_init__(self):
        clean = {}
        for key, labels in self.associations.items():
            labels = frozenset(labels)
            stray = labels - self.inventory
            if stray:
                raise InputError(f"labels {sorted(stray)} for {key!r} not in inventory")
            if isinstance(key, WordSense) != self.sense_level:
                raise InputError(f"key {key!r} does not match sense_level={self.sense_level}")
            if labels:
                clean[key if self.sense_level else key.lower()] = labels
        object.__setattr__(self, "associations", clean)
        object.__setattr__(self, "inventory", frozenset(self.inventory))

    def labels_for(self, sense: WordSense) -> frozenset[str]:
        key = sense if self.sense_level else sense.term
        return self.associations.get(key, frozenset())

    def labels_for_term(self, term: str, category_id: str | None = None) -> frozenset[str]:
        if self.sense_level:
            if category_id is None:
                raise InputError("sense-level lexicon lookup needs a category id")
            return self.associations.get(WordSense(term, category_id), frozenset())
        return self.associations.get(term.lower(), frozenset())


@dataclass(frozen=True)
class SignatureMatrix:
    rows: dict[str, dict[Colour, float]]
    support: dict[str, int]

    def labels(self) -> list[str]:
        return list(self.rows)


def association_signature(labels: LabelLexicon, colour_lexicon: Iterable[LexiconEntry]) -> SignatureMatrix:
    """Per-label percentage of labelled terms whose majority colour is each colour.

    A sense-level label lexicon joins on (term, category); a term-level one lets
    every sense of a labelled term contribute one vote.
    """
    tallies: dict[str, list[Colour]] = defaultdict(list)
    for entry in colour_lexicon:
        for label in labels.labels_for(entry.sense):
            tallies[label].append(entry.majority)
    if not tallies:
        raise NoOverlap("no term carries both a label and a colour")

    rows, support = {}, {}
    for label in sorted(tallies):
        counts = ColourCounts.from_votes(tallies[label])
        rows[label] = {c: 100.0 * counts[c] / counts.total for c in COLOURS}
        support[label] = counts.total
    return SignatureMatrix(rows, support)


def top_colours(matrix: SignatureMatrix, label: str, k: int = 2) -> list[tuple[Colour, float]]:
    if label not in matrix.rows:
        raise UnknownLabel(label)
    if k < 1:
        raise ValueError("k must be at least 1")
    row = matrix.rows[label]
    ranked = sorted(COLOURS, key=lambda c: (-row[c], c.bk_rank))
    return [(c, row[c]) for c in ranked[:k]]
