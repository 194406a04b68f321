"""Category-level colour association, gold-standard extraction and imageability."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import Colour, LexiconEntry, ThesaurusCategory, WordSense, argmax_colour, index_lexicon
from .errors import DegenerateInput, InputError

MIN_MEMBERS = 4
GOLD_THRESHOLD = 0.5
IMAGEABILITY_RANGE = (100, 700)


@dataclass(frozen=True)
class CategoryColourScore:
    category_id: str
    best_colour: Colour
    strength: Fraction
    n_annotated: int


@dataclass(frozen=True)
class GoldStandard:
    entries: dict[str, Colour]
    threshold: float = GOLD_THRESHOLD
    scores: dict[str, CategoryColourScore] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def modal_colour(self) -> Colour | None:
        return argmax_colour(Counter(self.entries.values()))


class ImageabilityTable(dict):
    """term -> imageability rating, validated to lie in [100, 700]."""

    def __init__(self, ratings: Mapping[str, float] = ()):
        super().__init__()
        for term, rating in dict(ratings).items():
            self[term] = rating

    def __setitem__(self, term: str, rating: float) -> None:
        lo, hi = IMAGEABILITY_RANGE
        if not lo <= rating <= hi:
            raise InputError(f"imageability of {term!r} out of range [{lo}, {hi}]: {rating}")
        super().__setitem__(term.lower(), rating)


def _annotated_members(cat: ThesaurusCategory, index: Mapping[WordSense, LexiconEntry]):
    """Lexicon entries for this category's senses (other senses of the spelling are ignored)."""
    out = []
    for member in cat.members:
        entry = index.get(WordSense(member, cat.category_id))
        if entry is not None:
            out.append(entry)
    return out


def _as_index(lexicon) -> Mapping[WordSense, LexiconEntry]:
    return lexicon if isinstance(lexicon, Mapping) else index_lexicon(lexicon)


def category_colour_strength(
    cat: ThesaurusCategory,
    lexicon: Iterable[LexiconEntry] | Mapping[WordSense, LexiconEntry],
    min_members: int = MIN_MEMBERS,
) -> CategoryColourScore | None:
    """Most common majority colour among a category's annotated members and its share.

    Returns None (ineligible) when fewer than ``min_members`` members are annotated.
    Colour ties go to the lower B&K rank.
    """
    entries = _annotated_members(cat, _as_index(lexicon))
    if len(entries) < min_members or not entries:
        return None
    tally = Counter(e.majority for e in entries)
    best = argmax_colour(tally)
    return CategoryColourScore(cat.category_id, best, Fraction(tally[best], len(entries)), len(entries))


def score_categories(categories, lexicon, min_members: int = MIN_MEMBERS) -> dict[str, CategoryColourScore]:
    index = _as_index(lexicon)
    scores = {}
    for cat in categories:
        score = category_colour_strength(cat, index, min_members)
        if score is not None:
            scores[cat.category_id] = score
    return scores


def extract_gold_standard(
    categories: Iterable[ThesaurusCategory],
    lexicon,
    threshold: float = GOLD_THRESHOLD,
    min_members: int = MIN_MEMBERS,
) -> GoldStandard:
    if not 0 < threshold <= 1:
        raise InputError(f"gold threshold must lie in (0, 1], got {threshold}")
    scores = score_categories(categories, lexicon, min_members)
    kept = {cid: s for cid, s in scores.items() if s.strength >= Fraction(threshold).limit_denominator(10**9)}
    return GoldStandard({cid: s.best_colour for cid, s in kept.items()}, threshold, kept)


def category_imageability(cat: ThesaurusCategory, ratings: Mapping[str, float], lexicon) -> float | None:
    """Mean rating of members that are both rated and annotated; None if there are none."""
    rated = [ratings[e.term] for e in _annotated_members(cat, _as_index(lexicon)) if e.term in ratings]
    if not rated:
        return None
    return sum(rated) / len(rated)


@dataclass(frozen=True)
class ScatterRow:
    category_id: str
    imageability: float
    strength: float


def imageability_scatter(categories, ratings, lexicon, min_members: int = MIN_MEMBERS) -> list[ScatterRow]:
    """(imageability, strength) for every category where both are defined."""
    index = _as_index(lexicon)
    rows = []
    for cat in categories:
        score = category_colour_strength(cat, index, min_members)
        if score is None:
            continue
        image = category_imageability(cat, ratings, index)
        if image is None:
            continue
        rows.append(ScatterRow(cat.category_id, image, float(score.strength)))
    return rows


def _check_pair(xs: Sequence[float], ys: Sequence[float]) -> None:
    if len(xs) != len(ys):
        raise DegenerateInput(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise DegenerateInput("correlation needs at least two observations")


def pearson_correlation(xs: Sequence[float], ys: Sequence[float]) -> float:
    _check_pair(xs, ys)
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0 or syy == 0:
        raise DegenerateInput("correlation undefined for a constant list")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks, ascending; tied values share the mean of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def spearman_correlation(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of the average-rank vectors."""
    _check_pair(xs, ys)
    return pearson_correlation(average_ranks(xs), average_ranks(ys))
