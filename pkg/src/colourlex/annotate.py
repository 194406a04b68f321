"""Questionnaire generation, gold-question filtering and majority-vote aggregation."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from .core import (
    COLOURS,
    Colour,
    ColourCounts,
    LexiconEntry,
    ThesaurusCategory,
    WordSense,
)
from .errors import (
    EmptyInput,
    EmptyLexicon,
    InsufficientDistractors,
    InvariantViolation,
    NoNearSynonym,
    UnknownSense,
)

N_DISTRACTORS = 3

REASON_Q1 = "wrong_q1"
REASON_DUPLICATE = "duplicate"


@dataclass(frozen=True)
class Hit:
    sense: WordSense
    q1_options: tuple[str, ...]
    q1_gold: str
    q2_options: tuple[Colour, ...]

    def question_text(self) -> tuple[str, str]:
        return (
            f"Which word is closest in meaning to {self.sense.term}?",
            f"What colour is associated with {self.sense.term}?",
        )


@dataclass(frozen=True)
class Assignment:
    worker_id: str
    sense: WordSense
    q1_answer: str
    q2_answer: Colour


class Validation(NamedTuple):
    valid: bool
    reason: str | None = None


def near_synonym(sense: WordSense, category: ThesaurusCategory) -> str:
    """First listed member of the category that is not the term itself."""
    for member in category.members:
        if member != sense.term:
            return member
    raise NoNearSynonym(f"category {category.category_id!r} has no member other than {sense.term!r}")


def generate_hit(
    sense: WordSense,
    thesaurus: Mapping[str, ThesaurusCategory],
    distractor_pool: Iterable[str],
    rng_seed: int,
) -> Hit:
    """Build the two-question HIT for one word sense.

    Q1 offers the near-synonym among three distractors drawn from outside the
    sense's category; Q2 lists all eleven colours in random order. Both orders
    depend only on ``rng_seed``.
    """
    try:
        category = thesaurus[sense.category_id]
    except KeyError:
        raise UnknownSense(f"no thesaurus category {sense.category_id!r}") from None
    gold = near_synonym(sense, category)

    outside = sorted({t.lower() for t in distractor_pool} - set(category.members) - {sense.term})
    if len(outside) < N_DISTRACTORS:
        raise InsufficientDistractors(
            f"need {N_DISTRACTORS} distractors outside {category.category_id!r}, have {len(outside)}"
        )

    rng = random.Random(rng_seed)
    options = rng.sample(outside, N_DISTRACTORS) + [gold]
    rng.shuffle(options)
    colours = list(COLOURS)
    rng.shuffle(colours)
    return Hit(sense, tuple(options), gold, tuple(colours))


def validate_assignment(a: Assignment, answer_key: Mapping[WordSense, str]) -> Validation:
    try:
        gold = answer_key[a.sense]
    except KeyError:
        raise UnknownSense(f"{a.sense.term!r} in category {a.sense.category_id!r} is not in the answer key") from None
    if a.q1_answer.strip().lower() == gold.strip().lower():
        return Validation(True)
    return Validation(False, REASON_Q1)


@dataclass
class AggregationReport:
    n_assignments: int = 0
    discarded: list[tuple[Assignment, str]] = field(default_factory=list)
    dropped: list[tuple[WordSense, int]] = field(default_factory=list)
    n_kept: int = 0
    n_valid_kept: int = 0

    def count(self, reason: str) -> int:
        return sum(1 for _, r in self.discarded if r == reason)

    @property
    def n_wrong_q1(self) -> int:
        return self.count(REASON_Q1)

    @property
    def n_duplicates(self) -> int:
        return self.count(REASON_DUPLICATE)

    @property
    def discard_rate(self) -> float:
        """Share of (non-duplicate) assignments rejected by the gold question."""
        considered = self.n_assignments - self.n_duplicates
        return self.n_wrong_q1 / considered if considered else 0.0

    @property
    def mean_valid_per_term(self) -> float:
        return self.n_valid_kept / self.n_kept if self.n_kept else 0.0


def _break_tie(sense: WordSense, tied: list[Colour], seed: int) -> Colour:
    if len(tied) == 1:
        return tied[0]
    return random.Random(sense.stable_seed(seed)).choice(sorted(tied, key=lambda c: c.bk_rank))


def aggregate(
    assignments: Iterable[Assignment],
    answer_key: Mapping[WordSense, str],
    min_valid: int = 3,
    rng_seed: int = 0,
) -> tuple[list[LexiconEntry], AggregationReport]:
    """Combine valid assignments per sense by majority vote.

    A worker's repeated assignments for a sense are discarded after the first.
    Senses with fewer than ``min_valid`` valid votes are dropped. Tied majorities
    are resolved by a uniform pick seeded from ``rng_seed`` and the sense, so the
    result does not depend on how senses are ordered or partitioned.
    """
    if min_valid < 1:
        raise ValueError("min_valid must be at least 1")
    report = AggregationReport()
    by_sense: dict[WordSense, list[Colour]] = {}
    seen: set[tuple[WordSense, str]] = set()
    for a in assignments:
        report.n_assignments += 1
        key = (a.sense, a.worker_id)
        if key in seen:
            report.discarded.append((a, REASON_DUPLICATE))
            continue
        seen.add(key)
        verdict = validate_assignment(a, answer_key)
        by_sense.setdefault(a.sense, [])
        if verdict.valid:
            by_sense[a.sense].append(a.q2_answer)
        else:
            report.discarded.append((a, verdict.reason))

    entries = []
    for sense in sorted(by_sense):
        votes = ColourCounts.from_votes(by_sense[sense])
        if votes.total < min_valid:
            report.dropped.append((sense, votes.total))
            continue
        majority = _break_tie(sense, votes.tied_maxima(), rng_seed)
        entry = LexiconEntry(sense, answer_key[sense].strip().lower(), votes, majority)
        if entry.confidence != Fraction(votes[majority], votes.total):
            raise InvariantViolation(f"{sense}: confidence mismatch")
        entries.append(entry)
        report.n_kept += 1
        report.n_valid_kept += votes.total
    return entries, report


@dataclass(frozen=True)
class AgreementHistogram:
    share: dict[int, float]
    cumulative_ge2: float
    cumulative_ge3: float


def agreement_histogram(entries: Iterable[LexiconEntry]) -> AgreementHistogram:
    """Percentage of entries per majority class size (counted before tie-breaking)."""
    sizes = Counter(e.majority_size for e in entries)
    n = sum(sizes.values())
    if n == 0:
        raise EmptyLexicon("agreement histogram of an empty lexicon")
    largest = max(5, max(sizes))
    share = {k: 100.0 * sizes.get(k, 0) / n for k in range(1, largest + 1)}
    ge2 = 100.0 * sum(v for k, v in sizes.items() if k >= 2) / n
    ge3 = 100.0 * sum(v for k, v in sizes.items() if k >= 3) / n
    return AgreementHistogram(share, ge2, ge3)


def chance_distinct_fraction(n_annotators: int, n_colours: int) -> Fraction:
    if n_annotators < 1 or n_colours < 1:
        raise ValueError("n_annotators and n_colours must be positive")
    p = Fraction(1)
    for i in range(1, n_annotators):
        p *= Fraction(max(n_colours - i, 0), n_colours)
    return p


def chance_distinct_probability(n_annotators: int, n_colours: int) -> float:
    """Probability that independent uniform annotators all pick different colours."""
    return float(chance_distinct_fraction(n_annotators, n_colours))


def colour_distribution(items, mode: str = "voted") -> dict[Colour, float]:
    """Percentage of annotations (``overall``) or majority colours (``voted``) per colour.

    ``overall`` accepts assignments (their Q2 answers) or lexicon entries (their
    full vote vectors); ``voted`` needs lexicon entries.
    """
    if mode not in ("overall", "voted"):
        raise ValueError(f"unknown mode {mode!r}")
    tally = ColourCounts()
    for item in items:
        if isinstance(item, Assignment):
            if mode == "voted":
                raise TypeError("voted distribution needs lexicon entries, not assignments")
            tally = tally + ColourCounts.from_votes([item.q2_answer])
        elif mode == "overall":
            tally = tally + item.votes
        else:
            tally = tally + ColourCounts.from_votes([item.majority])
    if tally.total == 0:
        raise EmptyInput("colour distribution of empty input")
    return {c: 100.0 * tally[c] / tally.total for c in COLOURS}
