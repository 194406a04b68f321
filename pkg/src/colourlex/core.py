"""Colour model and the lexicon/thesaurus value types shared across modules."""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InputError, InvariantViolation


class Colour(enum.Enum):
    """The eleven basic colour terms, declared in Berlin & Kay order."""

    WHITE = "white"
    BLACK = "black"
    RED = "red"
    GREEN = "green"
    YELLOW = "yellow"
    BLUE = "blue"
    BROWN = "brown"
    PINK = "pink"
    PURPLE = "purple"
    ORANGE = "orange"
    GREY = "grey"

    @property
    def bk_rank(self) -> int:
        return _BK_RANK[self]

    def __str__(self) -> str:
        return self.value


_BK_RANK = {c: i for i, c in enumerate(Colour, start=1)}
COLOURS: tuple[Colour, ...] = tuple(Colour)
N_COLOURS = len(COLOURS)

# spelling variants accepted on input
_ALIASES = {"gray": "grey"}


def colour_order() -> list[Colour]:
    """All colours sorted by B&K rank (white first, grey last)."""
    return sorted(COLOURS, key=lambda c: c.bk_rank)


def normalize_colour_token(token: str) -> str:
    """Lowercase ``token`` and map spelling variants ("gray" -> "grey")."""
    token = token.lower()
    return _ALIASES.get(token, token)


_BY_NAME = {c.value: c for c in COLOURS}


def as_colour(token: str | Colour) -> Colour | None:
    """Return the colour named by ``token``, or None if it names none."""
    if isinstance(token, Colour):
        return token
    return _BY_NAME.get(normalize_colour_token(token.strip()))


def parse_colour(token: str | Colour) -> Colour:
    colour = as_colour(token)
    if colour is None:
        raise InputError(f"not a basic colour term: {token!r}")
    return colour


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    def __str__(self) -> str:
        return self.value


POSITIVE_COLOURS = frozenset(
    {Colour.WHITE, Colour.GREEN, Colour.YELLOW, Colour.BLUE, Colour.PINK, Colour.ORANGE}
)
NEGATIVE_COLOURS = frozenset({Colour.BLACK, Colour.RED, Colour.BROWN, Colour.GREY})


def polarity_colour_set(polarity: Polarity) -> frozenset[Colour]:
    """Colours admissible for a category of the given polarity.

    Purple belongs to neither set and is never selected under polarity filtering.
    """
    return POSITIVE_COLOURS if polarity is Polarity.POSITIVE else NEGATIVE_COLOURS


def argmax_colour(scores: Mapping[Colour, float], admissible: Iterable[Colour] | None = None):
    """Colour with the highest score; ties go to the lower B&K rank.

    Returns None when no admissible colour has a positive score.
    """
    pool = COLOURS if admissible is None else admissible
    best = None
    for colour in sorted(pool, key=lambda c: c.bk_rank):
        value = scores.get(colour, 0)
        if value > 0 and (best is None or value > scores[best]):
            best = colour
    return best


@dataclass(frozen=True)
class ColourCounts:
    """Non-negative integer count per colour, stored in B&K order."""

    values: tuple[int, ...] = (0,) * N_COLOURS

    def __post_init__(self):
        if len(self.values) != N_COLOURS:
            raise InputError(f"expected {N_COLOURS} counts, got {len(self.values)}")
        if any(v < 0 for v in self.values):
            raise InputError("colour counts must be non-negative")

    @classmethod
    def from_mapping(cls, counts: Mapping[Colour, int]) -> ColourCounts:
        return cls(tuple(int(counts.get(c, 0)) for c in COLOURS))

    @classmethod
    def from_votes(cls, votes: Iterable[Colour]) -> ColourCounts:
        tally = [0] * N_COLOURS
        for colour in votes:
            tally[colour.bk_rank - 1] += 1
        return cls(tuple(tally))

    @property
    def counts(self) -> dict[Colour, int]:
        return dict(zip(COLOURS, self.values))

    @property
    def total(self) -> int:
        return sum(self.values)

    def __getitem__(self, colour: Colour) -> int:
        return self.values[colour.bk_rank - 1]

    def __add__(self, other: ColourCounts) -> ColourCounts:
        return ColourCounts(tuple(a + b for a, b in zip(self.values, other.values)))

    def max_count(self) -> int:
        return max(self.values)

    def tied_maxima(self) -> list[Colour]:
        top = self.max_count()
        return [c for c, v in zip(COLOURS, self.values) if v == top]


@dataclass(frozen=True, order=True)
class WordSense:
    """A term as listed under one thesaurus category."""

    term: str
    category_id: str

    def __post_init__(self):
        if not self.term:
            raise InputError("empty term")
        object.__setattr__(self, "term", self.term.lower())

    def stable_seed(self, seed: int) -> int:
        """Seed derived from ``seed`` and this sense, stable across processes."""
        return stable_hash(str(seed), self.term, self.category_id)


def stable_hash(*parts: str) -> int:
    digest = hashlib.blake2b("\x1f".join(parts).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class LexiconEntry:
    sense: WordSense
    near_synonym: str
    votes: ColourCounts
    majority: Colour
    confidence: Fraction = field(init=False)

    def __post_init__(self):
        if self.votes.total < 1:
            raise InvariantViolation(f"{self.sense}: entry without votes")
        if self.votes[self.majority] != self.votes.max_count():
            raise InvariantViolation(f"{self.sense}: majority {self.majority} is not a maximal count")
        object.__setattr__(self, "confidence", Fraction(self.votes[self.majority], self.votes.total))

    @property
    def term(self) -> str:
        return self.sense.term

    @property
    def category_id(self) -> str:
        return self.sense.category_id

    @property
    def majority_size(self) -> int:
        """Votes for the most-chosen colour, independent of tie-breaking."""
        return self.votes.max_count()


@dataclass(frozen=True)
class ThesaurusCategory:
    """A head word and its member terms.

    Members keep their listed order (duplicates dropped); the first listed
    member other than a target term serves as that term's near-synonym.
    """

    category_id: str
    head: str
    members: tuple[str, ...]

    def __post_init__(self):
        seen = dict.fromkeys(m.strip().lower() for m in self.members if m.strip())
        if not seen:
            raise InputError(f"category {self.category_id!r} has no members")
        object.__setattr__(self, "members", tuple(seen))

    def __contains__(self, term: str) -> bool:
        return term.lower() in self.members

    def senses(self) -> list[WordSense]:
        return [WordSense(m, self.category_id) for m in self.members]


def index_lexicon(lexicon: Iterable[LexiconEntry]) -> dict[WordSense, LexiconEntry]:
    return {entry.sense: entry for entry in lexicon}
