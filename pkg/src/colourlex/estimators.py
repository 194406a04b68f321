"""scikit-learn compatible wrappers.

The predictors take a sequence of :class:`ThesaurusCategory` (or plain lists of
member terms) as ``X`` and predict colour names, with ``"ABSTAIN"`` marking
categories without admissible evidence. ``score`` follows the scikit-learn
convention and returns a fraction; :func:`colourlex.corpus.evaluate_accuracy`
gives the percentage form.
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .annotate import aggregate
from .categories import GoldStandard
from .core import COLOURS, Colour, ThesaurusCategory, argmax_colour, parse_colour
from .corpus import (
    ColourRanking,
    CoocTable,
    Prediction,
    baseline_predict,
    predict_by_cooccurrence,
    predict_by_cooccurrence_with_polarity,
)
from .formats import ABSTAIN
from .signatures import LabelLexicon
from .wordnet import Closeness, predict_by_wordnet

COLOUR_NAMES = np.array([c.value for c in COLOURS], dtype=object)


def check_categories(X) -> list[ThesaurusCategory]:
    """Coerce ``X`` to a list of categories.

    Accepts categories, or sequences of member strings (ids become the row index).
    """
    if isinstance(X, ThesaurusCategory) or isinstance(X, str):
        raise TypeError("X must be a sequence of categories, not a single item")
    cats = []
    for i, item in enumerate(X):
        if isinstance(item, ThesaurusCategory):
            cats.append(item)
        elif isinstance(item, (list, tuple, set, frozenset, np.ndarray)):
            members = [str(m) for m in item]
            cats.append(ThesaurusCategory(str(i), members[0] if members else "", tuple(members)))
        else:
            raise TypeError(f"row {i}: expected a ThesaurusCategory or a list of terms, got {type(item).__name__}")
    if not cats:
        raise ValueError("X is empty")
    return cats


def check_colours(y, n: int | None = None) -> list[Colour]:
    colours = [parse_colour(v) for v in y]
    if n is not None and len(colours) != n:
        raise ValueError(f"X has {n} rows but y has {len(colours)}")
    return colours


class _ColourPredictor(ClassifierMixin, BaseEstimator):
    def fit(self, X, y=None):
        cats = check_categories(X)
        if y is not None:
            check_colours(y, len(cats))
        self._validate()
        self.classes_ = COLOUR_NAMES.copy()
        self.n_categories_seen_ = len(cats)
        return self

    def _validate(self):
        pass

    def _predict_one(self, cat: ThesaurusCategory) -> Prediction:
        raise NotImplementedError

    def predict_detailed(self, X) -> list[Prediction]:
        check_is_fitted(self, "classes_")
        return [self._predict_one(cat) for cat in check_categories(X)]

    def predict(self, X) -> np.ndarray:
        preds = self.predict_detailed(X)
        return np.array([ABSTAIN if p.colour is None else p.colour.value for p in preds], dtype=object)


class CooccurrenceColourClassifier(_ColourPredictor):
    """Pick the colour with the highest p(colour | category) from a co-occurrence table.

    With ``polarity_lexicon`` set, the choice is restricted to the colour set
    matching the category's polarity.
    """

    def __init__(self, table: CoocTable | None = None, polarity_lexicon: LabelLexicon | None = None):
        self.table = table
        self.polarity_lexicon = polarity_lexicon

    def _validate(self):
        if self.table is None:
            raise ValueError("a co-occurrence table is required")

    def _predict_one(self, cat):
        if self.polarity_lexicon is None:
            return predict_by_cooccurrence(cat, self.table)
        return predict_by_cooccurrence_with_polarity(cat, self.table, self.polarity_lexicon)


class WordNetColourClassifier(_ColourPredictor):
    def __init__(self, wordnet=None, measure: str = "vector", information_content=None, aggregate: str = "max"):
        self.wordnet = wordnet
        self.measure = measure
        self.information_content = information_content
        self.aggregate = aggregate

    def _validate(self):
        if self.wordnet is None:
            raise ValueError("a WordNet database is required")
        self.closeness_ = Closeness(self.wordnet, self.measure, self.information_content, self.aggregate)

    def _predict_one(self, cat):
        return predict_by_wordnet(cat, self.wordnet, self.measure, closeness=self.closeness_)


class RandomColourClassifier(_ColourPredictor):
    def __init__(self, random_state: int = 0):
        self.random_state = random_state

    def _predict_one(self, cat):
        return baseline_predict("random", cat, seed=self.random_state)


class CorpusFrequencyClassifier(_ColourPredictor):
    """Always predicts the most frequent colour term of a corpus ranking."""

    def __init__(self, ranking: ColourRanking | None = None):
        self.ranking = ranking

    def _validate(self):
        if self.ranking is None:
            raise ValueError("a colour ranking is required")

    def _predict_one(self, cat):
        return baseline_predict("corpus_most_frequent", cat, ranking=self.ranking)


class MostFrequentColourClassifier(_ColourPredictor):
    """Supervised baseline: the modal colour of the training targets."""

    def fit(self, X, y=None):
        if y is None:
            raise ValueError("MostFrequentColourClassifier needs target colours")
        cats = check_categories(X)
        colours = check_colours(y, len(cats))
        super().fit(cats)
        self.gold_ = GoldStandard({c.category_id: col for c, col in zip(cats, colours)})
        self.colour_ = argmax_colour(Counter(colours))
        return self

    def _predict_one(self, cat):
        return baseline_predict("gold_most_frequent", cat, gold=self.gold_)


class LexiconAggregator(TransformerMixin, BaseEstimator):
    """Majority-vote aggregation of crowdsourced assignments into lexicon entries.

    ``fit`` aggregates and stores ``entries_`` and ``report_``; ``transform``
    re-aggregates any assignment list with the fitted settings.
    """

    def __init__(self, answer_key=None, min_valid: int = 3, random_state: int = 0):
        self.answer_key = answer_key
        self.min_valid = min_valid
        self.random_state = random_state

    def fit(self, X: Sequence, y=None):
        if self.answer_key is None:
            raise ValueError("an answer key is required")
        self.entries_, self.report_ = aggregate(X, self.answer_key, self.min_valid, self.random_state)
        return self

    def transform(self, X: Sequence):
        check_is_fitted(self, "entries_")
        return aggregate(X, self.answer_key, self.min_valid, self.random_state)[0]

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X, y).entries_
