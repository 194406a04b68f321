import numpy as np
import pytest
from sklearn.base import clone

from colourlex.annotate import Assignment
from colourlex.core import Colour, ThesaurusCategory, WordSense
from colourlex.corpus import ColourRanking, CoocTable
from colourlex.estimators import (
    CooccurrenceColourClassifier,
    CorpusFrequencyClassifier,
    LexiconAggregator,
    MostFrequentColourClassifier,
    RandomColourClassifier,
    WordNetColourClassifier,
)
from colourlex.signatures import POLARITIES, LabelLexicon


def table():
    row = [0] * 11
    row[Colour.WHITE.bk_rank - 1] = 6
    row[Colour.BLACK.bk_rank - 1] = 4
    return CoocTable({"night": row})


CATS = [ThesaurusCategory("1", "night", ("night",)), ThesaurusCategory("2", "zzz", ("zzz",))]


def test_cooc_classifier():
    clf = CooccurrenceColourClassifier(table()).fit(CATS)
    assert list(clf.predict(CATS)) == ["white", "ABSTAIN"]
    lex = LabelLexicon({"night": {"negative"}}, frozenset(POLARITIES), False)
    clf = CooccurrenceColourClassifier(table(), polarity_lexicon=lex).fit(CATS)
    assert list(clf.predict(CATS)) == ["black", "ABSTAIN"]
    assert clf.score(CATS, ["black", "red"]) == 0.5


def test_plain_member_lists():
    clf = CooccurrenceColourClassifier(table()).fit([["night"]])
    assert clf.predict([["night"], ["day"]]).tolist() == ["white", "ABSTAIN"]


def test_params_and_clone():
    clf = WordNetColourClassifier(measure="lesk", aggregate="sum")
    assert clf.get_params()["measure"] == "lesk"
    c2 = clone(clf).set_params(measure="vector")
    assert c2.measure == "vector" and clf.measure == "lesk"
    agg = LexiconAggregator(min_valid=4, random_state=7)
    assert clone(agg).get_params() == agg.get_params()


def test_wordnet_classifier(mini_wordnet, mini_ic):
    clf = WordNetColourClassifier(mini_wordnet, "lin", mini_ic).fit(CATS)
    preds = clf.predict([ThesaurusCategory("i", "inflammation", ("inflammation",))])
    assert preds.tolist() == ["red"]


def test_missing_inputs():
    with pytest.raises(ValueError):
        CooccurrenceColourClassifier().fit(CATS)
    with pytest.raises(ValueError):
        MostFrequentColourClassifier().fit(CATS)
    with pytest.raises(ValueError):
        CooccurrenceColourClassifier(table()).fit(CATS, ["red"])
    with pytest.raises(Exception):
        RandomColourClassifier().predict(CATS)


def test_baselines():
    y = ["red", "red", "blue"]
    cats = [ThesaurusCategory(str(i), "x", ("x",)) for i in range(3)]
    mf = MostFrequentColourClassifier().fit(cats, y)
    assert mf.colour_ is Colour.RED
    assert mf.score(cats, y) == pytest.approx(2 / 3)
    r = RandomColourClassifier(random_state=3).fit(cats)
    assert np.array_equal(r.predict(cats), RandomColourClassifier(random_state=3).fit(cats).predict(cats))
    ranking = ColourRanking.from_frequencies({Colour.BLACK: 2})
    assert CorpusFrequencyClassifier(ranking).fit(cats).predict(cats).tolist() == ["black"] * 3


def test_lexicon_aggregator():
    sense = WordSense("w", "c")
    key = {sense: "wq"}
    rows = [Assignment(f"a{i}", sense, "wq", Colour.RED) for i in range(3)]
    rows.append(Assignment("bad", sense, "nope", Colour.BLUE))
    agg = LexiconAggregator(answer_key=key)
    entries = agg.fit_transform(rows)
    assert len(entries) == 1 and entries[0].majority is Colour.RED
    assert agg.report_.n_wrong_q1 == 1
    assert agg.transform(rows[:2]) == []
