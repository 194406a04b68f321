import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colourlex.annotate import (
    REASON_DUPLICATE,
    REASON_Q1,
    Assignment,
    aggregate,
    agreement_histogram,
    chance_distinct_fraction,
    chance_distinct_probability,
    colour_distribution,
    generate_hit,
    validate_assignment,
)
from colourlex.core import COLOURS, Colour, ThesaurusCategory, WordSense
from colourlex.errors import EmptyInput, EmptyLexicon, InsufficientDistractors, NoNearSynonym, UnknownSense

from conftest import make_entry

SLEEP = WordSense("sleep", "c1")
THESAURUS = {
    "c1": ThesaurusCategory("c1", "sleep", ("sleep", "nap", "doze")),
    "c2": ThesaurusCategory("c2", "alone", ("sleep",)),
}
KEY = {SLEEP: "nap"}


def A(worker, q1, q2, sense=SLEEP):
    return Assignment(worker, sense, q1, Colour(q2))


class TestGenerateHit:
    def test_sample_hit(self):
        hit = generate_hit(SLEEP, THESAURUS, {"car", "tree", "olive"}, rng_seed=11)
        assert sorted(hit.q1_options) == ["car", "nap", "olive", "tree"]
        assert hit.q1_gold == "nap"
        assert sorted(hit.q2_options, key=lambda c: c.bk_rank) == list(COLOURS)
        assert hit.question_text()[0] == "Which word is closest in meaning to sleep?"

    def test_deterministic_for_seed(self):
        pool = {"car", "tree", "olive", "river", "lamp", "shoe"}
        assert generate_hit(SLEEP, THESAURUS, pool, 3) == generate_hit(SLEEP, THESAURUS, pool, 3)

    def test_distractors_exclude_category(self):
        pool = {"nap", "doze", "car", "tree", "olive"}
        hit = generate_hit(SLEEP, THESAURUS, pool, 0)
        assert set(hit.q1_options) - {"nap"} == {"car", "tree", "olive"}

    def test_seed_changes_order(self):
        pool = {f"w{i}" for i in range(30)}
        hits = {generate_hit(SLEEP, THESAURUS, pool, s).q1_options for s in range(20)}
        assert len(hits) > 1

    def test_singleton_category(self):
        with pytest.raises(NoNearSynonym):
            generate_hit(WordSense("sleep", "c2"), THESAURUS, {"car", "tree", "olive"}, 1)

    def test_small_pool(self):
        with pytest.raises(InsufficientDistractors):
            generate_hit(SLEEP, THESAURUS, {"car", "nap", "doze", "tree"}, 1)


class TestValidate:
    def test_correct_answer(self):
        assert validate_assignment(A("w", "Nap", "blue"), KEY).valid

    def test_wrong_answer(self):
        v = validate_assignment(A("w", "olive", "blue"), KEY)
        assert not v.valid and v.reason == REASON_Q1

    def test_unknown_sense(self):
        with pytest.raises(UnknownSense):
            validate_assignment(A("w", "nap", "blue", WordSense("wake", "c9")), KEY)


class TestAggregate:
    def test_clear_majority(self):
        rows = [A(f"w{i}", "nap", c) for i, c in enumerate(["red", "red", "red", "blue", "white"])]
        (entry,), report = aggregate(rows, KEY, rng_seed=0)
        assert entry.majority is Colour.RED
        assert entry.confidence == Fraction(3, 5)
        assert entry.votes.total == 5
        assert entry.near_synonym == "nap"
        assert report.n_kept == 1 and report.mean_valid_per_term == 5

    def test_tie_is_seeded(self):
        rows = [A(f"w{i}", "nap", c) for i, c in enumerate(["red", "red", "blue", "blue"])]
        picks = {aggregate(rows, KEY, rng_seed=s)[0][0].majority for s in range(40)}
        assert picks == {Colour.RED, Colour.BLUE}
        for s in range(5):
            first = aggregate(rows, KEY, rng_seed=s)[0][0]
            assert first.majority == aggregate(rows, KEY, rng_seed=s)[0][0].majority
            assert first.confidence == Fraction(1, 2)

    def test_too_few_valid_dropped(self):
        rows = [A("w1", "nap", "red"), A("w2", "nap", "red"), A("w3", "olive", "red")]
        entries, report = aggregate(rows, KEY, min_valid=3)
        assert entries == []
        assert report.dropped == [(SLEEP, 2)]
        assert report.n_wrong_q1 == 1

    def test_duplicates_keep_first(self):
        rows = [A("w1", "nap", "red"), A("w1", "nap", "blue"), A("w2", "nap", "red"), A("w3", "nap", "green")]
        (entry,), report = aggregate(rows, KEY)
        assert entry.votes[Colour.BLUE] == 0
        assert report.n_duplicates == 1
        assert report.discarded[0][1] == REASON_DUPLICATE
        assert report.discard_rate == 0.0

    def test_discard_rate(self):
        rows = [A(f"w{i}", "nap" if i else "car", "red") for i in range(10)]
        _, report = aggregate(rows, KEY)
        assert report.discard_rate == pytest.approx(0.1)

    def test_order_independent_of_sense_partitioning(self):
        other = WordSense("doze", "c1")
        key = {SLEEP: "nap", other: "nap"}
        rows_a = [A(f"w{i}", "nap", c) for i, c in enumerate(["red", "blue", "green"])]
        rows_b = [A(f"w{i}", "nap", c, other) for i, c in enumerate(["pink", "grey", "black"])]
        together = aggregate(rows_a + rows_b, key, rng_seed=5)[0]
        apart = aggregate(rows_b, key, rng_seed=5)[0] + aggregate(rows_a, key, rng_seed=5)[0]
        assert sorted(together, key=lambda e: e.sense) == sorted(apart, key=lambda e: e.sense)

    def test_min_valid_must_be_positive(self):
        with pytest.raises(ValueError):
            aggregate([], KEY, min_valid=0)


class TestHistogram:
    def test_hand_count(self):
        entries = [
            make_entry("a", "1", "red", "blue", "green"),
            make_entry("b", "1", "red", "red", "green"),
            make_entry("c", "1", "red", "red", "blue", "blue", "green"),
            make_entry("d", "1", "red", "red", "red"),
        ]
        h = agreement_histogram(entries)
        assert h.share[1] == 25.0 and h.share[2] == 50.0 and h.share[3] == 25.0
        assert h.share[4] == h.share[5] == 0.0
        assert h.cumulative_ge2 == 75.0 and h.cumulative_ge3 == 25.0

    def test_single_five(self):
        h = agreement_histogram([make_entry("a", "1", *["red"] * 5)])
        assert h.share[5] == 100.0 and h.cumulative_ge2 == 100.0

    def test_empty(self):
        with pytest.raises(EmptyLexicon):
            agreement_histogram([])


class TestChance:
    def test_five_annotators_eleven_colours(self):
        assert chance_distinct_fraction(5, 11) == Fraction(5040, 14641)
        assert chance_distinct_probability(5, 11) == pytest.approx(0.344, abs=5e-4)

    def test_single_annotator(self):
        assert all(chance_distinct_probability(1, k) == 1.0 for k in range(1, 20))

    def test_pigeonhole(self):
        assert chance_distinct_probability(12, 11) == 0.0

    def test_matches_enumeration(self):
        # brute force over all 4^3 labelings
        import itertools

        distinct = sum(len(set(x)) == 3 for x in itertools.product(range(4), repeat=3))
        assert chance_distinct_fraction(3, 4) == Fraction(distinct, 4 ** 3)

    @given(st.integers(1, 30), st.integers(1, 30))
    def test_non_increasing_in_annotators(self, n, k):
        assert chance_distinct_probability(n + 1, k) <= chance_distinct_probability(n, k)


class TestDistribution:
    def test_voted_hand_count(self):
        entries = [make_entry(t, "1", c, c, c) for t, c in zip("abcd", ["white", "white", "black", "red"])]
        d = colour_distribution(entries, "voted")
        assert d[Colour.WHITE] == 50.0 and d[Colour.BLACK] == 25.0 and d[Colour.RED] == 25.0
        assert sum(v for c, v in d.items() if c not in (Colour.WHITE, Colour.BLACK, Colour.RED)) == 0

    def test_overall_single_assignment(self):
        assert colour_distribution([A("w", "nap", "blue")], "overall")[Colour.BLUE] == 100.0

    def test_overall_uses_vote_vectors(self):
        d = colour_distribution([make_entry("a", "1", "red", "red", "blue", "green")], "overall")
        assert d[Colour.RED] == 50.0 and d[Colour.BLUE] == 25.0

    def test_empty(self):
        with pytest.raises(EmptyInput):
            colour_distribution([], "voted")

    def test_voted_rejects_assignments(self):
        with pytest.raises(TypeError):
            colour_distribution([A("w", "nap", "blue")], "voted")

    @settings(max_examples=50)
    @given(st.lists(st.lists(st.sampled_from(list(Colour)), min_size=1, max_size=6), min_size=1, max_size=40))
    def test_sums_to_100(self, vote_lists):
        entries = [make_entry(f"t{i}", "1", *(c.value for c in v)) for i, v in enumerate(vote_lists)]
        for mode in ("voted", "overall"):
            d = colour_distribution(entries, mode)
            assert abs(sum(d.values()) - 100) <= 0.1
            assert min(d.values()) >= 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 4))
def test_aggregate_invariants(seed, min_valid):
    rng = random.Random(seed)
    key = {WordSense(f"t{i}", "c"): "gold" for i in range(30)}
    rows = []
    for sense in key:
        for w in range(rng.randint(0, 6)):
            rows.append(Assignment(f"w{w}", sense, rng.choice(["gold", "gold", "gold", "bad"]), rng.choice(COLOURS)))
    entries, report = aggregate(rows, key, min_valid, seed)
    for e in entries:
        assert e.votes.total >= min_valid
        assert e.confidence == Fraction(e.votes[e.majority], e.votes.total)
        assert e.votes[e.majority] == e.votes.max_count()
    assert report.n_wrong_q1 == sum(r.q1_answer == "bad" for r in rows)
