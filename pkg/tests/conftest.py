import os

import pytest

from colourlex.core import Colour, ColourCounts, LexiconEntry, ThesaurusCategory, WordSense

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
MINI_WORDNET = os.path.join(FIXTURES, "mini_wordnet")
TINY_WORDNET = os.path.join(FIXTURES, "tiny_wordnet")


def make_entry(term, category_id, *votes, majority=None):
    counts = ColourCounts.from_votes([Colour(v) for v in votes])
    if majority is None:
        majority = counts.tied_maxima()[0]
    return LexiconEntry(WordSense(term, category_id), "syn", counts, Colour(majority))


def category_with_majorities(cid, majorities):
    """A category whose i-th member has a 3-vote unanimous entry for majorities[i]."""
    members = tuple(f"{cid}_w{i}" for i in range(len(majorities)))
    entries = [make_entry(m, cid, c, c, c) for m, c in zip(members, majorities)]
    return ThesaurusCategory(cid, members[0], members), entries


@pytest.fixture(scope="session")
def mini_wordnet():
    from colourlex.wordnet import load_wordnet

    return load_wordnet(MINI_WORDNET)


@pytest.fixture(scope="session")
def mini_ic(mini_wordnet):
    from colourlex.wordnet import load_information_content

    return load_information_content(os.path.join(MINI_WORDNET, "ic-counts.dat"), mini_wordnet)


# acceptance criteria report: one line per criterion, shown after the run
ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
