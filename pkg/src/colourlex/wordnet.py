"""WordNet database reader, information content and synset closeness measures.

Reads the standard WordNet text distribution (``data.*`` and, when present,
``index.*`` files). Four closeness measures are provided: Jiang-Conrath and
Lin (information-content similarity over the noun hierarchy), an extended
gloss-overlap (Lesk) relatedness and a gloss-vector cosine relatedness.
"""

from __future__ import annotations

import logging
import math
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .core import COLOURS, Colour, ThesaurusCategory, argmax_colour
from .corpus import Prediction
from .errors import DanglingPointer, MeasureUnavailable, ParseError, UnknownSynset

log = logging.getLogger(__name__)

POS_FILES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
MEASURES = ("jcn", "lin", "lesk", "vector")
JCN_CAP = 1e6
JCN_EPS = 1e-12

HYPERNYM_SYMBOLS = ("@", "@i")
HYPONYM_SYMBOLS = ("~", "~i")
RELATION_NAMES = {
    "@": "hypernym", "@i": "instance_hypernym", "~": "hyponym", "~i": "instance_hyponym",
    "#m": "member_holonym", "#s": "substance_holonym", "#p": "part_holonym",
    "%m": "member_meronym", "%s": "substance_meronym", "%p": "part_meronym",
    "=": "attribute", "+": "derivation", "&": "similar_to", "^": "also_see", "!": "antonym",
    "*": "entailment", ">": "cause", "$": "verb_group", "<": "participle", "\\": "pertainym",
    ";c": "domain_topic", "-c": "member_topic", ";r": "domain_region", "-r": "member_region",
    ";u": "domain_usage", "-u": "member_usage",
}

SynsetId = tuple[int, str]

_ADJ_MARKER = re.compile(r"\((?:a|p|ip)\)$")
_WORD_RE = re.compile(r"[a-z0-9]+")

STOPWORDS = frozenset("""
a about above after again against all am an and any are as at be because been before being below
between both but by can could did do does doing down during each few for from further had has have
having he her here hers herself him himself his how i if in into is it its itself just me more most
my myself no nor not now of off on once only or other our ours ourselves out over own same she should
so some such than that the their theirs them themselves then there these they this those through to
too under until up very was we were what when where which while who whom why will with would you your
yours yourself yourselves e g etc esp usually especially something someone one
""".split())


def _norm_pos(pos: str) -> str:
    return "a" if pos == "s" else pos


def lemma_key(term: str) -> str:
    return term.strip().lower().replace(" ", "_")


@dataclass
class Synset:
    id: SynsetId
    lemmas: tuple[str, ...]
    gloss: str
    relations: dict[str, tuple[SynsetId, ...]] = field(default_factory=dict)

    @property
    def pos(self) -> str:
        return self.id[1]

    def related(self, *symbols: str) -> tuple[SynsetId, ...]:
        out: list[SynsetId] = []
        for sym in symbols:
            out.extend(self.relations.get(sym, ()))
        return tuple(out)

    def __repr__(self) -> str:
        return f"Synset({self.id[0]:08d}{self.id[1]} {'/'.join(self.lemmas)})"


def _parse_data_line(line: str, file_pos: str, path: str, lineno: int) -> Synset:
    data, _, gloss = line.partition(" | ")
    tok = data.split()
    try:
        offset = int(tok[0])
        ss_type = tok[2]
        w_cnt = int(tok[3], 16)
        words = [tok[4 + 2 * i] for i in range(w_cnt)]
        k = 4 + 2 * w_cnt
        p_cnt = int(tok[k])
        relations: dict[str, list[SynsetId]] = {}
        for i in range(p_cnt):
            sym, target, tpos = tok[k + 1 + 4 * i: k + 4 + 4 * i]
            relations.setdefault(sym, []).append((int(target), _norm_pos(tpos)))
    except (IndexError, ValueError) as exc:
        raise ParseError(f"malformed synset line ({exc})", path, lineno) from None
    if _norm_pos(ss_type) != file_pos:
        raise ParseError(f"synset type {ss_type!r} in {POS_FILES[file_pos]} file", path, lineno)
    lemmas = tuple(dict.fromkeys(_ADJ_MARKER.sub("", w).lower() for w in words))
    rels = {sym: tuple(dict.fromkeys(ids)) for sym, ids in relations.items()}
    return Synset((offset, file_pos), lemmas, gloss.strip(), rels)


class WordNet:
    """Immutable, fully linked synset graph with lemma lookup."""

    def __init__(self, synsets: Iterable[Synset], index: dict[str, list[SynsetId]] | None = None):
        self._synsets: dict[SynsetId, Synset] = {s.id: s for s in synsets}
        if index is None:
            index = {}
            for sid in sorted(self._synsets, key=lambda i: (i[1], i[0])):
                for lemma in self._synsets[sid].lemmas:
                    index.setdefault(lemma, []).append(sid)
        self._index = {k: tuple(v) for k, v in index.items()}
        self._ancestor_cache: dict[SynsetId, frozenset[SynsetId]] = {}

    def __len__(self) -> int:
        return len(self._synsets)

    def __contains__(self, sid) -> bool:
        return sid in self._synsets

    def __iter__(self) -> Iterator[Synset]:
        return iter(self._synsets.values())

    def __getitem__(self, sid: SynsetId) -> Synset:
        try:
            return self._synsets[sid]
        except KeyError:
            raise UnknownSynset(f"{sid[0]:08d}{sid[1]}") from None

    def synsets(self, lemma: str, pos: str | None = None) -> list[Synset]:
        ids = self._index.get(lemma_key(lemma), ())
        return [self._synsets[i] for i in ids if pos is None or i[1] == pos]

    def hypernyms(self, sid: SynsetId) -> tuple[SynsetId, ...]:
        return self._synsets[sid].related(*HYPERNYM_SYMBOLS)

    def hyponyms(self, sid: SynsetId) -> tuple[SynsetId, ...]:
        return self._synsets[sid].related(*HYPONYM_SYMBOLS)

    def ancestors(self, sid: SynsetId) -> frozenset[SynsetId]:
        """``sid`` and everything reachable over hypernym edges."""
        cached = self._ancestor_cache.get(sid)
        if cached is None:
            seen = {sid}
            stack = [sid]
            while stack:
                for parent in self.hypernyms(stack.pop()):
                    if parent not in seen:
                        seen.add(parent)
                        stack.append(parent)
            cached = self._ancestor_cache[sid] = frozenset(seen)
        return cached

    def check_links(self) -> None:
        for s in self._synsets.values():
            for sym, targets in s.relations.items():
                for t in targets:
                    if t not in self._synsets:
                        raise DanglingPointer(f"{s!r} {sym} -> {t[0]:08d}{t[1]} does not exist")
        for lemma, ids in self._index.items():
            for t in ids:
                if t not in self._synsets:
                    raise DanglingPointer(f"index entry {lemma!r} -> {t[0]:08d}{t[1]} does not exist")


def _read_index(path: str, pos: str, index: dict[str, list[SynsetId]]) -> None:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.startswith("  ") or not line.strip():
                continue
            tok = line.split()
            try:
                lemma = tok[0].lower()
                synset_cnt = int(tok[2])
                p_cnt = int(tok[3])
                offsets = tok[4 + p_cnt + 2: 4 + p_cnt + 2 + synset_cnt]
                ids = [(int(o), pos) for o in offsets]
            except (IndexError, ValueError) as exc:
                raise ParseError(f"malformed index line ({exc})", path, lineno) from None
            if len(ids) != synset_cnt:
                raise ParseError("index line lists fewer offsets than its synset count", path, lineno)
            index.setdefault(lemma, []).extend(ids)


def load_wordnet(directory: str) -> WordNet:
    """Parse every ``data.<pos>`` file in ``directory`` (and ``index.<pos>`` if present)."""
    if not os.path.isdir(directory):
        raise FileNotFoundError(directory)
    synsets: list[Synset] = []
    index: dict[str, list[SynsetId]] = {}
    have_index = True
    found = False
    for pos, name in POS_FILES.items():
        data_path = os.path.join(directory, f"data.{name}")
        if not os.path.exists(data_path):
            continue
        found = True
        with open(data_path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if line.startswith("  ") or not line.strip():
                    continue
                synsets.append(_parse_data_line(line.rstrip("\n"), pos, data_path, lineno))
        index_path = os.path.join(directory, f"index.{name}")
        if os.path.exists(index_path):
            _read_index(index_path, pos, index)
        else:
            have_index = False
    if not found:
        raise ParseError("no data.<pos> files found", directory)
    db = WordNet(synsets, index if have_index else None)
    db.check_links()
    return db


class InformationContent:
    """Synset id -> information content, -log(freq(s) / freq(root)).

    Synsets whose (propagated) frequency is zero have no IC and are excluded
    from the IC-based measures.
    """

    def __init__(self, ic: dict[SynsetId, float], freq: dict[SynsetId, float] | None = None):
        self.ic = ic
        self.freq = freq or {}
        self.skipped: list[str] = []

    def __contains__(self, sid) -> bool:
        return sid in self.ic

    def __getitem__(self, sid: SynsetId) -> float:
        return self.ic[sid]

    def get(self, sid: SynsetId, default=None):
        return self.ic.get(sid, default)

    @classmethod
    def from_counts(cls, counts: dict[SynsetId, float], db: WordNet, propagate: bool = True) -> InformationContent:
        freq: Counter = Counter()
        for sid, c in counts.items():
            if propagate:
                for anc in db.ancestors(sid):
                    freq[anc] += c
            else:
                freq[sid] += c
        ic: dict[SynsetId, float] = {}
        for pos in ("n", "v"):
            roots = [s.id for s in db if s.pos == pos and not db.hypernyms(s.id)]
            total = sum(freq[r] for r in roots)
            if total <= 0:
                continue
            for sid, f in freq.items():
                if sid[1] == pos and f > 0:
                    ic[sid] = max(0.0, -math.log(f / total))
        return cls(ic, dict(freq))


_IC_LINE = re.compile(r"^(\d+)([nvars])\s+(\S+)")


def load_information_content(path: str, db: WordNet, propagate: bool = True) -> InformationContent:
    """Read ``<offset><pos> <count>`` lines and derive IC over ``db``.

    Counts are per-synset and are accumulated up the hypernym graph unless
    ``propagate`` is false (for files that already hold cumulative counts).
    Lines naming synsets absent from ``db`` are logged and skipped.
    """
    counts: dict[SynsetId, float] = {}
    skipped = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("wnver") or line.startswith("#"):
                continue
            m = _IC_LINE.match(line)
            if m is None:
                raise ParseError("expected '<offset><pos> <count>'", path, lineno)
            sid = (int(m.group(1)), _norm_pos(m.group(2)))
            try:
                count = float(m.group(3))
            except ValueError:
                raise ParseError(f"bad count {m.group(3)!r}", path, lineno) from None
            if sid not in db:
                skipped.append(line.split()[0])
                continue
            counts[sid] = counts.get(sid, 0.0) + count
    if skipped:
        log.warning("%s: skipped %d lines for unknown synsets", path, len(skipped))
    info = InformationContent.from_counts(counts, db, propagate)
    info.skipped = skipped
    return info


def _gloss_tokens(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def _longest_overlap(a: list, b: list) -> tuple[str, ...] | None:
    """Longest common run containing a non-stopword; ties go to the lexicographically smallest."""
    best: tuple[str, ...] | None = None
    prev = [0] * (len(b) + 1)
    for i in range(1, len(a) + 1):
        cur = [0] * (len(b) + 1)
        ai = a[i - 1]
        if ai is not None:
            for j in range(1, len(b) + 1):
                if b[j - 1] == ai:
                    n = cur[j] = prev[j - 1] + 1
                    if best is not None and n < len(best):
                        continue
                    run = tuple(a[i - n:i])
                    if all(w in STOPWORDS for w in run):
                        continue
                    if best is None or n > len(best) or run < best:
                        best = run
        prev = cur
    return best


def _blank_first(seq: list, run: tuple[str, ...]) -> None:
    n = len(run)
    for i in range(len(seq) - n + 1):
        if tuple(seq[i:i + n]) == run:
            seq[i:i + n] = [None] * n
            return


def gloss_overlap(a: Iterable[str | None], b: Iterable[str | None]) -> int:
    """Sum of squared lengths of successively removed maximal shared word runs.

    ``None`` entries act as barriers that no run may cross. The chosen run is
    removed from its first position in each sequence, which keeps the score
    symmetric in its arguments.
    """
    a, b = list(a), list(b)
    score = 0
    while True:
        run = _longest_overlap(a, b)
        if run is None:
            return score
        score += len(run) ** 2
        _blank_first(a, run)
        _blank_first(b, run)


def cosine(u: dict[str, float], v: dict[str, float]) -> float:
    if len(u) > len(v):
        u, v = v, u
    dot = math.fsum(w * v[k] for k, w in u.items() if k in v)
    nu = math.sqrt(math.fsum(w * w for w in u.values()))
    nv = math.sqrt(math.fsum(w * w for w in v.values()))
    if nu == 0 or nv == 0:
        return 0.0
    return max(0.0, min(1.0, dot / (nu * nv)))


class Closeness:
    """Synset- and word-level closeness under one measure.

    Holds per-instance caches only; results equal the uncached computation.
    """

    RELATION_SET = ("self", "hypernym", "hyponym")

    def __init__(self, db: WordNet, measure: str, ic: InformationContent | None = None,
                 aggregate: str = "max", jcn_cap: float = JCN_CAP):
        if measure not in MEASURES:
            raise MeasureUnavailable(f"unknown measure {measure!r}; expected one of {MEASURES}")
        if measure in ("jcn", "lin") and ic is None:
            raise MeasureUnavailable(f"{measure} needs an information-content file")
        if aggregate not in ("max", "sum"):
            raise ValueError(f"unknown sense aggregation {aggregate!r}")
        self.db = db
        self.measure = measure
        self.ic = ic
        self.aggregate = aggregate
        self.jcn_cap = jcn_cap
        self._tokens: dict[tuple[SynsetId, str], list[str | None]] = {}
        self._vectors: dict[SynsetId, dict[str, float]] = {}
        self._idf: dict[str, float] | None = None

    # IC-based similarity
    def defined_for(self, sid: SynsetId) -> bool:
        if self.measure in ("jcn", "lin"):
            return sid[1] == "n" and sid in self.ic
        return True

    def lcs_ic(self, a: SynsetId, b: SynsetId) -> float:
        common = self.db.ancestors(a) & self.db.ancestors(b)
        return max((self.ic[s] for s in common if s in self.ic), default=0.0)

    def _ic_pair(self, a: SynsetId, b: SynsetId) -> tuple[float, float, float]:
        if not (self.defined_for(a) and self.defined_for(b)):
            raise MeasureUnavailable(f"{self.measure} needs nouns with defined information content")
        return self.ic[a], self.ic[b], self.lcs_ic(a, b)

    def jcn(self, a: SynsetId, b: SynsetId) -> float:
        ic_a, ic_b, ic_lcs = self._ic_pair(a, b)
        distance = ic_a + ic_b - 2 * ic_lcs
        if distance <= JCN_EPS:
            return self.jcn_cap
        return min(self.jcn_cap, 1.0 / distance)

    def lin(self, a: SynsetId, b: SynsetId) -> float:
        ic_a, ic_b, ic_lcs = self._ic_pair(a, b)
        if ic_a + ic_b == 0:
            return 0.0
        return min(1.0, 2 * ic_lcs / (ic_a + ic_b))

    # gloss-based relatedness
    def _related_ids(self, sid: SynsetId, relation: str) -> tuple[SynsetId, ...]:
        if relation == "self":
            return (sid,)
        if relation == "hypernym":
            return self.db.hypernyms(sid)
        return self.db.hyponyms(sid)

    def relation_tokens(self, sid: SynsetId, relation: str) -> list[str | None]:
        key = (sid, relation)
        toks = self._tokens.get(key)
        if toks is None:
            toks = []
            for rid in self._related_ids(sid, relation):
                toks.extend(_gloss_tokens(self.db[rid].gloss))
                toks.append(None)
            self._tokens[key] = toks
        return toks

    def lesk(self, a: SynsetId, b: SynsetId) -> float:
        return float(sum(
            gloss_overlap(self.relation_tokens(a, r1), self.relation_tokens(b, r2))
            for r1 in self.RELATION_SET for r2 in self.RELATION_SET
        ))

    def _gloss_idf(self) -> dict[str, float]:
        if self._idf is None:
            df: Counter = Counter()
            n = 0
            for s in self.db:
                n += 1
                df.update(set(_gloss_tokens(s.gloss)) - STOPWORDS)
            self._idf = {w: math.log((1 + n) / (1 + d)) + 1 for w, d in df.items()}
        return self._idf

    def gloss_vector(self, sid: SynsetId) -> dict[str, float]:
        vec = self._vectors.get(sid)
        if vec is None:
            idf = self._gloss_idf()
            tf: Counter = Counter()
            for r in self.RELATION_SET:
                tf.update(w for w in self.relation_tokens(sid, r) if w is not None and w not in STOPWORDS)
            vec = self._vectors[sid] = {w: c * idf.get(w, 1.0) for w, c in tf.items()}
        return vec

    def vector(self, a: SynsetId, b: SynsetId) -> float:
        return cosine(self.gloss_vector(a), self.gloss_vector(b))

    def synset(self, a: SynsetId, b: SynsetId) -> float:
        return getattr(self, self.measure)(a, b)

    # word level
    def word(self, term: str, colour: Colour | str) -> float:
        """Aggregate synset closeness over all defined (term sense, colour sense) pairs; 0 if none."""
        colour_name = colour.value if isinstance(colour, Colour) else colour
        left = [s.id for s in self.db.synsets(term) if self.defined_for(s.id)]
        right = [s.id for s in self.db.synsets(colour_name) if self.defined_for(s.id)]
        scores = [self.synset(a, b) for a in left for b in right]
        if not scores:
            return 0.0
        return max(scores) if self.aggregate == "max" else math.fsum(scores)

    def colour_scores(self, terms: Iterable[str]) -> dict[Colour, float]:
        unique = sorted(set(t.lower() for t in terms))
        return {c: math.fsum(self.word(t, c) for t in unique) for c in COLOURS}


def synset_closeness(s1: Synset | SynsetId, s2: Synset | SynsetId, measure: str, db: WordNet,
                     ic: InformationContent | None = None) -> float:
    a = s1.id if isinstance(s1, Synset) else s1
    b = s2.id if isinstance(s2, Synset) else s2
    return Closeness(db, measure, ic).synset(a, b)


def word_colour_closeness(term: str, colour: Colour, db: WordNet, measure: str,
                          ic: InformationContent | None = None, aggregate: str = "max") -> float:
    return Closeness(db, measure, ic, aggregate).word(term, colour)


def missing_terms(cat: ThesaurusCategory, db: WordNet) -> list[str]:
    return [m for m in cat.members if not db.synsets(m)]


def predict_by_wordnet(cat: ThesaurusCategory, db: WordNet, measure: str, ic: InformationContent | None = None,
                       aggregate: str = "max", closeness: Closeness | None = None) -> Prediction:
    """Colour with the highest summed member closeness; abstain when every sum is 0."""
    closeness = closeness or Closeness(db, measure, ic, aggregate)
    scores = closeness.colour_scores(cat.members)
    best = argmax_colour(scores)
    method = f"wordnet:{closeness.measure}"
    if best is None:
        return Prediction(cat.category_id, None, method, 0.0)
    return Prediction(cat.category_id, best, method, scores[best])
