"""RAKE key-phrase extraction and vocabulary normalization.

Candidate phrases are maximal runs of non-stop tokens between stop words,
sentence punctuation, and line breaks; words are scored by degree/frequency
and phrases by the sum of their word scores.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

DEFAULT_MAX_PHRASE_LEN = 5
MAX_TOKEN_LEN = 30

_BREAK_CHARS = '.,;:!?()[]"'
_BREAK_RE = re.compile("[" + re.escape(_BREAK_CHARS) + "\n\r]")
_NUMBER_RE = re.compile(r"\d+([.,]\d+)*")


@dataclass(frozen=True)
class StopWordList:
    """Lowercase stop tokens plus a label naming where they came from."""

    words: frozenset[str]
    source: str = "custom"

    def __contains__(self, token: str) -> bool:
        return token in self.words

    @classmethod
    def from_file(cls, path: str | Path) -> "StopWordList":
        return cls(words=_parse_stopword_text(Path(path).read_text("utf-8")), source=str(path))

    @classmethod
    def builtin(cls) -> "StopWordList":
        text = resources.files("pkv").joinpath("data/stopwords_en.txt").read_text("utf-8")
        return cls(words=_parse_stopword_text(text), source="builtin")


def _parse_stopword_text(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        token = line.split("#", 1)[0].strip().lower()
        if token:
            if " " in token or "\t" in token:
                raise ValueError(f"stop word contains whitespace: {token!r}")
            words.add(token)
    return frozenset(words)


@dataclass(frozen=True)
class CandidatePhrase:
    tokens: tuple[str, ...]
    score: float

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


def _is_break_token(token: str, stops: StopWordList) -> bool:
    # Pure numbers act as stop tokens: they split candidates without
    # entering phrases.
    return token in stops or _NUMBER_RE.fullmatch(token) is not None


def split_candidates(
    text: str,
    stops: StopWordList,
    max_phrase_len: int = DEFAULT_MAX_PHRASE_LEN,
) -> list[list[str]]:
    """Lowercase, tokenize, and split into candidate phrases.

    Hyphens are split so hyphen/space variants converge. Runs longer than
    max_phrase_len are truncated, not split.
    """
    lowered = text.lower().replace("-", " ")
    candidates: list[list[str]] = []
    for segment in _BREAK_RE.split(lowered):
        run: list[str] = []
        for token in segment.split():
            if _is_break_token(token, stops):
                if run:
                    candidates.append(run[:max_phrase_len])
                    run = []
            else:
                run.append(token)
        if run:
            candidates.append(run[:max_phrase_len])
    return candidates


def score_phrases(candidates: Iterable[list[str]]) -> list[CandidatePhrase]:
    """RAKE deg/freq scoring over distinct candidate phrases.

    Word score is deg(w)/freq(w); a phrase scores the sum over its tokens.
    Sorted by score descending, ties by phrase text ascending.
    """
    candidates = [tuple(c) for c in candidates]
    freq: Counter[str] = Counter()
    deg: Counter[str] = Counter()
    for cand in candidates:
        length = len(cand)
        for word in cand:
            freq[word] += 1
            deg[word] += length
    scored = {}
    for cand in candidates:
        if cand in scored:
            continue
        scored[cand] = sum(deg[w] / freq[w] for w in cand)
    result = [CandidatePhrase(tokens=c, score=s) for c, s in scored.items()]
    result.sort(key=lambda p: (-p.score, p.text))
    return result


def is_cryptic_token(token: str) -> bool:
    """Mixed digit/letter combinations and overlong tokens are cryptic."""
    if len(token) > MAX_TOKEN_LEN:
        return True
    return any(ch.isdigit() for ch in token) and any(ch.isalpha() for ch in token)


def normalize_phrase(tokens: Iterable[str], stops: StopWordList) -> Optional[str]:
    """Canonical vocabulary form, or None if the phrase contributes nothing.

    Drops cryptic tokens; rejects if nothing survives or the remainder is a
    lone stop word.
    """
    kept = [t for t in tokens if not is_cryptic_token(t)]
    if not kept:
        return None
    if len(kept) == 1 and kept[0] in stops:
        return None
    return " ".join(kept)


def _variant_target(phrase: str, vocabulary: set[str]) -> Optional[str]:
    tokens = phrase.split(" ")
    last = tokens[-1]
    if last.endswith("s") and len(last) > 1:
        cand = " ".join(tokens[:-1] + [last[:-1]])
        if cand != phrase and cand in vocabulary:
            return cand
    if last.endswith("ing") and len(last) > 4:
        stem = last[:-3]
        for base in (stem, stem + "e"):
            cand = " ".join(tokens[:-1] + [base])
            if cand != phrase and cand in vocabulary:
                return cand
    return None


def merge_variants(vocabulary: set[str]) -> dict[str, str]:
    """Map each phrase to its canonical form by final-token s/gerund merging.

    Chains are followed to a fixpoint so the returned mapping is idempotent
    (every strip shortens the final token, so chains terminate).
    """
    mapping: dict[str, str] = {}
    for phrase in vocabulary:
        target = phrase
        while True:
            nxt = _variant_target(target, vocabulary)
            if nxt is None:
                break
            target = nxt
        mapping[phrase] = target
    return mapping
