"""End-to-end build: corpus stream -> extraction -> embedding -> index."""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from pkv.config import Config
from pkv.corpus import LoadReport, PatentRecord, load_corpus
from pkv.cpc import CpcError, parse_cpc
from pkv.embed import EmbeddingBuilder, EmbeddingSet
from pkv.extract import (
    StopWordList,
    merge_variants,
    normalize_phrase,
    score_phrases,
    split_candidates,
)


@dataclass
class BuildReport:
    records_accepted: int = 0
    records_rejected: int = 0
    phrases_extracted: int = 0
    phrases_final: int = 0
    dimensions: int = 0
    wall_time: float = 0.0

    def summary(self) -> str:
        return (
            f"records: {self.records_accepted} accepted, "
            f"{self.records_rejected} rejected\n"
            f"phrases: {self.phrases_extracted} extracted, "
            f"{self.phrases_final} after merge/filter\n"
            f"dimensions: {self.dimensions}\n"
            f"wall time: {self.wall_time:.2f}s"
        )


def extract_phrases(abstract: str, stops: StopWordList, config: Config) -> set[str]:
    """Distinct normalized phrases from one abstract.

    Keeps scored candidates with score >= min_phrase_score and at least one
    alphabetic token; cryptic tokens are dropped during normalization.
    """
    candidates = split_candidates(abstract, stops, config.max_phrase_len)
    phrases: set[str] = set()
    for cand in score_phrases(candidates):
        if cand.score < config.min_phrase_score:
            continue
        if not any(any(ch.isalpha() for ch in tok) for tok in cand.tokens):
            continue
        normalized = normalize_phrase(cand.tokens, stops)
        if normalized is not None:
            phrases.add(normalized)
    return phrases


def _record_usable(record: PatentRecord) -> bool:
    """At least one CPC code must parse; otherwise there is no dimension."""
    for raw in record.cpc_codes:
        try:
            parse_cpc(raw)
            return True
        except CpcError:
            continue
    return False


def build_embedding_set(
    corpus_path: Union[str, Path], config: Config
) -> tuple[EmbeddingSet, BuildReport]:
    """Run the full statistical pipeline over a JSONL corpus.

    Raises EmptyVocabulary when nothing survives the doc-frequency filter
    and FileNotFoundError for an unreadable input.
    """
    start = time.perf_counter()
    stops = (
        StopWordList.from_file(config.stopword_path)
        if config.stopword_path
        else StopWordList.builtin()
    )
    builder = EmbeddingBuilder(level=config.level)
    load_report = LoadReport()
    report = BuildReport()
    for _, item in load_corpus(corpus_path, load_report):
        if not isinstance(item, PatentRecord):
            continue
        if not _record_usable(item):
            report.records_rejected += 1
            continue
        usable = PatentRecord(
            patent_id=item.patent_id,
            abstract=item.abstract,
            cpc_codes=tuple(c for c in item.cpc_codes if _parses(c)),
            application_date=item.application_date,
            applicants=item.applicants,
            inventors=item.inventors,
        )
        for phrase in extract_phrases(usable.abstract, stops, config):
            builder.accumulate(phrase, usable)
    report.records_accepted = load_report.accepted - report.records_rejected
    report.records_rejected += load_report.rejected
    report.phrases_extracted = len(builder.vocabulary)

    variant_map = merge_variants(builder.vocabulary)
    eset = builder.finalize(variant_map=variant_map, min_doc_freq=config.min_doc_freq)
    report.phrases_final = len(eset.phrases)
    report.dimensions = len(eset.registry)
    report.wall_time = time.perf_counter() - start
    return eset, report


def _parses(raw: str) -> bool:
    try:
        parse_cpc(raw)
        return True
    except CpcError:
        return False
