"""Shared fixtures: a small hand-checked corpus and its built index."""

from __future__ import annotations

import json
import math

import pytest

from pkv.config import Config
from pkv.index import build_index
from pkv.pipeline import build_embedding_set

# Hand-designed so that, at MainGroup level with min_doc_freq=2, the
# vocabulary is exactly: "drive train", "planetary carrier", "sensor"
# (folded from sensors), "smart phone", "smartphone". "smartphone" and
# "smart phone" share identical patent sets, as do "drive train" and
# "planetary carrier".
FIXTURE_RECORDS = [
    {
        "patent_id": "EP1",
        "abstract": "A smartphone. A smart phone.",
        "cpc": ["H04W 88/02", "H04M 1/02"],
        "date": "2009-05-01",
        "applicants": ["Acme Corp"],
        "inventors": ["Alice A."],
    },
    {
        "patent_id": "EP2",
        "abstract": "A smartphone. A smart phone.",
        "cpc": ["H04W 88/02"],
        "date": "2011-07-15",
        "applicants": ["Acme Corp"],
        "inventors": ["Bob B."],
    },
    {
        "patent_id": "EP3",
        "abstract": "Planetary carrier for a drive train. The drive train.",
        "cpc": ["F16H 57/08"],
        "date": "2010-01-01",
        "applicants": ["Gears GmbH"],
        "inventors": ["Carol C."],
    },
    {
        "patent_id": "EP4",
        "abstract": "A drive train with planetary carrier.",
        "cpc": ["F16H 57/08", "F16H 1/28"],
        "date": "2012-03-03",
        "applicants": ["Gears GmbH"],
        "inventors": ["Carol C.", "Dan D."],
    },
    {
        "patent_id": "EP5",
        "abstract": "Sensors for a sensor.",
        "cpc": ["G01D 21/02"],
        "date": "2010-06-06",
        "applicants": ["Metrology AG"],
        "inventors": ["Eve E."],
    },
]

FIXTURE_VOCAB = [
    "drive train",
    "planetary carrier",
    "sensor",
    "smart phone",
    "smartphone",
]


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


@pytest.fixture
def corpus_path(tmp_path):
    path = tmp_path / "fixture.jsonl"
    write_jsonl(path, FIXTURE_RECORDS)
    return path


@pytest.fixture
def fixture_config():
    return Config(min_doc_freq=2)


@pytest.fixture
def fixture_eset(corpus_path, fixture_config):
    eset, _ = build_embedding_set(corpus_path, fixture_config)
    return eset


@pytest.fixture
def fixture_index(fixture_eset):
    return build_index(fixture_eset)


def oracle_cosine(a: dict[int, int], b: dict[int, int]) -> float:
    """Independent cosine over dim->count dicts; norms recomputed."""
    dot = sum(c * b[d] for d, c in a.items() if d in b)
    na = math.sqrt(sum(c * c for c in a.values()))
    nb = math.sqrt(sum(c * c for c in b.values()))
    return abs(dot) / (na * nb)


def oracle_ranking(vectors: dict[str, dict[int, int]], query: str) -> list[tuple[str, float]]:
    """Brute-force all-pairs ranking: similarity desc, text asc, zero and
    self excluded."""
    qvec = vectors[query]
    scored = []
    for text, vec in vectors.items():
        if text == query:
            continue
        sim = oracle_cosine(qvec, vec)
        if sim > 0.0:
            scored.append((text, sim))
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored
