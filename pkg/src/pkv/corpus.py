"""Streaming ingestion of JSONL patent corpora.

One patent per line: {"patent_id": str, "abstract": str, "cpc": [str],
"date": "YYYY-MM-DD", "applicants": [str], "inventors": [str]}.
applicants/inventors are optional.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Union

MIN_YEAR = 1800
MAX_YEAR = 2100


class CorpusError(ValueError):
    """Base class for per-record ingestion errors."""


class MalformedJson(CorpusError):
    pass


class MissingField(CorpusError):
    def __init__(self, name: str):
        super().__init__(f"missing field: {name}")
        self.field_name = name


class EmptyAbstract(CorpusError):
    pass


class NoCpcCodes(CorpusError):
    pass


class BadDate(CorpusError):
    pass


class DuplicateId(CorpusError):
    pass


@dataclass(frozen=True)
class PatentRecord:
    """One accepted patent application; immutable and safe to share."""

    patent_id: str
    abstract: str
    cpc_codes: tuple[str, ...]
    application_date: dt.date
    applicants: tuple[str, ...] = ()
    inventors: tuple[str, ...] = ()

    @property
    def year(self) -> int:
        return self.application_date.year

    def to_json(self) -> str:
        return json.dumps(
            {
                "patent_id": self.patent_id,
                "abstract": self.abstract,
                "cpc": list(self.cpc_codes),
                "date": self.application_date.isoformat(),
                "applicants": list(self.applicants),
                "inventors": list(self.inventors),
            },
            ensure_ascii=False,
        )


def _require(obj: dict, name: str):
    if name not in obj:
        raise MissingField(name)
    return obj[name]


def _name_list(obj: dict, name: str) -> tuple[str, ...]:
    raw = obj.get(name, [])
    if not isinstance(raw, list) or any(not isinstance(x, str) for x in raw):
        raise MalformedJson(f"{name} must be a list of strings")
    return tuple(x.strip() for x in raw if x.strip())


def parse_patent_record(line: str) -> PatentRecord:
    """Parse and validate one JSONL line; raises a CorpusError subclass."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"bad JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise MalformedJson("line is not a JSON object")

    patent_id = _require(obj, "patent_id")
    if not isinstance(patent_id, str) or not patent_id.strip():
        raise MissingField("patent_id")

    abstract = _require(obj, "abstract")
    if not isinstance(abstract, str):
        raise MalformedJson("abstract must be a string")
    if not abstract.strip():
        raise EmptyAbstract(f"empty abstract for {patent_id}")

    cpc = _require(obj, "cpc")
    if not isinstance(cpc, list) or any(not isinstance(x, str) for x in cpc):
        raise MalformedJson("cpc must be a list of strings")
    codes = tuple(x.strip() for x in cpc if x.strip())
    if not codes:
        raise NoCpcCodes(f"no CPC codes for {patent_id}")

    raw_date = _require(obj, "date")
    try:
        date = dt.date.fromisoformat(raw_date)
    except (TypeError, ValueError) as exc:
        raise BadDate(f"bad date {raw_date!r} for {patent_id}") from exc
    if not MIN_YEAR <= date.year <= MAX_YEAR:
        raise BadDate(f"year {date.year} out of range for {patent_id}")

    return PatentRecord(
        patent_id=patent_id.strip(),
        abstract=abstract,
        cpc_codes=codes,
        application_date=date,
        applicants=_name_list(obj, "applicants"),
        inventors=_name_list(obj, "inventors"),
    )


@dataclass
class LoadReport:
    """Running totals; accepted + rejected equals lines seen so far."""

    accepted: int = 0
    rejected: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.accepted + self.rejected


def load_corpus(
    path: Union[str, Path], report: LoadReport | None = None
) -> Iterator[tuple[int, Union[PatentRecord, CorpusError]]]:
    """Stream (line number, record-or-error) pairs from a JSONL file.

    Per-line failures do not abort the stream. Duplicate patent_ids are
    rejected (first occurrence wins). Peak memory is bounded by the largest
    single record plus the dedup id set.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    seen_ids: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = parse_patent_record(line)
            except CorpusError as err:
                if report is not None:
                    report.rejected += 1
                    report.errors.append((lineno, str(err)))
                yield lineno, err
                continue
            if record.patent_id in seen_ids:
                err = DuplicateId(f"duplicate patent_id: {record.patent_id}")
                if report is not None:
                    report.rejected += 1
                    report.errors.append((lineno, str(err)))
                yield lineno, err
                continue
            seen_ids.add(record.patent_id)
            if report is not None:
                report.accepted += 1
            yield lineno, record
