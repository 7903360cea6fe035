"""Per-phrase metadata aggregation: CPC frequency vectors, yearly timelines,
applicant and inventor counts."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional

from pkv.corpus import PatentRecord
from pkv.cpc import DimensionRegistry, GranularityLevel, parse_cpc, truncate
from pkv.extract import is_cryptic_token

NORM_REL_TOL = 1e-9


class EmptyVocabulary(ValueError):
    """No phrase survived merging and the doc-frequency filter."""


class PhraseNotFound(KeyError):
    """Phrase absent from the vocabulary."""


@dataclass(frozen=True)
class SparseVector:
    """Ordered (dimension id, count) pairs with a cached Euclidean norm."""

    entries: tuple[tuple[int, int], ...]
    norm: float

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "SparseVector":
        entries = tuple(sorted(counts.items()))
        if not entries:
            raise ValueError("sparse vector must be nonempty")
        if any(c < 1 for _, c in entries):
            raise ValueError("counts must be >= 1")
        norm = math.sqrt(sum(c * c for _, c in entries))
        return cls(entries=entries, norm=norm)

    def recompute_norm(self) -> float:
        return math.sqrt(sum(c * c for _, c in self.entries))

    def validate(self) -> None:
        dims = [d for d, _ in self.entries]
        if dims != sorted(set(dims)):
            raise ValueError("entries must be strictly ascending by dimension")
        if any(c < 1 for _, c in self.entries):
            raise ValueError("counts must be >= 1")
        if not math.isclose(self.norm, self.recompute_norm(), rel_tol=NORM_REL_TOL):
            raise ValueError("cached norm does not match entries")

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class KeyPhrase:
    """One vocabulary entry with its four metadata vectors."""

    phrase: str
    cpc_vector: SparseVector
    timeline: dict[int, int]
    applicant_counts: dict[int, int]
    inventor_counts: dict[int, int]
    doc_freq: int


@dataclass
class _Accumulator:
    cpc: Counter = field(default_factory=Counter)
    timeline: Counter = field(default_factory=Counter)
    applicants: Counter = field(default_factory=Counter)
    inventors: Counter = field(default_factory=Counter)
    doc_freq: int = 0

    def add(self, other: "_Accumulator") -> None:
        self.cpc.update(other.cpc)
        self.timeline.update(other.timeline)
        self.applicants.update(other.applicants)
        self.inventors.update(other.inventors)
        self.doc_freq += other.doc_freq


@dataclass(frozen=True)
class EmbeddingSet:
    """Immutable finalized vocabulary, sorted by phrase text."""

    phrases: tuple[KeyPhrase, ...]
    registry: DimensionRegistry
    applicant_names: DimensionRegistry
    inventor_names: DimensionRegistry
    variant_map: dict[str, str]  # non-identity entries only
    level: GranularityLevel

    def __post_init__(self):
        object.__setattr__(
            self, "_by_text", {kp.phrase: i for i, kp in enumerate(self.phrases)}
        )

    def resolve(self, text: str) -> Optional[KeyPhrase]:
        """Lookup after normalization and variant mapping; None if absent."""
        key = normalize_query(text)
        key = self.variant_map.get(key, key)
        idx = self._by_text.get(key)
        return self.phrases[idx] if idx is not None else None

    def phrase_vector(self, text: str) -> SparseVector:
        kp = self.resolve(text)
        if kp is None:
            raise PhraseNotFound(text)
        return kp.cpc_vector


def normalize_query(text: str) -> str:
    """Same canonicalization a vocabulary phrase went through: lowercase,
    hyphen split, cryptic tokens dropped, single spaces."""
    tokens = text.lower().replace("-", " ").split()
    kept = [t for t in tokens if not is_cryptic_token(t)]
    return " ".join(kept)


class EmbeddingBuilder:
    """Mutable accumulation state; shards merge associatively via merge()."""

    def __init__(self, level: GranularityLevel = GranularityLevel.MAIN_GROUP):
        self.level = level
        self.registry = DimensionRegistry()
        self.applicant_names = DimensionRegistry()
        self.inventor_names = DimensionRegistry()
        self._acc: dict[str, _Accumulator] = {}
        self._dim_cache: dict[str, int] = {}

    def _dim_of(self, raw_code: str) -> int:
        dim = self._dim_cache.get(raw_code)
        if dim is None:
            dim = self.registry.intern(truncate(parse_cpc(raw_code), self.level))
            self._dim_cache[raw_code] = dim
        return dim

    def accumulate(self, phrase: str, record: PatentRecord) -> None:
        """Record one (phrase, patent) co-occurrence.

        CPC dimensions are incremented per code as listed; timeline and
        entity counts once per record. Callers pass each phrase at most once
        per record (document-level counting).
        """
        acc = self._acc.get(phrase)
        if acc is None:
            acc = self._acc[phrase] = _Accumulator()
        for raw in record.cpc_codes:
            acc.cpc[self._dim_of(raw)] += 1
        acc.timeline[record.year] += 1
        for name in record.applicants:
            acc.applicants[self.applicant_names.intern(name)] += 1
        for name in record.inventors:
            acc.inventors[self.inventor_names.intern(name)] += 1
        acc.doc_freq += 1

    @property
    def vocabulary(self) -> set[str]:
        return set(self._acc)

    def finalize(
        self,
        variant_map: Optional[dict[str, str]] = None,
        min_doc_freq: int = 1,
    ) -> EmbeddingSet:
        """Fold variants, drop rare phrases, cache norms, freeze."""
        if variant_map is None:
            variant_map = {}
        folded: dict[str, _Accumulator] = {}
        for phrase, acc in self._acc.items():
            target = variant_map.get(phrase, phrase)
            existing = folded.get(target)
            if existing is None:
                merged = _Accumulator()
                merged.add(acc)
                folded[target] = merged
            else:
                existing.add(acc)
        kept = {
            phrase: acc
            for phrase, acc in folded.items()
            if acc.doc_freq >= min_doc_freq
        }
        if not kept:
            raise EmptyVocabulary(
                f"no phrase met min_doc_freq={min_doc_freq} "
                f"({len(folded)} candidates)"
            )
        phrases = tuple(
            KeyPhrase(
                phrase=phrase,
                cpc_vector=SparseVector.from_counts(acc.cpc),
                timeline=dict(acc.timeline),
                applicant_counts=dict(acc.applicants),
                inventor_counts=dict(acc.inventors),
                doc_freq=acc.doc_freq,
            )
            for phrase, acc in sorted(kept.items())
        )
        nontrivial = {
            src: dst for src, dst in variant_map.items() if src != dst and dst in kept
        }
        return EmbeddingSet(
            phrases=phrases,
            registry=self.registry,
            applicant_names=self.applicant_names,
            inventor_names=self.inventor_names,
            variant_map=nontrivial,
            level=self.level,
        )
