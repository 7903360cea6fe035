"""Immutable cosine-similarity index over sparse CPC vectors.

Search accumulates exact integer dot products over the query's posting
lists and performs a single float division per candidate, so rankings are
bit-stable and match a brute-force oracle exactly up to float rounding.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from bisect import bisect_left
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from pkv.cpc import DimensionRegistry, GranularityLevel
from pkv.embed import EmbeddingSet, SparseVector, normalize_query

FORMAT_MAGIC = b"PKVX"
FORMAT_VERSION = 1
MAX_LIMIT = 1000
MAX_SUGGESTIONS = 10


class IndexFormatError(ValueError):
    """Base class for index file format errors."""


class BadMagic(IndexFormatError):
    pass


class VersionMismatch(IndexFormatError):
    pass


class ChecksumMismatch(IndexFormatError):
    pass


class ZeroNorm(ValueError):
    """Cosine input with no mass; cannot occur for finalized phrases."""


class UnknownPhrase(KeyError):
    """Query phrase absent from the vocabulary; carries lexical suggestions."""

    def __init__(self, query: str, suggestions: Sequence[str] = ()):
        super().__init__(query)
        self.query = query
        self.suggestions = list(suggestions)


@dataclass(frozen=True)
class SearchResult:
    phrase_id: int
    phrase: str
    similarity: float


@dataclass(frozen=True)
class SearchPage:
    query: str  # normalized, after variant mapping
    total: int  # candidates with nonzero similarity, query excluded
    results: tuple[SearchResult, ...]


def cosine(a: SparseVector, b: SparseVector) -> float:
    """|a.b| / (|a| |b|) by merging the two sorted entry lists."""
    if a.norm <= 0.0 or b.norm <= 0.0:
        raise ZeroNorm("cosine requires vectors with positive norm")
    ea, eb = a.entries, b.entries
    i = j = 0
    dot = 0
    while i < len(ea) and j < len(eb):
        da, db = ea[i][0], eb[j][0]
        if da == db:
            dot += ea[i][1] * eb[j][1]
            i += 1
            j += 1
        elif da < db:
            i += 1
        else:
            j += 1
    # abs() is a no-op on nonnegative counts but kept for fidelity to the
    # similarity definition.
    return abs(dot) / (a.norm * b.norm)


class SimilarityIndex:
    """Columnar phrase table + inverted index; immutable after build."""

    def __init__(
        self,
        *,
        level: GranularityLevel,
        registry: DimensionRegistry,
        phrase_texts: list[str],
        doc_freq: np.ndarray,
        fwd_indptr: np.ndarray,
        fwd_dims: np.ndarray,
        fwd_counts: np.ndarray,
        norms: np.ndarray,
        inv_indptr: np.ndarray,
        inv_ids: np.ndarray,
        inv_counts: np.ndarray,
        timelines: list[dict[int, int]],
        applicant_counts: list[dict[int, int]],
        inventor_counts: list[dict[int, int]],
        applicant_names: list[str],
        inventor_names: list[str],
        variant_map: dict[str, str],
    ):
        self.level = level
        self.registry = registry
        self.phrase_texts = phrase_texts
        self.doc_freq = doc_freq
        self.fwd_indptr = fwd_indptr
        self.fwd_dims = fwd_dims
        self.fwd_counts = fwd_counts
        self.norms = norms
        self.inv_indptr = inv_indptr
        self.inv_ids = inv_ids
        self.inv_counts = inv_counts
        self.timelines = timelines
        self.applicant_counts = applicant_counts
        self.inventor_counts = inventor_counts
        self.applicant_names = applicant_names
        self.inventor_names = inventor_names
        self.variant_map = variant_map
        self._by_text = {t: i for i, t in enumerate(phrase_texts)}

    # -- construction ------------------------------------------------------

    @classmethod
    def from_vectors(
        cls,
        phrase_texts: list[str],
        fwd_indptr: np.ndarray,
        fwd_dims: np.ndarray,
        fwd_counts: np.ndarray,
        registry: DimensionRegistry,
        level: GranularityLevel = GranularityLevel.MAIN_GROUP,
        doc_freq: Optional[np.ndarray] = None,
        timelines: Optional[list[dict[int, int]]] = None,
        applicant_counts: Optional[list[dict[int, int]]] = None,
        inventor_counts: Optional[list[dict[int, int]]] = None,
        applicant_names: Optional[list[str]] = None,
        inventor_names: Optional[list[str]] = None,
        variant_map: Optional[dict[str, str]] = None,
    ) -> "SimilarityIndex":
        """Build norms and posting lists from phrase-major CSR vectors.

        phrase_texts must be strictly ascending; dimension ids within each
        phrase strictly ascending with positive counts.
        """
        n = len(phrase_texts)
        if any(phrase_texts[i] >= phrase_texts[i + 1] for i in range(n - 1)):
            raise ValueError("phrase_texts must be strictly ascending")
        fwd_indptr = np.asarray(fwd_indptr, dtype=np.int64)
        fwd_dims = np.asarray(fwd_dims, dtype=np.int32)
        fwd_counts = np.asarray(fwd_counts, dtype=np.int32)
        if len(fwd_indptr) != n + 1:
            raise ValueError("indptr length must be n_phrases + 1")
        lengths = np.diff(fwd_indptr)
        if n and lengths.min() < 1:
            raise ValueError("every phrase vector must be nonempty")

        sq = fwd_counts.astype(np.int64)
        sq *= sq
        norms = np.sqrt(np.add.reduceat(sq, fwd_indptr[:-1]).astype(np.float64))
        del sq

        n_dims = len(registry)
        inv_indptr = np.zeros(n_dims + 1, dtype=np.int64)
        np.cumsum(np.bincount(fwd_dims, minlength=n_dims), out=inv_indptr[1:])
        order = np.argsort(fwd_dims, kind="stable")
        pid = np.repeat(np.arange(n, dtype=np.int32), lengths)
        inv_ids = pid[order]
        del pid
        inv_counts = fwd_counts[order]
        del order

        return cls(
            level=level,
            registry=registry,
            phrase_texts=list(phrase_texts),
            doc_freq=(
                np.asarray(doc_freq, dtype=np.int64)
                if doc_freq is not None
                else np.ones(n, dtype=np.int64)
            ),
            fwd_indptr=fwd_indptr,
            fwd_dims=fwd_dims,
            fwd_counts=fwd_counts,
            norms=norms,
            inv_indptr=inv_indptr,
            inv_ids=inv_ids,
            inv_counts=inv_counts,
            timelines=timelines if timelines is not None else [{} for _ in range(n)],
            applicant_counts=(
                applicant_counts if applicant_counts is not None else [{} for _ in range(n)]
            ),
            inventor_counts=(
                inventor_counts if inventor_counts is not None else [{} for _ in range(n)]
            ),
            applicant_names=applicant_names or [],
            inventor_names=inventor_names or [],
            variant_map=dict(variant_map) if variant_map else {},
        )

    # -- accessors ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.phrase_texts)

    @property
    def n_dims(self) -> int:
        return len(self.registry)

    def id_of(self, text: str) -> Optional[int]:
        return self._by_text.get(text)

    def resolve(self, query: str) -> Optional[int]:
        """Phrase id after query normalization and variant mapping."""
        key = normalize_query(query)
        key = self.variant_map.get(key, key)
        return self._by_text.get(key)

    def vector_of(self, phrase_id: int) -> SparseVector:
        s, e = self.fwd_indptr[phrase_id], self.fwd_indptr[phrase_id + 1]
        entries = tuple(
            (int(d), int(c))
            for d, c in zip(self.fwd_dims[s:e], self.fwd_counts[s:e])
        )
        return SparseVector(entries=entries, norm=float(self.norms[phrase_id]))

    def suggestions_for(self, query: str) -> list[str]:
        """Vocabulary phrases with the normalized query as prefix, ascending."""
        prefix = normalize_query(query)
        if not prefix:
            return []
        out = []
        for i in range(bisect_left(self.phrase_texts, prefix), len(self.phrase_texts)):
            if not self.phrase_texts[i].startswith(prefix):
                break
            out.append(self.phrase_texts[i])
            if len(out) >= MAX_SUGGESTIONS:
                break
        return out

    # -- search ------------------------------------------------------------

    def search(self, query: str, offset: int = 0, limit: int = MAX_LIMIT) -> SearchPage:
        """Exact top-k over all phrases sharing >= 1 dimension with the query.

        Descending similarity, ties by phrase text ascending; the query
        phrase itself is excluded. Deterministic for a fixed index.
        """
        if offset < 0:
            raise ValueError("offset must be >= 0")
        if not 1 <= limit <= MAX_LIMIT:
            raise ValueError(f"limit must be in [1, {MAX_LIMIT}]")
        qid = self.resolve(query)
        if qid is None:
            raise UnknownPhrase(query, self.suggestions_for(query))

        s, e = self.fwd_indptr[qid], self.fwd_indptr[qid + 1]
        acc = np.zeros(len(self.phrase_texts), dtype=np.int64)
        for dim, qcount in zip(self.fwd_dims[s:e], self.fwd_counts[s:e]):
            ds, de = self.inv_indptr[dim], self.inv_indptr[dim + 1]
            # posting-list phrase ids are unique, so fancy indexing is safe
            acc[self.inv_ids[ds:de]] += self.inv_counts[ds:de].astype(np.int64) * int(qcount)
        acc[qid] = 0
        cand = np.nonzero(acc)[0]
        sims = acc[cand] / (self.norms[cand] * self.norms[qid])
        # phrase ids ascend with text, so a stable sort on -sim yields the
        # documented (similarity desc, text asc) order
        order = np.argsort(-sims, kind="stable")
        sel = order[offset : offset + limit]
        results = tuple(
            SearchResult(
                phrase_id=int(cand[i]),
                phrase=self.phrase_texts[cand[i]],
                similarity=float(sims[i]),
            )
            for i in sel
        )
        key = normalize_query(query)
        return SearchPage(
            query=self.variant_map.get(key, key),
            total=int(len(cand)),
            results=results,
        )

    # -- equality ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimilarityIndex):
            return NotImplemented
        return (
            self.level == other.level
            and self.registry == other.registry
            and self.phrase_texts == other.phrase_texts
            and np.array_equal(self.doc_freq, other.doc_freq)
            and np.array_equal(self.fwd_indptr, other.fwd_indptr)
            and np.array_equal(self.fwd_dims, other.fwd_dims)
            and np.array_equal(self.fwd_counts, other.fwd_counts)
            and np.array_equal(self.norms, other.norms)
            and np.array_equal(self.inv_indptr, other.inv_indptr)
            and np.array_equal(self.inv_ids, other.inv_ids)
            and np.array_equal(self.inv_counts, other.inv_counts)
            and self.timelines == other.timelines
            and self.applicant_counts == other.applicant_counts
            and self.inventor_counts == other.inventor_counts
            and self.applicant_names == other.applicant_names
            and self.inventor_names == other.inventor_names
            and self.variant_map == other.variant_map
        )


def build_index(eset: EmbeddingSet) -> SimilarityIndex:
    """Assemble the searchable structure from a finalized embedding set."""
    texts = [kp.phrase for kp in eset.phrases]
    lengths = [len(kp.cpc_vector) for kp in eset.phrases]
    indptr = np.zeros(len(texts) + 1, dtype=np.int64)
    np.cumsum(lengths, out=indptr[1:])
    dims = np.empty(int(indptr[-1]), dtype=np.int32)
    counts = np.empty(int(indptr[-1]), dtype=np.int32)
    pos = 0
    for kp in eset.phrases:
        for d, c in kp.cpc_vector.entries:
            dims[pos] = d
            counts[pos] = c
            pos += 1
    return SimilarityIndex.from_vectors(
        phrase_texts=texts,
        fwd_indptr=indptr,
        fwd_dims=dims,
        fwd_counts=counts,
        registry=eset.registry,
        level=eset.level,
        doc_freq=np.array([kp.doc_freq for kp in eset.phrases], dtype=np.int64),
        timelines=[dict(kp.timeline) for kp in eset.phrases],
        applicant_counts=[dict(kp.applicant_counts) for kp in eset.phrases],
        inventor_counts=[dict(kp.inventor_counts) for kp in eset.phrases],
        applicant_names=list(eset.applicant_names.texts),
        inventor_names=list(eset.inventor_names.texts),
        variant_map=dict(eset.variant_map),
    )


# -- binary persistence ----------------------------------------------------
#
# Little-endian, sections in order: magic "PKVX", version u32, granularity
# u8, phrase count u64, dimension count u64; dimension string table; phrase
# records; posting lists (delta-encoded ids, varint counts); entity tables;
# variant map; trailing CRC32 of all preceding bytes.


def _write_varint(buf: bytearray, value: int) -> None:
    if value < 0:
        raise ValueError("varint must be nonnegative")
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            buf.append(byte | 0x80)
        else:
            buf.append(byte)
            return


def _write_str(buf: bytearray, text: str) -> None:
    raw = text.encode("utf-8")
    buf += struct.pack("<I", len(raw))
    buf += raw


def _write_counter(buf: bytearray, mapping: dict[int, int]) -> None:
    items = sorted(mapping.items())
    _write_varint(buf, len(items))
    prev = 0
    for key, count in items:
        _write_varint(buf, key - prev)
        _write_varint(buf, count)
        prev = key


class _Cursor:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def read(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise ChecksumMismatch("unexpected end of index data")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self.read(1)[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.read(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.read(8))[0]

    def f64(self) -> float:
        return struct.unpack("<d", self.read(8))[0]

    def varint(self) -> int:
        shift = 0
        value = 0
        while True:
            byte = self.u8()
            value |= (byte & 0x7F) << shift
            if not byte & 0x80:
                return value
            shift += 7

    def string(self) -> str:
        return self.read(self.u32()).decode("utf-8")

    def counter(self) -> dict[int, int]:
        n = self.varint()
        out = {}
        prev = 0
        for _ in range(n):
            prev += self.varint()
            out[prev] = self.varint()
        return out


def save_index(index: SimilarityIndex, path: Union[str, Path]) -> None:
    buf = bytearray()
    buf += FORMAT_MAGIC
    buf += struct.pack("<I", FORMAT_VERSION)
    buf += struct.pack("<B", int(index.level))
    buf += struct.pack("<Q", len(index.phrase_texts))
    buf += struct.pack("<Q", index.n_dims)

    for text in index.registry.texts:
        _write_str(buf, text)

    for pid, text in enumerate(index.phrase_texts):
        _write_str(buf, text)
        _write_varint(buf, int(index.doc_freq[pid]))
        buf += struct.pack("<d", float(index.norms[pid]))
        s, e = index.fwd_indptr[pid], index.fwd_indptr[pid + 1]
        _write_varint(buf, int(e - s))
        prev = 0
        for d, c in zip(index.fwd_dims[s:e], index.fwd_counts[s:e]):
            _write_varint(buf, int(d) - prev)
            _write_varint(buf, int(c))
            prev = int(d)
        _write_counter(buf, index.timelines[pid])
        _write_counter(buf, index.applicant_counts[pid])
        _write_counter(buf, index.inventor_counts[pid])

    for dim in range(index.n_dims):
        s, e = index.inv_indptr[dim], index.inv_indptr[dim + 1]
        _write_varint(buf, int(e - s))
        prev = 0
        for pid, c in zip(index.inv_ids[s:e], index.inv_counts[s:e]):
            _write_varint(buf, int(pid) - prev)
            _write_varint(buf, int(c))
            prev = int(pid)

    _write_varint(buf, len(index.applicant_names))
    for name in index.applicant_names:
        _write_str(buf, name)
    _write_varint(buf, len(index.inventor_names))
    for name in index.inventor_names:
        _write_str(buf, name)

    _write_varint(buf, len(index.variant_map))
    for src in sorted(index.variant_map):
        _write_str(buf, src)
        _write_str(buf, index.variant_map[src])

    buf += struct.pack("<I", zlib.crc32(bytes(buf)))
    Path(path).write_bytes(bytes(buf))


def load_index(path: Union[str, Path]) -> SimilarityIndex:
    data = Path(path).read_bytes()
    if len(data) < 4 or data[:4] != FORMAT_MAGIC:
        raise BadMagic(f"not an index file: {path}")
    if len(data) < 29:
        raise ChecksumMismatch("file too short")
    version = struct.unpack("<I", data[4:8])[0]
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"format version {version}, expected {FORMAT_VERSION}")
    stored_crc = struct.unpack("<I", data[-4:])[0]
    if zlib.crc32(data[:-4]) != stored_crc:
        raise ChecksumMismatch("CRC32 mismatch")

    cur = _Cursor(data[:-4])
    cur.pos = 8
    level = GranularityLevel(cur.u8())
    n_phrases = cur.u64()
    n_dims = cur.u64()

    registry = DimensionRegistry([cur.string() for _ in range(n_dims)])

    phrase_texts: list[str] = []
    doc_freq = np.empty(n_phrases, dtype=np.int64)
    norms = np.empty(n_phrases, dtype=np.float64)
    fwd_indptr = np.zeros(n_phrases + 1, dtype=np.int64)
    dims_parts: list[list[int]] = []
    counts_parts: list[list[int]] = []
    timelines: list[dict[int, int]] = []
    applicant_counts: list[dict[int, int]] = []
    inventor_counts: list[dict[int, int]] = []
    for pid in range(n_phrases):
        phrase_texts.append(cur.string())
        doc_freq[pid] = cur.varint()
        norms[pid] = cur.f64()
        n_entries = cur.varint()
        dims_row = []
        counts_row = []
        prev = 0
        for _ in range(n_entries):
            prev += cur.varint()
            dims_row.append(prev)
            counts_row.append(cur.varint())
        dims_parts.append(dims_row)
        counts_parts.append(counts_row)
        fwd_indptr[pid + 1] = fwd_indptr[pid] + n_entries
        timelines.append(cur.counter())
        applicant_counts.append(cur.counter())
        inventor_counts.append(cur.counter())
    fwd_dims = np.array(
        [d for row in dims_parts for d in row], dtype=np.int32
    )
    fwd_counts = np.array(
        [c for row in counts_parts for c in row], dtype=np.int32
    )

    inv_indptr = np.zeros(n_dims + 1, dtype=np.int64)
    inv_ids_parts: list[list[int]] = []
    inv_counts_parts: list[list[int]] = []
    for dim in range(n_dims):
        n_post = cur.varint()
        ids_row = []
        counts_row = []
        prev = 0
        for _ in range(n_post):
            prev += cur.varint()
            ids_row.append(prev)
            counts_row.append(cur.varint())
        inv_ids_parts.append(ids_row)
        inv_counts_parts.append(counts_row)
        inv_indptr[dim + 1] = inv_indptr[dim] + n_post
    inv_ids = np.array([i for row in inv_ids_parts for i in row], dtype=np.int32)
    inv_counts = np.array([c for row in inv_counts_parts for c in row], dtype=np.int32)

    applicant_names = [cur.string() for _ in range(cur.varint())]
    inventor_names = [cur.string() for _ in range(cur.varint())]
    variant_map = {}
    for _ in range(cur.varint()):
        src = cur.string()
        variant_map[src] = cur.string()

    return SimilarityIndex(
        level=level,
        registry=registry,
        phrase_texts=phrase_texts,
        doc_freq=doc_freq,
        fwd_indptr=fwd_indptr,
        fwd_dims=fwd_dims,
        fwd_counts=fwd_counts,
        norms=norms,
        inv_indptr=inv_indptr,
        inv_ids=inv_ids,
        inv_counts=inv_counts,
        timelines=timelines,
        applicant_counts=applicant_counts,
        inventor_counts=inventor_counts,
        applicant_names=applicant_names,
        inventor_names=inventor_names,
        variant_map=variant_map,
    )
