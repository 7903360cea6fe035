"""Patent key-phrase vectors: extraction, embedding, and synonym search."""

from pkv.cpc import CpcCode, DimensionRegistry, GranularityLevel, parse_cpc, truncate
from pkv.corpus import PatentRecord, load_corpus, parse_patent_record
from pkv.embed import EmbeddingBuilder, EmbeddingSet, KeyPhrase, SparseVector
from pkv.index import SimilarityIndex, build_index, cosine, load_index, save_index

__version__ = "0.1.0"

__all__ = [
    "CpcCode",
    "DimensionRegistry",
    "EmbeddingBuilder",
    "EmbeddingSet",
    "GranularityLevel",
    "KeyPhrase",
    "PatentRecord",
    "SimilarityIndex",
    "SparseVector",
    "build_index",
    "cosine",
    "load_corpus",
    "load_index",
    "parse_cpc",
    "parse_patent_record",
    "save_index",
    "truncate",
]
