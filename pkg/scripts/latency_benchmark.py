#!/usr/bin/env python3
"""Standalone latency benchmark: full-scale synthetic index, query timings.

Builds an in-memory index of --phrases sparse vectors over --dims
dimensions (~20 nonzeros each), then reports build time and single-query
latency percentiles over --queries random known phrases.
"""

from __future__ import annotations

import argparse
import string
import time

import numpy as np

from pkv.cpc import DimensionRegistry
from pkv.index import SimilarityIndex


def base26_name(i: int, width: int = 5) -> str:
    out = []
    for _ in range(width):
        i, r = divmod(i, 26)
        out.append(string.ascii_lowercase[r])
    return "".join(reversed(out))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--phrases", type=int, default=2_500_000)
    parser.add_argument("--dims", type=int, default=10_000)
    parser.add_argument("--nnz", type=int, default=20)
    parser.add_argument("--queries", type=int, default=100)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    d = np.sort(
        rng.integers(0, args.dims, size=(args.phrases, args.nnz), dtype=np.int32), axis=1
    )
    keep = np.ones_like(d, dtype=bool)
    keep[:, 1:] = d[:, 1:] != d[:, :-1]
    lengths = keep.sum(axis=1)
    fwd_dims = d[keep]
    del d, keep
    counts = rng.integers(1, 6, size=len(fwd_dims), dtype=np.int32)
    indptr = np.zeros(args.phrases + 1, dtype=np.int64)
    np.cumsum(lengths, out=indptr[1:])
    texts = [base26_name(i) for i in range(args.phrases)]
    registry = DimensionRegistry([f"SYN{i}" for i in range(args.dims)])

    start = time.perf_counter()
    index = SimilarityIndex.from_vectors(texts, indptr, fwd_dims, counts, registry)
    build_time = time.perf_counter() - start
    print(f"build: {build_time:.1f}s for {args.phrases} phrases / {args.dims} dims")

    latencies = []
    for qid in rng.integers(0, args.phrases, size=args.queries):
        t0 = time.perf_counter()
        index.search(texts[int(qid)], limit=50)
        latencies.append(time.perf_counter() - t0)
    lat = np.array(latencies) * 1e3
    print(
        f"queries: {args.queries}  median {np.median(lat):.1f}ms  "
        f"p95 {np.percentile(lat, 95):.1f}ms  p99 {np.percentile(lat, 99):.1f}ms  "
        f"max {lat.max():.1f}ms"
    )


if __name__ == "__main__":
    main()
