"""HTTP API over a loaded similarity index, plus the vector export."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from pkv.index import MAX_LIMIT, SimilarityIndex, UnknownPhrase

DEFAULT_LIMIT = 50
TOP_N_META = 20


def phrase_metadata(index: SimilarityIndex, phrase_id: int) -> dict:
    """Timeline, top technology classes, applicants, and inventors."""
    s, e = index.fwd_indptr[phrase_id], index.fwd_indptr[phrase_id + 1]
    cpc = [
        (index.registry.text_of(int(d)), int(c))
        for d, c in zip(index.fwd_dims[s:e], index.fwd_counts[s:e])
    ]
    cpc.sort(key=lambda item: (-item[1], item[0]))

    def top_names(counts: dict[int, int], names: list[str]) -> list[list]:
        ranked = sorted(
            ((names[i], c) for i, c in counts.items()),
            key=lambda item: (-item[1], item[0]),
        )
        return [[name, count] for name, count in ranked[:TOP_N_META]]

    return {
        "id": phrase_id,
        "phrase": index.phrase_texts[phrase_id],
        "doc_freq": int(index.doc_freq[phrase_id]),
        "timeline": [
            [year, count] for year, count in sorted(index.timelines[phrase_id].items())
        ],
        "top_cpc": [[text, count] for text, count in cpc[:TOP_N_META]],
        "top_applicants": top_names(
            index.applicant_counts[phrase_id], index.applicant_names
        ),
        "top_inventors": top_names(
            index.inventor_counts[phrase_id], index.inventor_names
        ),
    }


def create_app(index: SimilarityIndex, cors_origin: Optional[str] = None) -> FastAPI:
    """Stateless read-only API; the index is shared and immutable."""
    app = FastAPI(title="pkv", docs_url=None, redoc_url=None)

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["GET"],
            allow_headers=["*"],
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "phrases": len(index)}

    @app.get("/api/search")
    def search(q: Optional[str] = None, offset: int = 0, limit: int = DEFAULT_LIMIT):
        if q is None or not q.strip():
            raise HTTPException(status_code=400, detail="missing query parameter q")
        if not 1 <= limit <= MAX_LIMIT:
            raise HTTPException(
                status_code=400, detail=f"limit must be in [1, {MAX_LIMIT}]"
            )
        if offset < 0:
            raise HTTPException(status_code=400, detail="offset must be >= 0")
        try:
            page = index.search(q, offset=offset, limit=limit)
        except UnknownPhrase as exc:
            return JSONResponse(
                status_code=404,
                content={
                    "error": f"unknown phrase: {exc.query}",
                    "suggestions": exc.suggestions,
                },
            )
        return {
            "query": page.query,
            "total": page.total,
            "results": [
                {
                    "id": r.phrase_id,
                    "phrase": r.phrase,
                    "similarity": round(r.similarity, 6),
                }
                for r in page.results
            ],
        }

    @app.get("/api/phrase/{phrase_id}")
    def phrase_by_id(phrase_id: int):
        if not 0 <= phrase_id < len(index):
            return JSONResponse(
                status_code=404,
                content={"error": f"unknown phrase id: {phrase_id}", "suggestions": []},
            )
        return phrase_metadata(index, phrase_id)

    @app.get("/api/phrase-by-text")
    def phrase_by_text(q: Optional[str] = None):
        if q is None or not q.strip():
            raise HTTPException(status_code=400, detail="missing query parameter q")
        phrase_id = index.resolve(q)
        if phrase_id is None:
            return JSONResponse(
                status_code=404,
                content={
                    "error": f"unknown phrase: {q}",
                    "suggestions": index.suggestions_for(q),
                },
            )
        return phrase_metadata(index, phrase_id)

    return app


def export_vectors(index: SimilarityIndex, path: Union[str, Path]) -> int:
    """One JSONL line per phrase with dimensions as canonical code texts.

    The output feeds external projection tooling; returns the line count.
    """
    path = Path(path)
    count = 0
    with path.open("w", encoding="utf-8") as fh:
        for pid in range(len(index)):
            s, e = index.fwd_indptr[pid], index.fwd_indptr[pid + 1]
            dims = [
                [index.registry.text_of(int(d)), int(c)]
                for d, c in zip(index.fwd_dims[s:e], index.fwd_counts[s:e])
            ]
            fh.write(
                json.dumps(
                    {
                        "phrase": index.phrase_texts[pid],
                        "dims": dims,
                        "doc_freq": int(index.doc_freq[pid]),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
            count += 1
    return count
