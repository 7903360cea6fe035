"""Command line interface: build, query, serve, export."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from pkv.config import resolve_config
from pkv.cpc import GranularityLevel
from pkv.embed import EmptyVocabulary
from pkv.index import IndexFormatError, UnknownPhrase, load_index, save_index

EXIT_OK = 0
EXIT_IO = 2
EXIT_EMPTY_VOCAB = 3
EXIT_UNKNOWN_PHRASE = 4


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument(
        "--level",
        choices=["section", "class", "subclass", "group", "subgroup"],
        help="CPC truncation level (default: group)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pkv", description="Patent key-phrase embedding and synonym search."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build an index from a JSONL corpus")
    p_build.add_argument("--input", required=True, help="JSONL corpus path")
    p_build.add_argument("--output", required=True, help="index file to write")
    p_build.add_argument("--min-doc-freq", type=int, dest="min_doc_freq")
    p_build.add_argument("--stopwords", dest="stopword_path", help="stop word file")
    p_build.add_argument("--max-phrase-len", type=int, dest="max_phrase_len")
    p_build.add_argument("--min-phrase-score", type=float, dest="min_phrase_score")
    _add_config_flags(p_build)

    p_query = sub.add_parser("query", help="print nearest phrases")
    p_query.add_argument("--index", required=True)
    p_query.add_argument("phrase")
    p_query.add_argument("-k", type=int, default=10)

    p_serve = sub.add_parser("serve", help="run the HTTP search service")
    p_serve.add_argument("--index", required=True)
    p_serve.add_argument("--port", type=int)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--cors", dest="cors_origin", help="allowed UI origin")
    p_serve.add_argument("--config")

    p_export = sub.add_parser("export", help="export vectors as JSONL")
    p_export.add_argument("--index", required=True)
    p_export.add_argument("--output", required=True)

    return parser


def cmd_build(args: argparse.Namespace) -> int:
    from pkv.index import build_index
    from pkv.pipeline import build_embedding_set

    config = resolve_config(
        cli_values={
            "level": GranularityLevel.from_name(args.level) if args.level else None,
            "min_doc_freq": args.min_doc_freq,
            "stopword_path": args.stopword_path,
            "max_phrase_len": args.max_phrase_len,
            "min_phrase_score": args.min_phrase_score,
        },
        config_path=args.config,
    )
    try:
        eset, report = build_embedding_set(args.input, config)
    except FileNotFoundError:
        print(f"error: cannot read corpus: {args.input}", file=sys.stderr)
        return EXIT_IO
    except EmptyVocabulary as exc:
        print(f"error: empty vocabulary: {exc}", file=sys.stderr)
        return EXIT_EMPTY_VOCAB
    index = build_index(eset)
    try:
        save_index(index, args.output)
    except OSError as exc:
        print(f"error: cannot write index {args.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(report.summary())
    return EXIT_OK


def _load_or_fail(path: str):
    try:
        return load_index(path), EXIT_OK
    except FileNotFoundError:
        print(f"error: cannot read index: {path}", file=sys.stderr)
        return None, EXIT_IO
    except IndexFormatError as exc:
        print(f"error: bad index file {path}: {exc}", file=sys.stderr)
        return None, EXIT_IO


def cmd_query(args: argparse.Namespace) -> int:
    index, status = _load_or_fail(args.index)
    if index is None:
        return status
    try:
        page = index.search(args.phrase, offset=0, limit=max(1, args.k))
    except UnknownPhrase as exc:
        print(f"error: unknown phrase: {exc.query}", file=sys.stderr)
        for suggestion in exc.suggestions:
            print(f"  suggestion: {suggestion}", file=sys.stderr)
        return EXIT_UNKNOWN_PHRASE
    for rank, result in enumerate(page.results, start=1):
        print(f"{rank}\t{result.phrase}\t{result.similarity:.6f}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from pkv.service import create_app

    config = resolve_config(
        cli_values={"port": args.port, "cors_origin": args.cors_origin},
        config_path=args.config,
    )
    index, status = _load_or_fail(args.index)
    if index is None:
        return status
    app = create_app(index, cors_origin=config.cors_origin)
    uvicorn.run(app, host=args.host, port=config.port)
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    from pkv.service import export_vectors

    index, status = _load_or_fail(args.index)
    if index is None:
        return status
    try:
        count = export_vectors(index, args.output)
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"exported {count} phrases")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "build": cmd_build,
        "query": cmd_query,
        "serve": cmd_serve,
        "export": cmd_export,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
