from __future__ import annotations

import json

import pytest

from conftest import FIXTURE_VOCAB, write_jsonl
from pkv.cli import main
from pkv.config import Config, parse_config_file, resolve_config
from pkv.cpc import GranularityLevel
from pkv.index import load_index


@pytest.fixture
def built_index_path(corpus_path, tmp_path):
    out = tmp_path / "fixture.pkvx"
    status = main(
        ["build", "--input", str(corpus_path), "--output", str(out), "--min-doc-freq", "2"]
    )
    assert status == 0
    return out


def test_build_produces_expected_vocabulary(built_index_path, capsys):
    index = load_index(built_index_path)
    assert index.phrase_texts == FIXTURE_VOCAB


def test_build_report_printed(corpus_path, tmp_path, capsys):
    out = tmp_path / "report.pkvx"
    main(["build", "--input", str(corpus_path), "--output", str(out), "--min-doc-freq", "2"])
    report = capsys.readouterr().out
    assert "records: 5 accepted, 0 rejected" in report
    assert "dimensions: 5" in report


def test_build_unreadable_input(tmp_path, capsys):
    status = main(
        ["build", "--input", str(tmp_path / "absent.jsonl"), "--output", str(tmp_path / "x")]
    )
    assert status == 2
    assert "absent.jsonl" in capsys.readouterr().err


def test_build_empty_vocabulary(tmp_path, capsys):
    path = tmp_path / "thin.jsonl"
    write_jsonl(
        path,
        [
            {
                "patent_id": "EP1",
                "abstract": "unique gearbox",
                "cpc": ["F16H 57/08"],
                "date": "2010-01-01",
            }
        ],
    )
    status = main(
        ["build", "--input", str(path), "--output", str(tmp_path / "x"), "--min-doc-freq", "5"]
    )
    assert status == 3


def test_query_output(built_index_path, capsys):
    status = main(["query", "--index", str(built_index_path), "smartphone", "-k", "3"])
    assert status == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "1\tsmart phone\t1.000000"
    assert len(lines) <= 3


def test_query_k_larger_than_candidates(built_index_path, capsys):
    status = main(["query", "--index", str(built_index_path), "smartphone", "-k", "500"])
    assert status == 0
    # smartphone shares dimensions with smart phone only
    assert len(capsys.readouterr().out.splitlines()) == 1


def test_query_unknown_phrase(built_index_path, capsys):
    status = main(["query", "--index", str(built_index_path), "smart"])
    assert status == 4
    err = capsys.readouterr().err
    assert "smart phone" in err


def test_query_bad_index_file(tmp_path, capsys):
    bad = tmp_path / "bad.pkvx"
    bad.write_bytes(b"JUNKJUNKJUNK")
    status = main(["query", "--index", str(bad), "smartphone"])
    assert status == 2


def test_query_output_stable(built_index_path, capsys):
    main(["query", "--index", str(built_index_path), "drive train", "-k", "5"])
    first = capsys.readouterr().out
    main(["query", "--index", str(built_index_path), "drive train", "-k", "5"])
    assert capsys.readouterr().out == first


def test_export_counts(built_index_path, tmp_path, capsys):
    out = tmp_path / "vectors.jsonl"
    status = main(["export", "--index", str(built_index_path), "--output", str(out)])
    assert status == 0
    lines = out.read_text().splitlines()
    assert len(lines) == len(FIXTURE_VOCAB)
    assert json.loads(lines[0])["phrase"] == FIXTURE_VOCAB[0]


def test_export_missing_dir(built_index_path, tmp_path, capsys):
    target = tmp_path / "no" / "such" / "dir" / "out.jsonl"
    status = main(["export", "--index", str(built_index_path), "--output", str(target)])
    assert status == 2


def test_config_precedence(tmp_path, monkeypatch):
    cfg_file = tmp_path / "pkv.conf"
    cfg_file.write_text("min_doc_freq = 7\nlevel = subclass  # comment\n")
    assert parse_config_file(cfg_file) == {"min_doc_freq": "7", "level": "subclass"}

    env = {"PKV_MIN_DOC_FREQ": "9", "PKV_PORT": "9001"}
    config = resolve_config(
        cli_values={"min_doc_freq": 11}, config_path=cfg_file, env=env
    )
    assert config.min_doc_freq == 11  # CLI wins
    assert config.port == 9001  # env over default
    assert config.level == GranularityLevel.SUBCLASS  # file over default
    assert config.max_phrase_len == 5  # default


def test_config_rejects_unknown_key(tmp_path):
    cfg_file = tmp_path / "bad.conf"
    cfg_file.write_text("bogus = 1\n")
    with pytest.raises(ValueError):
        parse_config_file(cfg_file)


def test_config_defaults():
    config = resolve_config(env={})
    assert config == Config()


def test_build_level_flag(corpus_path, tmp_path):
    out = tmp_path / "section.pkvx"
    status = main(
        [
            "build",
            "--input",
            str(corpus_path),
            "--output",
            str(out),
            "--min-doc-freq",
            "2",
            "--level",
            "section",
        ]
    )
    assert status == 0
    index = load_index(out)
    assert index.level == GranularityLevel.SECTION
    assert set(index.registry.texts) <= {"H", "F", "G"}
