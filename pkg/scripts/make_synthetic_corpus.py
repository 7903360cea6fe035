#!/usr/bin/env python3
"""Generate a synthetic JSONL patent corpus for demos and benchmarks.

Abstracts are assembled from a small technical vocabulary so the pipeline
produces a nontrivial phrase inventory; CPC codes are drawn per-patent from
a handful of technology clusters so related phrases share dimensions.
"""

from __future__ import annotations

import argparse
import json
import random

CLUSTERS = {
    "communication": {
        "codes": ["H04W 88/02", "H04M 1/02", "H04L 9/00", "H04B 7/26"],
        "words": [
            "smartphone", "antenna", "wireless communication unit", "base station",
            "mobile terminal device", "signal processor", "transceiver",
        ],
    },
    "automotive": {
        "codes": ["F16H 57/08", "F16H 1/28", "B60K 6/36", "F16D 3/12"],
        "words": [
            "drive train", "planetary carrier", "gear box", "clutch assembly",
            "output shaft", "torque converter", "epicyclic gearing",
        ],
    },
    "measurement": {
        "codes": ["G01D 21/02", "G01N 27/00", "G01R 31/36"],
        "words": [
            "sensor", "measuring probe", "calibration unit", "signal amplifier",
            "detector array",
        ],
    },
}

FILLER = ["the", "a", "for", "with", "is", "of", "to", "and"]
APPLICANTS = ["Acme Corp", "Gears GmbH", "Metrology AG", "Wavelink Ltd", "Rotor SA"]
INVENTORS = ["A. Smith", "B. Jones", "C. Miller", "D. Chen", "E. Weber", "F. Rossi"]


def make_abstract(rng: random.Random, words: list[str]) -> str:
    sentences = []
    for _ in range(rng.randint(2, 4)):
        parts = []
        for _ in range(rng.randint(2, 4)):
            parts.append(rng.choice(FILLER))
            parts.append(rng.choice(words))
        sentences.append(" ".join(parts).capitalize() + ".")
    return " ".join(sentences)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--output", required=True)
    parser.add_argument("--patents", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    clusters = list(CLUSTERS.values())
    with open(args.output, "w", encoding="utf-8") as fh:
        for i in range(args.patents):
            cluster = rng.choice(clusters)
            year = rng.randint(1990, 2019)
            record = {
                "patent_id": f"EP{i:07d}",
                "abstract": make_abstract(rng, cluster["words"]),
                "cpc": rng.sample(cluster["codes"], rng.randint(1, 3)),
                "date": f"{year}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}",
                "applicants": [rng.choice(APPLICANTS)],
                "inventors": rng.sample(INVENTORS, rng.randint(1, 2)),
            }
            fh.write(json.dumps(record) + "\n")
    print(f"wrote {args.patents} records to {args.output}")


if __name__ == "__main__":
    main()
