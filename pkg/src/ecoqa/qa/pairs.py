"""QA-pair records and streaming readers for TSV / JSONL inputs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from ecoqa.errors import DatasetError
from ecoqa.jsonl import write_jsonl

ORIGINS = ("paq", "msmarco", "fixture")
LANGUAGES = ("en", "pt")
SPLITS = ("train", "validation", "test")


@dataclass
class QAPair:
    question: str
    answer: str
    origin: str = "paq"
    language: str = "en"
    split: str | None = None

    def to_dict(self) -> dict:
        return {
            "question": self.question,
            "answer": self.answer,
            "origin": self.origin,
            "language": self.language,
            "split": self.split,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "QAPair":
        return cls(
            question=record["question"],
            answer=record["answer"],
            origin=record.get("origin", "paq"),
            language=record.get("language", "en"),
            split=record.get("split"),
        )


def iter_qa_pairs(
    lines: Iterable[str],
    origin: str = "paq",
    language: str = "en",
    report=None,
) -> Iterator[QAPair]:
    """Parse a pair stream, auto-detecting TSV vs JSONL from the first line.

    Malformed lines (bad JSON, missing tab, empty question or answer) are
    skipped; when ``report`` exposes a ``malformed`` counter it is
    incremented per skip, so tens of millions of lines never abort a run.
    """
    fmt = None
    for line in lines:
        line = line.rstrip("\n")
        if not line.strip():
            continue
        if fmt is None:
            fmt = "jsonl" if line.lstrip().startswith("{") else "tsv"
        pair = _parse_line(line, fmt, origin, language)
        if pair is None:
            if report is not None:
                report.malformed += 1
            continue
        yield pair


def _parse_line(line: str, fmt: str, origin: str, language: str) -> QAPair | None:
    if fmt == "jsonl":
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            return None
        if not isinstance(record, dict):
            return None
        question = record.get("question")
        answer = record.get("answer")
        if not question or not answer:
            return None
        return QAPair(
            question=str(question),
            answer=str(answer),
            origin=record.get("origin", origin),
            language=record.get("language", language),
            split=record.get("split"),
        )
    parts = line.split("\t")
    if len(parts) < 2 or not parts[0].strip() or not parts[1].strip():
        return None
    return QAPair(question=parts[0].strip(), answer=parts[1].strip(), origin=origin, language=language)


def read_qa_pairs(path: str | Path, origin: str = "paq", language: str = "en", report=None) -> Iterator[QAPair]:
    with open(path, "r", encoding="utf-8") as handle:
        yield from iter_qa_pairs(handle, origin=origin, language=language, report=report)


def save_qa_pairs(path: str | Path, pairs: Iterable[QAPair]) -> int:
    return write_jsonl(path, (pair.to_dict() for pair in pairs))


def load_qa_pairs(path: str | Path) -> list[QAPair]:
    pairs = list(read_qa_pairs(path))
    if not pairs:
        raise DatasetError(f"no QA pairs found in {path}")
    return pairs
