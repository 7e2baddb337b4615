"""Document and passage records plus their JSONL serialization.

Identifiers are assigned by a single sequential allocator per store, so
serialized files can be re-read without renumbering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Iterable, Iterator

from ecoqa.jsonl import read_jsonl, write_jsonl

SOURCES = ("wiki", "news")


@dataclass
class Document:
    """A cleaned source text ready for chunking and indexing."""

    id: int
    source: str
    title: str
    body: str
    published_at: date | None = None
    url: str | None = None
    keywords_matched: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "title": self.title,
            "body": self.body,
            "published_at": self.published_at.isoformat() if self.published_at else None,
            "url": self.url,
            "keywords_matched": list(self.keywords_matched),
        }

    @classmethod
    def from_dict(cls, record: dict) -> "Document":
        raw_date = record.get("published_at")
        return cls(
            id=int(record["id"]),
            source=record["source"],
            title=record.get("title", ""),
            body=record["body"],
            published_at=date.fromisoformat(raw_date) if raw_date else None,
            url=record.get("url"),
            keywords_matched=list(record.get("keywords_matched") or []),
        )


@dataclass
class Passage:
    """A fixed-size word window of a document; the unit of retrieval."""

    passage_id: int
    doc_id: int
    index_in_doc: int
    text: str
    word_count: int

    def to_dict(self) -> dict:
        return {
            "passage_id": self.passage_id,
            "doc_id": self.doc_id,
            "index_in_doc": self.index_in_doc,
            "text": self.text,
            "word_count": self.word_count,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "Passage":
        return cls(
            passage_id=int(record["passage_id"]),
            doc_id=int(record["doc_id"]),
            index_in_doc=int(record["index_in_doc"]),
            text=record["text"],
            word_count=int(record["word_count"]),
        )


def save_documents(path: str | Path, docs: Iterable[Document]) -> int:
    return write_jsonl(path, (doc.to_dict() for doc in docs))


def load_documents(path: str | Path) -> Iterator[Document]:
    for record in read_jsonl(path):
        yield Document.from_dict(record)


def save_passages(path: str | Path, passages: Iterable[Passage]) -> int:
    return write_jsonl(path, (p.to_dict() for p in passages))


def load_passages(path: str | Path) -> Iterator[Passage]:
    for record in read_jsonl(path):
        yield Passage.from_dict(record)
