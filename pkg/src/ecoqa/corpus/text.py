"""Text cleaning and fixed-size word chunking."""

from __future__ import annotations

from typing import Iterable, Iterator

from ecoqa.corpus.documents import Document, Passage
from ecoqa.errors import CorpusError

DEFAULT_PASSAGE_SIZE = 100

# Punctuation allowed to survive cleaning; everything else that is not a
# letter, a digit, or whitespace is removed.
_KEPT_PUNCT = frozenset(".,;:?!()- ")


def clean_text(raw: str) -> str:
    """Normalize raw text to a single-spaced line of plain words.

    Line breaks become spaces, characters outside the allowed class
    (letters, digits, basic punctuation) are dropped, whitespace runs
    collapse to one space, and the result is trimmed.  An empty return
    value signals an empty document; callers drop those.
    """
    kept = []
    for ch in raw:
        if ch.isspace():
            kept.append(" ")
        elif ch.isalpha() or ch.isdigit() or ch in _KEPT_PUNCT:
            kept.append(ch)
    return " ".join("".join(kept).split())


def chunk(doc: Document, passage_size: int = DEFAULT_PASSAGE_SIZE, first_passage_id: int = 0) -> list[Passage]:
    """Split a cleaned document into consecutive word windows.

    Words are maximal non-space runs.  Windows do not overlap; the final
    window keeps the remainder, so concatenating the passages in order
    reproduces the body's word sequence exactly.
    """
    if passage_size < 1:
        raise CorpusError(f"passage_size must be positive, got {passage_size}")
    words = doc.body.split()
    if not words:
        raise CorpusError(f"document {doc.id} has an empty body; clean and drop it before chunking")
    passages = []
    for index, start in enumerate(range(0, len(words), passage_size)):
        window = words[start:start + passage_size]
        passages.append(
            Passage(
                passage_id=first_passage_id + index,
                doc_id=doc.id,
                index_in_doc=index,
                text=" ".join(window),
                word_count=len(window),
            )
        )
    return passages


def chunk_documents(
    docs: Iterable[Document],
    passage_size: int = DEFAULT_PASSAGE_SIZE,
    first_passage_id: int = 0,
) -> Iterator[Passage]:
    """Chunk a document stream under one sequential passage-id allocator."""
    next_id = first_passage_id
    for doc in docs:
        passages = chunk(doc, passage_size, first_passage_id=next_id)
        next_id += len(passages)
        yield from passages
