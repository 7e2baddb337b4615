"""Sparse retrieval: inverted index with Okapi BM25 scoring.

No stemming or stopword removal happens here; scores and orderings stay
fully reproducible from the tokenized text alone.  Ties are broken by
ascending passage id, so identical inputs always produce identical
result lists.
"""

from __future__ import annotations

import math
import re
import struct
import zlib
from bisect import bisect_left
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from ecoqa.errors import IndexFormatError, RetrieverError

# Unicode-aware: lowercase, keep letters (accents included) and digits,
# treat everything else as a separator.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

INDEX_MAGIC = b"EQIX"
INDEX_VERSION = 1


def tokenize(text: str) -> list[str]:
    """Lowercase and split into alphanumeric runs, accents preserved."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class BM25Params:
    k1: float = 1.2
    b: float = 0.75

    def __post_init__(self):
        if not (math.isfinite(self.k1) and math.isfinite(self.b)):
            raise RetrieverError(f"BM25 parameters must be finite, got k1={self.k1}, b={self.b}")
        if self.k1 < 0:
            raise RetrieverError(f"k1 must be non-negative, got {self.k1}")
        if not 0.0 <= self.b <= 1.0:
            raise RetrieverError(f"b must lie in [0, 1], got {self.b}")


@dataclass
class RetrievalResult:
    passage_id: int
    score: float
    rank: int


@dataclass
class InvertedIndex:
    """Term postings plus the per-passage statistics BM25 needs."""

    postings: dict[str, list[tuple[int, int]]]
    passage_lengths: dict[int, int]
    passage_count: int
    avg_length: float
    params: BM25Params = field(default_factory=BM25Params)

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        if df == 0:
            return 0.0
        return math.log((self.passage_count - df + 0.5) / (df + 0.5) + 1.0)

    def term_frequency(self, term: str, passage_id: int) -> int:
        plist = self.postings.get(term)
        if not plist:
            return 0
        pos = bisect_left(plist, (passage_id,))
        if pos < len(plist) and plist[pos][0] == passage_id:
            return plist[pos][1]
        return 0


def build_index(passages: Iterable, params: BM25Params | None = None) -> InvertedIndex:
    """Construct the index from passage objects exposing passage_id/text."""
    params = params or BM25Params()
    postings: dict[str, list[tuple[int, int]]] = {}
    lengths: dict[int, int] = {}
    for passage in passages:
        pid = passage.passage_id
        if pid in lengths:
            raise RetrieverError(f"duplicate passage id {pid}")
        tokens = tokenize(passage.text)
        lengths[pid] = len(tokens)
        counts: dict[str, int] = {}
        for token in tokens:
            counts[token] = counts.get(token, 0) + 1
        for term, tf in counts.items():
            postings.setdefault(term, []).append((pid, tf))
    if not lengths:
        raise RetrieverError("cannot index an empty passage list")
    total = sum(lengths.values())
    if total == 0:
        raise RetrieverError("corpus has no tokens; nothing to index")
    for plist in postings.values():
        plist.sort()
    return InvertedIndex(
        postings=postings,
        passage_lengths=lengths,
        passage_count=len(lengths),
        avg_length=total / len(lengths),
        params=params,
    )


def _term_contribution(index: InvertedIndex, idf: float, tf: int, length: int) -> float:
    k1, b = index.params.k1, index.params.b
    denom = tf + k1 * (1.0 - b + b * length / index.avg_length)
    return idf * tf * (k1 + 1.0) / denom


def bm25_score(index: InvertedIndex, query_terms: Sequence[str], passage_id: int) -> float:
    """Okapi BM25 over distinct query terms; absent terms contribute 0."""
    if passage_id not in index.passage_lengths:
        raise RetrieverError(f"unknown passage id {passage_id}")
    length = index.passage_lengths[passage_id]
    score = 0.0
    for term in dict.fromkeys(query_terms):
        tf = index.term_frequency(term, passage_id)
        if tf == 0:
            continue
        score += _term_contribution(index, index.idf(term), tf, length)
    return score


def retrieve(index: InvertedIndex, query: str, k: int) -> list[RetrievalResult]:
    """Score the union of the query terms' posting lists and return top-k.

    Only passages containing at least one query term are candidates, so
    zero-score passages are never returned; equal scores order by
    ascending passage id.
    """
    if k < 1:
        raise RetrieverError(f"k must be positive, got {k}")
    terms = list(dict.fromkeys(tokenize(query)))
    if not terms:
        return []
    scores: dict[int, float] = {}
    for term in terms:
        plist = index.postings.get(term)
        if not plist:
            continue
        idf = index.idf(term)
        for pid, tf in plist:
            contribution = _term_contribution(index, idf, tf, index.passage_lengths[pid])
            scores[pid] = scores.get(pid, 0.0) + contribution
    ranked = sorted(
        ((pid, score) for pid, score in scores.items() if score > 0.0),
        key=lambda item: (-item[1], item[0]),
    )[:k]
    return [RetrievalResult(pid, score, rank) for rank, (pid, score) in enumerate(ranked, start=1)]


# ---------------------------------------------------------------------------
# Persistence: versioned single-file binary format (little endian).
#
#   magic "EQIX" | u32 version
#   f64 k1 | f64 b | u64 N | f64 avg_length
#   u64 passage_count, then N x (u64 passage_id, u32 length)
#   u64 term_count, then per term (sorted): u32 byte_len, utf-8 bytes,
#       u32 df, df x (u64 passage_id, u32 tf)
#   u32 crc32 of all preceding bytes
# ---------------------------------------------------------------------------


def save_index(index: InvertedIndex, path: str | Path) -> None:
    buf = bytearray()
    buf += INDEX_MAGIC
    buf += struct.pack("<I", INDEX_VERSION)
    buf += struct.pack("<ddQd", index.params.k1, index.params.b, index.passage_count, index.avg_length)
    buf += struct.pack("<Q", len(index.passage_lengths))
    for pid in sorted(index.passage_lengths):
        buf += struct.pack("<QI", pid, index.passage_lengths[pid])
    buf += struct.pack("<Q", len(index.postings))
    for term in sorted(index.postings):
        encoded = term.encode("utf-8")
        buf += struct.pack("<I", len(encoded))
        buf += encoded
        plist = index.postings[term]
        buf += struct.pack("<I", len(plist))
        for pid, tf in plist:
            buf += struct.pack("<QI", pid, tf)
    buf += struct.pack("<I", zlib.crc32(bytes(buf)) & 0xFFFFFFFF)
    Path(path).write_bytes(bytes(buf))


class _Cursor:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def read(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.offset + size > len(self.data):
            raise IndexFormatError("truncated index file")
        values = struct.unpack_from(fmt, self.data, self.offset)
        self.offset += size
        return values

    def read_bytes(self, size: int) -> bytes:
        if self.offset + size > len(self.data):
            raise IndexFormatError("truncated index file")
        chunk = self.data[self.offset:self.offset + size]
        self.offset += size
        return chunk


def load_index(path: str | Path) -> InvertedIndex:
    """Load an index, verifying magic, version, and checksum."""
    data = Path(path).read_bytes()
    if len(data) < len(INDEX_MAGIC) + 4:
        raise IndexFormatError(f"{path} is too small to be an index file")
    if data[:len(INDEX_MAGIC)] != INDEX_MAGIC:
        raise IndexFormatError(f"{path} is not an index file (bad magic)")
    (version,) = struct.unpack_from("<I", data, len(INDEX_MAGIC))
    if version != INDEX_VERSION:
        raise IndexFormatError(
            f"unsupported index version {version}; expected version {INDEX_VERSION}"
        )
    (stored_crc,) = struct.unpack_from("<I", data, len(data) - 4)
    if zlib.crc32(data[:-4]) & 0xFFFFFFFF != stored_crc:
        raise IndexFormatError(f"{path} is corrupted (checksum mismatch)")

    cursor = _Cursor(data[:-4])
    cursor.offset = len(INDEX_MAGIC) + 4
    k1, b, passage_count, avg_length = cursor.read("<ddQd")
    (n_lengths,) = cursor.read("<Q")
    lengths: dict[int, int] = {}
    for _ in range(n_lengths):
        pid, length = cursor.read("<QI")
        lengths[pid] = length
    (n_terms,) = cursor.read("<Q")
    postings: dict[str, list[tuple[int, int]]] = {}
    for _ in range(n_terms):
        (term_len,) = cursor.read("<I")
        term = cursor.read_bytes(term_len).decode("utf-8")
        (df,) = cursor.read("<I")
        plist = []
        for _ in range(df):
            pid, tf = cursor.read("<QI")
            plist.append((pid, tf))
        postings[term] = plist
    if passage_count != len(lengths):
        raise IndexFormatError("inconsistent passage count in header")
    return InvertedIndex(
        postings=postings,
        passage_lengths=lengths,
        passage_count=passage_count,
        avg_length=avg_length,
        params=BM25Params(k1=k1, b=b),
    )
