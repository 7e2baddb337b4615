"""Keyword screening for pre-fetched news documents.

Scraping is out of scope: documents arrive as JSONL and only the
screening logic runs here.  Matching is case-insensitive, accent
preserving, substring over title plus body.
"""

from __future__ import annotations

import json
from datetime import date
from pathlib import Path
from typing import Iterable, Iterator, Mapping, MutableMapping

from ecoqa.corpus.documents import Document
from ecoqa.errors import CorpusError

MIN_NEWS_DATE = date(2018, 1, 1)


def load_keyword_rules(path: str | Path) -> dict[str, list[str]]:
    """Read a ``{keyword: [exclusion words]}`` JSON map."""
    with open(path, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    if not isinstance(raw, dict) or not raw:
        raise CorpusError(f"keyword file {path} must be a non-empty JSON object")
    rules: dict[str, list[str]] = {}
    for keyword, exclusions in raw.items():
        if not isinstance(keyword, str) or not keyword.strip():
            raise CorpusError(f"invalid keyword entry in {path}: {keyword!r}")
        rules[keyword] = [str(word) for word in (exclusions or [])]
    return rules


def match_keywords(
    title: str,
    body: str,
    keywords: Iterable[str],
    exclusions: Mapping[str, list[str]] | None = None,
) -> list[str] | None:
    """Return matched keywords, or None when the document must be dropped.

    A document is dropped when no keyword matches, or when any exclusion
    word paired with a matched keyword appears.
    """
    haystack = f"{title} {body}".lower()
    matched = [kw for kw in keywords if kw.lower() in haystack]
    if not matched:
        return None
    if exclusions:
        for keyword in matched:
            for word in exclusions.get(keyword, ()):
                if word.lower() in haystack:
                    return None
    return matched


def filter_news(
    docs: Iterable[Document],
    keywords: Iterable[str],
    exclusions: Mapping[str, list[str]] | None = None,
    min_date: date = MIN_NEWS_DATE,
    keyword_counts: MutableMapping[str, int] | None = None,
) -> Iterator[Document]:
    """Yield documents passing the date and keyword screen.

    Kept documents get ``keywords_matched`` recorded.  When
    ``keyword_counts`` is supplied it accumulates, per keyword, how many
    kept documents matched it (the citation-count tally).
    """
    keywords = list(keywords)
    for doc in docs:
        if doc.published_at is None or doc.published_at < min_date:
            continue
        matched = match_keywords(doc.title, doc.body, keywords, exclusions)
        if matched is None:
            continue
        doc.keywords_matched = matched
        if keyword_counts is not None:
            for keyword in matched:
                keyword_counts[keyword] = keyword_counts.get(keyword, 0) + 1
        yield doc
