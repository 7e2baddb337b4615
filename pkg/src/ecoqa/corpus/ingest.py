"""End-to-end ingestion pipelines: raw sources to document stores.

Cleaning happens uniformly for both sources; documents whose bodies
clean down to nothing are dropped.  Final ids are assigned to the kept
documents by one sequential allocator.
"""

from __future__ import annotations

import logging
from datetime import date
from typing import Iterable, Mapping

from ecoqa.corpus.documents import Document
from ecoqa.corpus.news import MIN_NEWS_DATE, match_keywords
from ecoqa.corpus.text import clean_text
from ecoqa.corpus.wiki import CategoryGraph, bfs_collect

logger = logging.getLogger(__name__)


def ingest_wiki_documents(
    graph: CategoryGraph,
    articles: Mapping[int, dict],
    root: str,
    limit: int,
    start_id: int = 0,
) -> list[Document]:
    """Collect articles breadth-first and clean them into documents.

    ``articles`` maps dump article ids to ``{"title", "text"}`` records.
    Articles missing from the map or cleaning down to empty are dropped.
    """
    docs: list[Document] = []
    next_id = start_id
    missing = empty = 0
    for article_id in bfs_collect(graph, root, limit):
        record = articles.get(article_id)
        if record is None:
            missing += 1
            continue
        body = clean_text(record.get("text", ""))
        if not body:
            empty += 1
            continue
        docs.append(
            Document(
                id=next_id,
                source="wiki",
                title=record.get("title", str(article_id)),
                body=body,
                url=record.get("url"),
            )
        )
        next_id += 1
    if missing or empty:
        logger.warning("wiki ingest dropped %d missing and %d empty articles", missing, empty)
    return docs


def ingest_news_documents(
    records: Iterable[dict],
    keywords: Iterable[str],
    exclusions: Mapping[str, list[str]] | None = None,
    min_date: date = MIN_NEWS_DATE,
    start_id: int = 0,
) -> tuple[list[Document], dict[str, int]]:
    """Clean and screen raw news records into documents plus a keyword tally."""
    keywords = list(keywords)
    docs: list[Document] = []
    counts: dict[str, int] = {}
    next_id = start_id
    for record in records:
        raw_date = record.get("published_at")
        published = date.fromisoformat(raw_date) if raw_date else None
        if published is None or published < min_date:
            continue
        title = clean_text(record.get("title", ""))
        body = clean_text(record.get("body", ""))
        if not body:
            continue
        matched = match_keywords(title, body, keywords, exclusions)
        if matched is None:
            continue
        docs.append(
            Document(
                id=next_id,
                source="news",
                title=title,
                body=body,
                published_at=published,
                url=record.get("url"),
                keywords_matched=matched,
            )
        )
        for keyword in matched:
            counts[keyword] = counts.get(keyword, 0) + 1
        next_id += 1
    return docs, counts
