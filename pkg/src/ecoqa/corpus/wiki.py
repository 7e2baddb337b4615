"""Category-links parsing and breadth-first article collection.

The native input is the category-links SQL dump convention: INSERT
statements whose value tuples are ``(source_id, target_category, type)``
with type ``'page'`` for article membership and ``'subcat'`` for a
subcategory edge.  Source ids of subcategory rows are resolved to titles
through a companion id-to-title map.  Only tuple-list literals with
standard quote escaping are supported; the full SQL dialect is out of
scope.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from ecoqa.errors import CorpusError, EmptyGraphError, UnknownCategoryError
from ecoqa.jsonl import read_jsonl, write_jsonl

logger = logging.getLogger(__name__)

_ROW_TYPES = ("page", "subcat", "file")
_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "0": "\0"}


@dataclass
class CategoryNode:
    subcategories: list[str] = field(default_factory=list)
    articles: list[int] = field(default_factory=list)


@dataclass
class CategoryGraph:
    """Category title -> node; may contain cycles."""

    nodes: dict[str, CategoryNode] = field(default_factory=dict)

    def ensure(self, title: str) -> CategoryNode:
        node = self.nodes.get(title)
        if node is None:
            node = CategoryNode()
            self.nodes[title] = node
        return node


@dataclass
class CategorylinksReport:
    parsed: int = 0
    articles: int = 0
    subcategories: int = 0
    ignored: int = 0
    malformed: int = 0
    unresolved: int = 0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _scan_tuples(segment: str):
    """Yield raw field lists from a ``(...),(...)`` tuple-list literal.

    Fields come back as (text, was_quoted) pairs with SQL escapes already
    resolved.  An unterminated trailing tuple yields None so the caller
    can count it as malformed.
    """
    i, n = 0, len(segment)
    while i < n:
        if segment[i] != "(":
            i += 1
            continue
        i += 1
        fields: list[tuple[str, bool]] = []
        buf: list[str] = []
        quoted = False
        in_string = False
        closed = False
        while i < n:
            ch = segment[i]
            if in_string:
                if ch == "\\" and i + 1 < n:
                    nxt = segment[i + 1]
                    buf.append(_ESCAPES.get(nxt, nxt))
                    i += 2
                    continue
                if ch == "'":
                    if i + 1 < n and segment[i + 1] == "'":
                        buf.append("'")
                        i += 2
                        continue
                    in_string = False
                    i += 1
                    continue
                buf.append(ch)
                i += 1
                continue
            if ch == "'":
                in_string = True
                quoted = True
                i += 1
                continue
            if ch == ",":
                fields.append(("".join(buf).strip(), quoted))
                buf, quoted = [], False
                i += 1
                continue
            if ch == ")":
                fields.append(("".join(buf).strip(), quoted))
                i += 1
                closed = True
                break
            buf.append(ch)
            i += 1
        yield fields if closed else None


def parse_categorylinks(
    dump_lines: Iterable[str],
    category_titles: Mapping[int, str],
) -> tuple[CategoryGraph, CategorylinksReport]:
    """Build a category graph from an INSERT-statement stream.

    Malformed tuples are counted and skipped; ``'file'`` rows and rows of
    unknown type are ignored or counted respectively.  Subcategory rows
    whose source id is missing from ``category_titles`` are counted as
    unresolved.
    """
    graph = CategoryGraph()
    report = CategorylinksReport()
    try:
        for line in dump_lines:
            upper = line.lstrip()
            if not upper.startswith("INSERT"):
                continue
            marker = upper.find("VALUES")
            if marker < 0:
                report.malformed += 1
                continue
            for fields in _scan_tuples(upper[marker + len("VALUES"):]):
                if fields is None or len(fields) != 3:
                    report.malformed += 1
                    continue
                (raw_id, _), (category, cat_quoted), (row_type, _) = fields
                if not cat_quoted or not category:
                    report.malformed += 1
                    continue
                try:
                    source_id = int(raw_id)
                except ValueError:
                    report.malformed += 1
                    continue
                if row_type == "page":
                    node = graph.ensure(category)
                    if source_id not in node.articles:
                        node.articles.append(source_id)
                    report.parsed += 1
                    report.articles += 1
                elif row_type == "subcat":
                    title = category_titles.get(source_id)
                    if title is None:
                        report.unresolved += 1
                        continue
                    node = graph.ensure(category)
                    graph.ensure(title)
                    if title not in node.subcategories:
                        node.subcategories.append(title)
                    report.parsed += 1
                    report.subcategories += 1
                elif row_type == "file":
                    report.ignored += 1
                else:
                    report.malformed += 1
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusError(f"unreadable category-links stream: {exc}") from exc
    if report.parsed == 0:
        raise EmptyGraphError("category-links stream produced no usable tuples")
    if report.malformed or report.unresolved:
        logger.warning(
            "category-links parse skipped %d malformed and %d unresolved tuples",
            report.malformed,
            report.unresolved,
        )
    return graph, report


def load_id_title_map(path: str | Path) -> dict[int, str]:
    """Read an ``id<TAB>title`` map for category pages."""
    mapping: dict[int, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t", 1)
            if len(parts) != 2:
                continue
            try:
                mapping[int(parts[0])] = parts[1]
            except ValueError:
                continue
    return mapping


def bfs_collect(graph: CategoryGraph, root: str, limit: int) -> list[int]:
    """Collect article ids breadth-first from a root category.

    Each visited category contributes its articles (first-seen order,
    deduplicated across the whole traversal) before its subcategories are
    enqueued.  Traversal stops the moment the accumulated count reaches
    ``limit``; revisited categories are skipped, so cycles are safe.
    """
    if limit < 1:
        raise CorpusError(f"limit must be positive, got {limit}")
    if root not in graph.nodes:
        raise UnknownCategoryError(f"unknown category: {root!r}")
    collected: list[int] = []
    seen_articles: set[int] = set()
    visited = {root}
    queue = deque([root])
    while queue:
        node = graph.nodes.get(queue.popleft())
        if node is None:
            continue
        for article in node.articles:
            if article in seen_articles:
                continue
            seen_articles.add(article)
            collected.append(article)
            if len(collected) == limit:
                return collected
        for sub in node.subcategories:
            if sub not in visited:
                visited.add(sub)
                queue.append(sub)
    return collected


def save_graph(path: str | Path, graph: CategoryGraph) -> int:
    records = (
        {"category": title, "subcategories": node.subcategories, "articles": node.articles}
        for title, node in graph.nodes.items()
    )
    return write_jsonl(path, records)


def load_graph(path: str | Path) -> CategoryGraph:
    graph = CategoryGraph()
    for record in read_jsonl(path):
        node = graph.ensure(record["category"])
        for sub in record.get("subcategories", []):
            if sub not in node.subcategories:
                node.subcategories.append(sub)
        for article in record.get("articles", []):
            if article not in node.articles:
                node.articles.append(int(article))
    if not graph.nodes:
        raise EmptyGraphError(f"no categories found in {path}")
    return graph
