"""Corpus construction: ingest, screen, clean, and chunk source documents."""

from ecoqa.corpus.documents import (
    Document,
    Passage,
    load_documents,
    load_passages,
    save_documents,
    save_passages,
)
from ecoqa.corpus.ingest import ingest_news_documents, ingest_wiki_documents
from ecoqa.corpus.news import MIN_NEWS_DATE, filter_news, load_keyword_rules, match_keywords
from ecoqa.corpus.text import DEFAULT_PASSAGE_SIZE, chunk, chunk_documents, clean_text
from ecoqa.corpus.wiki import (
    CategoryGraph,
    CategoryNode,
    CategorylinksReport,
    bfs_collect,
    load_graph,
    load_id_title_map,
    parse_categorylinks,
    save_graph,
)

__all__ = [
    "Document",
    "Passage",
    "load_documents",
    "load_passages",
    "save_documents",
    "save_passages",
    "ingest_news_documents",
    "ingest_wiki_documents",
    "MIN_NEWS_DATE",
    "filter_news",
    "load_keyword_rules",
    "match_keywords",
    "DEFAULT_PASSAGE_SIZE",
    "chunk",
    "chunk_documents",
    "clean_text",
    "CategoryGraph",
    "CategoryNode",
    "CategorylinksReport",
    "bfs_collect",
    "load_graph",
    "load_id_title_map",
    "parse_categorylinks",
    "save_graph",
]
