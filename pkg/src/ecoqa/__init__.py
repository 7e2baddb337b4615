"""Retrieval-augmented question answering toolkit for Portuguese corpora.

Pipelines: corpus construction (category-graph collection, news
screening, cleaning, chunking), QA-pair mining with keyword rule sets,
BM25 sparse retrieval, reader dispatch (extractive baseline or remote
generative service), and F1 / exact-match / Rouge-L evaluation.
"""

__version__ = "0.1.0"

from ecoqa.corpus import Document, Passage, chunk, chunk_documents, clean_text
from ecoqa.evaluator import evaluate, exact_match, f1, normalize_answer, rouge_l
from ecoqa.qa import KeywordRuleSet, QAPair, filter_dataset, select_pair, split_dataset
from ecoqa.reader import ReaderConfig, answer, extractive_answer, reformulate, remote_generate
from ecoqa.retriever import (
    BM25Params,
    InvertedIndex,
    bm25_score,
    build_index,
    load_index,
    retrieve,
    save_index,
    tokenize,
)

__all__ = [
    "__version__",
    "Document",
    "Passage",
    "chunk",
    "chunk_documents",
    "clean_text",
    "evaluate",
    "exact_match",
    "f1",
    "normalize_answer",
    "rouge_l",
    "KeywordRuleSet",
    "QAPair",
    "filter_dataset",
    "select_pair",
    "split_dataset",
    "ReaderConfig",
    "answer",
    "extractive_answer",
    "reformulate",
    "remote_generate",
    "BM25Params",
    "InvertedIndex",
    "bm25_score",
    "build_index",
    "load_index",
    "retrieve",
    "save_index",
    "tokenize",
]
