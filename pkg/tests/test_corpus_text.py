"""Cleaning and chunking behaviour."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecoqa.corpus import chunk, chunk_documents, clean_text
from ecoqa.errors import CorpusError

from helpers import make_document


class TestCleanText:
    def test_line_breaks_become_spaces(self):
        assert clean_text("linha um\nlinha dois") == "linha um linha dois"

    def test_disallowed_characters_removed(self):
        assert clean_text("Amazônia©™ 2020!") == "Amazônia 2020!"

    def test_whitespace_only_signals_empty_document(self):
        assert clean_text("   ") == ""

    def test_accents_and_basic_punctuation_survive(self):
        assert clean_text("Água; solo: fogo? (sim!) não-binário.") == "Água; solo: fogo? (sim!) não-binário."

    def test_whitespace_runs_collapse(self):
        assert clean_text("a  \t b\r\n  c") == "a b c"

    @given(st.text(max_size=300))
    @settings(max_examples=200)
    def test_idempotent(self, raw):
        once = clean_text(raw)
        assert clean_text(once) == once


class TestChunk:
    def test_250_words_chunk_into_100_100_50(self):
        doc = make_document(0, " ".join(f"w{i}" for i in range(250)))
        passages = chunk(doc, 100)
        assert [p.word_count for p in passages] == [100, 100, 50]
        assert [p.index_in_doc for p in passages] == [0, 1, 2]

    def test_exact_boundary_gives_single_passage(self):
        doc = make_document(0, " ".join(f"w{i}" for i in range(100)))
        passages = chunk(doc, 100)
        assert len(passages) == 1
        assert passages[0].word_count == 100

    def test_single_word_body(self):
        passages = chunk(make_document(0, "amazonas"), 100)
        assert len(passages) == 1
        assert passages[0].word_count == 1

    def test_empty_body_rejected(self):
        with pytest.raises(CorpusError):
            chunk(make_document(0, ""), 100)

    def test_passage_ids_allocated_sequentially_across_documents(self):
        docs = [
            make_document(0, " ".join(f"a{i}" for i in range(150))),
            make_document(1, " ".join(f"b{i}" for i in range(30))),
        ]
        passages = list(chunk_documents(docs, 100))
        assert [p.passage_id for p in passages] == [0, 1, 2]
        assert [p.doc_id for p in passages] == [0, 0, 1]

    @given(
        st.lists(st.integers(min_value=1, max_value=400), min_size=1, max_size=8),
        st.integers(min_value=1, max_value=120),
    )
    @settings(max_examples=60)
    def test_reconstruction_property(self, word_counts, size):
        docs = [
            make_document(i, " ".join(f"d{i}w{j}" for j in range(count)))
            for i, count in enumerate(word_counts)
        ]
        passages = list(chunk_documents(docs, size))
        for doc in docs:
            own = [p for p in passages if p.doc_id == doc.id]
            assert [p.index_in_doc for p in own] == list(range(len(own)))
            rebuilt = " ".join(p.text for p in own).split()
            assert rebuilt == doc.body.split()
            assert all(p.word_count <= size for p in own)
