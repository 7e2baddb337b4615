"""Tokenization, index construction, BM25 scoring, top-k, persistence."""

import math
import random

import pytest

from ecoqa.errors import IndexFormatError, RetrieverError
from ecoqa.retriever import (
    BM25Params,
    bm25_score,
    build_index,
    load_index,
    retrieve,
    save_index,
    tokenize,
)

from helpers import make_passages


# --- independent oracle -----------------------------------------------------
# Recomputes BM25 directly from the token lists, bypassing the index
# structures entirely.

def brute_force_ranking(texts, query, params=BM25Params()):
    token_lists = [tokenize(text) for text in texts]
    n = len(token_lists)
    lengths = {pid: len(tokens) for pid, tokens in enumerate(token_lists)}
    avg = sum(lengths.values()) / n
    terms = list(dict.fromkeys(tokenize(query)))
    scores = {}
    for pid, tokens in enumerate(token_lists):
        score = 0.0
        for term in terms:
            tf = tokens.count(term)
            if tf == 0:
                continue
            df = sum(1 for other in token_lists if term in other)
            idf = math.log((n - df + 0.5) / (df + 0.5) + 1.0)
            denom = tf + params.k1 * (1.0 - params.b + params.b * lengths[pid] / avg)
            score += idf * tf * (params.k1 + 1.0) / denom
        if score > 0.0:
            scores[pid] = score
    return sorted(scores.items(), key=lambda item: (-item[1], item[0]))


def random_corpus(rng, max_passages=500, vocab=50, max_len=120):
    n = rng.randint(1, max_passages)
    words = [f"w{i}" for i in range(vocab)]
    return [" ".join(rng.choice(words) for _ in range(rng.randint(1, max_len))) for _ in range(n)]


# --- tokenize ----------------------------------------------------------------


class TestTokenize:
    def test_lowering_and_punctuation(self):
        assert tokenize("O Rio Amazonas.") == ["o", "rio", "amazonas"]

    def test_accents_preserved(self):
        assert tokenize("Amazônia") == ["amazônia"]

    def test_empty(self):
        assert tokenize("") == []

    def test_digits_kept(self):
        assert tokenize("Em 2001!") == ["em", "2001"]


# --- build_index -------------------------------------------------------------


class TestBuildIndex:
    def test_toy_postings(self):
        index = build_index(make_passages(["a b a", "b c"]))
        assert index.postings["a"] == [(0, 2)]
        assert index.postings["b"] == [(0, 1), (1, 1)]
        assert index.postings["c"] == [(1, 1)]
        assert index.passage_count == 2
        assert index.avg_length == 2.5

    def test_single_word_corpus(self):
        index = build_index(make_passages(["amazonas"]))
        assert index.passage_count == 1
        assert index.avg_length == 1.0

    def test_duplicate_passage_ids_rejected(self):
        passages = make_passages(["a", "b"])
        passages[1].passage_id = passages[0].passage_id
        with pytest.raises(RetrieverError):
            build_index(passages)

    def test_empty_corpus_rejected(self):
        with pytest.raises(RetrieverError):
            build_index([])

    def test_invariants_hold(self):
        rng = random.Random(4)
        texts = random_corpus(rng, max_passages=80)
        index = build_index(make_passages(texts))
        for term, plist in index.postings.items():
            pids = [pid for pid, _ in plist]
            assert pids == sorted(pids)
            assert len(set(pids)) == len(pids)
            assert all(tf >= 1 for _, tf in plist)
            assert all(pid in index.passage_lengths for pid in pids)
        mean = sum(index.passage_lengths.values()) / index.passage_count
        assert abs(index.avg_length - mean) <= 1e-9

    def test_building_twice_identical(self):
        texts = ["a b c", "c d", "a a a"]
        assert build_index(make_passages(texts)) == build_index(make_passages(texts))


# --- bm25_score --------------------------------------------------------------


class TestBM25Score:
    def test_no_term_present_scores_zero(self):
        index = build_index(make_passages(["a b", "c d"]))
        assert bm25_score(index, ["zzz"], 0) == 0.0

    def test_matches_direct_formula_on_toy_corpus(self):
        texts = ["amazonas rio amazonas", "rio negro", "floresta"]
        index = build_index(make_passages(texts))
        oracle = dict(brute_force_ranking(texts, "amazonas"))
        for pid in range(3):
            expected = oracle.get(pid, 0.0)
            assert abs(bm25_score(index, ["amazonas"], pid) - expected) <= 1e-9

    def test_duplicate_query_terms_score_once(self):
        index = build_index(make_passages(["a b a", "b c"]))
        assert bm25_score(index, ["a", "a", "b"], 0) == bm25_score(index, ["a", "b"], 0)

    def test_unknown_passage_id(self):
        index = build_index(make_passages(["a"]))
        with pytest.raises(RetrieverError):
            bm25_score(index, ["a"], 99)

    def test_single_term_monotone_in_tf(self):
        rng = random.Random(11)
        for _ in range(20):
            texts = random_corpus(rng, max_passages=30, vocab=10, max_len=40)
            pid = rng.randrange(len(texts))
            term = f"w{rng.randrange(10)}"
            before = build_index(make_passages(texts))
            grown = list(texts)
            grown[pid] = grown[pid] + " " + term
            after = build_index(make_passages(grown))
            assert bm25_score(after, [term], pid) >= bm25_score(before, [term], pid) - 1e-12


# --- retrieve ----------------------------------------------------------------


class TestRetrieve:
    def test_zero_score_passages_excluded(self):
        index = build_index(make_passages(["amazonas rio", "rio mar", "sol lua"]))
        results = retrieve(index, "rio", 5)
        assert {r.passage_id for r in results} == {0, 1}

    def test_topk_nesting(self):
        rng = random.Random(9)
        texts = random_corpus(rng, max_passages=60, vocab=12)
        index = build_index(make_passages(texts))
        small = retrieve(index, "w1 w2 w3", 5)
        large = retrieve(index, "w1 w2 w3", 10)
        assert [r.passage_id for r in small] == [r.passage_id for r in large][: len(small)]

    def test_empty_query_returns_empty(self):
        index = build_index(make_passages(["a b"]))
        assert retrieve(index, "...", 5) == []

    def test_invalid_k(self):
        index = build_index(make_passages(["a"]))
        with pytest.raises(RetrieverError):
            retrieve(index, "a", 0)

    def test_ordering_and_ranks(self):
        index = build_index(make_passages(["a a a", "a", "a a"]))
        results = retrieve(index, "a", 3)
        assert [r.rank for r in results] == [1, 2, 3]
        scores = [r.score for r in results]
        assert scores == sorted(scores, reverse=True)

    def test_tie_break_ascending_passage_id(self):
        # identical passages tie exactly; order must fall back to id
        index = build_index(make_passages(["x y", "x y", "x y"]))
        results = retrieve(index, "x", 3)
        assert [r.passage_id for r in results] == [0, 1, 2]

    def test_matches_brute_force_on_200_random_passages(self):
        rng = random.Random(42)
        texts = [" ".join(rng.choice([f"w{i}" for i in range(30)])
                          for _ in range(rng.randint(5, 120))) for _ in range(200)]
        index = build_index(make_passages(texts))
        query = "w0 w7 w13 w29"
        expected = brute_force_ranking(texts, query)
        got = retrieve(index, query, len(texts))
        assert [r.passage_id for r in got] == [pid for pid, _ in expected]
        for result, (_, score) in zip(got, expected):
            assert abs(result.score - score) <= 1e-9

    def test_deterministic_across_runs(self):
        texts = ["a b c", "b c d", "c d e", "a a b"]
        runs = []
        for _ in range(3):
            index = build_index(make_passages(texts))
            runs.append([(r.passage_id, r.score, r.rank) for r in retrieve(index, "a b c", 4)])
        assert runs[0] == runs[1] == runs[2]


# --- persistence -------------------------------------------------------------


class TestPersistence:
    def test_round_trip_structural_equality(self, tmp_path):
        index = build_index(make_passages(["amazônia rio", "rio negro solimões", "floresta"]),
                            BM25Params(k1=1.5, b=0.6))
        path = tmp_path / "index.bin"
        save_index(index, path)
        assert load_index(path) == index

    def test_corrupted_final_byte_rejected(self, tmp_path):
        index = build_index(make_passages(["a b", "b c"]))
        path = tmp_path / "index.bin"
        save_index(index, path)
        blob = bytearray(path.read_bytes())
        blob[-1] ^= 0xFF
        path.write_bytes(bytes(blob))
        with pytest.raises(IndexFormatError):
            load_index(path)

    def test_corrupted_middle_byte_rejected(self, tmp_path):
        index = build_index(make_passages(["a b", "b c"]))
        path = tmp_path / "index.bin"
        save_index(index, path)
        blob = bytearray(path.read_bytes())
        blob[len(blob) // 2] ^= 0x01
        path.write_bytes(bytes(blob))
        with pytest.raises(IndexFormatError):
            load_index(path)

    def test_version_mismatch_names_expected_version(self, tmp_path):
        index = build_index(make_passages(["a"]))
        path = tmp_path / "index.bin"
        save_index(index, path)
        blob = bytearray(path.read_bytes())
        blob[4:8] = (0).to_bytes(4, "little")
        path.write_bytes(bytes(blob))
        with pytest.raises(IndexFormatError, match="expected version 1"):
            load_index(path)

    def test_truncated_file_rejected(self, tmp_path):
        index = build_index(make_passages(["a b c d e", "f g"]))
        path = tmp_path / "index.bin"
        save_index(index, path)
        blob = path.read_bytes()
        path.write_bytes(blob[: len(blob) - 9])
        with pytest.raises(IndexFormatError):
            load_index(path)

    def test_not_an_index_file(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"definitely not an index")
        with pytest.raises(IndexFormatError, match="magic"):
            load_index(path)

    def test_save_is_byte_deterministic(self, tmp_path):
        texts = ["a b c", "c d e", "a a"]
        first, second = tmp_path / "one.bin", tmp_path / "two.bin"
        save_index(build_index(make_passages(texts)), first)
        save_index(build_index(make_passages(texts)), second)
        assert first.read_bytes() == second.read_bytes()
