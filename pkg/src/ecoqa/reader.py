"""Answer production: query reformulation, an extractive baseline reader,
and the client for the remote generative reader.

The extractive reader is a deterministic stand-in that lets the whole
pipeline run and be scored without any trained model; the remote reader
speaks a small JSON contract to a generation service.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import re
from typing import Mapping, Sequence

import requests

from ecoqa.errors import BudgetError, ConfigError, RemoteReaderError
from ecoqa.retriever import InvertedIndex, retrieve, tokenize

# Delimiter placed between the question and each appended passage.  It is
# whitespace on purpose: budgets are whitespace-token counts, so the
# delimiter itself never consumes budget.
SEPARATOR = "\n"

DEFAULT_MAX_SPAN = 15
MODES = ("reader_only", "retriever_reader")
READER_KINDS = ("extractive", "remote_generative")

# Function words excluded from question content terms: articles,
# prepositions and contractions, pronouns, conjunctions, and
# interrogatives.  Verb forms are kept as content on purpose; they anchor
# the answer-bearing clause.
PT_STOPWORDS = frozenset(
    """
    a à às ao aos as o os um uma uns umas
    de do da dos das dum duma
    em no na nos nas num numa
    por pelo pela pelos pelas
    com como sem sob sobre entre até contra desde para pra perante
    que quem qual quais quando quanto quanta quantos quantas onde porque porquê
    e ou mas nem pois se então também já ainda não sim
    eu tu ele ela nós vós eles elas você vocês
    me te lhe lhes nos vos seu sua seus suas meu minha meus minhas
    este esta estes estas isto esse essa esses essas isso
    aquele aquela aqueles aquelas aquilo
    """.split()
)


def count_tokens(text: str) -> int:
    """Whitespace token count; the budget proxy used across the pipeline."""
    return len(text.split())


@dataclass
class ReformulatedQuery:
    """The question concatenated with retrieved passages under a budget."""

    question: str
    passages: list[str]
    token_budget: int
    truncated: bool
    rendered: str


def reformulate(question: str, passages: Sequence[str], budget: int) -> ReformulatedQuery:
    """Append passages to the question in rank order within the budget.

    Budget arithmetic: the rendered text costs the question's tokens plus
    each appended passage's tokens (the separator is whitespace and free).
    Passages are appended whole while they fit; the first passage that
    does not fit is tail-truncated at a token boundary to exactly exhaust
    the budget, and everything after it is dropped.  The question itself
    is never truncated.
    """
    question_tokens = count_tokens(question)
    if budget <= question_tokens + 1:
        raise BudgetError(
            f"budget {budget} cannot fit the {question_tokens}-token question plus context"
        )
    remaining = budget - question_tokens
    kept: list[str] = []
    truncated = False
    for text in passages:
        words = text.split()
        if len(words) <= remaining:
            kept.append(text)
            remaining -= len(words)
            continue
        if remaining > 0:
            kept.append(" ".join(words[:remaining]))
            remaining = 0
        truncated = True
        break
    rendered = SEPARATOR.join([question] + kept) if kept else question
    return ReformulatedQuery(
        question=question,
        passages=list(passages),
        token_budget=budget,
        truncated=truncated,
        rendered=rendered,
    )


# ---------------------------------------------------------------------------
# Extractive baseline reader
# ---------------------------------------------------------------------------

_SENTENCE_SPLIT = re.compile(r"[.?!]+")


@dataclass
class ExtractionResult:
    text: str
    low_confidence: bool
    passage_rank: int | None = None
    sentence_index: int | None = None


def question_content_terms(question: str) -> set[str]:
    return {term for term in tokenize(question) if term not in PT_STOPWORDS}


def _iter_sentences(passage: str):
    for index, raw in enumerate(_SENTENCE_SPLIT.split(passage)):
        sentence = raw.strip()
        if sentence:
            yield index, sentence


def extractive_answer(rq: ReformulatedQuery, max_span: int = DEFAULT_MAX_SPAN) -> ExtractionResult:
    """Pick the sentence with the most question content-terms, then return
    its longest run of up to ``max_span`` consecutive tokens containing no
    content-term.

    Ties: earlier passage rank, then earlier sentence position.  When no
    sentence contains a content-term the result is the first ``max_span``
    tokens of the top passage, flagged low-confidence.
    """
    if not rq.passages:
        return ExtractionResult("", low_confidence=True)
    terms = question_content_terms(rq.question)

    best_score = 0
    best: tuple[int, int, list[str]] | None = None
    for rank, passage in enumerate(rq.passages):
        for sentence_index, sentence in _iter_sentences(passage):
            score = len(terms & set(tokenize(sentence)))
            if score > best_score:
                best_score = score
                best = (rank, sentence_index, sentence.split())

    if best is None or best_score == 0:
        fallback = rq.passages[0].split()[:max_span]
        return ExtractionResult(" ".join(fallback), low_confidence=True, passage_rank=0)

    rank, sentence_index, tokens = best
    is_term = [bool(terms & set(tokenize(token))) for token in tokens]
    runs: list[tuple[int, int]] = []  # (start, length) of maximal non-term runs
    start = None
    for position, flagged in enumerate(is_term + [True]):
        if not flagged and start is None:
            start = position
        elif flagged and start is not None:
            runs.append((start, position - start))
            start = None
    if not runs:
        fallback = rq.passages[0].split()[:max_span]
        return ExtractionResult(" ".join(fallback), low_confidence=True, passage_rank=0)
    # Longest run wins with length capped at max_span; the earliest run
    # keeps ties.  Over-long runs are clipped from their start.
    best_run = runs[0]
    for run in runs[1:]:
        if min(run[1], max_span) > min(best_run[1], max_span):
            best_run = run
    run_start, run_length = best_run
    window = tokens[run_start:run_start + min(run_length, max_span)]
    return ExtractionResult(
        " ".join(window),
        low_confidence=False,
        passage_rank=rank,
        sentence_index=sentence_index,
    )


# ---------------------------------------------------------------------------
# Remote generative reader client
# ---------------------------------------------------------------------------


def remote_generate(endpoint: str, rq: ReformulatedQuery, timeout: float = 30.0) -> str:
    """POST the reformulated query to the generation service.

    Request: {"question", "passages", "budget"}; response must carry a
    string "answer".  Timeouts, non-2xx statuses, and schema violations
    raise with the HTTP status and a body excerpt.
    """
    url = endpoint.rstrip("/")
    if not url.endswith("/generate"):
        url += "/generate"
    payload = {"question": rq.question, "passages": list(rq.passages), "budget": rq.token_budget}
    try:
        response = requests.post(url, json=payload, timeout=timeout)
    except requests.Timeout as exc:
        raise RemoteReaderError(f"remote reader timed out after {timeout}s") from exc
    except requests.RequestException as exc:
        raise RemoteReaderError(f"remote reader request failed: {exc}") from exc
    excerpt = response.text[:200]
    if not 200 <= response.status_code < 300:
        raise RemoteReaderError("remote reader returned an error", response.status_code, excerpt)
    try:
        data = response.json()
    except ValueError:
        raise RemoteReaderError("remote reader sent malformed JSON", response.status_code, excerpt)
    if not isinstance(data, dict) or not isinstance(data.get("answer"), str):
        raise RemoteReaderError(
            "remote reader response violates the contract (missing string 'answer')",
            response.status_code,
            excerpt,
        )
    return data["answer"]


# ---------------------------------------------------------------------------
# Pipeline composition
# ---------------------------------------------------------------------------


@dataclass
class ReaderConfig:
    mode: str = "retriever_reader"
    reader_kind: str = "extractive"
    k: int = 5
    token_budget: int = 512
    endpoint: str | None = None
    max_span: int = DEFAULT_MAX_SPAN
    timeout: float = 30.0

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.reader_kind not in READER_KINDS:
            raise ConfigError(f"unknown reader kind {self.reader_kind!r}; expected one of {READER_KINDS}")
        if self.reader_kind == "remote_generative" and not self.endpoint:
            raise ConfigError("remote_generative reader requires an endpoint")
        if self.mode == "retriever_reader" and self.k < 1:
            raise ConfigError(f"retriever_reader mode needs k >= 1, got {self.k}")


@dataclass
class AnswerResult:
    answer: str
    passages_used: list[int] = field(default_factory=list)
    truncated: bool = False
    low_confidence: bool = False


def answer(
    question: str,
    cfg: ReaderConfig,
    index: InvertedIndex | None = None,
    passage_texts: Mapping[int, str] | None = None,
) -> AnswerResult:
    """Answer a question under the configured pipeline.

    retriever_reader mode retrieves top-k passages (texts looked up in
    ``passage_texts``), reformulates, and dispatches to the configured
    reader; reader_only reformulates with no passages.  Provenance
    (passage ids in rank order) is always returned.
    """
    cfg.validate()
    passage_ids: list[int] = []
    texts: list[str] = []
    if cfg.mode == "retriever_reader":
        if index is None:
            raise ConfigError("retriever_reader mode requires an index")
        if passage_texts is None:
            raise ConfigError("retriever_reader mode requires passage texts for the reader")
        for result in retrieve(index, question, cfg.k):
            text = passage_texts.get(result.passage_id)
            if text is None:
                raise ConfigError(f"passage {result.passage_id} missing from passage store")
            passage_ids.append(result.passage_id)
            texts.append(text)
    rq = reformulate(question, texts, cfg.token_budget)
    if cfg.reader_kind == "remote_generative":
        generated = remote_generate(cfg.endpoint, rq, timeout=cfg.timeout)
        return AnswerResult(generated, passage_ids, rq.truncated)
    extraction = extractive_answer(rq, max_span=cfg.max_span)
    return AnswerResult(extraction.text, passage_ids, rq.truncated, extraction.low_confidence)
