"""Answer-overlap metrics and the evaluation harness.

F1 and exact match follow the usual reading-comprehension convention
(token multiset overlap after normalization); Rouge-L is the F-measure
of longest-common-subsequence precision and recall with beta = 1.
Normalization strips punctuation and Portuguese articles, so scores are
comparable within this toolkit.
"""

from __future__ import annotations

import json
import logging
import string
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from ecoqa.errors import ConfigError, DatasetError
from ecoqa.qa.pairs import QAPair
from ecoqa.reader import AnswerResult, ReaderConfig, answer
from ecoqa.retriever import InvertedIndex

logger = logging.getLogger(__name__)

PT_ARTICLES = frozenset({"o", "a", "os", "as", "um", "uma", "uns", "umas"})
_PUNCT = frozenset(string.punctuation)

KB_CHOICES = ("none", "wiki", "news", "wiki_news")
KB_LABELS = {"none": "None", "wiki": "Wiki", "news": "News", "wiki_news": "Wiki + News"}


def normalize_answer(text: str) -> str:
    """Lowercase, drop punctuation, remove standalone articles, collapse spaces."""
    lowered = text.lower()
    stripped = "".join(ch for ch in lowered if ch not in _PUNCT)
    tokens = [tok for tok in stripped.split() if tok not in PT_ARTICLES]
    return " ".join(tokens)


def _tokens(text: str) -> list[str]:
    return normalize_answer(text).split()


def f1(predicted: str, gold: str) -> float:
    """Token-multiset overlap F1 in [0, 1]."""
    pred_tokens = _tokens(predicted)
    gold_tokens = _tokens(gold)
    if not pred_tokens or not gold_tokens:
        return float(pred_tokens == gold_tokens)
    overlap = sum((Counter(pred_tokens) & Counter(gold_tokens)).values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred_tokens)
    recall = overlap / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def exact_match(predicted: str, gold: str) -> int:
    return int(normalize_answer(predicted) == normalize_answer(gold))


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for x in a:
        current = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def lcs_fmeasure(pred_tokens: Sequence[str], gold_tokens: Sequence[str]) -> float:
    """LCS F-measure (beta = 1) over already-tokenized sequences."""
    if not pred_tokens or not gold_tokens:
        return float(list(pred_tokens) == list(gold_tokens))
    lcs = _lcs_length(pred_tokens, gold_tokens)
    if lcs == 0:
        return 0.0
    precision = lcs / len(pred_tokens)
    recall = lcs / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def rouge_l(predicted: str, gold: str) -> float:
    """LCS-based F-measure (beta = 1) over normalized token sequences."""
    return lcs_fmeasure(_tokens(predicted), _tokens(gold))


# ---------------------------------------------------------------------------
# Evaluation harness
# ---------------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    """One evaluation arm: which knowledge base, how much context, which reader."""

    kb: str = "none"
    k: int = 0
    budget: int = 512
    reader_kind: str = "extractive"
    seed: int = 0

    def validate(self) -> None:
        if self.kb not in KB_CHOICES:
            raise ConfigError(f"unknown kb {self.kb!r}; expected one of {KB_CHOICES}")
        if self.kb == "none" and self.k != 0:
            raise ConfigError(f"kb=none requires k=0, got k={self.k}")
        if self.kb != "none" and self.k < 1:
            raise ConfigError(f"kb={self.kb} requires k >= 1, got k={self.k}")
        if self.budget < 2:
            raise ConfigError(f"budget must be at least 2 tokens, got {self.budget}")

    def model_label(self) -> str:
        reader = "extractive" if self.reader_kind == "extractive" else "remote"
        if self.kb == "none":
            return f"Reader only ({reader})"
        return f"Retriever + Reader ({reader})"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, record: dict) -> "ExperimentConfig":
        cfg = cls(
            kb=record.get("kb", "none"),
            k=int(record.get("k", 0)),
            budget=int(record.get("budget", 512)),
            reader_kind=record.get("reader_kind", "extractive"),
            seed=int(record.get("seed", 0)),
        )
        cfg.validate()
        return cfg


METRIC_NAMES = ("f1", "em", "rouge_l")


@dataclass
class EvalReport:
    per_question: list[dict]
    aggregates: dict[str, float]
    config: dict
    failures: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "aggregates": self.aggregates,
            "per_question": self.per_question,
            "failures": self.failures,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )


def evaluate(
    test_pairs: Sequence[QAPair],
    system: Callable[[str], str],
    cfg: ExperimentConfig | None = None,
) -> EvalReport:
    """Run the system once per test question and score every prediction.

    System errors are recorded as empty predictions (all metrics 0) and
    surfaced in the failures list.  Aggregates are per-question means on
    the 0-100 scale.
    """
    for pair in test_pairs:
        if pair.split != "test":
            raise DatasetError(
                f"evaluate expects test-split pairs only; got split={pair.split!r}"
            )
    rows: list[dict] = []
    failures: list[dict] = []
    for pair in test_pairs:
        try:
            predicted = system(pair.question)
        except Exception as exc:
            logger.warning("system failed on %r: %s", pair.question[:60], exc)
            failures.append({"question": pair.question, "error": str(exc)})
            predicted = ""
        rows.append(
            {
                "question": pair.question,
                "gold": pair.answer,
                "predicted": predicted,
                "f1": f1(predicted, pair.answer),
                "em": exact_match(predicted, pair.answer),
                "rouge_l": rouge_l(predicted, pair.answer),
            }
        )
    count = len(rows)
    aggregates = {
        name: (sum(row[name] for row in rows) / count * 100.0) if count else 0.0
        for name in METRIC_NAMES
    }
    return EvalReport(
        per_question=rows,
        aggregates=aggregates,
        config=cfg.to_dict() if cfg else {},
        failures=failures,
    )


# ---------------------------------------------------------------------------
# Experiment grid
# ---------------------------------------------------------------------------


@dataclass
class KnowledgeBase:
    """An index together with the passage texts the reader consumes."""

    index: InvertedIndex
    passage_texts: Mapping[int, str]


def canonical_grid(reader_kind: str = "extractive", seed: int = 0) -> list[ExperimentConfig]:
    """The nine standard arms: no retrieval, then each KB at k=5/512 and
    k=10/1024 (k=5 pairs with a 512-token budget, k=10 with 1024)."""
    rows = [
        ("none", 0, 512),
        ("wiki_news", 5, 512),
        ("none", 0, 512),
        ("news", 5, 512),
        ("wiki", 5, 512),
        ("wiki_news", 5, 512),
        ("news", 10, 1024),
        ("wiki", 10, 1024),
        ("wiki_news", 10, 1024),
    ]
    return [
        ExperimentConfig(kb=kb, k=k, budget=budget, reader_kind=reader_kind, seed=seed)
        for kb, k, budget in rows
    ]


def system_for_config(
    cfg: ExperimentConfig,
    kbs: Mapping[str, KnowledgeBase],
    endpoint: str | None = None,
) -> Callable[[str], str]:
    """Build the answer function an ExperimentConfig describes."""
    cfg.validate()
    reader_cfg = ReaderConfig(
        mode="reader_only" if cfg.kb == "none" else "retriever_reader",
        reader_kind=cfg.reader_kind,
        k=cfg.k if cfg.k else 1,
        token_budget=cfg.budget,
        endpoint=endpoint,
    )
    kb = kbs.get(cfg.kb) if cfg.kb != "none" else None

    def system(question: str) -> str:
        result: AnswerResult = answer(
            question,
            reader_cfg,
            index=kb.index if kb else None,
            passage_texts=kb.passage_texts if kb else None,
        )
        return result.answer

    return system


def run_experiment_grid(
    grid: Iterable[ExperimentConfig],
    test_pairs: Sequence[QAPair],
    kbs: Mapping[str, KnowledgeBase],
    endpoint: str | None = None,
) -> list[dict]:
    """Evaluate each config in order; missing KBs produce skip records.

    Duplicate configs produce duplicate rows; nothing is deduplicated.
    """
    rows: list[dict] = []
    for cfg in grid:
        cfg.validate()
        if cfg.kb != "none" and cfg.kb not in kbs:
            logger.warning("skipping config %s: no index built for kb=%s", cfg.to_dict(), cfg.kb)
            rows.append({"config": cfg.to_dict(), "skipped": f"no index built for kb={cfg.kb}"})
            continue
        report = evaluate(test_pairs, system_for_config(cfg, kbs, endpoint), cfg)
        rows.append({"config": cfg.to_dict(), "aggregates": report.aggregates})
    return rows


def render_results_table(rows: Sequence[dict]) -> str:
    """Aligned text table with the standard column order."""
    header = ("Supporting documents", "Model", "k", "F1", "EM", "R-L")
    body: list[tuple[str, ...]] = []
    for row in rows:
        cfg = ExperimentConfig.from_dict(row["config"])
        k_label = str(cfg.k) if cfg.k else "-"
        if "skipped" in row:
            body.append((KB_LABELS[cfg.kb], cfg.model_label(), k_label, "skipped", "-", "-"))
            continue
        agg = row["aggregates"]
        body.append(
            (
                KB_LABELS[cfg.kb],
                cfg.model_label(),
                k_label,
                f"{agg['f1']:.1f}",
                f"{agg['em']:.1f}",
                f"{agg['rouge_l']:.1f}",
            )
        )
    widths = [max(len(str(cell)) for cell in column) for column in zip(header, *body)] if body else [
        len(cell) for cell in header
    ]
    lines = [" | ".join(cell.ljust(width) for cell, width in zip(record, widths)).rstrip()
             for record in [header, *body]]
    lines.insert(1, "-+-".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"
