"""Keyword-rule mining of domain QA pairs from open-domain datasets.

The rule system uses four expression sets: must-have anchors, good-to-have
topical terms, unique expressions that select unconditionally, and exclude
disqualifiers.  Matching is case-insensitive substring over the question
and answer concatenated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from ecoqa.errors import DatasetError
from ecoqa.qa.pairs import QAPair

SELECTED = "selected"
REJECTED = "rejected"

REASON_UNIQUE = "selected_by_U"
REASON_MUST = "selected_by_M"
REASON_GOOD_WITH_MUST = "selected_by_G_with_M"
REASON_NO_ANCHOR = "rejected_no_anchor"
REASON_EXCLUDED = "rejected_excluded"

REASONS = (
    REASON_UNIQUE,
    REASON_MUST,
    REASON_GOOD_WITH_MUST,
    REASON_NO_ANCHOR,
    REASON_EXCLUDED,
)


@dataclass(frozen=True)
class KeywordRuleSet:
    """The four expression sets; all expressions are kept lowercase."""

    must_have: frozenset[str]
    good_to_have: frozenset[str]
    unique: frozenset[str]
    exclude: frozenset[str]

    def __post_init__(self):
        for name in ("must_have", "good_to_have", "unique", "exclude"):
            expressions = getattr(self, name)
            if not expressions:
                raise DatasetError(f"rule set {name} must not be empty")
            object.__setattr__(self, name, frozenset(e.lower() for e in expressions))

    @classmethod
    def from_dict(cls, record: dict) -> "KeywordRuleSet":
        try:
            return cls(
                must_have=frozenset(record["M"]),
                good_to_have=frozenset(record["G"]),
                unique=frozenset(record["U"]),
                exclude=frozenset(record["E"]),
            )
        except KeyError as exc:
            raise DatasetError(f"rules file is missing set {exc}") from exc

    @classmethod
    def from_json(cls, path: str | Path) -> "KeywordRuleSet":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))

    def to_dict(self) -> dict:
        return {
            "M": sorted(self.must_have),
            "G": sorted(self.good_to_have),
            "U": sorted(self.unique),
            "E": sorted(self.exclude),
        }


@dataclass
class FilterReport:
    """Counts for one mining run; merges as a monoid for sharded streams."""

    scanned: int = 0
    selected: int = 0
    malformed: int = 0
    reason_histogram: dict[str, int] = field(default_factory=lambda: {r: 0 for r in REASONS})

    @property
    def rate(self) -> float:
        return self.selected / self.scanned if self.scanned else 0.0

    def merge(self, other: "FilterReport") -> "FilterReport":
        merged = FilterReport(
            scanned=self.scanned + other.scanned,
            selected=self.selected + other.selected,
            malformed=self.malformed + other.malformed,
        )
        for reason in REASONS:
            merged.reason_histogram[reason] = (
                self.reason_histogram.get(reason, 0) + other.reason_histogram.get(reason, 0)
            )
        return merged

    def to_dict(self) -> dict:
        return {
            "scanned": self.scanned,
            "selected": self.selected,
            "rate": self.rate,
            "malformed": self.malformed,
            "reason_histogram": dict(self.reason_histogram),
        }


def _matches_any(text: str, expressions: frozenset[str]) -> bool:
    return any(expression in text for expression in expressions)


def select_pair(pair: QAPair, rules: KeywordRuleSet) -> tuple[str, str]:
    """Decide one pair; returns (decision, reason).

    Precedence: a unique expression selects unconditionally; otherwise a
    must-have anchor selects unless an exclude expression appears; a
    good-to-have term never selects on its own, it only refines the
    reason when an anchor is present.
    """
    text = f"{pair.question} {pair.answer}".lower()
    if _matches_any(text, rules.unique):
        return SELECTED, REASON_UNIQUE
    if _matches_any(text, rules.must_have):
        if _matches_any(text, rules.exclude):
            return REJECTED, REASON_EXCLUDED
        if _matches_any(text, rules.good_to_have):
            return SELECTED, REASON_GOOD_WITH_MUST
        return SELECTED, REASON_MUST
    return REJECTED, REASON_NO_ANCHOR


def filter_dataset(
    pairs: Iterable[QAPair],
    rules: KeywordRuleSet,
    report: FilterReport | None = None,
) -> tuple[Iterator[QAPair], FilterReport]:
    """Stream the selected pairs in input order and tally the report.

    The report is only complete once the returned iterator is exhausted;
    pass a shared report when the pair reader also counts malformed lines.
    """
    if report is None:
        report = FilterReport()

    def generate() -> Iterator[QAPair]:
        for pair in pairs:
            report.scanned += 1
            decision, reason = select_pair(pair, rules)
            report.reason_histogram[reason] += 1
            if decision == SELECTED:
                report.selected += 1
                yield pair

    return generate(), report
