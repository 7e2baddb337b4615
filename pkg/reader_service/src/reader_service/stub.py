"""Deterministic stub generator for contract tests: no model required."""

from __future__ import annotations

import re

from reader_service.budget import truncate_passages

_SENTENCE_END = re.compile(r"[.?!]")

STUB_MODEL_NAME = "stub"


class StubGenerator:
    """Answers with the first sentence of passage 1, verbatim.

    The budget is enforced first, so a budget that cuts into passage 1
    shortens (or empties) the answer.  Identical requests always produce
    identical responses.
    """

    model_name = STUB_MODEL_NAME

    def generate(self, question: str, passages: list[str], budget: int) -> tuple[str, bool]:
        kept, truncated = truncate_passages(question, passages, budget)
        if not kept:
            return "", truncated
        first = kept[0]
        match = _SENTENCE_END.search(first)
        answer = first[: match.end()] if match else first
        return answer.strip(), truncated
