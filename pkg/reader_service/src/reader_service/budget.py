"""Entry-token budget enforcement.

The served tokenizer defines the unit: whitespace words in stub mode and
the model vocabulary's word-level tokens in model mode (they coincide).
The question is never truncated; passages are kept whole while they fit,
the boundary passage is tail-truncated, and later passages are dropped.
"""

from __future__ import annotations

SEPARATOR = "\n"


def truncate_passages(question: str, passages: list[str], budget: int) -> tuple[list[str], bool]:
    """Return the passages that fit the budget and whether anything was cut."""
    remaining = budget - len(question.split())
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
    return kept, truncated


def render_input(question: str, passages: list[str], budget: int) -> tuple[str, bool]:
    """Question plus budget-trimmed passages joined by the separator."""
    kept, truncated = truncate_passages(question, passages, budget)
    rendered = SEPARATOR.join([question] + kept) if kept else question
    return rendered, truncated
