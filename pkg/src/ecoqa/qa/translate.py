"""Translation providers behind a small interface.

Real translation APIs (keys, quotas, nondeterminism) stay out of the
core: the default provider is the identity, and a dictionary provider
covers tests and offline word-level substitution.
"""

from __future__ import annotations

import json
import logging
from dataclasses import replace
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping

from ecoqa.errors import TranslationError
from ecoqa.qa.pairs import QAPair

logger = logging.getLogger(__name__)


class IdentityProvider:
    """Passes text through unchanged and leaves the language flag alone."""

    target_language = None

    def translate(self, text: str) -> str:
        return text


class DictionaryProvider:
    """Word-level substitution from a static mapping.

    With ``strict=True`` any word absent from the mapping raises, which
    doubles as a fail-everything provider for exercising reject paths.
    """

    def __init__(self, mapping: Mapping[str, str], target_language: str = "pt", strict: bool = False):
        self.mapping = dict(mapping)
        self.target_language = target_language
        self.strict = strict

    @classmethod
    def from_json(cls, path: str | Path, target_language: str = "pt", strict: bool = False):
        with open(path, "r", encoding="utf-8") as handle:
            return cls(json.load(handle), target_language=target_language, strict=strict)

    def translate(self, text: str) -> str:
        words = []
        for word in text.split():
            if word in self.mapping:
                words.append(self.mapping[word])
            elif self.strict:
                raise TranslationError(f"no dictionary entry for {word!r}")
            else:
                words.append(word)
        return " ".join(words)


def translate_pairs(
    pairs: Iterable[QAPair],
    provider,
    retries: int = 2,
    on_reject: Callable[[QAPair, Exception], None] | None = None,
) -> Iterator[QAPair]:
    """Translate question and answer of each pair, retrying per text.

    A pair whose provider calls keep failing is routed to ``on_reject``
    and the run continues.
    """
    for pair in pairs:
        try:
            question = _attempt(provider, pair.question, retries)
            answer = _attempt(provider, pair.answer, retries)
        except Exception as exc:  # provider errors surface per pair
            logger.warning("translation failed for pair %r: %s", pair.question[:60], exc)
            if on_reject is not None:
                on_reject(pair, exc)
            continue
        yield replace(pair, question=question, answer=answer,
                      language=provider.target_language or pair.language)


def _attempt(provider, text: str, retries: int) -> str:
    last_error: Exception | None = None
    for _ in range(retries + 1):
        try:
            result = provider.translate(text)
            if not isinstance(result, str):
                raise TranslationError(f"provider returned {type(result).__name__}, expected str")
            return result
        except Exception as exc:
            last_error = exc
    raise TranslationError(f"provider failed after {retries + 1} attempts: {last_error}")
