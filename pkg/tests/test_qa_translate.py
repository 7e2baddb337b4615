"""Translation provider behaviour."""

import pytest

from ecoqa.errors import TranslationError
from ecoqa.qa import DictionaryProvider, IdentityProvider, QAPair, translate_pairs


class FlakyProvider:
    """Fails a fixed number of times before succeeding."""

    target_language = "pt"

    def __init__(self, failures):
        self.failures = failures
        self.calls = 0

    def translate(self, text):
        self.calls += 1
        if self.calls <= self.failures:
            raise RuntimeError("upstream hiccup")
        return text.upper()


class AlwaysFailingProvider:
    target_language = "pt"

    def translate(self, text):
        raise RuntimeError("service unavailable")


def test_identity_provider_keeps_text_and_language():
    pairs = [QAPair("largest river?", "the amazon", language="en")]
    out = list(translate_pairs(pairs, IdentityProvider()))
    assert out[0].question == "largest river?"
    assert out[0].answer == "the amazon"
    assert out[0].language == "en"


def test_dictionary_provider_translates_known_words():
    provider = DictionaryProvider({"river": "rio"}, target_language="pt")
    pairs = [QAPair("largest river", "a river basin")]
    out = list(translate_pairs(pairs, provider))
    assert out[0].question == "largest rio"
    assert out[0].answer == "a rio basin"
    assert out[0].language == "pt"


def test_always_failing_provider_routes_every_pair_to_rejects():
    pairs = [QAPair(f"q{i}?", f"a{i}") for i in range(4)]
    rejected = []
    out = list(translate_pairs(pairs, AlwaysFailingProvider(), on_reject=lambda p, e: rejected.append(p)))
    assert out == []
    assert len(rejected) == 4


def test_retries_recover_transient_failures():
    provider = FlakyProvider(failures=2)
    out = list(translate_pairs([QAPair("hello?", "world")], provider, retries=2))
    assert out[0].question == "HELLO?"


def test_strict_dictionary_raises_on_unknown_words():
    provider = DictionaryProvider({}, strict=True)
    with pytest.raises(TranslationError):
        provider.translate("anything")


def test_run_continues_after_a_reject():
    calls = {"n": 0}

    class SometimesFailing:
        target_language = "pt"

        def translate(self, text):
            calls["n"] += 1
            if "bad" in text:
                raise RuntimeError("nope")
            return text

    pairs = [QAPair("bad question", "x"), QAPair("good question", "y")]
    rejected = []
    out = list(translate_pairs(pairs, SometimesFailing(), retries=0,
                               on_reject=lambda p, e: rejected.append(p)))
    assert [p.question for p in out] == ["good question"]
    assert [p.question for p in rejected] == ["bad question"]
