"""QA-pair mining, translation, and splitting."""

from ecoqa.qa.mining import (
    REASON_EXCLUDED,
    REASON_GOOD_WITH_MUST,
    REASON_MUST,
    REASON_NO_ANCHOR,
    REASON_UNIQUE,
    REASONS,
    REJECTED,
    SELECTED,
    FilterReport,
    KeywordRuleSet,
    filter_dataset,
    select_pair,
)
from ecoqa.qa.pairs import (
    QAPair,
    iter_qa_pairs,
    load_qa_pairs,
    read_qa_pairs,
    save_qa_pairs,
)
from ecoqa.qa.split import DEFAULT_RATIOS, split_dataset
from ecoqa.qa.translate import DictionaryProvider, IdentityProvider, translate_pairs

__all__ = [
    "REASON_EXCLUDED",
    "REASON_GOOD_WITH_MUST",
    "REASON_MUST",
    "REASON_NO_ANCHOR",
    "REASON_UNIQUE",
    "REASONS",
    "REJECTED",
    "SELECTED",
    "FilterReport",
    "KeywordRuleSet",
    "filter_dataset",
    "select_pair",
    "QAPair",
    "iter_qa_pairs",
    "load_qa_pairs",
    "read_qa_pairs",
    "save_qa_pairs",
    "DEFAULT_RATIOS",
    "split_dataset",
    "DictionaryProvider",
    "IdentityProvider",
    "translate_pairs",
]
