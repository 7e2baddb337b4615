"""Exception hierarchy shared by all pipeline stages.

Every error class carries a distinct process exit code so the CLI can
map failures onto stable shell semantics (argparse owns exit code 2 for
usage errors).
"""


class EcoQAError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class CorpusError(EcoQAError):
    """Corpus ingestion, parsing, or chunking failure."""

    exit_code = 3


class EmptyGraphError(CorpusError):
    """A category-links stream yielded zero usable tuples."""


class UnknownCategoryError(CorpusError):
    """Traversal was asked to start from a category not in the graph."""


class DatasetError(EcoQAError):
    """QA-pair mining, translation, or splitting failure."""

    exit_code = 4


class TranslationError(DatasetError):
    """A translation provider failed after all retries."""


class RetrieverError(EcoQAError):
    """Index construction, scoring, or lookup failure."""

    exit_code = 5


class IndexFormatError(RetrieverError):
    """An index file is unreadable: wrong magic, version, or corruption."""


class ReaderError(EcoQAError):
    """Query reformulation or reader dispatch failure."""

    exit_code = 6


class BudgetError(ReaderError):
    """The token budget cannot accommodate the question."""


class RemoteReaderError(ReaderError):
    """The remote generative reader misbehaved (transport, status, or schema)."""

    exit_code = 7

    def __init__(self, message, status=None, body_excerpt=None):
        detail = message
        if status is not None:
            detail += f" (HTTP {status})"
        if body_excerpt:
            detail += f": {body_excerpt}"
        super().__init__(detail)
        self.status = status
        self.body_excerpt = body_excerpt


class ConfigError(EcoQAError):
    """Invalid or inconsistent run configuration."""

    exit_code = 8
