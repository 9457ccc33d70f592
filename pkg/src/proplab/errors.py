"""Exception types shared across the toolkit."""


class ProplabError(Exception):
    """Base class for all toolkit errors."""


class CorpusError(ProplabError):
    """Malformed article files or span annotations."""


class LexiconError(ProplabError):
    """Malformed emotion lexicon or category dictionary."""


class StoreError(ProplabError):
    """Malformed or inconsistent precomputed score / embedding store."""


class FetchError(ProplabError):
    """Remote scoring endpoint failure."""


class ModelError(ProplabError):
    """Dimension mismatch or invalid model configuration."""


class CheckpointError(ProplabError):
    """Unreadable, truncated or incompatible checkpoint file."""


class SchemaError(ProplabError):
    """Feature schema does not match what a checkpoint was trained on."""


class DegenerateDataError(ProplabError):
    """Statistic undefined on the given input (e.g. constant variable)."""


class EvaluationError(ProplabError):
    """Predictions cannot be aligned with gold annotations."""
