"""Exception types shared across the toolkit."""


class ForgeError(Exception):
    """Base class for all corpusforge errors."""


class ParseFailure(ForgeError):
    """Source text could not be tokenized well enough for the requested operation."""


class UnsupportedLanguage(ForgeError):
    """File language is outside the supported set (C, C++)."""


class EmptyContent(ForgeError):
    """Content has too few tokens to process (e.g. fewer than shingle_k)."""


class EmptyReference(ForgeError):
    """Reference string is empty where a non-empty reference is required."""


class EmptyInput(ForgeError):
    """An aggregate operation received zero entries."""


class IndexOutOfRange(ForgeError, IndexError):
    """Requested index lies outside the model's defined range."""


class DegenerateInput(ForgeError):
    """Correlation input is degenerate (too few points or zero variance)."""


class InsufficientDays(ForgeError):
    """Fewer qualifying days than the correlation suite requires."""


class MissingSource(ForgeError):
    """A unit references a source file that is not present in the corpus."""


class UnreadableSource(ForgeError):
    """Log source could not be opened or read."""


class NoEligibleUnits(ForgeError):
    """No semantic unit satisfied the granularity constraints (informational)."""


class ConfigInvalid(ForgeError):
    """Configuration failed validation; carries every violation found."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class StageFailure(ForgeError):
    """A build stage failed; outputs of completed stages are kept."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")
