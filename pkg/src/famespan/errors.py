"""Exception hierarchy and CLI exit codes.

Exit code convention: 0 ok, 2 config error, 3 data error, 4 statistics
error.  Every error raised by the pipeline derives from FamespanError so
the CLI can map it to an exit code; anything else is a genuine bug.
"""


class FamespanError(Exception):
    """Base class for all pipeline errors."""

    exit_code = 1


class ConfigError(FamespanError):
    """Invalid configuration: bad window, missing n_min, bad flag combos."""

    exit_code = 2


class DataError(FamespanError):
    """Input data cannot be processed as declared."""

    exit_code = 3


class SchemaError(DataError):
    """Too many malformed lines: the declared schema does not match the file."""


class UnderfullMonth(DataError):
    """A month has fewer documents than the sampling target (fail policy)."""


class StatsError(FamespanError):
    """A statistical operation could not produce a result."""

    exit_code = 4


class EmptyCohort(StatsError):
    """A quantile or cohort operation received no values."""


class InsufficientTail(StatsError):
    """Too few durations above the tail threshold for a power-law fit."""


class DegenerateTail(StatsError):
    """All tail durations coincide with the threshold; the MLE is undefined."""


class UnstableStatistic(StatsError):
    """The statistic failed on more than 1% of bootstrap resamples."""
