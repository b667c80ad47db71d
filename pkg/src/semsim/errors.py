"""Exception types shared across the package."""


class SemsimError(Exception):
    """Base class for all errors raised by semsim."""


class TaxonomyError(SemsimError):
    """Invalid taxonomy input: malformed line, dangling reference, cycle."""


class MeasureError(SemsimError):
    """A similarity measure was applied to invalid arguments."""


class RankingError(SemsimError):
    """Invalid input to a ranking or correlation operation."""


class UndefinedCorrelationError(RankingError):
    """Correlation is undefined because one input has zero variance."""


class EnsembleError(SemsimError):
    """Invalid ensemble construction or aggregation request."""


class DatasetError(SemsimError):
    """Invalid pair, mapping, response, or ground-truth data."""


class EvaluationError(SemsimError):
    """Experiment inputs are inconsistent or incomplete."""
