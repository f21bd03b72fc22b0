"""Exception hierarchy shared by all pipeline stages.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
DivergenceError -> 4.
"""


class MgaeError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(MgaeError):
    """Invalid configuration: bad option values, broken invariants, bad grids."""


class DataError(MgaeError):
    """Input data violates a contract (format, schema, ordering, degeneracy)."""


class FormatError(DataError):
    """Malformed file structure, e.g. a CSV header that is not `date,...`."""


class CellError(DataError):
    """A single unparsable cell; message carries row/column coordinates."""


class SchemaError(DataError):
    """Schema-level defect such as a duplicate asset identifier."""


class OrderingError(DataError):
    """Dates are not strictly increasing."""


class InsufficientDataError(DataError):
    """Fewer rows than an operation needs (always at least 2)."""


class DegenerateAssetError(DataError):
    """An asset column has zero variance, so correlations are undefined."""


class DistributionError(DataError):
    """A probability vector is invalid (negative mass or does not sum to 1)."""


class EntropyDomainError(DataError):
    """Entropy evaluation outside its domain, e.g. p_i = 0 with q <= 0."""


class StatsError(DataError):
    """Degenerate statistical test input, e.g. both samples with zero variance."""


class DivergenceError(MgaeError):
    """Training produced a non-finite loss; message names the epoch."""
