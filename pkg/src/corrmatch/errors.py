"""Exception types raised across the package.

Validation failures (bad shapes, bad configuration, unparseable files)
derive from :class:`InvalidInput`, which is a ``ValueError``.  Data-dependent
numerical degeneracies (constant columns, rank deficiency) derive directly
from :class:`CorrmatchError` so callers can distinguish "fix your call"
from "fix your data".
"""


class CorrmatchError(Exception):
    """Base class for all errors raised by corrmatch."""


class InvalidInput(CorrmatchError, ValueError):
    """Malformed argument: wrong shape, empty input, non-finite values."""


class ShapeMismatch(InvalidInput):
    """Two matrices that must agree in shape do not."""


class InvalidConfig(InvalidInput):
    """Inconsistent sampler configuration."""


class InvalidCorrelation(InvalidInput):
    """A requested correlation target is not symmetric positive definite."""


class InvalidCompetitor(InvalidInput):
    """A candidate transform is not orthogonal or does not fix the all-ones direction."""


class SchemaMismatch(InvalidInput):
    """Two datasets that must share feature names do not."""


class MissingColumn(InvalidInput):
    """A selected column name does not exist in the file header."""


class DegenerateTarget(InvalidInput):
    """A target variance is zero or negative, making correlation undefined."""


class ZeroNormColumn(CorrmatchError):
    """A feature column has zero Euclidean norm; cosine similarity is undefined."""

    def __init__(self, name, message=None):
        self.name = name
        super().__init__(message or f"column {name!r} has zero norm")


class ConstantColumn(CorrmatchError):
    """A feature column is constant; Pearson correlation is undefined."""

    def __init__(self, name, message=None):
        self.name = name
        super().__init__(message or f"column {name!r} is constant")


class RankDeficient(CorrmatchError):
    """The reference matrix is numerically rank deficient."""

    def __init__(self, columns, message=None):
        self.columns = tuple(columns)
        super().__init__(
            message
            or "matrix is numerically rank deficient; linearly dependent columns: "
            + ", ".join(repr(c) for c in self.columns)
        )


class ParseError(CorrmatchError):
    """A CSV cell or row could not be parsed as a finite number.

    ``row`` is the 1-based line number in the file (header included);
    ``column`` is the offending column name, or ``None`` for structural
    problems such as ragged rows.
    """

    def __init__(self, row, column, message):
        self.row = row
        self.column = column
        super().__init__(message)
