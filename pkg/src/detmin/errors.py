"""Exception types shared across the verification pipelines."""


class DegenerateMetric(Exception):
    """An induced metric (or one of its blocks) is numerically singular.

    Raised when a condition-number guard trips before an inversion.  The
    message carries the offending condition estimates so callers can report
    the point as near-boundary instead of silently producing garbage.
    """


class InvalidChartPoint(Exception):
    """Chart data does not describe a point of the declared stratum."""


class SingularGram(Exception):
    """The Gram matrix of constraint gradients is not invertible.

    Happens on deeper strata, where the constraint gradients degenerate and
    the level-set tangent projector is undefined.
    """


class ConventionFailure(Exception):
    """A row/column coefficient convention cannot be realised at this point.

    The affected conventions pin specific coefficients to 0 or -1; at points
    where the designated spanning rows (or columns) fail to span, the
    coefficients do not exist and the caller must resample.
    """
