"""Exception hierarchy shared by all smnn modules."""


class SmnnError(Exception):
    """Base class for every error raised by this package."""


class DimensionTooSmall(SmnnError):
    """Fewer points than needed to span a full-dimensional simplex."""


class DegenerateSupport(SmnnError):
    """All points lie in a proper affine subspace of the ambient space."""


class SingularSimplex(SmnnError):
    """A simplex whose vertex system is numerically singular."""


class NoVisibleFacet(SmnnError):
    """No boundary facet separates an exterior query from the hull.

    Never expected for valid input; signals a geometry or tolerance bug.
    """


class OutsideBall(SmnnError):
    """Query point lies outside the bounding ball of the embedding space."""


class ZeroNorm(SmnnError):
    """Cannot project the zero vector onto the bounding sphere."""


class NoContainingVirtualSimplex(SmnnError):
    """No sphere-augmented simplex contains the exterior query point."""


class InvalidMargin(SmnnError):
    """Radius margin must be strictly positive."""


class InvalidCount(SmnnError):
    """Requested sample count is not usable by a generator."""


class TooManyClusters(SmnnError):
    """More cluster centroids requested than hypercube vertices available."""


class ParseError(SmnnError):
    """Malformed cell in a dataset file; carries its 1-based location."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class DimensionMismatch(SmnnError):
    """Feature dimension of the data does not match what was expected."""
