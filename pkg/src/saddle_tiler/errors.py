"""Exception types raised by the library."""


class SaddleTilerError(Exception):
    """Base class for all domain errors raised by saddle_tiler."""


# -- quadratic forms / transformations ---------------------------------------

class NotIndefiniteError(SaddleTilerError):
    """The form has ac - b^2 >= 0; its graph is not a saddle."""


class NearDegenerateError(SaddleTilerError):
    """|ac - b^2| is so small the bilinear coefficient would vanish."""


class ZeroParameterError(SaddleTilerError):
    """A hyperbolic-slide parameter of zero is singular."""


class NotOnCommonHyperbolaError(SaddleTilerError):
    """The two free vertices do not share a coordinate-product level set."""


class NotFirstQuadrantError(SaddleTilerError):
    """Vertex coordinates must be normalized into the open first quadrant."""


# -- per-triangle error analysis ----------------------------------------------

class ZeroEdgeProductError(SaddleTilerError):
    """The error profile along this edge is linear; no interior extremum."""


class ExtremumOutsideEdgeError(SaddleTilerError):
    """The critical point of the edge error lies outside the open edge."""


class DegenerateTriangleError(SaddleTilerError):
    """The three vertices are (numerically) collinear."""


class DeviationOutOfRangeError(SaddleTilerError):
    """A vertex deviation lies outside the admissible error interval."""


# -- optimization -------------------------------------------------------------

class SlackOutOfRangeError(SaddleTilerError):
    """A slack value lies outside [0, sqrt(sigma)]."""


class UnrealizableProductsError(SaddleTilerError):
    """No non-degenerate triangle attains the requested edge products."""


class InvalidParameterError(SaddleTilerError):
    """A construction parameter violates its positivity requirement."""


class InvalidEpsilonError(SaddleTilerError):
    """The error budget must be a positive finite number."""


class OutOfRangeError(SaddleTilerError):
    """An argument lies outside its documented interval."""


class IdenticalCentersError(SaddleTilerError):
    """Hyperbola centers coincide; the intersection set is not finite."""


# -- tilings ------------------------------------------------------------------

class DegenerateBaseError(SaddleTilerError):
    """The tiling base triangle is degenerate."""


class WindowTooLargeError(SaddleTilerError):
    """Materializing this window would exceed the facet cap."""


class OutsideWindowError(SaddleTilerError):
    """The query point lies outside the materialized window."""


class WindowExceededError(SaddleTilerError):
    """The measurement square is larger than the materialized window."""


class UnsupportedFormatError(SaddleTilerError):
    """Unknown export format."""
