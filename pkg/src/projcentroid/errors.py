"""Exception hierarchy shared by all modules."""


class ProjCentroidError(Exception):
    """Base class for every error raised by this package."""


class GeometryError(ProjCentroidError, ValueError):
    """Invalid geometric input."""


class DegenerateInput(GeometryError):
    """Points do not affinely span the ambient space."""


class DegenerateSpan(DegenerateInput):
    """The point set of a centering problem is not full-dimensional."""


class DegenerateSimplex(GeometryError):
    """A simplex has (numerically) zero volume."""


class DegenerateBody(GeometryError):
    """A body is empty, lower-dimensional or self-overlapping."""


class CenterOutside(GeometryError):
    """Polar center is not strictly inside the polytope."""


class PointOutside(GeometryError):
    """A point that must be interior is not."""


class CoincidentPoints(GeometryError):
    """Two points that must differ coincide."""


class DivisionByZero(ProjCentroidError, ZeroDivisionError):
    """Cross-ratio with a vanishing denominator."""


class AtInfinity(ProjCentroidError, ArithmeticError):
    """A point is mapped to the hyperplane at infinity."""


class OutsideBall(GeometryError):
    """A point that must lie in the open unit ball does not."""


class Singular(ProjCentroidError, ArithmeticError):
    """A projective matrix is not invertible."""


class NotAdmissible(GeometryError):
    """A projective map sends part of the body to infinity."""


class OutsideDomain(GeometryError):
    """A functional is evaluated outside its open domain."""


class ZeroDirection(GeometryError):
    """A direction vector is zero."""


class TooFewPoints(GeometryError):
    """Not enough points for the requested problem."""


class EmptyDomain(GeometryError):
    """Combined functional has an empty domain."""


class StartOutsideDomain(GeometryError):
    """Solver start point is not strictly interior."""


class QOutsideHull(GeometryError):
    """Target point is not strictly inside the convex hull."""


class ContainmentViolated(GeometryError):
    """The inner set is not contained in the interior of the outer one."""


class SupportCountViolated(GeometryError):
    """A support hyperplane carries too many of the points for existence."""


class DegenerateGeodesic(GeometryError):
    """All points on the sphere with too much mass on one geodesic."""


class OnArrangement(GeometryError):
    """A covector vanishes at one of the points."""


class NotGeneralPosition(GeometryError):
    """Points are not in general position."""


class UnsupportedDimension(GeometryError):
    """Operation implemented only for specific dimensions."""
