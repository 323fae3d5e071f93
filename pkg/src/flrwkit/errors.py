"""Exception hierarchy shared by all flrwkit modules."""


class FlrwkitError(Exception):
    """Base class for all errors raised by this package."""


# --- expression layer ---------------------------------------------------


class ExprSyntaxError(FlrwkitError):
    """Malformed expression text.

    Carries the byte offset of the failure and the set of token kinds that
    would have been accepted there.
    """

    def __init__(self, message, offset, expected=()):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset
        self.expected = frozenset(expected)


class UnknownFunction(FlrwkitError):
    def __init__(self, name, offset):
        super().__init__(f"unknown function {name!r} (offset {offset})")
        self.name = name
        self.offset = offset


class DomainError(FlrwkitError):
    """Evaluation left the mathematical domain (ln of non-positive value,
    fractional power of a negative base, division by zero, ...)."""


class NonFinite(FlrwkitError):
    """Evaluation produced an overflow, underflow-to-inf or NaN."""


# --- scale factor diagnostics -------------------------------------------


class AnchorOutsideInterval(FlrwkitError):
    pass


class FiniteUpperEndpoint(FlrwkitError):
    """Operation requires t_sup = +inf."""


class FiniteLowerEndpoint(FlrwkitError):
    """Operation requires t_inf = -inf."""


class InfiniteLowerEndpoint(FlrwkitError):
    """Operation requires a finite t_inf."""


# --- spherical chart -----------------------------------------------------


class RegionCrossesDegenerateSet(FlrwkitError):
    pass


class CharacteristicEscapedRegion(FlrwkitError):
    """A characteristic left the valid zone before reaching the reference
    slice (hit the degenerate set, the interval boundary, the axis, or the
    travel cap)."""


class DegeneratePoint(FlrwkitError):
    """Coefficient requested on (or too close to) a degenerate locus."""


class OutsideBuiltRegion(FlrwkitError):
    """Chart query outside the rectangle the grid was built on; the chart
    never extrapolates."""


# --- axisymmetric chart ---------------------------------------------------


class PathCrossesSingularity(FlrwkitError):
    """Radial quadrature path hits a singularity of the source field."""


class ProfileViolation(FlrwkitError):
    """Profile function violates f(0)=0 or has f'=0 at a sampled argument."""


class ThetaHitPole(FlrwkitError):
    """Characteristic curve reached theta = 0 or pi."""


class ThetaHitEquator(FlrwkitError):
    """Characteristic curve started at (or reached) theta = pi/2, where the
    characteristic ODE derivation breaks down."""


# --- verification ----------------------------------------------------------


class SampleOutsideRegion(FlrwkitError):
    pass


# --- probes ----------------------------------------------------------------


class CurveLeavesInterval(FlrwkitError):
    pass


class DegenerateThetaFixed(FlrwkitError):
    pass


# --- CLI --------------------------------------------------------------------


class ConfigError(FlrwkitError):
    """Bad run configuration; message identifies the offending section/field."""
