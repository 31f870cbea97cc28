"""Exception hierarchy shared by all probeline modules."""


class ProbelineError(Exception):
    """Base class for every error raised by this package."""


class InvalidModel(ProbelineError, ValueError):
    """A relaxation set, drive or grid violates one of its invariants."""


class AmbiguousRegime(ProbelineError):
    """An asymptotic formula was requested outside its limiting regime."""


class DegenerateRoots(ProbelineError):
    """The two complex roots coincide; the partial-fraction form is undefined."""


class StepTooLarge(ProbelineError):
    """Root tracking could not pair roots continuously between two path points."""


class NoRealBand(ProbelineError):
    """The amplification-band quadratic has no real solutions."""


class OutsideValidity(ProbelineError):
    """A closed-form expression was evaluated outside its stated domain."""


class NoInteriorExtremum(ProbelineError):
    """A scan found no interior local extremum to refine."""


class NegativeEffectiveWidth(ProbelineError):
    """An effective Doppler-gas width came out non-positive."""


class GridNotSymmetric(ProbelineError):
    """A grid was expected to be symmetric about a centre and is not."""


class SingularSystem(ProbelineError):
    """A steady-state linear system could not be solved."""


class NoConvergence(ProbelineError):
    """An iterative numerical routine failed to meet its tolerance."""


class NoHalfHeightPoint(ProbelineError):
    """No half-extremum crossing was found on the requested side."""


class ConfigError(ProbelineError, ValueError):
    """Malformed run configuration (unknown key, bad type, inconsistent grid)."""
