"""Exception types shared across the package.

Hard contract violations raise; soft conditions (regime guards, proximity
to excluded points) are reported as warning fields on result objects, not
as exceptions.
"""


class HgfaeError(Exception):
    """Base class for all package errors."""


class ParameterDomain(HgfaeError):
    """Input parameters outside an operation's admissible domain."""


class DomainViolation(ParameterDomain):
    """Value-level domain violation (excluded point, bad range)."""


class PoleAtNonPositiveInteger(HgfaeError):
    """Gamma-type evaluation requested at a non-positive integer."""


class BelowThreshold(HgfaeError):
    """Argument magnitude below the configured asymptotic cutoff."""


class NonConvergent(HgfaeError):
    """A series or iteration failed to converge in its admissible domain."""


class UndefinedC(HgfaeError):
    """Lower hypergeometric parameter hits a non-positive integer before
    the series terminates."""


class DivergesAtOne(HgfaeError):
    """2F1 evaluated at z = 1 with Re(c - a - b) <= 0."""


class DegenerateConnection(HgfaeError):
    """Connection-formula parameters degenerate and no alternative route
    applies."""


class SingularityOnPath(HgfaeError):
    """An integration path runs through a pole or branch point."""


class ContourEnclosesCriticalPoint(HgfaeError):
    """The critical point 1/z lies on or inside a closed contour that must
    exclude it."""


class OnBranchCut(HgfaeError):
    """Phase-function evaluation requested on a declared branch cut."""


class AtSingularity(HgfaeError):
    """Evaluation requested at a singular point of the function."""


class HigherOrderSaddle(HgfaeError):
    """Saddle of order >= 2 where only simple saddles are supported."""


class StallNearSingularity(HgfaeError):
    """Path tracer step size underflowed away from any known endpoint."""


class PathSingularity(SingularityOnPath):
    """Quadrature path touches a singularity of the integrand."""


class CoalescentSaddles(HgfaeError):
    """The two saddle points coalesce (discriminant vanishes)."""


class ExcludedPoint(DomainViolation):
    """Evaluation at a point excluded from an expansion's validity set."""


class AtOne(ExcludedPoint):
    """Expansion evaluated exactly at z = 1."""


class ExcludedZ(ExcludedPoint):
    """Partition-function expansion evaluated at an excluded variable value."""


class RealInputsUseDominant(HgfaeError):
    """Two-saddle complex expansion called with real z or real lambda;
    the dominant-saddle form applies instead."""


class DegenerateTransformation(HgfaeError):
    """A case reduction hits integer parameter differences where the
    transformation formula is invalid."""


class ReferenceZero(HgfaeError):
    """Relative error requested against a zero reference value."""


class ComplementRequired(HgfaeError):
    """Lattice-gas parameters need the holes complement (p + t > N)."""


class SizeGuard(HgfaeError):
    """Exact enumeration refused: system size exceeds the guard."""


class ConfigError(HgfaeError):
    """Malformed CLI configuration file."""


# Warning labels carried on result objects (not exceptions).
NEAR_CRITICAL_Z = "near_critical_z"
NEAR_EXCLUDED_POINT = "near_excluded_point"
REGIME_GUARD = "regime_guard"
LARGE_Z_CUTOFF = "large_z_with_eps_below_one"
COMPLEMENT_APPLIED = "holes_complement_applied_probabilities_not_rescaled"
