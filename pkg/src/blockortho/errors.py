"""Exception types shared across the package."""


class BlockOrthoError(Exception):
    """Base class for every error raised by this package."""


class MomentError(BlockOrthoError):
    """A moment evaluated to something non-finite (divergent weight or quadrature)."""


class InsufficientMoments(BlockOrthoError):
    """An operation needs moments of higher order than the measure supplies."""


class KindMismatch(BlockOrthoError):
    """Exact-rational and float scalars were mixed in one operation."""


class DegreeError(BlockOrthoError):
    """A polynomial does not have the exact degree an operation requires."""


class NotPositiveDefinite(BlockOrthoError):
    """A Gram matrix failed positive definiteness (nonpositive or negligible pivot)."""


class BadFactor(BlockOrthoError):
    """A leading factor for orthogonalization is zero or not finite."""


class NotCheckerboard(BlockOrthoError):
    """A matrix violates the required even/odd sparsity structure."""


class NotSymmetric(BlockOrthoError):
    """A symmetric measure was required but not supplied."""


class NotRepresentable(BlockOrthoError):
    """The requested normalization needs square roots that leave the rationals."""


class ConditioningError(BlockOrthoError):
    """A float pipeline was refused because conditioning would destroy accuracy."""


class DependentConstraints(BlockOrthoError):
    """Constraint polynomials are linearly dependent."""


class DependentBasis(BlockOrthoError):
    """Supplied basis polynomials are linearly dependent."""


class MeasureMismatch(BlockOrthoError):
    """Two constructions that must share a measure pair do not."""


class NonPositiveParameter(BlockOrthoError):
    """A weight-family parameter that must be positive is not."""


class DimensionCap(BlockOrthoError):
    """A multidimensional verification exceeds the configured dimension cap."""


class InsufficientNodes(BlockOrthoError):
    """A quadrature grid cannot integrate the requested polynomial degree exactly."""


class OracleMismatch(BlockOrthoError):
    """Cross-validation between a construction and its determinant oracle failed."""
