"""Exception types shared across the package."""


class TwointError(Exception):
    """Base class for all package-specific errors."""


class NotIrreducibleError(TwointError):
    """The supplied modulus polynomial is reducible over the prime field."""


class NotPrimitiveError(TwointError):
    """The residue class of the indeterminate does not generate the
    multiplicative group, so published exponent pairs would not reproduce."""


class UnsupportedQError(TwointError):
    """q = 2 (mod 3): the Segre products do not form an orbit transversal."""


class InfeasibleCountsError(TwointError):
    """A counting system has no non-negative integer solution."""


class RankDeficientError(TwointError):
    """An expanded point set fails to span the ambient projective space."""


class NotTwoIntersectionError(TwointError):
    """A point set meets hyperplanes in more than two distinct sizes."""


class NotStronglyRegularError(TwointError):
    """A graph fails the strong-regularity check."""


class ParseError(TwointError):
    """Malformed catalog input."""


class VerificationFailedError(TwointError):
    """An imported record does not re-verify under the current field model."""


class ConfigMismatchError(TwointError):
    """Catalog or checkpoint data was produced under a different configuration."""


class EmptySelectionError(TwointError):
    """An operation that needs a nonempty orbit selection received an empty one."""
