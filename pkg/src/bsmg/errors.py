"""Exception types shared across the toolkit."""


class BsmgError(Exception):
    """Base class for all toolkit errors."""


class BoundExceeded(BsmgError):
    """A search bound was exhausted before an answer was found."""


class RadiusExceeded(BsmgError):
    """A tree computation left the configured radius."""


class GroupTooLarge(BsmgError):
    """Group closure exceeded the configured element bound."""


class ClosureTooLarge(BsmgError):
    """Partial isomorphism closure exceeded the configured arrow bound."""


class EmptySet(BsmgError):
    """A restriction target was empty."""


class NotInFullGroup(BsmgError):
    """A map violates the full pseudogroup invariants."""


class NotNormal(BsmgError):
    """Quotient construction failed a normality requirement."""


class NotQuasiNormal(BsmgError):
    """A witness family for quasi-normality was required and not available."""


class NotMeasurePreserving(BsmgError):
    """Operation requires a measure-preserving groupoid."""


class NotACocycle(BsmgError):
    """Supplied arrow data violates the cocycle identity."""


class IndexNotConstant(BsmgError):
    """An operation requires the index function to be constant."""


class TargetMismatch(BsmgError):
    """Two cocycles take values in different groups."""


class InfiniteComponents(BsmgError):
    """Skew-product component structure did not stabilize within the window cap."""


class NotPowerValued(BsmgError):
    """Cocycle values are not powers of the modular ratio."""


class InvalidLevel(BsmgError):
    """Level parameters out of range."""


class ParamMismatch(BsmgError):
    """Operands belong to different parameter families."""


class LevelBudgetExceeded(BsmgError):
    """A level-consuming operation ran out of truncation budget."""


class NotAUnit(BsmgError):
    """Ring element is not a unit at its truncation."""


class NotErgodic(BsmgError):
    """Operation requires an ergodic base action."""


class PrecisionError(BsmgError):
    """Interval arithmetic could not decide a comparison at maximum precision."""


class VerificationFailure(BsmgError):
    """A verified identity failed; carries the offending instance."""
