"""Exception types shared across the package."""


class DeltaWellError(Exception):
    """Base class for all package-specific errors."""


class ClosureError(DeltaWellError):
    """A symbolic product or operation leaves the supported term language."""


class DivergentWeightError(DeltaWellError):
    """A limit-defined delta weight does not exist (lower-order Taylor
    coefficients of the numerator do not vanish)."""


class DivergentIntegralError(DeltaWellError):
    """An antiderivative has no finite limit at an infinite endpoint."""


class AtomAnchorError(DeltaWellError):
    """Pointwise evaluation requested at a delta-atom anchor."""


class UnsupportedOrderError(DeltaWellError):
    """Differentiation of a first-order delta atom was requested."""


class InvalidQuantumNumberError(DeltaWellError):
    """Quantum number outside n >= 1."""


class NonHermitianError(DeltaWellError):
    """An expectation value came out with a non-negligible imaginary part,
    which signals an implementation bug rather than a user error."""


class NormalizationError(DeltaWellError):
    """Wave-packet coefficients are not normalized."""


class OutOfWindowError(DeltaWellError):
    """Wavenumber outside the bound-state window of a finite well."""


class InsufficientDepthError(DeltaWellError):
    """A well depth binds fewer states than requested."""


class InternalMismatchError(DeltaWellError):
    """Two independent computation routes disagreed beyond tolerance."""


class RecoveryMismatchError(DeltaWellError):
    """Potential recovery did not reproduce the step-well form."""
