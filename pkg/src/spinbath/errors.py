"""Exception types shared across the package."""


class InternalConsistencyError(RuntimeError):
    """A self-check that should hold by construction failed.

    Raised e.g. when a Kraus family is not trace preserving or when a
    closed-form root does not annihilate the fugacity polynomial.
    """


class NumericError(RuntimeError):
    """A numerical routine (root solver, eigensolver) failed to converge."""


class UndefinedConditionalError(ValueError):
    """Conditioning event has (numerically) zero probability."""
