"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An argument broke an operation's precondition."""


class FormatError(ValueError):
    """A serialized artifact (model, key, mask, image) is malformed."""


class KeyMismatch(ValueError):
    """A stego key does not fit the model it was applied to."""


class TrainingError(RuntimeError):
    """Training produced a non-finite loss or gradient."""


class NumericError(RuntimeError):
    """A non-finite value appeared inside a network evaluation."""
