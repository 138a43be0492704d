from pydantic import ValidationError


class ServiceError(Exception):
    """Base exception for service-layer errors."""


class InvalidAngleError(ServiceError, ValueError):
    """Raised when an angle is non-finite or outside [0, pi]."""


class DimensionMismatchError(ServiceError, ValueError):
    """Raised when array shapes disagree with the system dimensions."""


class NotPositiveDefiniteError(ServiceError, ValueError):
    """Raised when a matrix expected to be Hermitian positive definite is not."""


class SingularChannelError(ServiceError):
    """Raised when a ZF inversion is refused; usually two users share a beam."""

    def __init__(self, condition_number: float, limit: float) -> None:
        self.condition_number = condition_number
        self.limit = limit
        super().__init__(
            f"Equivalent channel is singular (condition number {condition_number:.3g}"
            f" exceeds {limit:.3g}); likely an AoA collision"
        )


class ConfigError(ServiceError):
    """Raised when an experiment configuration cannot be loaded or validated."""

    def __init__(self, messages: list[str]) -> None:
        self.messages = messages
        super().__init__("; ".join(messages))


class ResultsError(ServiceError):
    """Raised when curve results cannot be written or read."""


def validation_messages(exc: ValidationError) -> list[str]:
    """Field-level messages for a pydantic ValidationError; unknown keys by name."""
    messages = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error["loc"])
        if error["type"] == "extra_forbidden":
            messages.append(f"unknown key '{location}'")
        elif location:
            messages.append(f"{location}: {error['msg']}")
        else:
            messages.append(error["msg"])
    return messages
