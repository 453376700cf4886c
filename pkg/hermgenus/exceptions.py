import typing as t

from .utils.enum import BaseIntEnum


__all__ = (
    "ExitCode",
    "HermGenusError",
    "InputError",
    "LatticeFileError",
    "PreconditionError",
    "PrimeSearchError",
    "VerificationError",
)


class ExitCode(BaseIntEnum):
    SUCCESS = 0
    INPUT_ERROR = 1
    PRECONDITION = 2
    VERIFICATION = 3


class HermGenusError(Exception):
    """A hermgenus computation failed"""
    exit_code = ExitCode.VERIFICATION


class InputError(HermGenusError, ValueError):
    """Input data is malformed"""
    exit_code = ExitCode.INPUT_ERROR


class LatticeFileError(InputError):
    """A lattice file does not match the expected schema"""

    def __init__(self, field: str, reason: str) -> None:
        self.field = field
        self.reason = reason
        super().__init__("Invalid lattice file at %r: %s" % (field, reason))


class PreconditionError(HermGenusError):
    """An operation was called outside of its domain"""
    exit_code = ExitCode.PRECONDITION

    def __init__(self, condition: str) -> None:
        self.condition = condition
        super().__init__(condition)


class PrimeSearchError(PreconditionError):
    """
    No generating set of neighbour primes was found below
    the configured bound.
    """

    def __init__(
        self,
        bound: int,
        found: int,
        order: int,
        primes: t.Sequence[int] = (),
    ) -> None:
        self.bound = bound
        self.found = found
        self.order = order
        self.primes = tuple(primes)
        condition = (
            "Prime search exhausted below %d: generated subgroup of "
            "order %d out of %d (primes used: %s)" % (
                bound, found, order,
                ", ".join(str(p) for p in self.primes) or "none")
        )
        super().__init__(condition)


class VerificationError(HermGenusError, RuntimeError):
    """An internal consistency check failed"""
    exit_code = ExitCode.VERIFICATION
