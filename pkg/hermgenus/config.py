import typing as t

from .utils.enum import BaseStrEnum


__all__ = (
    "OutputFormat",
    "HermGenusConfig",
    "parse_config",
    "DEFAULT_PRIME_BOUND",
    "DEFAULT_SEED",
)


MISSING = "Missing value for '%s'"
INVALID = "Invalid value for '%s': %s"
DEFAULT_PRIME_BOUND = 1000
DEFAULT_SEED = 20240101


class OutputFormat(BaseStrEnum):
    TEXT = "text"
    JSON = "json"


class HermGenusConfig:

    __slots__ = (
        "prime_bound",
        "oracle_depth",
        "seed",
        "output_format",
        "verify",
    )

    def __init__(
        self,
        prime_bound: int,
        oracle_depth: t.Optional[int],
        seed: int,
        output_format: OutputFormat,
        verify: bool,
    ):
        self.prime_bound = prime_bound
        self.oracle_depth = oracle_depth
        self.seed = seed
        self.output_format = output_format
        self.verify = verify

    def asdict(self) -> dict:
        return {
            "prime_bound": self.prime_bound,
            "oracle_depth": self.oracle_depth,
            "seed": self.seed,
            "output_format": str(self.output_format),
            "verify": self.verify,
        }


def parse_config(
    prime_bound: t.Optional[int] = None,
    oracle_depth: t.Optional[int] = None,
    seed: t.Optional[int] = None,
    output_format: t.Optional[str] = None,
    verify: t.Optional[bool] = None,
) -> HermGenusConfig:
    """
    Fill in defaults and validate option ranges.

    :raises ValueError: for out-of-range or unknown option values.
    """
    if prime_bound is None:
        prime_bound = DEFAULT_PRIME_BOUND
    if prime_bound < 3:
        raise ValueError(INVALID % ("prime_bound", "must be at least 3"))

    if oracle_depth is not None and oracle_depth < 1:
        raise ValueError(INVALID % ("oracle_depth", "must be positive"))

    if seed is None:
        seed = DEFAULT_SEED

    if output_format is None:
        output_format = OutputFormat.TEXT.value
    if not output_format:
        raise ValueError(MISSING % "output_format")
    fmt = OutputFormat.choose(output_format, "output format")

    if verify is None:
        verify = True

    return HermGenusConfig(
        prime_bound=prime_bound,
        oracle_depth=oracle_depth,
        seed=seed,
        output_format=fmt,
        verify=verify,
    )
