import enum
import typing as t


__all__ = ("BaseStrEnum", "BaseIntEnum")


E = t.TypeVar("E", bound="BaseStrEnum")


class BaseIntEnum(int, enum.Enum):
    def __str__(self) -> str:
        return str(int(self))


class BaseStrEnum(str, enum.Enum):
    def __str__(self) -> str:
        return str(self.value)

    @classmethod
    def values(cls) -> t.Tuple[str, ...]:
        return tuple(member.value for member in cls)

    @classmethod
    def choose(cls: t.Type[E], value: str, what: str) -> E:
        """
        Look up a member by value.

        :raises ValueError: naming the accepted values.
        """
        try:
            return cls(value)
        except ValueError:
            raise ValueError(
                f"{value} is not a valid {what}, "
                f"please specify one of: {', '.join(cls.values())}"
            ) from None
