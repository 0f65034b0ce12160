from dataclasses import dataclass
from typing import Literal


class MetabelianError(Exception):
    """Base class of every error raised by the package."""


class ParseError(MetabelianError, ValueError):
    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


class DomainError(MetabelianError, ValueError):
    """An operation was called outside its domain of definition."""


class DimensionError(DomainError):
    pass


class NonUnitError(DomainError):
    pass


class NotDivisibleError(DomainError):
    pass


class NotInImageError(DomainError):
    """Coordinate data does not come from an element of the algebra."""


class NotInSError(NotInImageError):
    """A matrix is not of the form I_m + S."""


class InvariantViolation(MetabelianError, RuntimeError):
    """An internal self-check failed; always a bug, never bad input."""


@dataclass(frozen=True)
class AlgebraConfig:
    """Rank m and nilpotency class c of L_{m,c}."""

    rank: int
    nil_class: int

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 2:
            raise DomainError(f"rank must be an integer >= 2, got {self.rank!r}")
        if not isinstance(self.nil_class, int) or self.nil_class < 2:
            raise DomainError(
                f"class must be an integer >= 2, got {self.nil_class!r}"
            )

    @property
    def m(self) -> int:
        return self.rank

    @property
    def c(self) -> int:
        return self.nil_class

    @property
    def lie_cap(self) -> int:
        # h_pq of [y_p,y_q]h_pq has degree <= c-2
        return self.nil_class - 2

    @property
    def derivative_cap(self) -> int:
        return self.nil_class - 1

    @property
    def membership_cap(self) -> int:
        return self.nil_class

    def check_same(self, other: "AlgebraConfig"):
        if self != other:
            raise DimensionError(f"config mismatch: {self} vs {other}")


@dataclass
class RenderParam:
    output: Literal["text", "json"] = "text"
    # Cross-check bch against the envelope oracle before printing.
    verify: bool = False
