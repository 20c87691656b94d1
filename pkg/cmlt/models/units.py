"""Roots of unity of Z[i] and Z[w], and exact multiples of them."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from cmlt.core.arith import checked, format_rational
from cmlt.core.errors import ArithmeticDomainError, ErrorCode


@dataclass(frozen=True)
class UnitI4:
    """i^k, k in {0, 1, 2, 3}."""

    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 4)

    def __mul__(self, other: "UnitI4") -> "UnitI4":
        return UnitI4(self.k + other.k)

    def __neg__(self) -> "UnitI4":
        return UnitI4(self.k + 2)

    def __pow__(self, e: int) -> "UnitI4":
        return UnitI4(self.k * e)

    def conj(self) -> "UnitI4":
        return UnitI4(-self.k)

    @property
    def pair(self):
        return ((1, 0), (0, 1), (-1, 0), (0, -1))[self.k]

    def to_gauss(self):
        from cmlt.models.gaussian import GaussInt

        return GaussInt(*self.pair)

    @classmethod
    def from_gauss(cls, z) -> "UnitI4":
        pairs = ((1, 0), (0, 1), (-1, 0), (0, -1))
        try:
            return cls(pairs.index((z.re, z.im)))
        except ValueError:
            raise ArithmeticDomainError(ErrorCode.BAD_PARAMS, f"{z} is not a unit of Z[i]") from None

    def __str__(self) -> str:
        return ("1", "i", "-1", "-i")[self.k]


@dataclass(frozen=True)
class UnitW6:
    """sign * w^k with sign in {+1, -1} and k in {0, 1, 2}."""

    sign: int = 1
    k: int = 0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ArithmeticDomainError(ErrorCode.BAD_PARAMS, f"unit sign must be +-1, got {self.sign}")
        object.__setattr__(self, "k", self.k % 3)

    def __mul__(self, other: "UnitW6") -> "UnitW6":
        return UnitW6(self.sign * other.sign, self.k + other.k)

    def __neg__(self) -> "UnitW6":
        return UnitW6(-self.sign, self.k)

    def __pow__(self, e: int) -> "UnitW6":
        return UnitW6(self.sign ** (e % 2), self.k * e)

    def conj(self) -> "UnitW6":
        return UnitW6(self.sign, -self.k)

    @property
    def pair(self):
        re, om = ((1, 0), (0, 1), (-1, -1))[self.k]
        return self.sign * re, self.sign * om

    def to_eis(self):
        from cmlt.models.eisenstein import EisInt

        return EisInt(*self.pair)

    @classmethod
    def from_eis(cls, z) -> "UnitW6":
        for sign in (1, -1):
            for k in range(3):
                unit = cls(sign, k)
                if unit.pair == (z.re, z.om):
                    return unit
        raise ArithmeticDomainError(ErrorCode.BAD_PARAMS, f"{z} is not a unit of Z[w]")

    @classmethod
    def all(cls):
        return [cls(s, k) for s in (1, -1) for k in range(3)]

    def __str__(self) -> str:
        body = ("1", "w", "w^2")[self.k]
        return body if self.sign == 1 else f"-{body}"


Unit = Union[UnitI4, UnitW6]


@dataclass(frozen=True)
class ScaledUnit:
    """
    Exact value c * u with c a non-negative rational and u a root of unity.

    Canonical form: c >= 0, and u is the identity whenever c == 0, so equality
    is structural.
    """

    coefficient: Fraction
    unit: Unit

    def __post_init__(self):
        c = checked(Fraction(self.coefficient))
        unit = self.unit
        if c < 0:
            c, unit = -c, -unit
        if c == 0:
            unit = type(unit)()
        object.__setattr__(self, "coefficient", c)
        object.__setattr__(self, "unit", unit)

    @property
    def is_zero(self) -> bool:
        return self.coefficient == 0

    def components(self):
        """(re, im/om) as rationals in the ring's basis."""
        a, b = self.unit.pair
        return self.coefficient * a, self.coefficient * b

    @classmethod
    def from_gauss(cls, re: int, im: int) -> "ScaledUnit":
        if im == 0:
            return cls(Fraction(re), UnitI4(0))
        if re == 0:
            return cls(Fraction(im), UnitI4(1))
        raise ArithmeticDomainError(ErrorCode.NONCONVERGENT, f"{re}+{im}i is not a rational multiple of a unit")

    @classmethod
    def from_eis(cls, re: int, om: int) -> "ScaledUnit":
        if om == 0:
            return cls(Fraction(re), UnitW6(1, 0))
        if re == 0:
            return cls(Fraction(om), UnitW6(1, 1))
        if re == om:
            # re * (1 + w) = -re * w^2
            return cls(Fraction(-re), UnitW6(1, 2))
        raise ArithmeticDomainError(ErrorCode.NONCONVERGENT, f"{re}+{om}w is not a rational multiple of a unit")

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return f"{format_rational(self.coefficient)}*{self.unit}"
