"""Value types for CM curves, split primes, twist factorizations and quadratic polynomials."""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

from cmlt.core.arith import ord_p
from cmlt.core.errors import CurveError, ErrorCode
from cmlt.models.eisenstein import EisInt
from cmlt.models.gaussian import GaussInt

CM_DISCRIMINANTS = (1, 2, 3, 7, 11, 19, 43, 67, 163)
LARGE_DISCRIMINANTS = (7, 11, 19, 43, 67, 163)


class SplitType(str, Enum):
    SPLIT = "SPLIT"
    INERT = "INERT"
    RAMIFIED = "RAMIFIED"


class Normalization(str, Enum):
    PRIMARY_GAUSS = "primary-gauss"
    PRIMARY_EIS = "primary-eis"
    POSITIVE_TRACE = "positive-trace"


def check_discriminant(D: int) -> None:
    if D not in CM_DISCRIMINANTS:
        raise CurveError(ErrorCode.BAD_PARAMS, f"D must be one of {CM_DISCRIMINANTS}, got {D}")


@dataclass(frozen=True)
class CurveSpec:
    """A member of the CM family with discriminant D twisted by g."""

    D: int
    g: int

    def __post_init__(self):
        check_discriminant(self.D)
        if self.g == 0:
            raise CurveError(ErrorCode.BAD_PARAMS, "twist parameter g must be non-zero")

    def __str__(self) -> str:
        return f"E(D={self.D}, g={self.g})"


@dataclass(frozen=True)
class SplitPrime:
    """
    A split prime with its norm-form solution and canonical element.

    coords is (m, n) with p = m^2 + D n^2 for D = 1, 2 and (t, s) with
    4p = t^2 + D s^2 for D = 3 mod 4. element is the primary GaussInt (D=1),
    the primary EisInt (D=3) or coords itself (positive trace).
    """

    p: int
    D: int
    coords: Tuple[int, int]
    element: Union[GaussInt, EisInt, Tuple[int, int]]
    trace: int
    normalization: Normalization

    def reassembled_norm(self) -> int:
        u, v = self.coords
        if self.D in (1, 2):
            return u * u + self.D * v * v
        return (u * u + self.D * v * v) // 4


@dataclass(frozen=True)
class GFactorization:
    """g = (-1)^delta * 2^lam * D^mu * g1 with gcd(2D, g1) = 1 and g1 > 0."""

    delta: int
    lam: int
    mu: int
    g1: int

    def reconstruct(self, D: int) -> int:
        base = 1 if D in (1, 2) else D**self.mu
        return (-1) ** self.delta * 2**self.lam * base * self.g1


def g_factorize(D: int, g: int) -> GFactorization:
    check_discriminant(D)
    if g == 0:
        raise CurveError(ErrorCode.BAD_PARAMS, "g must be non-zero")
    delta = 1 if g < 0 else 0
    rest = abs(g)
    lam = ord_p(rest, 2)
    rest >>= lam
    mu = 0
    if D not in (1, 2):
        mu = ord_p(rest, D)
        rest //= D**mu
    return GFactorization(delta, lam, mu, rest)


@dataclass(frozen=True)
class QuadPoly:
    """a*n^2 + b*n + c."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, n: int) -> int:
        return (self.a * n + self.b) * n + self.c

    def __str__(self) -> str:
        return f"{self.a}n^2 + {self.b}n + {self.c}"
