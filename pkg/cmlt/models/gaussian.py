"""Exact arithmetic in the Gaussian integers Z[i]."""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from cmlt.core.arith import is_prime
from cmlt.core.errors import ArithmeticDomainError, ErrorCode


@dataclass(frozen=True, order=True)
class GaussInt:
    """re + im*i."""

    re: int
    im: int = 0

    @classmethod
    def of(cls, value) -> "GaussInt":
        if isinstance(value, GaussInt):
            return value
        if isinstance(value, tuple):
            return cls(*value)
        return cls(int(value), 0)

    def __add__(self, other) -> "GaussInt":
        other = GaussInt.of(other)
        return GaussInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "GaussInt":
        other = GaussInt.of(other)
        return GaussInt(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "GaussInt":
        return GaussInt.of(other) - self

    def __neg__(self) -> "GaussInt":
        return GaussInt(-self.re, -self.im)

    def __mul__(self, other) -> "GaussInt":
        other = GaussInt.of(other)
        return GaussInt(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __pow__(self, e: int, mod: Optional["GaussInt"] = None) -> "GaussInt":
        if e < 0:
            raise ArithmeticDomainError(ErrorCode.BAD_PARAMS, "negative exponent")
        result, base = GaussInt(1), self if mod is None else self % mod
        while e:
            if e & 1:
                result = result * base if mod is None else (result * base) % mod
            base = base * base if mod is None else (base * base) % mod
            e >>= 1
        return result

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def trace(self) -> int:
        return 2 * self.re

    def conj(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def times_i(self, k: int = 1) -> "GaussInt":
        z = self
        for _ in range(k % 4):
            z = GaussInt(-z.im, z.re)
        return z

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_odd(self) -> bool:
        return self.norm() % 2 == 1

    def __divmod__(self, other) -> Tuple["GaussInt", "GaussInt"]:
        """Quotient and remainder of least norm; ties go to the smallest (re, im) quotient."""
        other = GaussInt.of(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[i]")
        num = self * other.conj()
        best = None
        for qr in (num.re // n, num.re // n + 1):
            for qi in (num.im // n, num.im // n + 1):
                q = GaussInt(qr, qi)
                r = self - q * other
                key = (r.norm(), qr, qi)
                if best is None or key < best[0]:
                    best = (key, q, r)
        return best[1], best[2]

    def __floordiv__(self, other) -> "GaussInt":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "GaussInt":
        return divmod(self, other)[1]

    def divides(self, other) -> bool:
        return (GaussInt.of(other) % self).is_zero()

    def exact_div(self, other) -> "GaussInt":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticDomainError(ErrorCode.BAD_PARAMS, f"{other} does not divide {self}")
        return q

    def is_primary(self) -> bool:
        return self.im % 2 == 0 and (self.re + self.im) % 4 == 1

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ONE = GaussInt(1, 0)
I = GaussInt(0, 1)
ONE_PLUS_I = GaussInt(1, 1)


def primary_associate(z: GaussInt) -> GaussInt:
    """The associate u*z with re+im = 1 mod 4 and im even; units map to 1."""
    if not z.is_odd():
        raise ArithmeticDomainError(ErrorCode.NOT_ODD, f"{z} is divisible by 1+i")
    for k in range(4):
        w = z.times_i(k)
        if w.is_primary():
            return w
    raise ArithmeticDomainError(ErrorCode.NOT_ODD, f"no primary associate for {z}")


def is_gaussian_prime(z: GaussInt) -> bool:
    n = z.norm()
    if is_prime(n):
        return True
    q = math.isqrt(n)
    return q * q == n and q % 4 == 3 and is_prime(q)
