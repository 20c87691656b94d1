"""Exact arithmetic in the Eisenstein integers Z[w], w = exp(2*pi*i/3)."""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from cmlt.core.arith import is_prime
from cmlt.core.errors import ArithmeticDomainError, ErrorCode


@dataclass(frozen=True, order=True)
class EisInt:
    """re + om*w, using w^2 = -1 - w."""

    re: int
    om: int = 0

    @classmethod
    def of(cls, value) -> "EisInt":
        if isinstance(value, EisInt):
            return value
        if isinstance(value, tuple):
            return cls(*value)
        return cls(int(value), 0)

    def __add__(self, other) -> "EisInt":
        other = EisInt.of(other)
        return EisInt(self.re + other.re, self.om + other.om)

    __radd__ = __add__

    def __sub__(self, other) -> "EisInt":
        other = EisInt.of(other)
        return EisInt(self.re - other.re, self.om - other.om)

    def __rsub__(self, other) -> "EisInt":
        return EisInt.of(other) - self

    def __neg__(self) -> "EisInt":
        return EisInt(-self.re, -self.om)

    def __mul__(self, other) -> "EisInt":
        other = EisInt.of(other)
        a, b, c, d = self.re, self.om, other.re, other.om
        return EisInt(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def __pow__(self, e: int, mod: Optional["EisInt"] = None) -> "EisInt":
        if e < 0:
            raise ArithmeticDomainError(ErrorCode.BAD_PARAMS, "negative exponent")
        result, base = EisInt(1), self if mod is None else self % mod
        while e:
            if e & 1:
                result = result * base if mod is None else (result * base) % mod
            base = base * base if mod is None else (base * base) % mod
            e >>= 1
        return result

    def norm(self) -> int:
        return self.re * self.re - self.re * self.om + self.om * self.om

    def trace(self) -> int:
        return 2 * self.re - self.om

    def conj(self) -> "EisInt":
        return EisInt(self.re - self.om, -self.om)

    def times_omega(self, k: int = 1) -> "EisInt":
        z = self
        for _ in range(k % 3):
            z = EisInt(-z.om, z.re - z.om)
        return z

    def is_zero(self) -> bool:
        return self.re == 0 and self.om == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __divmod__(self, other) -> Tuple["EisInt", "EisInt"]:
        """Quotient and remainder of least norm; ties go to the smallest (re, om) quotient."""
        other = EisInt.of(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[w]")
        num = self * other.conj()
        best = None
        for qr in (num.re // n, num.re // n + 1):
            for qo in (num.om // n, num.om // n + 1):
                q = EisInt(qr, qo)
                r = self - q * other
                key = (r.norm(), qr, qo)
                if best is None or key < best[0]:
                    best = (key, q, r)
        return best[1], best[2]

    def __floordiv__(self, other) -> "EisInt":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "EisInt":
        return divmod(self, other)[1]

    def divides(self, other) -> bool:
        return (EisInt.of(other) % self).is_zero()

    def exact_div(self, other) -> "EisInt":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticDomainError(ErrorCode.BAD_PARAMS, f"{other} does not divide {self}")
        return q

    def is_primary(self) -> bool:
        return self.re % 3 == 2 and self.om % 3 == 0

    def associates(self):
        for sign in (1, -1):
            for k in range(3):
                z = self.times_omega(k)
                yield z if sign == 1 else -z

    def __str__(self) -> str:
        if self.om == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.om}w"
        sign = "+" if self.om > 0 else "-"
        return f"{self.re}{sign}{abs(self.om)}w"


ONE = EisInt(1, 0)
OMEGA = EisInt(0, 1)
ONE_MINUS_OMEGA = EisInt(1, -1)


def primary_associate_eis(z: EisInt) -> EisInt:
    """The associate with re = 2 mod 3 and om = 0 mod 3; units map to -1."""
    if z.norm() % 3 == 0:
        raise ArithmeticDomainError(ErrorCode.NOT_COPRIME_TO_3, f"{z} is divisible by 1-w")
    for w in z.associates():
        if w.is_primary():
            return w
    raise ArithmeticDomainError(ErrorCode.NOT_COPRIME_TO_3, f"no primary associate for {z}")


def is_eisenstein_prime(z: EisInt) -> bool:
    n = z.norm()
    if is_prime(n):
        return True
    q = math.isqrt(n)
    return q * q == n and q % 3 == 2 and is_prime(q)
