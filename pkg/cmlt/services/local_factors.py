"""
Finite local factors shared by the character-sum and constant evaluators.

- sigma_D(p) = p - 1 - (-D/p)
- Omega_j(D; q, r), product of -1/sigma_D(p) over p^v || q with p not dividing r and j not dividing v
- frak_A(q, j), product of the primes whose exponent in q is not divisible by j
- local_product(D, q, t), product of 1 - (-D/p)/(p-1) over p | q with p not dividing t
"""

from fractions import Fraction

from cmlt.core.arith import checked, factorize, kronecker
from cmlt.core.errors import ConstantError, ErrorCode


def sigma_D(D: int, p: int) -> int:
    return p - 1 - kronecker(-D, p)


def omega_j(D: int, q: int, r: int, j: int) -> Fraction:
    if q < 1 or q % 2 == 0:
        raise ConstantError(ErrorCode.BAD_MODULUS, f"Omega needs odd q >= 1, got {q}")
    if j < 1:
        raise ConstantError(ErrorCode.BAD_PARAMS, f"Omega needs j >= 1, got {j}")
    out = Fraction(1)
    for p, v in factorize(q):
        if r % p != 0 and v % j != 0:
            out = checked(out * Fraction(-1, sigma_D(D, p)))
    return out


def frak_A(q: int, j: int) -> int:
    if q < 1:
        raise ConstantError(ErrorCode.BAD_PARAMS, f"frak_A needs q >= 1, got {q}")
    out = 1
    for p, v in factorize(q):
        if v % j != 0:
            out *= p
    return out


def local_product(D: int, q: int, t: int) -> Fraction:
    out = Fraction(1)
    for p, _ in factorize(q):
        if t % p != 0:
            out = checked(out * (1 - Fraction(kronecker(-D, p), p - 1)))
    return out
