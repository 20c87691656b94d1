"""Vectorized modular arithmetic used to tabulate characters over residue rings."""

import numpy as np

from cmlt.core.errors import ArithmeticDomainError, ErrorCode

TABLE_MODULUS_LIMIT = 2**30


def _check(p: int) -> None:
    if p >= TABLE_MODULUS_LIMIT:
        raise ArithmeticDomainError(ErrorCode.TOO_LARGE, f"table modulus {p} would overflow int64")


def modpow_array(base: np.ndarray, e: int, p: int) -> np.ndarray:
    """Elementwise base**e mod p."""
    _check(p)
    result = np.ones_like(base, dtype=np.int64)
    b = np.asarray(base, dtype=np.int64) % p
    while e:
        if e & 1:
            result = result * b % p
        b = b * b % p
        e >>= 1
    return result


def gauss_pow_array(re: np.ndarray, im: np.ndarray, e: int, p: int):
    """Elementwise (re + im*i)**e in Z[i]/(p)."""
    _check(p)
    rr, ri = np.ones_like(re, dtype=np.int64), np.zeros_like(re, dtype=np.int64)
    br, bi = np.asarray(re, dtype=np.int64) % p, np.asarray(im, dtype=np.int64) % p
    while e:
        if e & 1:
            rr, ri = (rr * br - ri * bi) % p, (rr * bi + ri * br) % p
        br, bi = (br * br - bi * bi) % p, (2 * br * bi) % p
        e >>= 1
    return rr, ri


def eis_pow_array(re: np.ndarray, om: np.ndarray, e: int, p: int):
    """Elementwise (re + om*w)**e in Z[w]/(p), w^2 = -1 - w."""
    _check(p)
    rr, ro = np.ones_like(re, dtype=np.int64), np.zeros_like(re, dtype=np.int64)
    br, bo = np.asarray(re, dtype=np.int64) % p, np.asarray(om, dtype=np.int64) % p
    while e:
        if e & 1:
            rr, ro = (rr * br - ro * bo) % p, (rr * bo + ro * br - ro * bo) % p
        br, bo = (br * br - bo * bo) % p, (2 * br * bo - bo * bo) % p
        e >>= 1
    return rr, ro


def legendre_array(a: int, primes: np.ndarray) -> np.ndarray:
    """(a/p) for every odd prime p in the array, by Euler's criterion."""
    p = np.asarray(primes, dtype=np.int64)
    if p.size and int(p.max()) >= TABLE_MODULUS_LIMIT:
        raise ArithmeticDomainError(ErrorCode.TOO_LARGE, "prime exceeds the table modulus limit")
    e = (p - 1) // 2
    b = np.mod(a, p)
    result = np.ones_like(p)
    while np.any(e > 0):
        odd = (e & 1) == 1
        result = np.where(odd, result * b % p, result)
        b = b * b % p
        e >>= 1
    return np.where(result == p - 1, -1, result).astype(np.int64)
