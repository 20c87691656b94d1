"""
Error types shared by every cmlt module.

Each failure carries an ``ErrorCode`` so callers (and the CLI) can branch on
the kind of failure without parsing messages.
"""

from enum import Enum
from typing import Optional


class ErrorCode(str, Enum):
    """Machine-readable failure codes."""

    NOT_ODD = "NOT_ODD"
    NOT_PRIME = "NOT_PRIME"
    NOT_COPRIME_TO_3 = "NOT_COPRIME_TO_3"
    BAD_NORM = "BAD_NORM"
    NONCONVERGENT = "NONCONVERGENT"
    TOO_LARGE = "TOO_LARGE"
    BAD_MODULUS = "BAD_MODULUS"
    NOT_SPLIT = "NOT_SPLIT"
    BAD_PRIME = "BAD_PRIME"
    ZERO_R = "ZERO_R"
    BAD_RESIDUE = "BAD_RESIDUE"
    BAD_PARAMS = "BAD_PARAMS"
    UNDEFINED = "UNDEFINED"
    HYPOTHESIS_FAIL = "HYPOTHESIS_FAIL"
    ODD_COMMON_FACTOR = "ODD_COMMON_FACTOR"
    OVERFLOW = "OVERFLOW"


class CMLTError(Exception):
    """Base exception carrying an error code and a human readable detail."""

    def __init__(self, code: ErrorCode, detail: Optional[str] = None):
        self.code = code
        self.detail = detail or code.value
        super().__init__(f"{code.value}: {self.detail}")


class ArithmeticDomainError(CMLTError):
    """Raised by ring arithmetic and residue symbols."""


class CurveError(CMLTError):
    """Raised by Frobenius trace evaluation."""


class CountingError(CMLTError):
    """Raised by prime counting functions."""


class ConstantError(CMLTError):
    """Raised by constant evaluation and conjecture hypotheses."""
