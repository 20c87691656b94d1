"""Pydantic report models shared by the services and the CLI."""

from fractions import Fraction
from typing import Annotated, Any, Dict, List, Optional

from pydantic import BaseModel, Field, PlainSerializer, PlainValidator

from cmlt.core.arith import format_rational


def _to_fraction(value: Any) -> Fraction:
    if isinstance(value, float):
        raise ValueError("rationals must not be built from floats")
    return Fraction(value)


Rational = Annotated[
    Fraction,
    PlainValidator(_to_fraction),
    PlainSerializer(format_rational, return_type=str),
]


class TraceHistogram(BaseModel):
    """Counts of good primes p <= x by trace of Frobenius"""

    D: int
    g: int
    x: int
    r_min: int
    r_max: int
    counts: Dict[int, int] = Field(default_factory=dict, description="trace -> number of good primes")
    overflow: int = Field(default=0, description="good primes whose trace lies outside [r_min, r_max]")
    good_primes: int = 0
    bad_primes_skipped: List[int] = Field(default_factory=list)

    def count(self, r: int) -> int:
        return self.counts.get(r, 0)

    def merge(self, other: "TraceHistogram") -> "TraceHistogram":
        counts = dict(self.counts)
        for r, n in other.counts.items():
            counts[r] = counts.get(r, 0) + n
        return self.model_copy(
            update={
                "counts": counts,
                "overflow": self.overflow + other.overflow,
                "good_primes": self.good_primes + other.good_primes,
                "bad_primes_skipped": sorted(set(self.bad_primes_skipped) | set(other.bad_primes_skipped)),
            }
        )


class ConstantReport(BaseModel):
    """Explicit constant for (D, g, r) with its exact finite factor"""

    D: int
    g: int
    r: int
    xi: int = Field(description="xi(D, r) in {0, 1, 2}")
    finite_factor: Rational = Field(description="exact bracket divided by the family denominator")
    euler_value: float
    method: str
    cutoff: int
    h: float
    varpi: float
    breakdown: Dict[str, Rational] = Field(default_factory=dict)
    reason: Optional[str] = None

    @property
    def vanishes(self) -> bool:
        return self.xi == 0 or self.finite_factor == 0


class Verdict(BaseModel):
    """Classifier outcome with the condition that fired"""

    mode: str
    result: str
    fired_condition: str = "NONE"
    witness: Optional[str] = None


class ReportMetadata(BaseModel):
    version: str
    cutoff: Optional[int] = None
    method: Optional[str] = None
    runtime: float = Field(default=0.0, description="seconds; excluded from determinism checks")


class Report(BaseModel):
    """Envelope written by every CLI command"""

    command: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    results: Any = None
    metadata: ReportMetadata


class CheckResult(BaseModel):
    """One verified property of a verification suite"""

    suite: str
    name: str
    passed: bool
    cases: int = Field(default=0, description="number of cases checked")
    failures: int = 0
    detail: Optional[str] = Field(default=None, description="first failing case, if any")
