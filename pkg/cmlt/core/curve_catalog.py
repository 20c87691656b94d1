import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Literal, Optional

import yaml
from pydantic import BaseModel, Field, field_validator

from cmlt.core.config import get_settings
from cmlt.core.errors import CurveError, ErrorCode

logger = logging.getLogger(__name__)


class CurveModel(BaseModel):
    """One family entry of the curve catalogue."""

    D: int = Field(description="Discriminant of the CM field")
    kind: Literal["quartic_twist", "sextic_twist", "weierstrass"]
    a: Optional[str] = Field(default=None, description="Coefficient of g^2 x, as a rational string")
    b: Optional[str] = Field(default=None, description="Coefficient of g^3, as a rational string")
    integral: Optional[List[int]] = Field(default=None, description="Integral model [c3, c2, c1, c0]")
    units: int = Field(description="Roots of unity in the ring of integers")
    extra_bad_primes: List[int] = Field(default_factory=list)

    @field_validator("a", "b", mode="before")
    @classmethod
    def _as_string(cls, value):
        return None if value is None else str(value)

    @property
    def a_coeff(self) -> Fraction:
        return Fraction(self.a or "0")

    @property
    def b_coeff(self) -> Fraction:
        return Fraction(self.b or "0")


class CurveCatalog:
    """
    Loads the curve families from YAML.
    """

    def __init__(self, path: Optional[Path] = None):
        self.path = Path(path or get_settings().curves_file)
        self.models: Dict[int, CurveModel] = {}
        self._load()

    def _load(self):
        if not self.path.exists():
            logger.error(f"Curve catalogue not found: {self.path}")
            raise CurveError(ErrorCode.BAD_PARAMS, f"missing curve catalogue {self.path}")
        with open(self.path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        for entry in data.get("curves", []):
            model = CurveModel.model_validate(entry)
            self.models[model.D] = model
        logger.debug(f"Loaded {len(self.models)} curve families from {self.path}")

    def get(self, D: int) -> CurveModel:
        try:
            return self.models[D]
        except KeyError:
            raise CurveError(ErrorCode.BAD_PARAMS, f"no curve family for D={D}") from None

    def units(self, D: int) -> int:
        return self.get(D).units


curve_catalog = CurveCatalog()
