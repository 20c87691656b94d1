"""Value types for the rings Z[i], Z[w] and for CM curves."""
from cmlt.models.curve import CurveSpec, QuadPoly, SplitPrime
from cmlt.models.eisenstein import EisInt
from cmlt.models.gaussian import GaussInt

__all__ = ["CurveSpec", "QuadPoly", "SplitPrime", "EisInt", "GaussInt"]
