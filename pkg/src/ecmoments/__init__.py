"""Family averages, moment predictions and L-values for elliptic curves y^2 = x^3 + ax + b."""

from .curves import CurvePair
from .families import ALL, POSITIVE_RANK, FamilySpec

__all__ = ["ALL", "POSITIVE_RANK", "CurvePair", "FamilySpec"]
__version__ = "0.1.0"
