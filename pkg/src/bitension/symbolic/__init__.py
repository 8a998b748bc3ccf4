"""Exact symbolic kernels: polynomials, radial expressions, trig polynomials."""

from bitension.symbolic.poly import MultiPoly
from bitension.symbolic.radial import RadialExpr
from bitension.symbolic.trig import COS, SIN, FreqCoeff, TPoly, TrigExpr, TrigRing

__all__ = [
    "MultiPoly",
    "RadialExpr",
    "TPoly",
    "FreqCoeff",
    "TrigRing",
    "TrigExpr",
    "COS",
    "SIN",
]
