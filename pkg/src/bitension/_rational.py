"""Rational arithmetic backend selection.

All symbolic kernels run over exact rationals.  When gmpy2 is installed its
mpq type is used (C implementation, several times faster on the polynomial
workloads here; see benchmarks/); otherwise fractions.Fraction is the fallback.
The choice is made once at import and exposed as RAT / BACKEND_NAME.

Set BITENSION_BACKEND=fraction or =gmpy2 to force a backend; =gmpy2 raises
if gmpy2 is not importable.  Everything downstream treats RAT as an opaque
exact-rational constructor: RAT(int), RAT(num, den), RAT(other_rat).
"""

import math
import os
from fractions import Fraction

__all__ = [
    "RAT",
    "BACKEND_NAME",
    "ZERO",
    "ONE",
    "is_rational",
    "as_int",
    "rational_sqrt",
]


def _select():
    forced = os.environ.get("BITENSION_BACKEND", "auto").strip().lower()
    if forced not in ("auto", "fraction", "gmpy2"):
        raise ValueError(f"BITENSION_BACKEND must be auto, fraction or gmpy2, got {forced!r}")
    if forced == "fraction":
        return Fraction, "fraction"
    try:
        from gmpy2 import mpq
    except ImportError:
        if forced == "gmpy2":
            raise ImportError("BITENSION_BACKEND=gmpy2 but gmpy2 is not installed")
        return Fraction, "fraction"
    return mpq, "gmpy2"


RAT, BACKEND_NAME = _select()

ZERO = RAT(0)
ONE = RAT(1)

_RAT_TYPES = (type(ZERO), Fraction, int)


def is_rational(x) -> bool:
    """True if x is an exact rational the kernels accept as a coefficient."""
    return isinstance(x, _RAT_TYPES)


def as_int(x) -> int:
    """Convert an exact rational known to be integral to int; raise otherwise."""
    if isinstance(x, int):
        return x
    if x.denominator != 1:
        raise ValueError(f"not an integer: {x}")
    return int(x.numerator)


def rational_sqrt(x):
    """Exact square root of a nonnegative rational, or None if irrational."""
    x = RAT(x)
    num, den = int(x.numerator), int(x.denominator)
    if num < 0:
        return None
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return RAT(rn) / RAT(rd)
