"""Exception hierarchy shared across the package.

Construction-time certificate failures carry a witness string naming the
surviving term or offending value, so callers can surface exact diagnostics
instead of a bare boolean.
"""

__all__ = [
    "BitensionError",
    "CertificationError",
    "SphereCalculusError",
    "InadmissibleAngle",
    "UnsupportedDensity",
    "UnsupportedDomain",
    "MapParseError",
]


class BitensionError(Exception):
    """Base class for all package errors."""


class CertificationError(BitensionError):
    """An exact certificate that was required at construction failed."""

    def __init__(self, message: str, witness: str = ""):
        super().__init__(message if not witness else f"{message}: {witness}")
        self.witness = witness


class SphereCalculusError(BitensionError):
    """Spherical calculus applied to a non-degree-0 extension."""


class InadmissibleAngle(BitensionError):
    """A solved angle lies outside (0,1); carries the AngleSolution."""

    def __init__(self, solution):
        super().__init__(
            f"solved angle t = {solution.t} from {solution.constraint_source} "
            f"is outside (0,1)"
        )
        self.solution = solution


class UnsupportedDensity(BitensionError):
    """Energy density is neither constant nor of the radial c/r^2 shape."""


class UnsupportedDomain(BitensionError):
    """Operation not defined for this domain kind."""


class MapParseError(BitensionError):
    """Map description failed to parse; carries the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
