"""Rational-radial expressions: finite sums P_s(x) / r^s with r = |x|.

This class is closed under the operations the residual calculus needs:
ring arithmetic, partial derivatives, the flat Laplacian, and multiplication
by even powers of r.  Derivatives follow from

    d/dx_i (P / r^s) = (dP/dx_i) / r^s - s x_i P / r^(s+2)

and the Laplacian has the closed form

    lap(P / r^s) = lap(P) / r^s + (s (s + 2 - m) P - 2 s x.grad(P)) / r^(s+2)

with m the ambient dimension.  The representation is not unique because
P / r^s = (x.x) P / r^(s+2); zero-testing therefore clears r^smax and checks
that the even and odd r-parity classes vanish separately, which is exact in
every dimension including m = 1.
"""

from __future__ import annotations

from typing import Dict, List, Optional

from bitension._rational import RAT, is_rational, rational_sqrt
from bitension.symbolic.poly import MultiPoly

__all__ = ["RadialExpr"]


class RadialExpr:
    """Finite sum of P_s / r^s pieces over a fixed ambient dimension."""

    __slots__ = ("nvars", "pieces")

    def __init__(self, nvars: int, pieces: Dict[int, MultiPoly]):
        self.nvars = nvars
        clean: Dict[int, MultiPoly] = {}
        for s, poly in pieces.items():
            if s < 0:
                raise ValueError(f"negative r-power slot {s}; use mul_r2_power for positive powers of r")
            if poly.nvars != nvars:
                raise ValueError(f"piece dimension {poly.nvars} does not match {nvars}")
            if not poly.is_zero():
                clean[s] = poly
        self.pieces = clean

    @classmethod
    def zero(cls, nvars: int) -> "RadialExpr":
        return cls(nvars, {})

    @classmethod
    def const(cls, nvars: int, value) -> "RadialExpr":
        return cls(nvars, {0: MultiPoly.const(nvars, value)})

    @classmethod
    def from_poly(cls, poly: MultiPoly, inv_r_power: int = 0) -> "RadialExpr":
        return cls(poly.nvars, {inv_r_power: poly})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "RadialExpr":
        return cls(nvars, {0: MultiPoly.variable(nvars, i)})

    @classmethod
    def r_power(cls, nvars: int, k: int) -> "RadialExpr":
        """r^k for any integer k, normalized into the P/r^s form."""
        if k <= 0:
            return cls(nvars, {-k: MultiPoly.const(nvars, 1)})
        c, rem = divmod(k, 2)
        sos = MultiPoly.sum_of_squares(nvars)
        if rem == 0:
            return cls(nvars, {0: sos**c})
        return cls(nvars, {1: sos ** (c + 1)})

    def is_zero(self) -> bool:
        return self.zero_witness() is None

    def zero_witness(self) -> Optional[str]:
        """None if the expression vanishes identically; else a witness term.

        Clearing r^smax turns each parity class into a polynomial identity;
        the class sums are built Horner-style in powers of r^2 so the raw
        sum of squares is the only multiplier that ever appears.
        """
        if not self.pieces:
            return None
        smax = max(self.pieces)
        sos = MultiPoly.sum_of_squares(self.nvars)
        groups = {0: [], 1: []}
        for s, poly in self.pieces.items():
            groups[(smax - s) % 2].append((s, poly))
        for rem, label in ((0, "even"), (1, "odd")):
            acc = None
            prev = 0
            for s, poly in sorted(groups[rem]):
                if acc is None:
                    acc = poly
                else:
                    for _ in range((s - prev) // 2):
                        acc = acc * sos
                    acc = acc + poly
                prev = s
            if acc is None or acc.is_zero():
                continue
            e = acc.leading_monomial()
            return f"{label} r-parity class survives clearing r^{smax}: leading term {acc.terms[e]} * {e}"
        return None

    def homogeneity_degrees(self) -> set:
        """Set of per-monomial homogeneity degrees deg(e) - s across all pieces."""
        return {sum(e) - s for s, poly in self.pieces.items() for e in poly.terms}

    def reduce(self) -> "RadialExpr":
        """Equivalent expression with sum-of-squares factors cancelled into r^s.

        Aggregates like energy densities collapse to near-constant slots;
        keeping them reduced is what makes per-component residual work cheap.
        """
        if not self.pieces:
            return self
        sos = MultiPoly.sum_of_squares(self.nvars)
        pieces = self.pieces
        while True:
            moved = False
            out = {}
            for s, poly in pieces.items():
                while s >= 2:
                    q = poly.divide_exact(sos)
                    if q is None:
                        break
                    poly, s = q, s - 2
                    moved = True
                out[s] = out[s] + poly if s in out else poly
            pieces = {s: p for s, p in out.items() if not p.is_zero()}
            if not moved:
                return RadialExpr(self.nvars, pieces)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RadialExpr):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __neg__(self) -> "RadialExpr":
        return RadialExpr(self.nvars, {s: -p for s, p in self.pieces.items()})

    def __add__(self, other) -> "RadialExpr":
        if is_rational(other):
            other = RadialExpr.const(self.nvars, other)
        elif isinstance(other, MultiPoly):
            other = RadialExpr.from_poly(other)
        if not isinstance(other, RadialExpr):
            return NotImplemented
        if self.nvars != other.nvars:
            raise ValueError(f"dimension mismatch: {self.nvars} vs {other.nvars}")
        pieces = dict(self.pieces)
        for s, poly in other.pieces.items():
            pieces[s] = pieces[s] + poly if s in pieces else poly
        return RadialExpr(self.nvars, pieces)

    __radd__ = __add__

    def __sub__(self, other) -> "RadialExpr":
        return self + (-other if isinstance(other, (RadialExpr, MultiPoly)) else -RAT(other))

    def __rsub__(self, other) -> "RadialExpr":
        return (-self) + other

    def __mul__(self, other) -> "RadialExpr":
        if is_rational(other):
            c = RAT(other)
            return RadialExpr(self.nvars, {s: p * c for s, p in self.pieces.items()})
        if isinstance(other, MultiPoly):
            other = RadialExpr.from_poly(other)
        if not isinstance(other, RadialExpr):
            return NotImplemented
        if self.nvars != other.nvars:
            raise ValueError(f"dimension mismatch: {self.nvars} vs {other.nvars}")
        pieces: Dict[int, MultiPoly] = {}
        for s1, p1 in self.pieces.items():
            for s2, p2 in other.pieces.items():
                s = s1 + s2
                prod = p1 * p2
                pieces[s] = pieces[s] + prod if s in pieces else prod
        return RadialExpr(self.nvars, pieces)

    __rmul__ = __mul__

    def mul_r2_power(self, j: int) -> "RadialExpr":
        """Multiply by r^(2j) for any integer j, reabsorbing surplus powers."""
        if j == 0:
            return self
        sos = MultiPoly.sum_of_squares(self.nvars)
        pieces: Dict[int, MultiPoly] = {}
        for s, poly in self.pieces.items():
            s2 = s - 2 * j
            if s2 < 0:
                c = (-s2 + 1) // 2
                poly = poly * sos**c
                s2 += 2 * c
            pieces[s2] = pieces[s2] + poly if s2 in pieces else poly
        return RadialExpr(self.nvars, pieces)

    def diff(self, i: int) -> "RadialExpr":
        pieces: Dict[int, MultiPoly] = {}

        def accumulate(s: int, poly: MultiPoly) -> None:
            if poly.is_zero():
                return
            pieces[s] = pieces[s] + poly if s in pieces else poly

        xi = MultiPoly.variable(self.nvars, i)
        for s, poly in self.pieces.items():
            accumulate(s, poly.diff(i))
            if s:
                accumulate(s + 2, xi * poly * (-s))
        return RadialExpr(self.nvars, pieces)

    def partials(self) -> List["RadialExpr"]:
        return [self.diff(i) for i in range(self.nvars)]

    def lap(self) -> "RadialExpr":
        m = self.nvars
        pieces: Dict[int, MultiPoly] = {}

        def accumulate(s: int, poly: MultiPoly) -> None:
            if poly.is_zero():
                return
            pieces[s] = pieces[s] + poly if s in pieces else poly

        for s, poly in self.pieces.items():
            accumulate(s, poly.lap())
            if s:
                accumulate(s + 2, poly * (s * (s + 2 - m)) + poly.x_dot_grad() * (-2 * s))
        return RadialExpr(self.nvars, pieces)

    def grad_dot(self, other: "RadialExpr") -> "RadialExpr":
        """Euclidean inner product of gradients."""
        mine = self.partials()
        theirs = mine if other is self else other.partials()
        total = RadialExpr.zero(self.nvars)
        for a, b in zip(mine, theirs):
            total = total + a * b
        return total

    def eval_exact(self, point):
        """Evaluate at a rational point; raises if an odd r-power meets an irrational norm."""
        if len(point) != self.nvars:
            raise ValueError(f"point has length {len(point)}, expected {self.nvars}")
        pt = [RAT(v) for v in point]
        r2 = sum((v * v for v in pt), RAT(0))
        if r2 == 0 and self.pieces and max(self.pieces) > 0:
            raise ZeroDivisionError("evaluation at the origin with a singular piece")
        even_total = RAT(0)
        odd_total = RAT(0)
        for s, poly in self.pieces.items():
            c, rem = divmod(s, 2)
            val = poly.eval_exact(pt) / r2**c if c else poly.eval_exact(pt)
            if rem:
                odd_total = odd_total + val
            else:
                even_total = even_total + val
        if odd_total == 0:
            return even_total
        r = rational_sqrt(r2)
        if r is None:
            raise ValueError(f"odd power of r at a point with irrational norm, r^2 = {r2}")
        return even_total + odd_total / r

    def eval_array(self, coords):
        """Evaluate in float64 at coords of shape (nvars, npoints)."""
        import numpy as np

        r2 = (coords * coords).sum(axis=0)
        out = np.zeros(coords.shape[1], dtype=np.float64)
        r = None
        for s, poly in self.pieces.items():
            vals = poly.eval_array(coords)
            if s:
                if r is None:
                    r = np.sqrt(r2)
                vals = vals / r**s
            out += vals
        return out

    def __repr__(self) -> str:
        if not self.pieces:
            return "0"
        parts = []
        for s in sorted(self.pieces):
            body = repr(self.pieces[s])
            parts.append(body if s == 0 else f"({body})/r^{s}")
        return " + ".join(parts)
