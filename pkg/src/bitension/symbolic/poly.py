"""Exact multivariate polynomials over the rationals.

Coefficient arithmetic goes through the selected rational backend (see
bitension._rational).  Terms are stored sparsely as a dict mapping exponent
tuples to nonzero coefficients; every constructor and operation canonicalizes
by dropping zeros, so two MultiPoly values are equal iff their term dicts are.

These polynomials only ever live in a fixed ambient dimension nvars; mixing
dimensions is a programming error and raises immediately.
"""

from __future__ import annotations

from operator import add as _add
from typing import Dict, Iterator, Optional, Tuple

from bitension._rational import RAT, is_rational

Exponent = Tuple[int, ...]

__all__ = ["MultiPoly", "Exponent"]


def _check_same_nvars(a: "MultiPoly", b: "MultiPoly") -> None:
    if a.nvars != b.nvars:
        raise ValueError(f"dimension mismatch: {a.nvars} vs {b.nvars}")


class MultiPoly:
    """Sparse polynomial in nvars variables with exact rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Exponent, object]):
        self.nvars = nvars
        clean: Dict[Exponent, object] = {}
        for e, c in terms.items():
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has length {len(e)}, expected {nvars}")
            c = RAT(c)
            if c:
                clean[e] = c
        self.terms = clean

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars, {})

    @classmethod
    def const(cls, nvars: int, value) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: RAT(value)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for nvars={nvars}")
        e = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(nvars, {e: RAT(1)})

    @classmethod
    def sum_of_squares(cls, nvars: int) -> "MultiPoly":
        """The polynomial x_0^2 + ... + x_{nvars-1}^2."""
        terms = {}
        for i in range(nvars):
            e = tuple(2 if j == i else 0 for j in range(nvars))
            terms[e] = RAT(1)
        return cls(nvars, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def const_value(self):
        """Value as a rational, valid only when is_constant()."""
        if not self.terms:
            return RAT(0)
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return self.terms[(0,) * self.nvars]

    def total_degree(self) -> int:
        """Max total degree over monomials; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def homogeneous_degree(self):
        """Common total degree of all monomials, or None if mixed or zero."""
        degrees = {sum(e) for e in self.terms}
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def leading_monomial(self) -> Exponent:
        """Graded-lex largest exponent tuple; used for zero-test witnesses."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=lambda e: (sum(e), e))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "MultiPoly":
        if is_rational(other):
            other = MultiPoly.const(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        _check_same_nvars(self, other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, RAT(0)) + c
        return MultiPoly(self.nvars, terms)

    __radd__ = __add__

    def __sub__(self, other) -> "MultiPoly":
        return self + (-other if isinstance(other, MultiPoly) else MultiPoly.const(self.nvars, -RAT(other)))

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def __mul__(self, other) -> "MultiPoly":
        if is_rational(other):
            c = RAT(other)
            return MultiPoly(self.nvars, {e: v * c for e, v in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        _check_same_nvars(self, other)
        terms: Dict[Exponent, object] = {}
        items = list(other.terms.items())
        get = terms.get
        for e1, c1 in self.terms.items():
            for e2, c2 in items:
                e = tuple(map(_add, e1, e2))
                prev = get(e)
                terms[e] = c1 * c2 if prev is None else prev + c1 * c2
        return MultiPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"polynomial power must be a nonnegative int, got {n!r}")
        result = MultiPoly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def divide_exact(self, divisor: "MultiPoly") -> Optional["MultiPoly"]:
        """Quotient self / divisor when the division is exact, else None.

        Single-divisor multivariate division in graded-lex order: exactness
        fails as soon as a leading monomial is not divisible, so the None
        path is cheap.
        """
        _check_same_nvars(self, divisor)
        if not divisor.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return self
        dlm = divisor.leading_monomial()
        dlc = divisor.terms[dlm]
        work = dict(self.terms)
        quotient: Dict[Exponent, object] = {}
        while work:
            lm = max(work, key=lambda e: (sum(e), e))
            if any(a < b for a, b in zip(lm, dlm)):
                return None
            qe = tuple(a - b for a, b in zip(lm, dlm))
            qc = work[lm] / dlc
            quotient[qe] = qc
            for e, c in divisor.terms.items():
                te = tuple(map(_add, qe, e))
                val = work.get(te, RAT(0)) - qc * c
                if val:
                    work[te] = val
                else:
                    work.pop(te, None)
        return MultiPoly(self.nvars, quotient)

    def diff(self, i: int) -> "MultiPoly":
        """Partial derivative with respect to x_i."""
        terms: Dict[Exponent, object] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            e2 = e[:i] + (k - 1,) + e[i + 1:]
            prev = terms.get(e2)
            val = c * k
            terms[e2] = val if prev is None else prev + val
        return MultiPoly(self.nvars, terms)

    def lap(self) -> "MultiPoly":
        """Flat Laplacian, sum of second partials."""
        terms: Dict[Exponent, object] = {}
        for e, c in self.terms.items():
            for i, k in enumerate(e):
                if k < 2:
                    continue
                e2 = e[:i] + (k - 2,) + e[i + 1:]
                val = c * (k * (k - 1))
                prev = terms.get(e2)
                terms[e2] = val if prev is None else prev + val
        return MultiPoly(self.nvars, terms)

    def x_dot_grad(self) -> "MultiPoly":
        """Euler operator sum_i x_i dP/dx_i; scales each monomial by its degree."""
        return MultiPoly(self.nvars, {e: c * sum(e) for e, c in self.terms.items()})

    def eval_exact(self, point) -> object:
        """Evaluate at a point of exact rationals."""
        if len(point) != self.nvars:
            raise ValueError(f"point has length {len(point)}, expected {self.nvars}")
        pt = [RAT(v) for v in point]
        total = RAT(0)
        for e, c in self.terms.items():
            val = c
            for xi, k in zip(pt, e):
                if k:
                    val = val * xi**k
            total = total + val
        return total

    def eval_array(self, coords):
        """Evaluate in float64 at coords of shape (nvars, npoints)."""
        import numpy as np

        if coords.shape[0] != self.nvars:
            raise ValueError(f"coords has {coords.shape[0]} rows, expected {self.nvars}")
        n = coords.shape[1]
        out = np.zeros(n, dtype=np.float64)
        if not self.terms:
            return out
        max_exp = [0] * self.nvars
        for e in self.terms:
            for i, k in enumerate(e):
                if k > max_exp[i]:
                    max_exp[i] = k
        powers = []
        for i in range(self.nvars):
            tbl = np.empty((max_exp[i] + 1, n), dtype=np.float64)
            tbl[0] = 1.0
            for k in range(1, max_exp[i] + 1):
                tbl[k] = tbl[k - 1] * coords[i]
            powers.append(tbl)
        for e, c in self.terms.items():
            mono = np.full(n, float(c))
            for i, k in enumerate(e):
                if k:
                    mono *= powers[i][k]
            out += mono
        return out

    def monomials(self) -> Iterator[Tuple[Exponent, object]]:
        return iter(self.terms.items())

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
            c = self.terms[e]
            factors = [f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")
