"""Exact trigonometric polynomials in an arc-length parameter.

Curves on spheres built from circles need expressions of the form

    sum over integer pairs (j, k) of  C_{j,k} * cos((j a + k b) s)
                                    + S_{j,k} * sin((j a + k b) s)

where the two base frequencies a and b satisfy polynomial relations
a^2 = A(T), b^2 = B(T) for a formal parameter T.  Coefficients C, S live in
the commutative algebra Q[T]<1, a, b, ab> modulo those relations, encoded as
quadruples of univariate polynomials (TPoly).  Frequencies are canonicalized
lex-positive using the parities of sin and cos, and the pair (0, 0) keeps
only its cosine slot, which acts as the constant term.

With both reductions in place the representation is a genuine normal form,
so is_zero on a TrigExpr is a certificate: the expression vanishes for every
admissible T (family rings) or for the substituted value (instance rings).
"""

from __future__ import annotations

import math
from typing import Dict, Optional, Tuple

from bitension._rational import RAT, is_rational

__all__ = ["TPoly", "FreqCoeff", "TrigRing", "TrigExpr", "COS", "SIN"]

COS = 0
SIN = 1

_HALF = RAT(1) / RAT(2)

FreqKey = Tuple[int, Tuple[int, int]]


class TPoly:
    """Dense univariate polynomial in T over the exact rationals."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [RAT(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, value) -> "TPoly":
        return cls((value,))

    @classmethod
    def t(cls) -> "TPoly":
        return cls((0, 1))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other) -> bool:
        if is_rational(other):
            other = TPoly.const(other)
        if not isinstance(other, TPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self) -> "TPoly":
        return TPoly(tuple(-c for c in self.coeffs))

    def __add__(self, other) -> "TPoly":
        if is_rational(other):
            other = TPoly.const(other)
        if not isinstance(other, TPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return TPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "TPoly":
        if is_rational(other):
            other = TPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "TPoly":
        return (-self) + other

    def __mul__(self, other) -> "TPoly":
        if is_rational(other):
            c = RAT(other)
            return TPoly(tuple(v * c for v in self.coeffs))
        if not isinstance(other, TPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return TPoly(())
        out = [RAT(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            for j, cj in enumerate(other.coeffs):
                out[i + j] = out[i + j] + ci * cj
        return TPoly(out)

    __rmul__ = __mul__

    def eval(self, tval):
        tval = RAT(tval)
        acc = RAT(0)
        for c in reversed(self.coeffs):
            acc = acc * tval + c
        return acc

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("T" if c == 1 else f"{c}*T")
            else:
                parts.append(f"T^{i}" if c == 1 else f"{c}*T^{i}")
        return " + ".join(parts).replace("+ -", "- ")


_TP_ZERO = TPoly(())


class FreqCoeff:
    """Element of Q[T]<1, a, b, ab>: quadruple of TPoly parts."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        one, pa, pb, pab = parts
        self.parts = (one, pa, pb, pab)

    @classmethod
    def zero(cls) -> "FreqCoeff":
        return cls((_TP_ZERO, _TP_ZERO, _TP_ZERO, _TP_ZERO))

    @classmethod
    def scalar(cls, value) -> "FreqCoeff":
        value = value if isinstance(value, TPoly) else TPoly.const(value)
        return cls((value, _TP_ZERO, _TP_ZERO, _TP_ZERO))

    @classmethod
    def radical(cls, j, k) -> "FreqCoeff":
        """The algebra element j*a + k*b."""
        return cls((_TP_ZERO, TPoly.const(j), TPoly.const(k), _TP_ZERO))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def uses_a(self) -> bool:
        return not (self.parts[1].is_zero() and self.parts[3].is_zero())

    def uses_b(self) -> bool:
        return not (self.parts[2].is_zero() and self.parts[3].is_zero())

    def add(self, other: "FreqCoeff") -> "FreqCoeff":
        return FreqCoeff(tuple(p + q for p, q in zip(self.parts, other.parts)))

    def neg(self) -> "FreqCoeff":
        return FreqCoeff(tuple(-p for p in self.parts))

    def scale(self, factor) -> "FreqCoeff":
        return FreqCoeff(tuple(p * factor for p in self.parts))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreqCoeff):
            return NotImplemented
        return self.parts == other.parts

    __hash__ = None

    def __repr__(self) -> str:
        labels = ("", "a", "b", "ab")
        chunks = []
        for p, lab in zip(self.parts, labels):
            if p.is_zero():
                continue
            body = repr(p)
            if lab:
                body = f"({body})*{lab}" if ("+" in body or "-" in body[1:]) else f"{body}*{lab}"
            chunks.append(body)
        return " + ".join(chunks) if chunks else "0"


class TrigRing:
    """Fixes the relations a^2 = asq(T), b^2 = bsq(T) and builds expressions."""

    __slots__ = ("asq", "bsq")

    def __init__(self, asq, bsq):
        self.asq = asq if isinstance(asq, TPoly) else TPoly.const(asq)
        self.bsq = bsq if isinstance(bsq, TPoly) else TPoly.const(bsq)

    @classmethod
    def family(cls) -> "TrigRing":
        """a^2 = T, b^2 = 2 - T: the two-frequency ring with unit-speed closure."""
        return cls(TPoly.t(), TPoly((2, -1)))

    @classmethod
    def instance(cls, asq_value, bsq_value=0) -> "TrigRing":
        return cls(TPoly.const(asq_value), TPoly.const(bsq_value))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigRing):
            return NotImplemented
        return self.asq == other.asq and self.bsq == other.bsq

    __hash__ = None

    def mul_coeff(self, p: FreqCoeff, q: FreqCoeff) -> "FreqCoeff":
        c1, ca, cb, cab = p.parts
        d1, da, db, dab = q.parts
        A, B = self.asq, self.bsq
        one = c1 * d1 + A * (ca * da) + B * (cb * db) + A * B * (cab * dab)
        ea = c1 * da + ca * d1 + B * (cb * dab + cab * db)
        eb = c1 * db + cb * d1 + A * (ca * dab + cab * da)
        eab = c1 * dab + cab * d1 + ca * db + cb * da
        return FreqCoeff((one, ea, eb, eab))

    def zero(self) -> "TrigExpr":
        return TrigExpr(self, {})

    def const(self, value) -> "TrigExpr":
        coeff = value if isinstance(value, FreqCoeff) else FreqCoeff.scalar(value)
        terms: Dict[FreqKey, FreqCoeff] = {}
        _accumulate(terms, COS, (0, 0), coeff)
        return TrigExpr(self, terms)

    def wave(self, kind: int, j: int, k: int, coeff=1) -> "TrigExpr":
        """coeff * trig((j a + k b) s) with trig = cos or sin by kind."""
        coeff = coeff if isinstance(coeff, FreqCoeff) else FreqCoeff.scalar(coeff)
        terms: Dict[FreqKey, FreqCoeff] = {}
        _accumulate(terms, kind, (j, k), coeff)
        return TrigExpr(self, terms)

    def sin(self, j: int, k: int = 0, coeff=1) -> "TrigExpr":
        return self.wave(SIN, j, k, coeff)

    def cos(self, j: int, k: int = 0, coeff=1) -> "TrigExpr":
        return self.wave(COS, j, k, coeff)


def _accumulate(terms: Dict[FreqKey, FreqCoeff], kind: int, freq: Tuple[int, int], coeff: FreqCoeff) -> None:
    j, k = freq
    if j < 0 or (j == 0 and k < 0):
        freq = (-j, -k)
        if kind == SIN:
            coeff = coeff.neg()
    if freq == (0, 0) and kind == SIN:
        return
    key = (kind, freq)
    prev = terms.get(key)
    total = coeff if prev is None else prev.add(coeff)
    if total.is_zero():
        terms.pop(key, None)
    else:
        terms[key] = total


class TrigExpr:
    """Canonical trig polynomial over a TrigRing; see the module docstring."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: TrigRing, terms: Dict[FreqKey, FreqCoeff]):
        self.ring = ring
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def zero_witness(self) -> Optional[str]:
        if not self.terms:
            return None
        kind, freq = min(self.terms)
        name = "cos" if kind == COS else "sin"
        return f"surviving term [{self.terms[(kind, freq)]}] * {name}(({freq[0]}a+{freq[1]}b)s)"

    def const_coeff(self) -> FreqCoeff:
        return self.terms.get((COS, (0, 0)), FreqCoeff.zero())

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigExpr):
            return NotImplemented
        return self.ring == other.ring and (self - other).is_zero()

    __hash__ = None

    def __neg__(self) -> "TrigExpr":
        return TrigExpr(self.ring, {key: q.neg() for key, q in self.terms.items()})

    def __add__(self, other) -> "TrigExpr":
        if is_rational(other) or isinstance(other, TPoly):
            other = self.ring.const(other)
        if not isinstance(other, TrigExpr):
            return NotImplemented
        if self.ring != other.ring:
            raise ValueError("mixing expressions from different rings")
        terms = dict(self.terms)
        for (kind, freq), q in other.terms.items():
            _accumulate(terms, kind, freq, q)
        return TrigExpr(self.ring, terms)

    __radd__ = __add__

    def __sub__(self, other) -> "TrigExpr":
        if is_rational(other) or isinstance(other, TPoly):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "TrigExpr":
        return (-self) + other

    def __mul__(self, other) -> "TrigExpr":
        if is_rational(other) or isinstance(other, TPoly):
            factor = other if isinstance(other, TPoly) else TPoly.const(other)
            terms = {}
            for key, q in self.terms.items():
                q2 = q.scale(factor)
                if not q2.is_zero():
                    terms[key] = q2
            return TrigExpr(self.ring, terms)
        if isinstance(other, FreqCoeff):
            terms = {}
            for key, q in self.terms.items():
                q2 = self.ring.mul_coeff(q, other)
                if not q2.is_zero():
                    terms[key] = q2
            return TrigExpr(self.ring, terms)
        if not isinstance(other, TrigExpr):
            return NotImplemented
        if self.ring != other.ring:
            raise ValueError("mixing expressions from different rings")
        ring = self.ring
        terms: Dict[FreqKey, FreqCoeff] = {}
        for (k1, f1), q1 in self.terms.items():
            for (k2, f2), q2 in other.terms.items():
                half = ring.mul_coeff(q1, q2).scale(_HALF)
                fp = (f1[0] + f2[0], f1[1] + f2[1])
                fm = (f1[0] - f2[0], f1[1] - f2[1])
                if k1 == SIN and k2 == SIN:
                    _accumulate(terms, COS, fm, half)
                    _accumulate(terms, COS, fp, half.neg())
                elif k1 == COS and k2 == COS:
                    _accumulate(terms, COS, fm, half)
                    _accumulate(terms, COS, fp, half)
                elif k1 == SIN and k2 == COS:
                    _accumulate(terms, SIN, fp, half)
                    _accumulate(terms, SIN, fm, half)
                else:
                    _accumulate(terms, SIN, fp, half)
                    _accumulate(terms, SIN, fm, half.neg())
        return TrigExpr(self.ring, terms)

    __rmul__ = __mul__

    def diff(self) -> "TrigExpr":
        """Derivative in the arc-length parameter s."""
        terms: Dict[FreqKey, FreqCoeff] = {}
        for (kind, freq), q in self.terms.items():
            j, k = freq
            if freq == (0, 0):
                continue
            qf = self.ring.mul_coeff(q, FreqCoeff.radical(j, k))
            if kind == SIN:
                _accumulate(terms, COS, freq, qf)
            else:
                _accumulate(terms, SIN, freq, qf.neg())
        return TrigExpr(self.ring, terms)

    def subs_T(self, tval) -> "TrigExpr":
        """Substitute an exact value for T, landing in an instance ring."""
        ring = TrigRing.instance(self.ring.asq.eval(tval), self.ring.bsq.eval(tval))
        terms: Dict[FreqKey, FreqCoeff] = {}
        for (kind, freq), q in self.terms.items():
            q2 = FreqCoeff(tuple(TPoly.const(p.eval(tval)) for p in q.parts))
            _accumulate(terms, kind, freq, q2)
        return TrigExpr(ring, terms)

    def eval_float(self, svals, tval=None):
        """Numeric evaluation at arc-length samples, for witnesses and spot checks."""
        import numpy as np

        if tval is None:
            degrees = [self.ring.asq.degree(), self.ring.bsq.degree()]
            degrees += [p.degree() for q in self.terms.values() for p in q.parts]
            if any(d > 0 for d in degrees):
                raise ValueError("expression depends on T; pass tval")
            tval = 0
        asq_val = self.ring.asq.eval(tval)
        bsq_val = self.ring.bsq.eval(tval)
        uses_a = any(f[0] or q.uses_a() for (_, f), q in self.terms.items())
        uses_b = any(f[1] or q.uses_b() for (_, f), q in self.terms.items())
        for used, val, name in ((uses_a, asq_val, "a"), (uses_b, bsq_val, "b")):
            if used and val < 0:
                raise ValueError(f"frequency {name} is imaginary at T={tval}: {name}^2 = {val}")
        a = math.sqrt(float(asq_val)) if uses_a else 0.0
        b = math.sqrt(float(bsq_val)) if uses_b else 0.0
        s = np.asarray(svals, dtype=np.float64)
        out = np.zeros_like(s)
        for (kind, (j, k)), q in self.terms.items():
            c1, ca, cb, cab = (float(p.eval(tval)) for p in q.parts)
            amp = c1 + ca * a + cb * b + cab * a * b
            angle = (j * a + k * b) * s
            out += amp * (np.sin(angle) if kind == SIN else np.cos(angle))
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for (kind, (j, k)) in sorted(self.terms):
            q = self.terms[(kind, (j, k))]
            name = "cos" if kind == COS else "sin"
            if (j, k) == (0, 0):
                chunks.append(f"[{q}]")
            else:
                chunks.append(f"[{q}]*{name}(({j}a+{k}b)s)")
        return " + ".join(chunks)
