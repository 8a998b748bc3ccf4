"""Map catalog: domain descriptions, sphere-valued maps, cone and join.

A SphereMap keeps its components exactly: each ambient coordinate is a
RadialExpr (rational in x and 1/r) or a TrigExpr (curves), multiplied by a
formal amplitude sqrt(radicand) with rational radicand.  Squared quantities
(norms, energy densities, residual brackets) therefore stay inside exact
rational arithmetic, and every map certifies its unit-norm identity at
construction time.

The cone and join combinators store their mixing parameter t = sin^2(angle)
exactly and keep the base maps structured; flatten() multiplies the formal
amplitudes through (radicands multiply by t and 1-t), which loses nothing
because only squared amplitudes ever enter certified identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from bitension._rational import RAT, is_rational
from bitension.errors import (
    CertificationError,
    SphereCalculusError,
    UnsupportedDomain,
)
from bitension.symbolic import MultiPoly, RadialExpr, TrigExpr, TrigRing

__all__ = [
    "PUNCTURED_EUCLIDEAN",
    "ROUND_SPHERE",
    "ARC_LENGTH",
    "DomainSpec",
    "punctured",
    "round_sphere",
    "arc_length",
    "Scaled",
    "Components",
    "Cone",
    "Join",
    "AngleSolution",
    "SphereMap",
    "make_pi",
    "make_mu",
    "make_nu",
    "make_eigenmap",
    "make_identity_sphere",
    "make_quadratic_eigenmap",
    "make_cubic_eigenmap",
    "make_hopf_eigenmap",
    "make_curve_s2",
    "make_curve_s3",
    "cone",
    "join",
    "constant_map",
]

PUNCTURED_EUCLIDEAN = "punctured_euclidean"
ROUND_SPHERE = "round_sphere"
ARC_LENGTH = "arc_length_interval"

_WITNESS_COORDS = (1, 1.5, -0.6, 1.25, 1.4, -0.75, 1.1, 0.8, -1.3, 0.9, 1.7, -0.55)


@dataclass(frozen=True)
class DomainSpec:
    """Source manifold: punctured Euclidean space, round sphere, or arc length."""

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in (PUNCTURED_EUCLIDEAN, ROUND_SPHERE, ARC_LENGTH):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError(f"domain dimension must be >= 1, got {self.dim}")
        if self.kind == ARC_LENGTH and self.dim != 1:
            raise ValueError("arc-length domains are one-dimensional")

    @property
    def ambient_nvars(self) -> int:
        """Number of coordinates the component expressions live in."""
        if self.kind == PUNCTURED_EUCLIDEAN:
            return self.dim
        if self.kind == ROUND_SPHERE:
            return self.dim + 1
        raise UnsupportedDomain("arc-length expressions have no ambient coordinates")

    @property
    def ric_coefficient(self):
        return RAT(self.dim - 1) if self.kind == ROUND_SPHERE else RAT(0)

    @property
    def scal(self):
        return RAT(self.dim) * self.ric_coefficient

    @property
    def conformal_coefficient(self):
        """The constant multiplying the extra Laplacian term on this domain."""
        if self.kind == ROUND_SPHERE:
            m = self.dim
            return RAT(2 * (m - 1) * (m - 3)) / RAT(3)
        return RAT(0)

    @property
    def is_closed(self) -> bool:
        return self.kind == ROUND_SPHERE

    def _require_degree0(self, expr: RadialExpr) -> None:
        degrees = expr.homogeneity_degrees()
        if degrees <= {0}:
            return
        import numpy as np

        nv = expr.nvars
        base = np.array([_WITNESS_COORDS[i % len(_WITNESS_COORDS)] for i in range(nv)])
        coords = np.stack([base, 2.0 * base], axis=1)
        vals = expr.eval_array(coords)
        raise SphereCalculusError(
            f"spherical calculus needs a degree-0 homogeneous extension; found "
            f"degrees {sorted(degrees)}; witness: value {float(vals[0])!r} at p but "
            f"{float(vals[1])!r} at 2p for p = {tuple(base)}"
        )

    def lap(self, expr):
        """Domain Laplacian of a scalar expression."""
        if self.kind == ARC_LENGTH:
            return expr.diff().diff()
        if self.kind == PUNCTURED_EUCLIDEAN:
            return expr.lap()
        self._require_degree0(expr)
        return expr.lap().mul_r2_power(1)

    def grad_dot(self, a, b):
        """Domain inner product of gradients of two scalar expressions."""
        if self.kind == ARC_LENGTH:
            return a.diff() * b.diff()
        if self.kind == PUNCTURED_EUCLIDEAN:
            return a.grad_dot(b)
        self._require_degree0(a)
        if b is not a:
            self._require_degree0(b)
        return a.grad_dot(b).mul_r2_power(1)

    def zero_expr(self):
        if self.kind == ARC_LENGTH:
            raise UnsupportedDomain("curve domains need a ring to build constants")
        return RadialExpr.zero(self.ambient_nvars)

    def __repr__(self) -> str:
        if self.kind == PUNCTURED_EUCLIDEAN:
            return f"R^{self.dim} minus origin"
        if self.kind == ROUND_SPHERE:
            return f"S^{self.dim}"
        return "arc-length interval"


def punctured(m: int) -> DomainSpec:
    return DomainSpec(PUNCTURED_EUCLIDEAN, m)


def round_sphere(m: int) -> DomainSpec:
    return DomainSpec(ROUND_SPHERE, m)


def arc_length() -> DomainSpec:
    return DomainSpec(ARC_LENGTH, 1)


@dataclass(frozen=True)
class Scaled:
    """A component expression with formal amplitude sqrt(radicand)."""

    radicand: object
    expr: object

    def __post_init__(self):
        object.__setattr__(self, "radicand", RAT(self.radicand))
        if self.radicand <= 0:
            raise ValueError(f"radicand must be positive, got {self.radicand}")

    @property
    def amplitude(self) -> float:
        import math

        return math.sqrt(float(self.radicand))


@dataclass(frozen=True)
class Components:
    parts: Tuple[Scaled, ...]


@dataclass(frozen=True)
class Cone:
    base: "SphereMap"
    t: object


@dataclass(frozen=True)
class Join:
    left: "SphereMap"
    right: "SphereMap"
    t: object


@dataclass(frozen=True)
class AngleSolution:
    """Solved mixing parameter t = sin^2(angle), kept exact."""

    t: object
    constraint_source: str
    dimension_note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "t", RAT(self.t))

    @property
    def admissible(self) -> bool:
        return 0 < self.t < 1

    @property
    def cos_double_angle(self):
        return 1 - 2 * self.t

    @classmethod
    def from_cos_double_angle(cls, c, constraint_source: str, dimension_note: str = ""):
        t = (1 - RAT(c)) / 2
        return cls(t, constraint_source, dimension_note)


class SphereMap:
    """Exact sphere-valued map; see the module docstring.

    Instances are immutable by convention.  Components bodies are certified
    at construction: unit norm always, and the energy density against
    expected_density when the constructor supplies one.
    """

    def __init__(
        self,
        domain: DomainSpec,
        target_dim: int,
        body,
        name: str,
        eigenvalue=None,
        degree: Optional[int] = None,
        curve_param=None,
        expected_density=None,
    ):
        self.domain = domain
        self.target_dim = target_dim
        self.body = body
        self.name = name
        self.eigenvalue = None if eigenvalue is None else RAT(eigenvalue)
        self.degree = degree
        self.curve_param = None if curve_param is None else RAT(curve_param)
        self._density = None
        if isinstance(body, Components):
            if len(body.parts) != target_dim + 1:
                raise ValueError(
                    f"{len(body.parts)} components cannot target S^{target_dim}"
                )
            self._certify_unit_norm(body.parts)
            self._density = self._component_density(body.parts)
            if expected_density is not None:
                diff = self._density - expected_density
                witness = diff.zero_witness()
                if witness is not None:
                    raise CertificationError(
                        f"energy density of {name} differs from the expected value",
                        witness,
                    )
        elif expected_density is not None:
            raise ValueError("expected_density applies to Components bodies only")

    def _certify_unit_norm(self, parts: Sequence[Scaled]) -> None:
        total = None
        for part in parts:
            sq = part.expr * part.expr * part.radicand
            total = sq if total is None else total + sq
        residual = total - 1
        witness = residual.zero_witness()
        if witness is not None:
            raise CertificationError(
                f"unit-norm certificate failed for {self.name}", witness
            )

    def _component_density(self, parts: Sequence[Scaled]):
        total = None
        for part in parts:
            piece = self.domain.grad_dot(part.expr, part.expr) * part.radicand
            total = piece if total is None else total + piece
        return total

    @property
    def is_curve(self) -> bool:
        return self.domain.kind == ARC_LENGTH

    def flatten(self) -> Tuple[Scaled, ...]:
        """Raw components with all mixing amplitudes folded into radicands."""
        body = self.body
        if isinstance(body, Components):
            return body.parts
        if isinstance(body, Cone):
            base = body.base.flatten()
            parts = [Scaled(body.t * s.radicand, s.expr) for s in base]
            parts.append(Scaled(1 - body.t, _const_one_like(self.domain, base)))
            return tuple(parts)
        base_l = body.left.flatten()
        base_r = body.right.flatten()
        parts = [Scaled(body.t * s.radicand, s.expr) for s in base_l]
        parts += [Scaled((1 - body.t) * s.radicand, s.expr) for s in base_r]
        return tuple(parts)

    def structural_eq(self, other: "SphereMap") -> bool:
        if not isinstance(other, SphereMap):
            return False
        if self.domain != other.domain or self.target_dim != other.target_dim:
            return False
        if self.curve_param != other.curve_param:
            return False
        a, b = self.body, other.body
        if type(a) is not type(b):
            return False
        if isinstance(a, Components):
            if len(a.parts) != len(b.parts):
                return False
            return all(
                p.radicand == q.radicand and (p.expr - q.expr).is_zero()
                for p, q in zip(a.parts, b.parts)
            )
        if isinstance(a, Cone):
            return a.t == b.t and a.base.structural_eq(b.base)
        return (
            a.t == b.t
            and a.left.structural_eq(b.left)
            and a.right.structural_eq(b.right)
        )

    def __repr__(self) -> str:
        return f"<SphereMap {self.name}: {self.domain!r} -> S^{self.target_dim}>"


def _const_one_like(domain: DomainSpec, parts: Sequence[Scaled]):
    if domain.kind == ARC_LENGTH:
        return parts[0].expr.ring.const(1)
    return RadialExpr.const(domain.ambient_nvars, 1)


def _kronecker_pair(m: int, i: int, j: int) -> MultiPoly:
    e = [0] * m
    e[i] += 1
    e[j] += 1
    return MultiPoly(m, {tuple(e): 1})


def _kronecker_triple(m: int, i: int, j: int, k: int) -> MultiPoly:
    e = [0] * m
    e[i] += 1
    e[j] += 1
    e[k] += 1
    return MultiPoly(m, {tuple(e): 1})


def make_pi(m: int) -> SphereMap:
    """Radial projection of punctured m-space onto the unit sphere."""
    if m < 2:
        raise ValueError(f"radial projection needs m >= 2, got {m}")
    dom = punctured(m)
    parts = tuple(
        Scaled(1, RadialExpr(m, {1: MultiPoly.variable(m, i)})) for i in range(m)
    )
    expected = RadialExpr(m, {2: MultiPoly.const(m, m - 1)})
    return SphereMap(
        dom,
        m - 1,
        Components(parts),
        name=f"pi({m})",
        expected_density=expected,
    )


def make_mu(m: int) -> SphereMap:
    """Quadratic radial family: normalized -delta_ij + m x_i x_j / r^2."""
    if m < 2:
        raise ValueError(f"quadratic radial family needs m >= 2, got {m}")
    dom = punctured(m)
    radicand = RAT(1) / RAT(m * (m - 1))
    parts = []
    for i in range(m):
        for j in range(m):
            pieces = {2: _kronecker_pair(m, i, j) * m}
            if i == j:
                pieces[0] = MultiPoly.const(m, -1)
            parts.append(Scaled(radicand, RadialExpr(m, pieces)))
    expected = RadialExpr(m, {2: MultiPoly.const(m, 2 * m)})
    return SphereMap(
        dom,
        m * m - 1,
        Components(tuple(parts)),
        name=f"mu({m})",
        expected_density=expected,
    )


def make_nu(m: int) -> SphereMap:
    """Cubic radial family built from symmetrized x_i x_j x_k / r^3 terms."""
    if m < 2:
        raise ValueError(f"cubic radial family needs m >= 2, got {m}")
    dom = punctured(m)
    radicand = RAT(1) / RAT((m - 1) * (m + 2))
    parts = []
    for i in range(m):
        for j in range(m):
            for k in range(m):
                linear = MultiPoly.zero(m)
                if i == j:
                    linear = linear + MultiPoly.variable(m, k)
                if j == k:
                    linear = linear + MultiPoly.variable(m, i)
                if i == k:
                    linear = linear + MultiPoly.variable(m, j)
                pieces = {3: _kronecker_triple(m, i, j, k) * (-(m + 2))}
                if not linear.is_zero():
                    pieces[1] = linear
                parts.append(Scaled(radicand, RadialExpr(m, pieces)))
    expected = RadialExpr(m, {2: MultiPoly.const(m, 3 * (m + 1))})
    return SphereMap(
        dom,
        m**3 - 1,
        Components(tuple(parts)),
        name=f"nu({m})",
        expected_density=expected,
    )


def make_eigenmap(polys: Sequence[MultiPoly], k: int, name: Optional[str] = None) -> SphereMap:
    """Sphere map from homogeneous harmonic polynomials of common degree k.

    The squared components must sum to c * r^(2k) for a positive rational c;
    the normalization 1/sqrt(c) is recorded as the formal amplitude.  The
    Laplace eigenvalue k(k+m-1) and the constant energy density are both
    certified, not merely recorded.
    """
    polys = list(polys)
    if not polys:
        raise ValueError("an eigenmap needs at least one component")
    nvars = polys[0].nvars
    if nvars < 2:
        raise ValueError("ambient dimension must be at least 2")
    if any(p.nvars != nvars for p in polys):
        raise ValueError("components live in different ambient dimensions")
    m = nvars - 1
    for idx, p in enumerate(polys):
        if p.homogeneous_degree() != k:
            raise CertificationError(
                f"component {idx} is not homogeneous of degree {k}",
                f"degrees present: {sorted({sum(e) for e in p.terms})}",
            )
        defect = p.lap()
        if not defect.is_zero():
            raise CertificationError(
                f"component {idx} is not harmonic",
                f"Laplacian leading term {defect.terms[defect.leading_monomial()]}"
                f" * {defect.leading_monomial()}",
            )
    total = MultiPoly.zero(nvars)
    for p in polys:
        total = total + p * p
    c = total.eval_exact([1] + [0] * (nvars - 1))
    defect = total - MultiPoly.sum_of_squares(nvars) ** k * c
    if c <= 0 or not defect.is_zero():
        lead = defect.leading_monomial() if not defect.is_zero() else None
        raise CertificationError(
            "squared components do not sum to a multiple of r^(2k)",
            f"difference from {c} * r^{2 * k} has leading term {lead}",
        )
    radicand = RAT(1) / c
    lam = RAT(k * (k + m - 1))
    parts = tuple(Scaled(radicand, RadialExpr(nvars, {k: p})) for p in polys)
    dom = round_sphere(m)
    expected = RadialExpr.const(nvars, lam)
    return SphereMap(
        dom,
        len(polys) - 1,
        Components(parts),
        name=name or f"eigenmap(degree {k} on S^{m})",
        eigenvalue=lam,
        degree=k,
        expected_density=expected,
    )


def make_identity_sphere(m: int) -> SphereMap:
    """Identity of the round m-sphere as a degree-1 eigenmap."""
    if m < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {m}")
    nvars = m + 1
    polys = [MultiPoly.variable(nvars, i) for i in range(nvars)]
    return make_eigenmap(polys, 1, name=f"identity_sphere({m})")


def make_quadratic_eigenmap(m: int) -> SphereMap:
    """Degree-2 eigenmap of S^m from -delta_ij r^2 + (m+1) x_i x_j."""
    if m < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {m}")
    p = m + 1
    sos = MultiPoly.sum_of_squares(p)
    polys = []
    for i in range(p):
        for j in range(p):
            poly = _kronecker_pair(p, i, j) * p
            if i == j:
                poly = poly - sos
            polys.append(poly)
    return make_eigenmap(polys, 2, name=f"eigenmap(quadratic, {m})")


def make_cubic_eigenmap(m: int) -> SphereMap:
    """Degree-3 eigenmap of S^m from symmetrized cubic harmonics."""
    if m < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {m}")
    p = m + 1
    sos = MultiPoly.sum_of_squares(p)
    polys = []
    for i in range(p):
        for j in range(p):
            for k in range(p):
                linear = MultiPoly.zero(p)
                if i == j:
                    linear = linear + MultiPoly.variable(p, k)
                if j == k:
                    linear = linear + MultiPoly.variable(p, i)
                if i == k:
                    linear = linear + MultiPoly.variable(p, j)
                poly = linear * sos - _kronecker_triple(p, i, j, k) * (p + 2)
                polys.append(poly)
    return make_eigenmap(polys, 3, name=f"eigenmap(cubic, {m})")


def make_hopf_eigenmap() -> SphereMap:
    """The classical degree-2 fibration of S^3 over S^2."""
    x0, x1, x2, x3 = (MultiPoly.variable(4, i) for i in range(4))
    polys = [
        x0 * x0 + x1 * x1 - x2 * x2 - x3 * x3,
        (x0 * x3 + x1 * x2) * 2,
        (x1 * x3 - x0 * x2) * 2,
    ]
    return make_eigenmap(polys, 2, name="eigenmap(hopf)")


def make_curve_s2() -> SphereMap:
    """Unit-speed circle of latitude at squared radius 1/2 in S^2."""
    half = RAT(1) / RAT(2)
    ring = TrigRing.instance(2, 0)
    parts = (
        Scaled(half, ring.sin(1, 0)),
        Scaled(half, ring.cos(1, 0)),
        Scaled(half, ring.const(1)),
    )
    return SphereMap(
        arc_length(),
        2,
        Components(parts),
        name="curve_s2()",
        expected_density=ring.const(1),
    )


def make_curve_s3(asq) -> SphereMap:
    """Unit-speed double circle in S^3 with squared frequencies a^2, 2 - a^2.

    The components live in the family ring, so certificates are identities in
    Q[a^2]; the concrete a^2 is kept as metadata for numeric evaluation.
    """
    asq = RAT(asq)
    if not 0 < asq < 2:
        raise ValueError(f"a^2 must lie in (0,2), got {asq}")
    if asq == 1:
        raise ValueError("a^2 = 1 gives equal frequencies: a geodesic, not a proper solution")
    half = RAT(1) / RAT(2)
    ring = TrigRing.family()
    parts = (
        Scaled(half, ring.sin(1, 0)),
        Scaled(half, ring.cos(1, 0)),
        Scaled(half, ring.sin(0, 1)),
        Scaled(half, ring.cos(0, 1)),
    )
    return SphereMap(
        arc_length(),
        3,
        Components(parts),
        name=f"curve_s3({asq})",
        curve_param=asq,
        expected_density=ring.const(1),
    )


def cone(v: SphereMap, t) -> SphereMap:
    """Mix v with a constant last coordinate: amplitudes sqrt(t), sqrt(1-t)."""
    t = RAT(t)
    if not 0 < t < 1:
        raise ValueError(f"cone parameter must lie in (0,1), got {t}")
    return SphereMap(
        v.domain,
        v.target_dim + 1,
        Cone(v, t),
        name=f"cone({v.name}, {t})",
        curve_param=v.curve_param,
    )


def join(v1: SphereMap, v2: SphereMap, t) -> SphereMap:
    """Concatenate two maps with amplitudes sqrt(t) and sqrt(1-t)."""
    t = RAT(t)
    if not 0 < t < 1:
        raise ValueError(f"join parameter must lie in (0,1), got {t}")
    if v1.domain != v2.domain:
        raise ValueError(
            f"join needs a shared domain, got {v1.domain!r} and {v2.domain!r}"
        )
    if v1.curve_param != v2.curve_param:
        raise ValueError("join needs matching curve parameters")
    return SphereMap(
        v1.domain,
        v1.target_dim + v2.target_dim + 1,
        Join(v1, v2, t),
        name=f"join({v1.name}, {v2.name}, {t})",
        curve_param=v1.curve_param,
    )


def constant_map(domain: DomainSpec) -> SphereMap:
    """Map everything to a pole; useful as a degenerate test input."""
    if domain.kind == ARC_LENGTH:
        expr = TrigRing.instance(1, 0).const(1)
    else:
        expr = RadialExpr.const(domain.ambient_nvars, 1)
    parts = (Scaled(1, expr),)
    return SphereMap(domain, 0, Components(parts), name="constant")
