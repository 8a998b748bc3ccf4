"""Energy densities, tension-type residual fields, and energy values.

All residuals are computed extrinsically on the flattened components.  For a
map with components sqrt(rad_a) * e_a the certified quantities are

    Q    = sum_a rad_a <grad e_a, grad e_a>      (energy density |du|^2)
    E    = sum_a rad_a e_a lap(lap(e_a))         (<lap^2 u, u>)

and the residual brackets per component

    tension     lap(e_a) + Q e_a
    bitension   lap^2(e_a) + 2(<grad Q, grad e_a> + Q lap(e_a)) - (E - 2 Q^2) e_a
    conformal   bitension - P lap(e_a) - P Q e_a

with P the domain's conformal coefficient (zero on flat domains).  The
formal amplitudes sqrt(rad_a) stay attached to the brackets and never enter
the exact arithmetic.  Structured cone/join bodies reuse their base maps'
expensive per-component Laplacians; only the cheap aggregate quantities are
reassembled, so sweeping many mixing angles over one base map is fast.

Unit-speed curves go through the same formulas with d/ds calculus: because
the construction certifies Q = 1 exactly, the bitension bracket reduces to
the fourth-order arc-length equation with its constant coefficients, which
is the form that actually pins the admissible frequencies.  (The same
bracket with a merely constant, non-unit Q vanishes for a whole family of
circles regardless of frequency, so the unit-speed normalization is load
bearing, not cosmetic.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

from bitension._rational import RAT, rational_sqrt
from bitension.catalog import (
    ARC_LENGTH,
    Components,
    Cone,
    DomainSpec,
    Join,
    ROUND_SPHERE,
    Scaled,
    SphereMap,
)
from bitension.errors import CertificationError, UnsupportedDomain
from bitension.symbolic import SIN, RadialExpr, TrigExpr

__all__ = [
    "ResidualField",
    "EnergyValue",
    "ResidualKit",
    "energy_density",
    "tension_residual",
    "bitension_residual",
    "c_bitension_residual",
    "laplace_of_harmonic_identity",
    "tension_norm_squared",
    "sphere_volume",
    "energy",
    "bienergy",
    "conformal_bienergy",
]

DEFAULT_SAMPLES = 100_000

# relative floor on the Monte Carlo standard error: constant integrands have
# zero sample variance, and a hard zero would make every 3-sigma gate vacuous
SE_RELATIVE_FLOOR = 1e-13


def _zero_like(expr):
    if isinstance(expr, RadialExpr):
        return RadialExpr.zero(expr.nvars)
    return expr.ring.zero()


def _reduced(expr):
    # slot-minimal aggregates keep every later product small
    return expr.reduce() if isinstance(expr, RadialExpr) else expr


class ResidualKit:
    """Per-map cache of the symbolic building blocks listed in the module docstring."""

    def __init__(self, domain: DomainSpec, comps: Tuple[Scaled, ...]):
        self.domain = domain
        self.comps = comps

    @classmethod
    def for_map(cls, u: SphereMap) -> "ResidualKit":
        kit = getattr(u, "_kit", None)
        if kit is not None:
            return kit
        body = u.body
        if isinstance(body, Components):
            kit = cls(u.domain, body.parts)
            if u._density is not None:
                kit.__dict__["Q"] = _reduced(u._density)
        elif isinstance(body, Cone):
            base = cls.for_map(body.base)
            kit = cls._assemble_cone(u, base, body.t)
        elif isinstance(body, Join):
            left = cls.for_map(body.left)
            right = cls.for_map(body.right)
            kit = cls._assemble_join(u, left, right, body.t)
        else:
            raise TypeError(f"unknown body type {type(body).__name__}")
        u._kit = kit
        return kit

    @classmethod
    def _assemble_cone(cls, u: SphereMap, base: "ResidualKit", t) -> "ResidualKit":
        comps = u.flatten()
        kit = cls(u.domain, comps)
        zero = _zero_like(comps[0].expr)
        kit.__dict__["laps"] = base.laps + (zero,)
        kit.__dict__["bilaps"] = base.bilaps + (zero,)
        kit.__dict__["Q"] = base.Q * t
        kit.__dict__["E"] = base.E * t
        return kit

    @classmethod
    def _assemble_join(cls, u: SphereMap, left: "ResidualKit", right: "ResidualKit", t) -> "ResidualKit":
        comps = u.flatten()
        kit = cls(u.domain, comps)
        kit.__dict__["laps"] = left.laps + right.laps
        kit.__dict__["bilaps"] = left.bilaps + right.bilaps
        kit.__dict__["Q"] = left.Q * t + right.Q * (1 - t)
        kit.__dict__["E"] = left.E * t + right.E * (1 - t)
        return kit

    @cached_property
    def laps(self) -> tuple:
        return tuple(_reduced(self.domain.lap(s.expr)) for s in self.comps)

    @cached_property
    def bilaps(self) -> tuple:
        return tuple(_reduced(self.domain.lap(l)) for l in self.laps)

    @cached_property
    def Q(self):
        total = None
        for s in self.comps:
            piece = self.domain.grad_dot(s.expr, s.expr) * s.radicand
            total = piece if total is None else total + piece
        return _reduced(total)

    @cached_property
    def E(self):
        total = None
        for s, bl in zip(self.comps, self.bilaps):
            piece = (s.expr * bl) * s.radicand
            total = piece if total is None else total + piece
        return _reduced(total)

    @cached_property
    def QQ(self):
        return _reduced(self.Q * self.Q)

    @cached_property
    def lap_Q(self):
        return _reduced(self.domain.lap(self.Q))

    @cached_property
    def grad_Q_dot(self) -> tuple:
        return tuple(_reduced(self.domain.grad_dot(self.Q, s.expr)) for s in self.comps)

    @cached_property
    def lap_norm_squared(self):
        total = None
        for s, l in zip(self.comps, self.laps):
            piece = (l * l) * s.radicand
            total = piece if total is None else total + piece
        return _reduced(total)


class ResidualField:
    """Per-component residual brackets with their formal amplitudes."""

    def __init__(self, source: SphereMap, kind: str, parts: Tuple[Scaled, ...]):
        self.source = source
        self.kind = kind
        self.parts = parts

    def is_zero(self) -> bool:
        return all(p.expr.is_zero() for p in self.parts)

    def zero_witness(self) -> Optional[str]:
        for idx, p in enumerate(self.parts):
            w = p.expr.zero_witness()
            if w is not None:
                return f"component {idx}: {w}"
        return None

    def tangency_defect(self):
        """Exact inner product of the residual with the map itself."""
        comps = self.source.flatten()
        total = None
        for part, comp in zip(self.parts, comps):
            piece = (part.expr * comp.expr) * comp.radicand
            total = piece if total is None else total + piece
        return total

    def eval_array(self, coords):
        """Float residual vectors: shape (components, npoints)."""
        import numpy as np

        if self.source.is_curve:
            rows = [
                p.amplitude * p.expr.eval_float(coords, self.source.curve_param)
                for p in self.parts
            ]
        else:
            rows = [p.amplitude * p.expr.eval_array(coords) for p in self.parts]
        return np.stack(rows, axis=0)

    def max_norm(self, coords) -> float:
        import numpy as np

        vals = self.eval_array(coords)
        return float(np.sqrt((vals**2).sum(axis=0)).max())

    def __repr__(self) -> str:
        state = "zero" if self.is_zero() else "nonzero"
        return f"<ResidualField {self.kind} of {self.source.name}: {state}>"


@dataclass(frozen=True)
class EnergyValue:
    """A quadrature (or period-exact) energy with its uncertainty."""

    value: float
    std_error: float
    scheme: str
    samples: int = 0
    seed: Optional[int] = None
    available: bool = True


def energy_density(u: SphereMap):
    """Exact |du|^2 as a domain expression."""
    return ResidualKit.for_map(u).Q


def tension_residual(u: SphereMap) -> ResidualField:
    """Exact harmonic-map residual lap(u) + |du|^2 u, componentwise."""
    kit = ResidualKit.for_map(u)
    parts = tuple(
        Scaled(s.radicand, l + kit.Q * s.expr)
        for s, l in zip(kit.comps, kit.laps)
    )
    return ResidualField(u, "tension", parts)


def bitension_residual(u: SphereMap) -> ResidualField:
    """Exact fourth-order residual of the sphere-target bitension equation."""
    kit = ResidualKit.for_map(u)
    coeff = kit.E - kit.QQ * 2
    parts = []
    for s, l, bl, gq in zip(kit.comps, kit.laps, kit.bilaps, kit.grad_Q_dot):
        bracket = bl + (gq + kit.Q * l) * 2 - coeff * s.expr
        parts.append(Scaled(s.radicand, bracket))
    return ResidualField(u, "bitension", parts)


def c_bitension_residual(u: SphereMap) -> ResidualField:
    """Conformal variant: subtracts the curvature multiple of the Laplacian.

    On flat domains the coefficient vanishes and the residual coincides with
    bitension_residual exactly.
    """
    if u.domain.kind == ARC_LENGTH:
        raise UnsupportedDomain("conformal residual is defined on flat or sphere domains")
    kit = ResidualKit.for_map(u)
    P = u.domain.conformal_coefficient
    coeff = kit.E - kit.QQ * 2 + kit.Q * P
    parts = []
    for s, l, bl, gq in zip(kit.comps, kit.laps, kit.bilaps, kit.grad_Q_dot):
        bracket = bl + (gq + kit.Q * l) * 2 - l * P - coeff * s.expr
        parts.append(Scaled(s.radicand, bracket))
    return ResidualField(u, "c_bitension", parts)


def laplace_of_harmonic_identity(v: SphereMap) -> ResidualField:
    """The identity obtained by applying the Laplacian to the harmonic equation.

    Requires a certified harmonic input; the returned field must be zero and
    serves as an internal consistency check of the calculus.
    """
    defect = tension_residual(v)
    if not defect.is_zero():
        raise CertificationError(
            f"{v.name} is not harmonic", defect.zero_witness() or ""
        )
    kit = ResidualKit.for_map(v)
    parts = []
    for s, bl, gq in zip(kit.comps, kit.bilaps, kit.grad_Q_dot):
        bracket = bl + kit.lap_Q * s.expr + gq * 2 - kit.QQ * s.expr
        parts.append(Scaled(s.radicand, bracket))
    return ResidualField(v, "laplace_of_harmonic", parts)


def tension_norm_squared(u: SphereMap):
    """Exact |tau(u)|^2; the hypothesis the stability statements consume."""
    tau = tension_residual(u)
    total = None
    for part in tau.parts:
        piece = (part.expr * part.expr) * part.radicand
        total = piece if total is None else total + piece
    return total


def sphere_volume(m: int) -> float:
    """Volume of the unit round m-sphere."""
    return 2.0 * math.pi ** ((m + 1) / 2.0) / math.gamma((m + 1) / 2.0)


def _mc_integral(u: SphereMap, integrand, samples: int, seed: int, scheme: str) -> EnergyValue:
    import numpy as np

    m = u.domain.dim
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((m + 1, samples))
    pts /= np.sqrt((pts**2).sum(axis=0))
    vals = integrand.eval_array(pts)
    vol = sphere_volume(m)
    mean = float(vals.mean())
    stat = float(vals.std(ddof=1)) / math.sqrt(samples) if samples > 1 else 0.0
    floor = SE_RELATIVE_FLOOR * float(np.abs(vals).mean())
    se = vol * max(stat, floor)
    return EnergyValue(vol * mean, se, scheme, samples=samples, seed=seed)


def _instance_expr(u: SphereMap, expr: TrigExpr) -> TrigExpr:
    """Substitute the stored curve parameter so frequencies are concrete."""
    if u.curve_param is not None:
        expr = expr.subs_T(u.curve_param)
    return expr


def _curve_period_energy(u: SphereMap, integrand: TrigExpr, name: str) -> EnergyValue:
    expr = _instance_expr(u, integrand)
    asq = expr.ring.asq.eval(0)
    bsq = expr.ring.bsq.eval(0)
    # the period belongs to the curve, not to the integrand: a constant
    # integrand still integrates over one loop of the curve
    needs_a = needs_b = False
    for part in u.flatten():
        for (_, (j, k)) in _instance_expr(u, part.expr).terms:
            needs_a = needs_a or j != 0
            needs_b = needs_b or k != 0
    if needs_a and needs_b:
        ratio = None if bsq == 0 else rational_sqrt(asq / bsq)
        if ratio is None:
            return EnergyValue(
                math.nan,
                math.nan,
                f"{name} unavailable: incommensurable frequencies",
                available=False,
            )
        p, q = int(ratio.numerator), int(ratio.denominator)
        fundamental = math.sqrt(float(asq)) / p
    elif needs_a:
        p, q = 1, 0
        fundamental = math.sqrt(float(asq))
    elif needs_b:
        p, q = 0, 1
        fundamental = math.sqrt(float(bsq))
    else:
        raise CertificationError("curve has no oscillatory component")
    period = 2.0 * math.pi / fundamental
    aval = math.sqrt(float(asq))
    bval = math.sqrt(float(bsq))
    total = 0.0
    for (kind, (j, k)), coeff in expr.terms.items():
        if j * p + k * q != 0 or kind == SIN:
            continue
        c1, ca, cb, cab = (float(part.eval(0)) for part in coeff.parts)
        total += c1 + ca * aval + cb * bval + cab * aval * bval
    return EnergyValue(period * total, 0.0, f"{name} exact over one period")


def _integral(u: SphereMap, integrand, samples: int, seed: int, name: str) -> EnergyValue:
    if u.domain.kind == ARC_LENGTH:
        return _curve_period_energy(u, integrand, name)
    if not u.domain.is_closed:
        raise UnsupportedDomain(
            "absolute energies need a closed domain; "
            f"{u.domain!r} is non-compact"
        )
    return _mc_integral(u, integrand, samples, seed, f"{name} via monte-carlo(seed={seed})")


def energy(u: SphereMap, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> EnergyValue:
    """Dirichlet energy (1/2) integral of |du|^2."""
    kit = ResidualKit.for_map(u)
    integrand = kit.Q * (RAT(1) / 2)
    return _integral(u, integrand, samples, seed, "E")


def bienergy(u: SphereMap, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> EnergyValue:
    """Bienergy (1/2) integral of (|lap u|^2 - |du|^4)."""
    kit = ResidualKit.for_map(u)
    integrand = (kit.lap_norm_squared - kit.QQ) * (RAT(1) / 2)
    return _integral(u, integrand, samples, seed, "E2")


def conformal_bienergy(u: SphereMap, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> EnergyValue:
    """Conformally invariant bienergy on sphere domains."""
    if u.domain.kind != ROUND_SPHERE:
        raise UnsupportedDomain("conformal bienergy is defined on round-sphere domains")
    kit = ResidualKit.for_map(u)
    P = u.domain.conformal_coefficient
    integrand = (kit.lap_norm_squared - kit.QQ + kit.Q * P) * (RAT(1) / 2)
    return _integral(u, integrand, samples, seed, "E2c")
