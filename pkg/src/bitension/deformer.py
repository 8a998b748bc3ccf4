"""Closed-form angle solvers for cone and join deformations.

Given certified harmonic inputs, each solver reduces the fourth-order
problem to a single algebraic constraint on the mixing angle t = sin^2(angle)
and solves it exactly:

    cone     lap Q          = (1 - 2t) Q^2            Q = |dv|^2
    join     lap (Q1 - Q2)  = (1 - 2t) (Q1 - Q2)^2

on flat domains, and on round spheres the conformal variants

    cone     t = (1/3)(m-1)(m-3)/lambda + 1/2
    join     cos 2(angle) = -(2/3)(m-1)(m-3) / (lambda1 - lambda2)

for eigenmap inputs.  Only two energy-density shapes are solvable: constant
and c/r^2 on punctured space.  Anything else raises UnsupportedDensity
rather than guessing; non-constant-density conformal solutions are an open
question deliberately left unanswered here.

Every solver certifies its own preconditions (harmonicity, the cross-term
orthogonality the reduction needs) and, unless certify=False, the full
residual of the deformed map before returning.  The certify switch only
skips the final residual pass; it never weakens the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from bitension._rational import RAT
from bitension.catalog import (
    AngleSolution,
    DomainSpec,
    ROUND_SPHERE,
    SphereMap,
    cone,
    join,
)
from bitension.errors import (
    CertificationError,
    InadmissibleAngle,
    UnsupportedDensity,
    UnsupportedDomain,
)
from bitension.functionals import (
    ResidualKit,
    bitension_residual,
    c_bitension_residual,
    tension_residual,
)
from bitension.symbolic import RadialExpr

__all__ = [
    "ConstraintReport",
    "density_shape",
    "solve_cone_biharmonic",
    "solve_join_biharmonic",
    "solve_cone_cbiharmonic",
    "solve_join_cbiharmonic",
    "degree_bound_admissible",
    "admissible_range",
    "FAMILY_RANGES",
]

CONSTANT = "constant"
INVERSE_SQUARE = "inverse_square"
OTHER = "other"

CRITICAL_DIM_NOTE = (
    "critical dimension m = 4: the solved angle degenerates to t = 1/2 "
    "and both mixing amplitudes equal 1/sqrt(2)"
)


@dataclass(frozen=True)
class ConstraintReport:
    """The two sides of the solved angle constraint, with t substituted."""

    lhs: object
    rhs: object
    satisfied: bool
    solved_t: Optional[AngleSolution]


def density_shape(domain: DomainSpec, q) -> Tuple[str, Optional[object]]:
    """Classify an energy density as constant, c/r^2, or unsupported.

    Returns (kind, value) where value is the constant or the inverse-square
    coefficient c as an exact rational, None for the unsupported kind.
    """
    if not isinstance(q, RadialExpr):
        coeff = q.const_coeff()
        if (q - q.ring.const(coeff)).is_zero():
            one, a, b, ab = coeff.parts
            if a.is_zero() and b.is_zero() and ab.is_zero() and one.degree() <= 0:
                return CONSTANT, one.eval(0)
        return OTHER, None
    qr = q.reduce()
    if not qr.pieces:
        return CONSTANT, RAT(0)
    if set(qr.pieces) == {0} and qr.pieces[0].is_constant():
        return CONSTANT, qr.pieces[0].const_value()
    if set(qr.pieces) == {2} and qr.pieces[2].is_constant():
        return INVERSE_SQUARE, qr.pieces[2].const_value()
    return OTHER, None


def _require_harmonic(v: SphereMap, role: str) -> ResidualKit:
    res = tension_residual(v)
    witness = res.zero_witness()
    if witness is not None:
        raise CertificationError(f"{role} {v.name} is not harmonic", witness)
    return ResidualKit.for_map(v)


def _require_cross_terms(kit: ResidualKit, q, source: str) -> None:
    """The reduction to the angle constraint needs <grad Q, grad e_a> = 0."""
    for idx, s in enumerate(kit.comps):
        g = kit.domain.grad_dot(q, s.expr)
        witness = g.zero_witness()
        if witness is not None:
            raise CertificationError(
                f"cross-term certificate failed for {source}, component {idx}",
                witness,
            )


def _certify_deformed(u: SphereMap, residual_fn, source: str) -> None:
    res = residual_fn(u)
    witness = res.zero_witness()
    if witness is not None:
        raise CertificationError(
            f"solved angle does not certify for {source}: residual of {u.name} survives",
            witness,
        )
    if tension_residual(u).is_zero():
        raise CertificationError(
            f"{u.name} is harmonic, not a proper solution of {source}"
        )


def _density_constraint_t(domain: DomainSpec, shape: str, value, difference: bool):
    """Exact t for lap q = (1-2t) q^2, q the density (or density difference)."""
    m = domain.dim
    if shape == CONSTANT:
        if difference and value == 0:
            raise ValueError(
                "equal constant energy densities give a harmonic join, not a proper one"
            )
        return RAT(1, 2)
    if shape == INVERSE_SQUARE:
        if value == 0:
            raise ValueError("zero inverse-square coefficient cannot be inverted")
        return RAT(1, 2) + RAT(m - 4) / value
    label = "difference of energy densities" if difference else "energy density"
    if domain.is_closed:
        raise UnsupportedDensity(
            f"{label} is not constant; the closed-domain statement does not apply"
        )
    raise UnsupportedDensity(
        f"{label} is neither constant nor c/r^2; no closed-form angle is known"
    )


def _report(domain: DomainSpec, q, sol: AngleSolution) -> ConstraintReport:
    lhs = domain.lap(q)
    rhs = q * q * sol.cos_double_angle
    satisfied = (lhs - rhs).is_zero()
    return ConstraintReport(lhs=lhs, rhs=rhs, satisfied=satisfied, solved_t=sol)


def solve_cone_biharmonic(
    v: SphereMap, certify: bool = True
) -> Tuple[AngleSolution, ConstraintReport]:
    """Mixing angle making cone(v, t) proper biharmonic, with certificates."""
    kit = _require_harmonic(v, "cone base")
    source = f"cone density constraint for {v.name}"
    _require_cross_terms(kit, kit.Q, source)
    shape, value = density_shape(v.domain, kit.Q)
    t = _density_constraint_t(v.domain, shape, value, difference=False)
    note = ""
    if shape == INVERSE_SQUARE and v.domain.dim == 4:
        note = CRITICAL_DIM_NOTE
    sol = AngleSolution(t, constraint_source=source, dimension_note=note)
    report = _report(v.domain, kit.Q, sol)
    if not sol.admissible:
        raise InadmissibleAngle(sol)
    if certify:
        _certify_deformed(cone(v, t), bitension_residual, source)
    return sol, report


def solve_join_biharmonic(
    v1: SphereMap, v2: SphereMap, certify: bool = True
) -> Tuple[AngleSolution, ConstraintReport]:
    """Mixing angle making join(v1, v2, t) proper biharmonic."""
    if v1.domain != v2.domain:
        raise ValueError(f"join factors live on {v1.domain!r} vs {v2.domain!r}")
    kit1 = _require_harmonic(v1, "first join factor")
    kit2 = _require_harmonic(v2, "second join factor")
    source = f"join density constraint for ({v1.name}, {v2.name})"
    for q in (kit1.Q, kit2.Q):
        _require_cross_terms(kit1, q, source)
        _require_cross_terms(kit2, q, source)
    diff = kit1.Q - kit2.Q
    shape, value = density_shape(v1.domain, diff)
    t = _density_constraint_t(v1.domain, shape, value, difference=True)
    sol = AngleSolution(t, constraint_source=source)
    report = _report(v1.domain, diff, sol)
    if not sol.admissible:
        raise InadmissibleAngle(sol)
    if certify:
        _certify_deformed(join(v1, v2, t), bitension_residual, source)
    return sol, report


def _eigenvalue_of(v: SphereMap, kit: ResidualKit, role: str):
    shape, value = density_shape(v.domain, kit.Q)
    if shape != CONSTANT or value == 0:
        raise UnsupportedDensity(
            f"{role} {v.name} is not an eigenmap: energy density is not a nonzero constant"
        )
    if v.eigenvalue is not None and v.eigenvalue != value:
        raise CertificationError(
            f"recorded eigenvalue {v.eigenvalue} of {v.name} "
            f"contradicts its energy density {value}"
        )
    return value


def solve_cone_cbiharmonic(v: SphereMap, certify: bool = True) -> AngleSolution:
    """Mixing angle making cone(v, t) proper conformal biharmonic on a sphere."""
    if v.domain.kind != ROUND_SPHERE:
        raise UnsupportedDomain(
            f"conformal cone solver needs a round-sphere domain, got {v.domain!r}"
        )
    kit = _require_harmonic(v, "cone base")
    lam = _eigenvalue_of(v, kit, "cone base")
    m = v.domain.dim
    t = RAT((m - 1) * (m - 3), 3) / lam + RAT(1, 2)
    source = f"conformal cone eigenvalue formula for {v.name}"
    sol = AngleSolution(t, constraint_source=source)
    if not sol.admissible:
        raise InadmissibleAngle(sol)
    if certify:
        _certify_deformed(cone(v, t), c_bitension_residual, source)
    return sol


def solve_join_cbiharmonic(
    v1: SphereMap, v2: SphereMap, certify: bool = True
) -> AngleSolution:
    """Mixing angle making join(v1, v2, t) proper conformal biharmonic."""
    if v1.domain != v2.domain:
        raise ValueError(f"join factors live on {v1.domain!r} vs {v2.domain!r}")
    if v1.domain.kind != ROUND_SPHERE:
        raise UnsupportedDomain(
            f"conformal join solver needs a round-sphere domain, got {v1.domain!r}"
        )
    kit1 = _require_harmonic(v1, "first join factor")
    kit2 = _require_harmonic(v2, "second join factor")
    lam1 = _eigenvalue_of(v1, kit1, "first join factor")
    lam2 = _eigenvalue_of(v2, kit2, "second join factor")
    if lam1 == lam2:
        raise ValueError(
            f"equal eigenvalues {lam1} give a harmonic join, not a proper one"
        )
    m = v1.domain.dim
    cos2b = -RAT(2 * (m - 1) * (m - 3), 3) / (lam1 - lam2)
    source = f"conformal join eigenvalue formula for ({v1.name}, {v2.name})"
    sol = AngleSolution.from_cos_double_angle(cos2b, constraint_source=source)
    if not sol.admissible:
        raise InadmissibleAngle(sol)
    if certify:
        _certify_deformed(join(v1, v2, sol.t), c_bitension_residual, source)
    return sol


def degree_bound_admissible(k: int, m: int) -> bool:
    """Whether a degree-k eigenmap of S^m admits the conformal cone angle.

    Integer-exact form of k > (1/6)(sqrt(3(11 m^2 - 38 m + 27)) - 3m + 3):
    when the radicand is negative every degree passes; otherwise compare
    squares, which is equivalent because both sides are positive.
    """
    if k < 1 or m < 1:
        raise ValueError("degree and dimension must be positive")
    radicand = 3 * (11 * m * m - 38 * m + 27)
    if radicand < 0:
        return True
    lhs = 6 * k + 3 * m - 3
    return lhs * lhs > radicand


FAMILY_RANGES = {
    "pi_cone": (4, 6),
    "mu_cone": (3, None),
    "nu_cone": (2, None),
    "pi_mu_join": (4, 8),
    "pi_nu_join": (2, None),
    "mu_nu_join": (3, 10),
    "small_hypersphere_cbiharmonic": (1, 4),
}

_FAMILY_ALIASES = {
    "pi": "pi_cone",
    "mu": "mu_cone",
    "nu": "nu_cone",
    "w1": "pi_mu_join",
    "w2": "pi_nu_join",
    "w3": "mu_nu_join",
}


def admissible_range(family: str) -> Tuple[int, Optional[int]]:
    """Inclusive integer dimension range (lo, hi) for a named solution family.

    hi is None when every m >= lo is admissible.
    """
    key = _FAMILY_ALIASES.get(family, family)
    try:
        return FAMILY_RANGES[key]
    except KeyError:
        known = ", ".join(sorted(FAMILY_RANGES) + sorted(_FAMILY_ALIASES))
        raise ValueError(f"unknown family {family!r}; known: {known}") from None
