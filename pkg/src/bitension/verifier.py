"""Floating-point cross-checks for the exact certificates.

Everything here is deliberately redundant.  The symbolic engine already
decides zero versus nonzero exactly; this module re-derives the same
residual brackets from pointwise float evaluation and finite differences,
sharing no code with the exact Laplacians.  Agreement within C h^2 rules
out a whole class of implementation errors on both sides.

Spherical operators use no intrinsic stencils.  A function on the sphere
is sampled through its degree-0 homogeneous extension f(x/|x|), whose
Euclidean Laplacian restricted to the sphere is the spherical one.  The
bilaplacian renormalizes between the two second-order passes: the
Euclidean Laplacian of a degree-0 function is homogeneous of degree -2,
so feeding it straight back into the flat stencil would be wrong.

Stencil safety near the puncture follows one rule: every point a stencil
touches keeps at least one step h of clearance from the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from bitension._rational import RAT
from bitension.catalog import (
    ARC_LENGTH,
    PUNCTURED_EUCLIDEAN,
    ROUND_SPHERE,
    DomainSpec,
    SphereMap,
    arc_length,
    cone,
    join,
    make_cubic_eigenmap,
    make_curve_s2,
    make_curve_s3,
    make_hopf_eigenmap,
    make_identity_sphere,
    make_mu,
    make_nu,
    make_pi,
    make_quadratic_eigenmap,
)
from bitension.deformer import (
    solve_cone_biharmonic,
    solve_cone_cbiharmonic,
    solve_join_biharmonic,
    solve_join_cbiharmonic,
)
from bitension.errors import InadmissibleAngle, UnsupportedDomain
from bitension.functionals import (
    bitension_residual,
    c_bitension_residual,
    tension_residual,
)

__all__ = [
    "SamplePlan",
    "ResidualReport",
    "SuiteSummary",
    "fd_laplacian",
    "fd_bilaplacian",
    "residual_scan",
    "verify_curve",
    "certify_solution_suite",
    "DEFAULT_NUMERIC_TOL",
    "DEFAULT_H",
]

DEFAULT_NUMERIC_TOL = 1e-10
DEFAULT_H = 5e-3

# deviations this small are float roundoff, not discretization error
_ROUNDOFF_FLOOR = 1e-9

_EQUATIONS: Dict[str, Callable] = {
    "harmonic": tension_residual,
    "biharmonic": bitension_residual,
    "cbiharmonic": c_bitension_residual,
}


@dataclass(frozen=True)
class SamplePlan:
    """Where and how densely to probe a residual numerically."""

    domain: DomainSpec
    count: int = 64
    seed: int = 0
    annulus: Tuple[float, float] = (0.5, 2.0)

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"sample count must be >= 1, got {self.count}")
        lo, hi = self.annulus
        if not 0 < lo < hi:
            raise ValueError(
                f"annulus bounds must satisfy 0 < r_min < r_max, got {self.annulus}"
            )

    def points(self) -> np.ndarray:
        """Samples: (nvars, count) coordinates, or (count,) arc-length values."""
        rng = np.random.default_rng(self.seed)
        if self.domain.kind == ARC_LENGTH:
            return rng.uniform(0.0, 2.0 * math.pi, self.count)
        n = self.domain.ambient_nvars
        dirs = rng.standard_normal((n, self.count))
        dirs /= np.sqrt((dirs**2).sum(axis=0, keepdims=True))
        if self.domain.kind == ROUND_SPHERE:
            return dirs
        lo, hi = self.annulus
        return dirs * rng.uniform(lo, hi, self.count)


@dataclass(frozen=True)
class ResidualReport:
    """One residual check: exact verdict, float scan, FD cross-check.

    status is "zero" or "nonzero" for the exact verdict, "geodesic" for a
    curve excluded as harmonic, "inadmissible" for a skipped suite case.
    passed means the map certifiably solves the equation: exact zero, float
    scan under tolerance, FD oracle consistent.
    """

    case: str
    equation: str
    status: str
    witness: Optional[str]
    numeric_max: float
    numeric_tol: float
    fd_deviation: float
    fd_order: Optional[float]
    fd_gate: float
    passed: bool

    @property
    def symbolic_zero(self) -> bool:
        return self.status == "zero"

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


# ---------------------------------------------------------------------------
# float evaluation and stencils


class _FloatMap:
    """Amplitude-folded float components; spheres via the degree-0 extension."""

    def __init__(self, u: SphereMap):
        self.parts = u.flatten()
        self.curve = u.is_curve
        self.tval = u.curve_param
        self.normalize = u.domain.kind == ROUND_SPHERE

    def eval(self, pts: np.ndarray) -> np.ndarray:
        """Component values at columns of pts, shape (ncomp, npoints)."""
        if self.curve:
            s = pts[0]
            rows = [p.amplitude * p.expr.eval_float(s, self.tval) for p in self.parts]
        else:
            q = pts
            if self.normalize:
                q = pts / np.sqrt((pts**2).sum(axis=0, keepdims=True))
            rows = [p.amplitude * p.expr.eval_array(q) for p in self.parts]
        return np.stack(rows, axis=0)


def _unit(pts: np.ndarray) -> np.ndarray:
    return pts / np.sqrt((pts**2).sum(axis=0, keepdims=True))


class _FlatGrid:
    """Every stencil value the bracket needs, from one batched evaluation.

    Valid only when offsets commute with evaluation, i.e. flat and curve
    domains; the sphere path renormalizes between stencil stages instead.
    Offsets are integer step tuples scaled by h at evaluation time.
    """

    def __init__(self, fmap: "_FloatMap", pts: np.ndarray, h: float):
        self.h = h
        n, p = pts.shape
        self.n, self.p = n, p
        zero = (0,) * n
        lap_int = {zero: -2.0 * n}
        for i in range(n):
            for s in (1, -1):
                off = [0] * n
                off[i] = s
                lap_int[tuple(off)] = 1.0
        self.lap_int = lap_int
        self.bilap_int = _convolve(lap_int, lap_int)
        index: Dict[Tuple[int, ...], int] = {}
        for off in self.bilap_int:
            index.setdefault(off, len(index))
        self.index = index
        offs = np.array(list(index), dtype=float).T * h
        big = (pts[:, :, None] + offs[:, None, :]).reshape(n, p * len(index))
        self.vals = fmap.eval(big).reshape(-1, p, len(index))

    def at(self, off: Tuple[int, ...]) -> np.ndarray:
        return self.vals[:, :, self.index[off]]

    def combo(self, int_weights: dict, scale: float) -> np.ndarray:
        ks = [self.index[o] for o in int_weights]
        cs = np.array(list(int_weights.values())) * scale
        return self.vals[:, :, ks] @ cs

    def grad(self, center: Tuple[int, ...]) -> np.ndarray:
        """Central-difference gradients at a lattice point, (ncomp, p, n)."""
        cols = []
        for i in range(self.n):
            plus = list(center)
            plus[i] += 1
            minus = list(center)
            minus[i] -= 1
            cols.append(self.at(tuple(plus)) - self.at(tuple(minus)))
        return np.stack(cols, axis=2) / (2.0 * self.h)

    def density(self, center: Tuple[int, ...]) -> np.ndarray:
        g = self.grad(center)
        return (g**2).sum(axis=(0, 2))


def _lap_weights(n: int, h: float) -> Dict[Tuple[float, ...], float]:
    zero = (0.0,) * n
    w = {zero: -2.0 * n / h**2}
    for i in range(n):
        for step in (h, -h):
            off = list(zero)
            off[i] = step
            w[tuple(off)] = 1.0 / h**2
    return w


def _convolve(w1: dict, w2: dict) -> dict:
    # offset keys stay exact: every sum is of identical floats or zeros
    out: Dict[Tuple[float, ...], float] = {}
    for o1, c1 in w1.items():
        for o2, c2 in w2.items():
            key = tuple(a + b for a, b in zip(o1, o2))
            out[key] = out.get(key, 0.0) + c1 * c2
    return out


def _apply_weights(fmap: _FloatMap, pts: np.ndarray, weights: dict) -> np.ndarray:
    """Weighted sum of f over offset lattices, one batched evaluation."""
    items = list(weights.items())
    offs = np.array([o for o, _ in items], dtype=float).T
    coef = np.array([c for _, c in items])
    n, p = pts.shape
    k = offs.shape[1]
    big = (pts[:, :, None] + offs[:, None, :]).reshape(n, p * k)
    vals = fmap.eval(big).reshape(-1, p, k)
    return vals @ coef


def _fd_lap(fmap: _FloatMap, pts: np.ndarray, h: float) -> np.ndarray:
    return _apply_weights(fmap, pts, _lap_weights(pts.shape[0], h))


def _fd_bilap(fmap: _FloatMap, pts: np.ndarray, h: float) -> np.ndarray:
    lw = _lap_weights(pts.shape[0], h)
    if not fmap.normalize:
        return _apply_weights(fmap, pts, _convolve(lw, lw))
    total = None
    for off, c in lw.items():
        centers = _unit(pts + np.array(off, dtype=float)[:, None])
        piece = c * _apply_weights(fmap, centers, lw)
        total = piece if total is None else total + piece
    return total


def _fd_grad(fmap: _FloatMap, pts: np.ndarray, h: float) -> np.ndarray:
    """Central-difference gradients, shape (ncomp, npoints, n)."""
    n, p = pts.shape
    offs = np.zeros((n, 2 * n))
    for i in range(n):
        offs[i, 2 * i] = h
        offs[i, 2 * i + 1] = -h
    big = (pts[:, :, None] + offs[:, None, :]).reshape(n, p * 2 * n)
    vals = fmap.eval(big).reshape(-1, p, 2 * n)
    return (vals[:, :, 0::2] - vals[:, :, 1::2]) / (2.0 * h)


def _fd_density(fmap: _FloatMap, pts: np.ndarray, h: float) -> np.ndarray:
    g = _fd_grad(fmap, pts, h)
    return (g**2).sum(axis=(0, 2))


def _fd_grad_density(fmap: _FloatMap, pts: np.ndarray, h: float) -> np.ndarray:
    """Gradient of the energy density, shape (npoints, n).

    Spheres renormalize the shifted centers so the outer difference sees the
    degree-0 extension of the density; the leftover radial component is
    orthogonal to the tangential gradients it is later contracted with.
    """
    n, p = pts.shape
    rows = []
    for i in range(n):
        step = np.zeros((n, 1))
        step[i, 0] = h
        plus, minus = pts + step, pts - step
        if fmap.normalize:
            plus, minus = _unit(plus), _unit(minus)
        rows.append((_fd_density(fmap, plus, h) - _fd_density(fmap, minus, h)) / (2.0 * h))
    return np.stack(rows, axis=1)


def _assemble_bracket(u, equation, f, lap, bilap, grad, dens, gq):
    if equation == "harmonic":
        return lap + dens * f
    cross = (grad * gq[None, :, :]).sum(axis=2)
    e2 = (f * bilap).sum(axis=0)
    bracket = bilap + 2.0 * (cross + dens * lap) - (e2 - 2.0 * dens**2) * f
    if equation == "biharmonic":
        return bracket
    pc = float(u.domain.conformal_coefficient)
    return bracket - pc * (lap + dens * f)


def _fd_equation(u: SphereMap, pts: np.ndarray, h: float, equation: str) -> np.ndarray:
    """FD residual bracket of the named equation, shape (ncomp, npoints)."""
    fmap = _FloatMap(u)
    if fmap.normalize:
        f = fmap.eval(pts)
        lap = _fd_lap(fmap, pts, h)
        dens = _fd_density(fmap, pts, h)
        bilap = grad = gq = None
        if equation != "harmonic":
            bilap = _fd_bilap(fmap, pts, h)
            grad = _fd_grad(fmap, pts, h)
            gq = _fd_grad_density(fmap, pts, h)
        return _assemble_bracket(u, equation, f, lap, bilap, grad, dens, gq)
    grid = _FlatGrid(fmap, pts, h)
    n = grid.n
    zero = (0,) * n
    f = grid.at(zero)
    lap = grid.combo(grid.lap_int, 1.0 / h**2)
    dens = grid.density(zero)
    bilap = grad = gq = None
    if equation != "harmonic":
        bilap = grid.combo(grid.bilap_int, 1.0 / h**4)
        grad = grid.grad(zero)
        rows = []
        for j in range(n):
            plus = [0] * n
            plus[j] = 1
            minus = [0] * n
            minus[j] = -1
            rows.append(grid.density(tuple(plus)) - grid.density(tuple(minus)))
        gq = np.stack(rows, axis=1) / (2.0 * h)
    return _assemble_bracket(u, equation, f, lap, bilap, grad, dens, gq)


def _validate_h(h: float) -> None:
    if not 0 < h < 0.25:
        raise ValueError(f"stencil width must lie in (0, 0.25), got {h}")


def _require_clearance(domain: DomainSpec, pts: np.ndarray, h: float, reach: int) -> None:
    if domain.kind != PUNCTURED_EUCLIDEAN:
        return
    r = float(np.sqrt((pts**2).sum(axis=0)).min())
    need = (reach + 1) * h
    if r < need:
        raise ValueError(
            f"insufficient clearance: sample at radius {r:.3g} needs "
            f"r >= {need:.3g} for stencil width h = {h:.3g}"
        )


def _point_array(u: SphereMap, point) -> np.ndarray:
    if u.is_curve:
        return np.array([[float(point)]])
    arr = np.asarray(point, dtype=float).reshape(-1, 1)
    if arr.shape[0] != u.domain.ambient_nvars:
        raise ValueError(
            f"point has {arr.shape[0]} coordinates, "
            f"domain needs {u.domain.ambient_nvars}"
        )
    return arr


def fd_laplacian(u: SphereMap, point, h: float) -> np.ndarray:
    """Central second-difference Laplacian of each component at one point."""
    _validate_h(h)
    pts = _point_array(u, point)
    _require_clearance(u.domain, pts, h, reach=1)
    return _fd_lap(_FloatMap(u), pts, h)[:, 0]


def fd_bilaplacian(u: SphereMap, point, h: float) -> np.ndarray:
    """Composed-stencil bilaplacian of each component at one point."""
    _validate_h(h)
    pts = _point_array(u, point)
    _require_clearance(u.domain, pts, h, reach=2)
    return _fd_bilap(_FloatMap(u), pts, h)[:, 0]


# ---------------------------------------------------------------------------
# residual scans


def _fd_consistency(
    u: SphereMap, res, pts: np.ndarray, h: float, fd_points: int, equation: str
) -> Tuple[float, Optional[float], float, bool]:
    """Deviation |FD - exact| at 4h, 2h, h on a subset; gate at C h^2.

    The ladder descends toward h, not below: the composed fourth-order
    stencil amplifies roundoff like 1/h^4, and near-zero residuals lose
    their h^2 signature once h drops under a few 1e-3.
    """
    if fd_points < 1:
        return math.nan, None, math.nan, True
    sub = pts[:, :fd_points] if pts.ndim > 1 else pts[:fd_points]
    grid = sub if sub.ndim > 1 else sub[None, :]
    _require_clearance(u.domain, grid, 4.0 * h, reach=2)
    exact = res.eval_array(sub)
    devs = []
    for hk in (4.0 * h, 2.0 * h, h):
        approx = _fd_equation(u, grid, hk, equation)
        devs.append(float(np.abs(approx - exact).max()))
    d0, d1, d2 = devs
    if d2 <= _ROUNDOFF_FLOOR:
        return d2, None, _ROUNDOFF_FLOOR, True
    order = None
    if d1 > 0 and d2 > 0:
        order = 0.5 * (math.log2(d0 / d1) + math.log2(d1 / d2))
    # C fitted from the coarsest level; factor 2 absorbs higher-order terms
    gate = 2.0 * (d0 / (4.0 * h) ** 2) * h**2
    return d2, order, gate, d2 <= gate


def residual_scan(
    u: SphereMap,
    equation: str,
    plan: SamplePlan,
    tol: float = DEFAULT_NUMERIC_TOL,
    h: float = DEFAULT_H,
    fd_points: int = 4,
    case: Optional[str] = None,
) -> ResidualReport:
    """Exact verdict plus float max-norm scan plus FD oracle, one report."""
    try:
        residual_fn = _EQUATIONS[equation]
    except KeyError:
        known = ", ".join(sorted(_EQUATIONS))
        raise ValueError(f"unknown equation {equation!r}; known: {known}") from None
    _validate_h(h)
    res = residual_fn(u)
    witness = res.zero_witness()
    pts = plan.points()
    numeric_max = res.max_norm(pts)
    fd_dev, fd_order, fd_gate, fd_ok = _fd_consistency(u, res, pts, h, fd_points, equation)
    status = "zero" if witness is None else "nonzero"
    passed = witness is None and numeric_max < tol and fd_ok
    return ResidualReport(
        case=case if case is not None else u.name,
        equation=equation,
        status=status,
        witness=witness,
        numeric_max=numeric_max,
        numeric_tol=tol,
        fd_deviation=fd_dev,
        fd_order=fd_order,
        fd_gate=fd_gate,
        passed=passed,
    )


def verify_curve(
    gamma: SphereMap,
    plan: Optional[SamplePlan] = None,
    tol: float = DEFAULT_NUMERIC_TOL,
    h: float = DEFAULT_H,
    fd_points: int = 4,
) -> ResidualReport:
    """Arc-length bitension certificate with the geodesic exclusion.

    The exact check is an identity in the curve's coefficient ring, so for
    the two-frequency family it holds for every admissible squared frequency
    at once.  Geodesics solve the equation trivially and are rejected.
    """
    if gamma.domain.kind != ARC_LENGTH:
        raise UnsupportedDomain(
            f"verify_curve needs an arc-length curve, got {gamma.domain!r}"
        )
    if tension_residual(gamma).is_zero():
        return ResidualReport(
            case=gamma.name,
            equation="biharmonic",
            status="geodesic",
            witness="tension vanishes identically: a geodesic, not a proper solution",
            numeric_max=math.nan,
            numeric_tol=tol,
            fd_deviation=math.nan,
            fd_order=None,
            fd_gate=math.nan,
            passed=False,
        )
    if plan is None:
        plan = SamplePlan(arc_length(), count=32, seed=0)
    return residual_scan(gamma, "biharmonic", plan, tol=tol, h=h, fd_points=fd_points)


# ---------------------------------------------------------------------------
# the full solution matrix

# unbounded dimension ranges are capped at m = 10 here; pass dimensions=...
# to certify_solution_suite to probe other slices
_DEFAULT_FLAT_DIMS: Dict[str, Tuple[int, ...]] = {
    "pi_cone": (4, 5, 6),
    "mu_cone": tuple(range(3, 11)),
    "nu_cone": tuple(range(2, 11)),
    "pi_mu_join": (4, 5, 6, 7, 8),
    "pi_nu_join": tuple(range(2, 11)),
    "mu_nu_join": tuple(range(3, 11)),
}

_FLAT_CONES = (("pi_cone", make_pi), ("mu_cone", make_mu), ("nu_cone", make_nu))
_FLAT_JOINS = (
    ("pi_mu_join", make_pi, make_mu),
    ("pi_nu_join", make_pi, make_nu),
    ("mu_nu_join", make_mu, make_nu),
)


class _EigenmapPool:
    """One instance per base eigenmap, so kit caches are shared across cases."""

    def __init__(self):
        self.identity = {m: make_identity_sphere(m) for m in range(1, 6)}
        self.quad = {m: make_quadratic_eigenmap(m) for m in range(2, 7)}
        self.cubic = {m: make_cubic_eigenmap(m) for m in range(2, 6)}
        self.hopf = make_hopf_eigenmap()

    def closed_cone_bases(self):
        return (
            *(self.identity[m] for m in (2, 3, 4, 5)),
            *(self.quad[m] for m in (2, 3, 4)),
            *(self.cubic[m] for m in (2, 3)),
            self.hopf,
        )

    def closed_join_pairs(self):
        return (
            (self.identity[2], self.quad[2]),
            (self.identity[3], self.quad[3]),
            (self.quad[2], self.cubic[2]),
        )

    def conformal_cone_bases(self):
        return (
            *(self.identity[m] for m in (1, 2, 3, 4)),
            *(self.quad[m] for m in (2, 3, 4, 5, 6)),
            *(self.cubic[m] for m in (2, 3, 4, 5)),
            self.hopf,
        )

    def conformal_join_pairs(self):
        return (
            (self.identity[2], self.quad[2]),
            (self.identity[3], self.quad[3]),
            (self.quad[4], self.cubic[4]),
            (self.identity[5], self.cubic[5]),
        )


def _shifted(t, delta):
    if delta is None:
        return t
    moved = t + delta
    if not 0 < moved < 1 or moved == t:
        moved = t - delta
    return moved


def _suite_cases(dimensions, delta) -> Iterable[Tuple[str, str, Callable]]:
    """Yield (label, equation, thunk); thunks may raise InadmissibleAngle."""
    flat_cache: Dict[Tuple[Callable, int], SphereMap] = {}

    def flat_base(maker: Callable, m: int) -> SphereMap:
        key = (maker, m)
        if key not in flat_cache:
            flat_cache[key] = maker(m)
        return flat_cache[key]

    for family, maker in _FLAT_CONES:
        dims = tuple(dimensions) if dimensions is not None else _DEFAULT_FLAT_DIMS[family]
        for m in dims:
            def build(maker=maker, m=m):
                v = flat_base(maker, m)
                sol, _ = solve_cone_biharmonic(v, certify=False)
                return cone(v, _shifted(sol.t, delta))

            yield f"{family} m={m}", "biharmonic", build
    for family, left, right in _FLAT_JOINS:
        dims = tuple(dimensions) if dimensions is not None else _DEFAULT_FLAT_DIMS[family]
        for m in dims:
            def build(left=left, right=right, m=m):
                v1, v2 = flat_base(left, m), flat_base(right, m)
                sol, _ = solve_join_biharmonic(v1, v2, certify=False)
                return join(v1, v2, _shifted(sol.t, delta))

            yield f"{family} m={m}", "biharmonic", build
    pool = _EigenmapPool()
    for base in pool.closed_cone_bases():
        def build(base=base):
            sol, _ = solve_cone_biharmonic(base, certify=False)
            return cone(base, _shifted(sol.t, delta))

        yield f"closed_cone {base.name}", "biharmonic", build
    for v1, v2 in pool.closed_join_pairs():
        def build(v1=v1, v2=v2):
            sol, _ = solve_join_biharmonic(v1, v2, certify=False)
            return join(v1, v2, _shifted(sol.t, delta))

        yield f"closed_join ({v1.name}, {v2.name})", "biharmonic", build
    for base in pool.conformal_cone_bases():
        def build(base=base):
            sol = solve_cone_cbiharmonic(base, certify=False)
            return cone(base, _shifted(sol.t, delta))

        yield f"conformal_cone {base.name}", "cbiharmonic", build
    for v1, v2 in pool.conformal_join_pairs():
        def build(v1=v1, v2=v2):
            sol = solve_join_cbiharmonic(v1, v2, certify=False)
            return join(v1, v2, _shifted(sol.t, delta))

        yield f"conformal_join ({v1.name}, {v2.name})", "cbiharmonic", build


def _skip_report(label: str, equation: str, message: str) -> ResidualReport:
    return ResidualReport(
        case=label,
        equation=equation,
        status="inadmissible",
        witness=message,
        numeric_max=math.nan,
        numeric_tol=math.nan,
        fd_deviation=math.nan,
        fd_order=None,
        fd_gate=math.nan,
        passed=False,
    )


@dataclass(frozen=True)
class SuiteSummary:
    """All per-case reports from one suite run plus the expected verdict."""

    reports: Tuple[ResidualReport, ...]
    expected: str

    @property
    def skipped(self) -> Tuple[ResidualReport, ...]:
        return tuple(r for r in self.reports if r.status == "inadmissible")

    @property
    def consistent(self) -> bool:
        """Every non-skipped case matches the expected verdict.

        Expected nonzero (perturbed controls) additionally demands a numeric
        max above 100x the zero tolerance, so the controls are never within
        rounding of passing.
        """
        for r in self.reports:
            if r.status == "inadmissible":
                continue
            if self.expected == "zero":
                if not r.passed:
                    return False
            else:
                if r.status != "nonzero":
                    return False
                if not r.numeric_max > 100.0 * r.numeric_tol:
                    return False
        return True

    def counts(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for r in self.reports:
            out[r.status] = out.get(r.status, 0) + 1
        return out


def certify_solution_suite(
    perturb=None,
    dimensions: Optional[Sequence[int]] = None,
    seed: int = 0,
    count: int = 8,
    h: float = DEFAULT_H,
    fd_points: int = 2,
    tol: float = DEFAULT_NUMERIC_TOL,
) -> SuiteSummary:
    """Scan the full solution matrix, one report per case.

    With perturb=None every case runs at its solved angle and is expected to
    certify zero.  A nonzero perturb shifts every mixing angle by that amount
    (flipping sign when the shift would leave (0,1)), turning the matrix into
    a negative-control sweep expected to be nonzero everywhere; curve cases
    carry no mixing angle and are omitted from that sweep.

    dimensions replaces the per-family dimension lists for the flat families;
    combinations whose solved angle falls outside (0,1) become skipped
    reports with status "inadmissible" rather than errors.
    """
    delta = None if perturb is None else RAT(perturb)
    if delta == 0:
        delta = None
    reports = []
    for label, equation, build in _suite_cases(dimensions, delta):
        try:
            u = build()
        except InadmissibleAngle as exc:
            reports.append(_skip_report(label, equation, str(exc)))
            continue
        plan = SamplePlan(u.domain, count=count, seed=seed)
        reports.append(
            residual_scan(
                u, equation, plan, tol=tol, h=h, fd_points=fd_points,
                case=f"{label}: {u.name}",
            )
        )
    if delta is None:
        curve_plan = SamplePlan(arc_length(), count=count, seed=seed)
        for gamma in (make_curve_s2(), make_curve_s3(RAT(3, 2))):
            reports.append(
                verify_curve(gamma, plan=curve_plan, tol=tol, h=h, fd_points=fd_points)
            )
    return SuiteSummary(tuple(reports), expected="zero" if delta is None else "nonzero")
