"""Catalog construction, certification, and combinator tests."""

from fractions import Fraction

import numpy as np
import pytest

from bitension.catalog import (
    AngleSolution,
    Components,
    DomainSpec,
    PUNCTURED_EUCLIDEAN,
    ROUND_SPHERE,
    arc_length,
    cone,
    constant_map,
    join,
    make_cubic_eigenmap,
    make_curve_s2,
    make_curve_s3,
    make_eigenmap,
    make_hopf_eigenmap,
    make_identity_sphere,
    make_mu,
    make_nu,
    make_pi,
    make_quadratic_eigenmap,
    punctured,
    round_sphere,
)
from bitension.errors import CertificationError, SphereCalculusError
from bitension.symbolic import MultiPoly, RadialExpr


def density_of(u):
    return u._density


@pytest.mark.parametrize("m", [2, 3, 4, 7])
def test_radial_family_densities(m):
    expected = {
        make_pi(m): m - 1,
        make_mu(m): 2 * m,
        make_nu(m): 3 * (m + 1),
    }
    for u, c in expected.items():
        target = RadialExpr(m, {2: MultiPoly.const(m, c)})
        assert (density_of(u) - target).is_zero()


def test_component_counts_and_targets():
    assert make_pi(5).target_dim == 4
    assert len(make_mu(3).flatten()) == 9
    assert len(make_nu(2).flatten()) == 8
    assert make_hopf_eigenmap().target_dim == 2


@pytest.mark.parametrize("ctor", [make_pi, make_mu, make_nu])
def test_radial_family_minimum_dimension(ctor):
    with pytest.raises(ValueError):
        ctor(1)


@pytest.mark.parametrize(
    "u, lam, k",
    [
        (make_identity_sphere(3), 3, 1),
        (make_identity_sphere(1), 1, 1),
        (make_quadratic_eigenmap(2), 6, 2),
        (make_quadratic_eigenmap(4), 10, 2),
        (make_cubic_eigenmap(2), 12, 3),
        (make_hopf_eigenmap(), 8, 2),
    ],
)
def test_eigenmap_eigenvalues(u, lam, k):
    assert u.eigenvalue == lam
    assert u.degree == k
    m = u.domain.dim
    assert lam == k * (k + m - 1)
    nv = u.domain.ambient_nvars
    assert (density_of(u) - RadialExpr.const(nv, lam)).is_zero()


def test_eigenmap_components_satisfy_eigenvalue_equation():
    u = make_quadratic_eigenmap(3)
    dom = u.domain
    lam = u.eigenvalue
    for part in u.flatten():
        residual = dom.lap(part.expr) + part.expr * lam
        assert residual.is_zero()


class TestEigenmapRejections:
    def test_non_homogeneous(self):
        x0 = MultiPoly.variable(3, 0)
        with pytest.raises(CertificationError, match="homogeneous"):
            make_eigenmap([x0 + x0 * x0], 2)

    def test_non_harmonic(self):
        x0 = MultiPoly.variable(3, 0)
        with pytest.raises(CertificationError, match="harmonic"):
            make_eigenmap([x0 * x0], 2)

    def test_wrong_norm(self):
        x0, x1, x2 = (MultiPoly.variable(3, i) for i in range(3))
        bad = [x0 * x1, x1 * x2, x0 * x2, x0 * x0 - x1 * x1]
        with pytest.raises(CertificationError, match="r\\^"):
            make_eigenmap(bad, 2)


def test_cone_parameter_range():
    v = make_pi(5)
    with pytest.raises(ValueError):
        cone(v, 0)
    with pytest.raises(ValueError):
        cone(v, 1)
    with pytest.raises(ValueError):
        cone(v, Fraction(5, 4))
    q = cone(v, Fraction(3, 4))
    assert q.target_dim == 5
    assert q.name == "cone(pi(5), 3/4)"


def test_join_requires_shared_domain():
    with pytest.raises(ValueError):
        join(make_pi(4), make_pi(5), Fraction(1, 2))
    w = join(make_pi(5), make_mu(5), Fraction(1, 3))
    assert w.target_dim == 4 + 24 + 1


@pytest.mark.parametrize(
    "u",
    [
        lambda: cone(make_pi(4), Fraction(2, 5)),
        lambda: join(make_pi(3), make_nu(3), Fraction(1, 7)),
        lambda: cone(cone(make_mu(3), Fraction(1, 3)), Fraction(1, 2)),
    ],
)
def test_flattened_maps_land_on_unit_sphere(u):
    u = u()
    rng = np.random.default_rng(7)
    m = u.domain.ambient_nvars
    coords = rng.uniform(0.5, 2.0, size=(m, 40)) * rng.choice([-1.0, 1.0], size=(m, 40))
    norms = np.zeros(40)
    for part in u.flatten():
        vals = part.expr.eval_array(coords)
        norms += float(part.radicand) * vals**2
    assert np.max(np.abs(norms - 1.0)) < 1e-14


def test_flatten_radicands():
    q = cone(make_pi(5), Fraction(3, 4))
    parts = q.flatten()
    assert all(p.radicand == Fraction(3, 4) for p in parts[:-1])
    assert parts[-1].radicand == Fraction(1, 4)
    w = join(make_identity_sphere(2), make_quadratic_eigenmap(2), Fraction(1, 2))
    rads = {p.radicand for p in w.flatten()}
    assert rads == {Fraction(1, 2), Fraction(1, 2) * Fraction(1, 6)}


class TestCurves:
    def test_s2_curve_certified(self):
        c = make_curve_s2()
        assert c.target_dim == 2
        assert c.curve_param is None

    def test_s3_curve_family_certificates(self):
        c = make_curve_s3(Fraction(3, 2))
        assert c.curve_param == Fraction(3, 2)
        assert c.target_dim == 3

    @pytest.mark.parametrize("bad", [1, 0, 2, Fraction(5, 2), -1])
    def test_s3_rejects_bad_frequencies(self, bad):
        with pytest.raises(ValueError):
            make_curve_s3(bad)

    def test_curve_cone_flatten(self):
        q = cone(make_curve_s2(), Fraction(1, 3))
        parts = q.flatten()
        assert len(parts) == 4
        assert parts[-1].radicand == Fraction(2, 3)


def test_structural_equality():
    a = cone(make_pi(5), Fraction(3, 4))
    b = cone(make_pi(5), Fraction(3, 4))
    c = cone(make_pi(5), Fraction(1, 2))
    assert a.structural_eq(b)
    assert not a.structural_eq(c)
    assert not a.structural_eq(make_pi(5))
    assert make_curve_s3(Fraction(3, 2)).structural_eq(make_curve_s3(Fraction(3, 2)))
    assert not make_curve_s3(Fraction(3, 2)).structural_eq(make_curve_s3(Fraction(1, 2)))


def test_angle_solution_admissibility():
    sol = AngleSolution(Fraction(3, 4), "test")
    assert sol.admissible
    assert sol.cos_double_angle == Fraction(-1, 2)
    assert not AngleSolution(Fraction(5, 4), "test").admissible
    assert not AngleSolution(0, "test").admissible
    recovered = AngleSolution.from_cos_double_angle(Fraction(-1, 2), "test")
    assert recovered.t == Fraction(3, 4)


class TestDomainSpec:
    def test_curvature_data(self):
        s5 = round_sphere(5)
        assert s5.ric_coefficient == 4
        assert s5.scal == 20
        assert s5.conformal_coefficient == Fraction(16, 3)
        assert round_sphere(3).conformal_coefficient == 0
        assert round_sphere(1).conformal_coefficient == 0
        e4 = punctured(4)
        assert e4.ric_coefficient == 0
        assert e4.conformal_coefficient == 0

    def test_ambient_dimensions(self):
        assert punctured(4).ambient_nvars == 4
        assert round_sphere(4).ambient_nvars == 5

    def test_kind_validation(self):
        with pytest.raises(ValueError):
            DomainSpec("torus", 2)
        with pytest.raises(ValueError):
            DomainSpec(PUNCTURED_EUCLIDEAN, 0)
        with pytest.raises(ValueError):
            DomainSpec("arc_length_interval", 2)

    def test_degree0_guard_carries_witness(self):
        dom = round_sphere(2)
        with pytest.raises(SphereCalculusError, match="witness"):
            dom.lap(RadialExpr.variable(3, 0))

    def test_sphere_calculus_matches_restriction(self):
        # lap of x0^2/r^2 on S^2, then evaluated at a unit point, equals the
        # ambient formula times r^2 evaluated there
        dom = round_sphere(2)
        e = RadialExpr(3, {2: MultiPoly.variable(3, 0) ** 2})
        lap = dom.lap(e)
        assert lap.eval_exact([Fraction(3, 5), Fraction(4, 5), 0]) == e.lap().eval_exact(
            [Fraction(3, 5), Fraction(4, 5), 0]
        )


def test_constant_map_density_vanishes():
    u = constant_map(punctured(3))
    assert density_of(u).is_zero()
    c = constant_map(arc_length())
    assert c.flatten()[0].expr.is_zero() is False


def test_unit_norm_failure_reports_witness():
    from bitension.catalog import Scaled, SphereMap

    parts = (Scaled(1, RadialExpr.variable(2, 0)),)
    with pytest.raises(CertificationError, match="unit-norm"):
        SphereMap(punctured(2), 0, Components(parts), name="bad")
