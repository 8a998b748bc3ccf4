"""Angle solvers: formula reproduction, admissibility, and certificates."""

import math

import numpy as np
import pytest

from bitension._rational import RAT
from bitension.catalog import (
    Components,
    Scaled,
    SphereMap,
    cone,
    constant_map,
    join,
    make_cubic_eigenmap,
    make_curve_s2,
    make_hopf_eigenmap,
    make_identity_sphere,
    make_mu,
    make_nu,
    make_pi,
    make_quadratic_eigenmap,
    punctured,
    round_sphere,
)
from bitension.deformer import (
    ConstraintReport,
    admissible_range,
    degree_bound_admissible,
    density_shape,
    solve_cone_biharmonic,
    solve_cone_cbiharmonic,
    solve_join_biharmonic,
    solve_join_cbiharmonic,
)
from bitension.errors import (
    CertificationError,
    InadmissibleAngle,
    UnsupportedDensity,
    UnsupportedDomain,
)
from bitension.functionals import bitension_residual, tension_residual
from bitension.symbolic import MultiPoly, RadialExpr


class TestDensityShape:
    def test_constant(self):
        dom = round_sphere(3)
        kind, value = density_shape(dom, RadialExpr.const(4, 8))
        assert (kind, value) == ("constant", 8)

    def test_inverse_square(self):
        dom = punctured(5)
        q = RadialExpr.r_power(5, -2) * 4
        kind, value = density_shape(dom, q)
        assert (kind, value) == ("inverse_square", 4)

    def test_inverse_square_recognized_through_blowup(self):
        # c * sos / r^4 is the same density in an inflated representation
        q = RadialExpr(3, {4: MultiPoly.sum_of_squares(3) * RAT(7)})
        kind, value = density_shape(punctured(3), q)
        assert (kind, value) == ("inverse_square", 7)

    def test_other(self):
        q = RadialExpr(3, {2: MultiPoly.variable(3, 0) ** 2})
        kind, value = density_shape(punctured(3), q)
        assert kind == "other" and value is None

    def test_zero_density(self):
        kind, value = density_shape(punctured(3), RadialExpr.zero(3))
        assert (kind, value) == ("constant", 0)

    def test_curve_density(self):
        u = make_curve_s2()
        kind, value = density_shape(u.domain, u.flatten()[0].expr.ring.const(1))
        assert (kind, value) == ("constant", 1)


class TestConeBiharmonic:
    @pytest.mark.parametrize("m", [4, 5, 6])
    def test_pi_formula(self, m):
        sol, report = solve_cone_biharmonic(make_pi(m))
        assert sol.t == RAT(3 * (m - 3), 2 * (m - 1))
        assert report.satisfied
        assert report.solved_t is sol

    @pytest.mark.parametrize("m", [2, 3, 7, 9])
    def test_pi_inadmissible_dimensions(self, m):
        with pytest.raises(InadmissibleAngle) as exc:
            solve_cone_biharmonic(make_pi(m))
        assert exc.value.solution.t == RAT(3 * (m - 3), 2 * (m - 1))

    @pytest.mark.parametrize("m", [3, 4, 6, 9])
    def test_mu_formula(self, m):
        sol, _ = solve_cone_biharmonic(make_mu(m))
        assert sol.t == RAT(m - 2, m)

    def test_mu_rejected_below_three(self):
        with pytest.raises(InadmissibleAngle):
            solve_cone_biharmonic(make_mu(2))

    @pytest.mark.parametrize("m", [2, 3, 5, 8])
    def test_nu_formula(self, m):
        sol, _ = solve_cone_biharmonic(make_nu(m))
        assert sol.t == RAT(5 * (m - 1), 6 * (m + 1))

    def test_critical_dimension_note(self):
        sol, _ = solve_cone_biharmonic(make_pi(4))
        assert sol.t == RAT(1, 2)
        assert "critical dimension" in sol.dimension_note
        sol, _ = solve_cone_biharmonic(make_pi(5))
        assert sol.dimension_note == ""

    def test_pi_angle_monotone_in_dimension(self):
        ts = [solve_cone_biharmonic(make_pi(m), certify=False)[0].t for m in (4, 5, 6)]
        assert ts[0] < ts[1] < ts[2]

    @pytest.mark.parametrize(
        "base",
        [make_identity_sphere(3), make_quadratic_eigenmap(2), make_hopf_eigenmap()],
        ids=lambda u: u.name,
    )
    def test_closed_domain_half(self, base):
        sol, report = solve_cone_biharmonic(base)
        assert sol.t == RAT(1, 2)
        assert report.satisfied
        assert sol.dimension_note == ""

    def test_non_harmonic_base_rejected(self):
        with pytest.raises(CertificationError, match="not harmonic"):
            solve_cone_biharmonic(make_curve_s2())

    def test_constant_base_is_not_proper(self):
        with pytest.raises(CertificationError, match="not a proper"):
            solve_cone_biharmonic(constant_map(punctured(3)))

    def test_certify_flag_skips_residual_pass_only(self):
        fast, _ = solve_cone_biharmonic(make_nu(4), certify=False)
        slow, _ = solve_cone_biharmonic(make_nu(4), certify=True)
        assert fast == slow

    def test_unsupported_density_reported(self, monkeypatch):
        import bitension.deformer as deformer

        monkeypatch.setattr(deformer, "density_shape", lambda d, q: ("other", None))
        with pytest.raises(UnsupportedDensity, match="neither constant nor"):
            solve_cone_biharmonic(make_pi(5), certify=False)
        with pytest.raises(UnsupportedDensity, match="closed-domain"):
            solve_cone_biharmonic(make_identity_sphere(2), certify=False)


class TestJoinBiharmonic:
    @pytest.mark.parametrize("m", [4, 5, 6, 7, 8])
    def test_pi_mu_formula(self, m):
        sol, report = solve_join_biharmonic(make_pi(m), make_mu(m), certify=m < 7)
        assert sol.cos_double_angle == RAT(2 * (m - 4), m + 1)
        assert report.satisfied

    def test_pi_mu_boundary_m9(self):
        with pytest.raises(InadmissibleAngle):
            solve_join_biharmonic(make_pi(9), make_mu(9), certify=False)

    def test_pi_mu_below_stated_range_still_certifies(self):
        # the angle is algebraically admissible at m = 3 and the residual
        # certifies; the published range {4..8} is the narrower claim
        sol, _ = solve_join_biharmonic(make_pi(3), make_mu(3))
        assert sol.cos_double_angle == RAT(-1, 2)

    @pytest.mark.parametrize("m", [2, 3, 5, 10])
    def test_pi_nu_formula(self, m):
        sol, _ = solve_join_biharmonic(make_pi(m), make_nu(m), certify=m < 7)
        assert sol.cos_double_angle == RAT(m - 4, m + 2)

    @pytest.mark.parametrize("m", [3, 4, 7, 10])
    def test_mu_nu_formula(self, m):
        sol, _ = solve_join_biharmonic(make_mu(m), make_nu(m), certify=m < 7)
        assert sol.cos_double_angle == RAT(2 * (m - 4), m + 3)

    def test_mu_nu_boundary_m11(self):
        with pytest.raises(InadmissibleAngle):
            solve_join_biharmonic(make_mu(11), make_nu(11), certify=False)

    def test_swapped_factors_give_complementary_angle(self):
        a, _ = solve_join_biharmonic(make_pi(5), make_mu(5))
        b, _ = solve_join_biharmonic(make_mu(5), make_pi(5))
        assert a.t + b.t == 1

    def test_closed_join_half(self):
        sol, report = solve_join_biharmonic(
            make_identity_sphere(2), make_quadratic_eigenmap(2)
        )
        assert sol.t == RAT(1, 2)
        assert report.satisfied

    def test_equal_densities_rejected(self):
        with pytest.raises(ValueError, match="harmonic join"):
            solve_join_biharmonic(make_identity_sphere(2), make_identity_sphere(2))

    def test_domain_mismatch(self):
        with pytest.raises(ValueError, match="live on"):
            solve_join_biharmonic(make_pi(4), make_mu(5))

    def test_non_harmonic_factor_rejected(self):
        bent = cone(make_pi(5), RAT(3, 4))
        with pytest.raises(CertificationError, match="not harmonic"):
            solve_join_biharmonic(bent, cone(make_mu(5), RAT(1, 2)))


class TestConeConformal:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_isometric_immersion_admissible(self, m):
        sol = solve_cone_cbiharmonic(make_identity_sphere(m))
        assert sol.t == RAT((m - 1) * (m - 3), 3) / m + RAT(1, 2)

    @pytest.mark.parametrize("m", [5, 6, 8])
    def test_isometric_immersion_inadmissible(self, m):
        with pytest.raises(InadmissibleAngle):
            solve_cone_cbiharmonic(make_identity_sphere(m), certify=False)

    def test_quadratic_m2(self):
        sol = solve_cone_cbiharmonic(make_quadratic_eigenmap(2))
        assert sol.t == RAT(4, 9)

    def test_cubic_m5(self):
        # lambda = 3 * 7 = 21, t = 8/63 + 1/2 = 79/126
        sol = solve_cone_cbiharmonic(make_cubic_eigenmap(5))
        assert sol.t == RAT(79, 126)
        assert degree_bound_admissible(3, 5)

    def test_m3_reduces_to_half(self):
        sol = solve_cone_cbiharmonic(make_hopf_eigenmap())
        assert sol.t == RAT(1, 2)

    def test_flat_domain_rejected(self):
        with pytest.raises(UnsupportedDomain):
            solve_cone_cbiharmonic(make_pi(4))

    def test_non_eigenmap_rejected(self):
        with pytest.raises(CertificationError, match="not harmonic"):
            solve_cone_cbiharmonic(cone(make_identity_sphere(4), RAT(3, 4)))


class TestJoinConformal:
    def test_identity_quadratic_m2(self):
        sol = solve_join_cbiharmonic(
            make_identity_sphere(2), make_quadratic_eigenmap(2)
        )
        assert sol.cos_double_angle == RAT(-1, 6)

    def test_m3_gives_half_for_any_pair(self):
        sol = solve_join_cbiharmonic(make_identity_sphere(3), make_quadratic_eigenmap(3))
        assert sol.t == RAT(1, 2)

    def test_identity_cubic_m5(self):
        # lambda1 = 5, lambda2 = 21: cos 2b = -(16/3)/(-16) = 1/3
        sol = solve_join_cbiharmonic(make_identity_sphere(5), make_cubic_eigenmap(5))
        assert sol.cos_double_angle == RAT(1, 3)

    def test_equal_eigenvalues_rejected(self):
        with pytest.raises(ValueError, match="equal eigenvalues"):
            solve_join_cbiharmonic(
                make_quadratic_eigenmap(3), make_quadratic_eigenmap(3)
            )

    def test_inadmissible_when_eigenvalues_too_close(self):
        # m = 6: factor = 10; identity lambda = 6, quadratic lambda = 14:
        # cos 2b = -10/(6-14) = 5/4 out of range
        with pytest.raises(InadmissibleAngle):
            solve_join_cbiharmonic(
                make_identity_sphere(6), make_quadratic_eigenmap(6), certify=False
            )

    def test_flat_domain_rejected(self):
        with pytest.raises(UnsupportedDomain):
            solve_join_cbiharmonic(make_pi(4), make_mu(4))


class TestDegreeBound:
    def test_exact_boundary_matches_direct_substitution(self):
        for m in range(2, 11):
            for k in range(1, 11):
                lam = k * (k + m - 1)
                t = RAT((m - 1) * (m - 3), 3) / lam + RAT(1, 2)
                assert degree_bound_admissible(k, m) == (t < 1), (k, m)

    def test_negative_radicand_short_circuit(self):
        # m = 2 makes 11 m^2 - 38 m + 27 negative: every degree passes
        assert all(degree_bound_admissible(k, 2) for k in range(1, 20))

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            degree_bound_admissible(0, 3)


class TestAdmissibleRange:
    def test_stated_ranges(self):
        assert admissible_range("pi_cone") == (4, 6)
        assert admissible_range("mu_cone") == (3, None)
        assert admissible_range("nu_cone") == (2, None)
        assert admissible_range("pi_mu_join") == (4, 8)
        assert admissible_range("pi_nu_join") == (2, None)
        assert admissible_range("mu_nu_join") == (3, 10)
        assert admissible_range("small_hypersphere_cbiharmonic") == (1, 4)

    def test_aliases(self):
        assert admissible_range("pi") == admissible_range("pi_cone")
        assert admissible_range("w1") == admissible_range("pi_mu_join")
        assert admissible_range("w2") == admissible_range("pi_nu_join")
        assert admissible_range("w3") == admissible_range("mu_nu_join")

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="unknown family"):
            admissible_range("sigma")


class TestRoundTripAndDegeneration:
    @pytest.mark.parametrize("m", [4, 5, 6])
    def test_round_trip_with_perturbation_controls(self, m):
        sol, _ = solve_cone_biharmonic(make_pi(m))
        for dt in (RAT(1, 100), RAT(-1, 100)):
            t = sol.t + dt
            if 0 < t < 1:
                assert not bitension_residual(cone(make_pi(m), t)).is_zero()

    def test_solver_constraint_consistency(self):
        _, report = solve_cone_biharmonic(make_mu(4))
        assert report.satisfied
        assert (report.lhs - report.rhs).is_zero()

    def test_endpoint_degeneration(self):
        # near t = 1 the residual tends to that of the flattened map (v, 0),
        # which is exactly harmonic; the rate is sqrt(1-t) because the added
        # component keeps an O(1) bracket under a vanishing sqrt(1-t) amplitude
        v = make_pi(5)
        rng = np.random.default_rng(13)
        pts = rng.normal(size=(5, 30))
        pts /= np.sqrt((pts**2).sum(axis=0))  # unit radius: inside [1/2, 2]
        norms = []
        for eps in (RAT(1, 1000), RAT(1, 10000)):
            u = cone(v, 1 - eps)
            norms.append(bitension_residual(u).max_norm(pts))
        assert 2.5 < norms[0] / norms[1] < 4.0  # sqrt(10) scaling

        flat = SphereMap(
            v.domain,
            v.target_dim + 1,
            Components(v.flatten() + (Scaled(RAT(1), RadialExpr.zero(5)),)),
            name="flattened",
        )
        assert tension_residual(flat).is_zero()
