import dataclasses

import numpy as np
import pytest

from helpers import (
    bisect,
    make_p1,
    mild_threshold_equation,
    no_concession_equation,
    quad_root_positive,
)
from repgame import (
    AssumptionError,
    BoundedCDF,
    DomainError,
    InconsistentInputsError,
    bound_D_lower,
    effect_D_mild,
    estimator_H,
    estimator_total,
    limit_H_degenerate,
    no_concession_equilibrium,
    repression_probabilities,
    solve_mild,
    solve_no_concession,
)
from repgame.verify import draw_params

# Frozen oracle values for the benchmark parameters. With uniform G and H the
# threshold equation reduces to 0.4 c^2 + 0.87 c - 0.36 = 0 and the
# no-concession variant to 0.4 c^2 + 0.71 c - 0.6 = 0.
C_TILDE_P1 = quad_root_positive(0.4, 0.87, -0.36)
KAPPA_P1 = 112.0 / 247.0  # (0.35/0.65) * (1.6/1.9)
Q_PRIME_P1 = 16.0 / 35.0
C_TILDE_NO_CONCESSION_P1 = 0.625


class TestOracles:
    """The independent oracles must agree with each other before they are
    used to certify the solver."""

    def test_quadratic_matches_frozen_constant(self):
        assert C_TILDE_P1 == pytest.approx(0.3556411, abs=1e-7)

    def test_bisection_agrees_with_quadratic(self):
        root = bisect(mild_threshold_equation(make_p1()), 0.0, 0.6)
        assert root == pytest.approx(C_TILDE_P1, abs=1e-12)

    def test_no_concession_quadratic_is_exact(self):
        assert quad_root_positive(0.4, 0.71, -0.6) == pytest.approx(0.625, abs=1e-15)
        root = bisect(no_concession_equation(make_p1()), 0.0, 1.0)
        assert root == pytest.approx(0.625, abs=1e-12)


class TestSolveMildP1:
    def test_threshold_matches_bisection_oracle(self, p1):
        eq = solve_mild(p1)
        oracle = bisect(mild_threshold_equation(p1), 0.0, p1.alpha_G)
        assert eq.c_tilde == pytest.approx(oracle, abs=1e-8)

    def test_threshold_value(self, p1):
        assert solve_mild(p1).c_tilde == pytest.approx(C_TILDE_P1, abs=1e-10)

    def test_kappa_closed_form(self, p1):
        assert solve_mild(p1).kappa == pytest.approx(KAPPA_P1, abs=1e-14)

    def test_posteriors(self, p1):
        eq = solve_mild(p1)
        assert eq.q_prime == pytest.approx(Q_PRIME_P1, abs=1e-12)
        assert eq.mu_R.mu_N == 0.0
        # no-news posterior keeps the type odds of the prior
        assert eq.mu_NN.mu_G / eq.mu_NN.mu_B == pytest.approx(0.65 / 0.35, rel=1e-12)
        assert eq.gamma_prime == pytest.approx(
            0.4 * C_TILDE_P1 / (0.4 * C_TILDE_P1 + 0.6), abs=1e-10
        )

    def test_protest_probabilities(self, p1):
        eq = solve_mild(p1)
        assert eq.p_R == pytest.approx(0.6, abs=1e-12)
        assert eq.p_NN == pytest.approx(0.6 - C_TILDE_P1, abs=1e-10)
        assert eq.p_prior == pytest.approx(0.51, abs=1e-12)

    def test_repression_probabilities(self, p1):
        eq = solve_mild(p1)
        revealed = (KAPPA_P1 * 0.65 + 0.35) * (1.0 - C_TILDE_P1)
        assert eq.prob_revealed == pytest.approx(revealed, abs=1e-9)
        assert eq.prob_concealed == pytest.approx(C_TILDE_P1, abs=1e-10)
        assert eq.prob_total == pytest.approx(revealed + C_TILDE_P1, abs=1e-9)
        assert eq.prob_revealed_given_B == pytest.approx(1.0 - C_TILDE_P1, abs=1e-10)
        assert eq.prob_revealed_given_G == pytest.approx(
            KAPPA_P1 * (1.0 - C_TILDE_P1), abs=1e-10
        )
        assert eq.prob_concession == pytest.approx(1.0 - eq.prob_total, abs=1e-15)

    def test_recomputed_probabilities_match(self, p1):
        eq = solve_mild(p1)
        probs = repression_probabilities(eq, p1)
        assert probs.prob_revealed == eq.prob_revealed
        assert probs.prob_total == eq.prob_total

    def test_effects(self, p1):
        eq = solve_mild(p1)
        assert eq.D == pytest.approx(-0.09, abs=1e-12)
        assert effect_D_mild(p1, eq) == pytest.approx(-0.09, abs=1e-12)
        assert bound_D_lower(eq) == pytest.approx(-C_TILDE_P1, abs=1e-10)
        assert eq.D_lower < 0.0
        assert eq.D_lower <= eq.D

    def test_deterrence_direction_flip(self):
        # lowering concession costs turns the backlash into deterrence
        params = make_p1(alpha_G=0.4)
        eq = solve_mild(params)
        assert effect_D_mild(params, eq) == pytest.approx(0.51 - 0.4, abs=1e-12)

    def test_residual_below_default_tol(self, p1):
        assert solve_mild(p1).residual <= 1e-10


class TestIdentities:
    def test_identity_suite_p1(self, p1):
        eq = solve_mild(p1)
        assert abs(eq.prob_revealed + eq.prob_concealed - eq.prob_total) <= 1e-12
        assert estimator_total(p1.q, eq.q_prime, eq.prob_revealed) == pytest.approx(
            eq.prob_total, abs=1e-12
        )
        assert estimator_H(p1.q, eq.q_prime, eq.prob_revealed) == pytest.approx(
            p1.H.cdf(eq.c_tilde), abs=1e-12
        )
        odds = eq.q_prime / (1.0 - eq.q_prime)
        assert odds == pytest.approx(eq.kappa * p1.q / (1.0 - p1.q), abs=1e-12)

    def test_identity_suite_random_draws(self):
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 40:
            params = draw_params(rng, "mild")
            if params is None:
                continue
            eq = solve_mild(params)
            assert abs(eq.prob_revealed + eq.prob_concealed - eq.prob_total) <= 1e-12
            assert abs(eq.p_R - params.alpha_G) <= 1e-10
            assert abs(eq.p_NN - (params.alpha_G - eq.c_tilde)) <= 1e-10
            assert abs(eq.D_lower + eq.c_tilde) <= 1e-10
            assert params.H.lo < eq.c_tilde < params.alpha_G
            assert 0.0 < eq.kappa < 1.0
            assert eq.D_lower < 0.0 and eq.D_lower <= eq.D
            checked += 1


class TestEstimators:
    def test_total_arithmetic(self):
        assert estimator_total(0.5, 0.25, 0.4) == pytest.approx(0.8, abs=1e-15)

    def test_total_no_revealed_repression(self):
        assert estimator_total(0.6, 0.6 - 1e-6, 0.0) == 1.0

    def test_total_rejects_reversed_updating(self):
        with pytest.raises(DomainError):
            estimator_total(0.5, 0.5, 0.4)
        with pytest.raises(DomainError):
            estimator_total(0.5, 0.7, 0.4)

    def test_H_exact_inputs(self, p1):
        eq = solve_mild(p1)
        value = estimator_H(0.65, Q_PRIME_P1, eq.prob_revealed)
        assert value == pytest.approx(C_TILDE_P1, abs=1e-9)

    def test_H_all_concealed(self):
        assert estimator_H(0.5, 0.4, 0.0) == 1.0

    def test_H_degenerate_equal_beliefs(self):
        # q' = q reads as no updating: Hhat = 1 - p
        assert estimator_H(0.5, 0.5, 0.3) == pytest.approx(0.7, abs=1e-15)

    def test_H_flags_contradictory_data(self):
        with pytest.raises(InconsistentInputsError) as exc:
            estimator_H(0.65, 0.45, 1.0)
        assert exc.value.value < 0.0

    def test_bad_probabilities_rejected(self):
        with pytest.raises(DomainError):
            estimator_total(0.5, 0.25, 1.2)
        with pytest.raises(DomainError):
            estimator_H(1.0, 0.5, 0.5)


class TestDegenerateLimits:
    def test_p1_conceal_always_branch(self, p1):
        limits = limit_H_degenerate(p1)
        assert limits.negligible == 1.0
        assert limits.prohibitive == 0.0
        assert limits.branch == "conceal_always"

    def test_interior_branch(self):
        limits = limit_H_degenerate(make_p1(alpha_G=0.4))
        assert limits.negligible == pytest.approx(1.5 * 0.4 / (1.275 - 0.4), abs=1e-12)
        assert limits.branch == "interior"

    def test_rejects_clause_violation(self):
        # beta_e = 0.4 puts G(beta_e) below alpha_G, killing the denominator
        with pytest.raises(AssumptionError):
            limit_H_degenerate(make_p1(q=0.5, beta_G=0.7, beta_B=0.1))


class TestNoConcession:
    def test_threshold_exact(self, p1):
        assert solve_no_concession(p1) == pytest.approx(0.625, abs=1e-10)

    def test_threshold_matches_bisection_oracle(self, p1):
        oracle = bisect(no_concession_equation(p1), 0.0, 1.0)
        assert solve_no_concession(p1) == pytest.approx(oracle, abs=1e-8)

    def test_residual_identity(self, p1):
        eq = no_concession_equilibrium(p1)
        # G(gamma' beta_e) at the root equals G(beta_e) - c_tilde
        assert eq.p_NN == pytest.approx(1.0 - 0.625, abs=1e-10)
        assert eq.p_R == pytest.approx(1.0, abs=1e-15)
        assert eq.c_tilde < p1.G.cdf(1.275)

    def test_precondition(self):
        # G(beta_e) must exceed the concealment-cost floor
        params = make_p1(q=0.5, beta_G=0.7, beta_B=0.1, H=BoundedCDF.uniform(0.5, 1.0))
        with pytest.raises(DomainError):
            solve_no_concession(params)


class TestRejections:
    def test_assumption_failure_carries_report(self):
        with pytest.raises(AssumptionError) as exc:
            solve_mild(make_p1(alpha_B=0.5))
        assert exc.value.report is not None
        assert exc.value.report.failed_clauses() == ["alpha_G < alpha_B"]

    def test_bad_tol(self, p1):
        with pytest.raises(DomainError):
            solve_mild(p1, tol=0.0)

    def test_relaxed_mode_allows_boundary_root(self, p1):
        # concealment costs entirely above alpha_G: threshold pins at alpha_G
        params = dataclasses.replace(p1, H=BoundedCDF.uniform(0.9, 1.0))
        eq = solve_mild(params, relaxed=True)
        assert eq.c_tilde == pytest.approx(p1.alpha_G, abs=1e-12)
        assert params.H.cdf(eq.c_tilde) == 0.0
        with pytest.raises(AssumptionError):
            solve_mild(params)  # strict mode still refuses
