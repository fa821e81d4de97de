"""Independent numerical certification of solved equilibria.

Nothing here reuses the solvers' internal algebra: best responses are
checked by direct payoff comparison on a type grid, posteriors by re-deriving
them from the strategy with Bayes rule over the type measure, and the
comparative-statics / limit / sign-law claims by brute re-solving along
parameter families. Randomized draws use rejection sampling against the
assumption checks, since the valid regions are not rectangles.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from . import model
from .distributions import BoundedCDF, fosd_dominates
from .errors import AssumptionError, DomainError, RepgameError
from .model import Belief, ModelParams
from .solver_mild import (
    MildEquilibrium,
    NoConcessionEquilibrium,
    estimator_H,
    estimator_total,
    limit_H_degenerate,
    solve_mild,
)
from .solver_severe import SevereEquilibrium, effect_D_severe, solve_severe
from .sweep import apply_axis

DEFAULT_GRID = 1000
MONOTONE_SLACK = 1e-12


@dataclass(frozen=True)
class RegretReport:
    """Numerical equilibrium certificate.

    max_regret: largest payoff gain from any unilateral regime deviation on
    the type grid, clamped at zero. bayes_gap: largest belief-component
    discrepancy between stored posteriors and a direct Bayes recomputation.
    identity_gaps: named residuals of the equilibrium identities.
    """

    max_regret: float
    worst_type: tuple[str, float] | None
    bayes_gap: float
    identity_gaps: dict

    def to_dict(self) -> dict:
        return {
            "max_regret": self.max_regret,
            "worst_type": list(self.worst_type) if self.worst_type else None,
            "bayes_gap": self.bayes_gap,
            "identity_gaps": dict(self.identity_gaps),
        }


def _available_payoffs(params: ModelParams, p_R: float, p_NN: float, theta: str, c: float, variant: str) -> dict:
    alpha = params.alpha_G if theta == "G" else params.alpha_B
    payoffs = {"conceal": 1.0 - p_NN - c, "reveal": 1.0 - p_R}
    if variant != "no-concession":
        payoffs["concede"] = 1.0 - alpha
    return payoffs


def _prescribed_actions(eq, theta: str, c: float) -> tuple[str, ...]:
    if isinstance(eq, MildEquilibrium):
        if c <= eq.c_tilde:
            return ("conceal",)
        return ("reveal",) if theta == "B" else ("reveal", "concede")
    if isinstance(eq, SevereEquilibrium):
        if theta == "B":
            if eq.corner:
                # pinned threshold is not an indifference point: the conceal
                # set is empty on the support, so ties go to concede
                return ("concede",)
            return ("conceal",) if c <= eq.c_tilde_B else ("concede",)
        return ("conceal",) if c <= eq.c_tilde_G else ("reveal",)
    if isinstance(eq, NoConcessionEquilibrium):
        return ("conceal",) if c <= eq.c_tilde else ("reveal",)
    raise DomainError(f"not a solved equilibrium: {type(eq).__name__}")


def _variant_of(eq) -> str:
    if isinstance(eq, MildEquilibrium):
        return "mild"
    if isinstance(eq, SevereEquilibrium):
        return "severe"
    return "no-concession"


def best_response_check(params: ModelParams, eq, grid: int = DEFAULT_GRID) -> RegretReport:
    """No-profitable-deviation check against the equilibrium public play.

    For every type (theta, c) on the grid, the payoff of each prescribed
    action (worst element of the prescribed set, so mixing types must be
    exactly indifferent) is compared to the best available action. Public
    protest thresholds come from the equilibrium's stored posteriors, so a
    deliberately perturbed threshold shows up as positive regret.
    """
    if grid < 2:
        raise DomainError("grid must be at least 2")
    variant = _variant_of(eq)
    p_R = model.protest_prob(eq.mu_R, params)
    p_NN = model.protest_prob(eq.mu_NN, params)
    cs = np.linspace(params.H.lo, params.H.hi, grid)
    max_regret = 0.0
    worst: tuple[str, float] | None = None
    for theta in ("G", "B"):
        for c in cs:
            payoffs = _available_payoffs(params, p_R, p_NN, theta, float(c), variant)
            prescribed = _prescribed_actions(eq, theta, float(c))
            regret = max(payoffs.values()) - min(payoffs[a] for a in prescribed)
            if regret > max_regret:
                max_regret = regret
                worst = (theta, float(c))
    return RegretReport(max(max_regret, 0.0), worst, 0.0, {})


def bayes_consistency_check(params: ModelParams, eq) -> RegretReport:
    """Recompute posteriors from the strategy by direct Bayes rule."""
    g, q = params.gamma, params.q
    if isinstance(eq, MildEquilibrium):
        h = params.H.cdf(eq.c_tilde)
        not_h = 1.0 - h
        mu_nn = Belief.normalized(g * q * h, g * (1.0 - q) * h, 1.0 - g)
        mu_r = Belief.normalized(g * q * eq.kappa * not_h, g * (1.0 - q) * not_h, 0.0)
        # no news carries no type information: posterior odds stay q/(1-q)
        ratio_gap = abs(mu_nn.mu_G * (1.0 - q) - mu_nn.mu_B * q)
    elif isinstance(eq, SevereEquilibrium):
        h_G = params.H.cdf(eq.c_tilde_G)
        h_B = params.H.cdf(eq.c_tilde_B)
        mu_nn = Belief.normalized(g * q * h_G, g * (1.0 - q) * h_B, 1.0 - g)
        mu_r = Belief.normalized(g * q * (1.0 - h_G), 0.0, 0.0)
        # differential concealment: odds scale by H(c_G)/H(c_B)
        ratio_gap = abs(mu_nn.mu_G * (1.0 - q) * h_B - mu_nn.mu_B * q * h_G)
    elif isinstance(eq, NoConcessionEquilibrium):
        h = params.H.cdf(eq.c_tilde)
        mu_nn = Belief.normalized(g * q * h, g * (1.0 - q) * h, 1.0 - g)
        mu_r = Belief(q, 1.0 - q, 0.0)
        ratio_gap = abs(mu_nn.mu_G * (1.0 - q) - mu_nn.mu_B * q)
    else:
        raise DomainError(f"not a solved equilibrium: {type(eq).__name__}")
    gap = max(
        abs(a - b)
        for a, b in zip(mu_nn.as_tuple() + mu_r.as_tuple(), eq.mu_NN.as_tuple() + eq.mu_R.as_tuple())
    )
    return RegretReport(0.0, None, gap, {"no_news_type_odds": ratio_gap})


def identity_suite(params: ModelParams, eq) -> dict:
    """Residuals of the closed-form identities at a solved equilibrium."""
    gaps: dict[str, float] = {}
    if isinstance(eq, MildEquilibrium):
        gaps["revealed_plus_concealed_minus_total"] = abs(
            eq.prob_revealed + eq.prob_concealed - eq.prob_total
        )
        gaps["estimator_total_vs_prob_total"] = abs(
            estimator_total(params.q, eq.q_prime, eq.prob_revealed) - eq.prob_total
        )
        gaps["estimator_H_vs_concealed"] = abs(
            estimator_H(params.q, eq.q_prime, eq.prob_revealed) - params.H.cdf(eq.c_tilde)
        )
        gaps["q_prime_odds"] = abs(
            eq.q_prime / (1.0 - eq.q_prime) - eq.kappa * params.q / (1.0 - params.q)
        )
        gaps["p_R_minus_alpha_G"] = abs(eq.p_R - params.alpha_G)
        gaps["p_NN_minus_indifference"] = abs(eq.p_NN - (params.alpha_G - eq.c_tilde))
        gaps["D_lower_plus_c_tilde"] = abs(eq.D_lower + eq.c_tilde)
        gaps["reveal_probability"] = eq.prob_revealed  # must stay positive: on-path reveal
    elif isinstance(eq, SevereEquilibrium):
        p_nn = model.protest_prob(eq.mu_NN, params)
        g_beta_G = params.G.cdf(params.beta_G)
        gaps["indifference_G"] = abs(g_beta_G - p_nn - eq.c_tilde_G)
        if eq.corner:
            gaps["corner_slack_B"] = max(params.alpha_B - p_nn - eq.c_tilde_B, 0.0)
        else:
            gaps["indifference_B"] = abs(params.alpha_B - p_nn - eq.c_tilde_B)
            gaps["gap_identity"] = abs((eq.c_tilde_G - eq.c_tilde_B) - (g_beta_G - params.alpha_B))
        gaps["p_R_minus_G_beta_G"] = abs(eq.p_R - g_beta_G)
        h_G = params.H.cdf(eq.c_tilde_G)
        gaps["reveal_probability"] = params.q * (1.0 - h_G)
    else:
        raise DomainError(f"identity suite expects a mild or severe equilibrium")
    return gaps


def certify_equilibrium(params: ModelParams, eq, grid: int = DEFAULT_GRID) -> RegretReport:
    """Full certificate: regret, Bayes gap, identity residuals, on-path reveal."""
    br = best_response_check(params, eq, grid)
    bayes = bayes_consistency_check(params, eq)
    gaps = dict(bayes.identity_gaps)
    gaps.update(identity_suite(params, eq))
    return RegretReport(br.max_regret, br.worst_type, bayes.bayes_gap, gaps)


# -- comparative statics ------------------------------------------------------


@dataclass(frozen=True)
class FosdReport:
    ok: bool
    prob_revealed_1: float
    prob_revealed_2: float
    prob_total_1: float
    prob_total_2: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def fosd_comparative_statics_check(
    params: ModelParams, H1: BoundedCDF, H2: BoundedCDF
) -> FosdReport:
    """Costlier concealment (H1 above H2 in FOSD) must raise revealed and
    lower total repression; both orderings are strict."""
    if not fosd_dominates(H1, H2):
        raise DomainError("H1 must strictly FOSD-dominate H2 (pointwise smaller CDF)")
    eq1 = solve_mild(dataclasses.replace(params, H=H1))
    eq2 = solve_mild(dataclasses.replace(params, H=H2))
    ok = eq1.prob_revealed > eq2.prob_revealed and eq1.prob_total < eq2.prob_total
    return FosdReport(ok, eq1.prob_revealed, eq2.prob_revealed, eq1.prob_total, eq2.prob_total)


@dataclass(frozen=True)
class LimitPoint:
    eps: float
    h_at_threshold: float | None
    relaxed: bool
    note: str = ""

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class LimitReport:
    prohibitive: tuple[LimitPoint, ...]
    negligible: tuple[LimitPoint, ...]
    prohibitive_limit: float
    negligible_limit: float
    prohibitive_gap: float | None
    negligible_gap: float | None

    def to_dict(self) -> dict:
        return {
            "prohibitive": [p.to_dict() for p in self.prohibitive],
            "negligible": [p.to_dict() for p in self.negligible],
            "prohibitive_limit": self.prohibitive_limit,
            "negligible_limit": self.negligible_limit,
            "prohibitive_gap": self.prohibitive_gap,
            "negligible_gap": self.negligible_gap,
        }


def _limit_point(params: ModelParams, h_family: BoundedCDF, eps: float) -> LimitPoint:
    trial = dataclasses.replace(params, H=h_family)
    strict_ok = model.check_assumption_mild(trial).ok
    try:
        eq = solve_mild(trial, relaxed=not strict_ok)
    except AssumptionError as exc:
        return LimitPoint(eps, None, not strict_ok, f"skipped: {exc}")
    return LimitPoint(eps, trial.H.cdf(eq.c_tilde), not strict_ok)


def degenerate_cost_limit_check(params: ModelParams, eps_sequence) -> LimitReport:
    """Approach the degenerate concealment-cost limits along uniform families.

    Prohibitive family H = U[1-eps, 1]: concealment mass must fall toward 0.
    Negligible family H = U[0, eps]: the mass must approach the degenerate
    limit value. Family members that violate even the H-free clauses are
    skipped and noted; the rest solve in relaxed mode, since degenerating H
    necessarily breaks the H-dependent clauses.
    """
    eps_list = [float(e) for e in eps_sequence]
    if not eps_list or any(not 0.0 < e < 1.0 for e in eps_list):
        raise DomainError("eps values must lie in (0, 1)")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise DomainError("eps values must be strictly decreasing")
    limits = limit_H_degenerate(params)
    prohibitive = tuple(
        _limit_point(params, BoundedCDF.uniform(1.0 - e, 1.0), e) for e in eps_list
    )
    negligible = tuple(_limit_point(params, BoundedCDF.uniform(0.0, e), e) for e in eps_list)
    pro_vals = [p.h_at_threshold for p in prohibitive if p.h_at_threshold is not None]
    neg_vals = [p.h_at_threshold for p in negligible if p.h_at_threshold is not None]
    return LimitReport(
        prohibitive=prohibitive,
        negligible=negligible,
        prohibitive_limit=limits.prohibitive,
        negligible_limit=limits.negligible,
        prohibitive_gap=abs(pro_vals[-1] - limits.prohibitive) if pro_vals else None,
        negligible_gap=abs(neg_vals[-1] - limits.negligible) if neg_vals else None,
    )


@dataclass(frozen=True)
class MonotonicityReport:
    axis: str
    regime: str
    values: tuple[float, ...]
    effects: tuple[float, ...]
    ok: bool
    violations: tuple[int, ...]
    truncated_note: str = ""

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "regime": self.regime,
            "values": list(self.values),
            "effects": list(self.effects),
            "ok": self.ok,
            "violations": list(self.violations),
            "truncated_note": self.truncated_note,
        }


def effect_monotonicity_check(
    params: ModelParams, axis: str, lo: float, hi: float, steps: int
) -> MonotonicityReport:
    """The effect D must be nondecreasing along q, beta_B, gamma (either
    regime) and along upward CDF shifts of G (mild regime only)."""
    if axis not in ("q", "beta_B", "gamma", "G_shift"):
        raise DomainError(f"unsupported monotonicity axis {axis!r}")
    if steps < 2 or not lo < hi:
        raise DomainError("need lo < hi and steps >= 2")
    base_regime = (
        "mild"
        if model.check_assumption_mild(params).ok
        else "severe"
        if model.check_assumption_severe(params).ok
        else None
    )
    if base_regime is None:
        raise AssumptionError("base params fail both regime checks", None)
    if axis == "G_shift" and base_regime != "mild":
        raise DomainError("G_shift monotonicity applies to the mild regime only")

    grid = np.linspace(lo, hi, steps)
    values: list[float] = []
    effects: list[float] = []
    note = ""
    for v in grid:
        try:
            trial = apply_axis(params, axis, float(v))
        except DomainError as exc:
            note = f"truncated at {axis}={float(v)}: {exc}"
            break
        report = (
            model.check_assumption_mild(trial)
            if base_regime == "mild"
            else model.check_assumption_severe(trial)
        )
        if not report.ok:
            note = f"truncated at {axis}={float(v)}: {report.failed_clauses()}"
            break
        if base_regime == "mild":
            effect = solve_mild(trial).D
        else:
            effect = effect_D_severe(trial)
        values.append(float(v))
        effects.append(effect)
    if not values:
        raise AssumptionError(f"no valid grid points along {axis}", None)
    violations = tuple(
        i for i in range(len(effects) - 1) if effects[i + 1] < effects[i] - MONOTONE_SLACK
    )
    return MonotonicityReport(
        axis, base_regime, tuple(values), tuple(effects), not violations, violations, note
    )


# -- randomized law checks ----------------------------------------------------


def _draw_cost_dist(rng: np.random.Generator, lo_max: float, w_lo: float, w_hi: float) -> BoundedCDF:
    lo = rng.uniform(0.0, lo_max)
    width = rng.uniform(w_lo, w_hi)
    if rng.random() < 0.3:
        return BoundedCDF.scaled_beta(lo, lo + width, rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0))
    return BoundedCDF.uniform(lo, lo + width)


def draw_params(rng: np.random.Generator, regime: str) -> ModelParams | None:
    """One proposal draw; None when it fails type validity or the regime check."""
    if regime == "mild":
        beta_G = rng.uniform(0.3, 3.0)
        beta_B = rng.uniform(-1.5, 0.8)
        g_dist = _draw_cost_dist(rng, 0.3, 0.4, 1.6)
    else:
        beta_G = rng.uniform(0.2, 1.2)
        beta_B = rng.uniform(-1.0, 0.6)
        g_dist = _draw_cost_dist(rng, 0.2, 0.8, 1.8)
    try:
        params = ModelParams(
            gamma=rng.uniform(0.1, 0.9),
            q=rng.uniform(0.1, 0.9),
            beta_G=beta_G,
            beta_B=beta_B,
            alpha_G=rng.uniform(0.02, 0.98),
            alpha_B=rng.uniform(0.02, 0.98),
            G=g_dist,
            H=_draw_cost_dist(rng, 0.5, 0.3, 1.5),
        )
    except DomainError:
        return None
    report = (
        model.check_assumption_mild(params)
        if regime == "mild"
        else model.check_assumption_severe(params)
    )
    return params if report.ok else None


@dataclass(frozen=True)
class SignLawReport:
    """Outcome of the randomized deterrence/backlash sign laws."""

    regime: str
    n_checked: int
    draws_used: int
    acceptance_rate: float
    ok: bool
    failures: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "n_checked": self.n_checked,
            "draws_used": self.draws_used,
            "acceptance_rate": self.acceptance_rate,
            "ok": self.ok,
            "failures": list(self.failures),
        }


def sign_law_check(
    regime: str, n_draws: int = 500, seed: int = 0, budget: int = 100_000
) -> SignLawReport:
    """Mild regime: sign(D) must match sign(G(gamma*beta_e) - alpha_G).
    Severe regime: D must be strictly negative. Knife-edge draws (the
    measure-zero boundary) are skipped rather than counted either way.
    """
    if regime not in ("mild", "severe"):
        raise DomainError(f"unknown regime {regime!r}")
    rng = np.random.default_rng(seed)
    checked = 0
    used = 0
    failures: list[dict] = []
    while checked < n_draws and used < budget:
        used += 1
        params = draw_params(rng, regime)
        if params is None:
            continue
        try:
            if regime == "mild":
                eq = solve_mild(params)
                ref = params.G.cdf(params.gamma * model.beta_e(params)) - params.alpha_G
                if abs(ref) < 1e-12:
                    continue  # knife edge: no sign prediction
                ok = (eq.D > 0.0) == (ref > 0.0)
                if not ok:
                    failures.append({"params": params.to_dict(), "D": eq.D, "reference": ref})
            else:
                eq = solve_severe(params, scan=0)
                if not eq.D < 0.0:
                    failures.append({"params": params.to_dict(), "D": eq.D})
        except RepgameError as exc:
            failures.append({"params": params.to_dict(), "error": str(exc)})
        checked += 1
    if checked < n_draws:
        raise DomainError(
            f"draw budget {budget} exhausted after {checked}/{n_draws} accepted draws"
        )
    return SignLawReport(
        regime=regime,
        n_checked=checked,
        draws_used=used,
        acceptance_rate=checked / used,
        ok=not failures,
        failures=tuple(failures),
    )
