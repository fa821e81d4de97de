"""Mild-conflict equilibrium: one concealment threshold and a reveal mix.

Under mild conflict (alpha_G < alpha_B) every equilibrium has a single
concealment-cost threshold c_tilde: the regime represses and conceals both
activist types whenever c < c_tilde. Above the threshold, bad activists are
repressed publicly while good activists are publicly repressed with a
probability pinned by the regime's indifference between revealing and
conceding, summarized by the likelihood ratio kappa in (0, 1).

The threshold solves a monotone scalar equation: the probability of protest
after no news, G(gamma'(c) * beta_e), must equal alpha_G - c, where
gamma'(c) is the posterior probability of an organized activist after no
news. The left side is nondecreasing in c and the right side strictly
decreasing, so the root is unique and bracketed on (c_lo, alpha_G).

Two indifference identities anchor everything downstream: the probability
of protest after revealed repression equals alpha_G, and after no news it
equals alpha_G - c_tilde.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import model
from .errors import AssumptionError, DomainError, InconsistentInputsError, SolverError
from .model import Belief, ModelParams
from .rootfind import find_root

DEFAULT_TOL = 1e-10
_BRACKET_PAD = 1e-14
_IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class MildEquilibrium:
    """Solved mild-conflict equilibrium and its derived quantities.

    All repression/concession probabilities are conditional on an organized
    activist. p_R, p_NN, p_prior are protest probabilities after revealed
    repression, after no news, and under the prior. D = p_prior - p_R is
    the deterrence (positive) or backlash (negative) effect; D_lower =
    p_NN - p_R = -c_tilde is its always-negative estimable lower bound.
    """

    c_tilde: float
    kappa: float
    gamma_prime: float
    mu_R: Belief
    mu_NN: Belief
    q_prime: float
    prob_revealed_given_G: float
    prob_revealed_given_B: float
    prob_revealed: float
    prob_concealed: float
    prob_total: float
    prob_concession: float
    p_R: float
    p_NN: float
    p_prior: float
    D: float
    D_lower: float
    residual: float


@dataclass(frozen=True)
class RepressionProbabilities:
    prob_revealed_given_G: float
    prob_revealed_given_B: float
    prob_revealed: float
    prob_concealed: float
    prob_total: float
    prob_concession: float


@dataclass(frozen=True)
class NoConcessionEquilibrium:
    """No-concession variant: conceal below c_tilde, reveal above."""

    c_tilde: float
    mu_R: Belief
    mu_NN: Belief
    p_R: float
    p_NN: float
    p_prior: float
    residual: float


@dataclass(frozen=True)
class DegenerateLimits:
    """Limits of the concealment probability H(c_tilde) under degenerate costs.

    ``prohibitive`` is the limit when concealment costs concentrate at the
    top of the unit scale (always 0). ``negligible`` is the limit when they
    concentrate at zero: 1 when G(gamma * beta_e) < alpha_G, otherwise the
    interior value (1-gamma)/gamma * Ginv(alpha_G) / (beta_e - Ginv(alpha_G)).
    """

    negligible: float
    prohibitive: float
    branch: str


def _gamma_prime(h_mass: float, gamma: float) -> float:
    return gamma * h_mass / (gamma * h_mass + 1.0 - gamma)


def _threshold_residual(params: ModelParams, be: float, c: float) -> float:
    gp = _gamma_prime(params.H.cdf(c), params.gamma)
    return params.G.cdf(gp * be) + c - params.alpha_G


def _validate_tol(tol: float) -> None:
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")


def solve_threshold(params: ModelParams, tol: float = DEFAULT_TOL, relaxed: bool = False) -> float:
    """Concealment threshold c_tilde, the root of the no-news indifference.

    With ``relaxed=True`` only the clauses that do not involve H are
    enforced and the bracket is widened to [0, alpha_G], allowing boundary
    roots. This supports limit analyses where H degenerates and the
    H-dependent clauses necessarily fail; the root c_tilde = alpha_G (no
    concealment ever pays) is then legitimate.
    """
    _validate_tol(tol)
    report = model.check_assumption_mild(params)
    if relaxed:
        bad = [c.name for c in report.clauses[:2] + report.clauses[4:5] if not c.passed]
        if bad:
            raise AssumptionError(f"non-H mild clauses failed: {bad}", report)
        lo, hi = 0.0, params.alpha_G
    else:
        if not report.ok:
            raise AssumptionError(
                f"mild-conflict assumption failed: {report.failed_clauses()}", report
            )
        lo, hi = params.H.lo, params.alpha_G
    be = model.beta_e(params)
    f = lambda c: _threshold_residual(params, be, c)
    f_lo, f_hi = f(lo), f(hi)
    if f_lo > 0.0 or f_hi < 0.0:
        # numerically impossible under the assumption check, guarded anyway
        raise SolverError(f"threshold equation not bracketed: f({lo})={f_lo}, f({hi})={f_hi}")
    pad_lo, pad_hi = lo + _BRACKET_PAD, hi - _BRACKET_PAD
    if f(pad_lo) < 0.0 < f(pad_hi):
        c_tilde = find_root(f, pad_lo, pad_hi)
    else:
        c_tilde = find_root(f, lo, hi)  # root hugs an endpoint
    residual = abs(f(c_tilde))
    if residual > tol:
        raise SolverError(f"threshold residual {residual:.3e} exceeds tol {tol:.3e}")
    if not relaxed and not params.H.lo < c_tilde < params.alpha_G:
        raise SolverError(f"threshold {c_tilde} escaped ({params.H.lo}, {params.alpha_G})")
    return c_tilde


def reveal_likelihood_ratio(params: ModelParams) -> float:
    """kappa: odds of publicly repressing a good versus a bad activist."""
    g_inv = params.G.quantile(params.alpha_G)
    num = g_inv - params.beta_B
    den = params.beta_G - g_inv
    if den <= 0.0 or num <= 0.0:
        raise SolverError(
            f"reveal likelihood ratio undefined: Ginv(alpha_G)={g_inv} "
            f"not inside (beta_B, beta_G)"
        )
    return (1.0 - params.q) / params.q * num / den


def repression_probabilities(eq: "MildEquilibrium", params: ModelParams) -> RepressionProbabilities:
    """The six equilibrium repression/concession probabilities.

    Recomputed from (c_tilde, kappa) and cross-checked against the
    equivalent closed forms written directly in the payoff parameters.
    """
    h_mass = params.H.cdf(eq.c_tilde)
    return _probabilities_from(params, eq.c_tilde, eq.kappa, h_mass)


def _probabilities_from(
    params: ModelParams, c_tilde: float, kappa: float, h_mass: float
) -> RepressionProbabilities:
    q = params.q
    not_concealed = 1.0 - h_mass
    rev_B = not_concealed
    rev_G = kappa * not_concealed
    revealed = (kappa * q + 1.0 - q) * not_concealed
    concealed = h_mass
    total = 1.0 - q * (1.0 - kappa) * not_concealed
    concession = 1.0 - total

    g_inv = params.G.quantile(params.alpha_G)
    be = model.beta_e(params)
    revealed_alt = (params.beta_G - params.beta_B) / (params.beta_G - g_inv) * (1.0 - q) * not_concealed
    total_alt = 1.0 - (be - g_inv) / (params.beta_G - g_inv) * not_concealed
    if abs(revealed - revealed_alt) > _IDENTITY_TOL or abs(total - total_alt) > _IDENTITY_TOL:
        raise SolverError(
            f"probability closed forms disagree: revealed {revealed} vs {revealed_alt}, "
            f"total {total} vs {total_alt}"
        )
    return RepressionProbabilities(rev_G, rev_B, revealed, concealed, total, concession)


def solve_mild(
    params: ModelParams, tol: float = DEFAULT_TOL, relaxed: bool = False
) -> MildEquilibrium:
    """Solve the unique mild-conflict equilibrium.

    Raises AssumptionError when the mild-conflict check fails, and
    SolverError if any equilibrium identity fails to certify at the
    requested tolerance (which would indicate a bug, not bad inputs).
    """
    c_tilde = solve_threshold(params, tol, relaxed=relaxed)
    be = model.beta_e(params)
    residual = abs(_threshold_residual(params, be, c_tilde))

    h_mass = params.H.cdf(c_tilde)
    gp = _gamma_prime(h_mass, params.gamma)
    q = params.q
    mu_NN = Belief(gp * q, gp * (1.0 - q), 1.0 - gp)
    kappa = reveal_likelihood_ratio(params)
    mu_R = Belief.normalized(kappa * q, 1.0 - q, 0.0)
    probs = _probabilities_from(params, c_tilde, kappa, h_mass)

    p_R = model.protest_prob(mu_R, params)
    p_NN = model.protest_prob(mu_NN, params)
    p_prior = model.protest_prob(model.prior(params), params)
    guard = max(10.0 * tol, 1e-12)
    if abs(p_R - params.alpha_G) > guard:
        raise SolverError(f"protest-after-reveal {p_R} != alpha_G {params.alpha_G}")
    if abs(p_NN - (params.alpha_G - c_tilde)) > guard:
        raise SolverError(f"protest-after-no-news {p_NN} != alpha_G - c_tilde")

    return MildEquilibrium(
        c_tilde=c_tilde,
        kappa=kappa,
        gamma_prime=gp,
        mu_R=mu_R,
        mu_NN=mu_NN,
        q_prime=mu_R.mu_G,
        prob_revealed_given_G=probs.prob_revealed_given_G,
        prob_revealed_given_B=probs.prob_revealed_given_B,
        prob_revealed=probs.prob_revealed,
        prob_concealed=probs.prob_concealed,
        prob_total=probs.prob_total,
        prob_concession=probs.prob_concession,
        p_R=p_R,
        p_NN=p_NN,
        p_prior=p_prior,
        D=p_prior - p_R,
        D_lower=p_NN - p_R,
        residual=residual,
    )


def unconditional_probabilities(eq: MildEquilibrium, params: ModelParams) -> dict:
    """Repression probabilities not conditioned on an organized activist."""
    g = params.gamma
    return {
        "prob_revealed": g * eq.prob_revealed,
        "prob_concealed": g * eq.prob_concealed,
        "prob_total": g * eq.prob_total,
        "prob_concession": g * eq.prob_concession,
    }


# -- measurement ------------------------------------------------------------


def _check_estimator_inputs(q: float, q_prime: float, p_revealed: float) -> None:
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must be in (0,1), got {q}")
    if not 0.0 <= q_prime <= 1.0:
        raise DomainError(f"q_prime must be in [0,1], got {q_prime}")
    if not 0.0 <= p_revealed <= 1.0:
        raise DomainError(f"p_revealed must be in [0,1], got {p_revealed}")


def estimator_total(q: float, q_prime: float, p_revealed: float) -> float:
    """Plug-in estimate of total repression: 1 - (q-q')/(1-q) * p_revealed.

    Requires q' < q, the direction in which the public updates about types
    after observing repression; on exact equilibrium inputs this reproduces
    prob_total.
    """
    _check_estimator_inputs(q, q_prime, p_revealed)
    if q_prime >= q:
        raise DomainError(f"estimator_total needs q_prime < q, got {q_prime} >= {q}")
    return 1.0 - (q - q_prime) / (1.0 - q) * p_revealed


def estimator_H(q: float, q_prime: float, p_revealed: float) -> float:
    """Plug-in estimate of the concealment probability H(c_tilde).

    1 - (1-q')/(1-q) * p_revealed; equals H(c_tilde) on exact equilibrium
    inputs. q' = q is accepted (degenerate no-updating reading). A result
    outside [0,1] means the data contradict the model and raises
    InconsistentInputsError carrying the value.
    """
    _check_estimator_inputs(q, q_prime, p_revealed)
    if q_prime > q:
        raise DomainError(f"estimator_H needs q_prime <= q, got {q_prime} > {q}")
    value = 1.0 - (1.0 - q_prime) / (1.0 - q) * p_revealed
    if not 0.0 <= value <= 1.0:
        raise InconsistentInputsError(
            f"estimated concealment probability {value} outside [0,1]", value
        )
    return value


# -- effects ----------------------------------------------------------------


def effect_D_mild(params: ModelParams, eq: MildEquilibrium) -> float:
    """Deterrence/backlash effect D = p_prior - p_R (= G(gamma*beta_e) - alpha_G)."""
    p_prior = params.G.cdf(params.gamma * model.beta_e(params))
    return p_prior - eq.p_R


def bound_D_lower(eq: MildEquilibrium) -> float:
    """Estimable lower bound on D: p_NN - p_R, always negative (= -c_tilde)."""
    return eq.p_NN - eq.p_R


def limit_H_degenerate(params: ModelParams) -> DegenerateLimits:
    """Limiting concealment probability when H degenerates at 0 or at 1.

    Only the clauses not involving H are required of ``params``; the limit
    statement replaces H itself.
    """
    report = model.check_assumption_mild(params)
    bad = [c.name for c in report.clauses[:2] + report.clauses[4:5] if not c.passed]
    if bad:
        raise AssumptionError(f"non-H mild clauses failed: {bad}", report)
    be = model.beta_e(params)
    if params.G.cdf(params.gamma * be) < params.alpha_G:
        return DegenerateLimits(negligible=1.0, prohibitive=0.0, branch="conceal_always")
    g_inv = params.G.quantile(params.alpha_G)
    den = be - g_inv
    if den <= 0.0:
        raise AssumptionError(
            f"degenerate limit undefined: beta_e - Ginv(alpha_G) = {den} <= 0", report
        )
    value = (1.0 - params.gamma) / params.gamma * g_inv / den
    return DegenerateLimits(negligible=value, prohibitive=0.0, branch="interior")


# -- no-concession variant ---------------------------------------------------


def solve_no_concession(params: ModelParams, tol: float = DEFAULT_TOL) -> float:
    """Concealment threshold when conceding is not an option.

    Solves c = G(beta_e) - G(gamma'(c) * beta_e), unique on
    (c_lo, G(beta_e)); requires G(beta_e) > c_lo.
    """
    return no_concession_equilibrium(params, tol).c_tilde


def no_concession_equilibrium(params: ModelParams, tol: float = DEFAULT_TOL) -> NoConcessionEquilibrium:
    _validate_tol(tol)
    be = model.beta_e(params)
    g_at_be = params.G.cdf(be)
    if not g_at_be > params.H.lo:
        raise DomainError(
            f"no-concession variant needs G(beta_e) > c_lo, got {g_at_be} <= {params.H.lo}"
        )
    f = lambda c: params.G.cdf(_gamma_prime(params.H.cdf(c), params.gamma) * be) + c - g_at_be
    c_tilde = find_root(f, params.H.lo, g_at_be)
    residual = abs(f(c_tilde))
    if residual > tol:
        raise SolverError(f"no-concession residual {residual:.3e} exceeds tol {tol:.3e}")
    q = params.q
    gp = _gamma_prime(params.H.cdf(c_tilde), params.gamma)
    mu_R = Belief(q, 1.0 - q, 0.0)
    mu_NN = Belief(gp * q, gp * (1.0 - q), 1.0 - gp)
    return NoConcessionEquilibrium(
        c_tilde=c_tilde,
        mu_R=mu_R,
        mu_NN=mu_NN,
        p_R=model.protest_prob(mu_R, params),
        p_NN=model.protest_prob(mu_NN, params),
        p_prior=model.protest_prob(model.prior(params), params),
        residual=residual,
    )
