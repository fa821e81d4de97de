"""Command-line entry point.

Subcommands: check, solve-mild, solve-severe, simulate, estimate, sweep,
verify. One UTF-8 JSON config format (flat parameter keys plus nested G, H
distribution objects); unknown keys are rejected. All output is
deterministic given the config (and seed): stable key order and fixed
12-significant-digit float formatting make repeated runs byte-identical.

Exit codes: 0 success, 2 assumption violated, 3 solver failure,
4 verification failure, 5 bad config.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

from . import model, simulate, sweep, verify
from .errors import (
    AssumptionError,
    ConfigError,
    DomainError,
    EmptySweepError,
    EstimationError,
    RepgameError,
    SolverError,
)
from .model import ModelParams
from .solver_mild import no_concession_equilibrium, solve_mild
from .solver_severe import solve_severe

EXIT_OK = 0
EXIT_ASSUMPTION = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4
EXIT_CONFIG = 5


# -- canonical output ---------------------------------------------------------


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise SolverError(f"non-finite value in output: {x}")
    return f"{x:.12g}"


def _dumps(obj, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{json.dumps(str(k))}: {_dumps(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{_dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    return json.dumps(obj)


def canonical_json(obj) -> str:
    return _dumps(obj) + "\n"


def _to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "to_dict"):
            return _to_jsonable(obj.to_dict())
        return _to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {k: _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    return obj


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- config -------------------------------------------------------------------


def load_params(path: str) -> ModelParams:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        return ModelParams.from_dict(raw)
    except DomainError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


# -- equilibrium serialization --------------------------------------------------


def mild_eq_dict(eq) -> dict:
    return {
        "c_tilde": eq.c_tilde,
        "kappa": eq.kappa,
        "gamma_prime": eq.gamma_prime,
        "mu_R": eq.mu_R.to_dict(),
        "mu_NN": eq.mu_NN.to_dict(),
        "q_prime": eq.q_prime,
        "prob_revealed_given_G": eq.prob_revealed_given_G,
        "prob_revealed_given_B": eq.prob_revealed_given_B,
        "prob_revealed": eq.prob_revealed,
        "prob_concealed": eq.prob_concealed,
        "prob_total": eq.prob_total,
        "prob_concession": eq.prob_concession,
        "p_R": eq.p_R,
        "p_NN": eq.p_NN,
        "p_prior": eq.p_prior,
        "D": eq.D,
        "D_lower": eq.D_lower,
        "residual": eq.residual,
    }


def severe_eq_dict(eq) -> dict:
    return {
        "c_tilde_B": eq.c_tilde_B,
        "c_tilde_G": eq.c_tilde_G,
        "corner": eq.corner,
        "mu_R": eq.mu_R.to_dict(),
        "mu_NN": eq.mu_NN.to_dict(),
        "p_R": eq.p_R,
        "p_NN": eq.p_NN,
        "p_prior": eq.p_prior,
        "D": eq.D,
        "multiplicity_note": list(eq.multiplicity_note),
        "residual_B": eq.residual_B,
        "residual_G": eq.residual_G,
    }


# -- subcommands ----------------------------------------------------------------


def _cmd_check(args) -> int:
    params = load_params(args.config)
    mild = model.check_assumption_mild(params)
    severe = model.check_assumption_severe(params)
    if args.regime == "mild":
        report = {"mild": mild.to_dict()}
        ok = mild.ok
    elif args.regime == "severe":
        report = {"severe": severe.to_dict()}
        ok = severe.ok
    else:
        report = {"mild": mild.to_dict(), "severe": severe.to_dict()}
        ok = mild.ok or severe.ok
    _emit(canonical_json(report), args.out)
    return EXIT_OK if ok else EXIT_ASSUMPTION


def _cmd_solve_mild(args) -> int:
    params = load_params(args.config)
    eq = solve_mild(params, tol=args.tol)
    _emit(canonical_json(mild_eq_dict(eq)), args.out)
    return EXIT_OK


def _cmd_solve_severe(args) -> int:
    params = load_params(args.config)
    eq = solve_severe(params, tol=args.tol, scan=args.scan)
    _emit(canonical_json(severe_eq_dict(eq)), args.out)
    return EXIT_OK


def _solve_for_variant(params: ModelParams, variant: str, tol: float):
    if variant == "mild":
        return solve_mild(params, tol=tol)
    if variant == "severe":
        return solve_severe(params, tol=tol)
    return no_concession_equilibrium(params, tol=tol)


def _write_episodes_csv(path: str, arrays) -> None:
    lines = ["theta,c,rho,action,observation,protested,success"]
    theta = arrays["theta"]
    for i in range(theta.shape[0]):
        th = simulate.THETAS[theta[i]]
        c = "" if th == "N" else format_float(float(arrays["c"][i]))
        lines.append(
            ",".join(
                (
                    th,
                    c,
                    format_float(float(arrays["rho"][i])),
                    simulate.ACTIONS[arrays["action"][i]],
                    simulate.OBSERVATIONS[arrays["observation"][i]],
                    "true" if arrays["protested"][i] else "false",
                    "true" if arrays["success"][i] else "false",
                )
            )
        )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_simulate(args) -> int:
    params = load_params(args.config)
    eq = _solve_for_variant(params, args.variant, args.tol)
    stats = simulate.run_simulation(params, eq, args.n, args.seed)
    try:
        estimates = simulate.estimate_from_sim(stats).to_dict()
    except EstimationError as exc:
        estimates = {"error": str(exc)}
    if args.episodes_out:
        arrays = simulate.simulate_arrays(params, eq, args.n, args.seed)
        _write_episodes_csv(args.episodes_out, arrays)
    payload = {
        "variant": args.variant,
        "n": args.n,
        "seed": args.seed,
        "stats": stats.to_dict(),
        "estimates": estimates,
    }
    _emit(canonical_json(payload), args.out)
    return EXIT_OK


def _cmd_estimate(args) -> int:
    if args.stats:
        try:
            with open(args.stats, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"{args.stats}: {exc}") from exc
        try:
            stats = simulate.SimStats.from_dict(raw)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{args.stats}: not a stats file: {exc}") from exc
        report = simulate.estimate_from_sim(stats)
    else:
        needed = (args.q_hat, args.q_prime_hat, args.p_hat)
        if any(v is None for v in needed):
            raise ConfigError("estimate needs --stats or all of --q-hat --q-prime-hat --p-hat")
        report = simulate.estimate_plugin(
            args.q_hat, args.q_prime_hat, args.p_hat, args.p_r_hat, args.p_nn_hat
        )
    _emit(canonical_json(report.to_dict()), args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    params = load_params(args.config)
    spec = sweep.SweepSpec(
        axis=args.axis,
        start=args.start,
        end=args.end,
        steps=args.steps,
        base=params,
        variant=args.variant,
    )
    rows = sweep.run_sweep(spec)
    if args.format == "json":
        _emit(canonical_json([r.to_dict(spec.variant) for r in rows]), args.out)
        return EXIT_OK
    cols = sweep.MILD_COLUMNS if spec.variant == "mild" else sweep.SEVERE_COLUMNS
    lines = [",".join(cols)]
    for row in rows:
        cells = []
        for col in cols:
            value = getattr(row, col)
            if value is None:
                cells.append("")
            elif isinstance(value, bool):
                cells.append("true" if value else "false")
            else:
                cells.append(format_float(value))
        lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    params = load_params(args.config)
    mild_report = model.check_assumption_mild(params)
    severe_report = model.check_assumption_severe(params)
    if not (mild_report.ok or severe_report.ok):
        raise AssumptionError(
            f"both regime checks failed: mild {mild_report.failed_clauses()}, "
            f"severe {severe_report.failed_clauses()}",
            mild_report,
        )
    payload: dict = {}
    failed = False
    if mild_report.ok:
        eq = solve_mild(params, tol=args.tol)
        cert = verify.certify_equilibrium(params, eq, grid=args.grid)
        ok = (
            cert.max_regret <= 1e-9
            and cert.bayes_gap <= 1e-10
            and cert.identity_gaps["reveal_probability"] > 0.0
        )
        payload["mild"] = {"ok": ok, "certificate": cert.to_dict()}
        failed |= not ok
    if severe_report.ok:
        eq = solve_severe(params, tol=args.tol)
        cert = verify.certify_equilibrium(params, eq, grid=args.grid)
        ok = (
            cert.max_regret <= 1e-9
            and cert.bayes_gap <= 1e-10
            and cert.identity_gaps["reveal_probability"] > 0.0
        )
        payload["severe"] = {"ok": ok, "certificate": cert.to_dict()}
        failed |= not ok
    for regime in ("mild", "severe"):
        law = verify.sign_law_check(regime, n_draws=args.draws, seed=args.seed)
        payload[f"sign_law_{regime}"] = law.to_dict()
        failed |= not law.ok
    payload["ok"] = not failed
    _emit(canonical_json(payload), args.out)
    return EXIT_VERIFY if failed else EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repgame",
        description="Equilibrium lab for a repression game with concealment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="JSON model parameters")
        p.add_argument("--out", default=None, help="write output to this path instead of stdout")

    p = sub.add_parser("check", help="run the regime assumption checks")
    add_common(p)
    p.add_argument("--regime", choices=("mild", "severe", "auto"), default="auto")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("solve-mild", help="solve the mild-conflict equilibrium")
    add_common(p)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=_cmd_solve_mild)

    p = sub.add_parser("solve-severe", help="solve the severe-conflict equilibrium")
    add_common(p)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--scan", type=int, default=400, help="multiplicity grid-scan resolution")
    p.set_defaults(func=_cmd_solve_severe)

    p = sub.add_parser("simulate", help="seeded Monte Carlo run under a solved equilibrium")
    add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--variant", choices=("mild", "severe", "no-concession"), default="mild")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--episodes-out", default=None, help="write per-episode CSV here")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("estimate", help="plug-in estimates from stats or raw values")
    p.add_argument("--stats", default=None, help="stats JSON produced by simulate")
    p.add_argument("--q-hat", type=float, default=None)
    p.add_argument("--q-prime-hat", type=float, default=None)
    p.add_argument("--p-hat", type=float, default=None)
    p.add_argument("--p-r-hat", type=float, default=None)
    p.add_argument("--p-nn-hat", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("sweep", help="one-axis comparative statics table")
    add_common(p)
    p.add_argument("--axis", choices=sweep.SWEEP_AXES, required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--end", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--variant", choices=("mild", "severe"), default="mild")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify", help="certify equilibria and randomized laws")
    add_common(p)
    p.add_argument("--grid", type=int, default=1000)
    p.add_argument("--draws", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AssumptionError as exc:
        print(f"assumption violated: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(canonical_json(exc.report.to_dict()), file=sys.stderr, end="")
        return EXIT_ASSUMPTION
    except (SolverError, EstimationError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except EmptySweepError as exc:
        print(f"empty sweep: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except DomainError as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RepgameError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    raise SystemExit(main())
