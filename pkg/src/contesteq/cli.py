"""Scenario ingestion, command dispatch, and report emission.

Subcommands: solve, verify, sweep, dynamics, best-response. Scenario and
result documents are JSON; sweep and trajectory output is CSV. Exit codes:
0 success, 2 parse error, 3 invalid spec, 4 no equilibrium found
(alpha > 1), 5 verification failed. The environment variable
CONTEST_EQ_TOL overrides the default certification tolerance of 1e-9.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import eos, proportional
from .best_response import (
    NoBestResponse,
    best_response_eos,
    best_response_proportional,
    grid_oracle,
)
from .core import ContestSpec, concentration, shares as market_shares
from .dynamics import DynamicsConfig, run_dynamics

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID_SPEC = 3
EXIT_NO_EQUILIBRIUM = 4
EXIT_NOT_CERTIFIED = 5

SCENARIO_FIELDS = {"alpha", "costs", "prize", "labels"}
DYNAMICS_FIELDS = {"initial", "max_rounds", "convergence_tol", "damping"}


class ScenarioError(ValueError):
    """File-level problem: unreadable, malformed JSON, unknown or
    missing fields, mismatched lengths."""


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path} is not valid JSON: {exc}") from exc


def load_scenario(path: str) -> tuple[ContestSpec, list[str], dict]:
    """Parse a scenario file into a spec, labels, and an echo block."""
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: scenario must be a JSON object")
    unknown = set(data) - SCENARIO_FIELDS
    if unknown:
        raise ScenarioError(
            f"{path}: unknown scenario field(s): {', '.join(sorted(unknown))}"
        )
    if "costs" not in data:
        raise ScenarioError(f"{path}: scenario is missing 'costs'")
    costs = data["costs"]
    if not isinstance(costs, list) or not all(
        isinstance(c, (int, float)) for c in costs
    ):
        raise ScenarioError(f"{path}: 'costs' must be an array of numbers")
    alpha = data.get("alpha", 1.0)
    prize = data.get("prize", 1.0)
    if not isinstance(alpha, (int, float)) or not isinstance(prize, (int, float)):
        raise ScenarioError(f"{path}: 'alpha' and 'prize' must be numbers")
    labels = data.get("labels")
    if labels is not None:
        if (not isinstance(labels, list)
                or not all(isinstance(s, str) for s in labels)):
            raise ScenarioError(f"{path}: 'labels' must be an array of strings")
        if len(labels) != len(costs):
            raise ScenarioError(f"{path}: 'labels' must align with 'costs'")
    else:
        labels = [f"m{i + 1}" for i in range(len(costs))]
    spec = ContestSpec(costs=tuple(costs), alpha=float(alpha),
                       prize=float(prize))  # ValueError -> invalid spec
    echo = {"alpha": spec.alpha, "costs": list(spec.costs),
            "prize": spec.prize, "labels": labels}
    return spec, labels, echo


def load_profile(path: str, n: int) -> np.ndarray:
    """Parse an investment profile: a bare JSON array, an object with an
    'investments' field, or a solve result document (its first
    equilibrium block is taken)."""
    data = _load_json(path)
    if isinstance(data, dict) and "equilibria" in data:
        blocks = data["equilibria"]
        if not isinstance(blocks, list) or not blocks:
            raise ScenarioError(f"{path}: result document has no equilibria")
        data = blocks[0]
    if isinstance(data, dict):
        if "investments" not in data:
            raise ScenarioError(f"{path}: profile object needs 'investments'")
        data = data["investments"]
    if not isinstance(data, list) or not all(
        isinstance(q, (int, float)) for q in data
    ):
        raise ScenarioError(f"{path}: investments must be an array of numbers")
    if len(data) != n:
        raise ScenarioError(
            f"{path}: profile has {len(data)} investments, scenario has {n}"
        )
    return np.asarray(data, dtype=float)


def certification_tolerance() -> float:
    raw = os.environ.get("CONTEST_EQ_TOL")
    if raw is None:
        return eos.CERT_TOL
    try:
        tol = float(raw)
    except ValueError as exc:
        raise ScenarioError(f"CONTEST_EQ_TOL={raw!r} is not a number") from exc
    if not tol > 0:
        raise ScenarioError("CONTEST_EQ_TOL must be positive")
    return tol


def _json_safe(obj):
    """Replace non-finite floats with None so documents stay valid JSON."""
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _emit_document(doc: dict, out: Optional[str]) -> None:
    text = json.dumps(_json_safe(doc), indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _concentration_block(spec: ContestSpec, investments) -> dict:
    report = concentration(spec, investments)
    return {
        "participant_count": report.participant_count,
        "hhi": report.hhi,
        "top_k_shares": list(report.top_k_shares),
        "rent_dissipation": report.rent_dissipation,
    }


def _utilities(spec: ContestSpec, investments, shares) -> list[float]:
    return [
        spec.prize * x - c * q
        for x, c, q in zip(shares, spec.costs, investments)
    ]


def _certificate_block(cert: eos.EquilibriumCertificate,
                       labels: list[str]) -> dict:
    return {
        "certified": cert.certified,
        "tolerance": cert.tolerance,
        "worst_slack": cert.worst_slack,
        "miners": [
            {
                "label": labels[v.miner],
                "investment": v.investment,
                "utility": v.utility,
                "best_utility": v.best_utility,
                "slack": v.slack,
                "best_responses": list(v.best_responses),
                "marginal": v.marginal,
                "note": v.note,
            }
            for v in cert.verdicts
        ],
    }


def cmd_solve(args) -> int:
    spec, labels, echo = load_scenario(args.scenario)
    tol = certification_tolerance()
    doc = {"schema_version": SCHEMA_VERSION, "scenario": echo}
    if spec.alpha == 1.0:
        eq = proportional.solve_equilibrium(spec)
        block = {
            "c_star": eq.c_star,
            "participants": [labels[i] for i in eq.participants],
            "investments": list(eq.investments),
            "shares": list(eq.shares),
            "utilities": _utilities(spec, eq.investments, eq.shares),
            "total_investment": eq.total_investment,
            "concentration": _concentration_block(spec, eq.investments),
        }
        doc["model"] = "proportional"
        doc["equilibria"] = [block]
        doc["concentration"] = block["concentration"]
        doc["diagnostics"] = {
            "method": eq.method,
            "iterations": eq.iterations,
            "residual": eq.residual,
        }
        _emit_document(doc, args.out)
        if args.out:
            print(
                f"proportional equilibrium: c* = {_fmt(eq.c_star)}, "
                f"{len(eq.participants)} of {spec.n} miners participate"
            )
            for i in eq.participants:
                print(f"  {labels[i]}: q = {_fmt(eq.investments[i])}, "
                      f"share = {_fmt(eq.shares[i])}")
        return EXIT_OK
    equilibria = eos.enumerate_equilibria(spec, tol=tol)
    blocks = []
    for eq in equilibria:
        blocks.append({
            "participants": [labels[i] for i in eq.participants],
            "investments": list(eq.investments),
            "shares": list(eq.shares),
            "utilities": _utilities(spec, eq.investments, eq.shares),
            "power_scale": eq.power_scale,
            "marginal": [labels[i] for i in eq.certificate.marginal_miners],
            "certificate": {
                "certified": eq.certificate.certified,
                "tolerance": eq.certificate.tolerance,
                "worst_slack": eq.certificate.worst_slack,
            },
            "concentration": _concentration_block(spec, eq.investments),
        })
    doc["model"] = "eos"
    doc["equilibria"] = blocks
    if blocks:
        doc["concentration"] = blocks[0]["concentration"]
    doc["diagnostics"] = {
        "method": "set-enumeration",
        "participation_cap": eos.participation_cap(spec.alpha),
        "equilibrium_count": len(blocks),
        "tolerance": tol,
    }
    _emit_document(doc, args.out)
    if args.out:
        print(f"economies-of-scale model: {len(blocks)} certified "
              f"equilibria (alpha = {_fmt(spec.alpha)})")
    if not blocks:
        print("no pure-strategy equilibrium found", file=sys.stderr)
        return EXIT_NO_EQUILIBRIUM
    return EXIT_OK


def cmd_verify(args) -> int:
    spec, labels, echo = load_scenario(args.scenario)
    q = load_profile(args.profile, spec.n)
    tol = certification_tolerance()
    cert = eos.verify_equilibrium(spec, q, tol)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "scenario": echo,
        "profile": q.tolist(),
        "verdict": "certified" if cert.certified else "rejected",
        "certificate": _certificate_block(cert, labels),
    }
    _emit_document(doc, args.out)
    if args.out:
        print(f"verdict: {doc['verdict']} "
              f"(worst slack {_fmt(cert.worst_slack)}, tol {_fmt(tol)})")
    return EXIT_OK if cert.certified else EXIT_NOT_CERTIFIED


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ScenarioError("--grid must be lo:hi:steps")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ScenarioError(f"bad --grid {text!r}: {exc}") from exc
    if steps < 1 or not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ScenarioError(f"bad --grid {text!r}")
    return np.linspace(lo, hi, steps)


SWEEP_COLUMNS = ["param", "value", "status", "participant_count", "hhi",
                 "top1_share", "total_investment", "rent_dissipation"]


def _sweep_spec(base: ContestSpec, param: str, value: float) -> ContestSpec:
    if param == "alpha":
        return ContestSpec(base.costs, alpha=value, prize=base.prize)
    if param == "cost_scale":
        return ContestSpec(tuple(c * value for c in base.costs),
                           alpha=base.alpha, prize=base.prize)
    return ContestSpec(base.costs, alpha=base.alpha, prize=value)


def cmd_sweep(args) -> int:
    spec, _, _ = load_scenario(args.scenario)
    grid = _parse_grid(args.grid)
    tol = certification_tolerance()
    rows = []
    for value in grid:
        value = float(value)
        status = "ok"
        if args.param == "alpha":
            # equilibrium existence is only assured on [1, 2]
            clipped = min(max(value, 1.0), 2.0)
            if clipped != value:
                status = "clipped"
                value = clipped
        elif value <= 0:
            rows.append([args.param, _fmt(value), "invalid", "", "", "", "", ""])
            continue
        sub = _sweep_spec(spec, args.param, value)
        if sub.alpha == 1.0:
            investments = proportional.solve_equilibrium(sub).investments
        else:
            equilibria = eos.enumerate_equilibria(sub, tol=tol)
            if not equilibria:
                rows.append([args.param, _fmt(value), "no_equilibrium",
                             "", "", "", "", ""])
                continue
            # report the most decentralized certified equilibrium
            investments = max(
                equilibria, key=lambda e: len(e.participants)
            ).investments
        report = concentration(sub, investments)
        rows.append([
            args.param, _fmt(value), status,
            str(report.participant_count), _fmt(report.hhi),
            _fmt(report.top_k_shares[0]),
            _fmt(sum(investments)), _fmt(report.rent_dissipation),
        ])
    with open(args.out, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(SWEEP_COLUMNS)
        writer.writerows(rows)
    print(f"wrote {len(rows)} sweep rows to {args.out}")
    return EXIT_OK


def load_dynamics_config(path: str, spec: ContestSpec,
                         seed: Optional[int]) -> DynamicsConfig:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: dynamics config must be a JSON object")
    unknown = set(data) - DYNAMICS_FIELDS
    if unknown:
        raise ScenarioError(
            f"{path}: unknown dynamics field(s): {', '.join(sorted(unknown))}"
        )
    initial = data.get("initial", "random")
    if initial == "random":
        rng = np.random.default_rng(0 if seed is None else seed)
        scale = spec.prize / float(np.mean(spec.costs))
        initial = (scale * 10.0 ** rng.uniform(-2.0, 0.0, spec.n)).tolist()
    if not isinstance(initial, list) or len(initial) != spec.n:
        raise ScenarioError(
            f"{path}: 'initial' must be \"random\" or an array of "
            f"{spec.n} numbers"
        )
    return DynamicsConfig(
        initial_profile=tuple(initial),
        max_rounds=int(data.get("max_rounds", 10_000)),
        convergence_tol=float(data.get("convergence_tol", 1e-10)),
        damping=float(data.get("damping", 1.0)),
    )


def cmd_dynamics(args) -> int:
    spec, labels, _ = load_scenario(args.scenario)
    config = load_dynamics_config(args.config, spec, args.seed)
    # terminal certification is looser (1e-8) than solver certification
    # unless explicitly overridden
    verify_tol = (certification_tolerance()
                  if "CONTEST_EQ_TOL" in os.environ else 1e-8)
    trajectory = run_dynamics(spec, config, verify_tol=verify_tol)
    with open(args.out, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["round", "miner_label", "investment", "share",
                         "utility"])
        for rnd_index, profile in enumerate(trajectory.profiles[1:], start=1):
            x = market_shares(spec, profile).shares
            for i, q in enumerate(profile):
                writer.writerow([
                    rnd_index, labels[i], _fmt(q), _fmt(x[i]),
                    _fmt(spec.prize * x[i] - spec.costs[i] * q),
                ])
        f.write(f"# status={trajectory.status} "
                f"rounds_used={trajectory.rounds_used}\n")
    print(f"status: {trajectory.status} after {trajectory.rounds_used} rounds")
    return EXIT_OK


def cmd_best_response(args) -> int:
    spec, labels, echo = load_scenario(args.scenario)
    q = load_profile(args.profile, spec.n)
    if args.miner in labels:
        miner = labels.index(args.miner)
    else:
        try:
            miner = int(args.miner)
        except ValueError as exc:
            raise ScenarioError(
                f"--miner {args.miner!r} is neither a label nor an index"
            ) from exc
        if not 0 <= miner < spec.n:
            raise ScenarioError(f"--miner index {miner} out of range")
    mask = np.arange(spec.n) != miner
    opposition = float((q[mask] ** spec.alpha).sum())
    cost = spec.costs[miner]
    try:
        if spec.alpha == 1.0:
            result = best_response_proportional(cost, opposition, spec.prize)
        else:
            result = best_response_eos(cost, spec.alpha, opposition,
                                       spec.prize)
    except NoBestResponse as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_SPEC
    doc = {
        "schema_version": SCHEMA_VERSION,
        "scenario": echo,
        "miner": labels[miner],
        "opposition_power": opposition,
        "best_responses": list(result.optimal_investments),
        "best_utility": result.optimal_utility,
        "interior_candidate": result.interior_candidate,
    }
    agreed = True
    if args.oracle:
        check = grid_oracle(cost, spec.alpha, opposition, prize=spec.prize)
        step = 1e-6 * spec.prize / cost
        distance = min(
            abs(check.optimal_investments[0] - m)
            for m in result.optimal_investments
        )
        agreed = (distance <= 2 * step
                  and abs(check.optimal_utility - result.optimal_utility)
                  <= 1e-8)
        doc["oracle"] = {
            "argmax": check.optimal_investments[0],
            "utility": check.optimal_utility,
            "grid_step": step,
            "agrees": agreed,
        }
    _emit_document(doc, args.out)
    if args.out:
        best = ", ".join(_fmt(m) for m in result.optimal_investments)
        print(f"best response for {labels[miner]}: {{{best}}} "
              f"with utility {_fmt(result.optimal_utility)}")
    if not agreed:
        print("grid oracle disagrees with the analytic best response",
              file=sys.stderr)
        return EXIT_NOT_CERTIFIED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contesteq",
        description="Equilibria of fixed-prize investment contests",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve a scenario for equilibria")
    solve.add_argument("--scenario", required=True)
    solve.add_argument("--out", help="write the result document here "
                                     "(default stdout)")
    solve.set_defaults(func=cmd_solve)

    verify = sub.add_parser("verify", help="certify a profile")
    verify.add_argument("--scenario", required=True)
    verify.add_argument("--profile", required=True)
    verify.add_argument("--out")
    verify.set_defaults(func=cmd_verify)

    sweep = sub.add_parser("sweep", help="tabulate outcomes over a grid")
    sweep.add_argument("--scenario", required=True)
    sweep.add_argument("--param", required=True,
                       choices=["alpha", "cost_scale", "prize"])
    sweep.add_argument("--grid", required=True, metavar="lo:hi:steps")
    sweep.add_argument("--out", required=True)
    sweep.set_defaults(func=cmd_sweep)

    dynamics = sub.add_parser("dynamics", help="run best-response dynamics")
    dynamics.add_argument("--scenario", required=True)
    dynamics.add_argument("--config", required=True,
                          help="dynamics config JSON")
    dynamics.add_argument("--out", required=True, help="trajectory CSV")
    dynamics.add_argument("--seed", type=int,
                          help="seed for a random initial profile")
    dynamics.set_defaults(func=cmd_dynamics)

    bre = sub.add_parser("best-response",
                         help="best response of one miner to a profile")
    bre.add_argument("--scenario", required=True)
    bre.add_argument("--profile", required=True)
    bre.add_argument("--miner", required=True,
                     help="miner label or 0-based index")
    bre.add_argument("--oracle", action="store_true",
                     help="cross-check against the exhaustive grid oracle")
    bre.add_argument("--out")
    bre.set_defaults(func=cmd_best_response)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_INVALID_SPEC


def console() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console()
