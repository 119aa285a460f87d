"""Command-line front end.

Subcommands: ``dims`` (invariant-subspace table), ``universal`` (analytic and
Monte Carlo average success probability), ``discriminate`` (minimum-error,
minimum-cost or guess-augmented comparison of a state-set scenario),
``multiport`` (click-pattern analysis and realization efficiency) and
``reproduce`` (the full verification suite).

Exit codes: 0 success, 1 verification failure, 2 bad input or size caps,
3 internal self-check failure, 4 degenerate scenario.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import comparison, discrimination, multiport, reproduce, symmetry
from .discrimination import ComparisonScenario, CostMatrix
from .errors import DegenerateScenarioError, DimensionCapError, NumericalCheckError
from .hilbert import PureState, ensure_within_cap
from .sampling import RandomStream

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_SELF_CHECK = 3
EXIT_DEGENERATE = 4

_SCENARIO_FIELDS = {"states", "priors", "n_systems"}
_LOAD_TOL = 1e-9


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int = 2
    d: int = 2
    trials: int = 20_000
    seed: int = 1234
    statistics: str = "boson"
    threshold: bool = False
    costs: Optional[CostMatrix] = None
    scenario_path: Optional[str] = None
    errorfree_guess: bool = False
    output_format: str = "text"
    only: str = ""

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("n and d must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")


def load_scenario(path: str) -> ComparisonScenario:
    """Read a state-set scenario document.

    The file is a JSON object with exactly the fields ``states`` (list of
    amplitude vectors, each amplitude a two-element [re, im] array),
    ``priors`` and ``n_systems``. Norms and the prior sum are validated to
    1e-9 and then renormalized.
    """
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"scenario file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) != _SCENARIO_FIELDS:
        raise ValueError(f"scenario file must have exactly the fields {sorted(_SCENARIO_FIELDS)}")
    states = []
    for i, vector in enumerate(doc["states"]):
        try:
            amps = np.array([complex(re, im) for re, im in vector])
        except (TypeError, ValueError) as exc:
            raise ValueError(f"state {i}: amplitudes must be [re, im] pairs") from exc
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > _LOAD_TOL:
            raise ValueError(f"state {i} has norm {norm!r}, expected 1 within {_LOAD_TOL}")
        states.append(PureState.normalized(amps))
    priors = np.asarray(doc["priors"], dtype=float)
    if abs(priors.sum() - 1.0) > _LOAD_TOL:
        raise ValueError(f"priors sum to {priors.sum()!r}, expected 1 within {_LOAD_TOL}")
    return ComparisonScenario(states, priors / priors.sum(), int(doc["n_systems"]))


def _pattern_key(pattern) -> str:
    return ",".join(str(x) for x in pattern)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_dims(config: RunConfig) -> dict:
    ensure_within_cap(config.d ** config.n)
    rows = []
    for shape in symmetry.partitions_of(config.n, min(config.n, config.d)):
        rows.append({
            "partition": str(shape),
            "dimension": symmetry.subspace_dimension(shape, config.d),
            "max_identical": symmetry.max_identical(shape),
        })
    total = sum(r["dimension"] for r in rows)
    full = config.d ** config.n
    if total != full:
        raise NumericalCheckError(f"subspace dimensions sum to {total}, full space is {full}")
    return {"n": config.n, "d": config.d, "rows": rows,
            "total_dimension": total, "full_space_dimension": full}


def cmd_universal(config: RunConfig) -> dict:
    analytic = comparison.success_probability_analytic(config.n, config.d)
    est, se = comparison.success_probability_mc(
        config.n, config.d, config.trials, RandomStream(config.seed)
    )
    if abs(est - analytic) > 5 * se:
        raise NumericalCheckError(
            f"Monte Carlo estimate {est!r} deviates from {analytic!r} by more than 5 std errors"
        )
    return {"n": config.n, "d": config.d, "trials": config.trials, "seed": config.seed,
            "analytic": analytic, "mc_estimate": est, "std_error": se}


def cmd_discriminate(config: RunConfig) -> dict:
    if config.scenario_path:
        scenario = load_scenario(config.scenario_path)
        source = config.scenario_path
    else:
        scenario = discrimination.trine_scenario()
        source = "trine"
    pair = discrimination.build_hypotheses(scenario)
    stream = RandomStream(config.seed)
    report = {
        "scenario": source,
        "n_systems": scenario.n_systems,
        "trials": config.trials,
        "seed": config.seed,
        "p_same": pair.p_same,
        "p_diff": pair.p_diff,
    }
    if config.errorfree_guess:
        guess_errors = discrimination.inconclusive_guess_errors(scenario)
        best_guess = min(guess_errors, key=guess_errors.get)
        strategy = comparison.universal_strategy(scenario.n_systems, scenario.dim)
        est, se = discrimination.simulate_strategy(
            strategy, scenario, config.trials, stream, inconclusive_guess=best_guess
        )
        report.update({
            "mode": "errorfree_guess",
            "guess_on_inconclusive": best_guess,
            "error": guess_errors[best_guess],
            "empirical_error": est,
            "empirical_std_error": se,
        })
        return report

    weighted = pair.p_same * pair.rho_same.entries - pair.p_diff * pair.rho_diff.entries
    if config.costs is not None:
        weighted = (
            pair.p_same * (config.costs.c_ds - config.costs.c_ss) * pair.rho_same.entries
            - pair.p_diff * (config.costs.c_sd - config.costs.c_dd) * pair.rho_diff.entries
        )
        strategy, value = discrimination.bayes(pair, config.costs)
        report["mode"] = "bayes"
        report["costs"] = {"c_ss": config.costs.c_ss, "c_dd": config.costs.c_dd,
                           "c_sd": config.costs.c_sd, "c_ds": config.costs.c_ds}
        report["bayes_cost"] = value
    else:
        strategy, value = discrimination.helstrom(pair)
        report["mode"] = "helstrom"
        report["p_error"] = value
    report["eigenvalues"] = sorted(np.linalg.eigvalsh(weighted).tolist(), reverse=True)
    est, se = discrimination.simulate_strategy(strategy, scenario, config.trials, stream)
    report["empirical_error"] = est
    report["empirical_std_error"] = se
    return report


def cmd_multiport(config: RunConfig) -> dict:
    statistics = multiport.Statistics(config.statistics)
    certain = sorted(multiport.unambiguous_patterns(config.n, statistics))
    inp = multiport.MultiportInput([PureState([1.0])] * config.n, statistics)
    identical = multiport.output_distribution(inp, multiport.dft_multiport(config.n))
    est, se = multiport.realization_efficiency_mc(
        config.n, config.d, statistics, config.trials,
        RandomStream(config.seed), threshold=config.threshold,
    )
    report = {
        "n": config.n, "d": config.d,
        "statistics": statistics.value,
        "threshold": config.threshold,
        "trials": config.trials, "seed": config.seed,
        "unambiguous_patterns": [_pattern_key(p) for p in certain],
        "identical_distribution": {_pattern_key(p): prob for p, prob in identical.items()},
        "efficiency": {"estimate": est, "std_error": se},
        "analytic_bound": comparison.success_probability_analytic(config.n, config.d),
    }
    if config.threshold:
        signatures = sorted(multiport.unambiguous_threshold_signatures(config.n, statistics))
        report["unambiguous_threshold_signatures"] = [_pattern_key(s) for s in signatures]
    return report


def cmd_reproduce(config: RunConfig) -> int:
    results = reproduce.run_all(config.seed, only=config.only)
    for result in results:
        print(result.line())
    failed = sum(1 for r in results if not r.passed)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFICATION_FAILED


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _flat_items(report: dict, prefix: str = ""):
    for key, value in report.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flat_items(value, f"{name}.")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, row in enumerate(value):
                yield from _flat_items(row, f"{name}.{i}.")
        elif isinstance(value, list):
            yield name, ";".join(str(v) for v in value)
        else:
            yield name, value


def render(report: dict, output_format: str) -> str:
    if output_format == "json":
        return json.dumps(report, indent=2)
    if output_format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in _flat_items(report):
            writer.writerow([key, value])
        return buffer.getvalue().rstrip("\n")
    lines = []
    for key, value in _flat_items(report):
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _cost_matrix(text: str) -> CostMatrix:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("costs must be c_ss,c_dd,c_sd,c_ds")
    try:
        c_ss, c_dd, c_sd, c_ds = (float(p) for p in parts)
        return CostMatrix(c_ss=c_ss, c_dd=c_dd, c_sd=c_sd, c_ds=c_ds)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statecomp",
        description="Collective comparison of quantum states: exact subspace "
                    "projections, optimal two-hypothesis verdicts and their "
                    "linear-optics realization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, trials_default=20_000):
        p.add_argument("--seed", type=int, default=1234, help="root random seed")
        p.add_argument("--trials", type=_positive_int, default=trials_default,
                       help="Monte Carlo sample count")
        p.add_argument("--format", choices=("json", "csv", "text"), default="text",
                       dest="output_format", help="report rendering")

    p = sub.add_parser("dims", help="invariant-subspace dimension table")
    p.add_argument("--n", type=_positive_int, required=True, help="number of systems")
    p.add_argument("--d", type=_positive_int, required=True, help="levels per system")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text",
                   dest="output_format")

    p = sub.add_parser("universal", help="universal comparison success probability")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--d", type=_positive_int, required=True)
    add_common(p)

    p = sub.add_parser("discriminate", help="minimum-error / minimum-cost comparison")
    p.add_argument("--scenario", dest="scenario_path", default=None,
                   help="path to a scenario file (default: built-in trine)")
    p.add_argument("--costs", type=_cost_matrix, default=None,
                   help="verdict costs as c_ss,c_dd,c_sd,c_ds")
    p.add_argument("--errorfree-guess", action="store_true",
                   help="score the universal strategy plus an optimal guess instead")
    add_common(p)

    p = sub.add_parser("multiport", help="multiport click patterns and efficiency")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--statistics", choices=("boson", "fermion"), default="boson")
    p.add_argument("--threshold", action="store_true",
                   help="score threshold (non-counting) detectors")
    add_common(p)

    p = sub.add_parser("reproduce", help="run the full verification suite")
    p.add_argument("--seed", type=int, default=reproduce.DEFAULT_SEED)
    p.add_argument("--only", default="", help="run only checks whose id contains this")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            command=args.command,
            n=getattr(args, "n", 2),
            d=getattr(args, "d", 2),
            trials=getattr(args, "trials", 20_000),
            seed=getattr(args, "seed", 1234),
            statistics=getattr(args, "statistics", "boson"),
            threshold=getattr(args, "threshold", False),
            costs=getattr(args, "costs", None),
            scenario_path=getattr(args, "scenario_path", None),
            errorfree_guess=getattr(args, "errorfree_guess", False),
            output_format=getattr(args, "output_format", "text"),
            only=getattr(args, "only", ""),
        )
        if config.command == "reproduce":
            return cmd_reproduce(config)
        handler = {
            "dims": cmd_dims,
            "universal": cmd_universal,
            "discriminate": cmd_discriminate,
            "multiport": cmd_multiport,
        }[config.command]
        report = handler(config)
    except (ValueError, OSError, DimensionCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except NumericalCheckError as exc:
        print(f"self-check failed: {exc}", file=sys.stderr)
        return EXIT_SELF_CHECK
    except DegenerateScenarioError as exc:
        print(f"degenerate scenario: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    print(render(report, config.output_format))
    return EXIT_OK
