"""Command-line interface.

Subcommands: ``sample`` (draw a random matrix), ``solve`` (run a cut
algorithm on a matrix file), ``bipartize`` (run weak bipartization),
``count-sequences`` (exact or expected closed-cycle counts), and
``experiment`` (run a config-driven Monte Carlo sweep).

Exit codes: 0 on success, 1 on invalid input, 2 on runtime failure, 3 when
bipartization failed to terminate and --strict was given.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Optional, Sequence

from . import bipartization, cuts, experiment, textio
from .core import cut_weight, discrepancy
from .sampling import ModelParams, sample_matrix

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUNTIME = 2
EXIT_NONTERMINATION = 3


class CliError(Exception):
    """Invalid command line or input file."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we want exit code 1
        raise CliError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wrig-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser("sample", help="draw a random representation matrix")
    p_sample.add_argument("--n", type=int, required=True, help="vertex count")
    group = p_sample.add_mutually_exclusive_group(required=True)
    group.add_argument("--m", type=int, help="label count")
    group.add_argument("--alpha", type=float, help="label count = floor(n**alpha)")
    group.add_argument("--c", type=float, help="m = n, p = c/n")
    p_sample.add_argument("--p", type=float, help="entry probability (not with --c)")
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--out", help="output path (default: stdout)")

    p_solve = sub.add_parser("solve", help="run a cut algorithm on a matrix file")
    p_solve.add_argument(
        "--algo", required=True, choices=("random", "majority", "exact", "mindisc")
    )
    p_solve.add_argument("--epsilon", type=float, default=0.0)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--in", dest="infile", required=True, help="matrix file")
    p_solve.add_argument("--coloring-out", help="write the coloring here")
    p_solve.add_argument("--json", action="store_true", help="emit a JSON result")

    p_bip = sub.add_parser("bipartize", help="run weak bipartization on a matrix file")
    p_bip.add_argument("--in", dest="infile", required=True)
    p_bip.add_argument("--seed", type=int, default=0)
    p_bip.add_argument("--max-rematch", type=int, default=None)
    p_bip.add_argument("--json", action="store_true")
    p_bip.add_argument(
        "--strict", action="store_true", help="exit 3 if the run does not terminate"
    )

    p_count = sub.add_parser("count-sequences", help="closed vertex-label cycle counts")
    p_count.add_argument("--in", dest="infile", help="matrix file for the exact count")
    p_count.add_argument("--k", type=int, required=True, help="cycle size")
    p_count.add_argument(
        "--expect", action="store_true", help="evaluate the expectation formula instead"
    )
    p_count.add_argument("--n", type=int, help="vertex count (with --expect)")
    p_count.add_argument("--m", type=int, help="label count (with --expect)")
    p_count.add_argument("--p", type=float, help="entry probability (with --expect)")

    p_exp = sub.add_parser("experiment", help="run a JSON-configured experiment")
    p_exp.add_argument("--spec", required=True, help="JSON config file")
    p_exp.add_argument("--workers", type=int, default=None, help="override worker count")
    p_exp.add_argument("--out", default=None, help="override the CSV output path")
    p_exp.add_argument("--summary", default=None, help="override the JSON summary path")
    p_exp.add_argument(
        "--strict",
        action="store_true",
        help="exit 3 if any bipartization trial does not terminate",
    )
    return parser


def _sample_params(args) -> ModelParams:
    if args.c is not None:
        if args.p is not None:
            raise CliError("--p cannot be combined with --c")
        return ModelParams.from_c(args.n, args.c)
    if args.p is None:
        raise CliError("--p is required unless --c is given")
    if args.alpha is not None:
        return ModelParams.from_alpha(args.n, args.alpha, args.p)
    return ModelParams.fixed(args.n, args.m, args.p)


def cmd_sample(args) -> int:
    params = _sample_params(args)
    message = params.regime_warning()
    if message is not None:
        print(f"warning: {message}", file=sys.stderr)
    R = sample_matrix(params, args.seed)
    if args.out:
        textio.write_matrix(R, args.out)
    else:
        sys.stdout.write(textio.format_matrix(R))
    return EXIT_OK


def cmd_solve(args) -> int:
    R = textio.read_matrix(args.infile)
    if args.algo == "random":
        result = cuts.random_cut(R, args.seed)
        coloring, weight = result.coloring, result.weight
    elif args.algo == "majority":
        cfg = cuts.MajorityConfig(epsilon=args.epsilon)
        result = cuts.majority_cut(R, cfg, args.seed)
        coloring, weight = result.coloring, result.weight
    elif args.algo == "exact":
        result = cuts.brute_force_max_cut(R)
        coloring, weight = result.coloring, result.weight
    else:
        coloring, _ = cuts.brute_force_min_discrepancy(R)
        weight = cut_weight(R, coloring)
    if args.coloring_out:
        textio.write_coloring(coloring, args.coloring_out)
    payload = {
        "algorithm": args.algo,
        "weight": weight,
        "discrepancy": discrepancy(R, coloring),
        "n": R.n,
        "m": R.m,
        "seed": args.seed,
    }
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"{args.algo}: weight={weight} discrepancy={payload['discrepancy']}")
    return EXIT_OK


def cmd_bipartize(args) -> int:
    R = textio.read_matrix(args.infile)
    outcome = bipartization.weak_bipartization(R, args.seed, max_rematch=args.max_rematch)
    payload = {
        "terminated": outcome.terminated,
        "iterations": outcome.iterations,
        "zero_strong_cycles": [
            {
                "vertices": [v + 1 for v in seq.vertices],
                "labels": [l + 1 for l in seq.labels],
            }
            for seq in outcome.zero_strong_cycles
        ],
        "label_disjoint": outcome.label_disjoint,
        "cut_weight": None,
        "discrepancy": None,
    }
    if outcome.terminated:
        coloring = bipartization.extract_coloring(outcome)
        payload["cut_weight"] = cut_weight(R, coloring)
        payload["discrepancy"] = discrepancy(R, coloring)
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(
            f"terminated={payload['terminated']} iterations={payload['iterations']} "
            f"zero_strong={len(outcome.zero_strong_cycles)} "
            f"cut_weight={payload['cut_weight']} discrepancy={payload['discrepancy']}"
        )
    if args.strict and not outcome.terminated:
        return EXIT_NONTERMINATION
    return EXIT_OK


def cmd_count_sequences(args) -> int:
    if args.expect:
        if args.n is None or args.m is None or args.p is None:
            raise CliError("--expect needs --n, --m and --p")
        value = bipartization.expected_sequence_count(args.n, args.m, args.p, args.k)
        print(repr(value))
    else:
        if not args.infile:
            raise CliError("either --in or --expect is required")
        R = textio.read_matrix(args.infile)
        print(bipartization.count_sequences_exact(R, args.k))
    return EXIT_OK


def cmd_experiment(args) -> int:
    spec = experiment.ExperimentSpec.from_file(args.spec)
    overrides = {}
    if args.out is not None:
        overrides["output"] = args.out
    if args.summary is not None:
        overrides["summary"] = args.summary
    if overrides:
        spec = dataclasses.replace(spec, **overrides)
    records, stats = experiment.run_experiment(spec, workers=args.workers)
    for grid in stats.grid:
        fraction = grid.termination_fraction
        print(
            f"grid {grid.grid_id}: n={grid.n} m={grid.m} p={grid.p:g} "
            f"trials={grid.trials}"
            + (f" termination={fraction:.3f}" if fraction is not None else "")
        )
    if args.strict and any(r.bipartize_terminated is False for r in records):
        return EXIT_NONTERMINATION
    return EXIT_OK


_COMMANDS = {
    "sample": cmd_sample,
    "solve": cmd_solve,
    "bipartize": cmd_bipartize,
    "count-sequences": cmd_count_sequences,
    "experiment": cmd_experiment,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
