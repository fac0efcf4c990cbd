"""Command-line surface: classify, order, sample, experiment, convert.

Exit codes: 0 success, 2 parse/input problem, 3 invariant violation,
4 missing capability, 5 size or budget overrun.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys

from . import automaton as autio
from .classify import classify
from .elements import Element
from .errors import (
    CapabilityError,
    InputDomainError,
    InvariantError,
    MealyError,
    ParseError,
    SamplingExhaustedError,
    SizeBudgetError,
)
from .experiments import exp_bireversible, exp_bounded, exp_finitary_fraction, exp_reset
from .order import Budgets, _class_certificates, _pipeline
from .sample import RNG_IDENTITY, SamplerSpec, sample_from_spec

EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_CAPABILITY = 4
EXIT_SIZE = 5


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _echo_seed(seed: int) -> None:
    print(f"seed: {seed}", file=sys.stderr)
    print(f"rng: {RNG_IDENTITY}", file=sys.stderr)


def _budgets(args) -> Budgets:
    return Budgets(
        signalizer_vertices=args.signalizer_vertices,
        power_cap=args.power_cap,
        word_len_cap=args.word_len_cap,
        section_budget=args.section_budget,
    )


def cmd_classify(args) -> int:
    a = autio.load(args.input)
    report = classify(a, strict=args.strict)
    _emit(json.dumps(report.to_json_dict(), indent=2) + "\n", args.output)
    return 0


def cmd_order(args) -> int:
    a = autio.load(args.input)
    element = Element.from_names(a, args.element)
    cert = _pipeline(element, _budgets(args), _class_certificates(a), class_first=True)
    _emit(json.dumps(cert.to_json_dict(), indent=2) + "\n", args.output)
    return 0


def cmd_sample(args) -> int:
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    _echo_seed(seed)
    skeleton = autio.load(args.skeleton) if args.skeleton else None
    for i in range(args.count):
        spec = SamplerSpec(
            family=args.family,
            n=args.states,
            k=args.letters,
            seed=seed,
            trial_index=args.trial_index + i,
            degree=args.degree if args.family == "pol" else None,
        )
        a = sample_from_spec(spec, skeleton=skeleton)
        if args.count == 1:
            _emit(a.dumps(), args.output)
        else:
            base = args.output or "sample"
            path = f"{base}.{spec.trial_index}.json"
            _emit(a.dumps(), path)
            print(f"wrote {path}", file=sys.stderr)
    return 0


def cmd_experiment(args) -> int:
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    _echo_seed(seed)
    name = args.name
    if name == "bireversible":
        report = exp_bireversible(args.states, args.letters, args.trials, seed, args.mode)
    elif name == "reset":
        report = exp_reset(args.letters, args.trials, seed, args.mode)
    elif name == "bounded":
        report = exp_bounded(args.states, args.letters, args.trials, seed)
    elif name == "finitary-fraction":
        report = exp_finitary_fraction(args.states, args.letters)
    else:
        raise InputDomainError(f"unknown experiment {name!r}")
    if args.trials_table:
        report.save_trial_table(args.trials_table)
    _emit(json.dumps(report.to_json_dict(), indent=2) + "\n", args.output)
    return 0


def cmd_convert(args) -> int:
    a = autio.load(args.input)
    if args.format == "native":
        _emit(a.dumps(), args.output)
    else:
        _emit(a.to_dot(), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mealy",
        description="Mealy automaton algebra, order certificates, and experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="class membership report for an automaton file")
    p.add_argument("input")
    p.add_argument("--strict", action="store_true", help="reject undeclared identity states")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("order", help="order certificate for a generator or word")
    p.add_argument("input")
    p.add_argument("element", nargs="+", help="state names, e.g. 'a b^-1'")
    p.add_argument("--signalizer-vertices", type=int, default=10_000)
    p.add_argument("--power-cap", type=int, default=64)
    p.add_argument("--word-len-cap", type=int, default=12)
    p.add_argument("--section-budget", type=int, default=100_000)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("sample", help="draw automata from a class-uniform sampler")
    p.add_argument(
        "--family",
        required=True,
        choices=["invertible-reversible", "reset-unfolded", "reset-minimal", "pol", "pol0-conditional"],
    )
    p.add_argument("--states", type=int, default=2)
    p.add_argument("--letters", type=int, default=2)
    p.add_argument(
        "--degree", type=int, default=0,
        help="activity degree for the pol family (-1 = finitary); rejection-based, small sizes only",
    )
    p.add_argument("--skeleton", help="skeleton file for the conditional family")
    p.add_argument("--seed", type=int)
    p.add_argument("--trial-index", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("experiment", help="run a bound-reproduction experiment")
    p.add_argument("--name", required=True, choices=["bireversible", "reset", "bounded", "finitary-fraction"])
    p.add_argument("--states", type=int, default=3)
    p.add_argument("--letters", type=int, default=2)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--mode", choices=["exact", "sampled"], default="sampled")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials-table", help="write the flat per-trial CSV here")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("convert", help="rewrite an automaton file (native or DOT)")
    p.add_argument("input")
    p.add_argument("--format", choices=["native", "dot"], default="native")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convert)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, InputDomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except CapabilityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (SizeBudgetError, SamplingExhaustedError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SIZE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except MealyError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
