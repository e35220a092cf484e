"""``stmod`` command line interface.

Every subcommand prints one JSON object (or a CSV table with
``--format csv`` where supported) to stdout or ``--out``. Errors are
printed to stderr as JSON; the exit code is 2 for usage errors and 1 for
any other failure.
"""
import argparse
import json
import sys
from typing import List, Optional

from ray_stmod.bench import (BENCH_TASKS, bench_replacement,
                             free_suspension_power)
from ray_stmod.constants import SUSPEND_TASK
from ray_stmod.exceptions import StmodError, UsageError
from ray_stmod.experiment import (PRESETS, ExperimentConfig,
                                  ExperimentRunner)
from ray_stmod.field import parse_field
from ray_stmod.ghost import create_random_module, generating_length_m
from ray_stmod.group import parse_group
from ray_stmod.module import Module, trivial
from ray_stmod.projective import decompose_regular, projective_free_summand
from ray_stmod.serialization import load_module, module_to_dict
from ray_stmod.stable import suspension_power
from ray_stmod.utils import dumps, write_output

FORMATS = ("json", "csv")


def _add_module_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--in", dest="input", default=None, help="Module JSON file.")
    _add_group_args(parser, required=False)


def _add_group_args(parser: argparse.ArgumentParser,
                    required: bool = True) -> None:
    parser.add_argument(
        "--group", default=None, required=required,
        help="Group preset such as C9, A4, Q8 or C3xS3.")
    parser.add_argument(
        "--field", default=None, required=required,
        help="Field such as GF3 or GF4.")


def _add_common_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="Output path.")
    parser.add_argument("--format", choices=FORMATS, default="json")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stmod",
        description="Exact computations in the stable module category of "
        "a finite group algebra.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("suspend", help="dim of Sigma^n of a module")
    _add_module_args(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--emit-module", action="store_true")
    _add_common_args(p)

    p = sub.add_parser("gel", help="range-m generating length")
    _add_module_args(p)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--cap", type=int, default=None)
    _add_common_args(p)

    p = sub.add_parser(
        "projfree",
        help="projective-free summand of a module file, or of Sigma^n k "
        "built with free modules")
    _add_module_args(p)
    p.add_argument("-n", type=int, default=None)
    p.add_argument("--emit-module", action="store_true")
    _add_common_args(p)

    p = sub.add_parser("decompose", help="indecomposable projectives of kG")
    _add_group_args(p)
    _add_common_args(p)

    p = sub.add_parser("random", help="random module of bounded length")
    _add_group_args(p)
    p.add_argument("-n", type=int, required=True, help="Steps.")
    p.add_argument("-s", type=int, default=3, help="Max summands per step.")
    p.add_argument("-m", type=int, default=1, help="Sphere degree range.")
    p.add_argument("--emit-module", action="store_true")
    _add_common_args(p)

    p = sub.add_parser("experiment", help="length distribution of random "
                       "modules")
    p.add_argument("--preset", choices=sorted(PRESETS), default=None)
    _add_group_args(p, required=False)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("-n", type=int, default=None, help="Steps.")
    p.add_argument("-s", type=int, default=None, help="Max summands.")
    p.add_argument("-m", type=int, default=None)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--record-from", type=int, default=None)
    p.add_argument("--workers", type=int, default=0)
    _add_common_args(p)

    p = sub.add_parser("bench", help="minimal versus free replacement")
    _add_group_args(p)
    p.add_argument("--task", choices=BENCH_TASKS, default=SUSPEND_TASK)
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--trials", type=int, default=50,
                   help="Random replacement tasks.")
    _add_common_args(p)

    p = sub.add_parser("check", help="validate a module file")
    p.add_argument("--in", dest="input", required=True)
    _add_common_args(p)
    return parser


def _module_from_args(args) -> Module:
    """The module of ``--in``, or the trivial module of ``--group`` over
    ``--field``."""
    if args.input is not None:
        if args.group is not None or args.field is not None:
            raise UsageError("--in cannot be combined with --group/--field")
        return load_module(args.input)
    if args.group is None or args.field is None:
        raise UsageError("Need --in or both --group and --field")
    return trivial(parse_group(args.group), parse_field(args.field))


def _require_json(args) -> None:
    if args.format != "json":
        raise UsageError(
            f"--format {args.format} is not supported by {args.command}")


def _suspend(args) -> str:
    _require_json(args)
    M = _module_from_args(args)
    S = suspension_power(M, args.n)
    out = {"n": args.n, "input_dim": M.dim, "dim": S.dim}
    if args.emit_module:
        out["module"] = module_to_dict(S)
    return dumps(out)


def _gel(args) -> str:
    _require_json(args)
    M = _module_from_args(args)
    report = generating_length_m(M, args.m, cap=args.cap)
    out = report.to_dict()
    out["dim"] = M.dim
    return dumps(out)


def _projfree(args) -> str:
    _require_json(args)
    if args.n is not None:
        if args.input is not None:
            raise UsageError("-n builds Sigma^n k and cannot be combined "
                             "with --in")
        k = _module_from_args(args)
        M = free_suspension_power(k, args.n)
    else:
        M = _module_from_args(args)
    table = decompose_regular(M.group, M.field)
    split = projective_free_summand(M, table)
    out = {
        "input_dim": M.dim,
        "core_dim": split.core.dim,
        "projective_dim": M.dim - split.core.dim,
        "projective_summands": [table.projectives[i].dim
                                for i in split.summands],
    }
    if args.emit_module:
        out["module"] = module_to_dict(split.core)
    return dumps(out)


def _decompose(args) -> str:
    _require_json(args)
    table = decompose_regular(
        parse_group(args.group), parse_field(args.field), seed=args.seed)
    return dumps(table.describe())


def _random(args) -> str:
    _require_json(args)
    group, field = parse_group(args.group), parse_field(args.field)
    rm = create_random_module(group, field, args.n, args.s, args.m,
                              args.seed)
    out = rm.module.describe()
    out["length_bound"] = rm.length_bound
    out["degrees"] = [list(d) for d in rm.degrees]
    if args.emit_module:
        out["module"] = module_to_dict(rm.module)
    return dumps(out)


def _experiment(args) -> str:
    overrides = {
        "group": args.group,
        "field": args.field,
        "trials": args.trials,
        "steps": args.n,
        "summands": args.s,
        "m": args.m,
        "seed": args.seed,
        "cap": args.cap,
        "record_from": args.record_from,
        "num_workers": args.workers,
    }
    if args.preset is not None:
        config = ExperimentConfig.from_preset(args.preset, **overrides)
    else:
        if args.group is None or args.field is None:
            raise UsageError("Need --preset or both --group and --field")
        config = ExperimentConfig(
            **{k: v
               for k, v in overrides.items() if v is not None})
    report = ExperimentRunner(config, verbose=args.verbose).run()
    if args.format == "csv":
        return report.to_csv()
    return report.to_json()


def _bench(args) -> str:
    _require_json(args)
    report = bench_replacement(
        args.task,
        parse_group(args.group),
        parse_field(args.field),
        n=args.n,
        seed=args.seed,
        tasks=args.trials)
    return dumps(report.to_dict())


def _check(args) -> str:
    _require_json(args)
    return dumps(load_module(args.input).describe())


COMMANDS = {
    "suspend": _suspend,
    "gel": _gel,
    "projfree": _projfree,
    "decompose": _decompose,
    "random": _random,
    "experiment": _experiment,
    "bench": _bench,
    "check": _check,
}


def _print_error(error: StmodError) -> None:
    sys.stderr.write(json.dumps(error.to_dict(), default=str) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
        write_output(text, args.out)
    except UsageError as e:
        _print_error(e)
        return 2
    except StmodError as e:
        _print_error(e)
        return 1
    except ValueError as e:
        # parse_field and FieldSpec raise plain ValueErrors
        _print_error(UsageError(str(e)))
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
