"""Command-line interface.

Exit codes: 0 on success, 1 when verify-lred finds violations, 2 on
validation or parse errors, 3 when an enumeration cap is exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats
from .align import AlignmentInstance, oracle_align
from .errors import CapExceededError, ValidationError
from .generators import GeneratorConfig, gen_graph, gen_instance, gen_sat32
from .lreduction import KINDS, verify_lreduction
from .mis3 import (
    Mis3Certificate,
    extract_independent_set,
    reduce_mis3,
    solution_from_independent_set,
)
from .orders import DEFAULT_CAP, OrderFamily, family_of
from .sat32 import extract_assignment, reduce_sat32, solution_from_assignment


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as err:
        raise ValidationError(f"cannot read {path}: {err}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _dp_orientation(instance: AlignmentInstance):
    """(linear side, weak side, swapped) when the block DP applies."""
    fg, fp = family_of(instance.gamma), family_of(instance.pi)
    weakish = (OrderFamily.LINEAR, OrderFamily.WEAK)
    if fg == OrderFamily.LINEAR and fp in weakish:
        return instance.gamma, instance.pi, False
    if fp == OrderFamily.LINEAR and fg == OrderFamily.WEAK:
        return instance.pi, instance.gamma, True
    return None


def _cmd_solve(args) -> int:
    instance = formats.parse_instance(_read(args.instance))
    if args.method == "dp" and _dp_orientation(instance) is None:
        raise ValidationError(
            "--method dp needs one linear and one weak side; use oracle")
    # the oracle routes (linear, weak) pairs straight to the block DP,
    # so auto, dp (once validated), and oracle share one entry point
    sol = oracle_align(instance, cap=args.cap)
    _emit(formats.serialize_solution(sol), args.output)
    return 0


def _cmd_classify(args) -> int:
    instance = formats.parse_instance(_read(args.instance))
    text = (f"gamma {family_of(instance.gamma).value}\n"
            f"pi {family_of(instance.pi).value}\n")
    _emit(text, args.output)
    return 0


def _cmd_reduce(args) -> int:
    if args.problem == "mis3":
        graph = formats.parse_graph(_read(args.input))
        instance, cert = reduce_mis3(graph)
    else:
        sat = formats.parse_sat(_read(args.input))
        instance, cert = reduce_sat32(sat)
    _emit(formats.serialize_instance(instance), args.output)
    _emit(formats.serialize_certificate(cert), args.certificate)
    return 0


def _cmd_build_solution(args) -> int:
    cert = formats.parse_certificate(_read(args.certificate))
    witness = _read(args.witness)
    head = witness.split(None, 1)[0] if witness.split() else ""
    if isinstance(cert, Mis3Certificate):
        if head != "iset":
            raise ValidationError("mis3 certificates take an iset witness")
        sol = solution_from_independent_set(cert, formats.parse_independent_set(witness))
    else:
        if head != "assign":
            raise ValidationError("sat32 certificates take an assign witness")
        sol = solution_from_assignment(cert, formats.parse_assignment(witness))
    _emit(formats.serialize_solution(sol), args.output)
    return 0


def _cmd_extract(args) -> int:
    cert = formats.parse_certificate(_read(args.certificate))
    sol = formats.parse_solution(_read(args.solution))
    if isinstance(cert, Mis3Certificate):
        text = formats.serialize_independent_set(extract_independent_set(cert, sol))
    else:
        text = formats.serialize_assignment(extract_assignment(cert, sol))
    _emit(text, args.output)
    return 0


def _cmd_verify_lred(args) -> int:
    if args.kind.startswith("mis3"):
        x = formats.parse_graph(_read(args.input))
    else:
        x = formats.parse_sat(_read(args.input))
    report = verify_lreduction(args.kind, x, samples=args.samples,
                               seed=args.seed, cap=args.cap)
    _emit("\n".join(report.render()) + "\n", args.output)
    return 0 if report.ok else 1


def _cmd_gen(args) -> int:
    families = tuple(args.families.split(","))
    if len(families) != 2:
        raise ValidationError("--families takes two comma-separated names")
    config = GeneratorConfig(seed=args.seed, n=args.n, m=args.m,
                             families=families, bucket_max=args.bucket_max)
    if args.kind == "graph":
        text = formats.serialize_graph(gen_graph(config))
    elif args.kind == "sat32":
        text = formats.serialize_sat(gen_sat32(config))
    else:
        text = formats.serialize_instance(gen_instance(config))
    _emit(text, args.output)
    return 0


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="poalign",
        description="Align partial orders to maximize adjacencies, and run "
                    "the MIS-3 / 2SAT reduction toolchain.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimally align the two orders of an instance")
    p.add_argument("instance")
    p.add_argument("--method", choices=("auto", "dp", "oracle"), default="auto")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("classify", help="report the finest family of each order")
    p.add_argument("instance")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("reduce", help="compile a graph or SAT input into an instance")
    p.add_argument("problem", choices=("mis3", "sat32"))
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True, help="instance file")
    p.add_argument("-c", "--certificate", required=True, help="certificate file")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("build-solution",
                       help="turn an independent set or assignment into a solution")
    p.add_argument("certificate")
    p.add_argument("witness")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_build_solution)

    p = sub.add_parser("extract",
                       help="map a solution back to an independent set or assignment")
    p.add_argument("certificate")
    p.add_argument("solution")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("verify-lred", help="check the L-reduction inequalities")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("input")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_verify_lred)

    p = sub.add_parser("gen", help="generate a seeded random input")
    p.add_argument("kind", choices=("graph", "sat32", "instance"))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--families", default="linear,weak")
    p.add_argument("--bucket-max", type=int, default=3)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_gen)
    return top


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
