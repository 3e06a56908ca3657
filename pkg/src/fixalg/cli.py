"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 budget or cap exhausted, 3 a checked
property failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .chain import (
    DEFAULT_CAP,
    DEFAULT_MAX_STAGE,
    analyze,
    fold_via_chain,
    unique_hom_check,
)
from .datalog import check_least_model, least_model, parse_program, semi_naive, sort_atoms
from .errors import EnumerationTooLarge, FixalgError, InputError, NotConverged
from .files import parse_algebra_file
from .functor import FunctorDef, is_homomorphism, parse_functor_file, show
from .terms import (
    NAT,
    cata_fn,
    enumerate_terms,
    lambek_verify,
    pretty,
    recursion_violations,
    square_violations,
)

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_CHECK = 0, 1, 2, 3


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[Path]
    max_stage: int = DEFAULT_MAX_STAGE
    depth: int = 4
    cap: int = DEFAULT_CAP
    format: str = "text"

    def __post_init__(self):
        if self.max_stage < 1 or self.cap < 1 or self.depth < 0:
            raise InputError("--max-stage and --cap must be positive, --depth non-negative")
        if self.format not in ("text", "json"):
            raise InputError(f"unknown format {self.format!r}")


@dataclass
class Report:
    fields: dict
    lines: list[str]
    exit_code: int = EXIT_OK


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _passfail(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _functor(path: Path) -> FunctorDef:
    return parse_functor_file(_read(path))


def _converged(fdef: FunctorDef, cfg: RunConfig):
    result = analyze(fdef.expr, cfg.max_stage, cfg.cap)
    if result.converged_at is None:
        raise NotConverged(
            f"the chain of {show(fdef.expr)} does not converge within {cfg.max_stage} stages"
        )
    return result


def cmd_chain(cfg: RunConfig) -> Report:
    fdef = _functor(cfg.inputs[0])
    result = analyze(fdef.expr, cfg.max_stage, cfg.cap)
    lines = [f"functor: {fdef.name} = {show(fdef.expr)}", "stage size"]
    lines += [f"{n:>5} {size}" for n, size in enumerate(result.chain.sizes())]
    fields = result.to_dict()
    if result.converged_at is None:
        lines.append(f"no convergence within budget (max stage {cfg.max_stage})")
        return Report(fields, lines, EXIT_BUDGET)
    lines.append(f"converged at stage {result.converged_at}")
    lines.append(f"carrier: {result.algebra.carrier}")
    lines.append("structure map:")
    lines += result.algebra.structure.lines()
    return Report(fields, lines)


def cmd_fold(cfg: RunConfig) -> Report:
    fdef = _functor(cfg.inputs[0])
    target = parse_algebra_file(_read(cfg.inputs[1]), fdef)
    result = _converged(fdef, cfg)
    initial = result.algebra
    fold = fold_via_chain(result.chain, result.converged_at, target)
    square = is_homomorphism(fold, initial, target)
    lines = [
        f"functor: {fdef.name} = {show(fdef.expr)}",
        f"initial carrier: {initial.carrier}",
        f"target carrier: {target.carrier}",
        "fold:",
        *fold.lines(),
        f"homomorphism square: {_passfail(square)}",
    ]
    fields = {
        "functor": show(fdef.expr),
        "initial_carrier": [str(e) for e in initial.carrier],
        "target_carrier": [str(e) for e in target.carrier],
        "fold": [[str(x), str(y)] for x, y in fold.items()],
        "homomorphism_square": square,
    }
    ok = square
    try:
        check = unique_hom_check(initial, target, cfg.cap)
    except EnumerationTooLarge:
        lines.append("uniqueness: skipped (too many candidate functions)")
        fields["homomorphism_count"] = None
    else:
        unique = check.count == 1 and check.homomorphisms[0] == fold
        ok = ok and unique
        lines.append(
            f"uniqueness: {_passfail(unique)} "
            f"({check.count} homomorphism(s) among {check.candidates} functions)"
        )
        fields["homomorphism_count"] = check.count
    return Report(fields, lines, EXIT_OK if ok else EXIT_CHECK)


def cmd_lambek(cfg: RunConfig) -> Report:
    fdef = _functor(cfg.inputs[0])
    result = _converged(fdef, cfg)
    report = lambek_verify(result.algebra, result.chain)
    lines = [
        f"functor: {fdef.name} = {show(fdef.expr)}",
        f"converged at stage {result.converged_at}",
        f"carrier: {result.algebra.carrier}",
        "iota:",
        *report.iota.lines(),
        "h:",
        *report.h.lines(),
        f"iota.h = id: {_passfail(report.iota_after_h)}",
        f"h.iota = id: {_passfail(report.h_after_iota)}",
    ]
    fields = {"functor": show(fdef.expr), "converged_at": result.converged_at, **report.to_dict()}
    return Report(fields, lines, EXIT_OK if report.passed else EXIT_CHECK)


def cmd_datalog(cfg: RunConfig, trace=False, use_semi_naive=False, check_least=False) -> Report:
    program = parse_program(_read(cfg.inputs[0]))
    naive = least_model(program, cfg.cap)
    model = naive.model
    fields: dict = {"iterations": naive.iterations}
    extra: list[str] = []
    code = EXIT_OK
    if use_semi_naive:
        model = semi_naive(program, cfg.cap)
        agree = model == naive.model
        fields["semi_naive_agrees"] = agree
        extra.append(f"% semi-naive agrees with naive: {_passfail(agree)}")
        if not agree:
            code = EXIT_CHECK
    atoms = [str(a) for a in sort_atoms(model)]
    fields["model"] = atoms
    if trace:
        fields["trace"] = [[str(a) for a in d] for d in naive.deltas()]
        extra = ["% trace"] + [f"% {line}" for line in naive.kleene.report_lines()] + extra
    if check_least:
        report = check_least_model(program, naive.model, cfg.cap)
        fields["least"] = report.least
        fields["fixed_points"] = len(report.fixed_points)
        extra.append(
            f"% leastness: {_passfail(report.least)} "
            f"(model is below all {len(report.fixed_points)} fixed points)"
            if report.least else
            f"% leastness: FAIL ({len(report.not_below)} fixed point(s) not above the model)"
        )
        if not report.least:
            code = EXIT_CHECK
    return Report(fields, atoms + extra, code)


def cmd_terms(cfg: RunConfig) -> Report:
    fdef = _functor(cfg.inputs[0])
    F = fdef.expr
    universe = enumerate_terms(F, cfg.depth, cfg.cap)
    shown = [pretty(F, t) for t in universe.terms]
    fields: dict = {"functor": show(F), "depth": cfg.depth, "terms": shown}
    if len(cfg.inputs) < 2:
        return Report(fields, shown)
    target = parse_algebra_file(_read(cfg.inputs[1]), fdef)
    folded = cata_fn(target, universe)
    lines = [f"{p} -> {folded(t)}" for p, t in zip(shown, universe.terms)]
    fields["cata"] = [[p, str(folded(t))] for p, t in zip(shown, universe.terms)]
    bad_square = square_violations(target, universe)
    fields["square_violations"] = bad_square
    lines.append(f"homomorphism square on terms: {_passfail(not bad_square)}")
    lines += bad_square
    code = EXIT_OK if not bad_square else EXIT_CHECK
    if F == NAT:
        bad = recursion_violations(target, max(cfg.depth - 1, 0)) if cfg.depth else []
        fields["recursion_violations"] = bad
        lines.append(f"recursion equations: {_passfail(not bad)}")
        lines += bad
        if bad:
            code = EXIT_CHECK
    return Report(fields, lines, code)


class _ArgParser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for exhausted budgets
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def _parser() -> argparse.ArgumentParser:
    common = _ArgParser(add_help=False)
    common.add_argument("--max-stage", type=int, default=DEFAULT_MAX_STAGE,
                        help="stage budget for the initial chain (default %(default)s)")
    common.add_argument("--depth", type=int, default=4,
                        help="term depth bound (default %(default)s)")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="cardinality cap for stages, term sets and enumerations")
    common.add_argument("--format", choices=["text", "json"], default="text")

    parser = _ArgParser(prog="fixalg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    p = sub.add_parser("chain", parents=[common], help="build the initial chain of a functor")
    p.add_argument("functor_file", type=Path)
    p = sub.add_parser("fold", parents=[common], help="fold the initial algebra into an algebra")
    p.add_argument("functor_file", type=Path)
    p.add_argument("algebra_file", type=Path)
    p = sub.add_parser("lambek", parents=[common], help="check that the initial structure map is invertible")
    p.add_argument("functor_file", type=Path)
    p = sub.add_parser("datalog", parents=[common], help="least model of a positive Datalog program")
    p.add_argument("program_file", type=Path)
    p.add_argument("--trace", action="store_true", help="print the per-iteration deltas")
    p.add_argument("--semi-naive", action="store_true", help="evaluate semi-naively and compare")
    p.add_argument("--check-least", action="store_true", help="exhaustive leastness check (small bases)")
    p = sub.add_parser("terms", parents=[common], help="list terms up to a depth, optionally folded")
    p.add_argument("functor_file", type=Path)
    p.add_argument("algebra_file", type=Path, nargs="?")
    return parser


def run(argv: Optional[list[str]] = None) -> tuple[int, str, str]:
    """Run the CLI and return ``(exit_code, stdout, stderr)``."""
    try:
        args = _parser().parse_args(argv)
    except InputError as exc:
        return EXIT_INPUT, "", f"error: {exc}\n"
    inputs = [v for k in ("functor_file", "program_file", "algebra_file")
              if (v := getattr(args, k, None)) is not None]
    try:
        cfg = RunConfig(args.subcommand, inputs, args.max_stage, args.depth, args.cap, args.format)
        if args.subcommand == "datalog":
            report = cmd_datalog(cfg, args.trace, args.semi_naive, args.check_least)
        else:
            report = {"chain": cmd_chain, "fold": cmd_fold, "lambek": cmd_lambek,
                      "terms": cmd_terms}[args.subcommand](cfg)
    except FixalgError as exc:
        return exc.exit_code, "", f"error: {type(exc).__name__}: {exc}\n"
    if cfg.format == "json":
        doc = {"subcommand": cfg.subcommand, "exit_code": report.exit_code, **report.fields}
        out = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        out = "".join(line + "\n" for line in report.lines)
    return report.exit_code, out, ""


def main(argv: Optional[list[str]] = None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
