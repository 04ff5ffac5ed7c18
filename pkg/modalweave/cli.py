"""Command-line front end: ``python -m modalweave <subcommand> ...``.

Results go to stdout, diagnostics to stderr. Exit status is 0 on success,
1 when a check or claim fails or runs out of budget, and 2 for usage and
input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence

from dotenv import load_dotenv

from .algebra import (
    algebras_isomorphic,
    canonical_extension,
    complex_algebra,
    parse_equation,
    ultrafilter_frame,
    validates_equation,
)
from .config import AppConfig
from .correspondents import (
    check_5n,
    check_chain,
    check_e52_upto,
    check_In,
    check_Un,
    check_WidStar,
    frame_props,
    segerberg_classify,
)
from .corpus import FamilySpec, gen_formula, gen_frame
from .errors import BadParameter, BudgetExceeded, WorkbenchError
from .experiment_tracker import log_ledger_run
from .file_formats import (
    algebra_to_document,
    frame_to_document,
    load_algebra,
    load_frame,
    load_model,
    save_frame,
)
from .formula import format_formula, parse_formula
from .frames import achronal_width, antichain_width, frames_isomorphic
from .ledger import reproduce_claims
from .semantics import satisfies, truth_set, valid_at_point, valid_on_frame

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

CONDITIONS = ("5n", "e52", "un", "in", "chain", "widstar", "props", "segerberg")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def split_worlds(text: str) -> List[str]:
    """Split a comma-separated world list, leaving commas inside "(i,k)" names alone."""
    names, depth, current = [], 0, []
    for char in text:
        if char == "," and depth == 0:
            names.append("".join(current).strip())
            current = []
            continue
        depth += {"(": 1, ")": -1}.get(char, 0)
        current.append(char)
    names.append("".join(current).strip())
    return [name for name in names if name]


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(payload: object) -> None:
    _emit(json.dumps(payload, indent=2))


# ---------------------------------------------------------------------------
# Subcommands


def cmd_parse(args: argparse.Namespace, config: AppConfig) -> int:
    _emit(format_formula(parse_formula(args.formula)))
    return EXIT_OK


def cmd_check(args: argparse.Namespace, config: AppConfig) -> int:
    model = load_model(args.model)
    formula = parse_formula(args.formula, model.frame.sig)
    if args.world:
        holds = satisfies(model, args.world, formula)
        _emit("TRUE" if holds else "FALSE")
        return EXIT_OK if holds else EXIT_FAILED
    worlds = truth_set(model, formula)
    _emit("VERIFIED" if len(worlds) == model.frame.size else "NOT VERIFIED")
    _emit("true at: " + ",".join(w for w in model.frame.worlds if w in worlds))
    return EXIT_OK if len(worlds) == model.frame.size else EXIT_FAILED


def cmd_valid(args: argparse.Namespace, config: AppConfig) -> int:
    frame = load_frame(args.frame)
    formula = parse_formula(args.formula, frame.sig)
    budget = args.budget or config.semantics.budget
    if args.world:
        verdict = valid_at_point(frame, args.world, formula, budget, config.semantics.batch_size)
    else:
        verdict = valid_on_frame(frame, formula, budget, config.semantics.batch_size)
    if verdict.valid:
        _emit("VALID")
        return EXIT_OK
    _emit(f"INVALID: {verdict.witness.describe()}")
    return EXIT_FAILED


def _require_n(args: argparse.Namespace, condition: str) -> int:
    if args.n is None:
        raise BadParameter(f"--cond {condition} needs --n")
    return args.n


def cmd_corr(args: argparse.Namespace, config: AppConfig) -> int:
    frame = load_frame(args.frame)
    condition = args.cond
    if condition == "props":
        for name, value in frame_props(frame, args.modality).as_dict().items():
            _emit(f"{name}={'true' if value else 'false'}")
        return EXIT_OK
    if condition == "segerberg":
        world = args.world or frame.worlds[0]
        _emit(segerberg_classify(frame, world, args.modality).value)
        return EXIT_OK
    if condition == "5n":
        report = check_5n(frame, _require_n(args, condition), args.modality)
    elif condition == "e52":
        report = check_e52_upto(frame, args.max_n, args.modality)
    elif condition == "un":
        report = check_Un(frame, _require_n(args, condition), args.dia or args.modality, args.black)
    elif condition == "in":
        report = check_In(frame, _require_n(args, condition), args.modality)
    elif condition == "widstar":
        report = check_WidStar(frame, _require_n(args, condition), args.modality)
    else:
        report = check_chain(frame, args.modality)
    _emit(report.describe())
    return EXIT_OK if report.holds else EXIT_FAILED


def cmd_width(args: argparse.Namespace, config: AppConfig) -> int:
    frame = load_frame(args.frame)
    modality = frame.sig.require(args.modality) if args.modality else frame.sig.default
    worlds = split_worlds(args.set) if args.set else list(frame.worlds)
    width = achronal_width if args.achronal else antichain_width
    _emit(str(width(frame, modality, worlds)))
    return EXIT_OK


def cmd_gen(args: argparse.Namespace, config: AppConfig) -> int:
    params = tuple(args.params)
    if args.formula:
        _emit(format_formula(gen_formula(args.formula, params)))
        return EXIT_OK
    frame = gen_frame(FamilySpec(args.family, params))
    if args.out:
        save_frame(args.out, frame)
        logger.info("wrote %s (%d worlds) to %s", args.family, frame.size, args.out)
    else:
        _emit_json(frame_to_document(frame))
    return EXIT_OK


def cmd_dual(args: argparse.Namespace, config: AppConfig) -> int:
    budget = args.budget or config.semantics.budget
    if args.frame:
        if args.action not in ("complex", "roundtrip"):
            raise BadParameter(f"with -F the action is complex or roundtrip, got '{args.action}'")
        frame = load_frame(args.frame)
        algebra = complex_algebra(frame)
        if args.action == "complex":
            _emit_json(algebra_to_document(algebra))
            return EXIT_OK
        back = ultrafilter_frame(algebra)
        same = back == frame or frames_isomorphic(back, frame)
        _emit("ISOMORPHIC" if same else "NOT ISOMORPHIC")
        return EXIT_OK if same else EXIT_FAILED

    algebra = load_algebra(args.algebra)
    if args.action == "frame":
        _emit_json(frame_to_document(ultrafilter_frame(algebra)))
        return EXIT_OK
    if args.action == "sigma":
        extension = canonical_extension(algebra)
        if not algebras_isomorphic(extension, algebra):
            logger.warning("canonical extension is not isomorphic to a finite algebra")
        _emit_json(algebra_to_document(extension))
        return EXIT_OK
    if args.action == "eq":
        if not args.equation:
            raise BadParameter('dual -A ... eq needs an equation like "<d>v0 = 0"')
        lhs, rhs = parse_equation(args.equation, algebra.sig)
        verdict = validates_equation(algebra, lhs, rhs, budget, config.semantics.batch_size)
        _emit(verdict.describe())
        return EXIT_OK if verdict.holds else EXIT_FAILED
    raise BadParameter(f"with -A the action is frame, sigma or eq, got '{args.action}'")


def cmd_reproduce(args: argparse.Namespace, config: AppConfig) -> int:
    budget = args.budget or config.semantics.budget
    report = reproduce_claims(budget, config.ledger, args.only)
    _emit(report.to_json() if args.format == "json" else report.to_tsv())
    for row in report.failures:
        logger.warning("claim %s: expected %s, computed %s", row.claim_id, row.expected, row.computed)
    if config.experiment_log:
        log_ledger_run(report, budget, log_path=config.experiment_log)
    return EXIT_OK if report.all_passed else EXIT_FAILED


COMMANDS: Dict[str, Callable[[argparse.Namespace, AppConfig], int]] = {
    "parse": cmd_parse,
    "check": cmd_check,
    "valid": cmd_valid,
    "corr": cmd_corr,
    "width": cmd_width,
    "gen": cmd_gen,
    "dual": cmd_dual,
    "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modalweave", description="Kripke frame workbench")
    parser.add_argument("--log-level", help="override MODALWEAVE_LOG_LEVEL (DEBUG, INFO, ...)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="print the normalised form of a formula")
    p.add_argument("formula")

    p = sub.add_parser("check", help="model-check a formula")
    p.add_argument("-m", "--model", required=True, help="model JSON file")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("-w", "--world")

    p = sub.add_parser("valid", help="brute-force frame validity with a witness")
    p.add_argument("-F", "--frame", required=True, help="frame JSON file")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("-w", "--world", help="check validity at this point only")
    p.add_argument("--budget", type=_positive_int)

    p = sub.add_parser("corr", help="check a first-order frame condition")
    p.add_argument("-F", "--frame", required=True)
    p.add_argument("--cond", required=True, choices=CONDITIONS)
    p.add_argument("--n", type=int)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("-m", "--modality")
    p.add_argument("--dia", help="outer modality of U_n")
    p.add_argument("--black", help="inner modality of U_n")
    p.add_argument("-w", "--world", help="generating world for segerberg")

    p = sub.add_parser("width", help="antichain or achronal width of a world set")
    p.add_argument("-F", "--frame", required=True)
    p.add_argument("-m", "--modality")
    p.add_argument("--set", help="comma-separated worlds (default: all)")
    p.add_argument("--achronal", action="store_true")

    p = sub.add_parser("gen", help="generate a frame family member or a formula")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--family")
    target.add_argument("--formula")
    p.add_argument("--params", type=int, nargs="*", default=[])
    p.add_argument("--out", help="write the frame JSON here instead of stdout")

    p = sub.add_parser("dual", help="finite duality between frames and algebras")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("-F", "--frame")
    source.add_argument("-A", "--algebra")
    p.add_argument("action", choices=("complex", "roundtrip", "frame", "sigma", "eq"))
    p.add_argument("equation", nargs="?")
    p.add_argument("--budget", type=_positive_int)

    p = sub.add_parser("reproduce", help="recompute the claim ledger")
    p.add_argument("--budget", type=_positive_int)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--only", nargs="*", help="run claims whose id starts with one of these prefixes")

    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    config = AppConfig.from_env()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    configure_logging(args.log_level or config.logging.level)
    try:
        return COMMANDS[args.command](args, config)
    except WorkbenchError as exc:
        sys.stderr.write(f"{exc.code}: {exc}\n")
        # E_BUDGET: the check was not established
        return EXIT_FAILED if isinstance(exc, BudgetExceeded) else EXIT_USAGE
