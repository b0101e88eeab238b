"""
Command-line front end.

Every verb prints one JSON report on stdout and exits 0 when all requested
checks hold (or the query answers true), 1 when one fails, and 2 on bad
input. Logs go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from nmsem import data_loader
from nmsem.choice import (
    CHOICE_PROPERTIES,
    EXTENDED_PROPERTIES,
    check_choice_property,
    check_extended_property,
)
from nmsem.config import configure_logging, load_settings
from nmsem.connectives import (
    RULES,
    check_classical_representation,
    check_conservative,
    check_rules,
    conservative_extension,
    represent_classical,
)
from nmsem.consequence import (
    FIVE_POSTULATES,
    POSTULATES,
    REPRESENT_VARIANTS,
    ConsequenceOperator,
    SemanticOperator,
    check_postulate,
    check_postulates,
    operators_equal,
    regenerate,
    represent,
)
from nmsem.errors import InputError, NmsemError
from nmsem.formula import parse, render
from nmsem.klm import KLM_AXIOMS, check_klm, lift, relation_from_operator
from nmsem.qmeasure import (
    MEASURE_PROPERTIES,
    check_measure_property,
    choice_from_measure,
    consequence_by_measure,
    measure_from_choice,
)
from nmsem.search import FAMILIES, SEARCH_KINDS, search
from nmsem.universe import Universe
from nmsem.verdicts import Verdict, all_hold

logger = logging.getLogger(__name__)

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_INPUT = 2

# argv keys that never appear under "inputs"
_PLUMBING = {"verb", "handler", "output", "log_level"}


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise InputError(message)


# --- input assembly -----------------------------------------------------------

def _universe(args: argparse.Namespace) -> Universe | None:
    return data_loader.load_universe(args.universe) if args.universe else None


def _choice(args: argparse.Namespace, u: Universe | None = None):
    if not args.choice:
        raise InputError("--choice is required")
    return data_loader.load_choice(args.choice, u if u is not None else _universe(args))


def _operator(args: argparse.Namespace) -> ConsequenceOperator:
    """A tabulated operator file, or the semantic operator of a choice file."""
    if getattr(args, "operator", None):
        return data_loader.load_operator(args.operator)
    if args.choice:
        return SemanticOperator(_choice(args))
    raise InputError("give --operator, or --choice (with --universe) for a semantic operator")


def _verdicts(results: Sequence[Verdict]) -> tuple[bool, dict]:
    return all_hold(results), {"results": [v.to_dict() for v in results]}


# --- verbs ------------------------------------------------------------------

def _check_choice(args: argparse.Namespace) -> tuple[bool, dict]:
    f = _choice(args)
    if args.extended:
        props = args.property or list(EXTENDED_PROPERTIES)
        return _verdicts([check_extended_property(f, p) for p in props])
    props = args.property or list(CHOICE_PROPERTIES)
    return _verdicts([check_choice_property(f, p) for p in props])


def _check_measure(args: argparse.Namespace) -> tuple[bool, dict]:
    if args.measure:
        m = data_loader.load_measure(args.measure, _universe(args))
    else:
        m = measure_from_choice(_choice(args))
    props = args.property or list(MEASURE_PROPERTIES)
    return _verdicts([check_measure_property(m, p) for p in props])


def _check_operator(args: argparse.Namespace) -> tuple[bool, dict]:
    op = _operator(args)
    return _verdicts([check_postulate(op, p) for p in args.postulate or FIVE_POSTULATES])


def _check_rules(args: argparse.Namespace) -> tuple[bool, dict]:
    op = _operator(args)
    return _verdicts(check_rules(op, args.rule or RULES))


def _check_klm(args: argparse.Namespace) -> tuple[bool, dict]:
    u = _universe(args)
    if args.relation:
        rel = data_loader.load_relation(args.relation, u)
    else:
        rel = relation_from_operator(SemanticOperator(_choice(args, u)))
    results = [check_klm(rel, a) for a in args.axiom or KLM_AXIOMS]
    if args.lift and all_hold(results):
        results += check_postulates(lift(rel, allow_large=args.allow_large))
    return _verdicts(results)


def _entail(args: argparse.Namespace) -> tuple[bool, dict]:
    premises = args.premises or []
    if args.measure:
        m = data_loader.load_measure(args.measure, _universe(args))
        answer = consequence_by_measure(m, premises, args.query)
    else:
        answer = _operator(args).entails(premises, args.query)
    verdict = Verdict.passed("entails") if answer else Verdict.failed("entails", premises=premises, query=args.query)
    ok, payload = _verdicts([verdict])
    payload["entails"] = answer
    return ok, payload


def _convert(args: argparse.Namespace) -> tuple[bool, dict]:
    if args.to == "measure":
        m = measure_from_choice(_choice(args))
        return True, {"results": [], "measure": m.to_dict()}
    if args.to == "choice":
        if not args.measure:
            raise InputError("--measure is required to convert to a choice function")
        f = choice_from_measure(data_loader.load_measure(args.measure, _universe(args)))
        return True, {"results": [], "choice": f.to_dict()}
    rel = relation_from_operator(SemanticOperator(_choice(args)))
    return True, {"results": [], "relation": rel.to_dict()}


def _represent(args: argparse.Namespace) -> tuple[bool, dict]:
    if args.classical:
        op = _operator(args)
        rep, g = represent_classical(op)
        verdict = check_classical_representation(op, rep, g)
    elif args.conservative:
        op = data_loader.load_operator(_required(args.operator, "--operator"))
        extension = conservative_extension(op)
        rep, g = extension.universe, extension.choice
        verdict = check_conservative(op, extension)
    else:
        op = data_loader.load_operator(_required(args.operator, "--operator"))
        rep, g = represent(op, args.variant)
        agrees = operators_equal(op, regenerate(rep, g))
        verdict = Verdict.passed("round_trip") if agrees else Verdict.failed("round_trip")
    ok, payload = _verdicts([verdict])
    payload["universe"] = data_loader.universe_to_dict(rep)
    payload["choice"] = g.to_dict()
    return ok, payload


def _required(value: Any, flag: str) -> Any:
    if not value:
        raise InputError(f"{flag} is required")
    return value


def _search(args: argparse.Namespace) -> tuple[bool, dict]:
    u = data_loader.load_universe(args.universe)
    report = search(args.kind, u, args.family, seed=args.seed, samples=args.samples)
    results = [report.verdict.to_dict()] if report.verdict is not None else []
    return report.found, {"results": results, "search": report.to_dict()}


def _parse(args: argparse.Namespace) -> tuple[bool, dict]:
    f = parse(args.formula)
    return True, {"results": [], "formula": render(f), "atoms": sorted(f.atoms())}


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="also write the report to this path")
    common.add_argument("--log-level", default=None, help="logging level for stderr")
    common.add_argument("--allow-large", action="store_true", help="lift relations beyond the default atom bound")
    common.add_argument("--seed", type=int, default=None, help="random seed for sampled families")
    common.add_argument("--samples", type=int, default=None, help="number of sampled functions")

    parser = _ArgumentParser(prog="nmsem", description="Nonmonotonic deduction over finite universes.")
    verbs = parser.add_subparsers(dest="verb", parser_class=_ArgumentParser)
    verbs.required = True

    def verb(name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
        p = verbs.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = verb("check-choice", _check_choice, "check choice-function properties")
    p.add_argument("--universe")
    p.add_argument("--choice", required=True)
    p.add_argument("--property", action="append", choices=sorted(set(CHOICE_PROPERTIES) | set(EXTENDED_PROPERTIES)))
    p.add_argument("--extended", action="store_true", help="check the extension to all subsets")

    p = verb("check-measure", _check_measure, "check qualitative-measure properties")
    p.add_argument("--universe")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--measure")
    group.add_argument("--choice")
    p.add_argument("--property", action="append", choices=MEASURE_PROPERTIES)

    p = verb("check-operator", _check_operator, "check consequence postulates")
    p.add_argument("--operator")
    p.add_argument("--universe")
    p.add_argument("--choice")
    p.add_argument("--postulate", action="append", choices=POSTULATES)

    p = verb("check-rules", _check_rules, "check the connective rules")
    p.add_argument("--universe")
    p.add_argument("--choice", required=True)
    p.add_argument("--rule", action="append", choices=RULES)

    p = verb("check-klm", _check_klm, "check the preferential rules of a relation")
    p.add_argument("--universe")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--relation")
    group.add_argument("--choice")
    p.add_argument("--axiom", action="append", choices=KLM_AXIOMS)
    p.add_argument("--lift", action="store_true", help="also check the postulates of the lifted operator")

    p = verb("entail", _entail, "answer one entailment query")
    p.add_argument("--universe")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--operator")
    group.add_argument("--choice")
    group.add_argument("--measure")
    p.add_argument("--premises", action="append", help="one premise; repeat for several")
    p.add_argument("--query", required=True)

    p = verb("convert", _convert, "convert between choice functions, measures and relations")
    p.add_argument("--universe")
    p.add_argument("--choice")
    p.add_argument("--measure")
    p.add_argument("--to", required=True, choices=("measure", "choice", "relation"))

    p = verb("represent", _represent, "build a representing universe and choice function")
    p.add_argument("--operator")
    p.add_argument("--universe")
    p.add_argument("--choice")
    p.add_argument("--variant", default="theories", choices=REPRESENT_VARIANTS)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--classical", action="store_true", help="maximal-consistent representation of a semantic operator")
    mode.add_argument("--conservative", action="store_true", help="embed a tabulated operator into a propositional one")

    p = verb("search", _search, "search for a counterexample")
    p.add_argument("--kind", required=True, choices=SEARCH_KINDS)
    p.add_argument("--universe", required=True)
    p.add_argument("--family", default="cclm", choices=FAMILIES)

    p = verb("parse", _parse, "parse and render a formula")
    p.add_argument("--formula", required=True)

    return parser


# --- entry points -----------------------------------------------------------

def _inputs(args: argparse.Namespace) -> dict:
    return {
        k: v for k, v in sorted(vars(args).items())
        if k not in _PLUMBING and v is not None and v is not False
    }


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2, ensure_ascii=False)
    sys.stdout.write(text + "\n")
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")


def _error_report(verb: str | None, exc: BaseException) -> dict:
    error = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, NmsemError):
        error.update(exc.details())
    return {"verb": verb, "error": error}


def run(argv: Sequence[str]) -> int:
    """
    Run one command.

    Args:
        argv: arguments without the program name

    Returns:
        int: 0 when everything holds, 1 on a failed check or false query,
            2 on bad input
    """
    argv = list(argv)
    verb = next((a for a in argv if not a.startswith("-")), None)
    output = None
    try:
        args = build_parser().parse_args(argv)
        verb, output = args.verb, args.output
        configure_logging(args.log_level or load_settings().log_level)
        logger.info("running %s", verb)
        ok, payload = args.handler(args)
    except (NmsemError, json.JSONDecodeError, UnicodeDecodeError, OSError) as exc:
        logger.debug("input error", exc_info=True)
        _emit(_error_report(verb, exc), output)
        return EXIT_INPUT
    report = {"verb": verb, "inputs": _inputs(args)}
    report.update(payload)
    _emit(report, output)
    return EXIT_HOLDS if ok else EXIT_FAILS


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)
