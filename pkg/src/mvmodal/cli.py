"""Command-line front end.

Every command builds one report (an ordered mapping) and prints it either
as ``key: value`` text or as JSON with the same fields.  Exit status is 0
when the answer is positive (valid, found, identical, closed, PASS), 1 when
it is negative and a witness is printed, and 2 for usage, input and
resource errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .algebra import (
    CLASSES, AlgebraError, LatticeError, UnaryTerm, class_check, eq_kernel,
    find_boolean_interpretation, is_boolean_interpretation, quotient, resolve_algebra,
    term_function, validate_lattice,
)
from .framelab import (
    CLOSURE_OPERATIONS, UniverseBudgetError, closure_check, compare_definability,
    defined_class, enumerate_frames,
)
from .polytrans import e_axioms, reduce_consequence, reduce_validity
from .semantics import (
    DEFAULT_BUDGET, EnumerationBudgetError, consequence_on_frames, evaluate_all, frame_to_text,
    load_frame, load_model, model_to_dict,
)
from .suites import switch_suite
from .syntax import CLASSICAL, ParseError, parse, size, to_text
from .tableau import ENGINES, TableauBudgetError, k_valid
from .translation import phi_star, simplify, translate_value

OK, NEGATIVE, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _formula_text(arg: str) -> str:
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read().strip()
    return arg


def _parse(arg: str, signature):
    return parse(_formula_text(arg), signature)


def _algebra(args):
    return resolve_algebra(args.algebra)


def _term(text: Optional[str], alg) -> Optional[UnaryTerm]:
    return None if text is None else UnaryTerm.parse(text, alg.signature)


def _universe(args):
    return enumerate_frames(args.universe, iso_reduce=args.iso)


def _model_report(model, algebra_ref=None) -> dict:
    return model_to_dict(model, algebra_ref)


# ---------------------------------------------------------------- commands

def cmd_algebra_check(args):
    try:
        alg = _algebra(args)
    except LatticeError as exc:
        return NEGATIVE, {"summary": "not a lattice",
                          "violations": [f"{v.kind}: {v.detail}" for v in exc.report.violations]}
    report = validate_lattice(alg)
    classes = {}
    for cls in CLASSES:
        check = class_check(alg, cls)
        classes[cls] = check.holds if check.holds else f"no ({check.reason})"
    try:
        negation = str(alg.negation)
    except AlgebraError:
        negation = None
    return (OK if report.ok else NEGATIVE), {
        "summary": "lattice ok" if report.ok else "not a lattice",
        "algebra": alg.name,
        "size": alg.size,
        "labels": list(alg.labels),
        "operations": {name: arity for name, (arity, _) in sorted(alg.ops.items())},
        "negation": negation,
        "classes": classes,
    }


def cmd_interpret(args):
    alg = _algebra(args)
    negation = _term(args.negation, alg) or alg.negation
    term = find_boolean_interpretation(alg, negation, max_size=args.max_size)
    if term is None:
        return NEGATIVE, {"summary": f"not-found within term size cap {args.max_size}",
                          "algebra": alg.name, "negation": str(negation), "cap": args.max_size}
    part = eq_kernel(alg, term)
    quo = quotient(alg, part, negation)
    fn = term_function(alg, term)
    return OK, {
        "summary": f"found {term}",
        "algebra": alg.name,
        "negation": str(negation),
        "term": str(term),
        "term_size": term.size,
        "cap": args.max_size,
        "function": [alg.labels[v] for v in fn],
        "blocks": [[alg.labels[a] for a in block] for block in part.blocks],
        "congruence": True,
        "boolean_quotient": bool(is_boolean_interpretation(alg, term, negation)),
        "quotient_not": quo.ops["not"][1].tolist(),
    }


def cmd_eval(args):
    model = load_model(args.model)
    f = _parse(args.formula, model.algebra.signature)
    values = evaluate_all(model, f)
    return OK, {"summary": " ".join(model.algebra.labels[v] for v in values),
                "formula": to_text(f), "algebra": model.algebra.name,
                "values": [model.algebra.labels[v] for v in values]}


def cmd_validate(args):
    alg = _algebra(args)
    f = _parse(args.formula, alg.signature)
    premises = [_parse(p, alg.signature) for p in args.premise]
    if args.frame:
        frames = [load_frame(args.frame)]
    elif args.universe:
        frames = list(_universe(args))
    else:
        raise UsageError("validate needs --frame or --universe")
    verdict = consequence_on_frames(frames, alg, premises, f, args.budget, args.method)
    report = {"summary": "valid" if verdict.holds else "counterexample",
              "algebra": alg.name, "formula": to_text(f),
              "premises": [to_text(p) for p in premises],
              "frames": len(frames), "valuations_checked": verdict.checked}
    if verdict.holds:
        return OK, report
    model = verdict.counterexample
    report.update(frame_index=verdict.frame_index, world=verdict.world,
                  frame=frame_to_text(model.frame), countermodel=_model_report(model, args.algebra))
    return NEGATIVE, report


def cmd_translate(args):
    alg = _algebra(args)
    f = _parse(args.formula, alg.signature)
    a = alg.top if args.value is None else alg.element(args.value)
    out = translate_value(alg, f, a, simplified=args.simplify)
    return OK, {"summary": to_text(out), "algebra": alg.name, "formula": to_text(f),
                "value": alg.labels[a], "size": size(out)}


def cmd_phi_star(args):
    alg = _algebra(args)
    f = _parse(args.formula, alg.signature)
    out = phi_star(alg, f)
    if args.simplify:
        out = simplify(out)
    return OK, {"summary": to_text(out), "algebra": alg.name, "formula": to_text(f), "size": size(out)}


def cmd_reduce(args):
    alg = _algebra(args)
    f = _parse(args.formula, alg.signature)
    if args.mode == "validity":
        if args.premise:
            raise UsageError("--premise is only meaningful with --mode consequence")
        out = reduce_validity(alg, f)
        return OK, {"summary": to_text(out), "algebra": alg.name, "formula": to_text(f),
                    "size": size(out), "input_size": size(f)}
    premises = [_parse(p, alg.signature) for p in args.premise]
    classical, conclusion = reduce_consequence(alg, premises, f)
    theory = e_axioms(alg, premises + [f])
    return OK, {"summary": f"{len(classical)} premises => {to_text(conclusion)}",
                "algebra": alg.name,
                "premises": [to_text(p) for p in classical],
                "conclusion": to_text(conclusion),
                "max_axiom_size": theory.max_axiom_size()}


def cmd_prove_k(args):
    f = _parse(args.formula, CLASSICAL)
    result = k_valid(f, args.node_budget, args.engine)
    report = {"summary": "valid" if result.valid else "not valid", "formula": to_text(f),
              "engine": args.engine, "nodes": result.nodes}
    if result.valid:
        return OK, report
    report.update(frame=frame_to_text(result.countermodel.frame),
                  countermodel=_model_report(result.countermodel, "2"), world=0)
    return NEGATIVE, report


def cmd_define(args):
    alg = _algebra(args)
    formulas = [_parse(f, alg.signature) for f in args.formula]
    universe = _universe(args)
    members = defined_class(alg, formulas, universe, args.budget, args.workers)
    return OK, {"summary": f"{len(members)} of {len(universe)} frames",
                "algebra": alg.name, "formulas": [to_text(f) for f in formulas],
                "universe": args.universe, "iso_reduced": args.iso, "indices": members}


def cmd_compare(args):
    alg = _algebra(args)
    term = _term(args.term, alg)
    signature = CLASSICAL if term is not None else alg.signature
    f = _parse(args.formula, signature)
    universe = _universe(args)
    rep = compare_definability(alg, f, universe, args.budget, args.workers, term,
                               _term(args.negation, alg))
    report = {"summary": (f"classes identical ({len(rep.left)} of {len(universe)} frames)"
                          if rep.agree else f"classes differ on {len(rep.mismatches)} frames"),
              "algebra": alg.name, "formula": to_text(rep.formula),
              "compared_with": to_text(rep.compared_with),
              "universe": args.universe, "left": rep.left, "right": rep.right}
    if rep.agree:
        return OK, report
    first = rep.mismatches[0]
    report.update(first_mismatch=first, frame=frame_to_text(universe[first]))
    return NEGATIVE, report


def cmd_closure(args):
    alg = _algebra(args)
    formulas = [_parse(f, alg.signature) for f in args.formula]
    universe = _universe(args)
    members = defined_class(alg, formulas, universe, args.budget, args.workers)
    ops = CLOSURE_OPERATIONS if args.operation == "all" else (args.operation,)
    results, closed = {}, True
    for op in ops:
        rep = closure_check(members, universe, op)
        closed &= rep.closed
        entry = {"violations": len(rep.violations), "tested": rep.tested,
                 "not_tested": rep.not_tested}
        if rep.violations:
            sources, detail, result = rep.violations[0]
            entry["first_violation"] = {"sources": list(sources),
                                        "detail": None if detail is None else str(detail),
                                        "result": frame_to_text(result)}
        results[op] = entry
    return (OK if closed else NEGATIVE), {
        "summary": "closed" if closed else "violations found",
        "algebra": alg.name, "formulas": [to_text(f) for f in formulas],
        "universe": args.universe, "class_size": len(members), "operations": results}


def cmd_switch_suite(args):
    alg = _algebra(args)
    count = args.count or len(enumerate_frames(args.max_worlds))
    res = switch_suite(alg, args.seed, count, max_worlds=args.max_worlds,
                       max_rank=args.max_rank, n_vars=args.vars)
    report = {"summary": f"{'PASS' if res.passed else 'FAIL'} {res.cases} cases",
              "algebra": alg.name, "cases": res.cases, "failures": len(res.failures),
              "exactly_one_violations": res.counters["exactly_one_violations"]}
    if res.failures:
        i, f, model, worlds = res.failures[0]
        report["first_failure"] = {"case": i, "formula": to_text(f), "worlds": worlds,
                                   "model": _model_report(model, args.algebra)}
    ok = res.passed and not res.counters["exactly_one_violations"]
    return (OK if ok else NEGATIVE), report


COMMANDS = {
    "algebra-check": cmd_algebra_check,
    "interpret": cmd_interpret,
    "eval": cmd_eval,
    "validate": cmd_validate,
    "translate": cmd_translate,
    "phi-star": cmd_phi_star,
    "reduce": cmd_reduce,
    "prove-k": cmd_prove_k,
    "define": cmd_define,
    "compare": cmd_compare,
    "closure": cmd_closure,
    "switch-suite": cmd_switch_suite,
}


# ---------------------------------------------------------------- argument parsing

def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed echoed in the report")
    common.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                        help="valuations per frame (default from MVMODAL_BUDGET)")
    common.add_argument("--workers", type=_positive, default=1)

    parser = argparse.ArgumentParser(prog="mvmodal", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, algebra=True, default_algebra=None):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if algebra:
            p.add_argument("--algebra", required=default_algebra is None, default=default_algebra,
                           help="2, 2^k, l<n>, g<n>, kleene<n> or an algebra file")
        return p

    def universe_flags(p):
        p.add_argument("--universe", type=_positive, default=3, help="max worlds")
        p.add_argument("--iso", action="store_true", help="one frame per isomorphism class")

    add("algebra-check", "validate an algebra and report its class")
    p = add("interpret", "search a Boolean interpretation term")
    p.add_argument("--max-size", type=_positive, default=9)
    p.add_argument("--negation", help="negation term in x (default: the algebra's)")
    p = add("eval", "evaluate a formula in a model file", algebra=False)
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p = add("validate", "validity or consequence on a frame or universe")
    p.add_argument("--formula", required=True)
    p.add_argument("--premise", action="append", default=[])
    p.add_argument("--frame")
    p.add_argument("--universe", type=_positive)
    p.add_argument("--iso", action="store_true")
    p.add_argument("--method", choices=("enumerate", "sat", "auto"), default="enumerate")
    p = add("translate", "the two-valued translation for one value")
    p.add_argument("--formula", required=True)
    p.add_argument("--value", help="element label or index (default: top)")
    p.add_argument("--simplify", action="store_true")
    p = add("phi-star", "the two-valued formula defining the same frames")
    p.add_argument("--formula", required=True)
    p.add_argument("--simplify", action="store_true")
    p = add("reduce", "polynomial reduction to a classical instance")
    p.add_argument("--mode", choices=("consequence", "validity"), required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--premise", action="append", default=[])
    p = add("prove-k", "decide K-validity of a classical formula", algebra=False)
    p.add_argument("--formula", required=True)
    p.add_argument("--engine", choices=sorted(ENGINES), default="tableau")
    p.add_argument("--node-budget", type=_positive, default=200_000)
    p = add("define", "frames of a universe defined by formulas")
    p.add_argument("--formula", action="append", required=True)
    universe_flags(p)
    p = add("compare", "A-defined class against the matching 2-defined class")
    p.add_argument("--formula", required=True)
    p.add_argument("--term", help="interpretation term t; the formula is then classical")
    p.add_argument("--negation", help="negation term reading classical ~ (with --term)")
    universe_flags(p)
    p = add("closure", "closure of a defined class under frame constructions")
    p.add_argument("--formula", action="append", required=True)
    p.add_argument("--operation", choices=CLOSURE_OPERATIONS + ("all",), default="all")
    universe_flags(p)
    p = add("switch-suite", "seeded switch-lemma suite")
    p.add_argument("--max-worlds", type=_positive, default=3)
    p.add_argument("--max-rank", type=int, default=2)
    p.add_argument("--vars", type=_positive, default=2)
    p.add_argument("--count", type=_positive, help="cases (default: one per frame)")
    return parser


# ---------------------------------------------------------------- rendering

def render_text(report: dict) -> str:
    lines = [str(report.get("summary", ""))]
    for key, value in report.items():
        if key == "summary":
            continue
        if isinstance(value, str) and "\n" in value:
            lines.append(f"{key}:")
            lines.extend("  " + line for line in value.rstrip("\n").split("\n"))
        elif isinstance(value, (dict, list)):
            lines.append(f"{key}: {json.dumps(value, ensure_ascii=False)}")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else OK
    try:
        status, report = COMMANDS[args.command](args)
    except ParseError as exc:
        err.write(f"error: formula parse error: {exc}\n")
        return ERROR
    except (UsageError, ValueError, OSError, AlgebraError, EnumerationBudgetError,
            TableauBudgetError, UniverseBudgetError) as exc:
        err.write(f"error: {exc}\n")
        return ERROR
    report = {"summary": report.pop("summary"), "command": args.command, "seed": args.seed, **report}
    if args.format == "json":
        out.write(json.dumps(report, ensure_ascii=False, indent=2) + "\n")
    else:
        out.write(render_text(report))
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
