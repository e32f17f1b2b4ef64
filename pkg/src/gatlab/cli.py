"""Command-line entry point.

Each command builds a report (a JSON-ready dict) and the process exits with
status 0 exactly when every verdict in it passed. ``--json`` prints the
report itself; otherwise a short human-readable summary is printed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional

from . import suites
from .builtin import corpus_dir, corpus_path
from .catinst import check_category, is_equivalence, is_trivial_fibration, lifting_failures, to_hom
from .errors import GatError
from .fibrations import check_hom, is_anodyne_fibration
from .formulas import TOP, FormulaCase, formula_text
from .loader import (
    formula_by_name,
    load_categories,
    load_formulas,
    load_functor,
    load_hom,
    load_model,
    load_theory,
    resolve,
)
from .modelsearch import find_countermodel
from .proofs import conclusion, load_proof_file, run_spec
from .semantics import check_model, enumerate_context, eval_formula

SCHEMA = 1


class UsageError(GatError):
    pass


def _report(command: str, inputs: list, verdicts: list, started: float, **extra) -> dict:
    failures = [v for v in verdicts if not v["pass"]]
    out = {
        "schema": SCHEMA,
        "command": command,
        "inputs": [suites.file_digest(resolve(str(p))) for p in inputs],
        "verdicts": verdicts,
        "checks": len(verdicts),
        "passed": len(verdicts) - len(failures),
        "ok": not failures,
        "first_failure": failures[0] if failures else None,
    }
    out.update(extra)
    out["wall_time"] = round(time.perf_counter() - started, 3)
    return out


def _at(text: Optional[str]) -> Optional[tuple]:
    if text is None:
        return None
    return tuple(p.strip() for p in text.split(",")) if text.strip() else ()


# ---------------------------------------------------------------------------
# Commands


def _check_one(path: str, theory: Optional[str]) -> dict:
    suffix = Path(path).suffix
    verdict: dict = {"file": Path(path).name, "kind": suffix.lstrip(".")}
    if suffix == ".gat":
        th = load_theory(path)
        verdict.update(theory=th.name, sorts=len(th.sorts), ops=len(th.ops), equations=len(th.equations), ok=True)
    elif suffix == ".gmod":
        M = load_model(path)
        mc = check_model(M.theory, M)
        verdict.update(ok=mc.ok, violation=None if mc.ok else mc.violation.as_dict())
    elif suffix == ".ghom":
        h = load_hom(path)
        hc = check_hom(h)
        verdict.update(ok=hc.ok, violation=hc.violation)
    elif suffix == ".gcat":
        cats = load_categories(path)
        for C in cats:
            check_category(C)
        verdict.update(categories=len(cats), ok=True)
    elif suffix == ".gfun":
        F = load_functor(path)
        verdict.update(functor=F.name, ok=True)
    elif suffix == ".gfm":
        if theory is None:
            raise UsageError("checking a formula file needs --theory")
        cases = load_formulas(path, load_theory(theory))
        verdict.update(formulas=[c.name for c in cases], ok=True)
    elif suffix == ".gpf":
        specs = load_proof_file(path)
        verdict.update(proofs=len(specs), ok=True)
    else:
        raise UsageError(f"unknown file kind {suffix!r}")
    return verdict


def cmd_check(args) -> dict:
    started = time.perf_counter()
    verdicts = []
    for path in args.files:
        try:
            v = _check_one(path, args.theory)
        except GatError as err:
            v = {"file": Path(path).name, "ok": False, "error": err.tag, "detail": str(err)}
        v["pass"] = v.pop("ok")
        verdicts.append(v)
    inputs = [p for p, v in zip(args.files, verdicts) if "error" not in v or v["error"] != "FileMissing"]
    return _report("check", inputs, verdicts, started)


def _pick_formula(args, th) -> FormulaCase:
    return formula_by_name(load_formulas(args.formula, th), args.name)


def cmd_eval(args) -> dict:
    started = time.perf_counter()
    M = load_model(args.model)
    th = load_theory(args.theory) if args.theory else M.theory
    if th is not M.theory:
        raise UsageError(f"model {M.name!r} is not a model of {args.theory}")
    case = _pick_formula(args, th)
    at = _at(args.at)
    points = [at] if at is not None else enumerate_context(M, case.ctx)
    verdicts = []
    for x in points:
        if len(x) != len(case.ctx):
            raise UsageError(f"{case.name} takes {len(case.ctx)} arguments, got {len(x)}")
        if x not in enumerate_context(M, case.ctx):
            raise UsageError(f"{list(x)} is not an element of {case.ctx} in model {M.name!r}")
        value = eval_formula(M, case.ctx, case.phi, x)
        verdicts.append({"at": list(x), "value": value, "pass": value})
    return _report(
        "eval", [args.theory or args.model, args.model, args.formula], verdicts, started,
        formula=case.name, text=formula_text(case.phi, case.ctx.all_names()),
    )


def cmd_prove(args) -> dict:
    started = time.perf_counter()
    verdicts = []
    for spec in load_proof_file(args.file):
        v = run_spec(spec)
        row = {"proof": spec.name, "expect": spec.expect, **v.as_dict()}
        if spec.expect == "accept":
            ok = v.accepted
            if ok and args.countermodel:
                ctx, lhs, rhs = conclusion(spec.node)
                bound = spec.bound if spec.bound is not None else args.bound
                cm = find_countermodel(spec.theory, lhs, rhs, ctx, bound)
                row["countermodel"] = None if cm is None else cm.as_dict()
                ok = cm is None
        else:
            ok = not v.accepted and (spec.expect_rule is None or v.rule == spec.expect_rule)
        row["pass"] = ok
        verdicts.append(row)
    return _report("prove", [args.file], verdicts, started)


def cmd_countermodel(args) -> dict:
    started = time.perf_counter()
    th = load_theory(args.theory)
    cases = load_formulas(args.formulas, th)
    rhs = formula_by_name(cases, args.rhs)
    lhs = formula_by_name(cases, args.lhs) if args.lhs else FormulaCase("true", rhs.ctx, TOP)
    if lhs.ctx.entries != rhs.ctx.entries:
        raise UsageError(f"{lhs.name} and {rhs.name} live in different contexts: {lhs.ctx} vs {rhs.ctx}")
    cm = find_countermodel(th, lhs.phi, rhs.phi, rhs.ctx, args.bound)
    verdict = {"lhs": lhs.name, "rhs": rhs.name, "bound": args.bound,
               "countermodel": None if cm is None else cm.as_dict(), "pass": cm is None}
    return _report("countermodel", [args.theory, args.formulas], [verdict], started)


def cmd_fib_check(args) -> dict:
    started = time.perf_counter()
    if bool(args.hom) == bool(args.functor):
        raise UsageError("give exactly one of --hom or --functor")
    extra: dict = {}
    if args.hom:
        h = load_hom(args.hom)
        source = args.hom
    else:
        F = load_functor(args.functor)
        h = to_hom(F)
        source = args.functor
        extra = {
            "equivalence": is_equivalence(F),
            "trivial_fibration": is_trivial_fibration(F),
            "lifting_failures": sorted(lifting_failures(F)),
        }
    hc = check_hom(h)
    verdicts = [{"check": "homomorphism", "pass": hc.ok, "violation": hc.violation}]
    if hc.ok:
        an = is_anodyne_fibration(h)
        verdicts.append({"check": "anodyne", "pass": an.ok, **an.as_dict()})
    return _report("fib-check", [source], verdicts, started, hom=h.name, **extra)


def cmd_invariance(args) -> dict:
    started = time.perf_counter()
    keys = sorted(suites.SUITES) if args.criterion == "all" else [args.criterion]
    reports = []
    for k in keys:
        fn = suites.SUITES[k]
        kwargs = {}
        if k in ("2", "3", "7", "8"):
            kwargs["seed"] = args.seed
        if k in ("3", "7") and args.exhaustive:
            kwargs["exhaustive"] = True
        reports.append(fn(**kwargs))
    verdicts = [
        {"criterion": r["criterion"], "title": r["title"], "cases": r["cases"], "passed": r["passed"], "pass": r["ok"]}
        for r in reports
    ]
    return _report("invariance", [], verdicts, started, seed=args.seed, reports=reports)


def cmd_corpus(args) -> dict:
    from .fincats import CORPUS_FILE, corpus_text
    from .sigeq import SHIPPED, theory_source

    started = time.perf_counter()
    generated = {CORPUS_FILE: corpus_text()}
    generated.update({f: theory_source(sig) for f, sig in SHIPPED.items()})
    out = Path(args.out) if args.out else corpus_dir()
    verdicts = []
    for name, text in sorted(generated.items()):
        current = corpus_path(name).read_text(encoding="utf-8") if corpus_path(name).is_file() else None
        if args.check:
            verdicts.append({"file": name, "pass": current == text, "matches_shipped": current == text})
            continue
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text, encoding="utf-8")
        verdicts.append({"file": name, "pass": True, "written": str(out / name)})
    return _report("corpus", [], verdicts, started)


# ---------------------------------------------------------------------------
# Output


def _summary(report: dict) -> str:
    lines = []
    for v in report["verdicts"]:
        mark = "ok  " if v["pass"] else "FAIL"
        rest = {k: x for k, x in v.items() if k != "pass" and x is not None}
        if report["command"] == "eval":
            lines.append(f"{mark} {report['formula']}({', '.join(v['at'])}) = {str(v['value']).lower()}")
        elif report["command"] == "fib-check" and v["check"] == "anodyne":
            lines.append(f"{mark} anodyne: {str(v['anodyne']).lower()}" + (
                "" if v["pass"] else f" (unlifted {v['unlifted']!r} in {v['sort']}{v['index']})"))
        elif report["command"] == "prove":
            state = "accepted" if v["accepted"] else f"rejected by {v['rule']} at node {v['node']}: {v['error']}"
            lines.append(f"{mark} {v['proof']}: {state}")
        else:
            lines.append(f"{mark} " + json.dumps(rest, sort_keys=True))
    lines.append(f"{report['passed']}/{report['checks']} passed")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the full JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled suites (default 0)")
    common.add_argument("--exhaustive", action="store_true", help="check every element instead of sampling one")

    p = argparse.ArgumentParser(prog="gatlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="elaborate and check theory, model, hom, category files")
    c.add_argument("files", nargs="+")
    c.add_argument("--theory", help="theory for .gfm files")
    c.set_defaults(run=cmd_check)

    e = sub.add_parser("eval", parents=[common], help="evaluate a formula in a finite model")
    e.add_argument("--theory")
    e.add_argument("--model", required=True)
    e.add_argument("--formula", required=True, help="formula file")
    e.add_argument("--name", help="formula name when the file defines several")
    e.add_argument("--at", help="comma-separated element names; omitted means every element")
    e.set_defaults(run=cmd_eval)

    pr = sub.add_parser("prove", parents=[common], help="check the proofs in a .gpf file")
    pr.add_argument("file")
    pr.add_argument("--countermodel", action="store_true", help="also search for countermodels to accepted proofs")
    pr.add_argument("--bound", type=int, default=3)
    pr.set_defaults(run=cmd_prove)

    cm = sub.add_parser("countermodel", parents=[common], help="search for a model refuting lhs |- rhs")
    cm.add_argument("--theory", required=True)
    cm.add_argument("--formulas", required=True)
    cm.add_argument("--lhs", help="antecedent formula name (default: true)")
    cm.add_argument("--rhs", required=True)
    cm.add_argument("--bound", type=int, default=3, help="maximum fiber size")
    cm.set_defaults(run=cmd_countermodel)

    f = sub.add_parser("fib-check", parents=[common], help="test a hom or functor for the anodyne lifting property")
    f.add_argument("--hom")
    f.add_argument("--functor")
    f.set_defaults(run=cmd_fib_check)

    i = sub.add_parser("invariance", parents=[common], help="run the property suites")
    i.add_argument("--criterion", default="all", choices=["all", *sorted(suites.SUITES)])
    i.set_defaults(run=cmd_invariance)

    g = sub.add_parser("corpus", parents=[common], help="regenerate the generated corpus files")
    g.add_argument("--out", help="directory to write to (default: the shipped corpus)")
    g.add_argument("--check", action="store_true", help="only compare against the shipped files")
    g.set_defaults(run=cmd_corpus)
    return p


def run(argv: Optional[list] = None) -> tuple[int, dict]:
    args = build_parser().parse_args(argv)
    report = args.run(args)
    return (0 if report["ok"] else 1), report


def main(argv: Optional[list] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        report = args.run(args)
    except GatError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(_summary(report))
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
