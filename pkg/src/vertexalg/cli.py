"""Batch command-line front end.

Subcommands: reduce, gen, grade, support, sheaf, verify, models.  All
output is plain text on stdout; `verify --report` additionally writes a
JSON report.  Exit status is 0 unless a check fails or the invocation
is unusable.
"""

import argparse
import json
import re
import sys
from fractions import Fraction as Q

from .generators import (
    FAMILY_IDS,
    CertificationError,
    GeneratorSpec,
    TruncationPolicy,
    build_generator,
)
from .models.base import ModelDegreeError
from .models.factory import load_model, shipped_model, shipped_model_names
from .models.morphisms import shipped_morphisms
from .parsing import ParseError, parse, to_text
from .rewrite import RULE_ORDER, RuleSet, reduce_element
from .sheaf import (
    SupportError,
    load_cover,
    restrict,
    semantic_support,
    sheaf_axiom_check,
    support,
)
from .suites import SUITE_IDS, SuiteConfig, emit_report, exit_status, run_suite
from .terms import Alphabet, Symbol, grade

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_LIE_NAME = re.compile(r"^g[0-9]*$")


def _parse_assignments(text, cast):
    out = {}
    if not text:
        return out
    for piece in text.split(","):
        name, _, value = piece.partition("=")
        if not value:
            raise ValueError(f"expected name=value, got {piece!r}")
        out[name.strip()] = cast(value.strip())
    return out


def free_alphabet(texts, degrees=None, parities=None) -> Alphabet:
    """Alphabet for model-less terms: identifiers are declared on sight.

    Names g, g1, g2, ... are degree-1 Lie slots by convention (matching
    the usual letter for the Lie part); everything else is a degree-0
    generic symbol.  --degrees / --parities entries override both.
    """
    degrees = degrees or {}
    parities = parities or {}
    al = Alphabet()
    for text in texts:
        for m in _IDENT.finditer(text):
            name = m.group()
            if text[m.end() : m.end() + 1] == "{":
                continue  # the o{n} product operator
            if al.has(name):
                continue
            if name in degrees or name in parities:
                deg = degrees.get(name, Q(0))
                par = parities.get(name, 0)
                al.add(Symbol(name, par, deg, "generic"))
            elif _LIE_NAME.match(name):
                al.add(Symbol(name, 0, Q(1), "lie"))
            else:
                al.add(Symbol(name, 0, Q(0), "generic"))
    return al


def _get_model(name):
    if name is None:
        return None
    if name.endswith(".json"):
        return load_model(name)
    return shipped_model(name)


def _element(text, model=None, alphabet=None, degrees=None, parities=None):
    if alphabet is None:
        alphabet = model.alphabet if model else free_alphabet(
            [text], degrees, parities
        )
    return parse(text, alphabet)


def _policy(ns) -> TruncationPolicy:
    return TruncationPolicy(
        default_locality=ns.locality, level=max(ns.trunc, ns.locality)
    )


# -- subcommands -----------------------------------------------------------------


def _cmd_reduce(ns) -> int:
    model = _get_model(ns.model)
    x = _element(ns.term, model)
    if ns.rules:
        wanted = tuple(r.strip() for r in ns.rules.split(","))
        unknown = [r for r in wanted if r not in RULE_ORDER]
        if unknown:
            raise ValueError(f"unknown rules: {', '.join(unknown)}")
        rules = RuleSet(model, _policy(ns) if "locality_kill" in wanted else None,
                        wanted)
    elif model is not None:
        rules = RuleSet.stock(model)
    else:
        rules = RuleSet(None, None, ("unit_left", "unit_strip"))
    report = reduce_element(x, rules, budget=ns.budget)
    print(to_text(report.result))
    print(f"steps: {report.steps}")
    print(f"status: {report.status}")
    return 0


_GEN_ARITY = {"i": 1, "c": 2, "d": 2, "e": 2, "qc": 2, "qa": 3,
              "s": 2, "a": 2, "am": 3, "k": 1}


def _cmd_gen(ns) -> int:
    fam = ns.family
    want = _GEN_ARITY[fam]
    if len(ns.args) != want:
        raise ValueError(f"family {fam} takes {want} --args, got {len(ns.args)}")
    model = _get_model(ns.model)
    context = None
    if fam == "k":
        if not ns.cover:
            raise ValueError("k-family needs --cover")
        context, _ = load_cover(ns.cover)
        alphabet = context.alphabet
    elif model is not None:
        alphabet = model.alphabet
    else:
        if fam in ("s", "a", "am"):
            raise ValueError(f"{fam}-family needs --model")
        alphabet = free_alphabet(ns.args, _parse_assignments(ns.degrees, Q),
                                 _parse_assignments(ns.parities, int))
    args = tuple(parse(t, alphabet) for t in ns.args)
    if fam in ("i", "c", "d", "e", "qc"):
        if ns.n is None:
            raise ValueError(f"family {fam} needs --n")
        indices = (ns.n,)
    elif fam == "qa":
        if ns.n is None or ns.m is None:
            raise ValueError("family qa needs --m and --n")
        indices = (ns.m, ns.n)
    else:
        indices = ()
    spec = GeneratorSpec(fam, args, indices, ns.k_bound)
    built = build_generator(spec, _policy(ns), model=model, context=context,
                            certify=not ns.no_certify)
    print(to_text(built.element))
    g = grade(built.element)
    print(f"degree: {g.degree if g.degree is not None else 'mixed'}")
    return 0


def _cmd_grade(ns) -> int:
    model = _get_model(ns.model)
    x = _element(ns.term, model,
                 degrees=_parse_assignments(ns.degrees, Q),
                 parities=_parse_assignments(ns.parities, int))
    g = grade(x)
    print(f"degree: {g.degree if g.degree is not None else 'mixed'}")
    print(f"lengths: {', '.join(str(n) for n in g.lengths) or 'none'}")
    print(f"shapes: {len(set(g.shape_keys))}")
    return 0


def _cmd_support(ns) -> int:
    context, _ = load_cover(ns.cover)
    x = parse(ns.term, context.alphabet)
    print(f"support: {support(x, context)}")
    print(f"semantic: {semantic_support(x, context)}")
    return 0


def _cmd_sheaf(ns) -> int:
    if ns.action != "check":
        raise ValueError(f"unknown sheaf action {ns.action!r}")
    context, cover = load_cover(ns.cover)
    if ns.global_section:
        glob = parse(ns.global_section, context.alphabet)
        sections = [restrict(glob, p.window, context) for p in cover]
    elif ns.sections:
        if len(ns.sections) != len(cover):
            raise ValueError(
                f"cover has {len(cover)} patches, got {len(ns.sections)} sections"
            )
        sections = [parse(t, context.alphabet) for t in ns.sections]
    else:
        raise ValueError("sheaf check needs --sections or --global")
    results = sheaf_axiom_check(cover, sections, context)
    failed = 0
    for r in results:
        mark = "ok  " if r["ok"] else "FAIL"
        detail = f"  ({r['detail']})" if r.get("detail") else ""
        print(f"{mark} {r['id']}{detail}")
        failed += not r["ok"]
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def _cmd_verify(ns) -> int:
    suites = list(dict.fromkeys(
        SUITE_IDS if "all" in ns.suites else ns.suites
    ))
    reports = []
    for sid in suites:
        cfg = SuiteConfig(
            suite=sid,
            trunc_level=ns.trunc,
            locality=ns.locality,
            max_len=ns.max_len,
            index_window=ns.index_window,
            samples=ns.samples,
            seed=ns.seed,
            budget=ns.budget,
        )
        rep = run_suite(sid, cfg)
        reports.append(rep)
        for c in rep["checks"]:
            line = f"{c['status']:6s} {sid}:{c['id']} ({c.get('millis', 0)} ms)"
            if c["status"] == "fail" and c.get("witness"):
                line += f"\n       witness: {c['witness']}"
            print(line)
        print(f"suite {sid}: {rep['status']} "
              f"({rep['counts']['pass']} pass, {rep['counts']['fail']} fail, "
              f"{rep['counts']['budget']} budget)")
    if ns.report:
        payload = reports[0] if len(reports) == 1 else {
            "suites": reports,
            "status": "fail" if any(r["status"] == "fail" for r in reports)
            else "pass",
        }
        emit_report(payload, ns.report)
        print(f"report written to {ns.report}")
    return exit_status(reports)


def _cmd_models(ns) -> int:
    for name in shipped_model_names():
        model = shipped_model(name)
        kinds = sorted({s.kind for s in model.symbols()})
        line = f"{name}: {len(model.symbols())} symbols ({', '.join(kinds)})"
        try:
            phi, psi = shipped_morphisms(model)
            line += f"; morphisms {phi.name}, {psi.name}"
        except (KeyError, ValueError):
            pass
        print(line)
    return 0


# -- argument wiring ---------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="vertexalg",
        description="Exact symbolic checks for the tree-product algebra, "
        "its ideal generators, concrete models, and interval sheaves.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common_policy(p):
        p.add_argument("--locality", type=int, default=3,
                       help="locality constant (default 3)")
        p.add_argument("--trunc", type=int, default=8,
                       help="truncation level (default 8)")

    p = sub.add_parser("reduce", help="rewrite a term to normal form")
    p.add_argument("term")
    p.add_argument("--model", help="shipped model name or a .json file")
    p.add_argument("--rules", help="comma-separated rule names "
                   f"(from: {', '.join(RULE_ORDER)})")
    p.add_argument("--budget", type=int, default=10000)
    common_policy(p)
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("gen", help="build one ideal-generator instance")
    p.add_argument("family", choices=FAMILY_IDS)
    p.add_argument("--args", action="append", default=[],
                   help="argument term (repeat per slot)")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k-bound", type=int, dest="k_bound",
                   help="series bound for qc/qa tails")
    p.add_argument("--model")
    p.add_argument("--cover", help="cover file (k family)")
    p.add_argument("--degrees", help="free-symbol degrees, e.g. g=1,a=0")
    p.add_argument("--parities", help="free-symbol parities, e.g. p=1")
    p.add_argument("--no-certify", action="store_true",
                   help="skip tail-deadness certification")
    common_policy(p)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("grade", help="degree, lengths, and shapes of a term")
    p.add_argument("term")
    p.add_argument("--model")
    p.add_argument("--degrees", help="free-symbol degrees, e.g. g=1,a=0")
    p.add_argument("--parities")
    p.set_defaults(fn=_cmd_grade)

    p = sub.add_parser("support", help="support of a tagged term under a cover")
    p.add_argument("term")
    p.add_argument("--cover", required=True)
    p.set_defaults(fn=_cmd_support)

    p = sub.add_parser("sheaf", help="sheaf-axiom checks over a cover")
    p.add_argument("action", choices=("check",))
    p.add_argument("--cover", required=True)
    p.add_argument("--sections", action="append",
                   help="one section term per patch, in patch order")
    p.add_argument("--global", dest="global_section",
                   help="a single global term; sections are its restrictions")
    p.set_defaults(fn=_cmd_sheaf)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suites", nargs="+", choices=SUITE_IDS + ("all",))
    p.add_argument("--max-len", type=int, default=3, dest="max_len")
    p.add_argument("--index-window", type=int, default=4, dest="index_window")
    p.add_argument("--samples", type=int, default=0,
                   help="per-check sample count (0 = suite default)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--report", help="write a JSON report here")
    common_policy(p)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("models", help="list shipped models")
    p.set_defaults(fn=_cmd_models)

    return top


def main(argv=None) -> int:
    ns = _build_parser().parse_args(argv)
    try:
        return ns.fn(ns)
    except (ParseError, SupportError, CertificationError, ModelDegreeError,
            ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


cli_main = main

if __name__ == "__main__":
    sys.exit(main())
