"""Command-line entry point: ``relator-lab COMMAND DOCUMENT [ARGS]``.

Exit status is 0 on success, 2 when the property asked about is absent or
nothing was found within bounds, and 1 on errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from ..core.relators import RelativePresentation, power, substitute
from ..core.words import format_key
from ..embed import EmbedError, NoCertificate, to_strong
from ..kernel import KernelError, WordProblem, verify_iso
from ..quotients import DEFAULT_NODE_BUDGET, QuotientError, separate
from ..weights import (
    MaxMinClass,
    WeightError,
    WeightFunction,
    brown_kernel_fg,
    certify,
    oracle_search,
    search_certificate,
    widened_extremes,
)
from .dsl import DSLError, PresentationDocument, format_atoms, parse, parse_file
from .report import new_report, render, sparkline

EXIT_OK, EXIT_ERROR, EXIT_ABSENT = 0, 1, 2

_CLASSES = (MaxMinClass.STRONG, MaxMinClass.UNIQUE_MAX_MIN, MaxMinClass.UNIQUE_MIN)


class CommandError(Exception):
    pass


def _classification(P: RelativePresentation, args) -> tuple[dict, MaxMinClass]:
    W = P.relator.skeleton()
    found, cert = MaxMinClass.NONE, None
    per_class = {}
    for target in _CLASSES:
        if args.oracle:
            theta = oracle_search(W, target, bound=args.weight_bound)
            c = certify(W, WeightFunction(theta), target) if theta else None
        else:
            c = search_certificate(W, target, alphabet=P.alphabet)
        per_class[target.label] = c is not None
        if c is not None and cert is None:
            found, cert = target, c
    out = {
        "skeleton": str(W),
        "method": f"oracle (weight bound {args.weight_bound})" if args.oracle else "exact search",
        "class": found.label,
        "classes": per_class,
    }
    if cert is not None:
        out["certificate"] = cert.as_dict()
        out["graph"] = sparkline(cert.report.profile.values)
    return out, found


def cmd_classify(doc, P, args, report) -> int:
    body, found = _classification(P, args)
    report["classification"] = body
    return EXIT_OK if found != MaxMinClass.NONE else EXIT_ABSENT


def cmd_embed(doc, P, args, report) -> int:
    try:
        res = to_strong(P)
    except NoCertificate as exc:
        report["embedding"] = {"status": "no certificate", "reason": str(exc)}
        return EXIT_ABSENT
    report["embedding"] = res.as_dict()
    return EXIT_OK if res.pair.verified else EXIT_ERROR


def _word_problem(P: RelativePresentation, args) -> WordProblem:
    try:
        return WordProblem(P, max_level=args.max_level)
    except NoCertificate as exc:
        raise CommandError(f"no word-problem solver for this presentation: {exc}") from None


def cmd_kernel(doc, P, args, report) -> int:
    wp = _word_problem(P, args)
    body = {
        "free_letters": list(wp.free_letters),
        "strong_presentation": wp.strong.presentation.format(),
        "e": format_key(wp.strong.e),
        "trivial_case": wp.trivial,
    }
    if wp.trivial:
        body["note"] = "the profile spans one step: e is solved from the relator"
        report["kernel"] = body
        return EXIT_OK
    body["data"] = wp.kernel.summary()
    iso = verify_iso(wp.kernel, args.window)
    body["verification"] = iso.as_dict()
    report["kernel"] = body
    return EXIT_OK if iso.passed else EXIT_ERROR


def cmd_eq(doc, P, args, report) -> int:
    wp = _word_problem(P, args)
    w1, w2 = doc.word(args.w1), doc.word(args.w2)
    equal = wp.equal(w1, w2)
    report["eq"] = {
        "w1": format_atoms(doc, w1),
        "w2": format_atoms(doc, w2),
        "equal": equal,
    }
    return EXIT_OK if equal else EXIT_ABSENT


def cmd_separate(doc, P, args, report) -> int:
    w = doc.word(args.w)
    res = separate(P, w, args.degree_bound, node_budget=args.node_budget, assume_nontrivial=args.assume_nontrivial)
    body = {
        "query": format_atoms(doc, w),
        "status": res.status,
        "degree_bound": res.degree_bound,
        "nodes": res.nodes,
        "precheck": res.precheck,
    }
    if res.witness is not None:
        body["witness"] = res.witness.as_dict(P.group)
    report["separate"] = body
    return EXIT_OK if res.found else EXIT_ABSENT


def _derived_document(doc: PresentationDocument, R, alphabet, name: str) -> PresentationDocument:
    return PresentationDocument(doc.group_name, doc.group, tuple(alphabet), dict(doc.elems), {name: R}, {})


def cmd_subst(doc, P, args, report) -> int:
    if args.outer not in doc.relators:
        raise CommandError(f"no relator named {args.outer!r}")
    inner_name = args.relator or next((n for n in doc.relators if n != args.outer), None)
    if inner_name is None or inner_name not in doc.relators:
        raise CommandError("subst needs a second relator to substitute in")
    S, R = doc.relators[args.outer], doc.relators[inner_name]
    new = substitute(S, args.var, R, doc.group)
    alphabet = [x for x in doc.letters if x != args.var]
    out_doc = _derived_document(doc, new, alphabet, "R")
    body, _ = _classification(out_doc.presentation(), args)
    report["subst"] = {"outer": args.outer, "var": args.var, "inner": inner_name,
                       "document": out_doc.format().splitlines(), "classification": body}
    return EXIT_OK


def cmd_power(doc, P, args, report) -> int:
    new = power(P.relator, args.n)
    out_doc = _derived_document(doc, new, doc.letters, "R")
    body, _ = _classification(out_doc.presentation(), args)
    report["power"] = {"n": args.n, "document": out_doc.format().splitlines(), "classification": body}
    return EXIT_OK


def _parse_theta(text: str) -> WeightFunction:
    vals = {}
    for part in text.split(","):
        name, _, v = part.partition("=")
        if not _ or not name.strip():
            raise CommandError(f"bad weight {part!r}; expected letter=int")
        try:
            vals[name.strip()] = int(v)
        except ValueError:
            raise CommandError(f"bad weight {part!r}; expected letter=int") from None
    return WeightFunction(vals)


def cmd_brown(doc, P, args, report) -> int:
    W = P.relator.skeleton()
    if args.theta:
        theta, source = _parse_theta(args.theta), "given"
    else:
        cert = search_certificate(W, MaxMinClass.UNIQUE_MAX_MIN, alphabet=P.alphabet)
        if cert is not None:
            theta, source = cert.theta, "unique-max-min certificate"
        else:
            theta, source = WeightFunction.constant(W.letters()), "constant"
    ok = brown_kernel_fg(W, theta, len(P.alphabet))
    hi, lo = widened_extremes(W, theta)
    report["brown"] = {
        "theta": theta.as_dict(),
        "theta_source": source,
        "alphabet_size": len(P.alphabet),
        "max": {"value": hi.value, "positions": list(hi.positions), "ok": hi.ok},
        "min": {"value": lo.value, "positions": list(lo.positions), "ok": lo.ok},
        "kernel_finitely_generated": ok,
    }
    return EXIT_OK if ok else EXIT_ABSENT


COMMANDS = {
    "classify": cmd_classify,
    "embed": cmd_embed,
    "kernel": cmd_kernel,
    "eq": cmd_eq,
    "separate": cmd_separate,
    "subst": cmd_subst,
    "power": cmd_power,
    "brown": cmd_brown,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("document", help="presentation file, or - for stdin")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--relator", default=None, help="relator name (default: the first one)")
    common.add_argument("--window", type=int, default=3, help="kernel verification window N")
    common.add_argument("--degree-bound", type=int, default=5, help="largest permutation degree")
    common.add_argument("--weight-bound", type=int, default=4, help="weight bound B in oracle mode")
    common.add_argument("--oracle", action="store_true", help="replace certificate search by brute force")
    common.add_argument("--max-level", type=int, default=64, help="deepest kernel level built")
    common.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    common.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")

    ap = argparse.ArgumentParser(prog="relator-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="max-min class and certificate")
    sub.add_parser("embed", parents=[common], help="embedding chain into a strong presentation")
    sub.add_parser("kernel", parents=[common], help="kernel data and isomorphism checks")
    p = sub.add_parser("eq", parents=[common], help="decide w1 = w2")
    p.add_argument("w1")
    p.add_argument("w2")
    p = sub.add_parser("separate", parents=[common], help="finite quotient not killing w")
    p.add_argument("w")
    p.add_argument("--assume-nontrivial", action="store_true", help="skip the word-problem pre-check")
    p = sub.add_parser("subst", parents=[common], help="substitute a relator for a letter")
    p.add_argument("--outer", required=True, help="relator S containing the variable")
    p.add_argument("--var", required=True, help="letter z replaced by the inner relator")
    p = sub.add_parser("power", parents=[common], help="relator power R^n")
    p.add_argument("n", type=int)
    p = sub.add_parser("brown", parents=[common], help="finitely generated kernel criterion")
    p.add_argument("--theta", default=None, help="weights such as x=1,y=-1")
    return ap


def _flags(args) -> dict:
    skip = {"command", "document", "format", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _load(path: str) -> PresentationDocument:
    if path == "-":
        return parse(sys.stdin.read())
    return parse_file(Path(path))


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        doc = _load(args.document)
    except (DSLError, OSError) as exc:
        print(f"error: {args.document}: {exc}", file=stderr)
        return EXIT_ERROR
    report = new_report(args.command, doc.format(), _flags(args))
    try:
        P = doc.presentation(args.relator)
        report["presentation"] = P.format()
        code = COMMANDS[args.command](doc, P, args, report)
    except (CommandError, DSLError, EmbedError, KernelError, QuotientError, WeightError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        report["error"] = f"{type(exc).__name__}: {msg}"
        code = EXIT_ERROR
        print(f"error: {msg}", file=stderr)
    report["exit_code"] = code
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    stdout.write(render(report, args.format))
    return code


def main() -> None:
    sys.exit(run())

