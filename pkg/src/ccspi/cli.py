"""Command-line front end.

Exit codes: 0 when the queried property holds (equivalent, witness found,
suite passed), 1 when it does not, 2 on usage or parse errors.  The bisim
--method both route runs the normal-form decision and the oracle side by
side and treats any divergence as a hard error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .distributed import dsim, strong_bisim_plus
from .erasure import ErasureContext, erase
from .lts import bisimilar_oracle, distinguishing_depth
from .mirrored import search_md_diagram, search_md_parallel_shape
from .pi import early_bisim, ground_bisim, late_bisim
from .rewrite import decide_bisim, normalize_steps, prime_decompose
from .suites import SUITES, run_suite
from .syntax import ParseError, parse_ccs, parse_ccs_plus, parse_pi, print_ccs, print_pi
from .terms import is_ground


@dataclass
class RunReport:
    command: str
    inputs: list[str]
    verdict: str
    payload: dict = field(default_factory=dict)
    elapsed: float = 0.0
    version: str = __version__


class UsageError(Exception):
    pass


def _emit(report: RunReport, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(asdict(report), indent=2, sort_keys=True))
        return
    for i, text in enumerate(report.inputs):
        print(f"input {i + 1}: {text}" if len(report.inputs) > 1 else f"input: {text}")
    print(f"verdict: {report.verdict}")
    for key, value in report.payload.items():
        if isinstance(value, list):
            value = ", ".join(str(v) for v in value)
        print(f"{key}: {value}")
    print(f"elapsed: {report.elapsed:.3f}s (ccspi {report.version})")


def _parse_term(calculus: str, text: str):
    if calculus == "ccs":
        return parse_ccs(text)
    if calculus == "ccs+":
        return parse_ccs_plus(text)
    if calculus == "pi":
        return parse_pi(text)
    raise UsageError(f"unknown calculus: {calculus}")


def _print_term(calculus: str, t) -> str:
    return print_pi(t) if calculus == "pi" else print_ccs(t)


def cmd_normalize(args) -> int:
    t0 = time.time()
    t = parse_ccs(args.term)
    nf, steps = normalize_steps(t)
    report = RunReport(
        command="normalize",
        inputs=[print_ccs(t)],
        verdict="normal form" if steps == 0 else f"reduced in {steps} steps",
        payload={"normal_form": print_ccs(nf), "steps": steps},
        elapsed=time.time() - t0,
    )
    _emit(report, args.format)
    return 0


_STYLES = {
    "ccs": ("strong",),
    "ccs+": ("strong", "distributed"),
    "pi": ("ground", "late", "early"),
}


def cmd_bisim(args) -> int:
    t0 = time.time()
    style = args.style or _STYLES[args.calculus][0]
    if style not in _STYLES[args.calculus]:
        raise UsageError(f"style {style!r} is not defined for calculus {args.calculus!r}")
    method = args.method
    if method is None:
        method = "both" if (args.calculus, style) == ("ccs", "strong") else "oracle"
    if method != "oracle" and (args.calculus, style) != ("ccs", "strong"):
        raise UsageError("--method norm/both applies to the sum-free strong equivalence only")
    if args.depth and (args.calculus == "pi" or style == "distributed"):
        raise UsageError("--depth applies to the interleaving CCS equivalences only")

    p = _parse_term(args.calculus, args.p)
    q = _parse_term(args.calculus, args.q)
    payload: dict = {}

    if args.calculus == "pi":
        game = {"ground": ground_bisim, "late": late_bisim, "early": early_bisim}[style]
        verdict = game(p, q)
    elif style == "distributed":
        verdict = dsim(p, q)
    elif args.calculus == "ccs+":
        verdict = strong_bisim_plus(p, q)
    else:
        ground = is_ground(p) and is_ground(q)
        if method in ("oracle", "both") and not ground:
            raise UsageError("the oracle needs ground terms; use --method norm for open ones")
        if method in ("norm", "both"):
            by_norm = decide_bisim(p, q)
            payload["method_norm"] = by_norm
        if method in ("oracle", "both"):
            by_oracle = bisimilar_oracle(p, q)
            payload["method_oracle"] = by_oracle
        if method == "both" and by_norm != by_oracle:
            print(
                "DIVERGENCE: normal-form decision and oracle disagree on "
                f"{print_ccs(p)} vs {print_ccs(q)}",
                file=sys.stderr,
            )
            return 2
        verdict = by_norm if method in ("norm", "both") else by_oracle

    if args.depth and not verdict and args.calculus in ("ccs", "ccs+") and style == "strong":
        payload["distinguishing_depth"] = distinguishing_depth(p, q)

    report = RunReport(
        command="bisim",
        inputs=[_print_term(args.calculus, p), _print_term(args.calculus, q)],
        verdict=f"{style} bisimilar" if verdict else f"not {style} bisimilar",
        payload=payload,
        elapsed=time.time() - t0,
    )
    _emit(report, args.format)
    return 0 if verdict else 1


def cmd_prime(args) -> int:
    t0 = time.time()
    t = parse_ccs(args.term)
    comps = prime_decompose(t)
    report = RunReport(
        command="prime",
        inputs=[print_ccs(t)],
        verdict="prime" if len(comps) == 1 else f"{len(comps)} prime components",
        payload={"components": [print_ccs(c) for c in comps]},
        elapsed=time.time() - t0,
    )
    _emit(report, args.format)
    return 0


def cmd_erase(args) -> int:
    t0 = time.time()
    p = parse_pi(args.term)
    ctx = ErasureContext(args.input_name, args.output_name)
    result = erase(p, ctx)
    report = RunReport(
        command="erase",
        inputs=[print_pi(p)],
        verdict="erased",
        payload={
            "observed": f"inputs on {ctx.input_name}, outputs on {ctx.output_name}",
            "erasure": print_ccs(result),
        },
        elapsed=time.time() - t0,
    )
    _emit(report, args.format)
    return 0


def cmd_md_search(args) -> int:
    t0 = time.time()
    names = tuple(args.names.split(","))
    if args.shape == "parallel":
        if args.calculus != "ccs":
            raise UsageError("the parallel-shape search is defined for the sum-free calculus")
        bound = args.size if args.size is not None else 3
        w = search_md_parallel_shape(bound, names)
        payload = (
            {}
            if w is None
            else {
                "eta1": str(w.eta1),
                "eta2": str(w.eta2),
                "s": print_ccs(w.s),
                "t": print_ccs(w.t),
            }
        )
    else:
        bound = args.size if args.size is not None else 4
        w = search_md_diagram(args.calculus, bound, names)
        payload = (
            {}
            if w is None
            else {
                "q": print_ccs(w.q),
                "eta1": str(w.eta1),
                "eta2": str(w.eta2),
                "end_first": print_ccs(w.end_first),
                "end_second": print_ccs(w.end_second),
            }
        )
    report = RunReport(
        command="md-search",
        inputs=[f"calculus={args.calculus} shape={args.shape} size<={bound} names={names}"],
        verdict="witness found" if w is not None else "no witness within the bound",
        payload=payload,
        elapsed=time.time() - t0,
    )
    _emit(report, args.format)
    return 0 if w is not None else 1


def cmd_enumerate(args) -> int:
    if args.list or args.suite is None:
        for name in SUITES:
            print(name)
        return 0 if args.list else 2
    overrides = {
        "size_bound": args.size_bound,
        "count": args.count,
        "max_prefixes": args.max_prefixes,
        "max_nus": args.max_nus,
        "seed": args.seed,
        "sample": args.sample,
    }
    try:
        report = run_suite(args.suite, **overrides)
    except KeyError as e:
        print(e.args[0], file=sys.stderr)
        return 2
    if args.format == "json":
        print(
            json.dumps(
                {
                    "suite": report.name,
                    "passed": report.passed,
                    "checked": report.checked,
                    "elapsed": report.elapsed,
                    "failures": report.failures,
                    "notes": report.notes,
                    "version": __version__,
                },
                indent=2,
                sort_keys=True,
            )
        )
    else:
        print(report.summary())
        for f in report.failures:
            print(f"  counterexample: {f}")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccspi",
        description="Process-calculus equivalence toolkit: normal forms, "
        "bisimilarity checkers, mirrored-dependency searches, and property suites.",
        epilog="The enumerate command honours the CCSPI_WORKERS environment "
        "variable for sharding independent checks across threads.",
    )
    parser.add_argument("--version", action="version", version=f"ccspi {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_format(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text")

    p_norm = sub.add_parser("normalize", help="rewrite a sum-free term to its normal form")
    p_norm.add_argument("term")
    add_format(p_norm)
    p_norm.set_defaults(fn=cmd_normalize)

    for cmd, style_default in (("bisim", None), ("dsim", "distributed")):
        p_bis = sub.add_parser(
            cmd,
            help="decide equivalence of two terms"
            if cmd == "bisim"
            else "decide distributed bisimilarity (bisim --calculus ccs+ --style distributed)",
        )
        p_bis.add_argument("p")
        p_bis.add_argument("q")
        p_bis.add_argument(
            "--calculus",
            choices=("ccs", "ccs+", "pi"),
            default="ccs" if cmd == "bisim" else "ccs+",
        )
        p_bis.add_argument("--method", choices=("norm", "oracle", "both"))
        p_bis.add_argument(
            "--style", choices=("strong", "distributed", "ground", "late", "early")
        )
        p_bis.add_argument(
            "--depth",
            action="store_true",
            help="report the number of game rounds needed to tell the terms apart",
        )
        add_format(p_bis)
        p_bis.set_defaults(fn=cmd_bisim, style=style_default)

    p_prime = sub.add_parser("prime", help="prime decomposition of a ground sum-free term")
    p_prime.add_argument("term")
    add_format(p_prime)
    p_prime.set_defaults(fn=cmd_prime)

    p_erase = sub.add_parser("erase", help="erase a pi term to CCS relative to two names")
    p_erase.add_argument("term")
    p_erase.add_argument("input_name")
    p_erase.add_argument("output_name")
    add_format(p_erase)
    p_erase.set_defaults(fn=cmd_erase)

    p_md = sub.add_parser("md-search", help="bounded search for a mirrored dependency")
    p_md.add_argument("--calculus", choices=("ccs", "ccs+"), default="ccs")
    p_md.add_argument("--shape", choices=("parallel", "diagram"), default="parallel")
    p_md.add_argument("--size", type=int, default=None)
    p_md.add_argument("--names", default="a,b")
    add_format(p_md)
    p_md.set_defaults(fn=cmd_md_search)

    p_enum = sub.add_parser("enumerate", help="run a named property suite")
    p_enum.add_argument("suite", nargs="?")
    p_enum.add_argument("--list", action="store_true", help="list the known suites")
    p_enum.add_argument("--size-bound", dest="size_bound", type=int)
    p_enum.add_argument("--count", type=int)
    p_enum.add_argument("--max-prefixes", dest="max_prefixes", type=int)
    p_enum.add_argument("--max-nus", dest="max_nus", type=int)
    p_enum.add_argument("--seed", type=int)
    p_enum.add_argument("--sample", type=int)
    add_format(p_enum)
    p_enum.set_defaults(fn=cmd_enumerate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "subcommand", None) == "dsim":
        args.calculus = "ccs+"
        args.style = "distributed"
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
