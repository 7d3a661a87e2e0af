"""Command-line entry point: parse, validate, translate, ground, infer.

Exit codes: 0 success, 1 usage error, 2 parse or validation error,
3 semantic error (no stable model, ill-defined program, exceeded caps).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import selftest as selftest_mod
from .core import Program, interp_str
from .errors import LpmlnError, ParseError, SignatureError, ValidationError
from .frontends.asp import AspProgram, asp_to_lpmln
from .frontends.mln import completion, loop_augmented_mln, mln_to_lpmln
from .frontends.mvpp import MvppProgram, mvpp_to_lpmln
from .frontends.plog import PlogProgram, plog_to_mvpp, plog_validate
from .frontends.problog import ProbLogProgram, problog_to_lpmln
from .frontends.weak import WeakProgram, weak_to_lpmln
from .ground import ground_program
from .infer import DEFAULT_ATOM_CAP, MlnProgram, cond_prob, distribution, prob_query
from .stable import is_tight
from .textio import (
    DIALECTS,
    format_formula,
    format_weight,
    parse,
    parse_path,
    parse_query,
    print_program,
    program_to_json,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_SEMANTIC = 3


def to_lpmln(value) -> Program:
    """Any parsed program as a weighted-rule program."""
    if isinstance(value, Program):
        return value
    if isinstance(value, WeakProgram):
        return weak_to_lpmln(value)
    if isinstance(value, AspProgram):
        return asp_to_lpmln(value)
    if isinstance(value, MlnProgram):
        return mln_to_lpmln(value)
    if isinstance(value, ProbLogProgram):
        return problog_to_lpmln(value)
    if isinstance(value, MvppProgram):
        return mvpp_to_lpmln(value)
    if isinstance(value, PlogProgram):
        return mvpp_to_lpmln(plog_to_mvpp(value))
    raise ValidationError(f"cannot handle {type(value).__name__}")


def _load(args):
    if args.dialect:
        with open(args.input, encoding="utf-8") as handle:
            return parse(args.dialect, handle.read(), filename=args.input)
    return parse_path(args.input)


def _default_max_atoms():
    env = os.environ.get("LPMLN_MAX_ATOMS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"LPMLN_MAX_ATOMS must be an integer, got {env!r}")
    return DEFAULT_ATOM_CAP


def _fmt(x: float, digits: int) -> str:
    return f"{x:.{digits}g}"


def _distribution(args, value=None):
    if value is None:
        value = _load(args)
    program = to_lpmln(value)
    gp = ground_program(program)
    return value, gp, distribution(
        gp, max_atoms=args.max_atoms, list_all=getattr(args, "list_all", False)
    )


# ---------------------------------------------------------------------------
# Subcommands


def cmd_models(args) -> int:
    _value, _gp, dist = _distribution(args)
    digits = args.digits
    if args.list_all:
        rows = [
            (
                interp_str(e.interp),
                " ".join(str(i + 1) for i in sorted(e.satisfied)),
                str(e.weight),
                _fmt(e.prob, digits),
            )
            for e in dist.entries
        ]
        if args.format == "json":
            print(json.dumps(
                [
                    {
                        "interpretation": sorted(str(a) for a in e.interp),
                        "satisfied": sorted(i + 1 for i in e.satisfied),
                        "weight": str(e.weight),
                        "probability": e.prob,
                    }
                    for e in dist.entries
                ],
                indent=2,
            ))
        else:
            _print_table(("interpretation", "satisfied", "weight", "probability"), rows)
        return EXIT_OK
    support = sorted(
        dist.support().items(), key=lambda kv: (-kv[1], interp_str(kv[0]))
    )
    if args.format == "json":
        print(json.dumps(
            [
                {"interpretation": sorted(str(a) for a in k), "probability": v}
                for k, v in support
            ],
            indent=2,
        ))
    else:
        for interp, prob in support:
            print(f"{_fmt(prob, digits)}  {interp_str(interp)}")
    return EXIT_OK


def _print_table(header, rows):
    widths = [
        max(len(header[i]), max((len(r[i]) for r in rows), default=0))
        for i in range(len(header))
    ]
    line = "  ".join(h.ljust(w) for h, w in zip(header, widths))
    print(line)
    print("-" * len(line))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


def cmd_query(args) -> int:
    value = _load(args)
    program = to_lpmln(value)
    gp = ground_program(program)
    q = parse_query(args.query, program.signature)
    if args.given:
        g = parse_query(args.given, program.signature)
        p = cond_prob(gp, q, g, max_atoms=args.max_atoms)
    else:
        p = prob_query(gp, q, max_atoms=args.max_atoms)
    if args.format == "json":
        print(json.dumps({"query": args.query, "given": args.given, "prob": p}))
    else:
        print(f"P = {_fmt(p, args.digits)}")
    return EXIT_OK


def cmd_translate(args) -> int:
    value = _load(args)
    if args.to == "lpmln":
        print(print_program(to_lpmln(value)), end="")
        return EXIT_OK
    if args.to == "ground":
        program = to_lpmln(value)
        gp = ground_program(program)
        ground = Program(program.signature, gp.rules)
        print(print_program(ground), end="")
        return EXIT_OK
    if args.to == "json":
        print(json.dumps(program_to_json(to_lpmln(value)), indent=2))
        return EXIT_OK
    gp = ground_program(to_lpmln(value))
    mln = completion(gp) if args.to == "completion" else loop_augmented_mln(gp)
    if args.alchemy:
        for w, f in mln.formulas:
            prefix = "" if w.is_hard else f"{w.soft} "
            suffix = "." if w.is_hard else ""
            print(f"{prefix}{format_formula(f)}{suffix}")
    else:
        print(print_program(mln), end="")
    return EXIT_OK


def cmd_check(args) -> int:
    value = _load(args)
    issues = plog_validate(value) if isinstance(value, PlogProgram) else []
    if args.tight:
        gp = ground_program(to_lpmln(value))
        print(f"tight: {'true' if is_tight(gp.unweighted) else 'false'}")
    for issue in issues:
        print(f"{args.input}: {issue}", file=sys.stderr)
    if issues:
        return EXIT_PARSE
    print("ok")
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = selftest_mod.selftest(seed=args.seed, n=args.n)
    failed = [r for r in results if not r.ok]
    if args.format == "json":
        print(json.dumps(
            [
                {
                    "property": r.name,
                    "runs": r.runs,
                    "rejected": r.rejected,
                    "ok": r.ok,
                    "message": r.message,
                    "counterexample": r.counterexample,
                }
                for r in results
            ],
            indent=2,
        ))
    else:
        for r in results:
            status = "ok" if r.ok else "FAIL"
            print(f"{r.name}: {status} ({r.runs} runs, {r.rejected} rejected)")
            if not r.ok:
                print(f"  {r.message}")
                for line in r.counterexample.splitlines():
                    print(f"  | {line}")
    return EXIT_OK if not failed else EXIT_SEMANTIC


def cmd_report(args) -> int:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    _value, _gp, dist = _distribution(args)
    os.makedirs(args.out, exist_ok=True)
    support = sorted(
        dist.support().items(), key=lambda kv: (-kv[1], interp_str(kv[0]))
    )
    csv_path = os.path.join(args.out, "models.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["interpretation", "probability"])
        for interp, prob in support:
            writer.writerow([interp_str(interp), repr(prob)])
    top = support[: args.top]
    fig, ax = plt.subplots(figsize=(max(6, len(top) * 0.9), 4))
    ax.bar(range(len(top)), [p for _i, p in top], color="#4878b0")
    ax.set_xticks(range(len(top)))
    ax.set_xticklabels([interp_str(i) for i, _p in top], rotation=30, ha="right")
    ax.set_ylabel("probability")
    ax.set_title(os.path.basename(args.input))
    fig.tight_layout()
    png_path = os.path.join(args.out, "models.png")
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    print(csv_path)
    print(png_path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="lpmln", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, *, needs_input=True):
        if needs_input:
            p.add_argument("input", help="program file")
            p.add_argument("--dialect", choices=DIALECTS, default=None)
        p.add_argument("--format", choices=("table", "json"), default="table")
        p.add_argument("--digits", type=int, default=6)
        p.add_argument("--max-atoms", type=int, default=None)
        p.add_argument(
            "--jobs", type=int, default=1,
            help="worker cap (evaluation is currently serial)",
        )

    p = sub.add_parser("models", help="stable models and their probabilities")
    common(p)
    p.add_argument("--list-all", action="store_true",
                   help="every interpretation with weight and probability")
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("query", help="probability of a query formula")
    common(p)
    p.add_argument("--query", required=True)
    p.add_argument("--given", default=None)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("translate", help="translate between dialects")
    common(p)
    p.add_argument("--to", required=True,
                   choices=("lpmln", "mln", "completion", "ground", "json"))
    p.add_argument("--alchemy", action="store_true",
                   help="best-effort Alchemy-style output for MLN targets")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("check", help="validate a program")
    common(p)
    p.add_argument("--tight", action="store_true",
                   help="also report positive-dependency-graph acyclicity")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("selftest", help="randomized dual-evaluation properties")
    common(p, needs_input=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-n", type=int, default=200)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("report", help="CSV and bar-chart report of the models")
    common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--top", type=int, default=12,
                   help="number of models in the chart")
    p.set_defaults(func=cmd_report)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help; map its error exits to the usage code
        code = exc.code or 0
        return EXIT_OK if code == 0 else EXIT_USAGE
    if getattr(args, "max_atoms", None) is None:
        args.max_atoms = _default_max_atoms()
    try:
        return args.func(args)
    except (ParseError, ValidationError, SignatureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except LpmlnError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
