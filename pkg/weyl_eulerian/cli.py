"""Command-line front end: ``python -m weyl_eulerian <subcommand>``.

Every subcommand writes one report (JSON by default, keys sorted) to stdout
or ``--output``; progress and diagnostics go to stderr.  Exit codes: 0 pass,
1 usage or parse error, 2 counterexample, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import degree_of, format_coeff, transpose
from .catalog import build_model
from .core import derham_report, ext_report, localcoh_dims, tor_report
from .groebner import (
    DEFAULT_AMAX,
    DEFAULT_MAX_PAIRS,
    DEFAULT_ORDER,
    BasisLimitError,
    eulerian_index,
    left_ideal,
)
from .homology import ConcentrationReport, TruncatedResolutionError, concentration
from .models import (
    DEFAULT_BOUND,
    CechModel,
    InfiniteDimensionalError,
    check_generalized_eulerian,
    default_window,
    ideal_label,
    operator_matrix,
    parse_ideal,
)
from .parse import parse_element, print_element
from .suites import SUITES, run_suite

EXIT_PASS, EXIT_USAGE, EXIT_COUNTEREXAMPLE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

_BOOLEAN_KEYS = {"raw"}
_RANGE_OPTIONS = ("--window", "--nu")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class JobConfig:
    """Resolved options of one invocation."""

    command: str
    n: int | None = None
    window: tuple[int, int] | None = None
    descriptors: dict = field(default_factory=dict)
    a_max: int = DEFAULT_AMAX
    order: str = DEFAULT_ORDER
    out: str = "json"
    output: str | None = None
    verbose: int = 0

    def __post_init__(self):
        if self.n is not None and self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        if self.window is not None and self.window[0] > self.window[1]:
            raise ValueError(f"Empty window {self.window}")

    def resolved_window(self, n: int) -> tuple[int, int]:
        return self.window or default_window(n)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def parse_range(text: str) -> tuple[int, int]:
    """``"a..b"`` or a single integer ``"a"``; the range must be nonempty."""
    parts = text.split("..")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a..b', got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def parse_descriptor(text: str) -> dict:
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"descriptor is not valid JSON: {exc}") from None
    if not isinstance(value, dict):
        raise argparse.ArgumentTypeError("descriptor must be a JSON object")
    return value


def join_negative_ranges(argv: list[str]) -> list[str]:
    """Attach ``-10..5`` style values to their range option: ``--window=-10..5``."""
    out: list[str] = []
    it = iter(argv)
    for token in it:
        if token in _RANGE_OPTIONS:
            value = next(it, None)
            if value is not None and re.match(r"-\d", value):
                out.append(f"{token}={value}")
                continue
            out.append(token)
            if value is not None:
                out.append(value)
            continue
        out.append(token)
    return out


def read_config(path: str | Path) -> dict[str, str | bool]:
    """Flat ``key = value`` lines; ``#`` starts a comment, keys may use ``-`` or ``_``."""
    values: dict[str, str | bool] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key in _BOOLEAN_KEYS:
            values[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            values[key] = value
    return values


def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", choices=["json", "csv"], default="json",
                        help="Report format (default: json)")
    common.add_argument("--output", "-o", type=str, default=None,
                        help="Write the report here instead of stdout")
    common.add_argument("--verbose", "-v", action="count", default=0,
                        help="Progress on stderr; repeat for more detail")
    return common


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog="weyl", description="Exact computations with graded D-modules over the Weyl algebra.")
    parser.add_argument("--config", type=str, default=None,
                        help="Flat key = value file; its values become defaults for the subcommand")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()
    subs = {}

    p = sub.add_parser("eval", parents=[common], help="Canonical form, degree and transpose of an element")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--expr", type=str, required=True)
    p.add_argument("--model", type=parse_descriptor, default=None,
                   help="Model descriptor; with --degree prints the action matrix")
    p.add_argument("--degree", type=int, default=None)
    subs["eval"] = p

    p = sub.add_parser("gb", parents=[common], help="Reduced Gröbner basis of a left ideal")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", choices=["degrevlex", "deglex"], default=DEFAULT_ORDER)
    p.add_argument("--gens", type=str, required=True, help="Comma-separated generators")
    p.add_argument("--amax", type=int, default=DEFAULT_AMAX)
    p.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS,
                   help="S-pair budget of Buchberger's algorithm")
    subs["gb"] = p

    p = sub.add_parser("eulerian-test", parents=[common], help="Least a with (E + shift)^a in J")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", choices=["degrevlex", "deglex"], default=DEFAULT_ORDER)
    p.add_argument("--gens", type=str, required=True)
    p.add_argument("--amax", type=int, default=DEFAULT_AMAX)
    p.add_argument("--shift", type=int, default=0)
    p.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS)
    subs["eulerian-test"] = p

    p = sub.add_parser("localcoh", parents=[common], help="Dimensions of H^i_I(R) for a squarefree ideal")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ideal", type=str, required=True, help='e.g. "x1*x2,x3" or "0"')
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--window", type=parse_range, default=None)
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    subs["localcoh"] = p

    p = sub.add_parser("derham", parents=[common], help="De Rham cohomology of a model")
    p.add_argument("--model", type=parse_descriptor, required=True)
    p.add_argument("--window", type=parse_range, default=None)
    p.add_argument("--raw", action="store_true", help="Ungraded convention: H^0(d, R) in degree 0")
    p.add_argument("--euler-bound", type=int, default=None)
    subs["derham"] = p

    p = sub.add_parser("ext", parents=[common], help="Ext of a presentation into a model")
    p.add_argument("--M", dest="source", type=parse_descriptor, required=True)
    p.add_argument("--N", dest="target", type=parse_descriptor, required=True)
    p.add_argument("--nu", type=parse_range, default=None)
    p.add_argument("--window", type=parse_range, default=None)
    p.add_argument("--expect", type=int, default=None)
    p.add_argument("--over", choices=["an", "r"], default="an")
    subs["ext"] = p

    p = sub.add_parser("tor", parents=[common], help="Tor against R^r, over A_n, or over R")
    p.add_argument("--kind", choices=["rr", "an", "r"], default="rr")
    p.add_argument("--model", type=parse_descriptor, required=True)
    p.add_argument("--M", dest="source", type=parse_descriptor, default=None,
                   help="Presentation descriptor (kind an)")
    p.add_argument("--other", type=parse_descriptor, default=None, help="Second module (kind r)")
    p.add_argument("--nu", type=parse_range, default=None)
    p.add_argument("--window", type=parse_range, default=None)
    p.add_argument("--expect", type=int, default=None)
    p.add_argument("--euler-bound", type=int, default=None)
    subs["tor"] = p

    p = sub.add_parser("verify", parents=[common], help="Run a verification suite")
    p.add_argument("suite", choices=list(SUITES))
    subs["verify"] = p
    return parser, subs


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser, subs = build_parser()
    argv = join_negative_ranges(list(sys.argv[1:] if argv is None else argv))
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    command = next((a for a in argv if a in subs), None)
    if known.config and command is not None:
        try:
            values = read_config(known.config)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
        sub = subs[command]
        actions = {}
        for action in sub._actions:
            actions[action.dest] = action
            for opt in action.option_strings:
                actions[opt.lstrip("-").replace("-", "_")] = action
        unknown = sorted(set(values) - set(actions))
        if unknown:
            parser.error(f"unknown config keys for {command}: {', '.join(unknown)}")
        defaults = {}
        for key, value in values.items():
            action = actions[key]
            action.required = False
            if action.dest == "verbose":
                value = int(value)
            defaults[action.dest] = value
        sub.set_defaults(**defaults)
    return parser.parse_args(argv)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["nu", "degree", "dim"])
    writer.writerows(rows)
    return buf.getvalue()


def emit(payload: dict, args: argparse.Namespace, rows: list[list] | None = None) -> None:
    if args.out == "csv":
        if rows is None:
            raise ValueError(f"{args.command} has no tabular output; use --out json")
        text = _csv(rows)
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _restrict(report: ConcentrationReport, nus: tuple[int, int] | None,
              expected: int | None) -> ConcentrationReport:
    keep = list(report.nus) if nus is None else [nu for nu in report.nus if nus[0] <= nu <= nus[1]]
    lo, hi = report.window
    tables = {nu: {d: report.dim(nu, d) for d in range(lo, hi + 1)} for nu in keep}
    out = concentration(tables, expected, invariant=report.invariant, provenance=report.provenance)
    out.euler_orders = {k: v for k, v in report.euler_orders.items() if k[0] in keep}
    return out


def _verdict_code(report: ConcentrationReport) -> int:
    if not report.concentrated:
        return EXIT_COUNTEREXAMPLE
    if report.euler_orders and not report.euler_passed:
        return EXIT_COUNTEREXAMPLE
    return EXIT_PASS


def _report(report: ConcentrationReport, args: argparse.Namespace, missing=()) -> int:
    payload = report.to_dict()
    if missing:
        payload["unavailable_nus"] = list(missing)
        payload = dict(sorted(payload.items()))
    emit(payload, args, report.entries())
    code = _verdict_code(report)
    if code == EXIT_PASS and missing:
        return EXIT_INCONCLUSIVE
    return code


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _generators(text: str, n: int):
    return [parse_element(g, n) for g in text.split(",") if g.strip()]


def cmd_eval(args) -> int:
    config = JobConfig("eval", n=args.n)
    a = parse_element(args.expr, config.n)
    payload = {
        "schema": 1,
        "input": args.expr,
        "canonical": print_element(a),
        "degree": None if a.is_zero() else degree_of(a),
        "transpose": print_element(transpose(a)),
    }
    if args.model is not None:
        if args.degree is None:
            raise ValueError("--model needs --degree")
        M = build_model(args.model)
        mat = operator_matrix(M, a, args.degree)
        payload["model"] = M.provenance
        payload["matrix"] = {
            "degree": args.degree,
            "shape": list(mat.shape),
            "rows": [[format_coeff(c) for c in row] for row in mat.to_list()],
        }
    emit(payload, args)
    return EXIT_PASS


def cmd_gb(args) -> int:
    config = JobConfig("gb", n=args.n, order=args.order, a_max=args.amax)
    G = left_ideal(_generators(args.gens, config.n), config.order, n=config.n,
                   max_pairs=args.max_pairs, verbose=args.verbose)
    index = eulerian_index(G, config.a_max)
    emit({"schema": 1, "order": config.order, "basis": [print_element(g) for g in G.generators],
          "index": index, "amax": config.a_max}, args)
    return EXIT_PASS


def cmd_eulerian_test(args) -> int:
    config = JobConfig("eulerian-test", n=args.n, order=args.order, a_max=args.amax)
    G = left_ideal(_generators(args.gens, config.n), config.order, n=config.n,
                   max_pairs=args.max_pairs, verbose=args.verbose)
    index = eulerian_index(G, config.a_max, shift=args.shift)
    emit({"schema": 1, "gens": args.gens, "shift": args.shift, "amax": config.a_max, "index": index}, args)
    return EXIT_PASS if index is not None else EXIT_INCONCLUSIVE


def cmd_localcoh(args) -> int:
    config = JobConfig("localcoh", n=args.n, window=args.window)
    ideal = parse_ideal(args.ideal, config.n)
    M = CechModel(config.n, ideal, args.i)
    window = config.resolved_window(config.n)
    dims = localcoh_dims(M, window)
    check = check_generalized_eulerian(M, window, args.bound)
    payload = {
        "schema": 1,
        "descriptor": {"constructor": "cech", "args": {"n": config.n, "ideal": ideal_label(ideal), "i": args.i}},
        "dims": [[d, dims[d]] for d in sorted(dims)],
        "eulerian": check.to_dict(),
    }
    emit(payload, args, [[args.i, d, v] for d, v in sorted(dims.items()) if v])
    return EXIT_PASS if check.passed else EXIT_COUNTEREXAMPLE


def cmd_derham(args) -> int:
    M = build_model(args.model)
    config = JobConfig("derham", n=M.n, window=args.window, verbose=args.verbose)
    report = derham_report(M, config.resolved_window(M.n), graded=not args.raw,
                           euler_bound=args.euler_bound, verbose=config.verbose)
    return _report(report, args)


def cmd_ext(args) -> int:
    N = build_model(args.target)
    config = JobConfig("ext", n=N.n, window=args.window, verbose=args.verbose,
                       descriptors={"M": args.source, "N": args.target})
    report = ext_report(config.descriptors["M"], N, over=args.over,
                        window=config.resolved_window(N.n), verbose=config.verbose)
    expected = args.expect if args.expect is not None else report.expected
    requested = args.nu or (0, N.n)
    missing = [nu for nu in range(requested[0], requested[1] + 1)
               if 0 <= nu <= N.n and nu not in report.nus]
    return _report(_restrict(report, args.nu, expected), args, missing)


def cmd_tor(args) -> int:
    N = build_model(args.model)
    other = build_model(args.other) if args.other is not None else None
    config = JobConfig("tor", n=N.n, window=args.window, verbose=args.verbose)
    report = tor_report(N, kind=args.kind, other=other, descriptor=args.source,
                        window=config.resolved_window(N.n), euler_bound=args.euler_bound,
                        verbose=config.verbose)
    expected = args.expect if args.expect is not None else report.expected
    return _report(_restrict(report, args.nu, expected), args)


def cmd_verify(args) -> int:
    report = run_suite(args.suite, verbose=args.verbose)
    payload = report.to_dict()
    emit(payload, args)
    return report.exit_code


COMMANDS = {
    "eval": cmd_eval,
    "gb": cmd_gb,
    "eulerian-test": cmd_eulerian_test,
    "localcoh": cmd_localcoh,
    "derham": cmd_derham,
    "ext": cmd_ext,
    "tor": cmd_tor,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (TruncatedResolutionError, InfiniteDimensionalError, BasisLimitError) as exc:
        print(f"weyl {args.command}: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except ValueError as exc:
        print(f"weyl {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
