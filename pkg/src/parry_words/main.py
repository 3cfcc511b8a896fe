"""
parry-words command line.

Reports go to stdout, logs to stderr. Exit status: 0 when every check
passes, 1 on a failed check, 2 on invalid input.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional, Tuple

from dotenv import load_dotenv

from parry_words.branches import branch_central_factor, branch_spec, psi_substitution
from parry_words.config_loader import DEFAULT_N_MAX, RENYI_DEFAULT_MAX_DIGITS, SWEEP_M_MAX, SWEEP_T_MAX
from parry_words.palindromes import Center, defect_series, format_center, longest_palindromic_suffix
from parry_words.parry import (
    ConfluentParams,
    RenyiDigits,
    canonical_substitution,
    check_parry,
    renyi_digits,
)
from parry_words.report import emit_report, emit_summary
from parry_words.verify import run_sweep, run_theorem_suite
from parry_words.words import fixed_point_prefix, format_word

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger("parry-words")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2


# ------------------------
# ARGUMENT HELPERS
# ------------------------

def _parse_csv_ints(raw: str) -> Tuple[int, ...]:
    values = [x.strip() for x in raw.split(",") if x.strip()]
    if not values:
        raise argparse.ArgumentTypeError("expected a comma-separated list of digits, e.g. 2,2,2")
    try:
        return tuple(int(x) for x in values)
    except ValueError:
        raise argparse.ArgumentTypeError(f"digits must be integers, got {raw!r}")


def _parse_center(raw: str) -> Center:
    if raw.strip().lower() in ("eps", "epsilon", "e"):
        return None
    try:
        return int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"center must be 'eps' or a letter index, got {raw!r}")


def _write(data: bytes) -> None:
    stream = sys.stdout
    if hasattr(stream, "buffer"):
        stream.flush()
        stream.buffer.write(data)
        stream.buffer.flush()
    else:
        stream.write(data.decode("utf-8"))


def _write_json(obj) -> None:
    _write((json.dumps(obj, indent=2, ensure_ascii=False) + "\n").encode("utf-8"))


# ------------------------
# COMMANDS
# ------------------------

def cmd_analyze(args) -> int:
    report = run_theorem_suite(args.digits, args.prefix_len, args.nmax, args.timings)
    _write(emit_report(report, args.format))
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_verify(args) -> int:
    report = run_theorem_suite(args.digits, args.prefix_len, args.nmax, args.timings)
    _write_json(report.summary())
    for verdict in report.failures():
        logger.error(f"{verdict.name} failed: {json.dumps(verdict.counterexample)}")
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_sweep(args) -> int:
    reports = run_sweep(
        m_max=args.m_max,
        t_max=args.t_max,
        n_max=args.nmax,
        workers=args.workers,
        prefix_len=args.prefix_len,
        controls=not args.no_controls,
        timings=args.timings,
    )
    _write(emit_summary(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_MISMATCH


def cmd_generate(args) -> int:
    d = check_parry(args.digits)
    word = fixed_point_prefix(canonical_substitution(d), 0, args.len)
    _write((format_word(word) + "\n").encode("utf-8"))
    return EXIT_OK


def cmd_branch(args) -> int:
    params = ConfluentParams.from_digits(check_parry(args.digits))
    out = {
        "digits": list(params.digits().digits),
        "center": format_center(args.center),
        "spec": branch_spec(params, args.center).to_dict(),
    }
    if args.len is not None:
        out["factor"] = format_word(branch_central_factor(params, args.center, args.len))
    if args.psi:
        out["psi"] = psi_substitution(params).to_dict()
    _write_json(out)
    return EXIT_OK


def cmd_defect(args) -> int:
    d = check_parry(args.digits)
    word = fixed_point_prefix(canonical_substitution(d), 0, args.len)
    series = defect_series(word)
    suffix, unioccurrent = longest_palindromic_suffix(word)
    out = {"digits": list(d.digits), **series.summary()}
    out["longest_palindromic_suffix"] = {"length": len(suffix), "unioccurrent": unioccurrent}
    _write_json(out)
    return EXIT_OK


def cmd_expand(args) -> int:
    expansion = renyi_digits(args.beta, args.max_digits)
    out = {"beta": args.beta, "digits": list(expansion.digits), "status": expansion.status}
    if expansion.status == "finite":
        try:
            RenyiDigits(expansion.digits)
            out["simple_parry"] = True
        except ValueError:
            out["simple_parry"] = False
    _write_json(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parry-words",
        description="Construct and analyze the fixed points u_beta of simple Parry numbers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def digits_arg(p):
        p.add_argument("--digits", type=_parse_csv_ints, required=True, help="Rényi digits t1,...,tm of beta")

    def suite_args(p):
        p.add_argument("--prefix-len", type=int, default=None, help="Prefix length (default from analysis_config.yaml)")
        p.add_argument("--nmax", type=int, default=None, help=f"Largest n examined (default {DEFAULT_N_MAX})")
        p.add_argument("--timings", action="store_true", help="Fill the timings object of the report")

    analyze = sub.add_parser("analyze", help="Full analysis report")
    digits_arg(analyze)
    suite_args(analyze)
    analyze.add_argument("--format", choices=["json", "csv"], default="json")
    analyze.set_defaults(func=cmd_analyze)

    verify = sub.add_parser("verify", help="Run the identity checks; exit 0 iff all pass")
    digits_arg(verify)
    suite_args(verify)
    verify.set_defaults(func=cmd_verify)

    sweep = sub.add_parser("sweep", help="Verify every confluent (t, s, m) in range")
    sweep.add_argument("--m-max", type=int, default=SWEEP_M_MAX)
    sweep.add_argument("--t-max", type=int, default=SWEEP_T_MAX)
    sweep.add_argument("--workers", type=int, default=None, help="Worker threads (default: PARRY_WORKERS or CPU count)")
    sweep.add_argument("--no-controls", action="store_true", help="Skip the non-confluent control cases")
    suite_args(sweep)
    sweep.set_defaults(func=cmd_sweep)

    generate = sub.add_parser("generate", help="Print a prefix of u_beta")
    digits_arg(generate)
    generate.add_argument("--len", type=int, required=True)
    generate.set_defaults(func=cmd_generate)

    branch = sub.add_parser("branch", help="Central factor of an infinite palindromic branch and/or psi")
    digits_arg(branch)
    branch.add_argument("--center", type=_parse_center, default=None, help="'eps' or a letter (default eps)")
    branch.add_argument("--len", type=int, default=None)
    branch.add_argument("--psi", action="store_true", help="Also print the psi substitution")
    branch.set_defaults(func=cmd_branch)

    defect = sub.add_parser("defect", help="Defect series summary of a prefix")
    digits_arg(defect)
    defect.add_argument("--len", type=int, required=True)
    defect.set_defaults(func=cmd_defect)

    expand = sub.add_parser("expand", help="Rényi digits of a numeric beta")
    expand.add_argument("--beta", type=str, required=True)
    expand.add_argument("--max-digits", type=int, default=RENYI_DEFAULT_MAX_DIGITS)
    expand.set_defaults(func=cmd_expand)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
