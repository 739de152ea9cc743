"""Command-line front end: check, certify, check-cert, construct, sweep and classify."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

import pandas as pd
import yaml

from constructions.families import (
    ConstructionOutput,
    build_elementary,
    build_noncoset_complement,
    build_span_necessity,
    build_tight_extremal,
)
from group_core.context import configure_max_rank
from group_core.errors import F2SumsetError
from group_core.literals import format_set_literal, parse_set_literal
from group_core.sets import SetF2, mu, sumset
from group_core.subgroups import period
from search.report import SweepReport
from search.sweeps import (
    SweepOptions,
    census_certificates,
    sweep_asymmetric,
    sweep_hp,
    sweep_kneser,
    sweep_main,
    sweep_seven_eighths,
)
from structure.certificates import certificate_violation, certify, is_small_sumset, kemperman_condition
from structure.elementary import classify_elementary
from structure.serialize import certificate_to_dict, dumps_certificate, loads_certificate, witness_to_dict
from theorems.verdicts import (
    Outcome,
    check_asymmetric,
    check_hp,
    check_kneser_corollary,
    check_main,
    check_seven_eighths_corollary,
)

DEFAULT_CONFIG = Path(__file__).resolve().parents[2] / "config" / "config.yaml"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 3
CHECK_THEOREMS = ("main", "asym", "hp", "kneser", "seven-eighths")
SWEEP_THEOREMS = ("main", "hp", "asym", "lev", "kneser", "seven-eighths")


class UsageError(Exception):
    pass


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so usage errors map to exit status 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def load_config(config_path: Path) -> dict:
    with open(config_path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def build_parser() -> CommandParser:
    parser = CommandParser(prog="f2sumset", description="Small sumsets in F_2^n: checks, certificates and sweeps.")
    parser.add_argument("--config", default=str(DEFAULT_CONFIG), help="Path to config.yaml")
    parser.add_argument("--format", choices=("json", "table"), default=None, help="Output format")
    parser.add_argument("--threads", type=int, default=None, help="Worker processes for sweeps")
    parser.add_argument("--vacuous-exit", type=int, default=None, help="Exit status for vacuous results")
    parser.add_argument("--progress", action="store_true", help="Show a progress bar during sweeps")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CommandParser)

    check = sub.add_parser("check", help="Check one theorem on a pair")
    check.add_argument("--theorem", choices=CHECK_THEOREMS, required=True)
    check.add_argument("--A", dest="a", required=True, help="Set literal, @path or -")
    check.add_argument("--B", dest="b", help="Set literal, @path or - (not used by hp)")
    check.add_argument("--k", type=int, help="Index exponent for asym")

    cert = sub.add_parser("certify", help="Build a structure certificate")
    cert.add_argument("--A", dest="a", required=True)
    cert.add_argument("--B", dest="b", required=True)
    cert.add_argument("--out", help="Write the certificate JSON here")

    check_cert = sub.add_parser("check-cert", help="Verify a structure certificate")
    check_cert.add_argument("--A", dest="a", required=True)
    check_cert.add_argument("--B", dest="b", required=True)
    check_cert.add_argument("--cert", required=True, help="Certificate JSON file")

    construct = sub.add_parser("construct", help="Build an explicit extremal pair")
    construct.add_argument("--family", choices=("noncoset", "tight", "necessity", "elementary"), required=True)
    construct.add_argument("--k", type=int)
    construct.add_argument("--rank-f", type=int)
    construct.add_argument("--f0", help="Set literal over F for noncoset")
    construct.add_argument("--g-shift", type=int, default=0)
    construct.add_argument("--g1", type=int, default=0)
    construct.add_argument("--g2", type=int, default=0)
    construct.add_argument("--variant", type=int)
    construct.add_argument("--n", type=int)
    construct.add_argument("--kind", choices=("III", "IV"))
    construct.add_argument("--h1", help="Comma-separated elements of H_1")

    sweep = sub.add_parser("sweep", help="Sweep all or sampled pairs")
    sweep.add_argument("--theorem", choices=SWEEP_THEOREMS, required=True)
    sweep.add_argument("--n", type=int, required=True)
    sweep.add_argument("--k", type=int)
    sweep.add_argument("--mode", choices=("exhaustive", "orbit", "random"), default="exhaustive")
    sweep.add_argument("--budget", type=int)
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--out", help="Write the report JSON here")
    sweep.add_argument("--save", action="store_true", help="Write the report JSON under report_dir")

    classify = sub.add_parser("classify", help="Elementary type and Kemperman data of a pair")
    classify.add_argument("--A", dest="a", required=True)
    classify.add_argument("--B", dest="b", required=True)
    return parser


def read_literal(value: str, stdin: TextIO) -> SetF2:
    """Parse a literal given inline, as @path, or as - for the next stdin line."""
    if value == "-":
        text = stdin.readline()
    elif value.startswith("@"):
        text = Path(value[1:]).read_text(encoding="utf-8")
    else:
        text = value
    return parse_set_literal(text.strip())


def _flatten(record: Dict[str, Any]) -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in record.items():
        if isinstance(value, dict):
            for inner, item in _flatten(value).items():
                flat[f"{key}.{inner}"] = item
        elif isinstance(value, list):
            flat[key] = json.dumps(value, sort_keys=True)
        else:
            flat[key] = value
    return flat


def emit(records: List[Dict[str, Any]], fmt: str, out: TextIO) -> None:
    if fmt == "table":
        frame = pd.DataFrame([_flatten(r) for r in records])
        out.write(frame.T.to_string(header=False) if len(records) == 1 else frame.to_string(index=False))
        out.write("\n")
        return
    for record in records:
        out.write(json.dumps(record, sort_keys=True) + "\n")


def _check(args: argparse.Namespace, stdin: TextIO) -> tuple:
    a = read_literal(args.a, stdin)
    if args.theorem == "hp":
        if args.b is not None:
            raise UsageError("check --theorem hp takes only --A")
        verdict = check_hp(a)
        record = {"A": format_set_literal(a), **verdict.to_dict()}
        return [record], verdict.outcome
    if args.b is None:
        raise UsageError(f"check --theorem {args.theorem} needs --B")
    b = read_literal(args.b, stdin)
    if args.theorem == "asym":
        if args.k is None:
            raise UsageError("check --theorem asym needs --k")
        verdict = check_asymmetric(a, b, args.k)
    elif args.theorem == "kneser":
        verdict = check_kneser_corollary(a, b)
    elif args.theorem == "seven-eighths":
        verdict = check_seven_eighths_corollary(a, b)
    else:
        verdict = check_main(a, b)
    record = {"A": format_set_literal(a), "B": format_set_literal(b), **verdict.to_dict()}
    return [record], verdict.outcome


def _certify(args: argparse.Namespace, stdin: TextIO) -> tuple:
    a, b = read_literal(args.a, stdin), read_literal(args.b, stdin)
    outcome = certify(a, b)
    record: Dict[str, Any] = {
        "A": format_set_literal(a),
        "B": format_set_literal(b),
        "small_sumset": outcome.small_sumset,
        "kemperman_condition": outcome.kemperman_condition,
        "certified": outcome.certificate is not None,
        "failure_reason": outcome.failure_reason,
    }
    if not outcome.small_sumset:
        return [record], Outcome.VACUOUS
    if outcome.certificate is None:
        return [record], Outcome.VIOLATION
    record["node_kinds"] = [node.kind.value for node in outcome.certificate.nodes()]
    if args.out:
        out_path = Path(args.out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(dumps_certificate(outcome.certificate, indent=2) + "\n", encoding="utf-8")
        print(f"Saved certificate to {out_path}", file=sys.stderr)
    else:
        record["certificate"] = certificate_to_dict(outcome.certificate)
    return [record], Outcome.CONFIRMED


def _check_cert(args: argparse.Namespace, stdin: TextIO) -> tuple:
    a, b = read_literal(args.a, stdin), read_literal(args.b, stdin)
    certificate = loads_certificate(Path(args.cert).read_text(encoding="utf-8"))
    clause = certificate_violation(a, b, certificate)
    record = {"A": format_set_literal(a), "B": format_set_literal(b), "valid": clause is None, "clause": clause}
    return [record], clause


def _construct(args: argparse.Namespace) -> ConstructionOutput:
    if args.family == "noncoset":
        rank_f = 1 if args.rank_f is None else args.rank_f
        f0 = None if args.f0 is None else parse_set_literal(args.f0)
        return build_noncoset_complement(rank_f, f0, args.g_shift)
    if args.family == "tight":
        if args.k is None:
            raise UsageError("construct --family tight needs --k")
        return build_tight_extremal(args.k, args.rank_f or 0, args.g1, args.g2)
    if args.family == "necessity":
        if args.variant is None or args.n is None:
            raise UsageError("construct --family necessity needs --variant and --n")
        return build_span_necessity(args.variant, args.n)
    if args.kind is None or args.n is None or args.h1 is None:
        raise UsageError("construct --family elementary needs --kind, --n and --h1")
    try:
        h1 = [int(token, 0) for token in args.h1.split(",") if token.strip()]
    except ValueError as exc:
        raise UsageError(f"--h1 must be a comma-separated list of integers: {exc}") from exc
    return build_elementary(args.kind, args.n, h1, args.g1, args.g2)


def _sweep(args: argparse.Namespace, config: dict, options: SweepOptions) -> SweepReport:
    budget = args.budget if args.budget is not None else int(config.get("default_budget", 100000))
    seed = args.seed if args.seed is not None else int(config.get("default_seed", 0))
    if args.theorem == "asym":
        if args.k is None:
            raise UsageError("sweep --theorem asym needs --k")
        return sweep_asymmetric(args.n, args.k, args.mode, budget, seed, options)
    runner = {
        "main": sweep_main,
        "hp": sweep_hp,
        "lev": census_certificates,
        "kneser": sweep_kneser,
        "seven-eighths": sweep_seven_eighths,
    }[args.theorem]
    return runner(args.n, args.mode, budget, seed, options)


def _classify(args: argparse.Namespace, stdin: TextIO) -> Dict[str, Any]:
    a, b = read_literal(args.a, stdin), read_literal(args.b, stdin)
    witness = classify_elementary(a, b)
    total = sumset(a, b)
    return {
        "A": format_set_literal(a),
        "B": format_set_literal(b),
        "sumset_size": len(total),
        "small_sumset": is_small_sumset(a, b),
        "mu": mu(a, b),
        "sumset_period_dim": period(total).dim,
        "kemperman_condition": kemperman_condition(a, b),
        "elementary": None if witness is None else witness.type.value,
        "witness": None if witness is None else witness_to_dict(witness),
    }


def run(argv: Optional[Sequence[str]] = None, stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        config = load_config(Path(args.config))
        configure_max_rank(config.get("max_rank"))
        fmt = args.format or config.get("output_format", "json")
        vacuous_exit = args.vacuous_exit if args.vacuous_exit is not None else int(config.get("vacuous_exit_code", 2))
        outcome_exit = {Outcome.CONFIRMED: EXIT_OK, Outcome.VACUOUS: vacuous_exit, Outcome.VIOLATION: EXIT_VIOLATION}

        if args.command in ("check", "certify"):
            records, outcome = (_check if args.command == "check" else _certify)(args, stdin)
            emit(records, fmt, stdout)
            return outcome_exit[outcome]

        if args.command == "check-cert":
            records, clause = _check_cert(args, stdin)
            emit(records, fmt, stdout)
            if clause is not None:
                print(f"certificate rejected: {clause}", file=sys.stderr)
                return EXIT_ERROR
            return EXIT_OK

        if args.command == "construct":
            output = _construct(args)
            mismatches = output.mismatches()
            emit([dict(output.to_dict(), mismatches=mismatches)], fmt, stdout)
            return EXIT_VIOLATION if mismatches else EXIT_OK

        if args.command == "sweep":
            options = SweepOptions(
                threads=args.threads if args.threads is not None else int(config.get("threads", 1)),
                batch_size=int(config.get("batch_size", 4096)),
                exemplar_limit=int(config.get("exemplar_limit", 16)),
                progress=args.progress,
            )
            report = _sweep(args, config, options)
            out_path = None
            if args.out:
                out_path = Path(args.out)
            elif args.save:
                out_path = Path(config.get("report_dir", "reports")) / f"{report.theorem}_n{report.n}_{report.mode}.json"
            if out_path is not None:
                out_path.parent.mkdir(parents=True, exist_ok=True)
                out_path.write_text(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8")
                print(f"Saved {report.theorem} sweep report to {out_path}", file=sys.stderr)
            emit([dict(report.to_dict(), fingerprint=report.fingerprint())], fmt, stdout)
            if report.violations:
                return EXIT_VIOLATION
            return vacuous_exit if report.vacuous else EXIT_OK

        emit([_classify(args, stdin)], fmt, stdout)
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (F2SumsetError, OSError, json.JSONDecodeError, yaml.YAMLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
