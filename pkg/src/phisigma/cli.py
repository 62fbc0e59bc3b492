"""Command-line interface: ``phisigma <subcommand> ...``.

Exit codes: 0 success or VERIFIED, 1 counterexample (or SAT where UNSAT was
expected), 2 usage error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .arith import FactoredInteger, check_congruence, euler_phi, sigma
from .cf import RationalValueError, expand
from .pell import DEFAULT_STEP_CAP, Constraint, PellInstance, PerfectSquareError, ResourceCapExceeded, decide
from .proof import EXPECTED_SOLUTIONS, ProofConfig, TheoremVerdict, brute_scan, prove_theorem
from .report import decision_dict, dumps, exit_code, num, render_text
from .search import TRIPLE_BOUND, enumerate_candidates

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
ANY_N_TRIAL_LIMIT = 10**6


@dataclass(frozen=True)
class Config:
    alpha_max: int = 30
    beta_max: int = 30
    pell_step_cap: int = DEFAULT_STEP_CAP
    output_format: str = "text"
    output_path: Path | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.output_format not in ("text", "json"):
            raise ValueError(f"format must be text or json, got {self.output_format!r}")
        if self.alpha_max < 0 or self.beta_max < 0:
            raise ValueError("scan bounds must be nonnegative")
        if self.pell_step_cap < 1 or self.workers < 1:
            raise ValueError("step cap and workers must be positive")


class UsageError(Exception):
    pass


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


def _pos(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _workers(text: str) -> int:
    if text == "auto":
        return os.cpu_count() or 1
    return _pos(text)


def _constraint(text: str) -> Constraint:
    try:
        return Constraint.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", dest="output_format")
    common.add_argument("--workers", type=_workers, default=1, help="worker processes, or 'auto'")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(prog="phisigma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="test one n")
    p.add_argument("n", type=_pos)
    p.add_argument("--any-n", action="store_true", help=f"allow any n (trial factorization to {ANY_N_TRIAL_LIMIT})")

    p = sub.add_parser("scan", parents=[common], help="all solutions 2^a 5^b in a box")
    p.add_argument("--alpha-max", type=_nonneg, default=30)
    p.add_argument("--beta-max", type=_nonneg, default=30)

    p = sub.add_parser("cf", parents=[common], help="continued fraction of sqrt(A/B)")
    p.add_argument("A", type=_pos)
    p.add_argument("B", type=_pos)
    p.add_argument("--terms", type=_pos, default=12)

    p = sub.add_parser("pell", parents=[common], help="decide A Y^2 - B X^2 = N")
    p.add_argument("--a", type=_pos, required=True, dest="A")
    p.add_argument("--b", type=_pos, required=True, dest="B")
    p.add_argument("--n", type=int, required=True, dest="N")
    p.add_argument("--constraint", type=_constraint, action="append", default=[], metavar="VAR:RES:MOD")
    p.add_argument("--step-cap", type=_pos, default=DEFAULT_STEP_CAP)
    p.add_argument("--expect-unsat", action="store_true", help="exit 1 if the instance is SAT")

    p = sub.add_parser("candidates", parents=[common], help="candidate c for phase k")
    p.add_argument("--k", type=int, required=True, choices=range(-1, 6), metavar="K")
    p.add_argument("--bound", type=_pos, default=TRIPLE_BOUND)
    p.add_argument("--formula", choices=("closed", "lemma"), default="closed")

    p = sub.add_parser("prove", parents=[common], help="run the full verification")
    p.add_argument("--out", type=Path, default=None, help="write the JSON report here")
    p.add_argument("--alpha-max", type=_nonneg, default=30)
    p.add_argument("--beta-max", type=_nonneg, default=30)
    p.add_argument("--step-cap", type=_pos, default=DEFAULT_STEP_CAP)
    p.add_argument("--scan-only", action="store_true", help="stop after the bounded scan")
    return parser


def _emit(args: argparse.Namespace, text: str, payload: object) -> None:
    if args.output_format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_check(args: argparse.Namespace) -> int:
    if args.any_n:
        try:
            n = FactoredInteger.from_int(args.n, ANY_N_TRIAL_LIMIT)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        m, a, b = args.n, 0, 0
        while m % 2 == 0:
            m, a = m // 2, a + 1
        while m % 5 == 0:
            m, b = m // 5, b + 1
        if m != 1:
            raise UsageError(f"{args.n} has prime factors other than 2 and 5 (use --any-n)")
        n = FactoredInteger.from_exponents(a, b)
    holds = check_congruence(n)
    phi, sig = euler_phi(n), sigma(n)
    lhs = n.value * phi - 2
    text = f"{str(holds).lower()}\nn={n.value} ({n}) phi={phi} sigma={sig} n*phi-2={lhs}"
    _emit(args, text, {"n": num(n.value), "factors": [list(f) for f in n.factors],
                       "phi": num(phi), "sigma": num(sig), "n_phi_minus_2": num(lhs), "holds": holds})
    return EXIT_OK


def cmd_scan(args: argparse.Namespace) -> int:
    sols = [n.value for n in brute_scan(args.alpha_max, args.beta_max)]
    text = f"solutions with alpha <= {args.alpha_max}, beta <= {args.beta_max}: {sols}"
    _emit(args, text, {"bounds": [args.alpha_max, args.beta_max], "solutions": sols})
    return EXIT_COUNTEREXAMPLE if set(sols) - set(EXPECTED_SOLUTIONS) else EXIT_OK


def cmd_cf(args: argparse.Namespace) -> int:
    try:
        exp = expand(args.A, args.B)
    except RationalValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = [(k, exp.a(k), exp.s(k), exp.t(k), *exp.convergent(k)) for k in range(args.terms)]
    lines = [repr(exp), f"{'k':>4} {'a':>10} {'s':>10} {'t':>10} {'p':>24} {'q':>24}"]
    lines += [f"{k:>4} {a:>10} {s:>10} {t:>10} {p:>24} {q:>24}" for k, a, s, t, p, q in rows]
    payload = {
        "A": args.A, "B": args.B,
        "preperiod": list(exp.preperiod), "period": list(exp.period),
        "terms": [{"k": k, "a": num(a), "s": num(s), "t": num(t), "p": num(p), "q": num(q)}
                  for k, a, s, t, p, q in rows],
    }
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_pell(args: argparse.Namespace) -> int:
    try:
        inst = PellInstance(args.A, args.B, args.N, tuple(args.constraint))
    except (PerfectSquareError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    dec = decide(inst, args.step_cap)
    if dec.sat:
        text = f"{inst}: SAT, witness X={dec.witness[0]}, Y={dec.witness[1]}"
    else:
        cert = dec.certificate
        text = (f"{inst}: UNSAT\n  unit={cert.unit} classes={len(cert.representatives)} "
                f"modulus={cert.modulus} orbits={len(cert.orbits)} points={cert.points_checked}")
    _emit(args, text, decision_dict(dec))
    return EXIT_COUNTEREXAMPLE if dec.sat and args.expect_unsat else EXIT_OK


def cmd_candidates(args: argparse.Namespace) -> int:
    cands = enumerate_candidates(args.k, args.bound, formula=args.formula, workers=args.workers)
    lines = [f"k={args.k}: {{{', '.join(str(c.c) for c in cands)}}}"]
    for c in cands:
        ws = ", ".join(f"(d={w.d}, r={w.r}, u={w.u})" for w in c.witnesses)
        lines.append(f"  c={c.c}: {ws}")
    payload = {"k": args.k, "candidates": [
        {"c": c.c, "witnesses": [[w.d, w.r, w.u] for w in c.witnesses]} for c in cands]}
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_prove(args: argparse.Namespace) -> int:
    cfg = ProofConfig(
        alpha_max=args.alpha_max,
        beta_max=args.beta_max,
        pell_step_cap=args.step_cap,
        run_pipeline=not args.scan_only,
        workers=args.workers,
    )
    report = prove_theorem(cfg)
    blob = dumps(report)
    if args.out is not None:
        args.out.write_text(blob)
    if args.output_format == "json":
        sys.stdout.write(blob)
    else:
        sys.stdout.write(render_text(report))
    if args.scan_only and report.verdict is TheoremVerdict.INCOMPLETE:
        return EXIT_OK if report.scan_scope_verified else EXIT_COUNTEREXAMPLE
    return exit_code(report)


COMMANDS = {
    "check": cmd_check,
    "scan": cmd_scan,
    "cf": cmd_cf,
    "pell": cmd_pell,
    "candidates": cmd_candidates,
    "prove": cmd_prove,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage to stderr
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"phisigma {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapExceeded as exc:
        print(f"phisigma {args.command}: resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP


def main() -> int:
    return run(sys.argv[1:])
