"""JSON and text rendering of a :class:`~phisigma.proof.ProofReport`.

Key order is fixed, no timings are recorded, and integers outside the signed
64-bit range are written as decimal strings, so equal reports serialize to
equal bytes.
"""

from __future__ import annotations

import json
import platform
from dataclasses import asdict
from fractions import Fraction
from typing import Any

from . import __version__
from .arith import ResidueClass
from .pell import PellDecision, PellInstance
from .proof import EXPECTED_SOLUTIONS, ProofReport, TheoremVerdict
from .search import AxisReport, CandidateC, ConstraintBranch

WORD = 1 << 63
STATEMENT = "n = 2^a * 5^b satisfies n*phi(n) = 2 (mod sigma(n)) exactly for n in {1, 2, 5, 8}"


def num(v: int) -> int | str:
    """Native int inside the signed 64-bit range, decimal string outside it."""
    return v if -WORD <= v < WORD else str(v)


def _frac(v: Fraction | None) -> int | str | None:
    if v is None:
        return None
    return num(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _cls(c: ResidueClass) -> dict[str, Any]:
    return {"residue": num(c.residue), "modulus": num(c.modulus)}


def instance_dict(inst: PellInstance) -> dict[str, Any]:
    return {"A": num(inst.A), "B": num(inst.B), "N": num(inst.N)}


def decision_dict(dec: PellDecision) -> dict[str, Any]:
    out: dict[str, Any] = {
        "equation": instance_dict(dec.instance),
        "constraints": [
            {"var": con.var, **_cls(con.cls)} for con in dec.instance.constraints
        ],
        "verdict": dec.verdict.value,
    }
    if dec.witness is not None:
        out["witness"] = {"X": num(dec.witness[0]), "Y": num(dec.witness[1])}
    if dec.certificate is not None:
        cert = dec.certificate
        out["certificate"] = {
            "unit": [num(x) for x in cert.unit],
            "representatives": [[num(r.u), num(r.v)] for r in cert.representatives],
            "modulus": num(cert.modulus),
            "orbits": [
                {"rep": o.rep_index, "sign_u": o.sign_u, "sign_v": o.sign_v, "period": num(o.period)}
                for o in cert.orbits
            ],
            "points_checked": num(cert.points_checked),
        }
    return out


def branch_dict(branch: ConstraintBranch) -> dict[str, Any]:
    return {
        "X": _cls(branch.x),
        "Y": _cls(branch.y),
        "refinements": [{"prime": q, "Y_residue": r} for q, r in branch.refinements],
    }


def _candidate(c: CandidateC) -> dict[str, Any]:
    return {"c": c.c, "witnesses": [[w.k, w.d, w.r, w.u] for w in c.witnesses]}


def _axis(a: AxisReport) -> dict[str, Any]:
    return {
        "c": a.c,
        "Y_squared_at_X0": _frac(a.y_squared),
        "X_squared_at_Y0": _frac(a.x_squared),
        "Y_values": list(a.y_values),
        "X_values": list(a.x_values),
    }


def report_dict(report: ProofReport) -> dict[str, Any]:
    cfg = report.config
    theorem: dict[str, Any] = {
        "statement": STATEMENT,
        "verdict": report.verdict.value,
        "detail": report.detail,
        "scan_scope_verified": report.scan_scope_verified,
    }
    if report.counterexample is not None:
        theorem["counterexample"] = num(report.counterexample)
    out: dict[str, Any] = {
        "theorem": theorem,
        "scan": {
            "bounds": [cfg.alpha_max, cfg.beta_max],
            "solutions": list(report.scan_result),
            "expected": list(EXPECTED_SOLUTIONS),
            "note": "bounded check of an infinite claim",
        },
    }
    if not cfg.run_pipeline or report.c_congruence is None:
        out["config"] = asdict(cfg)
        out["versions"] = versions()
        return out
    cc = report.c_congruence
    out["base_cases"] = {
        "alpha": sorted(report.base_case_alpha),
        "beta": sorted(report.base_case_beta),
        "reductions": [
            {
                "prime": r.prime,
                "multiplier": r.multiplier,
                "derived_constant": r.derived_constant,
                "expected_constant": r.expected_constant,
                "checked_to_exponent": r.limit,
                "agrees": r.agrees,
            }
            for r in report.reductions
        ],
    }
    out["c_class"] = {
        **_cls(cc.result),
        "per_prime": [_cls(c) for c in cc.per_prime],
        "excluded": [{**_cls(c), "reason": why} for c, why in cc.excluded],
    }
    out["candidates"] = {f"k{k}": [_candidate(c) for c in cands] for k, cands in sorted(report.candidates.items())}
    out["axis"] = [_axis(a) for a in report.axis_candidates]
    out["pell"] = [
        {"c": case.branch.c, "branch": branch_dict(case.branch), **decision_dict(case.decision)}
        for case in report.pell_decisions
    ]
    out["refinements"] = [
        {
            "c": ref.branch.c,
            "branch": branch_dict(ref.branch),
            **decision_dict(ref.decision),
            "back_substitution": {
                "x": None if ref.back_substitution.x is None else num(ref.back_substitution.x),
                "y": None if ref.back_substitution.y is None else num(ref.back_substitution.y),
                "genuine": ref.back_substitution.genuine,
            },
            "refined_with": ref.prime,
        }
        for ref in report.refinements
    ]
    out["unconstrained"] = [
        {"c": c, "verdict": "RESOURCE_CAP" if dec is None else dec.verdict.value, "informational": True}
        for c, dec in report.unconstrained
    ]
    out["lemma_cross_check"] = {f"k{k}": list(cs) for k, cs in sorted(report.lemma_candidates.items())}
    out["ru_zero"] = [
        {"k": case.k, "family": case.family, "x": case.x, "c": case.c, "in_class": case.in_class}
        for case in report.ru_zero
    ]
    out["axis_scan"] = {
        "X0": [_axis(a) for a in report.axis_x_zero],
        "Y0": [_axis(a) for a in report.axis_y_zero],
    }
    out["config"] = asdict(cfg)
    out["versions"] = versions()
    return out


def versions() -> dict[str, str]:
    return {"phisigma": __version__, "python": platform.python_version()}


def dumps(report: ProofReport) -> str:
    return json.dumps(report_dict(report), indent=2) + "\n"


def render_text(report: ProofReport) -> str:
    lines = [
        f"verdict: {report.verdict.value}",
        f"detail: {report.detail}",
        f"scan {report.config.alpha_max}x{report.config.beta_max}: {list(report.scan_result)}"
        f" (scope verified: {str(report.scan_scope_verified).lower()})",
    ]
    if report.c_congruence is not None:
        lines += [
            f"alpha base case: {sorted(report.base_case_alpha)}",
            f"beta base case: {sorted(report.base_case_beta)}",
            f"c class: {report.c_congruence.result}",
        ]
        for k, cands in sorted(report.candidates.items()):
            lines.append(f"k={k}: {[c.c for c in cands]}")
        for case in report.pell_decisions:
            lines.append(f"{case.branch.label()}: {case.decision.verdict.value}")
        for ref in report.refinements:
            tag = "genuine" if ref.back_substitution.genuine else f"spurious, refined with q={ref.prime}"
            lines.append(f"{ref.branch.label()}: SAT ({tag})")
    return "\n".join(lines) + "\n"


def exit_code(report: ProofReport) -> int:
    return {
        TheoremVerdict.VERIFIED: 0,
        TheoremVerdict.COUNTEREXAMPLE: 1,
        TheoremVerdict.INCOMPLETE: 3,
    }[report.verdict]
