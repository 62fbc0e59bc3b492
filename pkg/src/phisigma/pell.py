"""Decide constrained equations ``A*Y**2 - B*X**2 = N`` over the integers.

The substitution ``U = A*Y`` turns the equation into ``U**2 - D*X**2 = M``
with ``D = A*B`` and ``M = A*N``. Its solutions fall into finitely many
classes, orbits of the fundamental unit ``t + w*sqrt(D)``. Class
representatives come from the Lagrange-Matthews-Mollin (LMM) algorithm and
are normalised into Nagell's fundamental domain. Every residue condition
on ``X`` and ``Y`` (and ``A | U``) is a condition modulo some ``L``, and the
unit acts on ``(U, X) mod L`` as an invertible matrix, so each orbit is a
finite cycle mod ``L``. Walking every cycle once settles the instance:
either some point meets all the conditions (SAT, lifted to an exact integer
witness) or none does (UNSAT, and the walk is the certificate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .arith import ResidueClass, factorize, is_square, lcm, sqrt_mod
from .cf import expand, floor_surd

__all__ = [
    "CertificateError",
    "Constraint",
    "OrbitRecord",
    "PellDecision",
    "PellInstance",
    "PerfectSquareError",
    "ResourceCapExceeded",
    "SolutionClass",
    "UnsatCertificate",
    "Verdict",
    "brute_force_search",
    "class_representatives",
    "decide",
    "fundamental_unit",
    "negative_unit",
    "verify_decision",
]

DEFAULT_STEP_CAP = 10**7


class PerfectSquareError(ValueError):
    """``D`` (or ``A*B``) is a perfect square; the equation is not Pellian."""


class ResourceCapExceeded(RuntimeError):
    def __init__(self, cap: int, detail: str):
        super().__init__(f"orbit walk exceeded {cap} steps ({detail})")
        self.cap = cap
        self.detail = detail


class CertificateError(AssertionError):
    """A decision failed to re-verify."""


class Verdict(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


@dataclass(frozen=True, order=True)
class Constraint:
    var: str
    cls: ResidueClass

    def __post_init__(self) -> None:
        if self.var not in ("X", "Y"):
            raise ValueError(f"constraint variable must be X or Y, got {self.var!r}")

    @classmethod
    def parse(cls, text: str) -> Constraint:
        """Parse ``VAR:RES:MOD``, e.g. ``Y:58:60``."""
        try:
            var, res, mod = text.split(":")
            if int(mod) < 1:
                raise ValueError("modulus must be positive")
            return cls(var.strip().upper(), ResidueClass.of(int(res), int(mod)))
        except ValueError as exc:
            raise ValueError(f"bad constraint {text!r}, expected VAR:RES:MOD") from exc

    def __str__(self) -> str:
        return f"{self.var} = {self.cls.residue} (mod {self.cls.modulus})"


@dataclass(frozen=True)
class PellInstance:
    A: int
    B: int
    N: int
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self) -> None:
        if self.A < 1 or self.B < 1:
            raise ValueError("A and B must be positive")
        if self.N == 0:
            raise ValueError("N must be nonzero")
        if is_square(self.A * self.B):
            raise PerfectSquareError(f"A*B = {self.A * self.B} is a perfect square")
        object.__setattr__(self, "constraints", tuple(sorted(self.constraints)))

    @property
    def D(self) -> int:
        return self.A * self.B

    @property
    def M(self) -> int:
        return self.A * self.N

    def satisfies_constraints(self, X: int, Y: int) -> bool:
        return all((X if c.var == "X" else Y) in c.cls for c in self.constraints)

    def holds(self, X: int, Y: int) -> bool:
        return self.A * Y * Y - self.B * X * X == self.N and self.satisfies_constraints(X, Y)

    def orbit_modulus(self) -> int:
        """Modulus ``L`` at which ``(U, X) mod L`` decides every condition."""
        mods = [self.A]
        for c in self.constraints:
            mods.append(c.cls.modulus if c.var == "X" else self.A * c.cls.modulus)
        return lcm(mods)

    def __str__(self) -> str:
        eq = f"{self.A}*Y^2 - {self.B}*X^2 = {self.N}"
        return eq + "".join(f", {c}" for c in self.constraints)


def _unit_pair(D: int) -> tuple[tuple[int, int], int]:
    exp = expand(D, 1)
    period = exp.period_length
    return exp.convergent(period - 1), period


def fundamental_unit(D: int) -> tuple[int, int]:
    """Least ``(t, w)`` with ``t, w >= 1`` and ``t*t - D*w*w == 1``."""
    if D < 1 or is_square(D):
        raise PerfectSquareError(f"D = {D} must be a positive non-square")
    (p, q), period = _unit_pair(D)
    if period % 2 == 0:
        return p, q
    return p * p + D * q * q, 2 * p * q


def negative_unit(D: int) -> tuple[int, int] | None:
    """Least solution of ``r*r - D*s*s == -1``, or None when there is none."""
    if D < 1 or is_square(D):
        raise PerfectSquareError(f"D = {D} must be a positive non-square")
    (p, q), period = _unit_pair(D)
    return (p, q) if period % 2 else None


@dataclass(frozen=True, order=True)
class SolutionClass:
    """Nagell-normalised representative ``(u, v)`` of ``u*u - D*v*v == M``."""

    u: int
    v: int
    D: int
    M: int

    def within_bounds(self, unit: tuple[int, int]) -> bool:
        """Check the classical fundamental-domain bounds in exact arithmetic."""
        t, w = unit
        u, v, D, M = self.u, self.v, self.D, self.M
        if u * u - D * v * v != M or v < 0:
            return False
        if M > 0:
            # 0 <= v <= w*sqrt(M)/sqrt(2(t+1)), 0 < |u| <= sqrt((t+1)M/2)
            return 2 * (t + 1) * v * v <= w * w * M and 0 < 2 * u * u <= (t + 1) * M
        # sqrt(|M|/D) <= v <= w*sqrt(|M|)/sqrt(2(t-1)), |u| <= sqrt((t-1)|M|/2)
        m = -M
        return D * v * v >= m and 2 * (t - 1) * v * v <= w * w * m and 2 * u * u <= (t - 1) * m


def _mul(a: tuple[int, int], b: tuple[int, int], D: int) -> tuple[int, int]:
    return a[0] * b[0] + D * a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def _unit_power(unit: tuple[int, int], D: int, e: int) -> tuple[int, int]:
    t, w = unit
    base = (t, w) if e >= 0 else (t, -w)
    out = (1, 0)
    e = abs(e)
    while e:
        if e & 1:
            out = _mul(out, base, D)
        base = _mul(base, base, D)
        e >>= 1
    return out


def _sign_normal(u: int, v: int) -> tuple[int, int]:
    if v < 0 or (v == 0 and u < 0):
        return -u, -v
    return u, v


def _canonical(u: int, v: int, D: int, unit: tuple[int, int]) -> tuple[int, int]:
    """Smallest-|v| member of the class of ``(u, v)`` (up to sign)."""
    t, w = unit
    fwd = lambda x: (x[0] * t + x[1] * w * D, x[0] * w + x[1] * t)  # noqa: E731
    back = lambda x: (x[0] * t - x[1] * w * D, -x[0] * w + x[1] * t)  # noqa: E731
    cur = (u, v)
    for step in (back, fwd):
        nxt = step(cur)
        while abs(nxt[1]) < abs(cur[1]):
            cur, nxt = nxt, step(nxt)
    # |v| along an orbit is convex in the exponent; ties sit next to each other
    best = abs(cur[1])
    cands = [_sign_normal(*x) for x in (back(cur), cur, fwd(cur)) if abs(x[1]) == best]
    return max(cands)


def _square_divisors(M: int) -> list[int]:
    out = [1]
    for p, e in factorize(M).items():
        out = [f * p**k for f in out for k in range(e // 2 + 1)]
    return sorted(out)


def _pqa_first_unit(P: int, Q: int, D: int) -> tuple[int, int] | None:
    """Run PQa from ``(P + sqrt(D)) / Q`` until some later ``|Q_i| == 1``.

    Returns ``(G_{i-1}, B_{i-1})``, or None after one full period without it.
    """
    G2, G1 = -P, Q
    B2, B1 = 1, 0
    seen = set()
    while True:
        a = floor_surd(P, Q, D)
        G2, G1 = G1, a * G1 + G2
        B2, B1 = B1, a * B1 + B2
        P = a * Q - P
        Q = (D - P * P) // Q
        if abs(Q) == 1:
            return G1, B1
        if (P, Q) in seen:
            return None
        seen.add((P, Q))


def _lmm_solutions(D: int, M: int) -> list[tuple[int, int]]:
    """One solution per primitive class of each ``u^2 - D v^2 = M/f^2``, scaled by f."""
    neg = negative_unit(D)
    out = []
    for f in _square_divisors(M):
        m = M // (f * f)
        am = abs(m)
        for z in sqrt_mod(D, am):
            if 2 * z > am:
                z -= am
            hit = _pqa_first_unit(z, am, D)
            if hit is None:
                continue
            g, b = hit
            if g * g - D * b * b == m:
                out.append((f * g, f * b))
            elif neg is not None:
                r, s = neg
                out.append((f * (g * r + b * s * D), f * (g * s + b * r)))
    return out


def class_representatives(D: int, M: int) -> list[SolutionClass]:
    """All classes of ``u*u - D*v*v == M``, one Nagell representative each.

    Classes are taken up to overall sign, so ``(u, v)`` and ``(-u, -v)``
    share one entry. The list is sorted and empty iff the equation has no
    integer solutions.
    """
    if D < 1 or is_square(D):
        raise PerfectSquareError(f"D = {D} must be a positive non-square")
    if M == 0:
        raise ValueError("M must be nonzero")
    unit = fundamental_unit(D)
    reps = set()
    for u, v in _lmm_solutions(D, M):
        if u * u - D * v * v != M:
            raise ArithmeticError(f"LMM produced a non-solution ({u}, {v})")
        reps.add(_canonical(u, v, D, unit))
    out = [SolutionClass(u, v, D, M) for u, v in sorted(reps)]
    for rep in out:
        if not rep.within_bounds(unit):
            raise ArithmeticError(f"representative {rep} escapes the fundamental domain")
    return out


@dataclass(frozen=True)
class OrbitRecord:
    """One cycle of the unit action mod ``L``, started at a signed representative."""

    rep_index: int
    sign_u: int
    sign_v: int
    period: int


@dataclass(frozen=True)
class UnsatCertificate:
    unit: tuple[int, int]
    representatives: tuple[SolutionClass, ...]
    modulus: int
    orbits: tuple[OrbitRecord, ...]
    points_checked: int


@dataclass(frozen=True)
class PellDecision:
    instance: PellInstance
    verdict: Verdict
    witness: tuple[int, int] | None = None
    certificate: UnsatCertificate | None = None
    # SAT provenance: which signed representative and unit power gave the witness
    origin: tuple[int, int, int, int] | None = field(default=None, compare=False)

    @property
    def sat(self) -> bool:
        return self.verdict is Verdict.SAT


def _sign_variants(rep: SolutionClass) -> Iterator[tuple[int, int]]:
    seen = set()
    for su in (1, -1):
        for sv in (1, -1):
            key = (su * rep.u, sv * rep.v)
            if key not in seen:
                seen.add(key)
                yield su, sv


def _point_checker(inst: PellInstance):
    A = inst.A
    xs = [c.cls for c in inst.constraints if c.var == "X"]
    ys = [(A * c.cls.modulus, c.cls) for c in inst.constraints if c.var == "Y"]

    def ok(u: int, v: int) -> bool:
        if u % A:
            return False
        for cls in xs:
            if v % cls.modulus != cls.residue:
                return False
        for am, cls in ys:
            if (u % am) // A % cls.modulus != cls.residue:
                return False
        return True

    return ok


def _walk_cycle(start, unit, D: int, L: int, ok, cap: int, label: str) -> tuple[int, list[int]]:
    """Walk one cycle of the unit action mod ``L``; return its length and hit steps."""
    t, w = unit[0] % L, unit[1] % L
    wD = unit[1] * D % L
    u0, v0 = start[0] % L, start[1] % L
    u, v = u0, v0
    hits = []
    n = 0
    while True:
        if ok(u, v):
            hits.append(n)
        u, v = (u * t + v * wD) % L, (u * w + v * t) % L
        n += 1
        if u == u0 and v == v0:
            return n, hits
        if n >= cap:
            raise ResourceCapExceeded(cap, label)


def decide(inst: PellInstance, step_cap: int = DEFAULT_STEP_CAP) -> PellDecision:
    """Decide ``inst`` and return a witness or a replayable certificate.

    Raises :class:`ResourceCapExceeded` if a single orbit is longer than
    ``step_cap``; a capped run never yields a verdict.
    """
    D, M = inst.D, inst.M
    unit = fundamental_unit(D)
    reps = class_representatives(D, M)
    L = inst.orbit_modulus()
    ok = _point_checker(inst)
    orbits = []
    best = None
    checked = 0
    for idx, rep in enumerate(reps):
        for su, sv in _sign_variants(rep):
            start = (su * rep.u, sv * rep.v)
            period, hits = _walk_cycle(start, unit, D, L, ok, step_cap, f"{inst}, class {rep.u}, {rep.v}")
            checked += period
            orbits.append(OrbitRecord(idx, su, sv, period))
            for n in hits:
                e = n if n <= period - n else n - period
                key = (abs(e), -e, idx, -su, -sv)
                if best is None or key < best[0]:
                    best = (key, (idx, su, sv, e))
    if best is not None:
        idx, su, sv, e = best[1]
        rep = reps[idx]
        U, X = _mul((su * rep.u, sv * rep.v), _unit_power(unit, D, e), D)
        Y = U // inst.A
        if not inst.holds(X, Y):
            raise ArithmeticError(f"lifted witness ({X}, {Y}) fails {inst}")
        return PellDecision(inst, Verdict.SAT, witness=(X, Y), origin=(idx, su, sv, e))
    cert = UnsatCertificate(unit, tuple(reps), L, tuple(orbits), checked)
    return PellDecision(inst, Verdict.UNSAT, certificate=cert)


def verify_decision(decision: PellDecision) -> None:
    """Replay a decision; raise :class:`CertificateError` if anything disagrees."""
    inst = decision.instance
    if decision.verdict is Verdict.SAT:
        if decision.witness is None or not inst.holds(*decision.witness):
            raise CertificateError(f"witness {decision.witness} does not satisfy {inst}")
        return
    cert = decision.certificate
    if cert is None:
        raise CertificateError("UNSAT decision without certificate")
    D = inst.D
    t, w = cert.unit
    if t < 1 or w < 1 or t * t - D * w * w != 1 or cert.unit != fundamental_unit(D):
        raise CertificateError(f"{cert.unit} is not the fundamental unit of {D}")
    for rep in cert.representatives:
        if rep.D != D or rep.M != inst.M or not rep.within_bounds(cert.unit):
            raise CertificateError(f"bad representative {rep}")
    if list(cert.representatives) != class_representatives(D, inst.M):
        raise CertificateError("representative list is incomplete or stale")
    if cert.modulus != inst.orbit_modulus():
        raise CertificateError("orbit modulus does not match the constraints")
    expected = {(i, su, sv) for i, rep in enumerate(cert.representatives) for su, sv in _sign_variants(rep)}
    if {(o.rep_index, o.sign_u, o.sign_v) for o in cert.orbits} != expected:
        raise CertificateError("orbit list does not cover every signed representative")
    ok = _point_checker(inst)
    total = 0
    for o in cert.orbits:
        rep = cert.representatives[o.rep_index]
        start = (o.sign_u * rep.u, o.sign_v * rep.v)
        period, hits = _walk_cycle(start, cert.unit, D, cert.modulus, ok, o.period + 1, "replay")
        if period != o.period or hits:
            raise CertificateError(f"orbit {o} does not replay")
        total += period
    if total != cert.points_checked:
        raise CertificateError("points_checked does not match the replayed total")


def brute_force_search(inst: PellInstance, bound: int) -> list[tuple[int, int]]:
    """Every ``(X, Y)`` with ``|X|, |Y| <= bound`` solving ``inst``."""
    out = []
    for Y in range(-bound, bound + 1):
        rhs = inst.A * Y * Y - inst.N
        if rhs < 0 or rhs % inst.B:
            continue
        x2 = rhs // inst.B
        X = math.isqrt(x2)
        if X * X != x2 or X > bound:
            continue
        for cand in {X, -X}:
            if inst.satisfies_constraints(cand, Y):
                out.append((cand, Y))
    return sorted(out)
