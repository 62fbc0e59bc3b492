"""Enumeration of the integers ``c`` that can carry a solution of

    (c+2)*Y**2 - (c-2)*X**2 = -1996*c + 4008.

Any solution has ``X = d*(r*p_{k+1} + u*p_k)``, ``Y = d*(r*q_{k+1} + u*q_k)``
with convergents of ``sqrt((c+2)/(c-2))`` and ``d**2*|r*u| < 3992``.
Substituting into the convergent identity, with the expansion period of
length 6, leaves one rational expression for ``c`` per phase ``k``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .arith import (
    InconsistentCongruence,
    ResidueClass,
    crt,
    factorize,
    is_square,
    power_residue_set,
)
from .pell import Constraint, PellInstance

__all__ = [
    "C_CLASS",
    "TRIPLE_BOUND",
    "AxisReport",
    "CandidateC",
    "CandidateTriple",
    "ConstraintBranch",
    "ConstraintDerivation",
    "RuZeroCase",
    "axis_scan",
    "axis_solutions",
    "base_residues",
    "c_formula",
    "derive_constraints",
    "enumerate_candidates",
    "lemma_c_formula",
    "pell_instance",
    "ru_zero_cases",
]

C_CLASS = ResidueClass(17, 30)
TRIPLE_BOUND = 3992  # 2 * 1996
X_BASE = ResidueClass(4, 60)
Y_BASE = ResidueClass(58, 60)


def pell_instance(c: int, constraints: Iterable[Constraint] = ()) -> PellInstance:
    """``(c+2) Y^2 - (c-2) X^2 = -1996c + 4008``."""
    return PellInstance(c + 2, c - 2, -1996 * c + 4008, tuple(constraints))


# Numerator and denominator of c for each phase k, in (d, r, u).
_CLOSED_FORMULAS: dict[int, Callable[[int, int, int], tuple[int, int]]] = {
    0: lambda d2, r, u: (4008 - 4 * d2 * u * u + 8 * d2 * r * u - 5 * d2 * r * r,
                         1996 + 2 * d2 * r * u - 2 * d2 * r * r),
    1: lambda d2, r, u: (5 * d2 * u * u + 2 * d2 * r * u + d2 * r * r - 4008,
                         2 * d2 * u * u + 2 * d2 * r * u - 1996),
    2: lambda d2, r, u: (d2 * u * u - 2 * d2 * r * u + 5 * d2 * r * r - 4008,
                         2 * d2 * r * r - 2 * d2 * r * u - 1996),
    3: lambda d2, r, u: (5 * d2 * u * u + 8 * d2 * r * u + 4 * d2 * r * r - 4008,
                         2 * d2 * u * u + 2 * d2 * r * u - 1996),
    4: lambda d2, r, u: (4 * d2 * u * u - 4 * d2 * r * u + 2 * d2 * r * r - 4008,
                         d2 * r * r - 2 * d2 * r * u - 1996),
    5: lambda d2, r, u: (2 * d2 * u * u - 2 * d2 * r * r - 4008,
                         d2 * u * u - d2 * r * r - 1996),
}

# s_k and t_k of sqrt((c+2)/(c-2)) as (coefficient of c, constant), k = 0..6;
# from k = 1 on the pair sequence has period 6.
SYMBOLIC_S = ((0, 0), (1, -2), (1, -4), (1, -1), (1, -1), (1, -4), (1, -2))
SYMBOLIC_T = ((1, -2), (0, 4), (2, -5), (0, 1), (2, -5), (0, 4), (1, -2))
SYMBOLIC_A = (  # a_k as (numerator coefficient of c, numerator constant, denominator)
    (0, 1, 1), (1, -3, 2), (0, 1, 1), (2, -2, 1), (0, 1, 1), (1, -3, 2), (0, 2, 1),
)


def _sym(table, k: int) -> tuple[int, int]:
    return table[k] if k < 7 else table[1 + (k - 1) % 6]


def _as_c(num: int, den: int) -> int | None:
    if den == 0 or num % den:
        return None
    c = num // den
    return c if c > 0 else None


def c_formula(k: int, d: int, r: int, u: int) -> int | None:
    """Evaluate the phase-``k`` expression for ``c``; None unless a positive integer."""
    if k not in _CLOSED_FORMULAS:
        raise ValueError(f"phase k must be in 0..5, got {k}")
    if d < 1:
        raise ValueError("d must be positive")
    return _as_c(*_CLOSED_FORMULAS[k](d * d, r, u))


def lemma_fraction(k: int, d: int, r: int, u: int) -> tuple[int, int]:
    """Numerator and denominator of ``c`` rebuilt from the symbolic s/t table.

    Solves ``d^2 (-1)^k (u^2 t_{k+1} + 2ru s_{k+2} - r^2 t_{k+2}) = -1996c + 4008``
    for ``c``; valid for ``k >= -1``.
    """
    if k < -1:
        raise ValueError("k must be >= -1")
    t1, s2, t2 = _sym(SYMBOLIC_T, k + 1), _sym(SYMBOLIC_S, k + 2), _sym(SYMBOLIC_T, k + 2)
    lin = u * u * t1[0] + 2 * r * u * s2[0] - r * r * t2[0]
    const = u * u * t1[1] + 2 * r * u * s2[1] - r * r * t2[1]
    sign = -1 if k % 2 else 1
    d2 = d * d
    return 4008 - sign * d2 * const, sign * d2 * lin + 1996


def lemma_c_formula(k: int, d: int, r: int, u: int) -> int | None:
    return _as_c(*lemma_fraction(k, d, r, u))


_FORMULAS = {"closed": c_formula, "lemma": lemma_c_formula}


@dataclass(frozen=True, order=True)
class CandidateTriple:
    k: int
    d: int
    r: int
    u: int

    def __post_init__(self) -> None:
        if self.d < 1 or self.r < 1 or self.u == 0:
            raise ValueError(f"need d, r >= 1 and u != 0, got {self}")

    @property
    def weight(self) -> int:
        """``d^2 |r u|``, the quantity bounded by 3992."""
        return self.d * self.d * abs(self.r * self.u)


@dataclass(frozen=True, order=True)
class CandidateC:
    c: int
    witnesses: tuple[CandidateTriple, ...] = field(compare=False)


def _scan_d(k: int, d: int, bound: int, formula: str, modulus: int, residue: int) -> list[tuple[int, int, int]]:
    f = _FORMULAS[formula]
    out = []
    d2 = d * d
    r = 1
    while d2 * r < bound:
        au = 1
        while d2 * r * au < bound:
            for u in (au, -au):
                c = f(k, d, r, u)
                if c is not None and c % modulus == residue:
                    out.append((c, r, u))
            au += 1
        r += 1
    return out


def enumerate_candidates(
    k: int,
    bound: int = TRIPLE_BOUND,
    residue_filter: ResidueClass | None = C_CLASS,
    formula: str = "closed",
    workers: int = 1,
) -> list[CandidateC]:
    """Every ``c`` produced at phase ``k`` by a triple with ``d^2|ru| < bound``.

    Both signs of ``u`` are scanned. With ``residue_filter=None`` every
    positive integer ``c`` is kept. The result is sorted by ``c`` and each
    witness list by ``(k, d, r, u)``.
    """
    if formula not in _FORMULAS:
        raise ValueError(f"unknown formula {formula!r}")
    flt = residue_filter or ResidueClass(0, 1)
    d_max = math.isqrt(bound - 1)
    args = [(k, d, bound, formula, flt.modulus, flt.residue) for d in range(1, d_max + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_d, *zip(*args)))
    else:
        parts = [_scan_d(*a) for a in args]
    found: dict[int, list[CandidateTriple]] = {}
    for (_, d, *_rest), part in zip(args, parts):
        for c, r, u in part:
            found.setdefault(c, []).append(CandidateTriple(k, d, r, u))
    return [CandidateC(c, tuple(sorted(ws))) for c, ws in sorted(found.items())]


# ---------------------------------------------------------------------------
# r*u == 0


@dataclass(frozen=True)
class RuZeroCase:
    k: int
    family: str  # "(0,u)" or "(r,0)"
    x: int  # d^2 * (nonzero coordinate)^2
    c: int

    @property
    def in_class(self) -> bool:
        return self.c in C_CLASS


def _family_coefficients(k: int, family: str) -> tuple[int, int, int, int]:
    """``c = (a x + b) / (e x + f)`` with ``x = d^2 s^2`` along a family."""
    def at(x: int) -> tuple[int, int]:
        # d = 1 and coordinate s with s^2 = x; formulas only involve squares here
        return _CLOSED_FORMULAS[k](x, 0, 1) if family == "(0,u)" else _CLOSED_FORMULAS[k](x, 1, 0)

    (n0, m0), (n1, m1) = at(0), at(1)
    return n1 - n0, n0, m1 - m0, m0


def _tail_start(a: int, b: int, e: int, f: int) -> int:
    """An ``x0`` past which ``(a x + b)/(e x + f)`` is never a positive integer."""
    if e == 0:
        if a * f >= 0:
            raise ArithmeticError("family grows without bound; no finite scan exists")
        # linear and decreasing towards -inf: positive only while (a x + b)/f > 0
        return abs(b) // abs(a) + 2
    limit = Fraction(a, e)
    gap = limit - math.floor(limit)
    gap = min(gap, 1 - gap) if gap else Fraction(1)
    excess = abs(Fraction(b * e - a * f, e))  # |c - a/e| = excess / |e x + f|
    # |e x + f| > excess / gap  once  x > (excess/gap + |f|) / |e|
    return math.floor((excess / gap + abs(f)) / abs(e)) + 2


def ru_zero_cases(ks: Iterable[int] = range(6)) -> tuple[list[RuZeroCase], dict[tuple[int, str], int]]:
    """Every positive integer ``c`` arising with ``r = 0`` or ``u = 0``.

    ``d`` is unbounded here (``d^2|ru| < 3992`` is vacuous), but ``c`` only
    depends on ``x = (d s)^2``. Each family is scanned over all squares up
    to an exact threshold beyond which ``c`` is pinned strictly between
    two integers. Returns the cases and the threshold used per family.
    """
    cases = []
    thresholds = {}
    for k in ks:
        for family in ("(0,u)", "(r,0)"):
            a, b, e, f = _family_coefficients(k, family)
            x0 = _tail_start(a, b, e, f)
            thresholds[(k, family)] = x0
            m = 1
            while m * m <= x0:
                x = m * m
                c = _as_c(a * x + b, e * x + f)
                if c is not None:
                    cases.append(RuZeroCase(k, family, x, c))
                m += 1
    return cases, thresholds


# ---------------------------------------------------------------------------
# X = 0 and Y = 0


@dataclass(frozen=True)
class AxisReport:
    """Axis cases of the Pellian equation at a given ``c``.

    ``y_squared`` is ``Y^2`` when ``X = 0``; ``x_squared`` is ``X^2`` when
    ``Y = 0`` (None at c = 2, where it is undefined).
    """

    c: int
    y_squared: Fraction
    x_squared: Fraction | None

    @staticmethod
    def _solutions(v: Fraction | None) -> tuple[int, ...]:
        if v is None or v.denominator != 1 or not is_square(v.numerator):
            return ()
        r = math.isqrt(v.numerator)
        return (r, -r) if r else (0,)

    @property
    def y_integral(self) -> bool:
        return self.y_squared.denominator == 1

    @property
    def x_integral(self) -> bool:
        return self.x_squared is not None and self.x_squared.denominator == 1

    @property
    def y_values(self) -> tuple[int, ...]:
        return self._solutions(self.y_squared)

    @property
    def x_values(self) -> tuple[int, ...]:
        return self._solutions(self.x_squared)


def axis_solutions(c: int) -> AxisReport:
    if c < 1:
        raise ValueError("c must be positive")
    y2 = Fraction(-1996 * c + 4008, c + 2)
    x2 = None if c == 2 else Fraction(1996 * c - 4008, c - 2)
    return AxisReport(c, y2, x2)


def axis_scan() -> tuple[list[AxisReport], list[AxisReport]]:
    """All ``c`` with an integral nonnegative ``Y^2`` (X = 0) or integral ``X^2`` (Y = 0).

    ``Y^2 = 8000/(c+2) - 1996`` is negative once ``c > 2``, and
    ``X^2 = 1996 - 16/(c-2)`` is integral only if ``c - 2`` divides 16, so
    scanning ``c <= 7998`` covers both exhaustively.
    """
    x_zero, y_zero = [], []
    for c in range(1, 7999):
        rep = axis_solutions(c)
        if rep.y_integral and rep.y_squared >= 0:
            x_zero.append(rep)
        if rep.x_integral:
            y_zero.append(rep)
    return x_zero, y_zero


# ---------------------------------------------------------------------------
# residue constraints on X and Y


def base_residues(modulus: int = 60) -> tuple[frozenset[int], frozenset[int]]:
    """Residues of ``X = c(y-1) - 2x`` and ``Y = c(y-1) - 2y`` modulo ``modulus``.

    Runs over ``x = 2^(alpha+1)``, ``y = 5^(beta+1)`` with ``alpha = 0 (mod 4)``,
    ``alpha >= 4``, ``beta`` even and ``beta >= 2``, and every lift of ``c = 17 (mod 30)``.
    The exponent ranges are long enough to cover every period mod ``modulus``.
    """
    span = 4 * modulus
    xs = {pow(2, a + 1, modulus) for a in range(4, 4 + span, 4)}
    ys = {pow(5, b + 1, modulus) for b in range(2, 2 + span, 2)}
    big = math.lcm(modulus, C_CLASS.modulus)
    cs = [c for c in range(C_CLASS.residue, big, C_CLASS.modulus)]
    X = frozenset((c * (y - 1) - 2 * x) % modulus for c in cs for x in xs for y in ys)
    Y = frozenset((c * (y - 1) - 2 * y) % modulus for c in cs for y in ys)
    return X, Y


@dataclass(frozen=True, order=True)
class ConstraintBranch:
    c: int
    y: ResidueClass
    x: ResidueClass = X_BASE
    refinements: tuple[tuple[int, int], ...] = ()  # (prime q, Y mod q)

    def constraints(self) -> tuple[Constraint, ...]:
        return (Constraint("X", self.x), Constraint("Y", self.y))

    def instance(self) -> PellInstance:
        return pell_instance(self.c, self.constraints())

    def label(self) -> str:
        extra = "".join(f", Y={r} mod {q}" for q, r in self.refinements)
        return f"c={self.c}: X={self.x}, Y={self.y}{extra}"


@dataclass(frozen=True)
class ConstraintDerivation:
    c: int
    branches: tuple[ConstraintBranch, ...]
    eliminated: tuple[tuple[tuple[int, int], ...], ...]  # refinement tuples with no CRT solution


def derive_constraints(c: int, refine_primes: Iterable[int] = ()) -> ConstraintDerivation:
    """Residue constraints on ``(X, Y)`` for a candidate ``c``.

    The base branch is ``X = 4 (mod 60)``, ``Y = 58 (mod 60)`` and
    ``Y = -2 (mod c-2)``. Each prime ``q | c`` in ``refine_primes`` adds
    ``Y = -2 y (mod q)``; ``y`` is an odd power of 5, so ``Y mod q`` is
    restricted to a power-residue set and the branch splits once per
    admissible residue.
    """
    if c not in C_CLASS:
        raise ValueError(f"c = {c} is not 17 mod 30")
    primes = tuple(refine_primes)
    for q in primes:
        if c % q or q not in factorize(c):
            raise ValueError(f"{q} is not a prime factor of {c}")
    try:
        base = crt((Y_BASE, ResidueClass.of(-2, c - 2)))
    except InconsistentCongruence:
        return ConstraintDerivation(c, (), ((),))
    partial = [(base, ())]
    eliminated = []
    for q in primes:
        nxt = []
        for cls, refs in partial:
            for res in sorted(power_residue_set(5, q, -2, ResidueClass(1, 2))):
                try:
                    nxt.append((crt((cls, ResidueClass(res, q))), refs + ((q, res),)))
                except InconsistentCongruence:
                    eliminated.append(refs + ((q, res),))
        partial = nxt
    branches = tuple(sorted(ConstraintBranch(c, cls, X_BASE, refs) for cls, refs in partial))
    return ConstraintDerivation(c, branches, tuple(eliminated))
