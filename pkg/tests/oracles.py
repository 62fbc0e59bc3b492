"""Slow, obviously-correct reference implementations used only by tests."""

from __future__ import annotations

import math


def phi_brute(n: int) -> int:
    return sum(1 for m in range(1, n + 1) if math.gcd(m, n) == 1)


def sigma_brute(n: int) -> int:
    return sum(d for d in range(1, n + 1) if n % d == 0)


def legendre_brute(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if any(x * x % p == a for x in range(1, p)) else -1


def order_brute(g: int, m: int) -> int:
    k, x = 1, g % m
    while x != 1 % m:
        x = x * g % m
        k += 1
    return k


def crt_brute(classes: list[tuple[int, int]]) -> tuple[int, int] | None:
    modulus = math.lcm(*(m for _, m in classes)) if classes else 1
    for x in range(modulus):
        if all(x % m == r for r, m in classes):
            return x, modulus
    return None


def min_pell_unit(D: int, w_max: int) -> tuple[int, int] | None:
    for w in range(1, w_max + 1):
        t2 = D * w * w + 1
        t = math.isqrt(t2)
        if t * t == t2:
            return t, w
    return None


def pell_points(D: int, M: int, v_max: int) -> list[tuple[int, int]]:
    """All ``(u, v)`` with ``0 <= v <= v_max`` and ``u^2 - D v^2 = M``."""
    out = []
    for v in range(v_max + 1):
        u2 = M + D * v * v
        if u2 >= 0:
            u = math.isqrt(u2)
            if u * u == u2:
                out += [(u, v), (-u, v)] if u else [(0, v)]
    return out


def convergents_fraction(quotients: list[int]) -> list[tuple[int, int]]:
    """Convergents by evaluating each truncated continued fraction from the bottom up."""
    from fractions import Fraction

    out = []
    for n in range(1, len(quotients) + 1):
        x = Fraction(quotients[n - 1])
        for a in reversed(quotients[: n - 1]):
            x = a + 1 / x
        out.append((x.numerator, x.denominator))
    return out
