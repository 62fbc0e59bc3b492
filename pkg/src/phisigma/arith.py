"""Exact integer arithmetic: factored integers, phi/sigma, residue classes.

Everything here works on Python ints, so there is no overflow anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "FactoredInteger",
    "InconsistentCongruence",
    "ResidueClass",
    "check_congruence",
    "crt",
    "euler_phi",
    "factorize",
    "is_prime",
    "is_square",
    "jacobi",
    "multiplicative_order",
    "power_residue_set",
    "sigma",
    "sqrt_mod",
]

# Miller-Rabin with these bases is exact for n < 3.3e24; we only promise 64 bits.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
PRIMALITY_LIMIT = 1 << 64


def is_prime(n: int) -> bool:
    """Deterministic primality test for ``n < 2**64``.

    Larger inputs raise ``ValueError``: factorizations in this package are
    constructed, never discovered, so a huge prime means a caller bug.
    """
    if n >= PRIMALITY_LIMIT:
        raise ValueError(f"primality of {n} is outside the deterministic 64-bit range")
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def factorize(n: int, limit: int | None = None) -> dict[int, int]:
    """Trial-division factorization of ``|n|``.

    With ``limit`` set, trial division stops at that bound and a leftover
    cofactor is accepted only if it is provably prime; otherwise
    ``ValueError`` is raised.
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p, step = 5, 2
    while p * p <= n:
        if limit is not None and p > limit:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n > 1:
        if limit is not None and p * p <= n:
            if n >= PRIMALITY_LIMIT or not is_prime(n):
                raise ValueError(f"cofactor {n} could not be factored by trial division to {limit}")
        out[n] = out.get(n, 0) + 1
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer held as ascending ``(prime, exponent)`` pairs.

    The empty tuple is 1.
    """

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple((int(p), int(e)) for p, e in self.factors))
        prev = 1
        for p, e in self.factors:
            if p <= prev:
                raise ValueError(f"primes must be strictly ascending, got {p} after {prev}")
            if e < 1:
                raise ValueError(f"exponent of {p} must be >= 1, got {e}")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            prev = p

    @classmethod
    def from_exponents(cls, alpha: int, beta: int) -> FactoredInteger:
        """``2**alpha * 5**beta``."""
        if alpha < 0 or beta < 0:
            raise ValueError("exponents must be nonnegative")
        return cls(tuple((p, e) for p, e in ((2, alpha), (5, beta)) if e))

    @classmethod
    def from_int(cls, n: int, limit: int | None = None) -> FactoredInteger:
        if n < 1:
            raise ValueError(f"expected a positive integer, got {n}")
        return cls(tuple(factorize(n, limit).items()))

    @property
    def value(self) -> int:
        return math.prod(p**e for p, e in self.factors)

    def exponent(self, p: int) -> int:
        return dict(self.factors).get(p, 0)

    def __mul__(self, other: FactoredInteger) -> FactoredInteger:
        merged = dict(self.factors)
        for p, e in other.factors:
            merged[p] = merged.get(p, 0) + e
        return FactoredInteger(tuple(sorted(merged.items())))

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def euler_phi(n: FactoredInteger) -> int:
    return math.prod(p ** (e - 1) * (p - 1) for p, e in n.factors)


def sigma(n: FactoredInteger) -> int:
    return math.prod((p ** (e + 1) - 1) // (p - 1) for p, e in n.factors)


def check_congruence(n: FactoredInteger) -> bool:
    """True iff ``n*phi(n) == 2 (mod sigma(n))``; n = 1 gives -1, divisible by 1."""
    return (n.value * euler_phi(n) - 2) % sigma(n) == 0


def jacobi(a: int, m: int) -> int:
    """Jacobi symbol (a/m) for odd positive m."""
    if m <= 0 or m % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {m}")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


@dataclass(frozen=True, order=True)
class ResidueClass:
    residue: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(f"residue {self.residue} not reduced modulo {self.modulus}")

    @classmethod
    def of(cls, residue: int, modulus: int) -> ResidueClass:
        """Build a class from an unreduced residue."""
        return cls(residue % modulus, modulus)

    def __contains__(self, x: int) -> bool:
        return x % self.modulus == self.residue

    def reduce(self, modulus: int) -> ResidueClass:
        """Project onto a divisor of the modulus."""
        if self.modulus % modulus:
            raise ValueError(f"{modulus} does not divide {self.modulus}")
        return ResidueClass(self.residue % modulus, modulus)

    def __str__(self) -> str:
        return f"{self.residue} mod {self.modulus}"


class InconsistentCongruence(ValueError):
    """Raised by :func:`crt` when two classes admit no common integer."""

    def __init__(self, first: ResidueClass, second: ResidueClass):
        super().__init__(f"{first} and {second} are incompatible")
        self.first = first
        self.second = second


def _merge(a: ResidueClass, b: ResidueClass) -> ResidueClass:
    g = math.gcd(a.modulus, b.modulus)
    if (b.residue - a.residue) % g:
        raise InconsistentCongruence(a, b)
    n = b.modulus // g
    # a.residue + a.modulus*k == b.residue (mod b.modulus)
    k = (b.residue - a.residue) // g * pow(a.modulus // g, -1, n) % n if n > 1 else 0
    return ResidueClass.of(a.residue + a.modulus * k, a.modulus * n)


def crt(classes: Iterable[ResidueClass]) -> ResidueClass:
    """Merge residue classes into one class modulo the lcm of their moduli.

    Moduli need not be coprime; incompatible classes raise
    :class:`InconsistentCongruence`. An empty input gives ``0 mod 1``.
    """
    out = ResidueClass(0, 1)
    for cls in classes:
        out = _merge(out, cls)
    return out


def multiplicative_order(g: int, m: int) -> int:
    if m < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(g, m) != 1:
        raise ValueError(f"gcd({g}, {m}) != 1, order undefined")
    if m == 1:
        return 1
    # order divides lambda(m) | phi(m)
    order = euler_phi(FactoredInteger.from_int(m))
    for p in factorize(order):
        while order % p == 0 and pow(g, order // p, m) == 1:
            order //= p
    return order


def power_residue_set(
    g: int, m: int, multiplier: int, exponent_class: ResidueClass
) -> frozenset[int]:
    """``{multiplier * g**e mod m : e in exponent_class, e >= 0}``.

    One pass over ``e = r, r + s, ..., r + (ord_m(g) - 1)*s`` visits every
    value the powers can take.
    """
    period = multiplicative_order(g, m)
    step = pow(g, exponent_class.modulus, m)
    x = multiplier * pow(g, exponent_class.residue, m) % m
    out = set()
    for _ in range(period):
        out.add(x)
        x = x * step % m
    return frozenset(out)


def _tonelli_shanks(a: int, p: int) -> int:
    """A square root of a unit quadratic residue ``a`` modulo an odd prime."""
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def _unit_roots(a: int, p: int, e: int) -> list[int]:
    """Square roots of ``a`` modulo ``p**e`` when ``gcd(a, p) == 1``."""
    mod = p**e
    if p == 2:
        if e == 1:
            return [1]
        if e == 2:
            return [1, 3] if a % 4 == 1 else []
        if a % 8 != 1:
            return []
        r = 1
        for k in range(3, e):
            if (r * r - a) % (1 << (k + 1)):
                r += 1 << (k - 1)
        half = mod // 2
        return sorted({r % mod, -r % mod, (r + half) % mod, (-r + half) % mod})
    if pow(a, (p - 1) // 2, p) != 1:
        return []
    r = _tonelli_shanks(a % p, p)
    pk = p
    for _ in range(1, e):
        pk *= p
        r = (r - (r * r - a) * pow(2 * r, -1, pk)) % pk
    return sorted({r % mod, -r % mod})


def _prime_power_roots(a: int, p: int, e: int) -> list[int]:
    mod = p**e
    a %= mod
    if a == 0:
        return list(range(0, mod, p ** ((e + 1) // 2)))
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    if v % 2:
        return []
    j = v // 2
    inner = p ** (e - v)
    pj = p**j
    return sorted({pj * (r + k * inner) % mod for r in _unit_roots(a, p, e - v) for k in range(pj)})


def sqrt_mod(a: int, m: int) -> list[int]:
    """All ``z`` in ``[0, m)`` with ``z*z == a (mod m)``, sorted."""
    if m < 1:
        raise ValueError("modulus must be positive")
    roots = [0]
    modulus = 1
    for p, e in factorize(m).items():
        local = _prime_power_roots(a, p, e)
        if not local:
            return []
        pe = p**e
        roots = [
            crt((ResidueClass(r, modulus), ResidueClass(s, pe))).residue
            for r in roots
            for s in local
        ]
        modulus *= pe
    return sorted(roots)


def lcm(values: Sequence[int]) -> int:
    return math.lcm(*values) if values else 1
