"""Continued fractions of quadratic surds ``(P + sqrt(D)) / Q``.

The state of the expansion is the integer pair ``(s_k, t_k)`` with

    a_k     = floor((s_k + sqrt(D)) / t_k)
    s_{k+1} = a_k * t_k - s_k
    t_{k+1} = (D - s_{k+1}**2) / t_k

Every step is exact integer arithmetic. Because the pair sequence is
eventually periodic, an expansion stores one preperiod plus one period and
answers any index by lookup.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .arith import is_square

__all__ = ["QuadraticSurd", "RationalValueError", "SurdExpansion", "convergent", "expand", "floor_surd"]


class RationalValueError(ValueError):
    """The requested surd is rational (its discriminant is a perfect square)."""


def floor_surd(P: int, Q: int, D: int) -> int:
    """``floor((P + sqrt(D)) / Q)`` for non-square ``D > 0`` and ``Q != 0``."""
    r = math.isqrt(D)
    # P + sqrt(D) lies strictly between P + r and P + r + 1
    if Q > 0:
        return (P + r) // Q
    return (P + r + 1) // Q


@dataclass(frozen=True)
class QuadraticSurd:
    """``(P + sqrt(D)) / Q``, normalised so that ``Q | D - P**2``."""

    P: int
    Q: int
    D: int

    def __post_init__(self) -> None:
        if self.Q == 0:
            raise ValueError("Q must be nonzero")
        if self.D <= 0 or is_square(self.D):
            raise RationalValueError(f"D = {self.D} must be a positive non-square")
        if (self.D - self.P * self.P) % self.Q:
            q = abs(self.Q)
            object.__setattr__(self, "P", self.P * q)
            object.__setattr__(self, "D", self.D * q * q)
            object.__setattr__(self, "Q", self.Q * q)

    @classmethod
    def sqrt_ratio(cls, A: int, B: int) -> QuadraticSurd:
        """``sqrt(A/B) = sqrt(A*B) / B``."""
        if A < 1 or B < 1:
            raise ValueError("A and B must be positive")
        if is_square(A * B):
            raise RationalValueError(f"sqrt({A}/{B}) is rational")
        return cls(0, B, A * B)


class SurdExpansion:
    """Periodic continued fraction of a quadratic surd.

    ``a(k)``, ``s(k)`` and ``t(k)`` are defined for every ``k >= 0``;
    convergents use the seeds ``p_{-1} = 1, q_{-1} = 0, p_{-2} = 0, q_{-2} = 1``.
    """

    def __init__(self, surd: QuadraticSurd):
        self.surd = surd
        D = surd.D
        s, t = surd.P, surd.Q
        seen: dict[tuple[int, int], int] = {}
        a_list: list[int] = []
        s_list: list[int] = []
        t_list: list[int] = []
        while (s, t) not in seen:
            seen[(s, t)] = len(s_list)
            a = floor_surd(s, t, D)
            s_list.append(s)
            t_list.append(t)
            a_list.append(a)
            s = a * t - s
            t, rem = divmod(D - s * s, t)
            assert rem == 0, "surd recurrence lost exact divisibility"
        self.preperiod_length = seen[(s, t)]
        self.period_length = len(s_list) - self.preperiod_length
        self._a = tuple(a_list)
        self._s = tuple(s_list)
        self._t = tuple(t_list)
        self._p = [0, 1]
        self._q = [1, 0]
        self._lock = threading.Lock()

    def _index(self, k: int) -> int:
        if k < 0:
            raise IndexError(f"index {k} is negative")
        pre = self.preperiod_length
        return k if k < pre else pre + (k - pre) % self.period_length

    def a(self, k: int) -> int:
        return self._a[self._index(k)]

    def s(self, k: int) -> int:
        return self._s[self._index(k)]

    def t(self, k: int) -> int:
        return self._t[self._index(k)]

    def quotients(self, n: int) -> list[int]:
        return [self.a(k) for k in range(n)]

    @property
    def preperiod(self) -> tuple[int, ...]:
        return self._a[: self.preperiod_length]

    @property
    def period(self) -> tuple[int, ...]:
        return self._a[self.preperiod_length :]

    def convergent(self, k: int) -> tuple[int, int]:
        """``(p_k, q_k)`` for ``k >= -2``."""
        if k < -2:
            raise IndexError(f"convergents start at k = -2, got {k}")
        with self._lock:
            p, q = self._p, self._q
            while len(p) < k + 3:
                a = self.a(len(p) - 2)
                p.append(a * p[-1] + p[-2])
                q.append(a * q[-1] + q[-2])
            return p[k + 2], q[k + 2]

    def __repr__(self) -> str:
        pre = ", ".join(map(str, self.preperiod))
        per = ", ".join(map(str, self.period))
        return f"SurdExpansion([{pre}; ({per})])"


def expand(A: int, B: int) -> SurdExpansion:
    """Continued fraction of ``sqrt(A/B)``."""
    return SurdExpansion(QuadraticSurd.sqrt_ratio(A, B))


def convergent(exp: SurdExpansion, k: int) -> tuple[int, int]:
    if k < -1:
        raise ValueError(f"k must be >= -1, got {k}")
    return exp.convergent(k)
