from __future__ import annotations

import math
import threading

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import convergents_fraction
from phisigma.arith import is_square
from phisigma.cf import QuadraticSurd, RationalValueError, SurdExpansion, convergent, expand, floor_surd

non_square_pair = st.tuples(st.integers(1, 1000), st.integers(1, 1000)).filter(lambda ab: not is_square(ab[0] * ab[1]))


def expected_table(c: int) -> tuple[list[int], list[int], list[int]]:
    """Quotients and (s, t) for sqrt((c+2)/(c-2)), indices 0..6, written out by hand."""
    a = [1, (c - 3) // 2, 1, 2 * c - 2, 1, (c - 3) // 2, 2]
    s = [0, c - 2, c - 4, c - 1, c - 1, c - 4, c - 2]
    t = [c - 2, 4, 2 * c - 5, 1, 2 * c - 5, 4, c - 2]
    return a, s, t


def floor_ok(a: int, s: int, t: int, D: int) -> bool:
    """``a <= (s + sqrt D)/t < a + 1`` decided with integer squares only."""
    lo, hi = a * t - s, (a + 1) * t - s  # compare sqrt(D) against lo and hi (order flips for t < 0)
    if t < 0:
        lo, hi = hi, lo
    below = lo <= 0 or lo * lo <= D  # lo <= sqrt D
    above = hi > 0 and hi * hi > D  # sqrt D < hi
    return below and above


def test_floor_surd_matches_integer_bounds():
    for P in range(-20, 21):
        for Q in (-7, -3, -1, 1, 2, 5):
            for D in (2, 3, 5, 7, 1000003):
                assert floor_ok(floor_surd(P, Q, D), P, Q, D)


def test_surd_normalisation():
    s = QuadraticSurd(1, 3, 7)
    assert (s.P, s.Q, s.D) == (1, 3, 7)
    s = QuadraticSurd(1, 4, 7)  # 4 does not divide 7 - 1, so everything is scaled by 4
    assert (s.P, s.Q, s.D) == (4, 16, 112)
    assert (s.D - s.P**2) % s.Q == 0


def test_sqrt_ratio_encoding():
    s = QuadraticSurd.sqrt_ratio(19, 15)
    assert (s.P, s.Q, s.D) == (0, 15, 285)


@pytest.mark.parametrize("A,B", [(4, 1), (2, 8), (3, 12)])
def test_rational_surds_rejected(A, B):
    with pytest.raises(RationalValueError):
        expand(A, B)


def test_sqrt_19_over_15():
    exp = expand(19, 15)
    assert exp.preperiod == (1,)
    assert exp.period == (7, 1, 32, 1, 7, 2)
    assert (exp.s(1), exp.t(1), exp.a(1)) == (15, 4, 7)
    assert repr(exp) == "SurdExpansion([1; (7, 1, 32, 1, 7, 2)])"


def test_sqrt_2():
    exp = expand(2, 1)
    assert exp.quotients(6) == [1, 2, 2, 2, 2, 2]
    assert exp.period_length == 1


def test_convergent_examples():
    exp = expand(19, 15)
    assert convergent(exp, -1) == (1, 0)
    assert convergent(exp, 0) == (1, 1)
    assert convergent(exp, 1) == (8, 7)
    assert exp.convergent(-2) == (0, 1)
    with pytest.raises(ValueError):
        convergent(exp, -2)


def test_negative_index_rejected():
    with pytest.raises(IndexError):
        expand(2, 1).a(-1)


@given(st.integers(2, 4999))
def test_symbolic_pattern(h):
    c = 2 * h + 1
    exp = expand(c + 2, c - 2)
    a, s, t = expected_table(c)
    assert exp.preperiod_length == 1 and exp.period_length == 6
    for k in range(20):
        j = k if k < 7 else 1 + (k - 1) % 6
        assert (exp.a(k), exp.s(k), exp.t(k)) == (a[j], s[j], t[j])


@given(non_square_pair)
def test_recurrences(ab):
    A, B = ab
    exp = expand(A, B)
    D = A * B
    for k in range(3 * (exp.preperiod_length + exp.period_length)):
        s, t, a = exp.s(k), exp.t(k), exp.a(k)
        assert exp.s(k + 1) == a * t - s
        assert exp.t(k + 1) * t == D - exp.s(k + 1) ** 2
        assert floor_ok(a, s, t, D)
        p, q = exp.convergent(k)
        p1, q1 = exp.convergent(k - 1)
        p2, q2 = exp.convergent(k - 2)
        assert (p, q) == (a * p1 + p2, a * q1 + q2)
        assert p * q1 - p1 * q == (-1) ** (k - 1)


@given(non_square_pair)
def test_period_repeats(ab):
    A, B = ab
    exp = expand(A, B)
    D, s, t = A * B, 0, B
    pairs = []
    for _ in range(exp.preperiod_length + exp.period_length + 1):
        pairs.append((s, t))
        a = floor_surd(s, t, D)
        s = a * t - s
        t = (D - s * s) // t
    i, j = exp.preperiod_length, exp.preperiod_length + exp.period_length
    assert pairs[i] == pairs[j]
    assert len(set(pairs[:j])) == j  # nothing repeats earlier
    assert [(exp.s(k), exp.t(k)) for k in range(j + 1)] == pairs


@given(non_square_pair)
def test_convergents_match_fraction_evaluation(ab):
    exp = expand(*ab)
    n = 12
    assert [exp.convergent(k) for k in range(n)] == convergents_fraction(exp.quotients(n))


@given(non_square_pair)
def test_convergent_quality(ab):
    A, B = ab
    exp = expand(A, B)
    for k in range(15):
        p, q = exp.convergent(k)
        # |p/q - x| = |p^2 B - q^2 A| / (B q (p + q x)) with x = sqrt(A/B), so
        # |p/q - x| < 1/q^2  <=>  |p^2 B - q^2 A| q - B p < q sqrt(A B)
        lhs = abs(p * p * B - q * q * A) * q - B * p
        assert lhs < 0 or lhs * lhs < q * q * A * B
        assert math.gcd(p, q) == 1


def test_matches_sympy_periodic_expansion():
    for A, B in [(19, 15), (229, 225), (7, 3), (2, 1), (13, 1), (499, 495)]:
        cf = sympy.continued_fraction_periodic(0, B, A * B)
        pre = [x for x in cf if not isinstance(x, list)]
        per = next(x for x in cf if isinstance(x, list))
        exp = expand(A, B)
        assert list(exp.preperiod) == pre
        assert list(exp.period) == per


def lemma_sides(exp: SurdExpansion, alpha: int, beta: int, k: int, r: int, u: int) -> tuple[int, int]:
    p1, q1 = exp.convergent(k + 1)
    p0, q0 = exp.convergent(k)
    lhs = alpha * (r * q1 + u * q0) ** 2 - beta * (r * p1 + u * p0) ** 2
    rhs = (-1) ** k * (u * u * exp.t(k + 1) + 2 * r * u * exp.s(k + 2) - r * r * exp.t(k + 2))
    return lhs, rhs


@given(
    st.integers(1, 1000),
    st.integers(1, 1000),
    st.integers(-1, 30),
    st.integers(-50, 50),
    st.integers(-50, 50),
)
def test_lemma_identity(alpha, beta, k, r, u):
    assume(alpha * beta <= 10**6 and not is_square(alpha * beta))
    lhs, rhs = lemma_sides(expand(alpha, beta), alpha, beta, k, r, u)
    assert lhs == rhs


def test_concurrent_convergents_agree():
    exp = expand(499, 495)
    results = []

    def work():
        results.append([exp.convergent(k) for k in range(200)])

    threads = [threading.Thread(target=work) for _ in range(8)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert all(r == results[0] for r in results)
    assert results[0] == convergents_fraction(exp.quotients(200))
