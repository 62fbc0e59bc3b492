from __future__ import annotations

import math

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import crt_brute, legendre_brute, order_brute, phi_brute, sigma_brute
from phisigma.arith import (
    FactoredInteger,
    InconsistentCongruence,
    ResidueClass,
    check_congruence,
    crt,
    euler_phi,
    factorize,
    is_prime,
    is_square,
    jacobi,
    multiplicative_order,
    power_residue_set,
    sigma,
    sqrt_mod,
)

ODD = ResidueClass(1, 2)
small_n = st.integers(min_value=1, max_value=3000)


# --- FactoredInteger -------------------------------------------------------


def test_empty_factorization_is_one():
    assert FactoredInteger().value == 1
    assert str(FactoredInteger()) == "1"


def test_from_exponents():
    n = FactoredInteger.from_exponents(4, 2)
    assert n.value == 400
    assert n.factors == ((2, 4), (5, 2))
    assert FactoredInteger.from_exponents(0, 0).factors == ()


@pytest.mark.parametrize(
    "factors",
    [((5, 1), (2, 1)), ((2, 0),), ((4, 1),), ((2, 1), (2, 1))],
)
def test_invalid_factorizations_rejected(factors):
    with pytest.raises(ValueError):
        FactoredInteger(factors)


def test_huge_prime_rejected():
    with pytest.raises(ValueError):
        FactoredInteger(((2**89 - 1, 1),))


@given(small_n)
def test_from_int_roundtrip(n):
    f = FactoredInteger.from_int(n)
    assert f.value == n
    assert dict(f.factors) == sympy.factorint(n)


@given(small_n, small_n)
def test_multiplication(a, b):
    assert (FactoredInteger.from_int(a) * FactoredInteger.from_int(b)).value == a * b


def test_factorize_with_limit():
    assert factorize(2 * 1000003, limit=100) == {2: 1, 1000003: 1}
    with pytest.raises(ValueError):
        factorize(1000003 * 1000033, limit=100)


# --- primality and squares -------------------------------------------------


@given(st.integers(min_value=0, max_value=10**6))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(min_value=2**40, max_value=2**64 - 1))
def test_is_prime_matches_sympy_64_bit(n):
    assert is_prime(n) == sympy.isprime(n)


def test_is_prime_strong_pseudoprimes():
    # strong pseudoprimes to several small bases
    for n in (2047, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383, 341550071728321,
              3825123056546413051):
        assert not is_prime(n)
    assert is_prime(2**61 - 1)


def test_is_prime_range_error():
    with pytest.raises(ValueError):
        is_prime(2**64)


@given(st.integers(min_value=0, max_value=10**40))
def test_is_square(n):
    assert is_square(n * n)
    assert is_square(n * n + 1) == (n == 0)
    assert not is_square(-1 - n)


# --- phi, sigma, the congruence ----------------------------------------------


def test_phi_examples():
    assert euler_phi(FactoredInteger(((7, 1),))) == 6
    assert euler_phi(FactoredInteger()) == 1
    assert euler_phi(FactoredInteger.from_exponents(4, 2)) == 160 == phi_brute(400)


def test_sigma_examples():
    assert sigma(FactoredInteger.from_exponents(3, 0)) == 15
    assert sigma(FactoredInteger()) == 1
    assert sigma(FactoredInteger.from_exponents(2, 1)) == 42 == sigma_brute(20)


@given(st.integers(min_value=1, max_value=2000))
def test_phi_sigma_match_brute_force(n):
    f = FactoredInteger.from_int(n)
    assert euler_phi(f) == phi_brute(n)
    assert sigma(f) == sigma_brute(n)


@given(small_n, small_n)
def test_phi_sigma_multiplicative(a, b):
    assume(math.gcd(a, b) == 1)
    fa, fb = FactoredInteger.from_int(a), FactoredInteger.from_int(b)
    assert euler_phi(fa * fb) == euler_phi(fa) * euler_phi(fb)
    assert sigma(fa * fb) == sigma(fa) * sigma(fb)


def test_check_congruence_examples():
    assert check_congruence(FactoredInteger.from_exponents(3, 0))
    assert check_congruence(FactoredInteger())
    assert not check_congruence(FactoredInteger.from_exponents(2, 0))


def test_every_prime_below_10_000_satisfies_congruence():
    for p in sympy.primerange(2, 10**4):
        assert check_congruence(FactoredInteger(((p, 1),)))


@given(st.integers(min_value=1, max_value=5000))
def test_check_congruence_direct(n):
    assert check_congruence(FactoredInteger.from_int(n)) == ((n * phi_brute(n) - 2) % sigma_brute(n) == 0)


def test_sigma_divisibilities_for_exponents_to_50():
    for a in range(51):
        M = 2 ** (a + 1) - 1
        assert (2 ** (2 * (a + 1)) - 1) % M == 0
        assert sigma(FactoredInteger.from_exponents(a, 0)) == M
    for b in range(51):
        N = (5 ** (b + 1) - 1) // 4
        assert (5 ** (2 * (b + 1)) - 1) % N == 0
        assert sigma(FactoredInteger.from_exponents(0, b)) == N


# --- Jacobi symbol -----------------------------------------------------------


def test_jacobi_examples():
    for m in range(1, 200, 2):
        assert jacobi(1, m) == 1
    assert jacobi(5, 19) == 1
    assert jacobi(5, 7) == -1


@pytest.mark.parametrize("m", [0, -3, 4, 10])
def test_jacobi_rejects_bad_modulus(m):
    with pytest.raises(ValueError):
        jacobi(3, m)


def test_jacobi_matches_legendre_enumeration():
    for p in sympy.primerange(3, 200):
        for a in range(-p, 2 * p):
            assert jacobi(a, p) == legendre_brute(a, p)


@given(st.integers(min_value=-10**6, max_value=10**6), st.integers(min_value=0, max_value=10**5))
def test_jacobi_matches_sympy(a, k):
    m = 2 * k + 1
    assert jacobi(a, m) == sympy.jacobi_symbol(a, m)


def test_five_is_a_non_residue_when_alpha_is_2_mod_4():
    for alpha in range(2, 101, 4):
        assert jacobi(5, 2 ** (alpha + 1) - 1) == -1


def test_499_never_divides_two_to_odd_power_minus_one():
    for alpha in range(0, 333, 2):
        assert (2 ** (alpha + 1) - 1) % 499 != 0


# --- CRT -------------------------------------------------------------------


def test_crt_examples():
    assert crt([ResidueClass(1, 2), ResidueClass(2, 3), ResidueClass(2, 5)]) == ResidueClass(17, 30)
    assert crt([ResidueClass(0, 1)]) == ResidueClass(0, 1)
    assert crt([]) == ResidueClass(0, 1)
    classes = [ResidueClass(2, 4), ResidueClass(7, 9), ResidueClass(3, 5), ResidueClass(9, 11), ResidueClass(21, 71)]
    assert crt(classes) == ResidueClass(11878, 140580)


def test_crt_of_first_two_c_classes():
    assert crt([ResidueClass(1, 2), ResidueClass(2, 3)]) == ResidueClass(5, 6)


def test_crt_inconsistent():
    with pytest.raises(InconsistentCongruence) as info:
        crt([ResidueClass(1, 4), ResidueClass(0, 6)])
    assert info.value.first == ResidueClass(1, 4)
    assert info.value.second == ResidueClass(0, 6)


@given(st.lists(st.tuples(st.integers(0, 60), st.integers(1, 12)), min_size=1, max_size=4))
def test_crt_matches_brute_force(pairs):
    classes = [ResidueClass.of(r, m) for r, m in pairs]
    expected = crt_brute([(c.residue, c.modulus) for c in classes])
    if expected is None:
        with pytest.raises(InconsistentCongruence):
            crt(classes)
    else:
        out = crt(classes)
        assert (out.residue, out.modulus) == expected
        for c in classes:
            assert out.residue in c


def test_residue_class_validation():
    with pytest.raises(ValueError):
        ResidueClass(5, 5)
    with pytest.raises(ValueError):
        ResidueClass(0, 0)
    assert ResidueClass.of(-2, 15) == ResidueClass(13, 15)
    assert ResidueClass(58, 60).reduce(4) == ResidueClass(2, 4)


# --- order and power residues ------------------------------------------------


def test_multiplicative_order_examples():
    assert multiplicative_order(2, 499) == 166
    assert multiplicative_order(1, 97) == 1
    assert multiplicative_order(5, 71) == 5
    with pytest.raises(ValueError):
        multiplicative_order(6, 9)


@given(st.integers(1, 500), st.integers(2, 500))
def test_multiplicative_order_brute_force(g, m):
    assume(math.gcd(g, m) == 1)
    assert multiplicative_order(g, m) == order_brute(g, m)


def test_power_residue_set_mod_71():
    assert power_residue_set(5, 71, -2, ODD) == {21, 28, 34, 61, 69}


def test_power_residue_set_of_one():
    for m in (3, 7, 71, 1000):
        assert power_residue_set(1, m, -2, ODD) == {m - 2}


def test_power_residue_set_mod_3_matches_enumeration():
    # 5 = 2 (mod 3) and 2^odd = 2, so -2 * 2 = -4 = 2 (mod 3)
    assert power_residue_set(5, 3, -2, ODD) == {2}
    assert {(-2 * 5**e) % 3 for e in range(1, 40, 2)} == {2}


@given(st.integers(1, 50), st.integers(2, 300), st.integers(-50, 50), st.integers(0, 5), st.integers(1, 6))
def test_power_residue_set_brute_force(g, m, mult, r, s):
    assume(math.gcd(g, m) == 1)
    cls = ResidueClass.of(r, s)
    expected = {mult * pow(g, e, m) % m for e in range(cls.residue, cls.residue + 4 * s * m, s)}
    assert power_residue_set(g, m, mult, cls) == expected


def test_power_residue_set_rejects_non_unit():
    with pytest.raises(ValueError):
        power_residue_set(5, 10, -2, ODD)


# --- modular square roots ----------------------------------------------------


@given(st.integers(-500, 500), st.integers(1, 400))
def test_sqrt_mod_brute_force(a, m):
    assert sqrt_mod(a, m) == [z for z in range(m) if (z * z - a) % m == 0]


@given(st.integers(0, 10**6), st.sampled_from([2**20, 3**12, 5**8, 2**10 * 3**5 * 7**3]))
def test_sqrt_mod_large_prime_powers(z, m):
    roots = sqrt_mod(z * z, m)
    assert z % m in roots
    assert all((r * r - z * z) % m == 0 for r in roots)
