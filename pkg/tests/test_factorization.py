from __future__ import annotations

from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import factorint

from arithnum.errors import BudgetExceeded, ParseError, PreconditionError
from arithnum.factorization import (
    Factorization,
    carmichael,
    euler_phi,
    factor,
    is_prime,
    iter_factorizations,
    mobius,
    partial_factor,
    radical,
    valuation,
)
from oracles import prime_table, trial_factor, trial_is_prime


@pytest.mark.parametrize("n, expected", [
    (1, ()),
    (75, ((3, 1), (5, 2))),
    (7381, ((11, 2), (61, 1))),
    (2 ** 10, ((2, 10),)),
    (999_983, ((999_983, 1),)),
])
def test_factor_examples(n, expected):
    assert factor(n).factors == expected
    assert factor(n).value == n


def test_factor_rejects_zero():
    with pytest.raises(PreconditionError):
        factor(0)


def test_factor_reconstructs_every_n_up_to_1e5():
    spf_based = iter_factorizations(100_000)
    for n, f in enumerate(spf_based, start=1):
        assert f == factor(n)
        assert prod(p ** e for p, e in f) == n


def test_factor_matches_trial_division_sample():
    for n in list(range(1, 3000)) + [2 ** 31 - 2, 10 ** 12 + 39, 600_851_475_143]:
        assert list(factor(n).factors) == trial_factor(n)


@pytest.mark.parametrize("n", [
    2 ** 64 + 1,
    (2 ** 61 - 1) * (2 ** 31 - 1),
    1_000_000_007 * 998_244_353,
    3 ** 40 * 7 ** 3,
    (10 ** 9 + 7) ** 3,
    2 ** 89 - 1,
])
def test_factor_large_against_sympy(n):
    assert dict(factor(n).factors) == factorint(n)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 5, 7, 11, 101, 65537, 1_000_003, 2 ** 31 - 1]), min_size=1, max_size=6))
def test_factor_products_of_known_primes(primes):
    n = prod(primes)
    expected = {}
    for p in primes:
        expected[p] = expected.get(p, 0) + 1
    assert dict(factor(n).factors) == expected


def test_budget_exhaustion_reports_partial():
    # two 40-bit primes cannot be split in 1000 rho iterations
    p, q = 1_099_511_627_791, 1_099_511_628_401
    assert is_prime(p) and is_prime(q)
    with pytest.raises(BudgetExceeded) as info:
        factor(6 * p * q, budget=1000)
    assert info.value.found == {2: 1, 3: 1}
    assert info.value.cofactors == [p * q]
    found, stuck = partial_factor(6 * p * q, budget=1000)
    assert stuck == [p * q]


def test_is_prime_small_values():
    assert not is_prime(0)
    assert not is_prime(1)
    assert is_prime(2)
    assert is_prime(2 ** 31 - 1)
    assert trial_is_prime(2 ** 31 - 1)


def test_is_prime_agrees_with_sieve_to_1e6():
    table = prime_table(10 ** 6)
    assert all(is_prime(n) == bool(table[n]) for n in range(10 ** 6 + 1))


@pytest.mark.parametrize("n, expected", [
    (3215031751, False),          # strong pseudoprime to bases 2, 3, 5, 7
    (3825123056546413051, False),  # strong pseudoprime to bases up to 23
    (2 ** 61 - 1, True),
    (2 ** 127 - 1, True),
    (2 ** 128 + 1, False),
    (561, False),
])
def test_is_prime_hard_cases(n, expected):
    assert is_prime(n) is expected


def test_radical_examples():
    assert radical(Factorization(1, ())) == 1
    assert radical(75) == 15
    assert radical(8) == 2


def test_mobius_examples():
    assert mobius(1) == 1
    assert mobius(6) == 1
    assert mobius(12) == 0
    assert mobius(30) == -1


def test_radical_divides_and_is_square_free():
    for f in iter_factorizations(20_000):
        r = radical(f)
        assert f.value % r == 0
        assert factor(r).is_square_free


def test_mobius_multiplicative_on_coprime_pairs():
    mu = [0] + [mobius(f) for f in iter_factorizations(10_000)]
    for m in range(1, 101):
        for n in range(1, 10_000 // m + 1):
            if gcd(m, n) == 1:
                assert mu[m * n] == mu[m] * mu[n]


def test_carmichael_and_phi():
    assert carmichael(1) == 1
    assert [carmichael(n) for n in (8, 15, 16, 561)] == [2, 4, 4, 80]
    assert euler_phi(36) == 12
    for n in range(2, 500):
        lam = carmichael(n)
        assert all(pow(a, lam, n) == 1 for a in range(1, n) if gcd(a, n) == 1)


def test_valuation():
    assert valuation(2400, 5) == 2
    assert valuation(-8, 2) == 3
    with pytest.raises(PreconditionError):
        valuation(0, 3)


class TestParse:
    def test_round_trip(self):
        f = Factorization.parse("7^19 * 2^24")
        assert f.factors == ((2, 24), (7, 19))
        assert str(f) == "2^24 * 7^19"
        assert Factorization.parse(str(f)) == f

    def test_whitespace_and_bare_primes(self):
        assert Factorization.parse(" 3 *5 ^ 2 ") == factor(75)
        assert Factorization.parse("1") == factor(1)

    def test_repeated_primes_merge(self):
        assert Factorization.parse("3^2 * 3") == factor(27)

    @pytest.mark.parametrize("text", ["", "4^2", "3^0", "3^^2", "2*", "x", "2+3", "-3"])
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            Factorization.parse(text)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=1, max_value=10 ** 12))
    def test_str_parse_identity(self, n):
        f = factor(n)
        assert Factorization.parse(str(f)) == f


def test_factorization_invariants_enforced():
    with pytest.raises(PreconditionError):
        Factorization(12, ((3, 1), (2, 2)))
    with pytest.raises(PreconditionError):
        Factorization(13, ((2, 2), (3, 1)))
    with pytest.raises(PreconditionError):
        Factorization(0, ())
    with pytest.raises(PreconditionError):
        Factorization.from_pairs([(4, 1)])
