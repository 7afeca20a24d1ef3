from __future__ import annotations

from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Symbol, cyclotomic_poly

from arithnum.cyclotomic import (
    FactorKind,
    classify_cyclotomic_factors,
    cyclotomic_eval,
    cyclotomic_valuation,
    has_order,
    lte_valuation,
    mult_order,
    sigma_prime_power_valuation,
    theorem1_check,
)
from arithnum.errors import BudgetExceeded, CyclotomicConsistencyError, NotCoprimeError, PreconditionError
from arithnum.factorization import euler_phi, factor
from oracles import big_valuation, trial_is_prime

X = Symbol("x")
PRIMES_BELOW_100 = [p for p in range(2, 100) if trial_is_prime(p)]
PRIMES_BELOW_50 = [p for p in PRIMES_BELOW_100 if p < 50]


def linear_order(a: int, m: int) -> int:
    t, x = 1, a % m
    while x != 1:
        x = x * a % m
        t += 1
    return t


@pytest.mark.parametrize("d, x, expected", [
    (1, 5, 4),
    (3, 7, 57),
    (4, 7, 50),
    (9, 7, 7 ** 6 + 7 ** 3 + 1),
    (9, 7, 117993),
])
def test_cyclotomic_examples(d, x, expected):
    assert cyclotomic_eval(d, x) == expected


def test_cyclotomic_matches_sympy():
    for d in range(1, 61):
        poly = cyclotomic_poly(d, X)
        for x in (2, 3, 10, 31):
            assert cyclotomic_eval(d, x) == int(poly.subs(X, x))


def test_cyclotomic_preconditions():
    with pytest.raises(PreconditionError):
        cyclotomic_eval(0, 3)
    with pytest.raises(PreconditionError):
        cyclotomic_eval(5, 1)


def test_telescoping_product():
    for p in PRIMES_BELOW_100:
        for m in range(2, 61):
            lhs = prod(cyclotomic_eval(d, p) for d in range(2, m + 1) if m % d == 0)
            assert lhs == (p ** m - 1) // (p - 1)


def test_cyclotomic_size_bound():
    for d in range(1, 80):
        bound_exp = euler_phi(factor(d))
        for x in (2, 3, 7):
            value = cyclotomic_eval(d, x)
            assert 1 <= value <= (x + 1) ** bound_exp


@pytest.mark.parametrize("a, m, expected", [(1, 7, 1), (7, 5, 4), (5, 3, 2), (2, 1_000_003, 1_000_002)])
def test_mult_order_examples(a, m, expected):
    assert mult_order(a, m) == expected


def test_mult_order_matches_linear_scan():
    for m in range(2, 400):
        for a in range(1, m):
            if gcd(a, m) == 1:
                assert mult_order(a, m) == linear_order(a, m)


def test_mult_order_not_coprime():
    with pytest.raises(NotCoprimeError):
        mult_order(6, 9)


def test_has_order():
    assert has_order(2, 23, 11)
    assert not has_order(2, 23, 22)
    assert not has_order(3, 9, 1)


@pytest.mark.parametrize("q, p, n, expected", [(3, 4, 1, 1), (5, 7, 4, 2), (2, 7, 20, 5)])
def test_lte_examples(q, p, n, expected):
    assert lte_valuation(q, p, n) == expected


def test_lte_matches_big_integer_valuation():
    for q in PRIMES_BELOW_50:
        for p in range(2, 50):
            if p % q == 0:
                continue
            for n in range(1, 201):
                assert lte_valuation(q, p, n) == big_valuation(p ** n - 1, q), (q, p, n)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([2, 3, 5, 7, 11, 13, 101, 257]),
       st.integers(min_value=2, max_value=10 ** 15), st.integers(min_value=1, max_value=3000))
def test_lte_random_bases(q, p, n):
    if p % q == 0:
        with pytest.raises(NotCoprimeError):
            lte_valuation(q, p, n)
    else:
        assert lte_valuation(q, p, n) == big_valuation(pow(p, n, q ** 60) - 1 + q ** 60, q)


def test_lte_preconditions():
    with pytest.raises(PreconditionError):
        lte_valuation(4, 3, 2)
    with pytest.raises(NotCoprimeError):
        lte_valuation(3, 6, 2)


def test_sigma_prime_power_valuation_examples():
    with pytest.raises(PreconditionError):
        sigma_prime_power_valuation(3, 3, 4)
    assert sigma_prime_power_valuation(5, 7, 19) == 3
    assert sigma_prime_power_valuation(3, 5, 8) == 0
    assert (5 ** 9 - 1) % 3 != 0


def test_sigma_prime_power_valuation_direct():
    for q in (2, 3, 5, 7, 11):
        for p in PRIMES_BELOW_50:
            if p == q:
                continue
            for k in range(0, 40):
                assert sigma_prime_power_valuation(q, p, k) == big_valuation((p ** (k + 1) - 1) // (p - 1), q)


def test_cyclotomic_valuation_direct():
    for q in (2, 3, 5, 7):
        for p in (2, 3, 5, 7, 11, 13, 19, 31):
            for d in range(1, 61):
                assert cyclotomic_valuation(q, p, d) == big_valuation(cyclotomic_eval(d, p), q), (q, p, d)


def test_classify_examples():
    (c,) = classify_cyclotomic_factors(2, 6)
    assert (c.prime, c.multiplicity, c.kind, c.order_witness) == (3, 1, FactorKind.INTRINSIC, 2)

    three, nineteen = classify_cyclotomic_factors(7, 3)
    assert (three.prime, three.kind) == (3, FactorKind.INTRINSIC)
    assert (nineteen.prime, nineteen.kind, nineteen.order_witness) == (19, FactorKind.PRIMITIVE, 3)

    classes = classify_cyclotomic_factors(2, 11)
    assert [(c.prime, c.kind, c.order_witness) for c in classes] == [
        (23, FactorKind.PRIMITIVE, 11), (89, FactorKind.PRIMITIVE, 11)]


def test_classify_raises_on_index_two_exception():
    # Phi_2(3) = 4: the largest prime of 2 divides it twice
    with pytest.raises(CyclotomicConsistencyError) as info:
        classify_cyclotomic_factors(3, 2)
    assert info.value.violations[0].prime == 2
    assert info.value.violations[0].multiplicity == 2


def test_classify_budget():
    with pytest.raises(BudgetExceeded):
        classify_cyclotomic_factors(17, 37, budget=1000)


def test_theorem1_invariants_with_known_exception():
    """Every prime of Phi_n(a) is intrinsic or primitive, except P^2 | Phi_2(a) for a = 3 mod 4."""
    exceptions = []
    for a in range(2, 31):
        for n in range(2, 41):
            report = theorem1_check(a, n, budget=1 << 16)
            for c in report.classes:
                if c.kind is FactorKind.PRIMITIVE:
                    assert c.prime % n == 1
                    assert linear_order(a, c.prime) == n if c.prime < 10 ** 6 else has_order(a, c.prime, n)
                else:
                    assert c.multiplicity == 1
                    assert c.prime == factor(n).primes[-1]
            assert prod(c.prime ** c.multiplicity for c in report.classes) * prod(
                u.value for u in report.cofactors) * prod(
                v.prime ** v.multiplicity for v in report.violations) == report.value
            for v in report.violations:
                exceptions.append((a, n, v.prime, v.multiplicity))
    assert exceptions == [(a, 2, 2, big_valuation(a + 1, 2)) for a in range(3, 31, 4)]


def test_theorem1_certifies_unfactored_cofactors():
    report = theorem1_check(17, 37, budget=1000)
    assert report.ok
    assert report.cofactors
    for u in report.cofactors:
        assert pow(17, 37, u.value) == 1
        assert gcd(17 - 1, u.value) == 1
