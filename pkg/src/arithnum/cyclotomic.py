"""Cyclotomic values, multiplicative orders and q-adic valuations.

The classification routines sort each prime factor q of Phi_n(a) into one of
two kinds. Let P be the largest prime of n and write n = P^k * m.

* intrinsic: q = P, ord_P(a) = m, and q divides Phi_n(a) exactly once;
* primitive: ord_q(a) = n, which forces q = 1 (mod n).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from .divisors import divisors
from .errors import (
    BudgetExceeded,
    ConsistencyError,
    CyclotomicConsistencyError,
    NotCoprimeError,
    PreconditionError,
)
from .factorization import (
    DEFAULT_BUDGET,
    carmichael,
    factor,
    is_prime,
    mobius,
    valuation,
)


def cyclotomic_eval(d: int, x: int) -> int:
    """Phi_d(x) as the Mobius product of (x^e - 1) over e | d, with exact division."""
    if d < 1:
        raise PreconditionError(f"cyclotomic index must be >= 1, got {d}")
    if x < 2:
        raise PreconditionError(f"evaluation point must be >= 2, got {x}")
    num = den = 1
    for e in divisors(d):
        mu = mobius(d // e)
        if mu == 1:
            num *= x ** e - 1
        elif mu == -1:
            den *= x ** e - 1
    value, rem = divmod(num, den)
    if rem:
        raise ConsistencyError(f"inexact division while evaluating Phi_{d}({x})")
    return value


@lru_cache(maxsize=1 << 16)
def _order(a: int, m: int, budget: int) -> int:
    t = carmichael(factor(m, budget))
    for r in factor(t, budget).primes:
        while t % r == 0 and pow(a, t // r, m) == 1:
            t //= r
    return t


def mult_order(a: int, m: int, budget: int = DEFAULT_BUDGET) -> int:
    """Least t >= 1 with a^t = 1 (mod m), found by stripping primes from lambda(m)."""
    if m < 2:
        raise PreconditionError(f"modulus must be >= 2, got {m}")
    if gcd(a, m) != 1:
        raise NotCoprimeError(f"ord_{m}({a}) is undefined: gcd({a}, {m}) = {gcd(a, m)}")
    a %= m
    if a == 1:
        return 1
    return _order(a, m, budget)


def has_order(a: int, m: int, t: int) -> bool:
    """ord_m(a) == t, checked by factoring t only (never the group order of m)."""
    if m < 2 or t < 1 or gcd(a, m) != 1:
        return False
    if pow(a, t, m) != 1:
        return False
    return all(pow(a, t // r, m) != 1 for r in factor(t).primes)


def _valuation_of_power_minus_one(p: int, t: int, q: int) -> int:
    # v_q(p^t - 1) through residues mod q^e with growing e; p^t itself may be huge.
    e = 8
    while True:
        modulus = q ** e
        r = (pow(p, t, modulus) - 1) % modulus
        if r:
            return valuation(r, q)
        e *= 2


def lte_valuation(q: int, p: int, n: int) -> int:
    """v_q(p^n - 1) by lifting the exponent.

    For odd q with ord_q(p) = t dividing n this is v_q(p^t - 1) + v_q(n);
    for q = 2 the odd and even n cases differ.
    """
    if not is_prime(q):
        raise PreconditionError(f"{q} is not prime")
    if p < 2 or n < 1:
        raise PreconditionError(f"lte_valuation needs p >= 2 and n >= 1, got p={p}, n={n}")
    if p % q == 0:
        raise NotCoprimeError(f"{q} divides {p}")
    if q == 2:
        base = valuation(p - 1, 2)
        if n % 2:
            return base
        return base + valuation(p + 1, 2) + valuation(n, 2) - 1
    t = mult_order(p, q)
    if n % t:
        return 0
    return _valuation_of_power_minus_one(p, t, q) + valuation(n, q)


def sigma_prime_power_valuation(q: int, p: int, k: int) -> int:
    """v_q(1 + p + ... + p^k) for a prime p different from q."""
    if p == q:
        raise PreconditionError(f"base {p} equals the valuation prime; the value is 0 by inspection")
    if k < 0:
        raise PreconditionError(f"exponent must be >= 0, got {k}")
    return lte_valuation(q, p, k + 1) - lte_valuation(q, p, 1)


def cyclotomic_valuation(q: int, p: int, d: int) -> int:
    """v_q(Phi_d(p)) without evaluating Phi_d(p).

    Only indices d = ord_q(p) * q^e can carry q; the value for those is a
    difference of two LTE valuations.
    """
    if p % q == 0:
        return 0
    t = mult_order(p, q)
    if d % t:
        return 0
    rest = d // t
    e = 0
    while rest % q == 0:
        rest //= q
        e += 1
    if rest != 1:
        return 0
    if e == 0:
        return lte_valuation(q, p, t)
    return lte_valuation(q, p, d) - lte_valuation(q, p, d // q)


class FactorKind(enum.Enum):
    INTRINSIC = "Intrinsic"
    PRIMITIVE = "Primitive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class CyclotomicFactorClass:
    prime: int
    multiplicity: int
    kind: FactorKind
    order_witness: int


@dataclass(frozen=True)
class UnsplitCofactor:
    """A composite part of Phi_n(a) that was not factored.

    ``a^n = 1`` modulo it and ``a^(n/r) - 1`` is coprime to it for every
    prime r of n, so each of its prime factors has order exactly n.
    """

    value: int
    index: int


@dataclass(frozen=True)
class Theorem1Violation:
    prime: int
    multiplicity: int
    order: int | None
    reason: str


@dataclass
class Theorem1Report:
    a: int
    n: int
    value: int
    classes: list[CyclotomicFactorClass] = field(default_factory=list)
    cofactors: list[UnsplitCofactor] = field(default_factory=list)
    violations: list[Theorem1Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def fully_factored(self) -> bool:
        return not self.cofactors


def _classify_prime(a: int, n: int, q: int, mult: int, largest: int, cofactor_m: int):
    if a % q == 0:
        return None, Theorem1Violation(q, mult, None, f"{q} divides the base {a}")
    if q != largest and has_order(a, q, n):
        if q % n == 1:
            return CyclotomicFactorClass(q, mult, FactorKind.PRIMITIVE, n), None
        raise ConsistencyError(f"ord_{q}({a}) = {n} but {q} is not 1 mod {n}")
    try:
        order = mult_order(a, q)
    except BudgetExceeded:
        order = None
    if q == largest:
        if order != cofactor_m:
            return None, Theorem1Violation(q, mult, order, f"ord_{q}({a}) = {order}, expected {cofactor_m}")
        if mult != 1:
            return None, Theorem1Violation(q, mult, order, f"{q}^{mult} divides Phi_{n}({a}); intrinsic factors must be simple")
        return CyclotomicFactorClass(q, mult, FactorKind.INTRINSIC, order), None
    return None, Theorem1Violation(q, mult, order, f"ord_{q}({a}) = {order} and {q} mod {n} = {q % n}")


def theorem1_check(a: int, n: int, budget: int = DEFAULT_BUDGET) -> Theorem1Report:
    """Classify every prime factor of Phi_n(a), certifying what cannot be factored.

    Composite parts left by an exhausted factorization budget are split
    further with gcd(a^(n/r) - 1, C) where possible and otherwise certified
    by the order test in :class:`UnsplitCofactor`. Never raises on a
    violation; the report lists them.
    """
    if a < 2 or n < 2:
        raise PreconditionError(f"need a >= 2 and n >= 2, got a={a}, n={n}")
    value = cyclotomic_eval(n, a)
    index_primes = factor(n).primes
    largest = index_primes[-1]
    cofactor_m = n // largest ** valuation(n, largest)
    report = Theorem1Report(a, n, value)

    try:
        found, stuck = factor(value, budget).factors, []
    except BudgetExceeded as exc:
        found, stuck = sorted(exc.found.items()), list(exc.cofactors)

    primes: dict[int, int] = dict(found)
    work = list(stuck)
    while work:
        c = work.pop()
        if is_prime(c):
            primes[c] = primes.get(c, 0) + 1
            continue
        pieces = None
        for r in index_primes:
            g = gcd(pow(a, n // r, c) - 1, c)
            if 1 < g < c:
                pieces = (g, c // g)
                break
        if pieces:
            work.extend(pieces)
            continue
        certified = pow(a, n, c) == 1 and all(gcd(pow(a, n // r, c) - 1, c) == 1 for r in index_primes)
        if certified:
            report.cofactors.append(UnsplitCofactor(c, n))
        else:
            report.violations.append(Theorem1Violation(c, 1, None, "unsplit cofactor fails the order test"))

    for q in sorted(primes):
        cls, violation = _classify_prime(a, n, q, primes[q], largest, cofactor_m)
        if cls is not None:
            report.classes.append(cls)
        else:
            report.violations.append(violation)

    # converse of the intrinsic criterion: ord_P(a) = m forces P | Phi_n(a)
    if a % largest and mult_order(a, largest) == cofactor_m and largest not in primes:
        report.violations.append(
            Theorem1Violation(largest, 0, cofactor_m, f"ord_{largest}({a}) = {cofactor_m} but {largest} does not divide"))
    return report


def classify_cyclotomic_factors(a: int, n: int, budget: int = DEFAULT_BUDGET) -> list[CyclotomicFactorClass]:
    """Full factorization of Phi_n(a), each prime tagged intrinsic or primitive.

    Raises :class:`BudgetExceeded` if Phi_n(a) cannot be completely factored
    and :class:`CyclotomicConsistencyError` if a prime fits neither kind.
    """
    if a < 2 or n < 2:
        raise PreconditionError(f"need a >= 2 and n >= 2, got a={a}, n={n}")
    value = cyclotomic_eval(n, a)
    f = factor(value, budget)
    largest = factor(n).primes[-1]
    cofactor_m = n // largest ** valuation(n, largest)
    classes, violations = [], []
    for q, e in f:
        cls, violation = _classify_prime(a, n, q, e, largest, cofactor_m)
        if cls is not None:
            classes.append(cls)
        else:
            violations.append(violation)
    if violations:
        detail = "; ".join(v.reason for v in violations)
        raise CyclotomicConsistencyError(f"Phi_{n}({a}) = {value}: {detail}", violations)
    return classes
