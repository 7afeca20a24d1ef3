"""Divisor sum, divisor count and the mean of the divisors.

The oracle functions at the bottom decide arithmeticity from raw divisor
lists only. They never touch the cyclotomic machinery, which is what lets
them serve as ground truth for every criterion in the package.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt, prod

from .errors import BudgetExceeded, PreconditionError
from .factorization import Factorization, as_factorization, factor, is_prime

#: Largest n the raw divisor scan accepts.
SCAN_LIMIT = 10 ** 7
#: Largest n accepted by divisor enumeration from a factorization.
ENUMERATION_LIMIT = 10 ** 9
#: Cap on the divisor count for the enumeration oracle on factored inputs.
MAX_ENUMERATED_DIVISORS = 10 ** 6


def sigma(f: Factorization | int) -> int:
    """Sum of the divisors, as the product of geometric sums."""
    return prod((p ** (e + 1) - 1) // (p - 1) for p, e in as_factorization(f))


def tau(f: Factorization | int) -> int:
    """Number of divisors."""
    return prod(e + 1 for _, e in as_factorization(f))


def mean_of_divisors(f: Factorization | int) -> Fraction:
    """sigma/tau in lowest terms; the mean for 1 is 1."""
    f = as_factorization(f)
    return Fraction(sigma(f), tau(f))


def prime_power_mean(p: int, k: int) -> Fraction:
    """Closed form (p^(k+1) - 1) / ((k+1)(p-1)) for the mean over the divisors of p^k."""
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if k < 0:
        raise PreconditionError(f"exponent must be >= 0, got {k}")
    return Fraction(p ** (k + 1) - 1, (k + 1) * (p - 1))


def divisors(f: Factorization | int) -> list[int]:
    """All divisors in increasing order, generated from the factorization."""
    divs = [1]
    for p, e in as_factorization(f):
        powers = [p ** i for i in range(e + 1)]
        divs = [d * q for d in divs for q in powers]
    return sorted(divs)


def divisor_scan(n: int) -> tuple[int, int]:
    """(sigma(n), tau(n)) by testing every candidate up to sqrt(n)."""
    if n < 1:
        raise PreconditionError(f"divisor scan requires n >= 1, got {n}")
    if n > SCAN_LIMIT:
        raise PreconditionError(f"divisor scan is limited to n <= {SCAN_LIMIT}")
    s = t = 0
    r = isqrt(n)
    for d in range(1, r + 1):
        if n % d == 0:
            s += d + n // d
            t += 2
    if r * r == n:
        s -= r
        t -= 1
    return s, t


def scan_is_arithmetic(n: int) -> bool:
    s, t = divisor_scan(n)
    return s % t == 0


def enumerated_is_arithmetic(f: Factorization | int,
                             max_divisors: int = MAX_ENUMERATED_DIVISORS) -> bool:
    """tau | sigma with both obtained by listing every divisor explicitly."""
    f = as_factorization(f)
    count = prod(e + 1 for _, e in f)
    if count > max_divisors:
        raise BudgetExceeded(f"{f} has {count} divisors, over the enumeration cap {max_divisors}")
    divs = divisors(f)
    return sum(divs) % len(divs) == 0


def oracle_is_arithmetic(n: int) -> bool:
    """Brute-force ground truth: does the number of divisors divide their sum?

    Uses the raw scan up to 10^7 and divisor enumeration up to 10^9.
    """
    if n < 1:
        raise PreconditionError(f"arithmetic numbers are defined for n >= 1, got {n}")
    if n <= SCAN_LIMIT:
        return scan_is_arithmetic(n)
    if n <= ENUMERATION_LIMIT:
        return enumerated_is_arithmetic(factor(n))
    raise BudgetExceeded(f"oracle is limited to n <= {ENUMERATION_LIMIT}; got {n}")
