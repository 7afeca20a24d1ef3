"""Prime factorizations, primality and square-free structure.

Factoring is trial division by the primes below 1000 followed by Brent's
variant of Pollard rho. The rho stage is seeded from the number being split,
so every run is reproducible, and it spends at most ``budget`` iterations per
call to :func:`factor`.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from math import gcd, isqrt, prod
from typing import Iterable, Iterator

import numpy as np

from .errors import BudgetExceeded, ParseError, PreconditionError

#: Default cap on Pollard-rho iterations spent by a single ``factor`` call.
DEFAULT_BUDGET = 1 << 20

_TRIAL_BOUND = 1000


def _primes_below(bound: int) -> list[int]:
    sieve = bytearray([1]) * bound
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(bound - 1) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytes(len(range(p * p, bound, p)))
    return [i for i, flag in enumerate(sieve) if flag]


SMALL_PRIMES: tuple[int, ...] = tuple(_primes_below(_TRIAL_BOUND))
_SMALL_PRIME_SET = frozenset(SMALL_PRIMES)

# The first 13 primes are a complete witness set below this bound
# (Sorenson & Webster), which covers every 64-bit input.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_MR_EXTRA_ROUNDS = 24


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin primality test.

    Deterministic below 3.3e24; above that the fixed bases are followed by
    24 extra rounds whose bases are drawn from an RNG seeded with ``n``.
    """
    if n < 2:
        return False
    if n < _TRIAL_BOUND:
        return n in _SMALL_PRIME_SET
    for p in SMALL_PRIMES[:25]:
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_strong_probable_prime(n, a, d, s) for a in _MR_BASES):
        return False
    if n < _MR_DETERMINISTIC_BOUND:
        return True
    rng = random.Random(n)
    return all(_strong_probable_prime(n, rng.randrange(2, n - 1), d, s)
               for _ in range(_MR_EXTRA_ROUNDS))


def valuation(n: int, p: int) -> int:
    """Exponent of the prime ``p`` in the nonzero integer ``n``."""
    if n == 0:
        raise PreconditionError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class Factorization:
    """A natural number together with its canonical prime factorization."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.value < 1:
            raise PreconditionError(f"factorizations are defined for n >= 1, got {self.value}")
        previous = 1
        for p, e in self.factors:
            if p <= previous or e < 1:
                raise PreconditionError(f"non-canonical factor list {self.factors!r}")
            previous = p
        if prod(p ** e for p, e in self.factors) != self.value:
            raise PreconditionError(f"factors {self.factors!r} do not multiply to {self.value}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], *, check_primes: bool = True) -> Factorization:
        """Build from (prime, exponent) pairs in any order; repeated primes merge."""
        merged: dict[int, int] = {}
        for p, e in pairs:
            p, e = int(p), int(e)
            if e < 1:
                raise PreconditionError(f"exponent of {p} must be >= 1, got {e}")
            if check_primes and not is_prime(p):
                raise PreconditionError(f"{p} is not prime")
            merged[p] = merged.get(p, 0) + e
        factors = tuple(sorted(merged.items()))
        return cls(prod(p ** e for p, e in factors), factors)

    @classmethod
    def parse(cls, text: str) -> Factorization:
        """Parse ``p1^e1 * p2^e2 * ...``; whitespace is ignored, ``^e`` is optional."""
        compact = re.sub(r"\s+", "", text)
        if compact == "1":
            return ONE
        if not _FACTORED_FORM.fullmatch(compact):
            raise ParseError(f"cannot parse factored form {text!r}")
        pairs = []
        for term in compact.split("*"):
            base, _, exp = term.partition("^")
            pairs.append((int(base), int(exp) if exp else 1))
        try:
            return cls.from_pairs(pairs)
        except PreconditionError as exc:
            raise ParseError(f"invalid factored form {text!r}: {exc}") from None

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(e for _, e in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    @property
    def max_exponent(self) -> int:
        return max(self.exponents, default=0)

    @property
    def is_square_free(self) -> bool:
        return self.max_exponent <= 1

    @property
    def is_cube_free(self) -> bool:
        return self.max_exponent <= 2

    @property
    def is_prime_power(self) -> bool:
        return len(self.factors) == 1


_FACTORED_FORM = re.compile(r"\d+(\^\d+)?(\*\d+(\^\d+)?)*")

ONE = Factorization(1, ())


class _Budget:
    def __init__(self, iterations: int) -> None:
        self.left = iterations

    def spend(self, k: int) -> bool:
        self.left -= k
        return self.left >= 0


def _brent_split(n: int, budget: _Budget) -> int | None:
    """A nontrivial divisor of the odd composite ``n``, or None once the budget runs out."""
    rng = random.Random(n)
    batch = 128
    while True:
        y, c = rng.randrange(1, n), rng.randrange(1, n)
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            if not budget.spend(r):
                return None
            k = 0
            while k < r and g == 1:
                ys = y
                step = min(batch, r - k)
                for _ in range(step):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                if not budget.spend(step):
                    return None
                g = gcd(q, n)
                k += step
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def _perfect_power(n: int) -> tuple[int, int] | None:
    for k in range(2, n.bit_length() + 1):
        root = _iroot(n, k)
        if root ** k == n:
            return root, k
        if root < 2:
            break
    return None


def _iroot(n: int, k: int) -> int:
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


def partial_factor(n: int, budget: int = DEFAULT_BUDGET) -> tuple[dict[int, int], list[int]]:
    """Factor as far as ``budget`` allows.

    Returns the prime powers found and the composite cofactors left unsplit
    (an empty list means the factorization is complete).
    """
    if n < 1:
        raise PreconditionError(f"factor requires n >= 1, got {n}")
    found: dict[int, int] = {}
    for p in SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    if n == 1:
        return found, []
    if n < _TRIAL_BOUND * _TRIAL_BOUND or is_prime(n):
        found[n] = found.get(n, 0) + 1
        return found, []

    pool = _Budget(budget)
    stack = [(n, 1)]
    stuck: list[int] = []
    while stack:
        m, mult = stack.pop()
        if is_prime(m):
            found[m] = found.get(m, 0) + mult
            continue
        power = _perfect_power(m)
        if power is not None:
            stack.append((power[0], mult * power[1]))
            continue
        d = None if pool.left <= 0 else _brent_split(m, pool)
        if d is None:
            stuck.extend([m] * mult)
            continue
        stack.append((d, mult))
        stack.append((m // d, mult))
    return found, sorted(stuck)


def factor(n: int, budget: int = DEFAULT_BUDGET) -> Factorization:
    """Canonical factorization of ``n >= 1``.

    Raises :class:`BudgetExceeded` when a composite part survives ``budget``
    rho iterations; the exception carries the partial result.
    """
    if n < 1:
        raise PreconditionError(f"factor requires n >= 1, got {n}")
    found, stuck = partial_factor(n, budget)
    if stuck:
        raise BudgetExceeded(
            f"factorization of {n} exceeded a budget of {budget} iterations; "
            "supply the number in factored form instead",
            found=found, cofactors=stuck,
        )
    factors = tuple(sorted(found.items()))
    return Factorization(n, factors)


def as_factorization(n: int | Factorization, budget: int = DEFAULT_BUDGET) -> Factorization:
    if isinstance(n, Factorization):
        return n
    return factor(int(n), budget)


def radical(f: Factorization | int) -> int:
    """Product of the distinct primes of ``f``; the radical of 1 is 1."""
    return prod(as_factorization(f).primes)


def mobius(f: Factorization | int) -> int:
    f = as_factorization(f)
    if not f.is_square_free:
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(f: Factorization | int) -> int:
    return prod((p - 1) * p ** (e - 1) for p, e in as_factorization(f))


def carmichael(f: Factorization | int) -> int:
    """Carmichael's function: the exponent of the group of units mod n."""
    result = 1
    for p, e in as_factorization(f):
        if p == 2 and e >= 3:
            lam = 1 << (e - 2)
        else:
            lam = (p - 1) * p ** (e - 1)
        result = result * lam // gcd(result, lam)
    return result


def smallest_prime_factors(limit: int) -> np.ndarray:
    """Table ``spf`` with ``spf[n]`` the least prime factor of n for 2 <= n <= limit."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    return spf


def iter_factorizations(limit: int, start: int = 1) -> Iterator[Factorization]:
    """Factorizations of ``start..limit`` in order, from a least-prime-factor table."""
    spf = smallest_prime_factors(limit).tolist()
    for n in range(max(start, 1), limit + 1):
        factors = []
        m = n
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        yield Factorization(n, tuple(factors))
