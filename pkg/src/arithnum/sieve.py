"""Bulk enumeration of arithmetic numbers, density tables and discrepancy scans.

The divisor-sum sieve works on independent segments [lo, hi). Inside a
segment every pair d <= e with d*e = n adds d + e to sigma(n) and 2 to tau(n),
so only divisors up to sqrt(hi) are visited. Segments share nothing, and
results are stitched back by index. Serial, threaded and differently chunked
runs therefore produce identical bits.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

import numpy as np

from .characterization import exact_valuation_criterion, general_criterion_as_published
from .divisors import MAX_ENUMERATED_DIVISORS, enumerated_is_arithmetic, tau
from .errors import ConsistencyError, PreconditionError
from .factorization import Factorization, iter_factorizations

MAX_LIMIT = 10 ** 8
DEFAULT_SEGMENT = 1 << 20
_INT64_MAX = (1 << 63) - 1


def _check_limit(limit: int) -> None:
    if limit < 1:
        raise PreconditionError(f"limit must be >= 1, got {limit}")
    if limit > MAX_LIMIT:
        raise PreconditionError(f"limit {limit} exceeds the sieve maximum {MAX_LIMIT}")
    # sigma(n) < n (1 + ln n) bounds every accumulator
    if limit * (1 + math.log(limit)) >= _INT64_MAX:
        raise PreconditionError(f"sigma could overflow 64 bits below {limit}")


def sieve_segment(lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """sigma and tau for every n in [lo, hi) as int64 arrays."""
    if lo < 1 or hi <= lo:
        raise PreconditionError(f"bad segment [{lo}, {hi})")
    size = hi - lo
    sig = np.zeros(size, dtype=np.int64)
    cnt = np.zeros(size, dtype=np.int64)
    for d in range(1, isqrt(hi - 1) + 1):
        k0 = max(d, -(-lo // d))
        k1 = (hi - 1) // d
        if k0 > k1:
            continue
        start = d * k0 - lo
        stop = d * k1 - lo + 1
        sig[start:stop:d] += d + np.arange(k0, k1 + 1, dtype=np.int64)
        cnt[start:stop:d] += 2
        square = d * d
        if lo <= square < hi:
            sig[square - lo] -= d
            cnt[square - lo] -= 1
    if sig.size and sig.min() <= 0:
        raise ConsistencyError("divisor sums overflowed")
    return sig, cnt


@dataclass(frozen=True)
class DecadeRow:
    upper: int
    count: int
    density: Fraction


@dataclass(frozen=True)
class SieveStats:
    limit: int
    arithmetic_count: int
    per_decade: tuple[DecadeRow, ...]
    non_arithmetic_count: int

    def __post_init__(self) -> None:
        if self.arithmetic_count + self.non_arithmetic_count != self.limit:
            raise ConsistencyError("counts do not cover the range")
        if sum(r.count for r in self.per_decade) != self.arithmetic_count:
            raise ConsistencyError("decade counts do not add up")

    def cumulative_density(self, bound: int) -> Fraction:
        """Fraction of 1..bound that is arithmetic; ``bound`` must be a decade boundary."""
        total = 0
        for row in self.per_decade:
            total += row.count
            if row.upper == bound:
                return Fraction(total, bound)
        raise KeyError(f"{bound} is not a decade boundary of this table")

    @property
    def increasing_trend(self) -> bool:
        """Last decade denser than the first."""
        return self.per_decade[-1].density > self.per_decade[0].density


@dataclass
class ArithmeticSieve:
    """Sieve output: ``bits[n]`` is True iff n is arithmetic (index 0 unused)."""

    limit: int
    bits: np.ndarray
    stats: SieveStats
    sigma: np.ndarray | None = field(default=None, repr=False)
    tau: np.ndarray | None = field(default=None, repr=False)

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def __contains__(self, n: int) -> bool:
        return 1 <= n <= self.limit and bool(self.bits[n])

    def density(self, bound: int) -> Fraction:
        """Exact density of arithmetic numbers in 1..bound for any bound <= limit."""
        if not 1 <= bound <= self.limit:
            raise PreconditionError(f"bound must lie in [1, {self.limit}]")
        return Fraction(int(np.count_nonzero(self.bits[1:bound + 1])), bound)


def decade_bounds(limit: int) -> list[int]:
    bounds = []
    b = 10
    while b < limit:
        bounds.append(b)
        b *= 10
    bounds.append(limit)
    return bounds


def _stats(bits: np.ndarray, limit: int) -> SieveStats:
    cum = np.cumsum(bits, dtype=np.int64)
    rows = []
    prev_bound, prev_count = 0, 0
    for ub in decade_bounds(limit):
        total = int(cum[ub])
        rows.append(DecadeRow(ub, total - prev_count, Fraction(total - prev_count, ub - prev_bound)))
        prev_bound, prev_count = ub, total
    count = int(cum[limit])
    return SieveStats(limit, count, tuple(rows), limit - count)


def enumerate_arithmetic(limit: int, *, segment: int = DEFAULT_SEGMENT, workers: int = 1,
                         keep_values: bool = False) -> ArithmeticSieve:
    """Mark every arithmetic n <= limit (at most 10^8).

    ``workers > 1`` runs the segments on a thread pool; ``keep_values``
    retains the sigma and tau arrays (needed for CSV dumps).
    """
    _check_limit(limit)
    if segment < 1:
        raise PreconditionError("segment size must be positive")
    ranges = [(lo, min(lo + segment, limit + 1)) for lo in range(1, limit + 1, segment)]
    bits = np.zeros(limit + 1, dtype=bool)
    sig_all = np.zeros(limit + 1, dtype=np.int64) if keep_values else None
    tau_all = np.zeros(limit + 1, dtype=np.int64) if keep_values else None

    def run(bounds: tuple[int, int]):
        lo, hi = bounds
        s, t = sieve_segment(lo, hi)
        return lo, hi, s, t

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(run, ranges)
            for lo, hi, s, t in results:
                bits[lo:hi] = s % t == 0
                if keep_values:
                    sig_all[lo:hi], tau_all[lo:hi] = s, t
    else:
        for lo, hi, s, t in map(run, ranges):
            bits[lo:hi] = s % t == 0
            if keep_values:
                sig_all[lo:hi], tau_all[lo:hi] = s, t
    return ArithmeticSieve(limit, bits, _stats(bits, limit), sig_all, tau_all)


def first_arithmetic(count: int) -> list[int]:
    """The first ``count`` arithmetic numbers."""
    limit = max(16, 2 * count)
    while True:
        members = enumerate_arithmetic(limit).members()
        if len(members) >= count:
            return [int(n) for n in members[:count]]
        limit *= 2


def density_report(limit: int, **kwargs) -> SieveStats:
    if limit < 1000:
        raise PreconditionError(f"density reports need limit >= 1000, got {limit}")
    return enumerate_arithmetic(limit, **kwargs).stats


def format_density(x: Fraction, places: int = 6) -> str:
    """Decimal rendering rounded half-to-even, computed exactly."""
    scale = 10 ** places
    q, r = divmod(x.numerator * scale, x.denominator)
    twice = 2 * r
    if twice > x.denominator or (twice == x.denominator and q % 2):
        q += 1
    whole, frac = divmod(q, scale)
    return f"{whole}.{frac:0{places}d}"


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def enumeration_csv(result: ArithmeticSieve, *, include_all: bool = False) -> str:
    """``n,sigma,tau,arithmetic`` rows; only arithmetic n unless ``include_all``."""
    if result.sigma is None or result.tau is None:
        raise PreconditionError("enumeration CSV needs a sieve run with keep_values=True")
    ns = range(1, result.limit + 1) if include_all else (int(n) for n in result.members())
    rows = ((n, int(result.sigma[n]), int(result.tau[n]), "true" if result.bits[n] else "false")
            for n in ns)
    return _csv_text(["n", "sigma", "tau", "arithmetic"], rows)


def density_csv(stats: SieveStats) -> str:
    return _csv_text(["decade", "count", "density"],
                     ((r.upper, r.count, format_density(r.density)) for r in stats.per_decade))


@dataclass(frozen=True)
class DiscrepancyRecord:
    subject: Factorization
    oracle: bool | None
    exact: bool
    theorem3: bool | None

    @property
    def agree(self) -> bool:
        verdicts = {v for v in (self.oracle, self.exact, self.theorem3) if v is not None}
        return len(verdicts) == 1

    @property
    def oracle_vs_exact(self) -> bool:
        """True when oracle and exact criterion disagree (an internal inconsistency)."""
        return self.oracle is not None and self.oracle != self.exact


def _record(f: Factorization, oracle: bool | None) -> DiscrepancyRecord:
    exact = exact_valuation_criterion(f).arithmetic
    theorem3 = general_criterion_as_published(f).arithmetic
    return DiscrepancyRecord(f, oracle, exact, theorem3)


def discrepancy_scan(limit: int, extra: Iterable[Factorization] = ()) -> list[DiscrepancyRecord]:
    """Compare the oracle, the exact criterion and the published general criterion.

    Every n <= limit uses the sieve as its oracle. Supplied factorizations use
    divisor enumeration when they have at most 10^6 divisors, and otherwise
    have no oracle verdict. Only disagreeing records are returned.
    """
    records = []
    if limit >= 1:
        bits = enumerate_arithmetic(limit).bits
        for f in iter_factorizations(limit):
            rec = _record(f, bool(bits[f.value]))
            if not rec.agree:
                records.append(rec)
    for f in extra:
        oracle = enumerated_is_arithmetic(f) if tau(f) <= MAX_ENUMERATED_DIVISORS else None
        rec = _record(f, oracle)
        if not rec.agree:
            records.append(rec)
    return records
