"""Decision criteria for arithmetic numbers.

Every criterion returns a :class:`~arithnum.verdict.Verdict`. One-sided
criteria return ``Outcome.INCONCLUSIVE`` instead of guessing. The
production path for general N is :func:`exact_valuation_criterion`. It
compares v_q(tau(N)) with v_q(sigma(N)) prime by prime, and each
v_q(sigma(p^k)) comes from lifting the exponent, so N is never expanded.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd, lcm

from .cyclotomic import (
    cyclotomic_valuation,
    mult_order,
    sigma_prime_power_valuation,
)
from .divisors import (
    SCAN_LIMIT,
    divisor_scan,
    enumerated_is_arithmetic,
    sigma,
    tau,
)
from .errors import ConsistencyError, PreconditionError
from .factorization import (
    Factorization,
    as_factorization,
    carmichael,
    factor,
    is_prime,
    radical,
    valuation,
)
from .verdict import (
    Certificate,
    Contribution,
    Criterion,
    LedgerRow,
    Outcome,
    ValuationReport,
    Verdict,
)

ARITHMETIC = Outcome.ARITHMETIC
NON_ARITHMETIC = Outcome.NON_ARITHMETIC
INCONCLUSIVE = Outcome.INCONCLUSIVE


def _decide(ok: bool) -> Outcome:
    return ARITHMETIC if ok else NON_ARITHMETIC


def _prime_power(p: int, k: int) -> Factorization:
    if k == 0:
        return Factorization(1, ())
    return Factorization(p ** k, ((p, k),))


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")


def _tau_factorization(f: Factorization) -> Factorization:
    # tau(N) = prod(n_j + 1): factor the small terms, never tau itself
    return Factorization.from_pairs(
        (pair for _, e in f for pair in factor(e + 1)), check_primes=False)


# ---------------------------------------------------------------------------
# The valuation ledger
# ---------------------------------------------------------------------------

def cyclotomic_contributions(q: int, p: int, m: int) -> list[Contribution]:
    """Indices 1 != d | m with q | Phi_d(p), each with its q-adic valuation."""
    if p % q == 0:
        return []
    t = mult_order(p, q)
    if m % t:
        return []
    out = []
    d = t
    while m % d == 0:
        if d != 1:
            v = cyclotomic_valuation(q, p, d)
            if v:
                out.append(Contribution(p, d, v))
        d *= q
    return out


def valuation_ledger(f: Factorization | int) -> ValuationReport:
    """Ledger rows for every prime q of tau(N), with the Phi_d(p_j) that supply q."""
    f = as_factorization(f)
    rows = []
    for q, tau_v in _tau_factorization(f):
        contributions: list[Contribution] = []
        total = 0
        for p, e in f:
            if p == q:
                continue  # 1 + q + ... + q^e is 1 mod q
            s = sigma_prime_power_valuation(q, p, e)
            if not s:
                continue
            parts = cyclotomic_contributions(q, p, e + 1)
            if sum(c.valuation for c in parts) != s:
                raise ConsistencyError(f"cyclotomic split of v_{q}(sigma({p}^{e})) does not add up to {s}")
            contributions.extend(parts)
            total += s
        rows.append(LedgerRow(q, tau_v, total, tuple(contributions)))
    return ValuationReport(tuple(rows))


def exact_valuation_criterion(N: Factorization | int) -> Verdict:
    """N is arithmetic iff v_q(tau(N)) <= v_q(sigma(N)) for every prime q | tau(N)."""
    N = as_factorization(N)
    report = valuation_ledger(N)
    failing = report.failing_primes
    if failing:
        row = report.row(failing[0])
        witness = (f"v_{row.prime}(tau) = {row.tau_valuation} > "
                   f"v_{row.prime}(sigma) = {row.sigma_valuation}")
    else:
        witness = "v_q(tau) <= v_q(sigma) for every prime q dividing tau"
    verdict = Verdict(N, _decide(not failing), Criterion.EXACT_VALUATION,
                      Certificate(witness, {"failing_primes": failing}))
    verdict.__dict__["ledger"] = report
    return verdict


# ---------------------------------------------------------------------------
# Prime powers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeltaProfile:
    """d_j = gcd(q_j - 1, n) for each prime q_j of n, and their lcm."""

    n: int
    factors: Factorization
    d: tuple[int, ...]
    delta: int
    mu: tuple[int, ...]


def delta_profile(n: Factorization | int) -> DeltaProfile:
    f = as_factorization(n)
    if f.value < 2:
        raise PreconditionError(f"delta profile requires n >= 2, got {f.value}")
    d = tuple(gcd(q - 1, f.value) for q in f.primes)
    delta = lcm(*d)
    mu = tuple(valuation(delta, q) for q in f.primes)
    for q, m, dj, mj in zip(f.primes, f.exponents, d, mu):
        if dj != gcd(q - 1, delta // q ** mj) or dj != gcd(q - 1, f.value // q ** m):
            raise ConsistencyError(f"gcd identities fail at q = {q} for n = {f.value}")
    if delta != gcd(f.value, carmichael(radical(f))):
        raise ConsistencyError(f"delta({f.value}) differs from gcd(n, lambda(rad n))")
    return DeltaProfile(f.value, f, d, delta, mu)


def prime_power_by_single_prime(p: int, k: int) -> Verdict:
    """k+1 = q^m a prime power: p^k is arithmetic iff q | p - 1."""
    _require_prime(p)
    if k < 1:
        raise PreconditionError(f"exponent must be >= 1, got {k}")
    g = factor(k + 1)
    if not g.is_prime_power:
        raise PreconditionError(f"k + 1 = {k + 1} is not a prime power")
    q = g.primes[0]
    ok = (p - 1) % q == 0
    witness = f"{q} {'|' if ok else '∤'} {p} − 1"
    return Verdict(_prime_power(p, k), _decide(ok), Criterion.PRIME_POWER_PROP1,
                   Certificate(witness, {"q": q, "m": g.exponents[0]}))


def prime_power_by_local_gcds(p: int, k: int) -> Verdict:
    """p^k is arithmetic iff each prime q_j of k+1 divides p^(d_j) - 1, d_j = gcd(q_j - 1, k+1)."""
    _require_prime(p)
    if k < 1:
        raise PreconditionError(f"exponent must be >= 1, got {k}")
    prof = delta_profile(k + 1)
    checks = []
    for q, dj in zip(prof.factors.primes, prof.d):
        checks.append((q, dj, pow(p, dj, q) == 1))
    failed = [c for c in checks if not c[2]]
    if failed:
        q, dj, _ = failed[0]
        witness = f"{q} ∤ {p}^{dj} − 1"
    else:
        witness = ", ".join(f"{q} | {p}^{dj} − 1" for q, dj, _ in checks)
    return Verdict(_prime_power(p, k), _decide(not failed), Criterion.PRIME_POWER_PROP2,
                   Certificate(witness, {"checks": checks}))


def prime_power_by_radical(p: int, k: int) -> Verdict:
    """p^k is arithmetic iff rad(k+1) divides p^Delta(k+1) - 1."""
    _require_prime(p)
    if k < 1:
        raise PreconditionError(f"exponent must be >= 1, got {k}")
    prof = delta_profile(k + 1)
    rad = radical(prof.factors)
    residue = (pow(p, prof.delta, rad) - 1) % rad
    ok = residue == 0
    witness = (f"rad({k + 1}) = {rad} {'|' if ok else '∤'} {p}^{prof.delta} − 1"
               + ("" if ok else f" (residue {residue})"))
    return Verdict(_prime_power(p, k), _decide(ok), Criterion.PRIME_POWER_THM2,
                   Certificate(witness, {"radical": rad, "delta": prof.delta, "residue": residue}))


def mersenne_exponent_criterion(p: int, m: int) -> Verdict:
    """Odd p with m + 1 a power of two is always arithmetic; anything else goes to the radical test."""
    _require_prime(p)
    if p == 2:
        raise PreconditionError("the base must be an odd prime")
    if m < 0:
        raise PreconditionError(f"exponent must be >= 0, got {m}")
    if (m + 1) & m == 0:
        t = (m + 1).bit_length() - 1
        witness = f"{m} + 1 = 2^{t} and 2 | {p} − 1"
        return Verdict(_prime_power(p, m), ARITHMETIC, Criterion.MERSENNE_PROP4,
                       Certificate(witness, {"power_of_two": t}))
    return prime_power_by_radical(p, m)


def odd_prime_self_power(p: int) -> Verdict:
    """p^p for odd p; the parity argument is re-checked, not assumed."""
    _require_prime(p)
    if p == 2:
        raise PreconditionError("the base must be an odd prime")
    g = factor(p + 1)
    if g.is_prime_power:
        if (p - 1) % 2:
            raise ConsistencyError(f"{p} - 1 is odd")
        witness = f"{p} + 1 = 2^{g.exponents[0]} and 2 | {p} − 1"
        facts = {"route": "power of two"}
    else:
        prof = delta_profile(g)
        rad = radical(g)
        if prof.delta % 2 or pow(p, prof.delta, rad) != 1:
            raise ConsistencyError(f"parity argument fails for {p}^{p}")
        witness = f"Delta({p + 1}) = {prof.delta} is even and {p} ≡ −1 mod every prime of {p + 1}"
        facts = {"route": "even delta", "delta": prof.delta, "radical": rad}
    return Verdict(_prime_power(p, p), ARITHMETIC, Criterion.ODD_PRIME_SELF_POWER_PROP3,
                   Certificate(witness, facts))


def nine_free_quadratic_sum(p: int) -> bool:
    """True iff 3 | 1 + p + p^2 implies 9 does not divide it."""
    _require_prime(p)
    s = 1 + p + p * p
    return s % 3 != 0 or s % 9 != 0


# ---------------------------------------------------------------------------
# Square-free and cube-free shortcuts
# ---------------------------------------------------------------------------

def square_free_criterion(f: Factorization | int) -> Verdict:
    """Odd square-free numbers are arithmetic; even ones need a prime 3 mod 4."""
    f = as_factorization(f)
    if not f.is_square_free:
        raise PreconditionError(f"{f} is not square-free")
    if f.exponent(2) == 0:
        return Verdict(f, ARITHMETIC, Criterion.SQUARE_FREE_ORE,
                       Certificate("odd square-free", {"even": False}))
    witness_primes = [p for p in f.primes if p % 4 == 3]
    if witness_primes:
        w = witness_primes[0]
        cert = Certificate(f"even square-free with {w} = 4·{(w + 1) // 4} − 1", {"prime_3_mod_4": w})
        return Verdict(f, ARITHMETIC, Criterion.SQUARE_FREE_ORE, cert)
    return Verdict(f, NON_ARITHMETIC, Criterion.SQUARE_FREE_ORE,
                   Certificate("even square-free with no prime ≡ 3 mod 4", {"prime_3_mod_4": None}))


def cube_free_criterion(f: Factorization | int) -> Verdict:
    """Cube-free N = 2^a 3^b p_1...p_r q_1^2...q_s^2 with p_i, q_i > 3.

    The whole question reduces to the power of 3 available in prod(p_i + 1)
    and, when a = 1 and b != 1, to the presence of some p_i = 3 mod 4.
    Required 3-exponents that come out <= 0 are vacuous.
    """
    f = as_factorization(f)
    if not f.is_cube_free:
        raise PreconditionError(f"{f} is not cube-free")
    a, b = f.exponent(2), f.exponent(3)
    singles = [p for p, e in f if p > 3 and e == 1]
    squares = [p for p, e in f if p > 3 and e == 2]
    alpha = sum(1 for q in squares if q % 3 == 2)
    available = sum(valuation(p + 1, 3) for p in singles)
    needs_two = False
    if a != 1:
        case, need = "a != 1", alpha + a // 2 + b // 2
    elif b != 1:
        case, need, needs_two = "a = 1, b != 1", alpha - 1 + b // 2, True
    else:
        case, need = "a = b = 1", alpha - 1
    need = max(need, 0)
    three_ok = available >= need
    four_k_minus_one = next((p for p in singles if p % 4 == 3), None)
    ok = three_ok and (not needs_two or four_k_minus_one is not None)
    if not three_ok:
        witness = f"3^{need} ∤ prod(p_i + 1) (only 3^{available} available)"
    elif needs_two and four_k_minus_one is None:
        witness = "no first-power prime p_i ≡ 3 mod 4"
    else:
        witness = f"3^{need} | prod(p_i + 1)" + (
            f" and {four_k_minus_one} ≡ 3 mod 4" if needs_two else "")
    facts = {"case": case, "a": a, "b": b, "alpha": alpha, "required_3_exponent": need,
             "available_3_exponent": available, "prime_3_mod_4": four_k_minus_one}
    return Verdict(f, _decide(ok), Criterion.CUBE_FREE_PROP5, Certificate(witness, facts))


# ---------------------------------------------------------------------------
# General N
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Theorem3Profile:
    """Index data for N = prod p_j^n_j against the primes q_i of the n_j + 1.

    ``exponents[j][i]`` is v_{q_i}(n_j + 1); ``orders[i][j]`` is
    ord_{q_i}(p_j), or None when q_i = p_j. ``J[i]`` holds the j whose order
    divides n_j + 1 and ``E[i]`` those with q_i | n_j + 1 (0-based).
    """

    subject: Factorization
    q_primes: tuple[int, ...]
    exponents: tuple[tuple[int, ...], ...]
    orders: tuple[tuple[int | None, ...], ...]
    J: tuple[frozenset[int], ...]
    E: tuple[frozenset[int], ...]


def theorem3_profile(N: Factorization | int) -> Theorem3Profile:
    N = as_factorization(N)
    q_primes = tuple(sorted({q for _, e in N for q in factor(e + 1).primes}))
    exponents = tuple(tuple(valuation(e + 1, q) for q in q_primes) for _, e in N)
    orders = tuple(
        tuple(None if p == q else mult_order(p, q) for p in N.primes) for q in q_primes)
    J = tuple(
        frozenset(j for j, (o, e) in enumerate(zip(orders[i], N.exponents))
                  if o is not None and (e + 1) % o == 0)
        for i in range(len(q_primes)))
    E = tuple(
        frozenset(j for j in range(len(N)) if exponents[j][i] >= 1) for i in range(len(q_primes)))
    return Theorem3Profile(N, q_primes, exponents, orders, J, E)


def general_criterion_as_published(N: Factorization | int, *, strict: bool = False) -> Verdict:
    """The general criterion exactly as published, kept for comparison only.

    For each q_i it demands a nonempty J(i) and
    sum_j a_ji <= sum_{J cap E} a_ji + sum_{J minus E} v_qi(sigma(p_j^n_j)).
    The count over J cap E can fall short of the true valuation, so this
    can reject arithmetic numbers (2 * 3 * 5 for example). Bases equal to a
    q_i never enter J(i), or raise when ``strict`` is set.
    """
    N = as_factorization(N)
    prof = theorem3_profile(N)
    if strict:
        overlap = sorted(set(prof.q_primes) & set(N.primes))
        if overlap:
            raise PreconditionError(f"bases {overlap} also divide some n_j + 1")
    rows = []
    failure = None
    for i, q in enumerate(prof.q_primes):
        lhs = sum(prof.exponents[j][i] for j in range(len(N)))
        J, E = prof.J[i], prof.E[i]
        rhs = sum(prof.exponents[j][i] for j in J & E)
        rhs += sum(sigma_prime_power_valuation(q, N.primes[j], N.exponents[j]) for j in J - E)
        rows.append({"q": q, "J": sorted(J), "E": sorted(E), "lhs": lhs, "rhs": rhs})
        if failure is None:
            if not J:
                failure = f"J is empty at q = {q}"
            elif lhs > rhs:
                failure = f"count bound fails at q = {q}: needs {lhs}, bound gives {rhs}"
    witness = failure or "J nonempty and count bound met at every q"
    return Verdict(N, _decide(failure is None), Criterion.THEOREM3_AS_STATED,
                   Certificate(witness, {"rows": rows}))


def unique_smallest_prime_rejection(N: Factorization | int) -> Verdict:
    """Necessary condition: if the smallest prime q of all n_j + 1 divides only n_k + 1,
    an arithmetic N needs q | p_k^(n_k+1) - 1. Never returns ARITHMETIC."""
    N = as_factorization(N)
    q_all = {q for _, e in N for q in factor(e + 1).primes}
    if not q_all:
        raise PreconditionError("N = 1 has no exponent primes")
    q1 = min(q_all)
    hits = [j for j, e in enumerate(N.exponents) if (e + 1) % q1 == 0]
    if len(hits) != 1:
        raise PreconditionError(f"{q1} divides {len(hits)} of the n_j + 1; it must divide exactly one")
    k = hits[0]
    p, e = N.factors[k]
    divides = pow(p, e + 1, q1) == 1
    facts = {"q": q1, "p": p, "exponent": e + 1}
    if divides:
        return Verdict(N, INCONCLUSIVE, Criterion.COROLLARY3_NECESSARY,
                       Certificate(f"{q1} | {p}^{e + 1} − 1", facts))
    return Verdict(N, NON_ARITHMETIC, Criterion.COROLLARY3_NECESSARY,
                   Certificate(f"{q1} ∤ {p}^{e + 1} − 1", facts))


def distinct_prime_exponents_criterion(N: Factorization | int) -> Verdict:
    """N = prod p_i^(q_i - 1) with distinct primes q_i.

    Order the components by q_i. Each q_i needs q_i | p_i - 1 or some
    earlier j with ord_{q_i}(p_j) = q_j.
    """
    N = as_factorization(N)
    plus_one = [e + 1 for e in N.exponents]
    if len(set(plus_one)) != len(plus_one) or not all(is_prime(q) for q in plus_one):
        raise PreconditionError(f"exponents + 1 of {N} are not distinct primes")
    comps = sorted(zip(plus_one, N.primes))
    fired = []
    for i, (q, p) in enumerate(comps):
        if (p - 1) % q == 0:
            fired.append({"q": q, "via": p, "reason": f"{q} | {p} − 1"})
            continue
        via = next((pj for qj, pj in comps[:i] if pj % q and mult_order(pj, q) == qj), None)
        if via is None:
            cert = Certificate(f"{q} ∤ {p} − 1 and no earlier base has order matching its exponent mod {q}",
                               {"fired": fired, "failed_q": q})
            return Verdict(N, NON_ARITHMETIC, Criterion.DISTINCT_PRIMES_PROP6, cert)
        qj = next(qq for qq, pj in comps[:i] if pj == via)
        fired.append({"q": q, "via": via, "reason": f"ord_{q}({via}) = {qj}"})
    witness = "; ".join(item["reason"] for item in fired) or "no components"
    return Verdict(N, ARITHMETIC, Criterion.DISTINCT_PRIMES_PROP6, Certificate(witness, {"fired": fired}))


def componentwise_sufficient(N: Factorization | int) -> Verdict:
    """Arithmetic if every p_j^n_j is arithmetic on its own; otherwise inconclusive."""
    N = as_factorization(N)
    failing = [(p, e) for p, e in N if not prime_power_by_radical(p, e).arithmetic]
    if failing:
        text = ", ".join(f"{p}^{e}" for p, e in failing)
        return Verdict(N, INCONCLUSIVE, Criterion.PRODUCT_COROLLARY2,
                       Certificate(f"components {text} are not arithmetic alone", {"failing": failing}))
    return Verdict(N, ARITHMETIC, Criterion.PRODUCT_COROLLARY2,
                   Certificate("every prime-power component is arithmetic", {"failing": []}))


def oracle_criterion(N: Factorization | int) -> Verdict:
    """Brute force: list the divisors and test tau | sigma."""
    N = as_factorization(N)
    if N.value <= SCAN_LIMIT:
        s, t = divisor_scan(N.value)
        ok, route = s % t == 0, "divisor scan"
    else:
        ok, route = enumerated_is_arithmetic(N), "divisor enumeration"
        s, t = sigma(N), tau(N)
    witness = f"{route}: tau = {t}, sigma mod tau = {s % t}"
    return Verdict(N, _decide(ok), Criterion.ORACLE, Certificate(witness, {"route": route}))


class Strategy(enum.Enum):
    AUTO = "auto"
    ORACLE = "oracle"
    EXACT = "exact"
    THEOREM3 = "theorem3"


def classify(N: Factorization | int, strategy: Strategy | str = Strategy.AUTO) -> Verdict:
    """Pick the cheapest applicable criterion, or the one ``strategy`` forces.

    Auto order: square-free, prime power, cube-free, then the
    unique-smallest-prime rejection followed by the exact valuation test.
    """
    N = as_factorization(N)
    strategy = Strategy(strategy)
    if strategy is Strategy.ORACLE:
        return oracle_criterion(N)
    if strategy is Strategy.EXACT:
        return exact_valuation_criterion(N)
    if strategy is Strategy.THEOREM3:
        return general_criterion_as_published(N)
    if N.is_square_free:
        return square_free_criterion(N)
    if N.is_prime_power:
        (p, k), = N.factors
        return prime_power_by_radical(p, k)
    if N.is_cube_free:
        return cube_free_criterion(N)
    try:
        quick = unique_smallest_prime_rejection(N)
    except PreconditionError:
        quick = None
    if quick is not None and quick.outcome is NON_ARITHMETIC:
        return quick
    return exact_valuation_criterion(N)


__all__ = [
    "DeltaProfile", "Strategy", "Theorem3Profile", "classify", "componentwise_sufficient",
    "cube_free_criterion", "cyclotomic_contributions", "delta_profile",
    "distinct_prime_exponents_criterion", "exact_valuation_criterion",
    "general_criterion_as_published", "mersenne_exponent_criterion", "nine_free_quadratic_sum",
    "odd_prime_self_power", "oracle_criterion", "prime_power_by_local_gcds",
    "prime_power_by_radical", "prime_power_by_single_prime", "square_free_criterion",
    "theorem3_profile", "unique_smallest_prime_rejection", "valuation_ledger",
]
