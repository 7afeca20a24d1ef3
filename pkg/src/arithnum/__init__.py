"""Decide, certify and enumerate arithmetic numbers.

A positive integer n is arithmetic when the mean of its divisors,
sigma(n)/tau(n), is an integer.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .characterization import Strategy, classify, exact_valuation_criterion, valuation_ledger
from .cyclotomic import (
    classify_cyclotomic_factors,
    cyclotomic_eval,
    lte_valuation,
    mult_order,
    sigma_prime_power_valuation,
    theorem1_check,
)
from .divisors import mean_of_divisors, oracle_is_arithmetic, prime_power_mean, sigma, tau
from .errors import (
    ArithnumError,
    BudgetExceeded,
    ConsistencyError,
    CyclotomicConsistencyError,
    NotCoprimeError,
    ParseError,
    PreconditionError,
)
from .factorization import Factorization, factor, is_prime, mobius, radical
from .sieve import density_report, discrepancy_scan, enumerate_arithmetic
from .verdict import Criterion, Outcome, Verdict

__all__ = [
    "ArithnumError", "BudgetExceeded", "ConsistencyError", "Criterion", "CyclotomicConsistencyError",
    "Factorization", "NotCoprimeError", "Outcome", "ParseError", "PreconditionError", "Strategy",
    "Verdict", "classify", "classify_cyclotomic_factors", "cyclotomic_eval", "density_report",
    "discrepancy_scan", "enumerate_arithmetic", "exact_valuation_criterion", "factor", "is_prime",
    "lte_valuation", "mean_of_divisors", "mobius", "mult_order", "oracle_is_arithmetic",
    "prime_power_mean", "radical", "sigma", "sigma_prime_power_valuation", "tau", "theorem1_check",
    "valuation_ledger",
]
