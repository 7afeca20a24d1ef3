"""Verdicts, certificates and their text/JSON renderings."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any

from .factorization import Factorization

# str(int) refuses very long integers on recent interpreters; past this many
# bits the mean is summarized instead of printed.
_MAX_PRINTED_BITS = 12_000


class Outcome(enum.Enum):
    ARITHMETIC = "arithmetic"
    NON_ARITHMETIC = "non-arithmetic"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value


class Criterion(enum.Enum):
    ORACLE = "Oracle"
    PRIME_POWER_PROP1 = "PrimePowerProp1"
    PRIME_POWER_PROP2 = "PrimePowerProp2"
    PRIME_POWER_THM2 = "PrimePowerThm2"
    SQUARE_FREE_ORE = "SquareFreeOre"
    CUBE_FREE_PROP5 = "CubeFreeProp5"
    THEOREM3_AS_STATED = "Theorem3AsStated"
    EXACT_VALUATION = "ExactValuation"
    COROLLARY3_NECESSARY = "Corollary3Necessary"
    MERSENNE_PROP4 = "MersenneProp4"
    ODD_PRIME_SELF_POWER_PROP3 = "OddPrimeSelfPowerProp3"
    PRODUCT_COROLLARY2 = "ProductCorollary2"
    DISTINCT_PRIMES_PROP6 = "DistinctPrimesProp6"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Contribution:
    """Phi_index(base) contributes ``valuation`` powers of the ledger prime."""

    base: int
    index: int
    valuation: int


@dataclass(frozen=True)
class LedgerRow:
    prime: int
    tau_valuation: int
    sigma_valuation: int
    contributions: tuple[Contribution, ...] = ()

    @property
    def satisfied(self) -> bool:
        return self.sigma_valuation >= self.tau_valuation

    def to_dict(self) -> dict[str, Any]:
        return {
            "q": self.prime,
            "v_q_tau": self.tau_valuation,
            "v_q_sigma": self.sigma_valuation,
            "contributing": [{"p": c.base, "d": c.index, "valuation": c.valuation}
                             for c in self.contributions],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> LedgerRow:
        return cls(
            int(data["q"]), int(data["v_q_tau"]), int(data["v_q_sigma"]),
            tuple(Contribution(int(c["p"]), int(c["d"]), int(c["valuation"]))
                  for c in data["contributing"]),
        )


@dataclass(frozen=True)
class ValuationReport:
    """Per-prime comparison of v_q(tau(N)) with v_q(sigma(N)) over every q | tau(N)."""

    rows: tuple[LedgerRow, ...]

    @property
    def holds(self) -> bool:
        return all(row.satisfied for row in self.rows)

    @property
    def failing_primes(self) -> list[int]:
        return [row.prime for row in self.rows if not row.satisfied]

    def row(self, q: int) -> LedgerRow:
        for r in self.rows:
            if r.prime == q:
                return r
        raise KeyError(q)


@dataclass(frozen=True)
class Certificate:
    """Human-readable witness plus the structured facts behind it."""

    witness: str
    facts: dict[str, Any] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Verdict:
    subject: Factorization
    outcome: Outcome
    criterion: Criterion
    certificate: Certificate

    @property
    def arithmetic(self) -> bool | None:
        """True/False for decisive outcomes, None when inconclusive."""
        if self.outcome is Outcome.INCONCLUSIVE:
            return None
        return self.outcome is Outcome.ARITHMETIC

    @cached_property
    def ledger(self) -> ValuationReport:
        # deferred: bulk scans never pay for ledgers nobody reads
        from .characterization import valuation_ledger
        return valuation_ledger(self.subject)

    @cached_property
    def mean(self) -> Fraction:
        from .divisors import mean_of_divisors
        return mean_of_divisors(self.subject)


def format_int(n: int) -> str:
    if n.bit_length() > _MAX_PRINTED_BITS:
        return f"<{n.bit_length()}-bit integer>"
    return str(n)


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return format_int(x.numerator)
    return f"{format_int(x.numerator)}/{format_int(x.denominator)}"


def summary_line(verdict: Verdict) -> str:
    if verdict.subject.value == 1:  # no criterion is needed for the empty product
        return f"{verdict.outcome}: A = 1"
    return f"{verdict.outcome} ({verdict.criterion}): A = {format_rational(verdict.mean)}"


def _format_contributions(row: LedgerRow) -> str:
    if not row.contributions:
        return "-"
    return ", ".join(f"({c.base}, {c.index}):{c.valuation}" for c in row.contributions)


def render_ledger(report: ValuationReport) -> str:
    lines = ["q | v_q(tau) | v_q(sigma) | contributing (p_j, d) pairs"]
    for row in report.rows:
        lines.append(f"{row.prime} | {row.tau_valuation} | {row.sigma_valuation} | {_format_contributions(row)}")
    return "\n".join(lines)


def render_certificate(verdict: Verdict, input_text: str | None = None) -> str:
    """Structured text: criterion, verdict, witness and the valuation ledger table."""
    lines = [
        f"input: {input_text if input_text is not None else verdict.subject}",
        f"factorization: {verdict.subject}",
        f"criterion: {verdict.criterion}",
        f"verdict: {verdict.outcome}",
        f"mean: {format_rational(verdict.mean)}",
        f"witness: {verdict.certificate.witness}",
        render_ledger(verdict.ledger),
    ]
    return "\n".join(lines)


@dataclass(frozen=True)
class VerdictDocument:
    """The JSON form of a verdict; field order is fixed."""

    input: str
    verdict: str
    criterion: str
    mean: str
    certificate: tuple[LedgerRow, ...]
    witness: str

    @classmethod
    def from_verdict(cls, verdict: Verdict, input_text: str | None = None) -> VerdictDocument:
        return cls(
            input=input_text if input_text is not None else str(verdict.subject),
            verdict=verdict.outcome.value,
            criterion=verdict.criterion.value,
            mean=format_rational(verdict.mean),
            certificate=verdict.ledger.rows,
            witness=verdict.certificate.witness,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "input": self.input,
            "verdict": self.verdict,
            "criterion": self.criterion,
            "mean": self.mean,
            "certificate": [row.to_dict() for row in self.certificate],
            "witness": self.witness,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> VerdictDocument:
        data = json.loads(text)
        expected = ["input", "verdict", "criterion", "mean", "certificate", "witness"]
        if list(data) != expected:
            raise ValueError(f"unexpected verdict fields {list(data)}; expected {expected}")
        Outcome(data["verdict"])
        Criterion(data["criterion"])
        return cls(
            input=data["input"],
            verdict=data["verdict"],
            criterion=data["criterion"],
            mean=data["mean"],
            certificate=tuple(LedgerRow.from_dict(r) for r in data["certificate"]),
            witness=data["witness"],
        )
