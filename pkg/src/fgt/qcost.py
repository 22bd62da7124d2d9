"""Idealized quantum-time cost model.

Search predicates execute classically and deterministically; only the cost
accounting follows the quantum formulas: plain search costs ceil(sqrt(N)),
threshold search ceil(sqrt(delta * N)), and variable-time search the root of
the exact sum of squared per-item costs.

Ledger events are exact rationals (floats convert losslessly), so totals are
reproducible bit-for-bit regardless of charge order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EmptyDomain


def ceil_sqrt(x: int) -> int:
    """Integer ceiling of sqrt(x), exact for arbitrary precision ints."""
    if x < 0:
        raise ValueError("negative operand")
    s = math.isqrt(x)
    return s if s * s == x else s + 1


def ceil_log2(x: int) -> int:
    """Integer ceiling of log2(x) for x >= 1."""
    if x < 1:
        raise ValueError("operand must be >= 1")
    return (x - 1).bit_length()


def grover_cost(n: int, t_eval=1):
    """Unstructured-search cost: ceil(sqrt(n)) evaluations of cost t_eval."""
    if n < 1:
        raise EmptyDomain("search domain is empty")
    return ceil_sqrt(n) * t_eval


def threshold_grover_cost(n: int, delta: int) -> int:
    """Cost of deciding whether at least `delta` of n candidates are marked."""
    if n < 1:
        raise EmptyDomain("search domain is empty")
    if delta < 1:
        raise ValueError("delta must be >= 1 (callers treat 0 as a free yes)")
    return ceil_sqrt(delta * n)


def boost_factor(n: int) -> int:
    """Polylog repetition multiplier: ceil(log2 n) * ceil(log2 log2 max(n, 4))."""
    outer = ceil_log2(max(n, 1))
    inner = math.log2(max(n, 4))
    return outer * math.ceil(math.log2(inner) - 1e-12)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(float(x))


def vtgs_cost_sq(costs) -> Fraction:
    """Exact sum of squared per-item costs (the quantity under the root)."""
    costs = list(costs)
    if not costs:
        raise EmptyDomain("variable-time search over an empty domain")
    total = Fraction(0)
    for t in costs:
        f = _as_fraction(t)
        if f < 0:
            raise ValueError("per-item costs must be nonnegative")
        total += f * f
    return total


def vtgs_cost(costs) -> float:
    """Variable-time search cost sqrt(sum t_i^2), rooted from the exact square."""
    return math.sqrt(vtgs_cost_sq(costs))


@dataclass
class CostLedger:
    """Deterministic accumulator of abstract time units.

    `total` is the exact rational sum of all logged event costs.  Variable-
    time search events additionally accumulate their exact squared sums in
    `vtgs_sq` so identity tests need no float round-off allowance.  With
    `boost_enabled`, every charge that declares an instance size is scaled by
    the polylog factor `boost_factor(size)`.
    """

    omega_model: float = 2.3728
    boost_enabled: bool = False
    events: list[tuple[str, Fraction]] = field(default_factory=list)
    vtgs_sq: Fraction = Fraction(0)

    @property
    def total(self) -> Fraction:
        return sum((c for _, c in self.events), Fraction(0))

    @property
    def total_float(self) -> float:
        return float(self.total)

    def charge(self, label: str, cost, size: int | None = None) -> Fraction:
        """Log one event; returns the (possibly boosted) charged amount."""
        amount = _as_fraction(cost)
        if amount < 0:
            raise ValueError("costs must be nonnegative")
        if self.boost_enabled and size is not None:
            amount *= boost_factor(size)
        self.events.append((label, amount))
        return amount

    def merge_in(self, other: "CostLedger") -> "CostLedger":
        """Concatenate event logs and accumulate exact squared sums."""
        self.events.extend(other.events)
        self.vtgs_sq += other.vtgs_sq
        return self

    def to_json_dict(self) -> dict:
        return {
            "total": float(self.total),
            "total_sq_exact": str(self.vtgs_sq),
            "omega_model": self.omega_model,
            "boost": self.boost_enabled,
            "events": [[label, float(cost)] for label, cost in self.events],
        }


def merge_ledgers(a: CostLedger, b: CostLedger) -> CostLedger:
    """Associative, commutative-up-to-log-order ledger merge."""
    out = CostLedger(omega_model=a.omega_model, boost_enabled=a.boost_enabled)
    out.merge_in(a)
    out.merge_in(b)
    return out


def vtgs_execute(domain_size: int, evaluator, ledger: CostLedger | None = None,
                 label: str = "vtgs", boost_size: int | None = None):
    """Run a variable-time search classically over [0, domain_size).

    Every index is evaluated (the model charges the full cost whether or not
    a witness exists); the smallest witness index is returned.  The charge is
    exactly the root-sum-of-squares of the per-index costs.

    Returns (witness index or None, delta ledger holding the single event).
    """
    if domain_size < 1:
        raise EmptyDomain("variable-time search over an empty domain")
    witness = None
    sq = Fraction(0)
    for i in range(domain_size):
        hit, cost = evaluator(i)
        f = _as_fraction(cost)
        if f < 0:
            raise ValueError(f"negative cost at index {i}")
        sq += f * f
        if hit and witness is None:
            witness = i
    delta = CostLedger(
        omega_model=ledger.omega_model if ledger else 2.3728,
        boost_enabled=ledger.boost_enabled if ledger else False,
    )
    delta.charge(label, math.sqrt(sq), size=boost_size)
    delta.vtgs_sq = sq
    if ledger is not None:
        ledger.merge_in(delta)
    return witness, delta
