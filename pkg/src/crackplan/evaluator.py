"""Iteration-cost model for rule orders.

A password costs the 1-based position of the first rule that matches it;
a password no rule matches costs the full order length.  Corpus cost is the
sum over passwords.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

from .ruledsl import Matcher, RuleCatalog
from .signatures import SignatureHistogram, compute_signatures

DEFAULT_RATE = 80.0  # guesses per second


class RuleSetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class EvaluationReport:
    order_id: str
    names: tuple[str, ...]
    total: int
    matched: int
    total_iterations: int
    per_position: tuple[int, ...]
    corpus_fingerprint: dict | None = field(default=None, compare=False)

    @property
    def coverage(self) -> float:
        return self.matched / self.total if self.total else 0.0

    @property
    def unmatched(self) -> int:
        return self.total - self.matched

    def to_dict(self) -> dict:
        return {
            "order_id": self.order_id,
            "corpus_fingerprint": self.corpus_fingerprint,
            "total": self.total,
            "matched": self.matched,
            "coverage_pct": round(100 * self.coverage, 4),
            "total_iterations": self.total_iterations,
            "per_position": [
                {"position": i + 1, "rule": n, "matched": c}
                for i, (n, c) in enumerate(zip(self.names, self.per_position))
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["order", "total", "matched", "coverage_pct", "total_iterations"])
        w.writerow([self.order_id, self.total, self.matched,
                    f"{100 * self.coverage:.2f}", self.total_iterations])
        return buf.getvalue()


@dataclass(frozen=True)
class PrefixRow:
    k: int
    matched: int
    pct: float
    iterations: int


@dataclass(frozen=True)
class PrefixReport:
    order_id: str
    total: int
    rows: tuple[PrefixRow, ...]

    def to_dict(self) -> dict:
        return {
            "order_id": self.order_id,
            "total": self.total,
            "rows": [{"k": r.k, "matched": r.matched, "pct": round(100 * r.pct, 4),
                      "iterations": r.iterations} for r in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["order", "rules", "matched", "pct", "iterations"])
        for r in self.rows:
            w.writerow([self.order_id, r.k, r.matched, f"{100 * r.pct:.4f}", r.iterations])
        return buf.getvalue()


@dataclass(frozen=True)
class Comparison:
    order_a: str
    order_b: str
    iterations_a: int
    iterations_b: int
    matched_a: int
    matched_b: int
    total: int

    @property
    def efficiency(self) -> float:
        """Fraction of order A's iterations that order B saves."""
        if self.iterations_a == 0:
            return 0.0
        return 1 - self.iterations_b / self.iterations_a

    def to_dict(self) -> dict:
        return {
            "order_a": self.order_a,
            "order_b": self.order_b,
            "total": self.total,
            "matched_a": self.matched_a,
            "matched_b": self.matched_b,
            "iterations_a": self.iterations_a,
            "iterations_b": self.iterations_b,
            "efficiency": self.efficiency,
            "efficiency_pct": round(100 * self.efficiency, 2),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["order_a", "order_b", "iterations_a", "iterations_b", "efficiency_pct"])
        w.writerow([self.order_a, self.order_b, self.iterations_a, self.iterations_b,
                    f"{100 * self.efficiency:.2f}"])
        return buf.getvalue()


@dataclass(frozen=True)
class Duration:
    seconds: float

    @property
    def minutes(self) -> float:
        return self.seconds / 60

    @property
    def hours(self) -> float:
        return self.seconds / 3600

    def to_dict(self) -> dict:
        return {"seconds": self.seconds, "minutes": self.minutes, "hours": self.hours}


def _order_id(order) -> str:
    return getattr(order, "label", "") or "order"


def iteration_cost(order: RuleCatalog, password: bytes) -> int:
    if not len(order):
        raise ValueError("order is empty")
    for i, rule in enumerate(order, 1):
        if Matcher(rule)(password):
            return i
    return len(order)


def evaluate_histogram(names: Sequence[str], hist: SignatureHistogram, order_id: str = "order",
                       k: int | None = None) -> EvaluationReport:
    """Score `names` (optionally only its first `k` rules) against a histogram."""
    names = tuple(names)
    if k is not None:
        names = names[:k]
    if not names:
        raise ValueError("order is empty")
    firsts = hist.first_positions(names)
    per_pos = [0] * len(names)
    iterations = 0
    for pos, c in firsts.items():
        if pos is None:
            iterations += c * len(names)
        else:
            per_pos[pos - 1] += c
            iterations += c * pos
    matched = hist.total - firsts.get(None, 0)
    return EvaluationReport(order_id, names, hist.total, matched, iterations,
                            tuple(per_pos), hist.fingerprint)


def evaluate(order: RuleCatalog, corpus, workers: int = 1) -> EvaluationReport:
    if not len(order):
        raise ValueError("order is empty")
    hist = compute_signatures(order.rules, corpus, workers=workers)
    return evaluate_histogram(order.names, hist, _order_id(order))


def prefix_histogram(names: Sequence[str], hist: SignatureHistogram, ks: Sequence[int],
                     order_id: str = "order") -> PrefixReport:
    rows = []
    for k in ks:
        if k <= 0:
            raise ValueError("prefix size must be >= 1")
        if k > len(names):
            raise ValueError(f"prefix size {k} exceeds order length {len(names)}")
        rep = evaluate_histogram(names, hist, order_id, k=k)
        rows.append(PrefixRow(k, rep.matched, rep.coverage, rep.total_iterations))
    return PrefixReport(order_id, hist.total, tuple(rows))


def prefix_analysis(order: RuleCatalog, corpus, ks: Sequence[int], workers: int = 1) -> PrefixReport:
    hist = compute_signatures(order.rules, corpus, workers=workers)
    return prefix_histogram(order.names, hist, ks, _order_id(order))


def compare_histogram(names_a, names_b, hist: SignatureHistogram,
                      id_a: str = "a", id_b: str = "b") -> Comparison:
    if sorted(names_a) != sorted(names_b):
        raise RuleSetMismatch("orders do not cover the same rule set")
    ra = evaluate_histogram(names_a, hist, id_a)
    rb = evaluate_histogram(names_b, hist, id_b)
    if ra.matched != rb.matched:  # pragma: no cover - permutation invariance
        raise AssertionError("matched counts differ between permutations")
    return Comparison(id_a, id_b, ra.total_iterations, rb.total_iterations,
                      ra.matched, rb.matched, hist.total)


def compare(order_a: RuleCatalog, order_b: RuleCatalog, corpus, workers: int = 1) -> Comparison:
    if sorted(order_a.names) != sorted(order_b.names):
        raise RuleSetMismatch("orders do not cover the same rule set")
    if any(order_b.by_name(r.name) != r for r in order_a):
        raise RuleSetMismatch("orders define a shared rule name differently")
    hist = compute_signatures(order_a.rules, corpus, workers=workers)
    return compare_histogram(order_a.names, order_b.names, hist, _order_id(order_a), _order_id(order_b))


def time_estimate(iterations: int, rate: float = DEFAULT_RATE) -> Duration:
    if rate <= 0:
        raise ValueError("guess rate must be positive")
    return Duration(iterations / rate)
