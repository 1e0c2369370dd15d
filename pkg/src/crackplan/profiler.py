"""Per-rule match statistics for a corpus.

Two attributions are kept side by side: *exclusive* (a password belongs to the
first rule that matches it, in catalog order) and *independent* (every rule
that matches it).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterator

from .corpus import open_passwords
from .ruledsl import Matcher, RuleCatalog
from .signatures import SignatureHistogram, compute_signatures

TRACE_LIMIT = 10_000


class CatalogMismatch(ValueError):
    pass


@dataclass(frozen=True)
class MatchProfile:
    names: tuple[str, ...]  # attribution order
    exclusive: tuple[int, ...]
    independent: tuple[int, ...]
    total: int
    unmatched: int

    @classmethod
    def zero(cls, names) -> "MatchProfile":
        names = tuple(names)
        z = (0,) * len(names)
        return cls(names, z, z, 0, 0)

    @property
    def matched(self) -> int:
        return self.total - self.unmatched

    def exclusive_of(self, name: str) -> int:
        return self.exclusive[self.names.index(name)]

    def independent_of(self, name: str) -> int:
        return self.independent[self.names.index(name)]

    def to_dict(self) -> dict:
        pct = percentages(self) if self.total else {n: None for n in self.names}
        return {
            "attribution_order": list(self.names),
            "total": self.total,
            "matched": self.matched,
            "unmatched": self.unmatched,
            "rules": [
                {"rule": n, "exclusive": e, "independent": i, "exclusive_pct": pct[n]}
                for n, e, i in zip(self.names, self.exclusive, self.independent)
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rule", "exclusive", "independent", "exclusive_pct"])
        for row in self.to_dict()["rules"]:
            w.writerow([row["rule"], row["exclusive"], row["independent"],
                        "" if row["exclusive_pct"] is None else f"{row['exclusive_pct']:.1f}"])
        return buf.getvalue()


def profile_histogram(hist: SignatureHistogram) -> MatchProfile:
    n = len(hist.names)
    excl = [0] * n
    indep = [0] * n
    unmatched = 0
    for mask, c in hist.counts.items():
        if not mask:
            unmatched += c
            continue
        excl[(mask & -mask).bit_length() - 1] += c
        i = 0
        while mask:
            if mask & 1:
                indep[i] += c
            mask >>= 1
            i += 1
    return MatchProfile(hist.names, tuple(excl), tuple(indep), hist.total, unmatched)


def profile(catalog: RuleCatalog, corpus, workers: int = 1) -> MatchProfile:
    if not len(catalog):
        raise ValueError("catalog is empty")
    return profile_histogram(compute_signatures(catalog.rules, corpus, workers=workers))


def merge(a: MatchProfile, b: MatchProfile) -> MatchProfile:
    if a.names != b.names:
        raise CatalogMismatch("profiles were computed under different catalogs")
    return MatchProfile(
        a.names,
        tuple(x + y for x, y in zip(a.exclusive, b.exclusive)),
        tuple(x + y for x, y in zip(a.independent, b.independent)),
        a.total + b.total,
        a.unmatched + b.unmatched,
    )


def round_pct(count: int, total: int) -> float:
    """``100 * count / total`` rounded half-up to one decimal, in exact integers."""
    tenths = (2000 * count + total) // (2 * total)
    return tenths / 10


def percentages(profile: MatchProfile) -> dict[str, float]:
    if profile.total == 0:
        raise ValueError("percentages of an empty profile")
    return {n: round_pct(e, profile.total) for n, e in zip(profile.names, profile.exclusive)}


def trace(catalog: RuleCatalog, corpus, limit: int = TRACE_LIMIT) -> Iterator[tuple[int, bytes, str | None]]:
    """Yield ``(line_no, password, first matching rule)``; refuses corpora over `limit`."""
    matchers = [Matcher(r) for r in catalog]
    for i, rec in enumerate(open_passwords(corpus)):
        if i >= limit:
            raise ValueError(f"per-password trace is limited to {limit} records")
        hit = next((m.pattern.name for m in matchers if m(rec.bytes)), None)
        yield rec.line_no, rec.bytes, hit
