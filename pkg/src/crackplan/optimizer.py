"""Rule-order construction.

Ordering rules to minimise total iterations is min-sum set cover: each rule
"covers" the passwords it matches and every password pays the position of its
first covering rule.  The greedy strategy (pick the rule covering the most
still-uncovered passwords) is a 4-approximation; exhaustive search is kept
for small catalogs as a test oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations
from pathlib import Path
from typing import Sequence

from .ruledsl import RuleCatalog, save_catalog
from .signatures import SignatureHistogram, compute_signatures

PROVENANCES = ("preset", "frequency", "greedy", "exhaustive")
EXHAUSTIVE_LIMIT = 8


class CatalogTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class RuleOrder(RuleCatalog):
    provenance: str = "preset"

    def __post_init__(self):
        super().__post_init__()
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")


def as_order(catalog: RuleCatalog, names: Sequence[str], provenance: str, label: str = "") -> RuleOrder:
    reordered = catalog.reorder(names)
    return RuleOrder(reordered.rules, label=label or provenance, provenance=provenance)


def _histogram(catalog: RuleCatalog, corpus, workers: int) -> SignatureHistogram:
    if isinstance(corpus, SignatureHistogram):
        if corpus.names != catalog.names:
            raise ValueError("histogram was computed for a different catalog order")
        return corpus
    return compute_signatures(catalog.rules, corpus, workers=workers)


def frequency_order(profile, catalog: RuleCatalog | None = None) -> RuleOrder | list[str]:
    """Descending exclusive count; ties keep catalog position.

    Returns a :class:`RuleOrder` when `catalog` is given, else the name list.
    """
    idx = sorted(range(len(profile.names)), key=lambda i: (-profile.exclusive[i], i))
    names = [profile.names[i] for i in idx]
    if catalog is None:
        return names
    return as_order(catalog, names, "frequency")


def greedy_names(hist: SignatureHistogram) -> list[str]:
    n = len(hist.names)
    remaining = dict(hist.counts)
    remaining.pop(0, None)
    chosen: list[int] = []
    left = list(range(n))
    while left and remaining:
        gains = [0] * n
        for mask, c in remaining.items():
            i = 0
            while mask:
                if mask & 1:
                    gains[i] += c
                mask >>= 1
                i += 1
        best = max(left, key=lambda i: (gains[i], -i))
        if gains[best] == 0:
            break
        chosen.append(best)
        left.remove(best)
        bit = 1 << best
        remaining = {m: c for m, c in remaining.items() if not m & bit}
    chosen.extend(left)
    return [hist.names[i] for i in chosen]


def greedy_order(catalog: RuleCatalog, corpus, workers: int = 1) -> RuleOrder:
    if not len(catalog):
        raise ValueError("catalog is empty")
    return as_order(catalog, greedy_names(_histogram(catalog, corpus, workers)), "greedy")


def order_cost(hist: SignatureHistogram, positions: Sequence[int]) -> int:
    """Total iterations when catalog rule i sits at 1-based `positions[i]`."""
    n = len(positions)
    total = 0
    for mask, c in hist.counts.items():
        best = n
        i = 0
        while mask:
            if mask & 1 and positions[i] < best:
                best = positions[i]
            mask >>= 1
            i += 1
        total += best * c
    return total


def exhaustive_names(hist: SignatureHistogram) -> list[str]:
    n = len(hist.names)
    if n > EXHAUSTIVE_LIMIT:
        raise CatalogTooLarge(f"exhaustive search is limited to {EXHAUSTIVE_LIMIT} rules, got {n}")
    best_perm = None
    best_cost = None
    # permutations() is lexicographic, so strict < keeps the lexicographic tie-break
    for perm in permutations(range(n)):
        positions = [0] * n
        for p, i in enumerate(perm, 1):
            positions[i] = p
        cost = order_cost(hist, positions)
        if best_cost is None or cost < best_cost:
            best_cost, best_perm = cost, perm
    return [hist.names[i] for i in best_perm]


def exhaustive_order(catalog: RuleCatalog, corpus, workers: int = 1) -> RuleOrder:
    if not len(catalog):
        raise ValueError("catalog is empty")
    if len(catalog) > EXHAUSTIVE_LIMIT:
        raise CatalogTooLarge(
            f"exhaustive search is limited to {EXHAUSTIVE_LIMIT} rules, got {len(catalog)}")
    return as_order(catalog, exhaustive_names(_histogram(catalog, corpus, workers)), "exhaustive")


def save_order(order: RuleOrder, path: str | Path, fingerprint: dict | None = None) -> Path:
    """Write the order as a catalog file plus a ``.json`` sidecar; returns the sidecar path."""
    path = Path(path)
    save_catalog(order, path)
    sidecar = path.with_name(path.name + ".json")
    sidecar.write_text(json.dumps({
        "provenance": order.provenance,
        "label": order.label,
        "rules": list(order.names),
        "training_corpus": fingerprint,
    }, indent=2, sort_keys=True) + "\n")
    return sidecar
