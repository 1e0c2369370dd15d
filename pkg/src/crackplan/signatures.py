"""Match-signature histograms.

A corpus is reduced to ``{mask: count}`` where bit i of `mask` says whether
rule i matched.  Profiles, evaluations and orderings only depend on this
histogram, so the corpus is read once and every downstream question is
answered from a few hundred distinct masks.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _backend
from .corpus import iter_chunks
from .ruledsl import RulePattern

DEFAULT_CHUNK = 65536


@dataclass(frozen=True)
class SignatureHistogram:
    names: tuple[str, ...]
    counts: dict = field(hash=False)
    total: int
    fingerprint: dict | None = field(default=None, compare=False, hash=False)

    def positions_for(self, order_names: Sequence[str]) -> list[int | None]:
        """1-based position of each histogram rule in `order_names` (None if absent)."""
        where = {n: i + 1 for i, n in enumerate(order_names)}
        missing = set(order_names) - set(self.names)
        if missing:
            raise KeyError(f"rules not in histogram: {sorted(missing)}")
        return [where.get(n) for n in self.names]

    def first_positions(self, order_names: Sequence[str]) -> dict[int | None, int]:
        """``{first matching position (1-based) or None: count}`` under an order."""
        pos = self.positions_for(order_names)
        out: dict[int | None, int] = {}
        for mask, c in self.counts.items():
            best = None
            i = 0
            while mask:
                if mask & 1:
                    p = pos[i]
                    if p is not None and (best is None or p < best):
                        best = p
                mask >>= 1
                i += 1
            out[best] = out.get(best, 0) + c
        return out


_worker_program = None


def _init_worker(patterns):
    global _worker_program
    _worker_program = _backend.build_program(patterns)


def _count_chunk(chunk):
    return _backend.signature_counts(_worker_program, chunk)


def _merge_into(acc: dict, part: dict) -> None:
    for k, v in part.items():
        acc[k] = acc.get(k, 0) + v


def _hashed(chunks: Iterable[list[bytes]], h, tally: list):
    for chunk in chunks:
        for pw in chunk:
            h.update(pw)
            h.update(b"\n")
        tally[0] += len(chunk)
        yield chunk


def compute_signatures(
    rules: Sequence[RulePattern],
    corpus,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK,
) -> SignatureHistogram:
    """One pass over `corpus`; any number of workers gives the same histogram."""
    rules = tuple(rules)
    h = hashlib.blake2b(digest_size=8)
    tally = [0]
    chunks = _hashed(iter_chunks(corpus, chunk_size), h, tally)
    counts: dict[int, int] = {}
    if workers <= 1:
        program = _backend.build_program(rules)
        for chunk in chunks:
            _merge_into(counts, _backend.signature_counts(program, chunk))
    else:
        # bounded in-flight window keeps memory independent of corpus size
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(rules,)) as pool:
            pending = set()
            for chunk in chunks:
                pending.add(pool.submit(_count_chunk, chunk))
                if len(pending) >= 2 * workers:
                    done, pending = wait(pending, return_when=FIRST_COMPLETED)
                    for f in done:
                        _merge_into(counts, f.result())
            for f in pending:
                _merge_into(counts, f.result())
    fp = {"records": tally[0], "checksum": h.hexdigest()}
    return SignatureHistogram(tuple(r.name for r in rules), counts, tally[0], fp)
