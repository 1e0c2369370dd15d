"""Three-word passphrase audits against tiered common-word dictionaries.

A tier is the top ``p`` fraction of a frequency-ranked word list, optionally
restricted to words of some minimum length.  Candidates are
``w_i + sep + w_j + sep + w_k`` enumerated in (i, j, k) index order.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Iterable, Iterator, Sequence

from .corpus import WordList, iter_passwords
from .evaluator import DEFAULT_RATE, Duration

CASE_POLICIES = ("as-is", "capitalize-each")


@dataclass(frozen=True)
class TierDictionary:
    tier: float
    min_word_len: int
    words: tuple[str, ...]
    source_size: int = 0

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class TripleSpec:
    separator: bytes = b""
    case_policy: str = "as-is"
    repetition: bool = True

    def __post_init__(self):
        if self.case_policy not in CASE_POLICIES:
            raise ValueError(f"unknown case policy {self.case_policy!r}")

    def apply(self, word: str) -> bytes:
        w = word.encode("ascii")
        return w.capitalize() if self.case_policy == "capitalize-each" else w

    def invert(self, piece: bytes) -> bytes | None:
        """The dictionary form `piece` came from, or None if the policy cannot produce it."""
        if self.case_policy == "capitalize-each":
            if piece.capitalize() != piece or not piece[:1].isupper():
                return None
            return piece.lower()
        return piece


@dataclass(frozen=True)
class AttackReport:
    tier: float
    min_word_len: int
    dictionary_size: int
    candidates_total: int
    targets_total: int
    cracked: int
    elapsed: float
    est_exhaust_time: Duration
    candidates_tried: int | None = None
    cracked_items: frozenset = field(default=frozenset(), compare=False, repr=False)

    @property
    def pct(self) -> float:
        return self.cracked / self.targets_total if self.targets_total else 0.0

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "tier_pct": round(100 * self.tier, 6),
            "min_word_len": self.min_word_len,
            "dictionary_size": self.dictionary_size,
            "candidates_total": self.candidates_total,
            "targets_total": self.targets_total,
            "cracked": self.cracked,
            "pct_found": round(100 * self.pct, 4),
            "exhaust_minutes": round(self.est_exhaust_time.minutes, 4),
        }
        if self.candidates_tried is not None:
            d["candidates_tried"] = self.candidates_tried
        if timing:
            d["elapsed_seconds"] = self.elapsed
        return d


def reports_csv(reports: Sequence[AttackReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tier_pct", "min_word_len", "dictionary_size", "candidates_total",
                "targets_total", "cracked", "pct_found", "exhaust_minutes"])
    for r in reports:
        d = r.to_dict()
        w.writerow([d["tier_pct"], d["min_word_len"], d["dictionary_size"], d["candidates_total"],
                    d["targets_total"], d["cracked"], f"{d['pct_found']:.1f}", f"{d['exhaust_minutes']:.0f}"])
    return buf.getvalue()


def build_tier(wordlist: WordList | Sequence[str], percent: float, min_word_len: int = 0) -> TierDictionary:
    if not 0 < percent <= 1:
        raise ValueError("tier fraction must be in (0, 1]")
    words = tuple(wordlist)
    # exact rational ceiling: 0.3 * 10 must give 3, not 4
    size = math.ceil(Fraction(percent).limit_denominator(10**9) * len(words))
    sliced = tuple(w for w in words[:size] if len(w) >= min_word_len)
    if not sliced:
        raise ValueError(f"tier {percent} with min_word_len={min_word_len} is empty")
    return TierDictionary(percent, min_word_len, sliced, len(words))


def candidate_count(dictionary: TierDictionary | Sequence[str], spec: TripleSpec = TripleSpec()) -> int:
    n = len(dictionary.words if isinstance(dictionary, TierDictionary) else dictionary)
    if spec.repetition:
        return n ** 3
    return n * (n - 1) * (n - 2) if n >= 3 else 0


def _words(dictionary) -> tuple[str, ...]:
    return dictionary.words if isinstance(dictionary, TierDictionary) else tuple(dictionary)


def generate(dictionary, spec: TripleSpec = TripleSpec()) -> Iterator[bytes]:
    words = _words(dictionary)
    if not words:
        raise ValueError("dictionary is empty")
    enc = [spec.apply(w) for w in words]
    sep = spec.separator
    triples = product(range(len(enc)), repeat=3) if spec.repetition else permutations(range(len(enc)), 3)
    for i, j, k in triples:
        yield enc[i] + sep + enc[j] + sep + enc[k]


def unrank(index: int, n: int, repetition: bool = True) -> tuple[int, int, int]:
    """The (i, j, k) of the candidate at 0-based stream position `index`."""
    if repetition:
        i, rest = divmod(index, n * n)
        j, k = divmod(rest, n)
        return i, j, k
    i, rest = divmod(index, (n - 1) * (n - 2))
    jj, kk = divmod(rest, n - 2)
    j = jj if jj < i else jj + 1
    lo, hi = min(i, j), max(i, j)
    k = kk
    if k >= lo:
        k += 1
    if k >= hi:
        k += 1
    return i, j, k


def is_triple(target: bytes, vocab: frozenset, spec: TripleSpec) -> bool:
    """Segmentation check: can `target` be split into three words of `vocab`?"""
    sep = spec.separator
    ls = len(sep)
    n = len(target)
    for i in range(1, n):
        a = spec.invert(target[:i])
        if a is None or a not in vocab or target[i:i + ls] != sep:
            continue
        j0 = i + ls
        for j in range(j0 + 1, n):
            b = spec.invert(target[j0:j])
            if b is None or b not in vocab or target[j:j + ls] != sep:
                continue
            c = spec.invert(target[j + ls:])
            if c is None or c not in vocab:
                continue
            if spec.repetition or len({a, b, c}) == 3:
                return True
    return False


def _targets(targets) -> list[bytes]:
    if isinstance(targets, (list, tuple)):
        return [t.encode("utf-8") if isinstance(t, str) else t for t in targets]
    return list(iter_passwords(targets))


def attack_plain(targets, dictionary: TierDictionary, spec: TripleSpec = TripleSpec(),
                 rate: float = DEFAULT_RATE) -> AttackReport:
    """Count plaintext targets expressible as a three-word composition."""
    start = time.perf_counter()
    items = _targets(targets)
    vocab = frozenset(w.encode("ascii") for w in _words(dictionary))
    cracked = frozenset(t for t in items if is_triple(t, vocab, spec))
    hits = sum(1 for t in items if t in cracked)
    total = candidate_count(dictionary, spec)
    return AttackReport(
        dictionary.tier, dictionary.min_word_len, len(dictionary), total, len(items), hits,
        time.perf_counter() - start, Duration(total / rate), cracked_items=cracked)


# ------------------------------------------------------------------ hashed mode

def _crc32(data: bytes) -> bytes:
    return zlib.crc32(data).to_bytes(4, "big")


TEST_DIGEST = "test"


def get_digest(name: str) -> Callable[[bytes], bytes]:
    """Digest function by name: any hashlib algorithm, or ``test`` (CRC-32, big-endian)."""
    if name == TEST_DIGEST:
        return _crc32
    hashlib.new(name)  # raises ValueError for unknown names

    def digest(data: bytes) -> bytes:
        return hashlib.new(name, data).digest()
    digest.__name__ = name
    return digest


def _scan(args):
    words, spec, digest_name, wanted, start, stop = args
    fn = get_digest(digest_name)
    enc = [spec.apply(w) for w in words]
    sep = spec.separator
    n = len(enc)
    found = set()
    for idx in range(start, stop):
        i, j, k = unrank(idx, n, spec.repetition)
        cand = enc[i] + sep + enc[j] + sep + enc[k]
        d = fn(cand)
        if d in wanted:
            found.add(d)
    return found


def attack_hashed(targets: Iterable[str], dictionary: TierDictionary, spec: TripleSpec = TripleSpec(),
                  digest_fn: Callable[[bytes], bytes] | str = TEST_DIGEST,
                  budget: int | None = None, workers: int = 1) -> AttackReport:
    """Enumerate candidates in stream order, digest them and match hex `targets`.

    `digest_fn` may be a callable or a digest name; ``workers > 1`` needs a
    name so worker processes can rebuild it.
    """
    if budget is not None and budget <= 0:
        raise ValueError("candidate budget must be positive")
    name = digest_fn if isinstance(digest_fn, str) else None
    fn = get_digest(digest_fn) if name else digest_fn
    width = len(fn(b""))
    hexes = [t.strip().lower() for t in targets if t.strip()]
    wanted: dict[bytes, int] = {}
    for h in hexes:
        if len(h) != 2 * width:
            raise ValueError(f"digest length mismatch: {h!r} is not {2 * width} hex characters")
        d = bytes.fromhex(h)
        wanted[d] = wanted.get(d, 0) + 1
    total = candidate_count(dictionary, spec)
    limit = total if budget is None else min(budget, total)
    start = time.perf_counter()
    found: set[bytes] = set()
    tried = 0
    if workers > 1 and name is not None and limit:
        step = math.ceil(limit / workers)
        jobs = [(dictionary.words, spec, name, frozenset(wanted), s, min(s + step, limit))
                for s in range(0, limit, step)]
        with ProcessPoolExecutor(workers) as pool:
            for part in pool.map(_scan, jobs):
                found |= part
        tried = limit
    else:
        for cand in generate(dictionary, spec):
            if tried >= limit or len(found) == len(wanted):
                break
            tried += 1
            d = fn(cand)
            if d in wanted:
                found.add(d)
    elapsed = time.perf_counter() - start
    rate = tried / elapsed if elapsed > 0 and tried else float("inf")
    est = Duration(total / rate) if rate != float("inf") else Duration(0.0)
    cracked = sum(wanted[d] for d in found)
    return AttackReport(
        dictionary.tier, dictionary.min_word_len, len(dictionary), total, len(hexes), cracked,
        elapsed, est, candidates_tried=tried, cracked_items=frozenset(d.hex() for d in found))


def cumulative_report(targets, wordlist: WordList | Sequence[str], tiers: Sequence[float],
                      spec: TripleSpec = TripleSpec(), min_word_len: int = 0,
                      rate: float = DEFAULT_RATE) -> list[AttackReport]:
    if list(tiers) != sorted(tiers):
        raise ValueError("tiers must be ascending")
    items = _targets(targets)
    return [attack_plain(items, build_tier(wordlist, p, min_word_len), spec, rate) for p in tiers]
