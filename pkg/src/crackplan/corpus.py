"""Streaming access to password lists and ranked word lists.

Everything is bytes end to end: leaked corpora are rarely valid UTF-8, so no
decoding is ever attempted on passwords.
"""

from __future__ import annotations

import hashlib
import io
import logging
import math
import sys
from collections import Counter
from dataclasses import dataclass, field, replace
from itertools import islice
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence, Union

log = logging.getLogger(__name__)

DEFAULT_MAX_LEN = 256

Origin = Union[str, Path, Sequence[Union[bytes, str]]]


@dataclass(frozen=True)
class PasswordRecord:
    bytes: bytes
    line_no: int


@dataclass(frozen=True)
class CorpusSource:
    """Where passwords come from.

    `origin` is a path, ``"-"`` for standard input, or an in-memory sequence
    of lines.  `start`/`stop` select a record range (used by :func:`split_halves`).
    """

    origin: Origin
    count_hint: int | None = None
    max_len: int = DEFAULT_MAX_LEN
    dedup: bool = False
    start: int = 0
    stop: int | None = None

    @property
    def rereadable(self) -> bool:
        return not (isinstance(self.origin, str) and self.origin == "-")

    def describe(self) -> str:
        if isinstance(self.origin, (str, Path)):
            base = str(self.origin)
        else:
            base = f"<{len(self.origin)} inline lines>"
        if self.start or self.stop is not None:
            base += f"[{self.start}:{'' if self.stop is None else self.stop}]"
        return base


def as_source(obj) -> CorpusSource:
    if isinstance(obj, CorpusSource):
        return obj
    return CorpusSource(obj)


class PasswordStream:
    """Single-pass iterator of :class:`PasswordRecord`.

    Counters (`emitted`, `skipped_long`, `skipped_dup`) are final once the
    stream is exhausted.
    """

    def __init__(self, source: CorpusSource):
        self.source = source
        self.emitted = 0
        self.skipped_long = 0
        self.skipped_dup = 0
        self._it = self._records()

    def __iter__(self) -> Iterator[PasswordRecord]:
        return self._it

    def __next__(self) -> PasswordRecord:
        return next(self._it)

    def passwords(self) -> Iterator[bytes]:
        for rec in self._it:
            yield rec.bytes

    def _raw_lines(self) -> Iterator[bytes]:
        origin = self.source.origin
        if isinstance(origin, (str, Path)):
            if str(origin) == "-":
                yield from sys.stdin.buffer
                return
            with open(origin, "rb") as fh:
                yield from fh
        else:
            for line in origin:
                yield line.encode("utf-8") if isinstance(line, str) else line

    def _records(self) -> Iterator[PasswordRecord]:
        src = self.source
        seen = set() if src.dedup else None
        index = 0
        for line_no, line in enumerate(self._raw_lines(), 1):
            if line.endswith(b"\n"):
                line = line[:-1]
                if line.endswith(b"\r"):
                    line = line[:-1]
            if not line:
                continue
            if len(line) > src.max_len:
                self.skipped_long += 1
                continue
            if seen is not None:
                if line in seen:
                    self.skipped_dup += 1
                    continue
                seen.add(line)
            if index >= src.start and (src.stop is None or index < src.stop):
                self.emitted += 1
                yield PasswordRecord(line, line_no)
            index += 1
            if src.stop is not None and index >= src.stop:
                break
        if self.skipped_long:
            log.warning("%s: skipped %d lines longer than %d bytes",
                        src.describe(), self.skipped_long, src.max_len)


def open_passwords(source) -> PasswordStream:
    """Stream the non-empty lines of `source` in order, as raw bytes."""
    source = as_source(source)
    if isinstance(source.origin, (str, Path)) and str(source.origin) != "-":
        # fail before the first next() so callers can report I/O errors early
        with open(source.origin, "rb"):
            pass
    return PasswordStream(source)


def iter_passwords(source) -> Iterator[bytes]:
    return open_passwords(source).passwords()


def iter_chunks(source, size: int = 65536) -> Iterator[list[bytes]]:
    it = iter_passwords(source)
    while True:
        chunk = list(islice(it, size))
        if not chunk:
            return
        yield chunk


def count_records(source) -> int:
    source = as_source(source)
    if source.count_hint is not None:
        return source.count_hint
    n = 0
    for _ in iter_passwords(source):
        n += 1
    return n


def split_halves(source) -> tuple[CorpusSource, CorpusSource]:
    """Split into first ceil(n/2) and remaining floor(n/2) records, order kept."""
    source = as_source(source)
    if not source.rereadable:
        raise ValueError("splitting needs a re-readable source, not standard input")
    n = count_records(source)
    mid = math.ceil(n / 2)
    base = source.start
    first = replace(source, start=base, stop=base + mid, count_hint=mid)
    second = replace(source, start=base + mid, stop=base + n, count_hint=n - mid)
    return first, second


def write_passwords(records: Iterable[bytes], sink: str | Path | IO[bytes]) -> int:
    n = 0
    if hasattr(sink, "write"):
        for r in records:
            sink.write(r + b"\n")
            n += 1
        return n
    with open(sink, "wb") as fh:
        return write_passwords(records, fh)


def fingerprint(source) -> dict:
    """Record count plus a 64-bit order-sensitive checksum of the records."""
    h = hashlib.blake2b(digest_size=8)
    n = 0
    for pw in iter_passwords(source):
        h.update(pw)
        h.update(b"\n")
        n += 1
    return {"records": n, "checksum": h.hexdigest()}


# ------------------------------------------------------------------ statistics

_KIND_ORDER = ("lowercase", "uppercase", "digit", "symbol")
_TRANSLATE = bytes(
    ord("d") if 0x30 <= b <= 0x39 else
    ord("l") if 0x61 <= b <= 0x7A else
    ord("u") if 0x41 <= b <= 0x5A else ord("s")
    for b in range(256)
)
_LETTER_KIND = {ord("l"): "lowercase", ord("u"): "uppercase", ord("d"): "digit", ord("s"): "symbol"}


def composition(password: bytes) -> str:
    """Classes present in `password`, e.g. ``"lowercase+digit"``."""
    present = {_LETTER_KIND[c] for c in set(password.translate(_TRANSLATE))}
    return "+".join(k for k in _KIND_ORDER if k in present)


@dataclass
class CorpusStats:
    count: int = 0
    lengths: Counter = field(default_factory=Counter)
    compositions: Counter = field(default_factory=Counter)

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "lengths": {str(k): v for k, v in sorted(self.lengths.items())},
            "compositions": dict(sorted(self.compositions.items())),
        }


def corpus_stats(source) -> CorpusStats:
    stats = CorpusStats()
    for pw in iter_passwords(source):
        stats.count += 1
        stats.lengths[len(pw)] += 1
        stats.compositions[composition(pw)] += 1
    return stats


# ------------------------------------------------------------------ word lists

@dataclass(frozen=True)
class WordList:
    """Lowercase ASCII words in descending frequency (index 0 = rank 1)."""

    words: tuple[str, ...]
    dropped: int = 0
    duplicates: int = 0

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[str]:
        return iter(self.words)


def _is_lower_word(w: str) -> bool:
    return w != "" and w.isascii() and w.isalpha() and w.islower()


def load_wordlist(source, normalize: str = "lower") -> WordList:
    """Read a ranked word list, one word per line.

    ``normalize="lower"`` folds case before validation; ``"none"`` keeps the
    text as-is, so capitalised entries are dropped.  Entries that are not
    pure ASCII letters are dropped; duplicates keep their best rank.
    """
    if normalize not in ("lower", "none"):
        raise ValueError(f"unknown normalize policy {normalize!r}")
    if isinstance(source, (str, Path)):
        if str(source) == "-":
            lines: Iterable = io.TextIOWrapper(sys.stdin.buffer, encoding="latin-1")
        else:
            lines = Path(source).read_bytes().decode("latin-1").splitlines()
    else:
        lines = source
    words: list[str] = []
    seen: set[str] = set()
    dropped = dups = 0
    for raw in lines:
        if isinstance(raw, bytes):
            raw = raw.decode("latin-1")
        w = raw.strip()
        if not w:
            continue
        if normalize == "lower":
            w = w.lower()
        if not _is_lower_word(w):
            dropped += 1
            continue
        if w in seen:
            dups += 1
            continue
        seen.add(w)
        words.append(w)
    if not words:
        raise ValueError("word list is empty after normalization")
    return WordList(tuple(words), dropped=dropped, duplicates=dups)
