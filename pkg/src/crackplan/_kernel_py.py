"""Pure-Python twin of the compiled kernel (same three functions)."""

from __future__ import annotations

from typing import Iterable

from .ruledsl import Matcher, RulePattern


class Program:
    def __init__(self, patterns: Iterable[RulePattern]):
        self.matchers = tuple(Matcher(p) for p in patterns)
        self.nrules = len(self.matchers)
        self._bits = tuple(1 << i for i in range(self.nrules))


def build_program(patterns: Iterable[RulePattern]) -> Program:
    return Program(patterns)


def match_mask(program: Program, password: bytes) -> int:
    mask = 0
    for bit, m in zip(program._bits, program.matchers):
        if m(password):
            mask |= bit
    return mask


def signature_counts(program: Program, passwords: Iterable[bytes]) -> dict[int, int]:
    hist: dict[int, int] = {}
    pairs = tuple(zip(program._bits, program.matchers))
    for pw in passwords:
        mask = 0
        for bit, m in pairs:
            if m(pw):
                mask |= bit
        hist[mask] = hist.get(mask, 0) + 1
    return hist
