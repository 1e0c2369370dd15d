"""Password-composition rule language.

A rule is a full-string pattern made of character-class runs plus optional
whole-string count constraints::

    4letters_2digits = l{4} d{2}
    Two_uppercase    = l+ where count(U)==2

Classes: ``d`` digit, ``l`` letter, ``L`` lowercase, ``U`` uppercase,
``s`` symbol (any byte that is neither a letter nor a digit, including
whitespace and non-ASCII), ``.`` any byte.  Matching works on bytes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

__all__ = [
    "CharClass", "Quantifier", "Segment", "CountConstraint", "RulePattern",
    "RuleCatalog", "Matcher", "DSLSyntaxError", "CatalogError",
    "parse_rule", "format_rule", "compile", "matches", "reference_match",
    "load_catalog", "save_catalog", "parse_catalog", "builtin_prtk_default",
    "builtin_custom", "load_preset", "PRESETS", "class_bytes",
]

# class symbol -> kind name
CLASS_SYMBOLS = {
    "d": "digit",
    "l": "letter",
    "L": "lowercase",
    "U": "uppercase",
    "s": "symbol",
    ".": "any",
}
CLASS_KINDS = {kind: sym for sym, kind in CLASS_SYMBOLS.items()}

_DIGITS = frozenset(range(0x30, 0x3A))
_LOWER = frozenset(range(0x61, 0x7B))
_UPPER = frozenset(range(0x41, 0x5B))
_MEMBERS = {
    "digit": _DIGITS,
    "lowercase": _LOWER,
    "uppercase": _UPPER,
    "letter": _LOWER | _UPPER,
    "symbol": frozenset(range(256)) - _DIGITS - _LOWER - _UPPER,
    "any": frozenset(range(256)),
}


def class_bytes(kind: str) -> bytes:
    """All byte values belonging to `kind`, ascending."""
    return bytes(sorted(_MEMBERS[kind]))


class DSLSyntaxError(ValueError):
    """Malformed rule text.  ``offset`` is the byte offset into the rule."""

    def __init__(self, message: str, offset: int, text: str = "", line: int | None = None):
        self.offset = offset
        self.text = text
        self.line = line
        where = f"line {line}, " if line is not None else ""
        super().__init__(f"{where}offset {offset}: {message}")


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CharClass:
    kind: str

    def __post_init__(self):
        if self.kind not in _MEMBERS:
            raise ValueError(f"unknown character class {self.kind!r}")

    @property
    def symbol(self) -> str:
        return CLASS_KINDS[self.kind]

    def __contains__(self, byte: int) -> bool:
        return byte in _MEMBERS[self.kind]


@dataclass(frozen=True)
class Quantifier:
    min: int = 1
    max: int | None = 1  # None = unbounded

    def __post_init__(self):
        if self.min < 0:
            raise ValueError("quantifier min must be >= 0")
        if self.max is not None and self.max < self.min:
            raise ValueError("quantifier min exceeds max")

    def format(self) -> str:
        if self.max is None:
            if self.min == 0:
                return "*"
            if self.min == 1:
                return "+"
            return f"{{{self.min},}}"
        if self.min == self.max:
            return "" if self.min == 1 else f"{{{self.min}}}"
        return f"{{{self.min},{self.max}}}"


@dataclass(frozen=True)
class Segment:
    cls: CharClass
    quant: Quantifier = Quantifier()

    def format(self) -> str:
        return self.cls.symbol + self.quant.format()


_CMP = ("==", "<=", ">=")


@dataclass(frozen=True)
class CountConstraint:
    cls: CharClass
    cmp: str
    bound: int

    def __post_init__(self):
        if self.cmp not in _CMP:
            raise ValueError(f"bad comparison {self.cmp!r}")
        if self.bound < 0:
            raise ValueError("count bound must be >= 0")

    def holds(self, password: bytes) -> bool:
        n = count_class(password, self.cls.kind)
        if self.cmp == "==":
            return n == self.bound
        if self.cmp == "<=":
            return n <= self.bound
        return n >= self.bound

    def format(self) -> str:
        return f"count({self.cls.symbol}){self.cmp}{self.bound}"


@dataclass(frozen=True)
class RulePattern:
    name: str
    segments: tuple[Segment, ...]
    constraints: tuple[CountConstraint, ...] = ()

    def __post_init__(self):
        if not _NAME_RE.fullmatch(self.name):
            raise ValueError(f"invalid rule name {self.name!r}")
        if not self.segments:
            raise ValueError("a rule needs at least one segment")
        seen = set()
        for c in self.constraints:
            if c.cls.kind in seen:
                raise ValueError(f"duplicate constraint on class {c.cls.symbol!r}")
            seen.add(c.cls.kind)

    @property
    def body(self) -> str:
        text = " ".join(s.format() for s in self.segments)
        if self.constraints:
            text += " where " + ", ".join(c.format() for c in self.constraints)
        return text

    def __str__(self) -> str:
        return format_rule(self)


@dataclass(frozen=True)
class RuleCatalog:
    rules: tuple[RulePattern, ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        seen = set()
        for r in self.rules:
            if r.name in seen:
                raise CatalogError(f"duplicate rule name {r.name!r}")
            seen.add(r.name)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[RulePattern]:
        return iter(self.rules)

    def __getitem__(self, i):
        return self.rules[i]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.rules)

    def by_name(self, name: str) -> RulePattern:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    def reorder(self, names: Sequence[str], label: str = "") -> "RuleCatalog":
        lookup = {r.name: r for r in self.rules}
        if sorted(names) != sorted(lookup):
            raise CatalogError("order is not a permutation of the catalog")
        return RuleCatalog(tuple(lookup[n] for n in names), label=label)


# --------------------------------------------------------------------- parsing

_NAME_RE = re.compile(r"[A-Za-z0-9_]+")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, expected: str):
        got = self.text[self.pos:self.pos + 1] or "end of input"
        raise DSLSyntaxError(f"expected {expected}, got {got!r}", self.pos, self.text)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos:self.pos + 1]

    def take(self, token: str, expected: str | None = None):
        self.skip_ws()
        if not self.text.startswith(token, self.pos):
            self.error(expected or repr(token))
        self.pos += len(token)

    def name(self) -> str:
        self.skip_ws()
        m = _NAME_RE.match(self.text, self.pos)
        if not m:
            self.error("rule name")
        self.pos = m.end()
        return m.group()

    def integer(self) -> int:
        self.skip_ws()
        m = re.compile(r"[0-9]+").match(self.text, self.pos)
        if not m:
            self.error("integer")
        self.pos = m.end()
        return int(m.group())

    def char_class(self) -> CharClass:
        c = self.peek()
        if c == "" or c not in CLASS_SYMBOLS:
            self.error("character class (one of d l L U s .)")
        self.pos += 1
        return CharClass(CLASS_SYMBOLS[c])

    def quantifier(self) -> Quantifier:
        c = self.peek()
        if c == "+":
            self.pos += 1
            return Quantifier(1, None)
        if c == "*":
            self.pos += 1
            return Quantifier(0, None)
        if c != "{":
            return Quantifier()
        start = self.pos
        self.pos += 1
        lo = self.integer()
        if self.peek() == "}":
            self.pos += 1
            return Quantifier(lo, lo)
        self.take(",", "',' or '}'")
        hi = None
        if self.peek() != "}":
            hi = self.integer()
        self.take("}", "'}'")
        if hi is not None and hi < lo:
            raise DSLSyntaxError("quantifier min exceeds max", start, self.text)
        return Quantifier(lo, hi)

    def at_where(self) -> bool:
        self.skip_ws()
        m = re.compile(r"where\b").match(self.text, self.pos)
        return m is not None

    def constraint(self) -> CountConstraint:
        self.take("count", "'count'")
        self.take("(", "'('")
        cls = self.char_class()
        self.take(")", "')'")
        self.skip_ws()
        for op in _CMP:
            if self.text.startswith(op, self.pos):
                self.pos += len(op)
                break
        else:
            self.error("comparison (== <= >=)")
        return CountConstraint(cls, op, self.integer())

    def rule(self) -> RulePattern:
        name = self.name()
        self.take("=", "'='")
        segments = []
        while True:
            c = self.peek()
            if c == "" or self.at_where():
                break
            segments.append(Segment(self.char_class(), self.quantifier()))
        if not segments:
            self.error("character class (one of d l L U s .)")
        constraints = []
        if self.at_where():
            self.pos += len("where")
            while True:
                start = self.pos
                con = self.constraint()
                if any(x.cls == con.cls for x in constraints):
                    raise DSLSyntaxError(
                        f"duplicate constraint on class {con.cls.symbol!r}", start, self.text)
                constraints.append(con)
                if self.peek() != ",":
                    break
                self.pos += 1
        if self.peek() != "":
            self.error("end of rule")
        return RulePattern(name, tuple(segments), tuple(constraints))


def _strip_comment(text: str) -> str:
    i = text.find("#")
    return text if i < 0 else text[:i]


def parse_rule(text: str) -> RulePattern:
    """Parse one ``name = segments [where constraints]`` rule."""
    return _Parser(_strip_comment(text)).rule()


def format_rule(pattern: RulePattern) -> str:
    return f"{pattern.name} = {pattern.body}"


# -------------------------------------------------------------------- matching

def count_class(password: bytes, kind: str) -> int:
    if kind == "any":
        return len(password)
    return len(password) - len(password.translate(None, _COMPLEMENT[kind]))


_COMPLEMENT = {k: class_bytes(k) for k in _MEMBERS}

_RE_CLASS = {
    "digit": rb"[0-9]",
    "letter": rb"[A-Za-z]",
    "lowercase": rb"[a-z]",
    "uppercase": rb"[A-Z]",
    "symbol": rb"[^0-9A-Za-z]",
    "any": rb"[\x00-\xff]",
}


def _regex_source(pattern: RulePattern) -> bytes:
    parts = []
    for seg in pattern.segments:
        q = seg.quant
        if q.max is None:
            rep = b"{%d,}" % q.min
        else:
            rep = b"{%d,%d}" % (q.min, q.max)
        parts.append(_RE_CLASS[seg.cls.kind] + rep)
    return b"".join(parts)


class Matcher:
    """Compiled, immutable form of a :class:`RulePattern`."""

    __slots__ = ("pattern", "_fullmatch", "_min_len", "_max_len", "_constraints")

    def __init__(self, pattern: RulePattern):
        self.pattern = pattern
        self._fullmatch = re.compile(_regex_source(pattern)).fullmatch
        self._min_len = sum(s.quant.min for s in pattern.segments)
        maxes = [s.quant.max for s in pattern.segments]
        self._max_len = None if None in maxes else sum(maxes)
        self._constraints = pattern.constraints

    def __call__(self, password: bytes) -> bool:
        n = len(password)
        if n < self._min_len or (self._max_len is not None and n > self._max_len):
            return False
        if self._fullmatch(password) is None:
            return False
        return all(c.holds(password) for c in self._constraints)

    matches = __call__

    def __repr__(self) -> str:
        return f"Matcher({format_rule(self.pattern)!r})"


def compile(pattern: RulePattern | str) -> Matcher:  # noqa: A001 - mirrors re.compile
    if isinstance(pattern, str):
        pattern = parse_rule(pattern)
    return Matcher(pattern)


def matches(matcher: Matcher | RulePattern, password: bytes) -> bool:
    if isinstance(matcher, RulePattern):
        matcher = Matcher(matcher)
    return matcher(password)


def reference_match(pattern: RulePattern, password: bytes) -> bool:
    """Naive exhaustive-backtracking matcher, kept independent of the compiled paths."""
    segs = pattern.segments

    def walk(si: int, pos: int) -> bool:
        if si == len(segs):
            return pos == len(password)
        seg = segs[si]
        # try every run length the quantifier allows
        k = 0
        while True:
            if k >= seg.quant.min and walk(si + 1, pos + k):
                return True
            if seg.quant.max is not None and k >= seg.quant.max:
                return False
            if pos + k >= len(password) or password[pos + k] not in seg.cls:
                return False
            k += 1

    if not walk(0, 0):
        return False
    for c in pattern.constraints:
        n = sum(1 for b in password if b in c.cls)
        if not {"==": n == c.bound, "<=": n <= c.bound, ">=": n >= c.bound}[c.cmp]:
            return False
    return True


# -------------------------------------------------------------------- catalogs

def parse_catalog(lines: Iterable[str], label: str = "") -> RuleCatalog:
    rules = []
    names = {}
    for line_no, raw in enumerate(lines, 1):
        text = _strip_comment(raw).strip()
        if not text:
            continue
        try:
            rule = parse_rule(text)
        except DSLSyntaxError as exc:
            raise DSLSyntaxError(str(exc).split(": ", 1)[1], exc.offset, text, line=line_no) from None
        if rule.name in names:
            raise CatalogError(
                f"line {line_no}: duplicate rule name {rule.name!r} (first on line {names[rule.name]})")
        names[rule.name] = line_no
        rules.append(rule)
    return RuleCatalog(tuple(rules), label=label)


def load_catalog(source: str | Path | IO[str]) -> RuleCatalog:
    if hasattr(source, "read"):
        return parse_catalog(source.read().splitlines(), label=getattr(source, "name", ""))
    path = Path(source)
    with open(path, encoding="ascii") as fh:
        return parse_catalog(fh.read().splitlines(), label=str(path))


def save_catalog(catalog: RuleCatalog, sink: str | Path | IO[str]) -> None:
    text = "".join(format_rule(r) + "\n" for r in catalog)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        Path(sink).write_text(text, encoding="ascii")


PRESETS = {
    "prtk-default": "prtk-default@1",
    "paper-custom": "paper-custom@1",
}


def load_preset(name: str) -> RuleCatalog:
    """Load a shipped catalog by name, e.g. ``prtk-default`` or ``paper-custom@1``."""
    versioned = PRESETS.get(name, name)
    if versioned not in PRESETS.values():
        raise CatalogError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS.values()))}")
    text = resources.files("crackplan.catalogs").joinpath(versioned + ".rules").read_text("ascii")
    return parse_catalog(text.splitlines(), label=f"preset:{versioned}")


def builtin_prtk_default() -> RuleCatalog:
    return load_preset("prtk-default@1")


def builtin_custom() -> RuleCatalog:
    return load_preset("paper-custom@1")
