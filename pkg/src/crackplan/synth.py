"""Deterministic synthetic password corpora with a target rule mix.

Every generated password's *first* match in the attribution catalog (the
default preset unless given) is the rule it was generated for, so profiling
the output recovers the mix exactly up to count rounding.
"""

from __future__ import annotations

import json
import random
import string
from pathlib import Path
from typing import Mapping

from . import _backend
from .ruledsl import RuleCatalog, RulePattern, builtin_prtk_default

# Exclusive shares per rule in the two optimisation halves of the
# reference corpora (rules under 0.5% omitted).
PIO1_SHARES = {
    "All_lowercase": 0.190, "Letters_2digits": 0.163, "4letters_2digits": 0.024,
    "Letters_4digits": 0.074, "2letters_4digits": 0.008, "Six_digits": 0.068,
    "Two_uppercase": 0.030, "Seven_digits": 0.020, "Eight_digits": 0.018,
    "4letters_3digits": 0.010, "3letters_3digits": 0.009, "Any_10characters": 0.086,
    "Any_9characters": 0.074, "Any_8characters": 0.074, "Any_7characters": 0.046,
    "Any_6characters": 0.026,
}
ROCK1_SHARES = {
    "All_lowercase": 0.252, "Letters_2digits": 0.137, "4letters_2digits": 0.017,
    "Letters_4digits": 0.079, "2letters_4digits": 0.007, "Six_digits": 0.027,
    "Two_uppercase": 0.046, "Seven_digits": 0.033, "Eight_digits": 0.029,
    "4letters_3digits": 0.008, "3letters_3digits": 0.007, "Any_10characters": 0.074,
    "Any_9characters": 0.072, "Any_8characters": 0.063, "Any_7characters": 0.043,
    "Any_6characters": 0.023,
}
MIX_PRESETS = {"pio1-shares": PIO1_SHARES, "rock1-shares": ROCK1_SHARES}

UNMATCHED = "<unmatched>"
MAX_TRIES = 2000
EXTRA_LEN = 10  # unbounded quantifiers draw up to this many extra characters

_ALPHABETS = {
    "digit": string.digits,
    "lowercase": string.ascii_lowercase,
    "uppercase": string.ascii_uppercase,
    "symbol": string.punctuation,
    "any": "".join(chr(c) for c in range(0x21, 0x7F)),
}


class MixError(ValueError):
    pass


def load_mix(spec: str | Mapping[str, float]) -> dict[str, float]:
    """A preset name, a JSON file path, or a mapping of rule name to fraction."""
    if isinstance(spec, Mapping):
        return dict(spec)
    if spec in MIX_PRESETS:
        return dict(MIX_PRESETS[spec])
    try:
        data = json.loads(Path(spec).read_text())
    except FileNotFoundError:
        raise
    except (OSError, ValueError) as exc:
        raise MixError(f"cannot read mix {spec!r}: {exc}") from exc
    if not isinstance(data, dict):
        raise MixError("mix file must hold a JSON object of rule -> fraction")
    return {str(k): float(v) for k, v in data.items()}


def allocate(mix: Mapping[str, float], n: int) -> dict[str, int]:
    """Largest-remainder split of `n` records; the leftover goes to UNMATCHED."""
    if any(f < 0 for f in mix.values()):
        raise MixError("mix fractions must be non-negative")
    total = sum(mix.values())
    if total > 1 + 1e-9:
        raise MixError(f"mix fractions sum to {total:.6f} > 1")
    shares = dict(mix)
    shares[UNMATCHED] = max(0.0, 1 - total)
    exact = {k: f * n for k, f in shares.items()}
    counts = {k: int(v) for k, v in exact.items()}
    short = n - sum(counts.values())
    order = sorted(shares, key=lambda k: (-(exact[k] - counts[k]), list(shares).index(k)))
    for k in order[:short]:
        counts[k] += 1
    return counts


def _letter(rng: random.Random) -> str:
    # mostly lowercase, like real passwords
    return rng.choice(string.ascii_uppercase if rng.random() < 0.2 else string.ascii_lowercase)


def sample_pattern(pattern: RulePattern, rng: random.Random) -> bytes:
    out = []
    for seg in pattern.segments:
        q = seg.quant
        k = rng.randint(q.min, q.min + EXTRA_LEN if q.max is None else q.max)
        kind = seg.cls.kind
        for _ in range(k):
            out.append(_letter(rng) if kind == "letter" else rng.choice(_ALPHABETS[kind]))
    return "".join(out).encode("ascii")


def _sample_unmatched(rng: random.Random) -> bytes:
    k = rng.randint(13, 20)
    return "".join(rng.choice(_ALPHABETS["any"]) for _ in range(k)).encode("ascii")


def synthesize(mix: Mapping[str, float], n: int, seed: int = 0,
               catalog: RuleCatalog | None = None) -> list[bytes]:
    """Generate `n` passwords whose exclusive profile under `catalog` follows `mix`."""
    catalog = catalog or builtin_prtk_default()
    unknown = set(mix) - set(catalog.names)
    if unknown:
        raise MixError(f"mix names rules not in the catalog: {sorted(unknown)}")
    counts = allocate(mix, n)
    program = _backend.build_program(catalog.rules)
    index = {name: i for i, name in enumerate(catalog.names)}
    rng = random.Random(seed)
    out: list[bytes] = []
    for name, c in counts.items():
        if name == UNMATCHED:
            def draw(): return _sample_unmatched(rng)
            want = 0
        else:
            pattern = catalog.rules[index[name]]
            def draw(p=pattern): return sample_pattern(p, rng)
            want = 1 << index[name]
        for _ in range(c):
            for _ in range(MAX_TRIES):
                pw = draw()
                mask = _backend.match_mask(program, pw)
                if (mask & -mask) == want:
                    out.append(pw)
                    break
            else:
                raise MixError(f"could not generate a password first-matched by {name!r}")
    rng.shuffle(out)
    return out
