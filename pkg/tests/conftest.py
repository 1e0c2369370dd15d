import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from crackplan import _kernel_py
from crackplan.ruledsl import (
    CharClass, CountConstraint, Quantifier, RulePattern, Segment,
)

FIXTURES = Path(__file__).parent / "fixtures"

try:
    from crackplan import _kernel as _kernel_c
except ImportError:  # extension not built
    _kernel_c = None

KERNELS = [pytest.param(_kernel_py, id="python")]
KERNELS.append(pytest.param(_kernel_c, id="cython", marks=pytest.mark.skipif(
    _kernel_c is None, reason="compiled kernel not built")))


@pytest.fixture(params=KERNELS, scope="module")
def kernel(request):
    return request.param


KINDS = ["digit", "letter", "lowercase", "uppercase", "symbol", "any"]


@st.composite
def quantifiers(draw):
    lo = draw(st.integers(0, 4))
    hi = draw(st.one_of(st.none(), st.integers(lo, lo + 4)))
    return Quantifier(lo, hi)


@st.composite
def patterns(draw, max_segments=4):
    segs = draw(st.lists(
        st.builds(Segment, st.sampled_from(KINDS).map(CharClass), quantifiers()),
        min_size=1, max_size=max_segments))
    kinds = draw(st.lists(st.sampled_from(KINDS), max_size=2, unique=True))
    cons = tuple(CountConstraint(CharClass(k), draw(st.sampled_from(["==", "<=", ">="])),
                                 draw(st.integers(0, 4))) for k in kinds)
    name = draw(st.from_regex(r"[A-Za-z0-9_]{1,12}", fullmatch=True))
    return RulePattern(name, tuple(segs), cons)


# bytes drawn from every class, including non-ASCII and whitespace
ALPHABET = b"aZm0 9!\xff\x00qQ\t"


def random_bytes(rng: random.Random, max_len: int = 12) -> bytes:
    return bytes(rng.choice(ALPHABET) for _ in range(rng.randint(0, max_len)))


def naive_first_match(rules, password):
    """1-based index of the first matching rule or None, via the backtracking matcher."""
    from crackplan.ruledsl import reference_match
    for i, r in enumerate(rules, 1):
        if reference_match(r, password):
            return i
    return None
