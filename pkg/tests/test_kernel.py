import os
import random
import subprocess
import sys

from hypothesis import given, settings, strategies as st

from crackplan import _backend
from crackplan.ruledsl import builtin_prtk_default, parse_rule, reference_match

from conftest import patterns, random_bytes


def _reference_mask(rules, s):
    return sum(1 << i for i, r in enumerate(rules) if reference_match(r, s))


def test_catalog_masks_agree_with_reference(kernel):
    rules = builtin_prtk_default().rules
    prog = kernel.build_program(rules)
    rng = random.Random(3)
    for _ in range(3000):
        s = random_bytes(rng, 14)
        assert kernel.match_mask(prog, s) == _reference_mask(rules, s), s


@settings(max_examples=100, deadline=None)
@given(st.lists(patterns(), min_size=1, max_size=5), st.integers(0, 10**6))
def test_generated_patterns_agree(kernel, pats, seed):
    prog = kernel.build_program(pats)
    rng = random.Random(seed)
    for _ in range(40):
        s = random_bytes(rng)
        assert kernel.match_mask(prog, s) == _reference_mask(pats, s)


def test_signature_counts(kernel):
    rules = [parse_rule("a = d+"), parse_rule("b = .+")]
    prog = kernel.build_program(rules)
    assert kernel.signature_counts(prog, [b"1", b"x", b"22", b""]) == {3: 2, 2: 1, 0: 1}


def test_more_than_64_rules(kernel):
    rules = [parse_rule(f"r{i} = .{{{i % 7 + 1}}}") for i in range(70)]
    prog = kernel.build_program(rules)
    mask = kernel.match_mask(prog, b"abc")
    assert mask == sum(1 << i for i in range(70) if i % 7 + 1 == 3)


def test_long_password_buffers_grow(kernel):
    prog = kernel.build_program([parse_rule("r = l+ d")])
    assert kernel.match_mask(prog, b"a" * 5000 + b"1") == 1


def test_backend_env_override():
    env = dict(os.environ, CRACKPLAN_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import crackplan; print(crackplan.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_backend_selected():
    assert _backend.BACKEND in ("cython", "python")
