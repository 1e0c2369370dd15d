"""Acceptance criteria, one test each, each printing a PASS/FAIL line.

Criterion 10 needs the real datasets: set CRACKPLAN_FULLSCALE_DIR to a
directory holding rockyou.txt.
"""

import itertools
import os
import random
import time
from pathlib import Path

import pytest

from crackplan.evaluator import compare_histogram, evaluate, evaluate_histogram, prefix_histogram, time_estimate
from crackplan.optimizer import exhaustive_order, greedy_order
from crackplan.passphrase import attack_plain, build_tier, cumulative_report, generate
from crackplan.profiler import MatchProfile, merge, profile
from crackplan.ruledsl import (
    RuleCatalog, builtin_custom, builtin_prtk_default, format_rule, parse_rule, reference_match,
)
from crackplan.signatures import compute_signatures
from crackplan.synth import load_mix, synthesize

from conftest import FIXTURES, patterns


@pytest.fixture
def report(request, capsys):
    """Call with (ok, detail); prints the verdict line even under output capture."""
    name = request.node.name.replace("test_", "")

    def _report(ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, detail
    return _report


@pytest.fixture(scope="module")
def desk():
    """(corpus, seconds spent generating it)"""
    t0 = time.perf_counter()
    corpus = synthesize(load_mix("pio1-shares"), 10**5, seed=1)
    return corpus, time.perf_counter() - t0


@pytest.fixture
def desk_corpus(desk):
    return desk[0]


def _naive_total(rules, passwords):
    total = 0
    for pw in passwords:
        total += next((i for i, r in enumerate(rules, 1) if reference_match(r, pw)), len(rules))
    return total


def test_c01_cost_model_oracle(report):
    t0 = time.perf_counter()
    rng = random.Random(101)
    pool = builtin_prtk_default().rules
    bad = 0
    for _ in range(200):
        rules = rng.sample(pool, rng.randint(1, 10))
        pws = [bytes(rng.choice(b"abcXY0129!") for _ in range(rng.randint(1, 12)))
               for _ in range(rng.randint(1, 1000))]
        if evaluate(RuleCatalog(tuple(rules)), pws).total_iterations != _naive_total(rules, pws):
            bad += 1
    dt = time.perf_counter() - t0
    report(bad == 0 and dt < 10, f"{200 - bad}/200 instances equal the naive loop, {dt:.1f}s (< 10s)")


def test_c02_permutation_invariance(report):
    cat = builtin_prtk_default()
    pws = synthesize(load_mix("rock1-shares"), 10**4, seed=2)
    hist = compute_signatures(cat.rules, pws)
    rng = random.Random(102)
    seen = set()
    for _ in range(50):
        names = list(cat.names)
        rng.shuffle(names)
        rep = evaluate_histogram(names, hist)
        seen.add((rep.matched, rep.coverage))
    # one direct evaluation as a check on the shared histogram
    direct = evaluate(cat.reorder(names), pws)
    seen.add((direct.matched, direct.coverage))
    m, cov = next(iter(seen))
    report(len(seen) == 1, f"50 permutations, matched={m}, coverage={100 * cov:.2f}%, distinct results={len(seen)}")


def test_c03_efficiency_desk_scale(report, desk):
    desk_corpus, gen_seconds = desk
    t0 = time.perf_counter() - gen_seconds
    a, b = builtin_prtk_default(), builtin_custom()
    hist = compute_signatures(a.rules, desk_corpus)
    c = compare_histogram(a.names, b.names, hist, "prtk-default", "paper-custom")
    dt = time.perf_counter() - t0
    report(c.efficiency >= 0.30 and c.matched_a == c.matched_b and dt < 60,
           f"efficiency {100 * c.efficiency:.2f}% (>= 30%), iterations {c.iterations_a} -> {c.iterations_b}, "
           f"{dt:.1f}s including generation (< 60s)")


def test_c04_time_arithmetic(report):
    h1 = time_estimate(87_014_715, 80).hours
    h2 = time_estimate(10_884_063, 80).hours
    report(301.5 <= h1 <= 302.5 and 37.5 <= h2 <= 38.1, f"{h1:.3f} h in [301.5, 302.5], {h2:.3f} h in [37.5, 38.1]")


def test_c05_greedy_quality(report):
    t0 = time.perf_counter()
    rng = random.Random(105)
    # catalog rules are mostly disjoint; overlapping ones make greedy work for its answer
    pool = builtin_prtk_default().rules + tuple(parse_rule(t) for t in (
        "o1 = .+", "o2 = l+ .*", "o3 = .* d", "o4 = L* d*", "o5 = .{2,4}", "o6 = l{1,3} d+",
        "o7 = . l+", "o8 = d+ .", "o9 = .* s .*", "o10 = U .*"))
    ok = True
    optimal = 0
    worst = 1.0
    for _ in range(50):
        rules = rng.sample(pool, rng.randint(1, 7))
        cat = RuleCatalog(tuple(rules))
        pws = [bytes(rng.choice(b"abcX0127!") for _ in range(rng.randint(1, 10)))
               for _ in range(rng.randint(1, 200))]
        hist = compute_signatures(cat.rules, pws)
        g = evaluate_histogram(greedy_order(cat, hist).names, hist).total_iterations
        e = evaluate_histogram(exhaustive_order(cat, hist).names, hist).total_iterations
        # independent brute force over all permutations
        brute = min(_naive_total(p, pws) for p in itertools.permutations(rules)) if len(rules) <= 5 else e
        ok &= e <= g <= 4 * e and e == brute
        optimal += g == e
        worst = max(worst, g / e)
    dt = time.perf_counter() - t0
    report(ok and dt < 30, f"bound held on 50 instances, greedy optimal on {optimal}/50, "
                           f"worst ratio {worst:.3f}, {dt:.1f}s (< 30s)")


def test_c06_prefix_shape(report, desk_corpus):
    a, b = builtin_prtk_default(), builtin_custom()
    hist = compute_signatures(a.rules, desk_corpus)
    ks = [2, 5, 10, 15]
    ra = prefix_histogram(a.names, hist, ks).rows
    rb = prefix_histogram(b.names, hist, ks).rows
    ok = all(y.pct > x.pct and y.iterations < x.iterations for x, y in zip(ra, rb))
    detail = ", ".join(f"k={x.k}: {100 * x.pct:.1f}% vs {100 * y.pct:.1f}%, {x.iterations} vs {y.iterations} it"
                       for x, y in zip(ra, rb))
    report(ok, "default vs custom " + detail)


def test_c07_profiler_partition(report, desk_corpus):
    corpora = {
        "tiny": list((FIXTURES / "tiny.txt").read_bytes().split()),
        "desk": desk_corpus[:20000],
        "random": [bytes(random.Random(i).choice(b"aZ9#\xff") for _ in range(i % 14 + 1)) for i in range(5000)],
        "empty": [],
    }
    ok = True
    for corpus in corpora.values():
        for cat in (builtin_prtk_default(), builtin_custom()):
            p = profile(cat, corpus)
            ok &= sum(p.exclusive) + p.unmatched == p.total == len(corpus)
            shards = [corpus[i::4] for i in range(4)]
            acc = MatchProfile.zero(cat.names)
            for s in shards:
                acc = merge(acc, profile(cat, s))
            ok &= acc == p
    report(ok, f"partition and sharded merge exact on {len(corpora)} corpora x 2 catalogs")


def test_c08_passphrase_equivalence(report):
    from crackplan.corpus import load_wordlist
    t0 = time.perf_counter()
    rng = random.Random(108)
    wl = load_wordlist(FIXTURES / "words1000.txt")
    ok_eq = True
    for _ in range(5):
        words = rng.sample(wl.words[:200], 30)
        space = set(generate(words))
        targets = [b"".join(rng.choice(words).encode() for _ in range(rng.randint(2, 4)))
                   if rng.random() < 0.8 else bytes(rng.choice(b"theandof") for _ in range(9))
                   for _ in range(100)]
        plain = attack_plain(targets, build_tier(words, 1.0))
        ok_eq &= set(plain.cracked_items) == {t for t in targets if t in space}
    targets = ["".join(rng.choice(wl.words[:300]) for _ in range(3)) for _ in range(300)]
    reps = cumulative_report(targets, wl, [0.1, 0.2, 0.3])
    cracked = [r.cracked for r in reps]
    top = build_tier(wl, 0.1).words
    synthetic = ["".join(rng.choice(top) for _ in range(3)) for _ in range(200)]
    full = cumulative_report(synthetic, wl, [0.1])[0].pct
    dt = time.perf_counter() - t0
    ok = ok_eq and cracked == sorted(cracked) and full == 1.0 and dt < 20
    report(ok, f"segmentation == enumeration: {ok_eq}, cumulative {cracked}, "
               f"tier-0.1 synthetic cracked {100 * full:.0f}%, {dt:.1f}s (< 20s)")


def test_c09_dsl_round_trip(report):
    from hypothesis import given, settings
    failures = []

    @settings(max_examples=1000, database=None, derandomize=True)
    @given(patterns())
    def check(p):
        if parse_rule(format_rule(p)) != p:
            failures.append(p)
    check()
    d, c = builtin_prtk_default(), builtin_custom()
    presets_ok = (len(d) == len(c) == 49 and len(set(d.names)) == len(set(c.names)) == 49
                  and (d[0].name, d[15].name, d[48].name) == ("One_digit", "All_lowercase", "Any_12characters")
                  and (c[0].name, c[1].name) == ("All_lowercase", "4letters_2digits"))
    report(not failures and presets_ok, f"1000 generated patterns round-trip, {len(failures)} failures; "
                                        f"presets ok: {presets_ok}")


FULLSCALE = os.environ.get("CRACKPLAN_FULLSCALE_DIR")


@pytest.mark.fullscale
@pytest.mark.skipif(not FULLSCALE, reason="set CRACKPLAN_FULLSCALE_DIR to run the full-scale check")
def test_c10_fullscale_rockyou(report):
    from crackplan.corpus import CorpusSource, split_halves
    src = CorpusSource(Path(FULLSCALE) / "rockyou.txt")
    _, evaluation_half = split_halves(src)
    a, b = builtin_prtk_default(), builtin_custom()
    hist = compute_signatures(a.rules, evaluation_half, workers=os.cpu_count() or 1)
    c = compare_histogram(a.names, b.names, hist)
    cov = 100 * c.matched_a / c.total
    eff = 100 * c.efficiency
    report(abs(eff - 40.71) <= 3 and abs(cov - 97.36) <= 1.5,
           f"efficiency {eff:.2f}% (40.71 +/- 3), coverage {cov:.2f}% (97.36 +/- 1.5)")
