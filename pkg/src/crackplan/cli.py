"""``crackplan`` command line.

Exit codes: 0 success, 2 usage error, 3 input I/O error, 4 validation error.
Reports go to stdout (JSON by default when piped), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import _backend
from .corpus import CorpusSource, corpus_stats, load_wordlist, split_halves, write_passwords, iter_passwords
from .evaluator import (
    DEFAULT_RATE, compare_histogram, evaluate_histogram, prefix_histogram, time_estimate,
)
from .optimizer import RuleOrder, exhaustive_order, frequency_order, greedy_order, save_order
from .passphrase import (
    TripleSpec, attack_hashed, attack_plain, build_tier, cumulative_report, reports_csv,
)
from .profiler import profile_histogram, trace
from .ruledsl import RuleCatalog, format_rule, load_catalog, load_preset
from .signatures import compute_signatures
from .synth import load_mix, synthesize

log = logging.getLogger("crackplan")

EXIT_USAGE, EXIT_IO, EXIT_INVALID = 2, 3, 4


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- formatting

def _table(headers, rows) -> str:
    cells = [list(map(str, headers))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths)))
             for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _fmt(args) -> str:
    if args.format:
        return args.format
    return "table" if sys.stdout.isatty() else "json"


def _emit(args, payload: dict, csv_text: str | None = None, table: str | None = None) -> None:
    fmt = _fmt(args)
    if fmt == "csv" and csv_text is not None:
        sys.stdout.write(csv_text)
    elif fmt == "table" and table is not None:
        sys.stdout.write(table)
    else:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")


# ---------------------------------------------------------------- inputs

def _catalog(spec: str) -> RuleCatalog:
    if spec.startswith("preset:"):
        return load_preset(spec[len("preset:"):])
    return load_catalog(spec)


def _order(spec: str) -> RuleOrder:
    cat = _catalog(spec)
    provenance = "preset"
    sidecar = Path(spec + ".json")
    if not spec.startswith("preset:") and sidecar.exists():
        provenance = json.loads(sidecar.read_text()).get("provenance", "preset")
    return RuleOrder(cat.rules, label=cat.label, provenance=provenance)


def _source(args, path=None) -> CorpusSource:
    path = path or args.passwords
    if path != "-" and not Path(path).is_file():
        raise FileNotFoundError(f"password list not found: {path}")
    return CorpusSource(path, max_len=args.max_len, dedup=args.dedup)


def _ks(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--ks expects comma-separated integers, got {text!r}")


def _fractions(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated fractions, got {text!r}")


# ---------------------------------------------------------------- commands

def cmd_split(args):
    src = _source(args)
    first, second = split_halves(src)
    prefix = args.out_prefix or Path(args.passwords).stem
    paths = [f"{prefix}.1.txt", f"{prefix}.2.txt"]
    n1 = write_passwords(iter_passwords(first), paths[0])
    n2 = write_passwords(iter_passwords(second), paths[1])
    payload = {"source": args.passwords, "total": n1 + n2,
               "halves": [{"path": paths[0], "records": n1}, {"path": paths[1], "records": n2}]}
    _emit(args, payload, table=_table(["half", "path", "records"],
                                      [[1, paths[0], n1], [2, paths[1], n2]]))


def cmd_stats(args):
    stats = corpus_stats(_source(args))
    payload = stats.to_dict()
    rows = [["length " + k, v] for k, v in payload["lengths"].items()]
    rows += [[k, v] for k, v in payload["compositions"].items()]
    _emit(args, payload, table=_table(["bucket", "count"], rows + [["total", stats.count]]))


def cmd_catalog(args):
    cat = _catalog(args.catalog)
    payload = {"catalog": cat.label, "rules": [{"position": i, "rule": r.name, "pattern": r.body}
                                              for i, r in enumerate(cat, 1)]}
    text = "".join(format_rule(r) + "\n" for r in cat)
    fmt = _fmt(args)
    if fmt == "json":
        _emit(args, payload)
    else:
        sys.stdout.write(text)


def cmd_profile(args):
    cat = _catalog(args.catalog)
    src = _source(args)
    if args.trace:
        rows = [[ln, pw.decode("latin-1"), hit or "-"] for ln, pw, hit in trace(cat, src)]
        _emit(args, {"trace": [{"line": r[0], "password": r[1], "rule": r[2]} for r in rows]},
              table=_table(["line", "password", "rule"], rows))
        return
    hist = compute_signatures(cat.rules, src, workers=args.workers)
    prof = profile_histogram(hist)
    payload = dict(catalog=cat.label, corpus_fingerprint=hist.fingerprint, **prof.to_dict())
    rows = [[r["rule"], r["exclusive"], r["independent"], r["exclusive_pct"]] for r in payload["rules"]]
    _emit(args, payload, csv_text=prof.to_csv(),
          table=_table(["rule", "exclusive", "independent", "exclusive_pct"], rows))


def cmd_optimize(args):
    cat = _catalog(args.catalog)
    src = _source(args)
    hist = compute_signatures(cat.rules, src, workers=args.workers)
    if args.strategy == "frequency":
        order = frequency_order(profile_histogram(hist), cat)
    elif args.strategy == "greedy":
        order = greedy_order(cat, hist)
    else:
        order = exhaustive_order(cat, hist)
    base = evaluate_histogram(cat.names, hist, cat.label or "catalog")
    new = evaluate_histogram(order.names, hist, order.label)
    payload = {
        "strategy": args.strategy,
        "training_corpus": hist.fingerprint,
        "rules": list(order.names),
        "iterations_before": base.total_iterations,
        "iterations_after": new.total_iterations,
    }
    if args.out:
        payload["written"] = [args.out, str(save_order(order, args.out, hist.fingerprint))]
    _emit(args, payload, table=_table(["position", "rule"], list(enumerate(order.names, 1))))


def cmd_evaluate(args):
    order = _order(args.order)
    hist = compute_signatures(order.rules, _source(args), workers=args.workers)
    rep = evaluate_histogram(order.names, hist, order.label)
    d = rep.to_dict()
    d["time"] = time_estimate(rep.total_iterations, args.rate).to_dict()
    _emit(args, d, csv_text=rep.to_csv(), table=_table(
        ["order", "total", "matched", "coverage_pct", "iterations", "hours"],
        [[rep.order_id, rep.total, rep.matched, f"{100 * rep.coverage:.2f}",
          rep.total_iterations, f"{d['time']['hours']:.1f}"]]))


def cmd_prefix(args):
    order = _order(args.order)
    hist = compute_signatures(order.rules, _source(args), workers=args.workers)
    rep = prefix_histogram(order.names, hist, _ks(args.ks), order.label)
    _emit(args, rep.to_dict(), csv_text=rep.to_csv(), table=_table(
        ["rules", "matched", "pct", "iterations"],
        [[r.k, r.matched, f"{100 * r.pct:.2f}", r.iterations] for r in rep.rows]))


def cmd_compare(args):
    a, b = _order(args.a), _order(args.b)
    if sorted(a.names) != sorted(b.names) or any(b.by_name(r.name) != r for r in a):
        raise ValueError("orders do not cover the same rule set")
    hist = compute_signatures(a.rules, _source(args), workers=args.workers)
    cmp_ = compare_histogram(a.names, b.names, hist, a.label, b.label)
    d = cmp_.to_dict()
    d["corpus_fingerprint"] = hist.fingerprint
    d["time_saved"] = time_estimate(cmp_.iterations_a - cmp_.iterations_b, args.rate).to_dict()
    _emit(args, d, csv_text=cmp_.to_csv(), table=_table(
        ["order", "matched", "iterations"],
        [[a.label, cmp_.matched_a, cmp_.iterations_a], [b.label, cmp_.matched_b, cmp_.iterations_b],
         ["efficiency", "", f"{100 * cmp_.efficiency:.2f}%"],
         ["time saved (h)", "", f"{d['time_saved']['hours']:.1f}"]]))


def cmd_time(args):
    dur = time_estimate(args.iterations, args.rate)
    payload = {"iterations": args.iterations, "rate": args.rate, **dur.to_dict()}
    _emit(args, payload, table=_table(["iterations", "rate", "hours"],
                                      [[args.iterations, args.rate, f"{dur.hours:.2f}"]]))


def cmd_synth(args):
    mix = load_mix(args.mix)
    cat = _catalog(args.catalog)
    lines = synthesize(mix, args.n, seed=args.seed, catalog=cat)
    if args.out and args.out != "-":
        write_passwords(lines, args.out)
        log.info("wrote %d passwords to %s", len(lines), args.out)
    else:
        write_passwords(lines, sys.stdout.buffer)


def _triple_spec(args) -> TripleSpec:
    return TripleSpec(args.separator.encode("utf-8"), args.case, not args.no_repetition)


def cmd_passphrase(args):
    wl = load_wordlist(args.wordlist)
    spec = _triple_spec(args)
    if args.action == "dict":
        tier = build_tier(wl, args.tier, args.min_word_len)
        if _fmt(args) == "json":
            _emit(args, {"tier_pct": 100 * tier.tier, "min_word_len": tier.min_word_len,
                         "source_words": tier.source_size, "size": len(tier), "words": list(tier.words)})
        else:
            sys.stdout.write("".join(w + "\n" for w in tier.words))
        return
    if not args.targets:
        raise UsageError(f"passphrase {args.action} needs --targets")
    if args.targets != "-" and not Path(args.targets).is_file():
        raise FileNotFoundError(f"targets not found: {args.targets}")
    if args.action == "attack":
        tier = build_tier(wl, args.tier, args.min_word_len)
        if args.hashed:
            if args.targets == "-":
                hexes = [line.decode("ascii", "replace") for line in sys.stdin.buffer]
            else:
                hexes = Path(args.targets).read_text("ascii", "replace").splitlines()
            reports = [attack_hashed(hexes, tier, spec, args.digest, args.budget, workers=args.workers)]
        else:
            targets = CorpusSource(args.targets, max_len=args.max_len)
            reports = [attack_plain(targets, tier, spec, args.rate)]
    else:
        targets = CorpusSource(args.targets, max_len=args.max_len)
        reports = cumulative_report(targets, wl, _fractions(args.tiers), spec,
                                    args.min_word_len, args.rate)
    payload = {"reports": [r.to_dict(timing=args.timing) for r in reports]}
    _emit(args, payload, csv_text=reports_csv(reports), table=_table(
        ["tier %", "words", "% found", "time (mins)"],
        [[f"{100 * r.tier:g}", r.dictionary_size, f"{100 * r.pct:.1f}",
          f"{r.est_exhaust_time.minutes:.0f}"] for r in reports]))


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "table"],
                        help="report format (default: table on a terminal, else json)")
    common.add_argument("--rate", type=float, default=DEFAULT_RATE, help="guesses per second")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-len", type=int, default=256, help="skip longer lines")
    common.add_argument("--dedup", action="store_true", help="drop repeated passwords")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="crackplan", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({_backend.BACKEND} kernel)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("split", parents=[common], help="split a list into optimisation/evaluation halves")
    s.add_argument("--passwords", required=True)
    s.add_argument("--out-prefix")
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("stats", parents=[common], help="length and composition histograms")
    s.add_argument("--passwords", required=True)
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("catalog", parents=[common], help="print a catalog in canonical form")
    s.add_argument("catalog", help="preset:NAME or a catalog file")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("profile", parents=[common], help="per-rule match counts")
    s.add_argument("--catalog", default="preset:prtk-default")
    s.add_argument("--passwords", required=True)
    s.add_argument("--trace", action="store_true", help="per-password first match (<= 10^4 records)")
    s.set_defaults(func=cmd_profile)

    s = sub.add_parser("optimize", parents=[common], help="compute a rule order")
    s.add_argument("--strategy", choices=["frequency", "greedy", "exhaustive"], default="greedy")
    s.add_argument("--catalog", default="preset:prtk-default")
    s.add_argument("--passwords", required=True)
    s.add_argument("--out", help="write the order as a catalog file plus a .json sidecar")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("evaluate", parents=[common], help="iterations and coverage of an order")
    s.add_argument("--order", required=True)
    s.add_argument("--passwords", required=True)
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("prefix", parents=[common], help="evaluate the first k rules of an order")
    s.add_argument("--order", required=True)
    s.add_argument("--passwords", required=True)
    s.add_argument("--ks", default="2,5,10,15")
    s.set_defaults(func=cmd_prefix)

    s = sub.add_parser("compare", parents=[common], help="efficiency of order B relative to order A")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--passwords", required=True)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("time", parents=[common], help="convert iterations to time at --rate")
    s.add_argument("--iterations", type=int, required=True)
    s.set_defaults(func=cmd_time)

    s = sub.add_parser("synth", parents=[common], help="generate a synthetic password list")
    s.add_argument("--mix", default="pio1-shares", help="pio1-shares, rock1-shares or a JSON file")
    s.add_argument("--n", type=int, default=100_000)
    s.add_argument("--catalog", default="preset:prtk-default", help="attribution catalog")
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("passphrase", parents=[common], help="three-word passphrase audits")
    s.add_argument("action", choices=["dict", "attack", "cumulative"])
    s.add_argument("--wordlist", required=True)
    s.add_argument("--targets")
    s.add_argument("--tier", type=float, default=0.1)
    s.add_argument("--tiers", default="0.1,0.2,0.3")
    s.add_argument("--min-word-len", type=int, default=0)
    s.add_argument("--separator", default="")
    s.add_argument("--case", choices=["as-is", "capitalize-each"], default="as-is")
    s.add_argument("--no-repetition", action="store_true")
    s.add_argument("--hashed", action="store_true", help="targets are hex digests")
    s.add_argument("--digest", default="test", help="hashlib name, or 'test' (CRC-32)")
    s.add_argument("--budget", type=int)
    s.add_argument("--timing", action="store_true", help="include wall-clock fields (not reproducible)")
    s.set_defaults(func=cmd_passphrase)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="crackplan: %(message)s", stream=sys.stderr)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"crackplan: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"crackplan: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"crackplan: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
