import json


from crackplan.cli import run
from crackplan.passphrase import get_digest

from conftest import FIXTURES

TINY = str(FIXTURES / "tiny.txt")
WORDS = str(FIXTURES / "words1000.txt")


def _json(capsys, argv):
    code = run(argv + ["--format", "json"])
    out = capsys.readouterr().out
    assert code == 0, out
    return json.loads(out)


def test_evaluate_tiny(capsys):
    rep = _json(capsys, ["evaluate", "--order", "preset:prtk-default", "--passwords", TINY])
    # 7 One_digit=1, zz Two_letters=4, monkey All_lowercase=16, abc12 3letters_2digits=25,
    # P@ss Four_characters=20, abcd1234 Letters_4digits=35, 123456 Six_digits=9,
    # HelloWorld Two_uppercase=14
    assert rep["total"] == 8
    assert rep["matched"] == 8
    assert rep["total_iterations"] == 124
    assert rep["corpus_fingerprint"]["records"] == 8
    assert rep["time"]["seconds"] == 124 / 80


def test_compare_tiny(capsys):
    rep = _json(capsys, ["compare", "--a", "preset:prtk-default", "--b", "preset:paper-custom",
                         "--passwords", TINY])
    assert "efficiency" in rep
    assert rep["matched_a"] == rep["matched_b"] == 8
    assert rep["iterations_a"] == 124


def test_missing_file_exit_3(capsys, tmp_path):
    code = run(["evaluate", "--order", "preset:prtk-default", "--passwords", str(tmp_path / "nope")])
    captured = capsys.readouterr()
    assert code == 3
    assert captured.out == ""


def test_mismatched_sets_exit_4(capsys, tmp_path):
    f = tmp_path / "o.rules"
    f.write_text("a = d\n")
    code = run(["compare", "--a", "preset:prtk-default", "--b", str(f), "--passwords", TINY])
    assert code == 4
    assert capsys.readouterr().out == ""


def test_usage_error_exit_2(capsys):
    assert run(["evaluate"]) == 2
    assert run(["nosuch"]) == 2


def test_byte_identical_json(capsys):
    argv = ["profile", "--passwords", TINY, "--format", "json"]
    run(argv)
    a = capsys.readouterr().out
    run(argv + ["--workers", "2"])
    b = capsys.readouterr().out
    assert a == b


def test_profile_csv(capsys):
    assert run(["profile", "--passwords", TINY, "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "rule,exclusive,independent,exclusive_pct"
    assert lines[1] == "One_digit,1,1,12.5"


def test_profile_trace(capsys):
    rep = _json(capsys, ["profile", "--passwords", TINY, "--trace"])
    assert rep["trace"][0] == {"line": 1, "password": "7", "rule": "One_digit"}


def test_split(capsys, tmp_path):
    prefix = str(tmp_path / "half")
    rep = _json(capsys, ["split", "--passwords", TINY, "--out-prefix", prefix])
    assert [h["records"] for h in rep["halves"]] == [4, 4]
    assert (tmp_path / "half.1.txt").read_bytes() == b"7\nzz\nmonkey\nabc12\n"


def test_optimize_and_evaluate_written_order(capsys, tmp_path):
    out = tmp_path / "greedy.rules"
    rep = _json(capsys, ["optimize", "--strategy", "greedy", "--passwords", TINY, "--out", str(out)])
    assert rep["iterations_after"] <= rep["iterations_before"] == 124
    ev = _json(capsys, ["evaluate", "--order", str(out), "--passwords", TINY])
    assert ev["total_iterations"] == rep["iterations_after"]


def test_optimize_exhaustive_too_large(capsys):
    assert run(["optimize", "--strategy", "exhaustive", "--passwords", TINY]) == 4


def test_prefix(capsys):
    rep = _json(capsys, ["prefix", "--order", "preset:prtk-default", "--passwords", TINY, "--ks", "1,49"])
    assert [r["matched"] for r in rep["rows"]] == [1, 8]
    assert rep["rows"][1]["iterations"] == 124


def test_time(capsys):
    rep = _json(capsys, ["time", "--iterations", "87014715"])
    assert 301.5 <= rep["hours"] <= 302.5


def test_catalog(capsys):
    rep = _json(capsys, ["catalog", "preset:paper-custom"])
    assert rep["rules"][0]["rule"] == "All_lowercase"
    assert len(rep["rules"]) == 49


def test_synth_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for p in (a, b):
        assert run(["synth", "--n", "500", "--seed", "4", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_bytes().splitlines()) == 500


def test_stats(capsys):
    rep = _json(capsys, ["stats", "--passwords", TINY])
    assert rep["count"] == 8


def test_passphrase_dict(capsys):
    rep = _json(capsys, ["passphrase", "dict", "--wordlist", WORDS, "--tier", "0.1"])
    assert rep["size"] == 100
    assert rep["words"][0] == "the"


def test_passphrase_attack_plain_and_hashed(capsys, tmp_path):
    targets = tmp_path / "t.txt"
    targets.write_text("thetheof\nandofthe\nnotatriple\n")
    rep = _json(capsys, ["passphrase", "attack", "--wordlist", WORDS, "--tier", "0.01",
                         "--targets", str(targets)])
    assert rep["reports"][0]["cracked"] == 2
    fn = get_digest("test")
    hashed = tmp_path / "h.txt"
    hashed.write_text("".join(fn(w).hex() + "\n" for w in [b"thetheof", b"andofthe", b"zzzzzz"]))
    rep = _json(capsys, ["passphrase", "attack", "--hashed", "--wordlist", WORDS, "--tier", "0.01",
                         "--targets", str(hashed)])
    assert rep["reports"][0]["cracked"] == 2
    assert "elapsed_seconds" not in rep["reports"][0]


def test_passphrase_cumulative(capsys, tmp_path):
    targets = tmp_path / "t.txt"
    targets.write_text("thetheof\nandofthe\n")
    rep = _json(capsys, ["passphrase", "cumulative", "--wordlist", WORDS, "--targets", str(targets)])
    cracked = [r["cracked"] for r in rep["reports"]]
    assert cracked == sorted(cracked) and len(cracked) == 3


def test_passphrase_missing_targets(capsys, tmp_path):
    assert run(["passphrase", "attack", "--wordlist", WORDS]) == 2
    assert run(["passphrase", "attack", "--wordlist", WORDS, "--targets", str(tmp_path / "x")]) == 3
