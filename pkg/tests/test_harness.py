import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from streammatch import ConsistencyError, EdgeStream, ParseError, StreamError
from streammatch.generators import gen_random_graph, gen_weighted, shuffle_with_deletions
from streammatch.harness import cli
from streammatch.harness.report import RunReport, ratio_of
from streammatch.harness.runner import evaluate, exact_values, generate, run_estimator, space_profile
from streammatch.harness.selftest import run_selftest
from streammatch.harness.streamfile import format_stream, parse_stream, read_stream, write_stream


# ----------------------------------------------------------------- parsing
def test_parse_single_insertion():
    f = read_stream("n=4 weighted=1\n+ 0 1 5\n")
    assert f.n == 4 and f.weighted and len(f.stream) == 1
    up = next(iter(parse_stream("n=4 weighted=1\n+ 0 1 5\n")))[1]
    assert (up.sign, up.edge.pair, up.edge.w) == (1, (0, 1), 5)


def test_weight_mismatch_is_a_consistency_error():
    with pytest.raises(ConsistencyError) as info:
        read_stream("n=4 weighted=1\n+ 0 1 5\n- 0 1 3\n")
    assert info.value.line == 3


@pytest.mark.parametrize("text,line", [
    ("garbage\n", 1),
    ("n=3 weighted=0\n+ 0 1 4\n", 2),
    ("n=3 weighted=1\n+ 0 1\n", 2),
    ("n=3 weighted=0\n+ 0 3\n", 2),
    ("n=3 weighted=0\n+ 1 1\n", 2),
    ("n=3 weighted=1 W=4\n+ 0 1 5\n", 2),
    ("n=3 weighted=0\n* 0 1\n", 2),
    ("n=3 weighted=0\n+ 0 1\n#updates=2\n", 3),
    ("n=3 weighted=0\n#updates=0\n+ 0 1\n", 3),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        read_stream(text)
    assert info.value.line == line


def test_consistency_is_checked_per_line():
    with pytest.raises(ConsistencyError) as info:
        read_stream("n=3 weighted=0\n# c\n+ 0 1\n+ 1 0\n")
    assert info.value.line == 4
    with pytest.raises(ConsistencyError):
        read_stream("n=3 weighted=0\n- 0 1\n")


@given(st.integers(2, 10), st.integers(0, 10**6), st.booleans(), st.sampled_from([None, 2, 3]))
def test_round_trip_is_byte_exact(n, seed, weighted, passes):
    g = gen_random_graph(n, min(n * (n - 1) // 2, n), seed)
    if weighted:
        g = gen_weighted(g, 9, "uniform", seed)
    g = shuffle_with_deletions(g, 0.5, seed)
    text = format_stream(g, passes=passes)
    parsed = read_stream(text)
    assert format_stream(parsed) == text
    assert parsed.stream == g
    assert len(parsed.passes) == (passes or 1)


def test_golden_text(tmp_path):
    g = EdgeStream(3, [1, 1, -1], [0, 1, 0], [1, 2, 1], [2, 3, 2], weighted=True, W=4)
    golden = "n=3 weighted=1 W=4\n+ 0 1 2\n+ 1 2 3\n- 0 1 2\n#updates=3\n"
    assert format_stream(g) == golden
    path = tmp_path / "g.txt"
    write_stream(g, path)
    assert path.read_bytes() == golden.encode()
    assert format_stream(read_stream(str(path))) == golden


def test_pass_replay_semantics():
    one = read_stream("n=3 weighted=0\n+ 0 1\n")
    assert len(one.replay(2)) == 2
    two = read_stream("n=3 weighted=0\n#pass\n+ 0 1\n#pass\n+ 0 1\n#updates=2\n")
    assert two.markers and len(two.replay(2)) == 2
    with pytest.raises(StreamError):
        two.replay(3)
    differ = read_stream("n=3 weighted=0\n#pass\n+ 0 1\n#pass\n+ 1 2\n")
    with pytest.raises(StreamError):
        differ.replay(2)
    # each section is checked independently, so re-inserting in section two is fine
    assert len(read_stream("n=3 weighted=0\n#pass\n+ 0 1\n#pass\n+ 0 1\n").passes) == 2


# ----------------------------------------------------------------- reports
def test_ratio_conventions():
    assert ratio_of(0, 0) == 1 and ratio_of(1, 0) == float("inf")
    assert ratio_of(None, 3) is None and ratio_of(2, 4) == 0.5


def test_report_round_trip_and_validation():
    rep = run_estimator("combinator", gen_weighted(gen_random_graph(8, 10, 0), 16, "uniform", 0),
                        seed=1, with_exact=True)
    d = rep.to_dict()
    assert list(d)[:6] == ["algorithm", "config", "seed", "estimate", "exact", "ratio"]
    assert RunReport.from_dict(d).to_dict() == d
    assert "wall_time_s" not in rep.to_dict(timing=False)
    with pytest.raises(ValueError):
        RunReport("tree", {}, 0, 1.0, words={"x": -1})


def test_failures_are_reported_not_raised():
    # 150 edges on 20 vertices break the m <= alpha n precondition of the exact sub-mode
    g = gen_weighted(gen_random_graph(20, 150, 0), 16, "uniform", 0)
    rep = run_estimator("combinator", g, blackbox="arboricity", alpha=1.0, passes=2, eps=0.25)
    assert rep.estimate is None and rep.ratio is None
    assert rep.failures[0]["type"] == "RecoveryFailure" and "rank 0" in rep.failures[0]["message"]


def test_eval_of_fifty_combinator_runs():
    runs, exacts = [], []
    for seed in range(50):
        g = gen_weighted(gen_random_graph(10, 15 + seed % 20, seed), 1024, "uniform", seed)
        runs.append(run_estimator("combinator", g, seed=seed).to_dict())
        exacts.append(exact_values(g))
    out = evaluate(runs, exacts)
    assert out["summary"]["evaluated"] == 50 and out["summary"]["all_at_most_one"]
    with pytest.raises(ValueError):
        evaluate(runs, exacts[:-1])


def test_space_profile_shape():
    prof = space_profile([256, 512], alpha=2, eps=0.25)
    assert prof["n"] == [256, 512] and len(prof["words"]) == 2 and prof["slope"] > 0


def test_selftest_passes():
    assert run_selftest(trials=5, seed=1)["passed"]


# --------------------------------------------------------------------- CLI
def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_bhh_gen_and_exact(tmp_path, capsys):
    for parity, want in [(1, 9), (0, 7)]:
        path = tmp_path / f"b{parity}.txt"
        code, _, _ = _run(capsys, "gen", "--kind", "bhh", "--t", "3", "--n", "12", "--parity", str(parity),
                          "--out", str(path))
        assert code == 0
        code, out, _ = _run(capsys, "exact", str(path))
        assert code == 0 and json.loads(out)["matching_size"] == want


def test_cli_single_rank_combinator(tmp_path, capsys):
    path = tmp_path / "s.txt"
    _run(capsys, "gen", "--kind", "arboricity", "--n", "20", "--nu", "2", "--seed", "3", "--out", str(path))
    code, out, _ = _run(capsys, "run", str(path), "--algo", "combinator", "--blackbox", "exact", "--exact", "--no-time")
    rep = json.loads(out)
    nu = json.loads(_run(capsys, "exact", str(path))[1])["matching_size"]
    assert code == 0 and rep["estimate"] == pytest.approx(0.4 * nu)
    assert "wall_time_s" not in rep


def test_cli_errors_are_json_on_stderr(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("n=4 weighted=1\n+ 0 1 5\n- 0 1 3\n")
    code, out, err = _run(capsys, "exact", str(path))
    assert code == 1 and out == ""
    assert json.loads(err) == {"error": "ConsistencyError", "message": json.loads(err)["message"], "line": 3}
    code, _, err = _run(capsys, "exact", str(tmp_path / "missing.txt"))
    assert code == 1 and json.loads(err)["error"] == "FileNotFoundError"


def test_cli_eval_and_selftest(tmp_path, capsys):
    g = tmp_path / "w.txt"
    _run(capsys, "gen", "--kind", "weighted", "--n", "10", "--W", "64", "--churn", "0.3", "--out", str(g))
    _, run_out, _ = _run(capsys, "run", str(g), "--algo", "combinator")
    _, exact_out, _ = _run(capsys, "exact", str(g))
    (tmp_path / "runs.jsonl").write_text(run_out)
    (tmp_path / "exact.jsonl").write_text(exact_out)
    code, out, _ = _run(capsys, "eval", str(tmp_path / "runs.jsonl"), str(tmp_path / "exact.jsonl"))
    assert code == 0 and json.loads(out)["summary"]["all_at_most_one"]
    code, out, _ = _run(capsys, "selftest", "--trials", "3")
    assert code == 0 and json.loads(out)["passed"]


def test_generate_rejects_unknown_kind():
    with pytest.raises(ValueError):
        generate("nope", 5)
