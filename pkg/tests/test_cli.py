import json

import pytest

from gatlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_terminal_object(capsys):
    code, out, _ = run(capsys, "eval", "--theory", "cat_eq.gat", "--model", "walking_arrow.gmod",
                       "--formula", "is_terminal.gfm", "--at", "y")
    assert code == 0
    assert "isTerminal(y) = true" in out


def test_eval_false_exits_nonzero(capsys):
    code, out, _ = run(capsys, "eval", "--model", "walking_arrow.gmod", "--formula", "is_terminal.gfm", "--at", "x")
    assert code == 1 and "= false" in out


def test_fib_check_collapse(capsys):
    code, out, _ = run(capsys, "fib-check", "--hom", "collapse_iso.ghom")
    assert code == 0 and "anodyne: true" in out


def test_fib_check_functor_json(capsys):
    code, out, _ = run(capsys, "fib-check", "--functor", "parallel_to_point.gfun", "--json")
    report = json.loads(out)
    assert code == 1
    assert report["schema"] == 1 and report["command"] == "fib-check"
    assert report["lifting_failures"] == ["v", "w"]
    assert report["inputs"][0]["path"] == "parallel_to_point.gfun"


def test_prove_bot_elim(capsys):
    code, out, _ = run(capsys, "prove", "proof_bot_elim.gpf")
    assert code == 0 and "bot_elim: accepted" in out


def test_prove_broken_library_meets_expectations(capsys):
    code, out, _ = run(capsys, "prove", "broken_proofs.gpf")
    assert code == 0 and "10/10 passed" in out


def test_countermodel_found(capsys):
    code, out, _ = run(capsys, "countermodel", "--theory", "cat_eq.gat", "--formulas", "cat_formulas.gfm",
                       "--lhs", "isTerminal", "--rhs", "isInitial", "--bound", "2", "--json")
    assert code == 1
    assert json.loads(out)["verdicts"][0]["countermodel"] is not None


def test_check_reports_each_file(capsys):
    code, out, _ = run(capsys, "check", "cat_eq.gat", "walking_iso.gmod", "small.gcat", "--json")
    report = json.loads(out)
    assert code == 0 and report["checks"] == 3 and report["ok"]


def test_check_rejects_object_equality(capsys):
    code, out, _ = run(capsys, "check", "skeletal.gfm", "--theory", "cat_eq.gat", "--json")
    assert code == 1
    assert json.loads(out)["first_failure"]["error"] == "EqualityRejected"


def test_usage_errors_exit_two(capsys):
    code, _, err = run(capsys, "fib-check")
    assert code == 2 and "exactly one" in err
    with pytest.raises(SystemExit):
        main(["no-such-command"])


def test_corpus_matches_generators(capsys):
    code, out, _ = run(capsys, "corpus", "--check")
    assert code == 0 and "3/3 passed" in out


def test_corpus_writes_to_a_directory(capsys, tmp_path):
    code, _, _ = run(capsys, "corpus", "--out", str(tmp_path))
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["fincats.gcat", "sig_eq.gat", "sig_eq_pointed.gat"]


def test_invariance_json_is_stable(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "invariance", "--criterion", "2", "--seed", "5", "--json")
        assert code == 0
        report = json.loads(out)
        report.pop("wall_time")
        for r in report["reports"]:
            r.pop("wall_time")
        outs.append(json.dumps(report, sort_keys=True))
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["reports"][0]["seed"] == 5
