"""Command-line interface: exit codes, report payloads, error paths."""

import json

import pytest

from ccspi.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_normalize_text(capsys):
    code, out, err = run(capsys, "normalize", "a.a.a.0")
    assert code == 0 and err == ""
    assert "normal_form: a.0 | a.0 | a.0" in out
    assert "reduced in 2 steps" in out
    assert "ccspi 0.1.0" in out


def test_normalize_already_normal(capsys):
    code, out, _ = run(capsys, "normalize", "a.b.0")
    assert code == 0
    assert "verdict: normal form" in out


def test_normalize_json(capsys):
    code, out, _ = run(capsys, "normalize", "a.a.0", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "normalize"
    assert doc["payload"]["normal_form"] == "a.0 | a.0"
    assert doc["payload"]["steps"] == 1
    assert doc["inputs"] == ["a.a.0"]


def test_bisim_positive_both_methods(capsys):
    code, out, _ = run(capsys, "bisim", "a.a.0", "a.0 | a.0")
    assert code == 0
    assert "bisimilar" in out


def test_bisim_negative_exit_code(capsys):
    code, out, _ = run(capsys, "bisim", "a.b.0", "a.0 | b.0")
    assert code == 1
    assert "not strong bisimilar" in out


def test_bisim_depth_payload(capsys):
    code, out, _ = run(capsys, "bisim", "a.a.0", "a.0", "--depth")
    assert code == 1
    assert "distinguishing_depth: 2" in out


def test_bisim_open_terms_normal_form_route(capsys):
    code, out, _ = run(capsys, "bisim", "X | a.0", "a.0 | X", "--method", "norm")
    assert code == 0
    code, _, err = run(capsys, "bisim", "X | a.0", "a.0 | X", "--method", "oracle")
    assert code == 2
    assert "open" in err


def test_bisim_method_restricted_to_sum_free(capsys):
    code, _, err = run(capsys, "bisim", "a.0 + b.0", "a.0", "--calculus", "ccs+", "--method", "both")
    assert code == 2
    assert err


def test_bisim_pi_styles(capsys):
    for style in ("ground", "late", "early"):
        code, out, _ = run(
            capsys,
            "bisim", "a(x).0 | a(y).0", "a(x).a(y).0",
            "--calculus", "pi", "--style", style,
        )
        assert code == 0, style
    code, _, err = run(
        capsys, "bisim", "a(x).0", "a(x).0", "--calculus", "pi", "--style", "distributed"
    )
    assert code == 2 and err


def test_dsim_alias(capsys):
    code, out, _ = run(capsys, "dsim", "a.0 | 'b.0", "a.'b.0 + 'b.a.0")
    assert code == 1
    assert "not distributed bisimilar" in out
    code, _, _ = run(capsys, "dsim", "a.0 | b.0", "b.0 | a.0")
    assert code == 0


def test_prime(capsys):
    code, out, _ = run(capsys, "prime", "a.a.0")
    assert code == 0
    assert "components: a.0, a.0" in out
    assert "2 prime components" in out
    code, out, _ = run(capsys, "prime", "a.b.0")
    assert code == 0
    assert "verdict: prime" in out


def test_erase(capsys):
    code, out, _ = run(capsys, "erase", "(nu p)(b<p>.a(x).0)", "a", "b")
    assert code == 0
    assert "erasure: 'b.a.0" in out


def test_erase_rejects_equal_names(capsys):
    code, _, err = run(capsys, "erase", "a(x).0", "a", "a")
    assert code == 2 and "distinct" in err


def test_md_search_witness(capsys):
    code, out, _ = run(
        capsys, "md-search", "--calculus", "ccs+", "--shape", "diagram", "--size", "4",
        "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"].startswith("witness")
    assert "q" in doc["payload"]


def test_md_search_none_found(capsys):
    code, out, _ = run(capsys, "md-search", "--shape", "parallel", "--size", "2")
    assert code == 1
    assert "no witness" in out


def test_parse_error_is_reported(capsys):
    code, _, err = run(capsys, "normalize", "a.0 + b.0")
    assert code == 2
    assert "sums are not part of this calculus" in err


def test_enumerate_list(capsys):
    code, out, _ = run(capsys, "enumerate", "--list")
    assert code == 0
    assert "replication-ladder" in out
    assert "nf-oracle-agreement" in out


def test_enumerate_runs_a_suite(capsys):
    code, out, _ = run(capsys, "enumerate", "replication-ladder")
    assert code == 0
    assert "PASS" in out


def test_enumerate_with_bounds(capsys):
    code, out, _ = run(capsys, "enumerate", "confluence-termination", "--size-bound", "3")
    assert code == 0
    assert "PASS" in out


def test_enumerate_unknown_suite(capsys):
    code, _, err = run(capsys, "enumerate", "no-such-suite")
    assert code == 2
    assert "no-such-suite" in err


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "0.1.0" in capsys.readouterr().out
