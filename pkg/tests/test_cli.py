"""
Tests for the command-line front end.
"""

import json

import pytest

from congruent_census.cli import EXIT_INCONSISTENT, EXIT_INPUT, EXIT_OK, dispatch, main
from congruent_census.models import CliInvocation, VerificationCheck, VerificationReport


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.strip(), captured.err


class TestSymbol:
    @pytest.mark.parametrize(
        "args,expected",
        [
            (("2", "5"), "1"),  # (2/5) = -1: evaluated over Z[i]
            (("2", "9"), "1"),  # 3 is inert
            (("5", "5"), "0"),
            (("3", "65"), "1"),
        ],
    )
    def test_quartic_outside_rational_domain(self, capsys, args, expected):
        assert run(capsys, "symbol", "--kind", "quartic", "--args", *args)[:2] == (0, expected)

    def test_rational_quartic(self, capsys):
        assert run(capsys, "symbol", "--kind", "quartic", "--args", "10", "13")[:2] == (0, "-1")

    def test_gaussian_quartic(self, capsys):
        assert run(capsys, "symbol", "--kind", "quartic", "--args", "2", "3+2i")[:2] == (0, "-i")

    def test_quartic_two(self, capsys):
        assert run(capsys, "symbol", "--kind", "quartic-two", "--args", "1+4i")[:2] == (0, "-1")

    def test_jacobi_and_additive(self, capsys):
        assert run(capsys, "symbol", "--kind", "jacobi", "--args", "3", "7")[:2] == (0, "-1")
        assert run(capsys, "symbol", "--kind", "additive", "--args", "3", "7")[:2] == (0, "1")
        assert run(capsys, "symbol", "--kind", "additive-two", "--args", "17")[:2] == (0, "0")

    def test_json_output(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "symbol", "--kind", "legendre-zi", "--args", "2", "5i")
        assert code == EXIT_OK
        assert json.loads(out) == {"kind": "legendre-zi", "args": ["2", "5i"], "value": "1"}

    def test_wrong_arity(self, capsys):
        code, _, err = run(capsys, "symbol", "--kind", "jacobi", "--args", "3")
        assert code == EXIT_INPUT
        assert "takes 2" in err

    def test_not_an_integer(self, capsys):
        code, _, err = run(capsys, "symbol", "--kind", "jacobi", "--args", "x", "7")
        assert code == EXIT_INPUT
        assert "not an integer" in err


class TestGenusCommands:
    def test_redei(self, capsys):
        code, out, _ = run(capsys, "redei", "--n", "65")
        assert code == EXIT_OK
        assert "n=65 primes=5,13" in out
        assert "rank_R=1 rank_A=1 h4=1" in out

    def test_classify(self, capsys):
        code, out, _ = run(capsys, "classify", "--n", "65", "--convention", "d1")
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "h4=1 h8=0 P_k=false"
        assert "d=5 d'=13" in lines[1]
        assert lines[-1] == "convention=d1 verdict_d5=true verdict_d1=false"

    def test_classify_d5(self, capsys):
        _, out, _ = run(capsys, "classify", "--n", "65", "--convention", "d5")
        assert out.splitlines()[0] == "h4=1 h8=0 P_k=true"

    def test_classify_four_rank_two(self, capsys):
        _, out, _ = run(capsys, "classify", "--n", "1513")
        assert out.splitlines()[0] == "h4=2 h8=undefined P_k=false"

    def test_classify_json(self, capsys):
        _, out, _ = run(capsys, "--format", "json", "classify", "--n", "17")
        payload = json.loads(out)
        assert payload["in_Pk"] is True
        assert payload["h8"] == 0

    def test_classify_outside_Qk(self, capsys):
        code, _, err = run(capsys, "classify", "--n", "15")
        assert code == EXIT_INPUT
        assert "Q_k" in err


class TestOracleAndCounts:
    def test_oracle(self, capsys):
        code, out, _ = run(capsys, "oracle", "--n", "65")
        assert code == EXIT_OK
        assert out.splitlines()[:2] == ["disc=-260 h=8", "divisors=2,4"]

    def test_oracle_needs_n_or_sweep(self, capsys):
        assert run(capsys, "oracle")[0] == EXIT_INPUT

    def test_oracle_sweep(self, capsys):
        code, out, _ = run(capsys, "oracle", "--sweep", "1000", "--kmax", "2")
        assert code == EXIT_OK
        assert out == "mismatches=0 x0=1000 kmax=2"

    def test_matrix_count(self, capsys):
        code, out, _ = run(capsys, "matrix-count", "--k", "2")
        assert code == EXIT_OK
        assert out.startswith("count_B=1 count_Bprime=1 ")

    def test_matrix_count_json(self, capsys):
        _, out, _ = run(capsys, "--format", "json", "matrix-count", "--k", "3")
        assert json.loads(out)["sigma_B_values"] == [16]


class TestCensusAndVerify:
    def test_census_writes_reports(self, capsys, tmp_path):
        out_path = tmp_path / "census.json"
        csv_path = tmp_path / "census.csv"
        code, out, _ = run(
            capsys,
            "census", "--x", "100", "--k", "1", "--checkpoints", "50",
            "--out", str(out_path), "--csv", str(csv_path),
        )
        assert code == EXIT_OK
        assert out.startswith("census x=100 k=1")
        assert json.loads(out_path.read_text())["checkpoints"][0]["x"] == 50
        assert csv_path.read_text().startswith("x,class,count")

    def test_census_json(self, capsys):
        _, out, _ = run(capsys, "--format", "json", "census", "--x", "1e2", "--k", "1")
        assert json.loads(out)["checkpoints"][-1]["counts"]["C_k"] == 25

    def test_census_invalid_config(self, capsys):
        code, _, err = run(capsys, "census", "--x", "100", "--k", "12")
        assert code == EXIT_INPUT
        assert "error:" in err

    def test_verify_lemmas(self, capsys):
        code, out, _ = run(capsys, "--seed", "7", "verify", "--suite", "lemmas", "--samples", "25")
        assert code == EXIT_OK
        assert out.splitlines()[0] == "suite=lemmas seed=7 passed=true"

    def test_unknown_suite_is_a_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["verify", "--suite", "everything"])
        assert excinfo.value.code == 2

    def test_failed_suite_exits_3(self, monkeypatch):
        failing = VerificationReport(
            suite="bijection", seed=1, checks=[VerificationCheck(name="x", checked=1, failures=["n=65"])]
        )
        monkeypatch.setattr("congruent_census.cli.run_suite", lambda *args, **kwargs: failing)
        result = dispatch(
            CliInvocation(
                subcommand="verify",
                options={"suite": "bijection", "seed": 1, "samples": 1, "x": 100, "jobs": 1},
            )
        )
        assert result.exit_code == EXIT_INCONSISTENT
        assert "FAILED" in result.output

    def test_metrics_file(self, capsys, tmp_path):
        path = tmp_path / "census.prom"
        run(capsys, "--metrics-file", str(path), "matrix-count", "--k", "1")
        assert path.exists()
