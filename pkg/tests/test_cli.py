"""Tests for the command-line interface.

A module-scoped simulated benchmark feeds an end-to-end run of every
subcommand; exit codes follow the 0/1/2 convention.
"""
import pytest

from topovelocity.cli import _parse_ints, main


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    rc = main(
        [
            "simulate",
            "--seed", "0",
            "--days", "20",
            "--nodes", "40",
            "--anomalies", "3",
            "--out-transactions", str(d / "tx.csv"),
            "--out-prices", str(d / "px.csv"),
        ]
    )
    assert rc == 0
    return d


class TestUsage:
    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "simulate" in capsys.readouterr().out

    @pytest.mark.parametrize(
        "cmd",
        ["simulate", "diagram", "summarize", "distance", "check-stability",
         "featurize", "evaluate"],
    )
    def test_subcommand_help_exits_zero(self, cmd, capsys):
        assert main([cmd, "--help"]) == 0
        assert "usage" in capsys.readouterr().out

    def test_no_command_is_usage_error(self, capsys):
        assert main([]) == 2

    def test_unknown_flag_is_usage_error(self, capsys):
        assert main(["simulate", "--bogus"]) == 2

    def test_bad_choice_is_usage_error(self, capsys):
        assert main(["summarize", "--diagram", "x", "--method", "pca",
                     "--alpha", "0", "--beta", "1"]) == 2

    def test_missing_file_is_runtime_error(self, capsys):
        assert main(["featurize", "--transactions", "/nonexistent/tx.csv"]) == 1
        assert "error:" in capsys.readouterr().err


class TestParseInts:
    def test_range(self):
        assert _parse_ints("1..7") == (1, 2, 3, 4, 5, 6, 7)

    def test_list(self):
        assert _parse_ints("1, 2,3") == (1, 2, 3)

    def test_single(self):
        assert _parse_ints("4") == (4,)


class TestEndToEnd:
    def test_simulate_wrote_both_files(self, workdir, capsys):
        tx = (workdir / "tx.csv").read_text().splitlines()
        px = (workdir / "px.csv").read_text().splitlines()
        assert tx[0] == "date,src,dst,amount"
        assert px[0] == "date,price"
        assert len(px) == 1 + 20 + 7

    def test_diagram(self, workdir, capsys):
        rc = main(
            [
                "diagram",
                "--transactions", str(workdir / "tx.csv"),
                "--date", "2024-01-01",
                "--output", str(workdir / "d.csv"),
            ]
        )
        assert rc == 0
        lines = (workdir / "d.csv").read_text().splitlines()
        assert lines[0] == "dimension,birth,death"
        assert len(lines) > 1

    def test_diagram_needs_date_on_multiday_file(self, workdir, capsys):
        rc = main(["diagram", "--transactions", str(workdir / "tx.csv")])
        assert rc == 1
        assert "--date" in capsys.readouterr().err

    def test_summarize_to_stdout(self, workdir, capsys):
        rc = main(
            [
                "summarize",
                "--diagram", str(workdir / "d.csv"),
                "--method", "owhnpv",
                "--alpha", "10", "--beta", "60",
                "--m", "6",
            ]
        )
        assert rc == 0
        out = capsys.readouterr().out.splitlines()
        header = out[0].split(",")
        assert header[0] == "owhnpv_h0_00"
        assert len(header) == 12
        assert len(out[1].split(",")) == 12

    def test_distance_of_file_with_itself_is_zero(self, workdir, capsys):
        rc = main(
            [
                "distance",
                str(workdir / "d.csv"), str(workdir / "d.csv"),
                "--dim", "0",
                "--cap-beta", "100",
            ]
        )
        assert rc == 0
        assert float(capsys.readouterr().out.strip()) == 0.0

    def test_distance_rejects_uncapped_essential_classes(self, workdir, capsys):
        rc = main(
            ["distance", str(workdir / "d.csv"), str(workdir / "d.csv"), "--dim", "0"]
        )
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_featurize(self, workdir, capsys):
        rc = main(
            [
                "featurize",
                "--transactions", str(workdir / "tx.csv"),
                "--m", "4",
                "--output", str(workdir / "f.csv"),
            ]
        )
        assert rc == 0
        lines = (workdir / "f.csv").read_text().splitlines()
        assert len(lines) == 1 + 20
        assert lines[0].startswith("date,degree_mean")

    def test_evaluate(self, workdir, capsys):
        rc = main(
            [
                "evaluate",
                "--transactions", str(workdir / "tx.csv"),
                "--prices", str(workdir / "px.csv"),
                "--methods", "owhnpv",
                "--horizons", "4",
                "--nsub", "1",
                "--m", "6",
                "--trees", "10",
                "--cv-folds", "5",
                "--cv-repeats", "1",
                "--output", str(workdir / "r.csv"),
            ]
        )
        assert rc == 0
        lines = (workdir / "r.csv").read_text().splitlines()
        assert lines[0] == "method,model,horizon,n_sub,mean_auc,auc_gain_pct,auc_gain_abs"
        # baseline row plus M2 and M3
        assert len(lines) == 4
        assert "best AUC gain" in capsys.readouterr().out

    def test_check_stability(self, capsys):
        rc = main(["check-stability", "--trials", "20", "--seed", "0"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "stability bound: 0 violations in 20 trials" in out
        assert "diagonal augmentation" in out
