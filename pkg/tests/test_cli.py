import json

import pytest

from rankrobust.cli import run

SUBCOMMANDS = (
    "normalize", "pairs", "score", "histogram", "trend",
    "taxonomy", "ensemble", "correlate", "synth",
)


def _read(path):
    return path.read_bytes()


class TestUsage:
    def test_top_level_help_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["--help"])
        assert exc.value.code == 0

    @pytest.mark.parametrize("command", SUBCOMMANDS)
    def test_subcommand_help_exits_zero(self, command, capsys):
        with pytest.raises(SystemExit) as exc:
            run([command, "--help"])
        assert exc.value.code == 0

    def test_unknown_flag_exits_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["synth", "--frobnicate"])
        assert exc.value.code == 1

    def test_unknown_command_exits_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["warp"])
        assert exc.value.code == 1

    def test_no_command_exits_one(self, capsys):
        assert run([]) == 1

    def test_missing_file_exits_one(self, capsys, tmp_path):
        assert run(["histogram", "--in", str(tmp_path / "absent.tsv")]) == 1


class TestPipeline:
    @pytest.fixture()
    def logs(self, tmp_path):
        out = tmp_path / "logs"
        assert run([
            "synth", "--seed", "7", "--queries", "30", "--weeks", "2",
            "--noise", "jitter", "--out", str(out),
        ]) == 0
        return out

    def test_synth_writes_log_and_truth(self, logs):
        assert (logs / "log.tsv").exists()
        assert (logs / "truth.tsv").exists()

    def test_synth_is_byte_deterministic(self, tmp_path):
        args = ["synth", "--seed", "5", "--queries", "10", "--weeks", "2"]
        a, b = tmp_path / "a", tmp_path / "b"
        assert run(args + ["--out", str(a)]) == 0
        assert run(args + ["--out", str(b)]) == 0
        assert _read(a / "log.tsv") == _read(b / "log.tsv")
        assert _read(a / "truth.tsv") == _read(b / "truth.tsv")

    def test_pairs_score_histogram(self, logs, tmp_path, capsys):
        pairs = tmp_path / "pairs.tsv"
        scores = tmp_path / "scores.tsv"
        hist = tmp_path / "hist.csv"
        common = ["--log", str(logs / "log.tsv"), "--week", "2023-04-15"]
        assert run(["pairs", *common, "--out", str(pairs)]) == 0
        assert pairs.read_text().strip()
        assert run(["score", "--pairs", str(pairs), *common, "--out", str(scores)]) == 0
        assert run(["histogram", "--in", str(scores), "--out", str(hist)]) == 0
        lines = hist.read_text().strip().splitlines()
        assert lines[0] == "bin_lo,bin_hi,count,rate"
        assert len(lines) == 11
        rates = [float(line.split(",")[3]) for line in lines[1:]]
        assert sum(rates) == pytest.approx(1.0, abs=1e-6)

    def test_score_jobs_byte_identical(self, logs, tmp_path):
        pairs = tmp_path / "pairs.tsv"
        common = ["--log", str(logs / "log.tsv"), "--week", "2023-04-15"]
        assert run(["pairs", *common, "--out", str(pairs)]) == 0
        one = tmp_path / "jobs1.tsv"
        two = tmp_path / "jobs2.tsv"
        assert run(["score", "--pairs", str(pairs), *common,
                    "--jobs", "1", "--out", str(one)]) == 0
        assert run(["score", "--pairs", str(pairs), *common,
                    "--jobs", "2", "--out", str(two)]) == 0
        assert _read(one) == _read(two)

    def test_trend_over_weeks(self, logs, tmp_path):
        files = []
        for week in ("2023-04-15", "2023-04-22"):
            pairs = tmp_path / f"pairs-{week}.tsv"
            scores = tmp_path / f"scores-{week}.tsv"
            common = ["--log", str(logs / "log.tsv"), "--week", week]
            assert run(["pairs", *common, "--out", str(pairs)]) == 0
            assert run(["score", "--pairs", str(pairs), *common, "--out", str(scores)]) == 0
            files.append(str(scores))
        out = tmp_path / "trend.csv"
        assert run(["trend", "--in", *files, "--out", str(out)]) == 0
        assert out.read_text().splitlines()[0] == "bin_lo,bin_hi,mean_rate,std_rate"

    def test_taxonomy_report(self, logs, tmp_path):
        pairs = tmp_path / "pairs.tsv"
        labels = tmp_path / "labels.csv"
        overflow = tmp_path / "overflow.tsv"
        common = ["--log", str(logs / "log.tsv"), "--week", "2023-04-15"]
        assert run(["pairs", *common, "--out", str(pairs)]) == 0
        assert run(["taxonomy", "--pairs", str(pairs), "--out", str(labels),
                    "--overflow", str(overflow)]) == 0
        lines = labels.read_text().strip().splitlines()
        assert lines[0] == "label,count,rate"
        assert len(lines) == 10

    def test_ensemble_report(self, logs, tmp_path):
        out = tmp_path / "ensemble.csv"
        assert run(["ensemble", "--log", str(logs / "log.tsv"),
                    "--single-week", "2023-04-15", "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "variant,bin_lo,bin_hi,rate"
        assert len(lines) == 11

    def test_normalize_command(self, tmp_path):
        queries = tmp_path / "queries.txt"
        queries.write_text("battery AA\nAA battery\n", encoding="utf-8")
        out = tmp_path / "keys.tsv"
        assert run(["normalize", "--in", str(queries), "--out", str(out)]) == 0
        rows = [line.split("\t") for line in out.read_text().strip().splitlines()]
        assert rows[0][1] == rows[1][1]

    def test_correlate_with_sim_pairs(self, tmp_path):
        # build a synthetic score file carrying SIM provenance
        scores = tmp_path / "scores.tsv"
        lines = []
        for i in range(10):
            x = i / 10
            lines.append(
                f"q{i}a\tq{i}b\tSIM\t{1 - x}\t\t0\t{x}\t{1 - x}\n"
            )
        scores.write_text("".join(lines), encoding="utf-8")
        out = tmp_path / "corr.json"
        assert run(["correlate", "--in", str(scores), "--format", "json",
                    "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["r"] == pytest.approx(-1.0, abs=1e-9)
        assert payload["low_correlation"] is False

    def test_config_via_environment(self, tmp_path, monkeypatch):
        cfg = tmp_path / "norm.cfg"
        cfg.write_text("abbrev oz ounce\n", encoding="utf-8")
        monkeypatch.setenv("RANKROBUST_CONFIG", str(cfg))
        queries = tmp_path / "queries.txt"
        queries.write_text("soup 12 oz\n", encoding="utf-8")
        out = tmp_path / "keys.tsv"
        assert run(["normalize", "--in", str(queries), "--out", str(out)]) == 0
        assert "ounc" in out.read_text()
