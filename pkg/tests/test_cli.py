import subprocess
import sys

import numpy as np
import pytest

from streamsample.cli import main
from streamsample.oracle import chi_square_gof


@pytest.fixture()
def fruit_file(tmp_path):
    path = tmp_path / "fruit.tsv"
    path.write_text("apple\t1.0\nbanana\t3.0\ncherry\t2.0\n")
    return str(path)


def run_main(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestSampling:
    def test_single_row_repeated(self, tmp_path, capsys):
        path = tmp_path / "one.tsv"
        path.write_text("only\t2.5\n")
        code, out, _ = run_main([str(path), "-m", "3", "--weight-col", "2",
                                 "--seed", "1"], capsys)
        assert code == 0
        assert out == "only\t2.5\n" * 3

    def test_output_has_m_lines(self, fruit_file, capsys):
        code, out, _ = run_main([fruit_file, "-m", "5", "--weight-col", "2",
                                 "--seed", "7"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 5
        assert set(lines) <= {"apple\t1.0", "banana\t3.0", "cherry\t2.0"}

    @pytest.mark.parametrize("algo", ["basic", "heap", "skip", "parallel-skip",
                                      "two-pass"])
    def test_all_algorithms(self, fruit_file, capsys, algo):
        code, out, _ = run_main([fruit_file, "--algo", algo, "-m", "4",
                                 "--weight-col", "2", "--seed", "3"], capsys)
        assert code == 0
        assert len(out.splitlines()) == 4

    def test_rows_sampled_whole(self, tmp_path, capsys):
        path = tmp_path / "wide.tsv"
        path.write_text("a\t1.0\textra\tcolumns\n")
        code, out, _ = run_main([str(path), "-m", "1", "--weight-col", "2",
                                 "--seed", "0"], capsys)
        assert code == 0
        assert out == "a\t1.0\textra\tcolumns\n"

    def test_weight_column_by_name_consumes_header(self, tmp_path, capsys):
        path = tmp_path / "named.tsv"
        path.write_text("item\tmass\nxx\t1.0\nyy\t3.0\n")
        code, out, _ = run_main([str(path), "-m", "2", "--weight-col", "mass",
                                 "--seed", "5"], capsys)
        assert code == 0
        assert "item\tmass" not in out
        assert set(out.splitlines()) <= {"xx\t1.0", "yy\t3.0"}

    def test_custom_delimiter(self, tmp_path, capsys):
        path = tmp_path / "csv.csv"
        path.write_text("a,1.0\nb,2.0\n")
        code, out, _ = run_main([str(path), "-m", "2", "--weight-col", "2",
                                 "--delimiter", ",", "--seed", "1"], capsys)
        assert code == 0
        assert set(out.splitlines()) <= {"a,1.0", "b,2.0"}

    def test_escaped_tab_delimiter(self, fruit_file, capsys):
        code, _, _ = run_main([fruit_file, "-m", "1", "--weight-col", "2",
                               "--delimiter", "\\t", "--seed", "1"], capsys)
        assert code == 0

    def test_multiple_inputs_concatenated(self, tmp_path, capsys):
        a = tmp_path / "a.tsv"
        b = tmp_path / "b.tsv"
        a.write_text("a1\t1.0\n")
        b.write_text("b1\t1.0\nb2\t1.0\n")
        code, out, _ = run_main([str(a), str(b), "-m", "3", "--weight-col", "2",
                                 "--seed", "2"], capsys)
        assert code == 0
        assert len(out.splitlines()) == 3

    def test_verbose_summary(self, fruit_file, capsys):
        code, out, _ = run_main([fruit_file, "-m", "2", "--weight-col", "2",
                                 "--seed", "11", "--verbose"], capsys)
        assert code == 0
        summary = out.splitlines()[-1]
        assert summary.startswith("# ")
        assert "algorithm=skip" in summary
        assert "seed=11" in summary
        assert "items=3" in summary
        assert "total_weight=6.0" in summary

    def test_output_file(self, fruit_file, tmp_path, capsys):
        dest = tmp_path / "out.txt"
        code, out, _ = run_main([fruit_file, "-m", "2", "--weight-col", "2",
                                 "--seed", "1", "--output", str(dest)], capsys)
        assert code == 0
        assert out == ""
        assert len(dest.read_text().splitlines()) == 2

    def test_lenient_zero(self, tmp_path, capsys):
        path = tmp_path / "zero.tsv"
        path.write_text("a\t1.0\nz\t0.0\nb\t2.0\n")
        code, out, _ = run_main([str(path), "-m", "2", "--weight-col", "2",
                                 "--seed", "1", "--lenient-zero", "--verbose"],
                                capsys)
        assert code == 0
        assert "z\t0.0" not in out
        assert "skipped_zero_weights=1" in out
        assert "items=2" in out


class TestExitCodes:
    def test_zero_weight_strict_is_malformed(self, tmp_path, capsys):
        path = tmp_path / "zero.tsv"
        path.write_text("a\t1.0\nz\t0.0\n")
        code, _, err = run_main([str(path), "-m", "1", "--weight-col", "2"],
                                capsys)
        assert code == 2
        assert "line 2" in err

    def test_negative_weight(self, tmp_path, capsys):
        path = tmp_path / "neg.tsv"
        path.write_text("a\t-3\n")
        code, _, err = run_main([str(path), "-m", "1", "--weight-col", "2"],
                                capsys)
        assert code == 2
        assert "line 1" in err

    def test_unparseable_weight(self, tmp_path, capsys):
        path = tmp_path / "bad.tsv"
        path.write_text("a\theavy\n")
        code, _, err = run_main([str(path), "-m", "1", "--weight-col", "2"],
                                capsys)
        assert code == 2
        assert "line 1" in err

    def test_missing_column(self, tmp_path, capsys):
        path = tmp_path / "short.tsv"
        path.write_text("only-one-column\n")
        code, _, err = run_main([str(path), "-m", "1", "--weight-col", "2"],
                                capsys)
        assert code == 2
        assert "line 1" in err

    def test_empty_input(self, tmp_path, capsys):
        path = tmp_path / "empty.tsv"
        path.write_text("")
        code, _, err = run_main([str(path), "-m", "1", "--weight-col", "2"],
                                capsys)
        assert code == 3
        assert "empty" in err

    def test_empty_stream_parallel(self, tmp_path, capsys):
        full = tmp_path / "full.tsv"
        empty = tmp_path / "none.tsv"
        full.write_text("a\t1.0\n")
        empty.write_text("")
        code, _, err = run_main([str(full), str(empty), "--algo",
                                 "parallel-skip", "-m", "1",
                                 "--weight-col", "2"], capsys)
        assert code == 3

    def test_missing_file(self, capsys):
        code, _, err = run_main(["/no/such/file", "-m", "1",
                                 "--weight-col", "2"], capsys)
        assert code == 1

    def test_usage_error_exits_2(self, fruit_file):
        with pytest.raises(SystemExit) as exc:
            main([fruit_file, "--weight-col", "2"])  # -m missing
        assert exc.value.code == 2


class TestDeterminism:
    ARGS = ["-m", "4", "--weight-col", "2", "--seed", "99", "--verbose"]

    def test_replay_in_process(self, fruit_file, capsys):
        _, out1, _ = run_main([fruit_file, *self.ARGS], capsys)
        _, out2, _ = run_main([fruit_file, *self.ARGS], capsys)
        assert out1 == out2

    def test_replay_subprocess_byte_identical(self, fruit_file):
        cmd = [sys.executable, "-m", "streamsample", fruit_file, *self.ARGS]
        a = subprocess.run(cmd, capture_output=True)
        b = subprocess.run(cmd, capture_output=True)
        assert a.returncode == b.returncode == 0
        assert a.stdout == b.stdout

    def test_stdin_sampling(self):
        cmd = [sys.executable, "-m", "streamsample", "-", "-m", "2",
               "--weight-col", "2", "--seed", "4"]
        data = b"r1\t1.0\nr2\t2.0\n"
        a = subprocess.run(cmd, input=data, capture_output=True)
        assert a.returncode == 0
        assert len(a.stdout.decode().splitlines()) == 2

    @pytest.mark.parametrize("algo", ["parallel-skip", "two-pass"])
    def test_parallel_modes_deterministic(self, tmp_path, capsys, algo):
        a = tmp_path / "a.tsv"
        b = tmp_path / "b.tsv"
        a.write_text("a1\t1.0\na2\t2.0\n")
        b.write_text("b1\t3.0\n")
        args = [str(a), str(b), "--algo", algo, "-m", "5", "--weight-col", "2",
                "--seed", "12"]
        _, out1, _ = run_main(args, capsys)
        _, out2, _ = run_main(args, capsys)
        assert out1 == out2


class TestOutputLaw:
    def test_weighted_marginal(self, tmp_path):
        # weights 1:3 with m=1: the heavy row appears ~75% of the time
        from streamsample.cli import _parse_args, run_cli

        path = tmp_path / "two.tsv"
        path.write_text("light\t1.0\nheavy\t3.0\n")
        n = 20_000
        heavy = 0
        for seed in range(n):
            args = _parse_args([str(path), "-m", "1", "--weight-col", "2",
                                "--seed", str(seed)])
            reservoir, _ = run_cli(args)
            heavy += reservoir[0].startswith("heavy")
        report = chi_square_gof([n - heavy, heavy], [0.25, 0.75])
        assert report.p_value > 0.001

    def test_algorithms_statistically_equivalent(self, tmp_path):
        from streamsample.cli import _parse_args, run_cli
        from streamsample.oracle import chi_square_two_sample

        path = tmp_path / "two.tsv"
        path.write_text("light\t1.0\nheavy\t3.0\n")
        n = 8_000
        hists = {}
        for algo in ("basic", "heap", "skip"):
            h = np.zeros(2)
            for seed in range(n):
                args = _parse_args([str(path), "--algo", algo, "-m", "1",
                                    "--weight-col", "2", "--seed", str(seed)])
                reservoir, _ = run_cli(args)
                h[reservoir[0].startswith("heavy")] += 1
            hists[algo] = h
        assert chi_square_two_sample(hists["basic"], hists["heap"]).p_value > 0.001
        assert chi_square_two_sample(hists["basic"], hists["skip"]).p_value > 0.001
