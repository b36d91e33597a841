"""Tests for the command-line front end."""

import json

import pytest

from weyl_eulerian.cli import (
    EXIT_COUNTEREXAMPLE,
    EXIT_INCONCLUSIVE,
    EXIT_PASS,
    EXIT_USAGE,
    JobConfig,
    join_negative_ranges,
    main,
    parse_args,
    parse_range,
    read_config,
)

POLY1 = '{"constructor": "polynomial", "args": {"n": 1}}'
POLY1_SHIFTED = '{"constructor": "polynomial", "args": {"n": 1}, "shift": 1}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.startswith("{") else out)


class TestParseRange:
    @pytest.mark.parametrize("text,expected", [("-3..2", (-3, 2)), ("4", (4, 4)), ("0..0", (0, 0))])
    def test_valid(self, text, expected):
        assert parse_range(text) == expected

    @pytest.mark.parametrize("text", ["3..1", "a..b", "1..2..3", ""])
    def test_invalid(self, text):
        import argparse

        with pytest.raises(argparse.ArgumentTypeError):
            parse_range(text)


class TestJobConfig:
    def test_rejects_bad_n(self):
        with pytest.raises(ValueError, match="at least 1"):
            JobConfig("eval", n=0)

    def test_default_window(self):
        assert JobConfig("derham", window=(-2, 1)).resolved_window(3) == (-2, 1)


class TestConfigFile:
    def test_read(self, tmp_path):
        path = tmp_path / "job.cfg"
        path.write_text("# comment\nn = 2\nexpr = x1*d1  # trailing\nraw = yes\n")
        assert read_config(path) == {"n": "2", "expr": "x1*d1", "raw": True}

    def test_missing_equals(self, tmp_path):
        path = tmp_path / "job.cfg"
        path.write_text("n 2\n")
        with pytest.raises(ValueError, match="key = value"):
            read_config(path)

    def test_supplies_required_options(self, tmp_path, capsys):
        path = tmp_path / "job.cfg"
        path.write_text("n = 1\nexpr = d1*x1\n")
        code, payload = run(capsys, "--config", str(path), "eval")
        assert code == EXIT_PASS
        assert payload["canonical"] == "x1*d1 + 1"

    def test_command_line_wins(self, tmp_path):
        path = tmp_path / "job.cfg"
        path.write_text("n = 1\nexpr = x1\n")
        args = parse_args(["--config", str(path), "eval", "--expr", "d1"])
        assert args.n == 1 and args.expr == "d1"

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "job.cfg"
        path.write_text("colour = blue\n")
        with pytest.raises(SystemExit) as exc:
            parse_args(["--config", str(path), "eval"])
        assert exc.value.code == EXIT_USAGE


class TestEval:
    def test_canonical(self, capsys):
        code, payload = run(capsys, "eval", "--n", "1", "--expr", "d1*x1")
        assert code == EXIT_PASS
        assert payload["canonical"] == "x1*d1 + 1"
        assert payload["degree"] == 0
        assert payload["transpose"] == "-x1*d1"

    def test_matrix(self, capsys):
        code, payload = run(capsys, "eval", "--n", "1", "--expr", "x1*d1",
                            "--model", POLY1, "--degree", "2")
        assert code == EXIT_PASS
        assert payload["matrix"]["rows"] == [["2"]]

    def test_parse_error(self, capsys):
        assert main(["eval", "--n", "1", "--expr", "x1 +"]) == EXIT_USAGE
        assert "error" in capsys.readouterr().err


class TestGroebner:
    def test_gb(self, capsys):
        code, payload = run(capsys, "gb", "--n", "1", "--gens", "x1*d1")
        assert code == EXIT_PASS
        assert payload["basis"] == ["x1*d1"]
        assert payload["index"] == 1

    def test_eulerian_test(self, capsys):
        code, payload = run(capsys, "eulerian-test", "--n", "1", "--gens", "x1")
        assert code == EXIT_INCONCLUSIVE
        assert payload["index"] is None
        code, payload = run(capsys, "eulerian-test", "--n", "1", "--gens", "x1", "--shift", "1")
        assert code == EXIT_PASS
        assert payload["index"] == 1

    def test_pair_budget(self, capsys):
        assert main(["gb", "--n", "1", "--gens", "x1, d1", "--max-pairs", "0"]) == EXIT_INCONCLUSIVE
        assert "max_pairs=0" in capsys.readouterr().err


class TestLocalCohomology:
    def test_hull(self, capsys):
        code, payload = run(capsys, "localcoh", "--n", "1", "--ideal", "x1", "--i", "1",
                            "--window=-3..0")
        assert code == EXIT_PASS
        assert payload["dims"] == [[-3, 1], [-2, 1], [-1, 1], [0, 0]]
        assert payload["eulerian"]["uniform_bound"] == 1

    def test_intermediate_is_inconclusive(self, capsys):
        assert main(["localcoh", "--n", "2", "--ideal", "x1", "--i", "1"]) == EXIT_INCONCLUSIVE
        assert "infinite-dimensional" in capsys.readouterr().err

    def test_empty_window(self):
        with pytest.raises(SystemExit) as exc:
            main(["localcoh", "--n", "1", "--ideal", "x1", "--i", "1", "--window", "3..1"])
        assert exc.value.code == EXIT_USAGE


class TestDeRham:
    def test_polynomial(self, capsys):
        code, payload = run(capsys, "derham", "--model", POLY1, "--window=-3..1")
        assert code == EXIT_PASS
        assert payload["table"] == [[0, -1, 1]]
        assert payload["expected_degree"] == -1

    def test_shift_is_a_counterexample(self, capsys):
        code, payload = run(capsys, "derham", "--model", POLY1_SHIFTED, "--window=-3..1")
        assert code == EXIT_COUNTEREXAMPLE
        assert payload["counterexample"] == [0, -2, 1]

    def test_csv(self, capsys):
        code, out = run(capsys, "derham", "--model", POLY1, "--window=-3..1", "--out", "csv")
        assert code == EXIT_PASS
        assert out == "nu,degree,dim\n0,-1,1\n"

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        assert main(["derham", "--model", POLY1, "--window=-2..0", "-o", str(target)]) == EXIT_PASS
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text())["invariant"] == "de Rham"

    def test_bad_descriptor(self):
        with pytest.raises(SystemExit) as exc:
            main(["derham", "--model", "{not json"])
        assert exc.value.code == EXIT_USAGE


class TestExtTor:
    def test_ext_over_an(self, capsys):
        M = '{"constructor": "presentation", "args": {"n": 1, "gens": ["d1"]}}'
        code, payload = run(capsys, "ext", "--M", M, "--N", POLY1, "--window=-2..2")
        assert code == EXIT_PASS
        assert payload["table"] == [[0, 0, 1]]

    def test_tor_against_rr(self, capsys):
        code, payload = run(capsys, "tor", "--model", POLY1, "--window=-3..1")
        assert code == EXIT_PASS
        assert payload["expected_degree"] == -1


class TestNegativeWindows:
    def test_join(self):
        argv = ["tor", "--window", "-12..6", "--nu", "0..1", "--model", POLY1]
        assert join_negative_ranges(argv) == ["tor", "--window=-12..6", "--nu", "0..1", "--model", POLY1]

    def test_join_leaves_other_options(self):
        argv = ["eulerian-test", "--shift", "-1", "--window"]
        assert join_negative_ranges(argv) == argv

    def test_localcoh(self, capsys):
        code, payload = run(capsys, "localcoh", "--n", "2", "--ideal", "x1, x2", "--i", "2",
                            "--window", "-10..5")
        assert code == EXIT_PASS
        dims = dict(map(tuple, payload["dims"]))
        assert dims[-10] == 9 and dims[-3] == 2 and dims[-1] == 0 and dims[5] == 0

    def test_ext(self, capsys):
        M = '{"constructor": "presentation", "args": {"n": 1, "gens": ["d1"]}}'
        code, payload = run(capsys, "ext", "--M", M, "--N", POLY1, "--nu", "0..1",
                            "--window", "-10..10", "--expect", "0")
        assert code == EXIT_PASS
        assert payload["window"] == [-10, 10]
        assert payload["table"] == [[0, 0, 1]]

    def test_derham(self, capsys):
        code, payload = run(capsys, "derham", "--model", POLY1, "--window", "-12..3")
        assert code == EXIT_PASS
        assert payload["table"] == [[0, -1, 1]]
