"""Tests for helper functions in core.py."""

import pytest

from weyl_eulerian.core import default_threads, format_duration, run_cells


class TestFormatDuration:
    @pytest.mark.parametrize("seconds, text", [
        (0, "0.00s"),
        (0.417, "0.42s"),
        (9.994, "9.99s"),
        (42, "42s"),
        (59.6, "1m 00s"),
        (90, "1m 30s"),
        (120, "2m 00s"),
        (3661, "1h 01m"),
    ])
    def test_format(self, seconds, text):
        assert format_duration(seconds) == text


class TestDefaultThreads:
    def test_unset(self, monkeypatch):
        monkeypatch.delenv("WEYL_THREADS", raising=False)
        assert default_threads() == 1

    def test_from_env(self, monkeypatch):
        monkeypatch.setenv("WEYL_THREADS", "4")
        assert default_threads() == 4

    def test_not_an_integer(self, monkeypatch):
        monkeypatch.setenv("WEYL_THREADS", "many")
        with pytest.raises(ValueError, match="WEYL_THREADS"):
            default_threads()

    def test_zero(self, monkeypatch):
        monkeypatch.setenv("WEYL_THREADS", "0")
        with pytest.raises(ValueError):
            default_threads()


class TestRunCells:
    def test_serial(self):
        assert run_cells([3, 1, 2], lambda c: c * c, threads=1) == {3: 9, 1: 1, 2: 4}

    def test_parallel_keeps_cell_order(self):
        cells = list(range(20))
        out = run_cells(cells, lambda c: -c, threads=4)
        assert list(out) == cells
        assert all(out[c] == -c for c in cells)

    def test_progress_callback(self):
        seen = []
        run_cells(["a", "b"], str.upper, threads=1, on_progress=lambda done, total: seen.append((done, total)))
        assert seen == [(1, 2), (2, 2)]

    def test_progress_goes_to_stderr(self, capsys):
        run_cells([1, 2], lambda c: c, threads=1, verbose=1, label="cells")
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "cells: 2/2" in captured.err
