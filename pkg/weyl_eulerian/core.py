"""Core orchestration: descriptors -> models -> per-degree homology tables."""

from __future__ import annotations

import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Hashable, Sequence, TypeVar

from .catalog import build_model, build_resolution
from .homology import (
    ConcentrationReport,
    Window,
    concentration,
    de_rham,
    ext_over_an,
    ext_over_r,
    koszul_complex,
    tor_against_rr,
    tor_over_an,
    tor_over_r,
    tor_over_r_complex,
)
from .models import GradedModel, default_window

Cell = TypeVar("Cell", bound=Hashable)
Value = TypeVar("Value")


# ---------------------------------------------------------------------------
# Worker pool
# ---------------------------------------------------------------------------

def default_threads() -> int:
    """Worker count from ``WEYL_THREADS``, defaulting to 1."""
    raw = os.environ.get("WEYL_THREADS", "1")
    try:
        threads = int(raw)
    except ValueError:
        raise ValueError(f"WEYL_THREADS must be an integer, got {raw!r}") from None
    if threads < 1:
        raise ValueError(f"WEYL_THREADS must be at least 1, got {threads}")
    return threads


# ---------------------------------------------------------------------------
# ETA formatting
# ---------------------------------------------------------------------------

def format_duration(seconds: float) -> str:
    """``0.42s`` below ten seconds, then ``37s``, ``2m 05s`` or ``1h 01m``."""
    if seconds < 10:
        return f"{seconds:.2f}s"
    whole = round(seconds)
    if whole < 60:
        return f"{whole}s"
    m, s = divmod(whole, 60)
    if m < 60:
        return f"{m}m {s:02d}s"
    h, m = divmod(m, 60)
    return f"{h}h {m:02d}m"


def run_cells(
    cells: Sequence[Cell],
    compute: Callable[[Cell], Value],
    *,
    threads: int | None = None,
    verbose: int = 0,
    label: str = "cells",
    on_progress: Callable[[int, int], None] | None = None,
) -> dict[Cell, Value]:
    """Evaluate *compute* on every cell, possibly in parallel.

    Results are keyed by cell and ordered like *cells*, whatever the
    completion order.

    Parameters
    ----------
    cells:
        Independent units of work, typically ``(nu, degree)`` pairs.
    compute:
        Pure function of a cell.  Models and complexes memoise under a lock,
        so sharing them between workers is safe.
    threads:
        Worker count; ``None`` reads ``WEYL_THREADS``.
    verbose:
        ``0`` = silent, ``1`` = progress with ETA on stderr, ``3`` = one
        line per finished cell.
    on_progress:
        Optional callback ``(done, total)`` fired after each cell.
    """
    if threads is None:
        threads = default_threads()
    total = len(cells)
    results: dict[Cell, Value] = {}
    t_start = time.monotonic()

    def report(done: int, cell: Cell, value: Value) -> None:
        if on_progress is not None:
            on_progress(done, total)
        if verbose >= 3:
            print(f"  [{label}] {cell} -> {value}", file=sys.stderr)
        if verbose >= 1 and (done == total or done % max(1, total // 10) == 0):
            elapsed = time.monotonic() - t_start
            remaining = elapsed / done * (total - done)
            print(f"  {label}: {done}/{total} cells, elapsed {format_duration(elapsed)}, "
                  f"ETA {format_duration(remaining)}", file=sys.stderr)

    if threads == 1 or total <= 1:
        for done, cell in enumerate(cells, start=1):
            results[cell] = compute(cell)
            report(done, cell, results[cell])
        return results

    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {cell: pool.submit(compute, cell) for cell in cells}
        for done, cell in enumerate(cells, start=1):
            results[cell] = futures[cell].result()
            report(done, cell, results[cell])
    return results


def _tables(nus: Sequence[int], window: Window, compute: Callable[[int, int], int],
            **kwargs) -> dict[int, dict[int, int]]:
    lo, hi = window
    cells = [(nu, d) for nu in nus for d in range(lo, hi + 1)]
    values = run_cells(cells, lambda c: compute(*c), **kwargs)
    return {nu: {d: values[(nu, d)] for d in range(lo, hi + 1)} for nu in nus}


# ---------------------------------------------------------------------------
# Jobs
# ---------------------------------------------------------------------------

def derham_report(
    model: GradedModel,
    window: Window | None = None,
    *,
    graded: bool = True,
    euler_bound: int | None = None,
    threads: int | None = None,
    verbose: int = 0,
) -> ConcentrationReport:
    """De Rham cohomology ``H^nu(d; M)`` for all ``0 <= nu <= n``.

    In the graded convention the expected degree is ``-n``; Euler orders
    are recorded on every non-zero cell when *euler_bound* is given.
    """
    n = model.n
    window = window or default_window(n)
    nus = list(range(n + 1))
    if verbose >= 2:
        print(f"De Rham cohomology of {model.provenance} on {window}", file=sys.stderr)
    K = koszul_complex(model, [f"d{i}" for i in range(1, n + 1)])
    lo, hi = window
    if graded:
        tables = _tables(nus, window, lambda nu, d: K.cohomology(nu, d),
                         threads=threads, verbose=verbose, label="de Rham")
    else:
        tables = {nu: de_rham(model, nu, window, graded=False) for nu in nus}
    report = concentration(tables, -n if graded else None, invariant="de Rham",
                           provenance=model.provenance)
    if euler_bound is not None and graded:
        report.euler_orders = {(nu, d): K.euler_order(nu, d, euler_bound)
                               for nu, d, _ in report.entries()}
    return report


def tor_report(
    model: GradedModel,
    *,
    kind: str = "rr",
    other: GradedModel | None = None,
    descriptor: dict | None = None,
    window: Window | None = None,
    euler_bound: int | None = None,
    threads: int | None = None,
    verbose: int = 0,
) -> ConcentrationReport:
    """Tor tables for ``0 <= nu <= n``.

    ``kind="rr"``: ``Tor^{A_n}(R^r, M)``.  ``kind="an"``: ``Tor^{A_n}(N^♯, M)``
    with M given by a presentation *descriptor* and N = *model*.
    ``kind="r"``: ``Tor^R(M, N)`` with N = *other*.
    """
    n = model.n
    window = window or default_window(n)
    nus = list(range(n + 1))
    expected = -n
    if kind == "rr":
        tables = _tables(nus, window, lambda nu, d: tor_against_rr(model, nu, (d, d))[d],
                         threads=threads, verbose=verbose, label="Tor(R^r, M)")
    elif kind == "an":
        if descriptor is None:
            raise ValueError("Tor over A_n needs a presentation descriptor for M")
        res = build_resolution(descriptor)
        tables = {nu: tor_over_an(res, model, nu, window) for nu in nus}
    elif kind == "r":
        if other is None:
            raise ValueError("Tor over R needs a second module")
        tables = {nu: tor_over_r(model, other, nu, window) for nu in nus}
        expected = None
    else:
        raise ValueError(f"Unknown Tor kind {kind!r}; use rr, an or r")
    report = concentration(tables, expected, invariant=f"Tor[{kind}]", provenance=model.provenance)
    if euler_bound is not None and kind == "r":
        try:
            K = tor_over_r_complex(model, other)
        except ValueError:
            K = None
        if K is not None:
            report.euler_orders = {(nu, d): K.euler_order(n - nu, d, euler_bound)
                                   for nu, d, _ in report.entries()}
    return report


def ext_report(
    descriptor: dict,
    target: GradedModel,
    *,
    over: str = "an",
    window: Window | None = None,
    threads: int | None = None,
    verbose: int = 0,
) -> ConcentrationReport:
    """Ext tables for ``0 <= nu <= n`` of the module named by *descriptor* into *target*.

    ``over="an"`` uses a free resolution (descriptor must be a presentation);
    ``over="r"`` uses the diagonal complex over R.
    """
    n = target.n
    window = window or default_window(n)
    nus = list(range(n + 1))
    if over == "an":
        res = build_resolution(descriptor, max_length=n + 1)
        usable = [nu for nu in nus if res.available(nu + 1)]
        if verbose >= 2:
            print(f"Resolution ranks {res.ranks}, truncated={res.truncated}", file=sys.stderr)
        tables = _tables(usable, window, lambda nu, d: ext_over_an(res, target, nu, (d, d))[d],
                         threads=threads, verbose=verbose, label="Ext over A_n")
        expected = 0
    elif over == "r":
        source = build_model(descriptor)
        tables = {nu: ext_over_r(source, target, nu, window) for nu in nus}
        expected = None
    else:
        raise ValueError(f"Unknown base {over!r}; use an or r")
    return concentration(tables, expected, invariant=f"Ext[{over}]",
                         provenance={"source": descriptor, "target": target.provenance})


def localcoh_dims(model: GradedModel, window: Window | None = None) -> dict[int, int]:
    return model.dims(window or default_window(model.n))
