"""Verification suites run by ``weyl verify <suite>``.

Each suite is a list of named checks over the bundled catalogs.  A check
passes, fails with a counterexample, or is inconclusive when a job runs out
of resolution stages or meets an infinite-dimensional piece.
"""

from __future__ import annotations

import itertools
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import linalg as la
from .algebra import WeylElement, euler_operator, term_degree, transpose
from .catalog import (
    eulerian_fixtures,
    intermediate_presentations,
    local_cohomology_catalog,
    presentation_catalog,
)
from .core import format_duration
from .groebner import BasisLimitError, eulerian_index, is_member, left_ideal
from .homology import (
    TruncatedResolutionError,
    concentration,
    de_rham,
    duality_pair,
    ext_over_an,
    ext_over_r_complex,
    tor_against_rr,
    tor_over_an,
    tor_over_r_complex,
)
from .models import (
    CechModel,
    InfiniteDimensionalError,
    PolynomialModel,
    check_generalized_eulerian,
    check_weyl_relations,
    default_window,
    euler_charpoly,
    koszul_operator_model,
    matlis_dual,
    shift,
)

DEFAULT_SEED = 20240617
MEMBERSHIP_MAX_TOTAL = 3
MEMBERSHIP_MAX_PAIRS = 500

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class SuiteReport:
    """Outcome of one suite; ``exit_code`` follows the CLI contract."""

    name: str
    checks: list[CheckResult] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name, PASS if ok else FAIL, detail))

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def exit_code(self) -> int:
        if self.failures:
            return 2
        if any(c.status == INCONCLUSIVE for c in self.checks):
            return 3
        return 0

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "suite": self.name,
            "exit_code": self.exit_code,
            "passed": sum(c.status == PASS for c in self.checks),
            "failed": len(self.failures),
            "inconclusive": sum(c.status == INCONCLUSIVE for c in self.checks),
            "checks": [c.to_dict() for c in self.checks],
            "skipped": list(self.skipped),
        }


def _guarded(report: SuiteReport, name: str, check: Callable[[], tuple[bool, str]]) -> None:
    try:
        ok, detail = check()
    except (TruncatedResolutionError, InfiniteDimensionalError, BasisLimitError) as exc:
        report.checks.append(CheckResult(name, INCONCLUSIVE, str(exc)))
        return
    report.add(name, ok, detail)


# ---------------------------------------------------------------------------
# Random elements
# ---------------------------------------------------------------------------

def random_element(rng: np.random.Generator, n: int, *, max_exp: int = 2, max_terms: int = 3,
                   degree: int | None = None, max_total: int | None = None) -> WeylElement:
    """Random element with small integer coefficients.

    Homogeneous when *degree* is given; *max_total* caps the total degree
    ``|xExp| + |dExp|`` of every monomial.
    """
    monomials = [m for m in _monomials(n, max_exp)
                 if (degree is None or term_degree(m) == degree)
                 and (max_total is None or sum(m[0]) + sum(m[1]) <= max_total)]
    if not monomials:
        return WeylElement.zero(n)
    k = int(rng.integers(1, max_terms + 1))
    picks = rng.choice(len(monomials), size=min(k, len(monomials)), replace=False)
    terms = {}
    for p in picks:
        c = int(rng.integers(1, 4)) * (1 if rng.random() < 0.5 else -1)
        terms[monomials[int(p)]] = c
    return WeylElement(n, terms)


def _monomials(n: int, max_exp: int):
    exps = list(itertools.product(range(max_exp + 1), repeat=n))
    return [(xe, de) for xe in exps for de in exps]


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def identities(seed: int = DEFAULT_SEED) -> SuiteReport:
    report = SuiteReport("identities")
    rng = np.random.default_rng(seed)
    for n in (1, 2, 3):
        ok = True
        for i, j in itertools.product(range(1, n + 1), repeat=2):
            xi, xj, di, dj = (WeylElement.x(n, i), WeylElement.x(n, j),
                              WeylElement.d(n, i), WeylElement.d(n, j))
            bracket = di * xj - xj * di
            ok &= bracket == (1 if i == j else 0)
            ok &= xi * xj == xj * xi and di * dj == dj * di
        report.add(f"defining relations, n={n}", ok)

    bad = 0
    for _ in range(200):
        n = int(rng.integers(1, 4))
        a, b, c = (random_element(rng, n) for _ in range(3))
        bad += (a * b) * c != a * (b * c)
    report.add("associativity on 200 random triples", bad == 0, f"{bad} failures")

    bad = 0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        a, b = random_element(rng, n), random_element(rng, n)
        bad += transpose(a * b) != transpose(b) * transpose(a)
        bad += transpose(transpose(a)) != a
    report.add("transpose is an involutive anti-automorphism", bad == 0, f"{bad} failures")

    for n in (1, 2, 3):
        E = euler_operator(n)
        report.add(f"transpose(E) = -E - n, n={n}", transpose(E) == -E - n)

    ok = True
    for n in (1, 2, 3):
        E = euler_operator(n)
        for e in range(-5, 6):
            for i in range(1, n + 1):
                for t in range(1, 5):
                    xt, dt = WeylElement.x(n, i, t), WeylElement.d(n, i, t)
                    ok &= (E - e) * xt == xt * (E - (e - t))
                    ok &= (E - e) * dt == dt * (E - (e + t))
    report.add("Euler commutation with x_i^t and d_i^t, e in [-5, 5], t <= 4", ok)
    return report


def eulerian(window: tuple[int, int] = (-14, 14)) -> SuiteReport:
    report = SuiteReport("eulerian")
    for n in (1, 2, 3):
        r = check_generalized_eulerian(PolynomialModel(n), window, bound=3)
        report.add(f"R, n={n}: uniform bound 1 on {window}", r.uniform_bound == 1,
                   f"uniform bound {r.uniform_bound}")
    for n in (1, 2):
        for s in (-2, -1, 1, 2):
            r = check_generalized_eulerian(shift(PolynomialModel(n), s), (-6, 6), bound=3)
            report.add(f"R({s}), n={n} is not generalized Eulerian", not r.passed,
                       f"failing degrees {r.failures[:3]}")
    for n in (1, 2, 3):
        for entry in local_cohomology_catalog(n):
            if entry.model is None:
                report.skipped.append(f"{entry.label}: {entry.diagnostic}")
                continue
            r = check_generalized_eulerian(entry.model, default_window(n), bound=3)
            report.add(f"{entry.label}: uniform bound 1", r.uniform_bound == 1,
                       f"uniform bound {r.uniform_bound}")
    for n in (1, 2):
        bases = {"R": PolynomialModel(n),
                 "E": CechModel(n, [(i,) for i in range(1, n + 1)], n)}
        for (name, M), op, index in itertools.product(bases.items(), "xd", (1, 0)):
            K = koszul_operator_model(M, op, index)
            r = check_generalized_eulerian(K, default_window(n), bound=3)
            kind = "ker" if index else "coker"
            report.add(f"{kind} {op}_{n} on {name}, n={n}: uniform bound 1", r.uniform_bound == 1,
                       f"uniform bound {r.uniform_bound}, failing degrees {r.failures[:3]}")
    entries = eulerian_fixtures() + [e for n in (1, 2, 3) for e in presentation_catalog(n)]
    for entry in entries:
        G = entry.groebner()
        index = eulerian_index(G, shift=entry.shift)
        r = check_generalized_eulerian(entry.model(), (-6, 6), bound=10)
        agree = (index is not None) == r.passed and (index is None or index == r.uniform_bound)
        expected = index == entry.expected_index and r.passed == entry.passes
        report.add(f"{entry.name}: index {index} vs model bound {r.uniform_bound}",
                   agree and expected)
    return report


def _modeled(n: int, report: SuiteReport) -> Iterator:
    for entry in local_cohomology_catalog(n):
        if entry.model is None:
            report.skipped.append(f"{entry.label}: {entry.diagnostic}")
        else:
            yield entry


def tor_concentration(window: tuple[int, int] = (-12, 6)) -> SuiteReport:
    report = SuiteReport("tor-concentration")
    for n in (1, 2):
        for entry in _modeled(n, report):
            def check(M=entry.model, n=n):
                tables = {nu: tor_against_rr(M, nu, window) for nu in range(n + 1)}
                c = concentration(tables, -n)
                return c.concentrated, c.verdict
            _guarded(report, f"Tor(R^r, {entry.label}) at {-n}", check)

    E1 = CechModel(1, [(1,)], 1)
    t0, t1 = tor_against_rr(E1, 0, window), tor_against_rr(E1, 1, window)
    ok = all(v == (1 if d == -1 else 0) for d, v in t0.items()) and not any(t1.values())
    report.add("Tor(R^r, H^1_(x1)(R)), n=1: dim 1 at -1 for nu=0, zero for nu=1", ok)

    for n in (1, 2):
        pres = {e.name.split(",")[0]: e for e in presentation_catalog(n)}
        res_R = pres["R"].resolution()
        res_E = pres["E"].resolution()
        for entry in _modeled(n, SuiteReport("")):
            def agree(N=entry.model, n=n):
                for nu in range(n + 1):
                    if tor_over_an(res_R, N, nu, window) != tor_against_rr(N, nu, window):
                        return False, f"nu={nu} differs"
                return True, ""
            _guarded(report, f"Tor over A_n against R agrees for {entry.label}", agree)

            def conc(N=entry.model, n=n):
                tables = {nu: tor_over_an(res_E, N, nu, window) for nu in range(n + 1)}
                c = concentration(tables, -n)
                return c.concentrated, c.verdict
            _guarded(report, f"Tor(N^#, E) at {-n} for N = {entry.label}", conc)
    return report


def ext_concentration(window: tuple[int, int] = (-10, 10)) -> SuiteReport:
    report = SuiteReport("ext-concentration")
    for n in (1, 2):
        targets = list(_modeled(n, report))
        for pres in presentation_catalog(n):
            res = pres.resolution()
            for entry in targets:
                def check(N=entry.model, n=n, res=res):
                    tables = {nu: ext_over_an(res, N, nu, window) for nu in range(n + 1)}
                    c = concentration(tables, 0)
                    return c.concentrated, c.verdict
                _guarded(report, f"Ext({pres.name}, {entry.label}) at 0", check)

        res_R = presentation_catalog(n)[0].resolution()
        for entry in targets:
            def shifted(N=entry.model, n=n):
                for nu in range(n + 1):
                    ext = ext_over_an(res_R, N, nu, window)
                    dr = de_rham(N, nu, (window[0] - n, window[1] - n))
                    if any(ext[l] != dr[l - n] for l in ext):
                        return False, f"nu={nu} differs"
                return True, ""
            _guarded(report, f"Ext(R, N) = H(d; N)(-n) for N = {entry.label}", shifted)

    E = presentation_catalog(1)[1].resolution()
    M = CechModel(1, [(1,)], 1)
    e0, e1 = ext_over_an(E, M, 0, window), ext_over_an(E, M, 1, window)
    ok = all(v == (1 if d == 0 else 0) for d, v in e0.items()) and not any(e1.values())
    report.add("Ext(H^1_(x1), H^1_(x1)), n=1: Ext^0 = K in degree 0, Ext^1 = 0", ok)
    return report


def duality(window: tuple[int, int] = (-8, 4)) -> SuiteReport:
    report = SuiteReport("duality")
    for n in (1, 2):
        models = [("R", PolynomialModel(n))] + [(e.label, e.model) for e in _modeled(n, report)
                                                if not e.model.is_zero_module]
        for label, M in models:
            lo, hi = default_window(n)
            r = check_generalized_eulerian(M, (lo, hi), bound=3)
            if not r.passed:
                report.skipped.append(f"{label}: not strongly generalized Eulerian on the window")
                continue
            dual = check_generalized_eulerian(matlis_dual(shift(M, -n)), (-hi - n, -lo - n), bound=3)
            report.add(f"dual of {label}(-{n}) keeps bound {r.uniform_bound}",
                       dual.uniform_bound == r.uniform_bound, f"dual bound {dual.uniform_bound}")

        E = CechModel(n, [(i,) for i in range(1, n + 1)], n)
        R = PolynomialModel(n)
        for (ma, M), (na, N) in itertools.product((("R", R), ("E", E)), repeat=2):
            def check(M=M, N=N, n=n):
                for nu in range(n + 1):
                    tor, ext = duality_pair(M, N, nu, window)
                    if tor != ext:
                        return False, f"nu={nu}: Tor {tor} vs Ext {ext}"
                return True, ""
            try:
                ok, detail = check()
            except InfiniteDimensionalError as exc:
                report.skipped.append(f"Tor/Ext duality ({ma}, {na}), n={n}: {exc}")
                continue
            report.add(f"Tor^R({ma}, {na}) matches Ext_R({ma}, {na}^v) reflected, n={n}", ok, detail)

        def euler_tor(E=E, n=n):
            K = tor_over_r_complex(E, E)
            orders = {(p, d): K.euler_order(p, d) for p in range(n + 1)
                      for d in range(window[0], window[1] + 1) if K.cohomology(p, d)}
            return all(a is not None for a in orders.values()), f"orders {sorted(set(orders.values()))}"
        _guarded(report, f"Euler acts nilpotently shifted on Tor^R(E, E), n={n}", euler_tor)

        def euler_ext(E=E, R=R, n=n):
            K = ext_over_r_complex(E, R)
            orders = {(p, d): K.euler_order(p, d) for p in range(n + 1)
                      for d in range(-4, 5) if K.cohomology(p, d)}
            return all(a is not None for a in orders.values()), f"orders {sorted(set(orders.values()))}"
        _guarded(report, f"Euler acts nilpotently shifted on Ext_R(E, R), n={n}", euler_ext)
    return report


def consistency(window: tuple[int, int] = (-12, 6)) -> SuiteReport:
    report = SuiteReport("consistency")
    lo, hi = window
    for n in (1, 2, 3):
        for pres in presentation_catalog(n):
            ideal, i = pres.cech
            P, C = pres.model(), CechModel(n, ideal, i)
            bad = [d for d in range(lo, hi + 1)
                   if P.dim(d) != C.dim(d) or euler_charpoly(P, d) != euler_charpoly(C, d)]
            report.add(f"{pres.name}: presentation and Čech models agree", not bad,
                       f"first mismatch in degree {bad[0]}" if bad else "")
            problems = check_weyl_relations(P, (-3, 3)) + check_weyl_relations(C, (-3, 3))
            report.add(f"{pres.name}: Weyl relations hold on both models", not problems,
                       "; ".join(problems[:3]))
        for pres in intermediate_presentations(n):
            ideal, i = pres.cech
            rejected = 0
            for build in (pres.model, lambda: CechModel(n, ideal, i)):
                try:
                    build()
                except InfiniteDimensionalError:
                    rejected += 1
            report.add(f"{pres.name}: rejected by both constructors", rejected == 2)
    return report


def _slice_oracle(f: WeylElement, gens, n: int) -> bool:
    """Whether f lies in the span of monomial multiples of *gens* up to f's total degree."""
    if f.is_zero():
        return True
    deg = term_degree(next(iter(f.terms)))
    top = max(sum(x) + sum(d) for x, d in f.terms)
    columns = []
    for g in gens:
        g_top = max(sum(x) + sum(d) for x, d in g.terms)
        g_deg = term_degree(next(iter(g.terms)))
        room = top - g_top
        if room < 0:
            continue
        for xe, de in _monomials(n, room):
            if term_degree((xe, de)) == deg - g_deg and sum(xe) + sum(de) <= room:
                columns.append(WeylElement(n, {(xe, de): 1}) * g)
    index: dict = {}
    for h in columns + [f]:
        for m in h.terms:
            index.setdefault(m, len(index))
    B = la.from_columns([{index[m]: c for m, c in h.terms.items()} for h in columns], len(index))
    v = la.from_columns([{index[m]: c for m, c in f.terms.items()}], len(index))
    return la.in_span(B, v)


def membership(instances: int = 100, seed: int = DEFAULT_SEED,
               max_pairs: int = MEMBERSHIP_MAX_PAIRS) -> SuiteReport:
    report = SuiteReport("membership")
    rng = np.random.default_rng(seed)
    disagreements = []
    stuck = []
    for k in range(instances):
        n = int(rng.integers(1, 3))
        gens = [g for g in (random_element(rng, n, max_exp=3, max_terms=2, max_total=MEMBERSHIP_MAX_TOTAL,
                                           degree=int(rng.integers(-1, 2)))
                            for _ in range(int(rng.integers(1, 3)))) if not g.is_zero()]
        if not gens:
            gens = [WeylElement.x(n, 1)]
        try:
            G = left_ideal(gens, n=n, max_pairs=max_pairs)
        except BasisLimitError:
            stuck.append(k)
            continue
        target = int(rng.integers(-2, 3))
        if k % 2 == 0:
            f = WeylElement.zero(n)
            for g in G.generators:
                shift_deg = target - term_degree(next(iter(g.terms)))
                f = f + random_element(rng, n, max_exp=2, max_terms=2, degree=shift_deg) * g
        else:
            f = random_element(rng, n, max_exp=3, max_terms=3, degree=target)
        member = is_member(f, G)
        if member != _slice_oracle(f, G.generators, n):
            disagreements.append(f"instance {k}: {f} in ({', '.join(map(str, gens))})")
    report.add(f"membership agrees with the bounded-slice oracle on {instances} instances",
               not disagreements, "; ".join(disagreements[:3]))
    if stuck:
        report.checks.append(CheckResult(f"Gröbner basis within {max_pairs} S-pairs", INCONCLUSIVE,
                                         f"instances {stuck} hit the budget"))
    return report


SUITES: dict[str, Callable[[], SuiteReport]] = {
    "identities": identities,
    "eulerian": eulerian,
    "tor-concentration": tor_concentration,
    "ext-concentration": ext_concentration,
    "duality": duality,
    "consistency": consistency,
    "membership": membership,
}


def run_suite(name: str, *, verbose: int = 0) -> SuiteReport:
    """Run the named suite; see :data:`SUITES`."""
    if name not in SUITES:
        raise ValueError(f"Unknown suite {name!r}; choose from {', '.join(SUITES)}")
    t_start = time.monotonic()
    if verbose >= 1:
        print(f"Running suite {name}", file=sys.stderr)
    report = SUITES[name]()
    if verbose >= 1:
        print(f"  {name}: {len(report.checks)} checks, {len(report.failures)} failed, "
              f"{len(report.skipped)} skipped in {format_duration(time.monotonic() - t_start)}",
              file=sys.stderr)
    if verbose >= 2:
        for c in report.failures:
            print(f"  FAIL {c.name}: {c.detail}", file=sys.stderr)
    return report
