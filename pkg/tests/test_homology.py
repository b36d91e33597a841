"""Tests for Koszul, de Rham, Tor and Ext computations."""

import numpy as np
import pytest

from weyl_eulerian.groebner import free_resolution, left_ideal
from weyl_eulerian.homology import (
    HomComplex,
    TruncatedResolutionError,
    concentration,
    de_rham,
    duality_pair,
    ext_over_an,
    ext_over_r,
    koszul_complex,
    koszul_dims,
    koszul_homology,
    tor_against_rr,
    tor_over_an,
    tor_over_r,
    tor_over_r_complex,
)
from weyl_eulerian.models import InfiniteDimensionalError, matlis_dual, shift
from weyl_eulerian.parse import parse_element

WINDOW = (-4, 3)


def resolution(gens, n, s=0, max_length=None):
    G = left_ideal([parse_element(g, n) for g in gens], n=n)
    return free_resolution(G, s, max_length)


def only(table, degree, dim=1):
    return all(v == (dim if d == degree else 0) for d, v in table.items())


def vanishes(table):
    return not any(table.values())


class TestDeRham:
    def test_polynomial_one_variable(self, R1):
        assert only(de_rham(R1, 0, WINDOW), -1)
        assert vanishes(de_rham(R1, 1, WINDOW))

    def test_polynomial_two_variables(self, R2):
        assert only(de_rham(R2, 0, WINDOW), -2)
        assert vanishes(de_rham(R2, 1, WINDOW))
        assert vanishes(de_rham(R2, 2, WINDOW))

    def test_raw_convention(self, R1):
        assert only(de_rham(R1, 0, WINDOW, graded=False), 0)

    def test_hull(self, hull1):
        assert vanishes(de_rham(hull1, 0, WINDOW))
        assert only(de_rham(hull1, 1, WINDOW), -1)

    def test_hull_two_variables(self, hull2):
        assert only(de_rham(hull2, 2, WINDOW), -2)
        assert vanishes(de_rham(hull2, 1, WINDOW))

    def test_complex_property(self, R2):
        K = koszul_complex(R2, ["d1", "d2"])
        assert all(K.is_complex(p, d) for p in range(3) for d in WINDOW)

    def test_euler_order_on_cohomology(self, R2):
        K = koszul_complex(R2, ["d1", "d2"])
        assert K.euler_order(0, -2) == 1

    def test_non_commuting_operators(self, R1):
        with pytest.raises(ValueError):
            koszul_homology(R1, ["x1", "d1"], 0, WINDOW)

    def test_koszul_dims(self):
        assert koszul_dims(3) == [1, 3, 3, 1]


class TestTorAgainstRr:
    def test_hull(self, hull1):
        assert only(tor_against_rr(hull1, 0, (-12, 6)), -1)
        assert vanishes(tor_against_rr(hull1, 1, (-12, 6)))

    def test_polynomial(self, R1):
        assert vanishes(tor_against_rr(R1, 0, WINDOW))
        assert only(tor_against_rr(R1, 1, WINDOW), -1)

    def test_out_of_range(self, R1):
        assert vanishes(tor_against_rr(R1, 2, WINDOW))


class TestExtOverAn:
    def test_hull_into_hull(self, hull1):
        res = resolution(["x1"], 1, 1)
        assert only(ext_over_an(res, hull1, 0, (-10, 10)), 0)
        assert vanishes(ext_over_an(res, hull1, 1, (-10, 10)))

    def test_matches_shifted_de_rham(self, hull2):
        res = resolution(["d1", "d2"], 2)
        for nu in range(3):
            ext = ext_over_an(res, hull2, nu, WINDOW)
            dr = de_rham(hull2, nu, (WINDOW[0] - 2, WINDOW[1] - 2))
            assert all(ext[l] == dr[l - 2] for l in ext)

    def test_hom_complex(self, R2):
        C = HomComplex(resolution(["d1", "d2"], 2), R2)
        assert all(C.is_complex(p, d) for p in range(2) for d in WINDOW)

    def test_truncated(self, R2):
        res = resolution(["d1", "d2"], 2, max_length=1)
        with pytest.raises(TruncatedResolutionError):
            ext_over_an(res, R2, 1, WINDOW)


class TestTorOverAn:
    def test_agrees_with_de_rham(self, hull1, R1):
        res = resolution(["d1"], 1)
        for N in (hull1, R1):
            for nu in range(2):
                assert tor_over_an(res, N, nu, WINDOW) == tor_against_rr(N, nu, WINDOW)

    def test_right_module_rejected(self, R1):
        from weyl_eulerian.models import transpose_model
        with pytest.raises(ValueError):
            tor_over_an(resolution(["d1"], 1), transpose_model(R1), 0, WINDOW)


class TestOverR:
    def test_flat_factor(self, R1, hull1):
        assert tor_over_r(R1, hull1, 0, WINDOW) == hull1.dims(WINDOW)
        assert vanishes(tor_over_r(R1, hull1, 1, WINDOW))

    def test_shifted_flat_factor(self, R1, hull1):
        assert tor_over_r(hull1, shift(R1, 1), 0, WINDOW) == shift(hull1, 1).dims(WINDOW)

    def test_hull_with_itself(self, hull1):
        assert vanishes(tor_over_r(hull1, hull1, 0, (-6, 0)))
        tor1 = tor_over_r(hull1, hull1, 1, (-6, 0))
        assert all(tor1[d] == 1 for d in range(-6, 0)) and tor1[0] == 0

    def test_ext_from_free(self, R1, hull1):
        assert ext_over_r(shift(R1, 1), hull1, 0, WINDOW) == shift(hull1, -1).dims(WINDOW)

    def test_infinite_hom(self, hull1, R1):
        with pytest.raises(InfiniteDimensionalError):
            ext_over_r(hull1, matlis_dual(R1), 0, WINDOW)

    def test_tor_euler_action(self, hull1):
        K = tor_over_r_complex(hull1, hull1)
        assert K.euler_order(0, -1) is not None

    def test_duality(self, R1, hull1):
        for M, N in ((R1, R1), (R1, hull1), (hull1, hull1)):
            for nu in range(2):
                tor, ext = duality_pair(M, N, nu, WINDOW)
                assert tor == ext


class TestConcentration:
    def test_concentrated(self):
        report = concentration({0: {-1: 1, 0: 0}, 1: {-1: 0, 0: 0}}, -1)
        assert report.concentrated
        assert report.verdict == "concentrated in degree -1"
        assert report.table.dtype == np.int64

    def test_counterexample(self):
        report = concentration({0: {-1: 1, 0: 2}}, -1)
        assert report.counterexample == (0, 0, 2)
        assert report.verdict.startswith("counterexample")

    @pytest.mark.parametrize("expected", [-2, 0])
    def test_all_zero_table_is_concentrated(self, expected):
        report = concentration({0: {-1: 0, 0: 0}, 1: {-1: 0, 0: 0}}, expected)
        assert report.vacuous and report.concentrated
        assert report.verdict == f"concentrated in degree {expected}"
        out = report.to_dict()
        assert out["vacuous"] is True and out["counterexample"] is None

    def test_all_zero_table_without_expected_degree(self):
        report = concentration({0: {0: 0}}, None)
        assert report.vacuous and report.verdict == "tabulated"

    def test_nonzero_table_is_not_vacuous(self):
        assert not concentration({0: {-1: 1}}, -1).to_dict()["vacuous"]

    def test_json_shape(self):
        report = concentration({0: {-1: 1}, 1: {-1: 0}}, -1, invariant="de Rham")
        out = report.to_dict()
        assert out["schema"] == 1
        assert out["table"] == [[0, -1, 1]]
        assert list(out) == sorted(out)

    def test_dim_lookup(self):
        report = concentration({2: {-3: 4, -2: 0}}, None)
        assert report.dim(2, -3) == 4
        assert report.verdict == "tabulated"
