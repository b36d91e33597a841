"""Tests for the module catalogs and descriptors."""

import pytest

from weyl_eulerian.catalog import (
    build_model,
    build_resolution,
    eulerian_fixtures,
    intermediate_presentations,
    local_cohomology_catalog,
    presentation_catalog,
    squarefree_ideals,
)
from weyl_eulerian.groebner import eulerian_index
from weyl_eulerian.models import (
    CechModel,
    InfiniteDimensionalError,
    PolynomialModel,
    check_generalized_eulerian,
    koszul_operator_model,
    matlis_dual,
    shift,
    transpose_model,
)


class TestSquarefreeIdeals:
    @pytest.mark.parametrize("n,count", [(1, 2), (2, 5), (3, 19)])
    def test_counts(self, n, count):
        assert len(squarefree_ideals(n)) == count

    def test_antichains(self):
        for ideal in squarefree_ideals(3):
            for a in ideal:
                assert not any(a < b for b in ideal)


class TestLocalCohomologyCatalog:
    def test_statuses(self):
        entries = {(e.ideal, e.i): e for e in local_cohomology_catalog(2)}
        assert entries[((frozenset({1}),), 1)].status == "rejected"
        assert entries[((frozenset({1}), frozenset({2})), 2)].status == "modeled"
        assert entries[((frozenset({1}), frozenset({2})), 0)].status == "zero"
        assert entries[((), 0)].status == "modeled"

    def test_rejections_carry_a_diagnostic(self):
        for entry in local_cohomology_catalog(2):
            if entry.status == "rejected":
                assert "infinite-dimensional" in entry.diagnostic

    def test_descriptor_rebuilds_the_model(self):
        entry = next(e for e in local_cohomology_catalog(2) if e.status == "modeled" and e.i == 2)
        M = build_model(entry.descriptor())
        assert M.dims((-5, 0)) == entry.model.dims((-5, 0))


class TestPresentations:
    def test_names(self):
        assert [e.name for e in presentation_catalog(2)] == ["R, n=2", "E, n=2"]

    @pytest.mark.parametrize("n", [1, 2])
    def test_match_cech(self, n):
        for entry in presentation_catalog(n):
            ideal, i = entry.cech
            assert entry.model().dims((-6, 4)) == CechModel(n, ideal, i).dims((-6, 4))

    @pytest.mark.parametrize("entry", presentation_catalog(1) + presentation_catalog(2) + eulerian_fixtures(),
                             ids=lambda e: e.name)
    def test_larger_enumeration_bound_agrees(self, entry):
        M = entry.model()
        wider = entry.model(bound=M.bound + 1)
        window = (-8, 6)
        assert wider.dims(window) == M.dims(window)
        for d in range(*window):
            assert wider.basis(d) == M.basis(d)

    def test_enumeration_bound_below_least(self):
        entry = presentation_catalog(1)[0]
        least = entry.model().bound
        with pytest.raises(ValueError, match="least admissible"):
            entry.model(bound=least - 1)

    def test_intermediate_are_rejected(self):
        (entry,) = intermediate_presentations(2)[:1]
        with pytest.raises(InfiniteDimensionalError):
            entry.model()
        ideal, i = entry.cech
        with pytest.raises(InfiniteDimensionalError):
            CechModel(2, ideal, i)

    def test_eulerian_fixtures(self):
        for entry in eulerian_fixtures():
            assert eulerian_index(entry.groebner(), shift=entry.shift) == entry.expected_index
            report = check_generalized_eulerian(entry.model(), (-4, 4), bound=10)
            assert report.passed == entry.passes
            assert report.uniform_bound == entry.expected_bound


class TestDescriptors:
    def test_polynomial_with_shift(self):
        M = build_model({"constructor": "polynomial", "args": {"n": 2}, "shift": 1})
        assert M.dim(0) == 2
        assert M.provenance["constructor"] == "shift"

    def test_dual(self):
        M = build_model({"constructor": "cech", "args": {"n": 1, "ideal": "x1", "i": 1}, "dual": True})
        assert M.dim(1) == 1 and M.dim(-1) == 0

    def test_presentation(self):
        M = build_model({"constructor": "presentation", "args": {"n": 1, "gens": ["x1"]}, "shift": 1})
        assert M.dim(-1) == 1

    def test_localization(self):
        M = build_model({"constructor": "localization", "args": {"n": 1, "S": [1]}})
        assert M.dim(-7) == 1

    def test_transpose(self):
        M = build_model({"constructor": "transpose", "of": {"constructor": "polynomial", "args": {"n": 1}}})
        assert M.side == "right"
        assert M.dims((-2, 3)) == PolynomialModel(1).dims((-2, 3))

    def test_koszul(self):
        plane = {"constructor": "cech", "args": {"n": 2, "ideal": "x1, x2", "i": 2}}
        M = build_model({"constructor": "koszul", "op": "d", "index": 0, "of": plane})
        assert M.n == 1
        assert M.dims((-4, 2)) == CechModel(1, [(1,)], 1).dims((-4, 2))

    def test_koszul_args_form(self):
        M = build_model({"constructor": "koszul",
                         "args": {"of": {"constructor": "polynomial", "args": {"n": 2}}, "op": "x", "index": 0}})
        assert M.dims((-1, 3)) == PolynomialModel(1).dims((-1, 3))

    def test_provenance_rebuilds_derived_models(self):
        E = CechModel(2, [(1,), (2,)], 2)
        for M in (koszul_operator_model(shift(E, 1), "x", 1),
                  transpose_model(matlis_dual(PolynomialModel(1))),
                  shift(koszul_operator_model(PolynomialModel(2), "d", 1), -1)):
            rebuilt = build_model(M.provenance)
            assert (rebuilt.n, rebuilt.side) == (M.n, M.side)
            assert rebuilt.dims((-5, 3)) == M.dims((-5, 3))

    def test_derived_needs_base(self):
        with pytest.raises(ValueError, match="'of'"):
            build_model({"constructor": "transpose"})

    def test_koszul_needs_operator(self):
        with pytest.raises(ValueError, match="'op'"):
            build_model({"constructor": "koszul", "of": {"constructor": "polynomial", "args": {"n": 1}}})

    def test_unknown_constructor(self):
        with pytest.raises(ValueError, match="Unknown constructor"):
            build_model({"constructor": "sheaf", "args": {"n": 1}})

    def test_missing_n(self):
        with pytest.raises(ValueError):
            build_model({"constructor": "polynomial", "args": {}})

    def test_resolution(self):
        res = build_resolution({"constructor": "presentation", "args": {"n": 2, "gens": ["d1", "d2"]}})
        assert res.ranks == (1, 2, 1)

    def test_resolution_needs_presentation(self):
        with pytest.raises(ValueError):
            build_resolution({"constructor": "polynomial", "args": {"n": 1}})
