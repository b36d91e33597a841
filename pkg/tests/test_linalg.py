"""Tests for the sparse exact linear algebra helpers."""

import pytest
from sympy import QQ

from weyl_eulerian import linalg as la


def M(rows):
    """Dense list-of-lists to a sparse matrix."""
    return la.matrix({i: dict(enumerate(r)) for i, r in enumerate(rows)},
                     (len(rows), len(rows[0]) if rows else 0))


class TestConstruction:
    def test_zeros_are_dropped(self):
        assert la.entries(M([[0, 1], [0, 0]])) == {0: {1: QQ(1)}}

    def test_out_of_shape(self):
        with pytest.raises(IndexError):
            la.matrix({2: {0: 1}}, (2, 2))

    def test_block(self):
        B = la.block({(0, 0): la.identity(1), (1, 1): M([[2, 3]])}, [1, 1], [1, 2])
        assert la.equal(B, M([[1, 0, 0], [0, 2, 3]]))

    def test_block_shape_mismatch(self):
        with pytest.raises(ValueError, match="shape"):
            la.block({(0, 0): la.identity(2)}, [1], [1])

    def test_kron_is_row_major(self):
        K = la.kron(la.identity(2), M([[1, 2]]))
        assert la.equal(K, M([[1, 2, 0, 0], [0, 0, 1, 2]]))

    def test_transpose(self):
        assert la.equal(la.transpose(M([[1, 2, 3]])), M([[1], [2], [3]]))


class TestArithmetic:
    def test_zero_dimensional_product(self):
        P = la.matmul(la.zeros(2, 0), la.zeros(0, 3))
        assert P.shape == (2, 3)
        assert la.is_zero(P)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            la.matmul(la.identity(2), la.identity(3))

    def test_chain_applies_last_first(self):
        A, B = M([[1, 1]]), M([[1], [2]])
        assert la.equal(la.chain(A, B), M([[3]]))

    def test_power(self):
        assert la.equal(la.power(M([[1, 1], [0, 1]]), 3), M([[1, 3], [0, 1]]))


class TestElimination:
    def test_rank(self):
        assert la.rank(M([[1, 2], [2, 4]])) == 1
        assert la.rank(la.zeros(0, 4)) == 0

    def test_kernel(self):
        A = M([[1, 2, 3], [0, 1, 1]])
        K, free = la.kernel(A)
        assert K.shape == (3, 1)
        assert free == (2,)
        assert la.is_zero(la.matmul(A, K))

    def test_kernel_of_injective_map(self):
        K, free = la.kernel(la.identity(2))
        assert K.shape == (2, 0) and free == ()

    def test_quotient_section(self):
        P, S, complement = la.quotient(M([[1], [1]]), 2)
        assert P.shape == (1, 2)
        assert la.equal(la.matmul(P, S), la.identity(1))
        assert la.is_zero(la.matmul(P, M([[1], [1]])))

    def test_solve(self):
        X = la.solve(M([[1, 1], [0, 2]]), M([[3], [4]]))
        assert la.equal(X, M([[1], [2]]))

    def test_solve_inconsistent(self):
        assert la.solve(M([[1], [1]]), M([[0], [1]])) is None

    def test_in_span(self):
        B = M([[1], [0], [1]])
        assert la.in_span(B, M([[2], [0], [2]]))
        assert not la.in_span(B, M([[0], [1], [0]]))
        assert la.in_span(la.zeros(3, 0), la.zeros(3, 1))


class TestSpectral:
    def test_nilpotency_order(self):
        assert la.nilpotency_order(M([[0, 1], [0, 0]]), 5) == 2
        assert la.nilpotency_order(la.zeros(3, 3), 5) == 1

    def test_not_nilpotent(self):
        assert la.nilpotency_order(la.identity(2), 5) is None

    def test_empty_piece(self):
        assert la.nilpotency_order(la.zeros(0, 0), 1) == 1

    def test_relative_nilpotency(self):
        T = M([[0, 1], [0, 0]])
        Z = la.identity(2)
        assert la.relative_nilpotency(T, Z, la.zeros(2, 0), 5) == 2
        assert la.relative_nilpotency(T, Z, M([[1], [0]]), 5) == 1

    def test_charpoly(self):
        assert la.charpoly(M([[1, 1], [0, 1]])) == (1, -2, 1)
        assert la.charpoly(la.zeros(0, 0)) == (1,)
