"""Exact sparse linear algebra over QQ.

Thin helpers around :class:`sympy.polys.matrices.DomainMatrix` in sparse
format.  Matrices act on column vectors: a map ``V -> W`` has shape
``(dim W, dim V)``.  Every helper accepts zero-dimensional shapes.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Rows = dict[int, dict[int, "QQ.dtype"]]


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def matrix(rows: Mapping[int, Mapping[int, object]], shape: tuple[int, int]) -> DomainMatrix:
    """Sparse matrix from a ``{row: {col: value}}`` map; zeros are dropped."""
    m, n = shape
    clean: Rows = {}
    for i, row in rows.items():
        if not 0 <= i < m:
            raise IndexError(f"Row {i} outside shape {shape}")
        kept = {}
        for j, v in row.items():
            if not 0 <= j < n:
                raise IndexError(f"Column {j} outside shape {shape}")
            v = QQ.convert(v)
            if v:
                kept[j] = v
        if kept:
            clean[i] = kept
    return DomainMatrix(clean, (m, n), QQ)


def zeros(m: int, n: int) -> DomainMatrix:
    return DomainMatrix({}, (m, n), QQ)


def identity(n: int) -> DomainMatrix:
    return DomainMatrix({i: {i: QQ.one} for i in range(n)}, (n, n), QQ)


def from_columns(columns: Sequence[Mapping[int, object]], nrows: int) -> DomainMatrix:
    rows: dict[int, dict[int, object]] = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    return matrix(rows, (nrows, len(columns)))


def entries(A: DomainMatrix) -> Rows:
    """Copy of the non-zero entries as ``{row: {col: value}}``."""
    return {i: dict(row) for i, row in A.to_sparse().rep.items() if row}


def columns(A: DomainMatrix) -> list[dict[int, "QQ.dtype"]]:
    cols: list[dict[int, "QQ.dtype"]] = [{} for _ in range(A.shape[1])]
    for i, row in entries(A).items():
        for j, v in row.items():
            cols[j][i] = v
    return cols


def block(blocks: Mapping[tuple[int, int], DomainMatrix],
          row_dims: Sequence[int], col_dims: Sequence[int]) -> DomainMatrix:
    """Assemble a block matrix; missing blocks are zero."""
    row_off = _offsets(row_dims)
    col_off = _offsets(col_dims)
    rows: Rows = {}
    for (bi, bj), B in blocks.items():
        if B.shape != (row_dims[bi], col_dims[bj]):
            raise ValueError(f"Block ({bi}, {bj}) has shape {B.shape}, "
                             f"expected {(row_dims[bi], col_dims[bj])}")
        for i, row in entries(B).items():
            target = rows.setdefault(row_off[bi] + i, {})
            for j, v in row.items():
                jj = col_off[bj] + j
                s = target.get(jj, QQ.zero) + v
                if s:
                    target[jj] = s
                else:
                    target.pop(jj, None)
    return DomainMatrix({i: r for i, r in rows.items() if r}, (sum(row_dims), sum(col_dims)), QQ)


def _offsets(dims: Sequence[int]) -> list[int]:
    out, acc = [], 0
    for d in dims:
        out.append(acc)
        acc += d
    return out


def hstack(*mats: DomainMatrix) -> DomainMatrix:
    m = mats[0].shape[0]
    return block({(0, k): A for k, A in enumerate(mats)}, [m], [A.shape[1] for A in mats])


def vstack(*mats: DomainMatrix) -> DomainMatrix:
    n = mats[0].shape[1]
    return block({(k, 0): A for k, A in enumerate(mats)}, [A.shape[0] for A in mats], [n])


def kron(A: DomainMatrix, B: DomainMatrix) -> DomainMatrix:
    """Kronecker product; row-major index ``i * rows(B) + k``."""
    (ma, na), (mb, nb) = A.shape, B.shape
    ea, eb = entries(A), entries(B)
    rows: Rows = {}
    for i, ra in ea.items():
        for k, rb in eb.items():
            target = rows.setdefault(i * mb + k, {})
            for j, a in ra.items():
                for l, b in rb.items():
                    target[j * nb + l] = a * b
    return DomainMatrix(rows, (ma * mb, na * nb), QQ)


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------

def matmul(A: DomainMatrix, B: DomainMatrix) -> DomainMatrix:
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"Cannot compose {A.shape} with {B.shape}")
    if 0 in A.shape or 0 in B.shape:
        return zeros(A.shape[0], B.shape[1])
    return A.to_sparse().matmul(B.to_sparse())


def chain(*mats: DomainMatrix) -> DomainMatrix:
    """``mats[0] @ mats[1] @ ...`` (the last factor is applied first)."""
    out = mats[-1]
    for A in reversed(mats[:-1]):
        out = matmul(A, out)
    return out


def add(A: DomainMatrix, B: DomainMatrix) -> DomainMatrix:
    if A.shape != B.shape:
        raise ValueError(f"Cannot add {A.shape} and {B.shape}")
    return A.to_sparse() + B.to_sparse()


def sub(A: DomainMatrix, B: DomainMatrix) -> DomainMatrix:
    if A.shape != B.shape:
        raise ValueError(f"Cannot subtract {B.shape} from {A.shape}")
    return A.to_sparse() - B.to_sparse()


def scale(A: DomainMatrix, c) -> DomainMatrix:
    c = QQ.convert(c)
    if not c:
        return zeros(*A.shape)
    return DomainMatrix({i: {j: c * v for j, v in row.items()} for i, row in entries(A).items()},
                        A.shape, QQ)


def total(mats: Iterable[DomainMatrix], shape: tuple[int, int]) -> DomainMatrix:
    out = zeros(*shape)
    for A in mats:
        out = add(out, A)
    return out


def transpose(A: DomainMatrix) -> DomainMatrix:
    rows: Rows = {}
    for i, row in entries(A).items():
        for j, v in row.items():
            rows.setdefault(j, {})[i] = v
    return DomainMatrix(rows, (A.shape[1], A.shape[0]), QQ)


def is_zero(A: DomainMatrix) -> bool:
    return not entries(A)


def equal(A: DomainMatrix, B: DomainMatrix) -> bool:
    return A.shape == B.shape and entries(A) == entries(B)


def power(A: DomainMatrix, k: int) -> DomainMatrix:
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"Power of a non-square matrix {A.shape}")
    out = identity(A.shape[0])
    for _ in range(k):
        out = matmul(A, out)
    return out


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------

def rref(A: DomainMatrix) -> tuple[Rows, tuple[int, ...]]:
    """Reduced row echelon form as sparse rows plus the pivot columns."""
    if 0 in A.shape:
        return {}, ()
    R, pivots = A.to_sparse().rref()
    return entries(R), tuple(pivots)


def rank(A: DomainMatrix) -> int:
    return len(rref(A)[1])


def kernel(A: DomainMatrix) -> tuple[DomainMatrix, tuple[int, ...]]:
    """Basis of ``ker A`` as columns, and the free column of each basis vector.

    Basis vector ``k`` has a 1 at ``free[k]`` and 0 at every other free
    column, so coordinates of a kernel vector are its entries at ``free``.
    """
    ncols = A.shape[1]
    R, pivots = rref(A)
    pivot_set = set(pivots)
    free = tuple(j for j in range(ncols) if j not in pivot_set)
    cols = []
    for f in free:
        col = {f: QQ.one}
        for r, p in enumerate(pivots):
            v = R.get(r, {}).get(f)
            if v:
                col[p] = -v
        cols.append(col)
    return from_columns(cols, ncols), free


def kernel_coordinates(vectors: DomainMatrix, free: Sequence[int]) -> DomainMatrix:
    """Coordinates of kernel vectors with respect to :func:`kernel`'s basis."""
    pos = {f: k for k, f in enumerate(free)}
    rows: Rows = {}
    for i, row in entries(vectors).items():
        if i in pos:
            rows[pos[i]] = row
    return DomainMatrix(rows, (len(free), vectors.shape[1]), QQ)


def quotient(image: DomainMatrix, dim: int) -> tuple[DomainMatrix, DomainMatrix, tuple[int, ...]]:
    """Projection onto ``QQ^dim / colspan(image)``.

    Returns ``(P, S, complement)``: ``P`` maps ``QQ^dim`` onto coordinates
    indexed by the non-pivot coordinates ``complement``, ``S`` is the section
    sending each quotient coordinate to its unit vector, and ``P S = I``.
    """
    if image.shape[0] != dim:
        raise ValueError(f"Image has {image.shape[0]} rows, expected {dim}")
    R, pivots = rref(transpose(image))
    pivot_set = set(pivots)
    complement = tuple(c for c in range(dim) if c not in pivot_set)
    prows: Rows = {}
    srows: Rows = {}
    for t, c in enumerate(complement):
        row = {c: QQ.one}
        for k, p in enumerate(pivots):
            v = R.get(k, {}).get(c)
            if v:
                row[p] = -v
        prows[t] = row
        srows[c] = {t: QQ.one}
    P = DomainMatrix(prows, (len(complement), dim), QQ)
    S = DomainMatrix(srows, (dim, len(complement)), QQ)
    return P, S, complement


def solve(A: DomainMatrix, b: DomainMatrix) -> DomainMatrix | None:
    """One solution ``X`` of ``A X = b`` (free variables zero), or None."""
    m, n = A.shape
    k = b.shape[1]
    if b.shape[0] != m:
        raise ValueError(f"Right-hand side has {b.shape[0]} rows, expected {m}")
    R, pivots = rref(hstack(A, b))
    if any(p >= n for p in pivots):
        return None
    rows: Rows = {}
    for r, p in enumerate(pivots):
        row = {j - n: v for j, v in R.get(r, {}).items() if j >= n}
        if row:
            rows[p] = row
    return DomainMatrix(rows, (n, k), QQ)


def in_span(B: DomainMatrix, V: DomainMatrix) -> bool:
    """Whether every column of ``V`` lies in the column span of ``B``."""
    if V.shape[1] == 0 or is_zero(V):
        return True
    return rank(hstack(B, V)) == rank(B)


def complement_basis(B: DomainMatrix, Z: DomainMatrix) -> DomainMatrix:
    """Columns of ``Z`` that extend a basis of ``span B`` to one of ``span B + span Z``."""
    R, pivots = rref(hstack(B, Z))
    nb = B.shape[1]
    keep = [p - nb for p in pivots if p >= nb]
    cols = columns(Z)
    return from_columns([cols[j] for j in keep], Z.shape[0])


# ---------------------------------------------------------------------------
# Spectral helpers
# ---------------------------------------------------------------------------

def nilpotency_order(A: DomainMatrix, bound: int) -> int | None:
    """Least ``a >= 1`` with ``A^a = 0``; None if no ``a <= bound`` works."""
    if A.shape[0] == 0:
        return 1
    P = A
    for a in range(1, bound + 1):
        if is_zero(P):
            return a
        P = matmul(A, P)
    return None


def relative_nilpotency(T: DomainMatrix, Z: DomainMatrix, B: DomainMatrix, bound: int) -> int | None:
    """Least ``a >= 1`` with ``T^a (span Z) ⊆ span B``, or None past *bound*."""
    if Z.shape[1] == 0 or in_span(B, Z):
        return 1
    V = Z
    for a in range(1, bound + 1):
        V = matmul(T, V)
        if in_span(B, V):
            return a
    return None


def charpoly(A: DomainMatrix) -> tuple["QQ.dtype", ...]:
    """Characteristic polynomial coefficients, leading coefficient first."""
    if A.shape[0] == 0:
        return (QQ.one,)
    return tuple(A.to_dense().charpoly())
