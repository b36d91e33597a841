"""Koszul, Tor and Ext homology computed degree by degree.

Every complex here is a :class:`CochainComplex`: terms ``C^p_d`` with
degree-preserving differentials ``C^p_d -> C^{p+1}_d``.  Chain complexes
are stored with ``p = -k``, so ``Tor_k`` is the cohomology at ``p = -k``.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np
from sympy.polys.matrices import DomainMatrix

from . import linalg as la
from .algebra import transpose
from .groebner import FreeResolution
from .models import (
    DEFAULT_BOUND,
    GradedModel,
    InfiniteDimensionalError,
    MatlisDualModel,
    PolynomialModel,
    ShiftedModel,
    euler_matrix,
    operator_matrix,
    shift,
)


class TruncatedResolutionError(ValueError):
    """The resolution stops before the stage a requested Ext/Tor needs."""


Window = tuple[int, int]


# ---------------------------------------------------------------------------
# Generic complexes
# ---------------------------------------------------------------------------

class CochainComplex:
    """Graded cochain complex of finite-dimensional QQ-spaces."""

    def __init__(self):
        self._memo: dict[Hashable, object] = {}
        self._lock = threading.Lock()

    def _cached(self, key, compute):
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        value = compute()
        with self._lock:
            return self._memo.setdefault(key, value)

    def dim(self, p: int, d: int) -> int:
        raise NotImplementedError

    def _differential(self, p: int, d: int) -> DomainMatrix:
        raise NotImplementedError

    def _euler(self, p: int, d: int) -> DomainMatrix | None:
        return None

    def differential(self, p: int, d: int) -> DomainMatrix:
        """``C^p_d -> C^{p+1}_d``."""
        return self._cached(("diff", p, d), lambda: self._differential(p, d))

    def euler(self, p: int, d: int) -> DomainMatrix | None:
        """Action of the Euler operator on ``C^p_d``, if the complex carries one."""
        return self._cached(("euler", p, d), lambda: self._euler(p, d))

    def cohomology(self, p: int, d: int) -> int:
        n = self.dim(p, d)
        if n == 0:
            return 0
        return n - la.rank(self.differential(p, d)) - la.rank(self.differential(p - 1, d))

    def is_complex(self, p: int, d: int) -> bool:
        return la.is_zero(la.matmul(self.differential(p, d), self.differential(p - 1, d)))

    def euler_order(self, p: int, d: int, bound: int = DEFAULT_BOUND) -> int | None:
        """Least ``a`` with ``(E - d)^a`` killing ``H^p_d``; None past *bound*."""
        E = self.euler(p, d)
        if E is None:
            raise ValueError(f"{type(self).__name__} carries no Euler operator")
        T = la.sub(E, la.scale(la.identity(self.dim(p, d)), d))
        Z, _ = la.kernel(self.differential(p, d))
        B = self.differential(p - 1, d)
        return la.relative_nilpotency(T, Z, B, bound)


@dataclass(frozen=True)
class Operator:
    """A degree-``degree`` linear operator on a graded space, given per degree."""

    name: str
    degree: int
    matrix: Callable[[int], DomainMatrix]


def model_operator(M: GradedModel, spec: str) -> Operator:
    """``"x3"`` or ``"d1"`` as an :class:`Operator` on *M*."""
    kind, idx = spec[0], spec[1:]
    if kind not in ("x", "d") or not idx.isdigit():
        raise ValueError(f"Unknown operator {spec!r}; expected x<i> or d<i>")
    i = int(idx)
    if not 1 <= i <= M.n:
        raise ValueError(f"Operator {spec!r} out of range for n = {M.n}")
    if kind == "x":
        return Operator(spec, 1, lambda e: M.act_x(i, e))
    return Operator(spec, -1, lambda e: M.act_d(i, e))


class KoszulComplex(CochainComplex):
    """Cohomological Koszul complex of commuting operators on a graded space.

    The term of subset ``S`` sits at ``V_{d + c + sum_{j in S} deg(op_j)}``;
    differentials add one index with the usual alternating sign.  When the
    space has an Euler operator ``E`` it acts on the term of ``S`` as
    ``E - c - sum_{j in S} deg(op_j)``.
    """

    def __init__(self, dim: Callable[[int], int], ops: Sequence[Operator], offset: int,
                 euler: Callable[[int], DomainMatrix] | None = None, twisted: bool = True):
        super().__init__()
        self.space_dim = dim
        self.ops = tuple(ops)
        self.offset = offset
        self.space_euler = euler
        self.twisted = twisted
        self.subsets = [list(itertools.combinations(range(len(ops)), p)) for p in range(len(ops) + 1)]

    def _shift(self, S: Sequence[int]) -> int:
        return self.offset + sum(self.ops[j].degree for j in S)

    def _dims(self, p: int, d: int) -> list[int]:
        if not 0 <= p <= len(self.ops):
            return []
        return [self.space_dim(d + self._shift(S)) for S in self.subsets[p]]

    def dim(self, p, d):
        return sum(self._dims(p, d))

    def _differential(self, p, d):
        src, dst = self._dims(p, d), self._dims(p + 1, d)
        if not src or not dst:
            return la.zeros(sum(dst), sum(src))
        index = {S: k for k, S in enumerate(self.subsets[p + 1])}
        blocks = {}
        for col, S in enumerate(self.subsets[p]):
            e = d + self._shift(S)
            for j in range(len(self.ops)):
                if j in S:
                    continue
                U = tuple(sorted(S + (j,)))
                sign = -1 if sum(1 for s in S if s < j) % 2 else 1
                blocks[(index[U], col)] = la.scale(self.ops[j].matrix(e), sign)
        return la.block(blocks, dst, src)

    def _euler(self, p, d):
        if self.space_euler is None:
            return None
        blocks = {}
        dims = self._dims(p, d)
        for k, S in enumerate(self.subsets[p]):
            e = d + self._shift(S)
            E = self.space_euler(e)
            if self.twisted:
                E = la.sub(E, la.scale(la.identity(dims[k]), self._shift(S)))
            blocks[(k, k)] = E
        return la.block(blocks, dims, dims)

    def check_commuting(self, window: Window) -> list[str]:
        """Pairs of operators that fail to commute on *window*."""
        problems = []
        lo, hi = window
        for i, j in itertools.combinations(range(len(self.ops)), 2):
            a, b = self.ops[i], self.ops[j]
            for e in range(lo, hi + 1):
                ab = la.matmul(a.matrix(e + b.degree), b.matrix(e))
                ba = la.matmul(b.matrix(e + a.degree), a.matrix(e))
                if not la.equal(ab, ba):
                    problems.append(f"{a.name} and {b.name} do not commute on degree {e}")
                    break
        return problems


def koszul_complex(M: GradedModel, ops: Sequence[str | Operator], *,
                   offset: int | None = None) -> KoszulComplex:
    """Koszul complex of *ops* on *M*; the top term is unshifted by default."""
    if M.side != "left":
        raise ValueError("Koszul complexes are built on left modules")
    ops = [model_operator(M, o) if isinstance(o, str) else o for o in ops]
    if offset is None:
        offset = -sum(o.degree for o in ops)
    euler = (lambda e: euler_matrix(M, e)) if M.n else None
    return KoszulComplex(M.dim, ops, offset, euler)


def koszul_homology(M: GradedModel, ops: Sequence[str | Operator], index: int, window: Window,
                    *, graded: bool = True) -> dict[int, int]:
    """``dim H^index`` of the Koszul complex of *ops* on *M*, per degree.

    With ``graded=False`` every term keeps the degree of its elements, so
    a single-degree family of operators yields, for example, ``H^0(d, R)``
    in degree 0 instead of ``-n``.
    """
    K = koszul_complex(M, ops)
    problems = K.check_commuting(_padded(window, len(K.ops)))
    if problems:
        raise ValueError("Operators do not commute: " + "; ".join(problems))
    lo, hi = window
    if graded:
        return {d: K.cohomology(index, d) for d in range(lo, hi + 1)}
    degrees = {o.degree for o in K.ops}
    if len(degrees) > 1:
        raise ValueError("graded=False needs operators of a single degree")
    delta = degrees.pop() if degrees else 0
    return {d: K.cohomology(index, d - K.offset - index * delta) for d in range(lo, hi + 1)}


def _padded(window: Window, k: int) -> Window:
    return window[0] - k - 1, window[1] + k + 1


def de_rham(M: GradedModel, nu: int, window: Window, *, graded: bool = True) -> dict[int, int]:
    """``H^nu(d; M)``: the Koszul complex of ``d_1..d_n``."""
    return koszul_homology(M, [f"d{i}" for i in range(1, M.n + 1)], nu, window, graded=graded)


def tor_against_rr(M: GradedModel, nu: int, window: Window) -> dict[int, int]:
    """``Tor^{A_n}_nu(R^r, M) = H^{n - nu}(d; M)``."""
    if not 0 <= nu <= M.n:
        return {d: 0 for d in range(window[0], window[1] + 1)}
    return de_rham(M, M.n - nu, window)


# ---------------------------------------------------------------------------
# Ext and Tor over A_n from a free resolution
# ---------------------------------------------------------------------------

class _ResolutionComplex(CochainComplex):
    def __init__(self, resolution: FreeResolution, N: GradedModel):
        super().__init__()
        if resolution.n != N.n:
            raise ValueError(f"Resolution over A_{resolution.n}, module over A_{N.n}")
        self.res = resolution
        self.N = N

    def require(self, nu: int) -> None:
        if not self.res.available(nu + 1):
            raise TruncatedResolutionError(
                f"Degree {nu} needs stage {nu + 1} of a resolution truncated after {self.res.length}")


class HomComplex(_ResolutionComplex):
    """``Hom_A(F_•, N)`` with ``Hom(F_k, N)_l = ⊕_j N_{l + g_j}``."""

    def _gens(self, p):
        return self.res.degrees[p] if 0 <= p < len(self.res.degrees) else ()

    def dim(self, p, d):
        return sum(self.N.dim(d + g) for g in self._gens(p))

    def _differential(self, p, d):
        src = [self.N.dim(d + g) for g in self._gens(p)]
        dst = [self.N.dim(d + g) for g in self._gens(p + 1)]
        if not src or not dst:
            return la.zeros(sum(dst), sum(src))
        rows = self.res.differential(p + 1)
        blocks = {}
        for j, row in enumerate(rows):
            for i, a in enumerate(row):
                if not a.is_zero():
                    blocks[(j, i)] = operator_matrix(self.N, a, d + self.res.degrees[p][i])
        return la.block(blocks, dst, src)


class TensorComplex(_ResolutionComplex):
    """``N^♯ ⊗_A F_•`` at ``p = -k``; ``C_k`` in degree d is ``⊕_j N_{d - g_j}``."""

    def _gens(self, p):
        k = -p
        return self.res.degrees[k] if 0 <= k < len(self.res.degrees) else ()

    def dim(self, p, d):
        return sum(self.N.dim(d - g) for g in self._gens(p))

    def _differential(self, p, d):
        k = -p
        src = [self.N.dim(d - g) for g in self._gens(p)]
        dst = [self.N.dim(d - g) for g in self._gens(p + 1)]
        if not src or not dst:
            return la.zeros(sum(dst), sum(src))
        gens = self.res.degrees[k]
        blocks = {}
        for j, row in enumerate(self.res.differential(k)):
            for i, a in enumerate(row):
                if not a.is_zero():
                    blocks[(i, j)] = operator_matrix(self.N, transpose(a), d - gens[j])
        return la.block(blocks, dst, src)


def ext_over_an(resolution: FreeResolution, N: GradedModel, nu: int, window: Window) -> dict[int, int]:
    """``Ext^nu_{A_n}(M, N)`` per degree, from a free resolution of M."""
    if N.side != "left":
        raise ValueError("Ext over A_n takes a left module as second argument")
    C = HomComplex(resolution, N)
    C.require(nu)
    lo, hi = window
    return {d: C.cohomology(nu, d) for d in range(lo, hi + 1)}


def tor_over_an(resolution: FreeResolution, N: GradedModel, nu: int, window: Window) -> dict[int, int]:
    """``Tor^{A_n}_nu(N^♯, M)`` per degree, from a free resolution of the left module M."""
    if N.side != "left":
        raise ValueError("Pass the left module; its transpose is formed internally")
    C = TensorComplex(resolution, N)
    C.require(nu)
    lo, hi = window
    return {d: C.cohomology(-nu, d) for d in range(lo, hi + 1)}


# ---------------------------------------------------------------------------
# Tor and Ext over R through the diagonal
# ---------------------------------------------------------------------------

def _range(lo: int | None, hi: int | None, what: str) -> tuple[int, int]:
    if lo is None or hi is None:
        raise InfiniteDimensionalError(f"{what} has infinite-dimensional graded pieces")
    return lo, hi


def _polynomial_shift(M: GradedModel) -> int | None:
    """s when M is the model R(s), else None."""
    if isinstance(M, PolynomialModel):
        return 0
    if isinstance(M, ShiftedModel) and isinstance(M.base, PolynomialModel):
        return M.s
    return None


def _bound(a, b, pick):
    if a is None:
        return b
    if b is None:
        return a
    return pick(a, b)


class _DiagonalSpace:
    """Graded space split into blocks indexed by the degree in M."""

    def blocks(self, e: int) -> list[int]:
        raise NotImplementedError

    def dims(self, e: int) -> list[int]:
        raise NotImplementedError

    def dim(self, e: int) -> int:
        return sum(self.dims(e))

    def _assemble(self, e_src: int, e_dst: int,
                  pieces: Callable[[int], Iterable[tuple[int, DomainMatrix]]]) -> DomainMatrix:
        src, dst = self.blocks(e_src), self.blocks(e_dst)
        index = {a: k for k, a in enumerate(dst)}
        blocks = {}
        for col, a in enumerate(src):
            for a_dst, mat in pieces(a):
                if a_dst in index:
                    key = (index[a_dst], col)
                    blocks[key] = la.add(blocks[key], mat) if key in blocks else mat
        return la.block(blocks, self.dims(e_dst), self.dims(e_src))


class _TensorSpace(_DiagonalSpace):
    """``(M ⊗_K N)_e = ⊕_a M_a ⊗ N_{e-a}`` with Kronecker coordinates."""

    def __init__(self, M: GradedModel, N: GradedModel):
        self.M, self.N = M, N

    def blocks(self, e: int) -> list[int]:
        (lm, hm), (ln, hn) = self.M.support(), self.N.support()
        lo = _bound(lm, None if hn is None else e - hn, max)
        hi = _bound(hm, None if ln is None else e - ln, min)
        lo, hi = _range(lo, hi, "M ⊗_K N")
        return [a for a in range(lo, hi + 1) if self.M.dim(a) and self.N.dim(e - a)]

    def dims(self, e: int) -> list[int]:
        return [self.M.dim(a) * self.N.dim(e - a) for a in self.blocks(e)]

    def diagonal(self, j: int) -> Operator:
        """``y_j = X_j ⊗ 1 - 1 ⊗ X_j``."""
        M, N = self.M, self.N

        def matrix(e):
            def pieces(a):
                b = e - a
                yield a + 1, la.kron(M.act_x(j, a), la.identity(N.dim(b)))
                yield a, la.scale(la.kron(la.identity(M.dim(a)), N.act_x(j, b)), -1)
            return self._assemble(e, e + 1, pieces)
        return Operator(f"y{j}", 1, matrix)

    def euler(self, e: int) -> DomainMatrix:
        """``sum_j (X_j ⊗ 1)(D_j ⊗ 1 + 1 ⊗ D_j)``."""
        M, N = self.M, self.N

        def pieces(a):
            b = e - a
            yield a, la.kron(euler_matrix(M, a), la.identity(N.dim(b)))
            for j in range(1, M.n + 1):
                yield a + 1, la.kron(M.act_x(j, a), N.act_d(j, b))
        return self._assemble(e, e, pieces)


class _HomSpace(_DiagonalSpace):
    """``Hom_K(M, L)_d = ⊕_a Hom(M_a, L_{a+d})``, maps flattened row-major."""

    def __init__(self, M: GradedModel, L: GradedModel):
        self.M, self.L = M, L

    def blocks(self, d: int) -> list[int]:
        (lm, hm), (ll, hl) = self.M.support(), self.L.support()
        lo = _bound(lm, None if ll is None else ll - d, max)
        hi = _bound(hm, None if hl is None else hl - d, min)
        lo, hi = _range(lo, hi, "Hom_K(M, L)")
        return [a for a in range(lo, hi + 1) if self.M.dim(a) and self.L.dim(a + d)]

    def dims(self, d: int) -> list[int]:
        return [self.L.dim(a + d) * self.M.dim(a) for a in self.blocks(d)]

    def diagonal(self, j: int) -> Operator:
        """``φ -> X_j ∘ φ - φ ∘ X_j``."""
        M, L = self.M, self.L

        def matrix(d):
            def pieces(a):
                yield a, la.kron(L.act_x(j, a + d), la.identity(M.dim(a)))
                yield a - 1, la.scale(la.kron(la.identity(L.dim(a + d)),
                                              la.transpose(M.act_x(j, a - 1))), -1)
            return self._assemble(d, d + 1, pieces)
        return Operator(f"y{j}", 1, matrix)

    def euler(self, d: int) -> DomainMatrix:
        """``φ -> sum_j X_j ∘ (D_j ∘ φ - φ ∘ D_j)``."""
        M, L = self.M, self.L

        def pieces(a):
            for j in range(1, M.n + 1):
                yield a, la.kron(la.matmul(L.act_x(j, a + d - 1), L.act_d(j, a + d)),
                                 la.identity(M.dim(a)))
                yield a + 1, la.scale(la.kron(L.act_x(j, a + d),
                                              la.transpose(M.act_d(j, a + 1))), -1)
        return self._assemble(d, d, pieces)


def _check_pair(M: GradedModel, N: GradedModel) -> None:
    if M.n != N.n:
        raise ValueError(f"Modules over A_{M.n} and A_{N.n}")
    if M.side != "left" or N.side != "left":
        raise ValueError("Tor and Ext over R take left modules")


def tor_over_r_complex(M: GradedModel, N: GradedModel) -> KoszulComplex:
    """Diagonal Koszul complex computing ``Tor^R_nu(M, N)`` at ``p = n - nu``."""
    _check_pair(M, N)
    T = _TensorSpace(M, N)
    n = M.n
    return KoszulComplex(T.dim, [T.diagonal(j) for j in range(1, n + 1)], -n, T.euler, twisted=False)


def tor_over_r(M: GradedModel, N: GradedModel, nu: int, window: Window) -> dict[int, int]:
    """``Tor^R_nu(M, N)`` per degree.

    A (shifted) polynomial factor is flat, so the tensor product is the
    other factor shifted; otherwise the diagonal Koszul complex on
    ``M ⊗_K N`` is used and both supports must keep its pieces finite.
    """
    _check_pair(M, N)
    lo, hi = window
    for A, B in ((M, N), (N, M)):
        s = _polynomial_shift(A)
        if s is not None:
            if nu != 0:
                return {d: 0 for d in range(lo, hi + 1)}
            shifted = shift(B, s)
            return {d: shifted.dim(d) for d in range(lo, hi + 1)}
    if not 0 <= nu <= M.n:
        return {d: 0 for d in range(lo, hi + 1)}
    K = tor_over_r_complex(M, N)
    return {d: K.cohomology(M.n - nu, d) for d in range(lo, hi + 1)}


def ext_over_r_complex(M: GradedModel, L: GradedModel) -> KoszulComplex:
    """Diagonal Koszul complex on ``Hom_K(M, L)`` computing ``Ext^nu_R(M, L)`` at ``p = nu``."""
    _check_pair(M, L)
    H = _HomSpace(M, L)
    return KoszulComplex(H.dim, [H.diagonal(j) for j in range(1, M.n + 1)], 0, H.euler, twisted=False)


def ext_over_r(M: GradedModel, L: GradedModel, nu: int, window: Window) -> dict[int, int]:
    """``Ext^nu_R(M, L)`` per degree; ``Ext^0_R(R(s), L) = L(-s)``."""
    _check_pair(M, L)
    lo, hi = window
    s = _polynomial_shift(M)
    if s is not None:
        if nu != 0:
            return {d: 0 for d in range(lo, hi + 1)}
        shifted = shift(L, -s)
        return {d: shifted.dim(d) for d in range(lo, hi + 1)}
    if not 0 <= nu <= M.n:
        return {d: 0 for d in range(lo, hi + 1)}
    K = ext_over_r_complex(M, L)
    return {d: K.cohomology(nu, d) for d in range(lo, hi + 1)}


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class ConcentrationReport:
    """Dimensions of an invariant over ``(nu, degree)`` and where they live."""

    invariant: str
    nus: tuple[int, ...]
    window: Window
    table: np.ndarray
    expected: int | None
    provenance: dict = field(default_factory=dict)
    euler_orders: dict[tuple[int, int], int | None] = field(default_factory=dict)

    def dim(self, nu: int, d: int) -> int:
        return int(self.table[self.nus.index(nu), d - self.window[0]])

    def entries(self) -> list[list[int]]:
        lo = self.window[0]
        return [[nu, lo + k, int(v)]
                for r, nu in enumerate(self.nus)
                for k, v in enumerate(self.table[r]) if v]

    @property
    def vacuous(self) -> bool:
        return not self.table.any()

    @property
    def counterexample(self) -> tuple[int, int, int] | None:
        """First ``(nu, degree, dim)`` with a non-zero dimension off the expected degree."""
        if self.expected is None:
            return None
        for nu, d, v in self.entries():
            if d != self.expected:
                return nu, d, v
        return None

    @property
    def concentrated(self) -> bool:
        return self.counterexample is None

    @property
    def verdict(self) -> str:
        """An all-zero table is concentrated in any expected degree; see :attr:`vacuous`."""
        if self.expected is None:
            return "tabulated"
        if self.concentrated:
            return f"concentrated in degree {self.expected}"
        nu, d, v = self.counterexample
        return f"counterexample: nu={nu}, degree {d}, dim {v}"

    @property
    def euler_passed(self) -> bool:
        return all(a is not None for a in self.euler_orders.values())

    def to_dict(self) -> dict:
        out = {
            "schema": 1,
            "invariant": self.invariant,
            "provenance": self.provenance,
            "window": list(self.window),
            "nus": list(self.nus),
            "expected_degree": self.expected,
            "table": self.entries(),
            "verdict": self.verdict,
            "vacuous": self.vacuous,
            "counterexample": list(self.counterexample) if self.counterexample else None,
        }
        if self.euler_orders:
            out["euler_orders"] = [[nu, d, a] for (nu, d), a in sorted(self.euler_orders.items())]
        return dict(sorted(out.items()))


def concentration(tables: Mapping[int, Mapping[int, int]], expected: int | None, *,
                  invariant: str = "", provenance: dict | None = None) -> ConcentrationReport:
    """Collect per-nu dimension tables into a :class:`ConcentrationReport`."""
    nus = tuple(sorted(tables))
    degrees = sorted({d for t in tables.values() for d in t})
    window = (degrees[0], degrees[-1]) if degrees else (0, -1)
    table = np.zeros((len(nus), window[1] - window[0] + 1), dtype=np.int64)
    for r, nu in enumerate(nus):
        for d, v in tables[nu].items():
            table[r, d - window[0]] = v
    return ConcentrationReport(invariant, nus, window, table, expected, provenance or {})


def euler_orders(complex_: CochainComplex, cells: Iterable[tuple[int, int, int]],
                 bound: int = DEFAULT_BOUND) -> dict[tuple[int, int], int | None]:
    """Euler nilpotency orders on the non-zero cells ``(label, p, degree)``."""
    return {(label, d): complex_.euler_order(p, d, bound) for label, p, d in cells}


def duality_pair(M: GradedModel, N: GradedModel, nu: int, window: Window) -> tuple[dict[int, int], dict[int, int]]:
    """``(Tor^R_nu(M, N)_d, Ext^nu_R(M, N^∨)_{-d})`` over *window*; equal tables expected."""
    tor = tor_over_r(M, N, nu, window)
    ext = ext_over_r(M, MatlisDualModel(N), nu, (-window[1], -window[0]))
    return tor, {d: ext[-d] for d in tor}


def koszul_dims(n: int) -> list[int]:
    """Number of summands in each Koszul term over n operators."""
    return [comb(n, p) for p in range(n + 1)]
