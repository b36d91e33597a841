"""Per-degree models of graded A_n-modules.

A model exposes, for each integer degree ``d``, a finite basis of ``M_d``
together with the matrices of ``X_i: M_d -> M_{d+1}`` and
``D_i: M_d -> M_{d-1}``.  Pieces are computed lazily and memoised; a model
is safe to share between worker threads.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from . import linalg as la
from .algebra import INHOMOGENEOUS, WeylElement, degree_of, format_monomial
from .groebner import GroebnerBasis, normal_form

DEFAULT_BOUND = 10


class InfiniteDimensionalError(ValueError):
    """A requested graded piece is infinite-dimensional."""


def default_window(n: int) -> tuple[int, int]:
    return -(2 * n + 8), 2 * n + 8


def laurent_label(v: Sequence[int]) -> str:
    """Monomial text for a Laurent exponent vector, e.g. ``x1^-1*x2``."""
    parts = []
    for i, e in enumerate(v, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e:
            parts.append(f"x{i}^{e}")
    return "*".join(parts) if parts else "1"


def compositions(total: int, parts: int, cap: int | None = None) -> Iterable[tuple[int, ...]]:
    """Non-negative integer vectors of length *parts* summing to *total*, entries ``< cap``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    top = total if cap is None else min(total, cap - 1)
    for first in range(top, -1, -1):
        for rest in compositions(total - first, parts - 1, cap):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# Base class
# ---------------------------------------------------------------------------

class GradedModel:
    """A graded A_n-module given degree by degree.

    Subclasses implement ``_basis``, ``_act_x`` and ``_act_d``; indices of
    the generators are 1-based throughout.
    """

    side = "left"

    def __init__(self, n: int, provenance: dict):
        self.n = n
        self.provenance = provenance
        self._memo: dict[Hashable, object] = {}
        self._lock = threading.Lock()

    def _cached(self, key: Hashable, compute: Callable[[], object]):
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        value = compute()
        with self._lock:
            return self._memo.setdefault(key, value)

    def _check(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise ValueError(f"Generator index {i} out of range for n = {self.n}")

    # -- public interface ----------------------------------------------------

    def basis(self, d: int) -> tuple[str, ...]:
        return self._cached(("basis", d), lambda: tuple(self._basis(d)))

    def dim(self, d: int) -> int:
        return len(self.basis(d))

    def act_x(self, i: int, d: int) -> DomainMatrix:
        """Matrix of ``X_i: M_d -> M_{d+1}``."""
        self._check(i)
        return self._cached(("x", i, d), lambda: self._act_x(i, d))

    def act_d(self, i: int, d: int) -> DomainMatrix:
        """Matrix of ``D_i: M_d -> M_{d-1}``."""
        self._check(i)
        return self._cached(("d", i, d), lambda: self._act_d(i, d))

    def support(self) -> tuple[int | None, int | None]:
        """Bounds ``(lo, hi)`` outside which every piece vanishes; None is unbounded."""
        return None, None

    def dims(self, window: tuple[int, int]) -> dict[int, int]:
        lo, hi = window
        return {d: self.dim(d) for d in range(lo, hi + 1)}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.provenance})"

    # -- hooks ---------------------------------------------------------------

    def _basis(self, d: int) -> Sequence[str]:
        raise NotImplementedError

    def _act_x(self, i: int, d: int) -> DomainMatrix:
        raise NotImplementedError

    def _act_d(self, i: int, d: int) -> DomainMatrix:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Polynomial ring and localization
# ---------------------------------------------------------------------------

class _MonomialModel(GradedModel):
    """Models whose basis is a set of Laurent monomials ``x^v``."""

    def _vectors(self, d: int) -> tuple[tuple[int, ...], ...]:
        raise NotImplementedError

    def _index(self, d: int) -> dict[tuple[int, ...], int]:
        return self._cached(("index", d), lambda: {v: k for k, v in enumerate(self._vectors(d))})

    def _basis(self, d):
        return [laurent_label(v) for v in self._vectors(d)]

    def _act_x(self, i, d):
        target = self._index(d + 1)
        rows = {}
        for k, v in enumerate(self._vectors(d)):
            w = list(v)
            w[i - 1] += 1
            t = target.get(tuple(w))
            if t is not None:
                rows.setdefault(t, {})[k] = QQ.one
        return la.matrix(rows, (self.dim(d + 1), self.dim(d)))

    def _act_d(self, i, d):
        target = self._index(d - 1)
        rows = {}
        for k, v in enumerate(self._vectors(d)):
            if v[i - 1] == 0:
                continue
            w = list(v)
            w[i - 1] -= 1
            t = target.get(tuple(w))
            if t is not None:
                rows.setdefault(t, {})[k] = QQ(v[i - 1])
        return la.matrix(rows, (self.dim(d - 1), self.dim(d)))


class PolynomialModel(_MonomialModel):
    """``R = QQ[x_1..x_n]`` with X acting by multiplication and D by differentiation."""

    def __init__(self, n: int):
        if n < 0:
            raise ValueError(f"n must be non-negative, got {n}")
        super().__init__(n, {"constructor": "polynomial", "args": {"n": n}})

    def _vectors(self, d):
        if d < 0:
            return ()
        return self._cached(("vectors", d), lambda: tuple(compositions(d, self.n)))

    def support(self):
        return 0, None


class LocalizationModel(_MonomialModel):
    """``R_f`` for ``f`` the product of the variables in *S*.

    Only ``n = 1, S = {1}`` has finite-dimensional pieces.
    """

    def __init__(self, n: int, S: Iterable[int]):
        S = frozenset(S)
        if not S <= set(range(1, n + 1)):
            raise ValueError(f"Localizing set {sorted(S)} is not a subset of 1..{n}")
        if not (n == 1 and S == {1}):
            raise InfiniteDimensionalError(
                f"R localized at {sorted(S)} for n = {n} has infinite-dimensional graded pieces")
        super().__init__(n, {"constructor": "localization", "args": {"n": n, "S": sorted(S)}})

    def _vectors(self, d):
        return ((d,),)


def polynomial_model(n: int) -> PolynomialModel:
    return PolynomialModel(n)


def localization_model(n: int, S: Iterable[int]) -> LocalizationModel:
    return LocalizationModel(n, S)


# ---------------------------------------------------------------------------
# Local cohomology with monomial support
# ---------------------------------------------------------------------------

@dataclass
class _Region:
    """Cohomology of the face complex attached to a sign pattern G."""

    faces: dict[tuple[int, ...], int]           # degree-i faces -> coordinate
    reps: DomainMatrix                           # representatives as columns
    boundaries: DomainMatrix                     # image of the previous differential
    h: int = field(init=False)

    def __post_init__(self):
        self.h = self.reps.shape[1]

    def coordinates(self, cocycle: DomainMatrix) -> DomainMatrix:
        sol = la.solve(la.hstack(self.boundaries, self.reps), cocycle)
        if sol is None:
            raise RuntimeError("Cocycle outside the cohomology of its face complex")
        nb = self.boundaries.shape[1]
        rows = {r - nb: row for r, row in la.entries(sol).items() if r >= nb}
        return la.matrix(rows, (self.h, cocycle.shape[1]))


def parse_ideal(text: str, n: int) -> tuple[frozenset[int], ...]:
    """Squarefree monomial generators from text like ``"x1*x2, x3"``; ``"0"`` is the zero ideal."""
    text = text.strip()
    if text in ("", "0", "(0)"):
        return ()
    text = text.strip("()")
    gens = []
    for piece in text.split(","):
        piece = piece.strip()
        support = set()
        for factor in piece.split("*"):
            factor = factor.strip()
            if not factor.startswith("x") or "^" in factor:
                raise ValueError(f"{piece!r} is not a squarefree monomial")
            i = int(factor[1:])
            if not 1 <= i <= n or i in support:
                raise ValueError(f"{piece!r} is not a squarefree monomial in x1..x{n}")
            support.add(i)
        gens.append(frozenset(support))
    return tuple(gens)


def ideal_label(generators: Sequence[frozenset[int]]) -> str:
    if not generators:
        return "(0)"
    return "(" + ", ".join("*".join(f"x{i}" for i in sorted(g)) for g in generators) + ")"


class CechModel(GradedModel):
    """``H^i_I(R)`` for a squarefree monomial ideal ``I``, via the Čech complex.

    A Laurent monomial ``x^v`` contributes through its negative support
    ``G = {j : v_j < 0}``: the faces ``T`` of generators whose union covers
    ``G`` form a complex whose i-th cohomology is the multiplicity of
    ``x^v`` in ``H^i_I(R)``.
    """

    def __init__(self, n: int, generators: Iterable[Iterable[int]], i: int):
        gens = []
        for g in generators:
            g = tuple(g)
            if len(set(g)) != len(g):
                raise ValueError(f"Generator with support {g} is not squarefree")
            g = frozenset(g)
            if not g or not g <= set(range(1, n + 1)):
                raise ValueError(f"Generator support {sorted(g)} is not a nonempty subset of 1..{n}")
            gens.append(g)
        if n < 1:
            raise ValueError("Local cohomology needs n >= 1")
        super().__init__(n, {"constructor": "cech",
                             "args": {"n": n, "ideal": ideal_label(gens), "i": i}})
        self.generators = tuple(gens)
        self.i = i
        self._regions = {G: self._region(G) for G in self._sign_patterns()}
        for G, region in self._regions.items():
            if region.h and 0 < len(G) < n:
                raise InfiniteDimensionalError(
                    f"H^{i}_{ideal_label(gens)}(R) has infinite-dimensional pieces: "
                    f"monomials with negative support {sorted(G)} contribute")

    def _sign_patterns(self) -> list[frozenset[int]]:
        idx = range(1, self.n + 1)
        return [frozenset(c) for k in range(self.n + 1) for c in itertools.combinations(idx, k)]

    def _faces(self, G: frozenset[int], size: int) -> dict[tuple[int, ...], int]:
        out = {}
        for T in itertools.combinations(range(len(self.generators)), size):
            covered = frozenset().union(*(self.generators[t] for t in T))
            if G <= covered:
                out[T] = len(out)
        return out

    def _coboundary(self, G, size: int) -> DomainMatrix:
        src, dst = self._faces(G, size), self._faces(G, size + 1)
        rows = {}
        for T, col in src.items():
            for t in range(len(self.generators)):
                if t in T:
                    continue
                U = tuple(sorted(T + (t,)))
                sign = -1 if sum(1 for s in T if s < t) % 2 else 1
                rows.setdefault(dst[U], {})[col] = QQ(sign)
        return la.matrix(rows, (len(dst), len(src)))

    def _region(self, G: frozenset[int]) -> _Region:
        i = self.i
        faces = self._faces(G, i) if i >= 0 else {}
        if not faces:
            return _Region(faces, la.zeros(0, 0), la.zeros(0, 0))
        Z, _ = la.kernel(self._coboundary(G, i))
        B = self._coboundary(G, i - 1) if i >= 1 else la.zeros(len(faces), 0)
        return _Region(faces, la.complement_basis(B, Z), B)

    def _entries(self, d: int) -> tuple[tuple[tuple[int, ...], int], ...]:
        def compute():
            out = []
            empty = self._regions[frozenset()]
            if empty.h and d >= 0:
                out += [(v, k) for v in compositions(d, self.n) for k in range(empty.h)]
            full = self._regions[frozenset(range(1, self.n + 1))]
            if full.h and -d >= self.n:
                out += [(tuple(-1 - e for e in w), k)
                        for w in compositions(-d - self.n, self.n) for k in range(full.h)]
            return tuple(out)
        return self._cached(("entries", d), compute)

    def _index(self, d):
        return self._cached(("index", d), lambda: {e: k for k, e in enumerate(self._entries(d))})

    def _basis(self, d):
        labels = []
        for v, k in self._entries(d):
            h = self._regions[self._negative(v)].h
            labels.append(laurent_label(v) + (f"#{k}" if h > 1 else ""))
        return labels

    @staticmethod
    def _negative(v) -> frozenset[int]:
        return frozenset(j for j, e in enumerate(v, start=1) if e < 0)

    def _act_x(self, j, d):
        target = self._index(d + 1)
        rows: dict[int, dict[int, object]] = {}
        for col, (v, k) in enumerate(self._entries(d)):
            w = list(v)
            w[j - 1] += 1
            w = tuple(w)
            G, H = self._negative(v), self._negative(w)
            if G == H:
                t = target.get((w, k))
                if t is not None:
                    rows.setdefault(t, {})[col] = QQ.one
                continue
            src, dst = self._regions[G], self._regions[H]
            if not dst.h:
                continue
            # Faces covering G also cover H, so the representative embeds.
            rep = la.columns(src.reps)[k]
            embedded = {dst.faces[T]: rep.get(src.faces[T]) for T in src.faces if rep.get(src.faces[T])}
            coords = dst.coordinates(la.from_columns([embedded], len(dst.faces)))
            for m, row in la.entries(coords).items():
                t = target.get((w, m))
                if t is not None:
                    rows.setdefault(t, {})[col] = row[0]
        return la.matrix(rows, (self.dim(d + 1), self.dim(d)))

    def _act_d(self, j, d):
        target = self._index(d - 1)
        rows = {}
        for col, (v, k) in enumerate(self._entries(d)):
            if v[j - 1] == 0:
                continue
            w = list(v)
            w[j - 1] -= 1
            t = target.get((tuple(w), k))
            if t is not None:
                rows.setdefault(t, {})[col] = QQ(v[j - 1])
        return la.matrix(rows, (self.dim(d - 1), self.dim(d)))

    @property
    def is_zero_module(self) -> bool:
        return not any(r.h for r in self._regions.values())

    def support(self):
        pos = self._regions[frozenset()].h > 0
        neg = self._regions[frozenset(range(1, self.n + 1))].h > 0
        if pos and neg:
            return None, None
        if pos:
            return 0, None
        if neg:
            return None, -self.n
        return 0, -1


def cech_model(n: int, generators: Iterable[Iterable[int]], i: int) -> CechModel:
    return CechModel(n, generators, i)


# ---------------------------------------------------------------------------
# Cyclic presentations
# ---------------------------------------------------------------------------

def _pair_bound(G: GroebnerBasis) -> int:
    """Exponent bound P such that every standard monomial has all x- or all d-exponents below P."""
    n = G.n
    leads = [(t[1], t[2]) for t in G.leads()]
    bound = 0
    for a in range(n):
        for b in range(n):
            best = None
            for xe, de in leads:
                if any(e for k, e in enumerate(xe) if k != a) or any(e for k, e in enumerate(de) if k != b):
                    continue
                size = max(xe[a], de[b])
                best = size if best is None else min(best, size)
            if best is None:
                raise InfiniteDimensionalError(
                    f"A_{n}/J has infinite-dimensional pieces: no leading monomial in x{a + 1}, d{b + 1} alone")
            bound = max(bound, best)
    return bound


class PresentationModel(GradedModel):
    """``(A_n/J)(shift)`` with standard monomials as basis and normal forms as action.

    Standard monomials are enumerated with x- or d-exponents capped at
    *bound*; the default is the least cap the leading monomials allow, and a
    larger cap enumerates the same basis.
    """

    def __init__(self, G: GroebnerBasis, shift: int = 0, gens: Sequence[str] | None = None,
                 *, bound: int | None = None):
        if not G.is_ideal:
            raise ValueError("Presentations need the Gröbner basis of a left ideal")
        super().__init__(G.n, {"constructor": "presentation",
                               "args": {"n": G.n, "gens": list(gens) if gens is not None
                                        else [str(g) for g in G.generators],
                                        "order": G.term_order.kind},
                               "shift": shift})
        self.groebner = G
        self.shift = shift
        self._unit = G.is_unit_ideal()
        least = 0 if self._unit else _pair_bound(G)
        if bound is not None and bound < least:
            raise ValueError(f"Enumeration bound {bound} is below the least admissible bound {least}")
        self.bound = least if bound is None else bound
        self._leads = [(t[1], t[2]) for t in G.leads()]

    def _standard(self, e: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
        """Standard monomials of Weyl degree *e*, sorted."""
        def compute():
            if self._unit:
                return ()
            n, P = self.n, self.bound
            found = set()
            for sx in range(0, n * (P - 1) + 1):
                sd = sx - e
                if sd < 0:
                    continue
                for xe in compositions(sx, n, P):
                    for de in compositions(sd, n):
                        found.add((xe, de))
            for sd in range(0, n * (P - 1) + 1):
                sx = sd + e
                if sx < 0:
                    continue
                for de in compositions(sd, n, P):
                    for xe in compositions(sx, n):
                        found.add((xe, de))
            return tuple(sorted(m for m in found if not any(
                all(a <= b for a, b in zip(lx, m[0])) and all(a <= b for a, b in zip(ld, m[1]))
                for lx, ld in self._leads)))
        return self._cached(("standard", e), compute)

    def _index(self, e: int):
        return self._cached(("index", e), lambda: {m: k for k, m in enumerate(self._standard(e))})

    def _basis(self, d):
        return [format_monomial(m) for m in self._standard(d + self.shift)]

    def _act(self, op: WeylElement, d: int, step: int) -> DomainMatrix:
        e = d + self.shift
        target = self._index(e + step)
        rows = {}
        for col, (xe, de) in enumerate(self._standard(e)):
            r = normal_form(op * WeylElement(self.n, {(xe, de): 1}), self.groebner)
            for m, c in r.terms.items():
                t = target.get(m)
                if t is None:
                    raise RuntimeError(f"Normal form term {format_monomial(m)} is not standard in degree {e + step}")
                rows.setdefault(t, {})[col] = c
        return la.matrix(rows, (len(self._standard(e + step)), len(self._standard(e))))

    def _act_x(self, i, d):
        return self._act(WeylElement.x(self.n, i), d, 1)

    def _act_d(self, i, d):
        return self._act(WeylElement.d(self.n, i), d, -1)


def presentation_model(G: GroebnerBasis, shift: int = 0) -> PresentationModel:
    return PresentationModel(G, shift)


# ---------------------------------------------------------------------------
# Derived models
# ---------------------------------------------------------------------------

class ShiftedModel(GradedModel):
    """``M(s)`` with ``M(s)_d = M_{s+d}``."""

    def __init__(self, base: GradedModel, s: int):
        super().__init__(base.n, {"constructor": "shift", "s": s, "of": base.provenance})
        self.base = base
        self.s = s
        self.side = base.side

    def _basis(self, d):
        return self.base.basis(self.s + d)

    def _act_x(self, i, d):
        return self.base.act_x(i, self.s + d)

    def _act_d(self, i, d):
        return self.base.act_d(i, self.s + d)

    def support(self):
        lo, hi = self.base.support()
        return (None if lo is None else lo - self.s), (None if hi is None else hi - self.s)


def shift(M: GradedModel, s: int) -> GradedModel:
    """``M(s)``; nested shifts are combined and ``shift(M, 0)`` is ``M``."""
    if isinstance(M, ShiftedModel):
        s, M = s + M.s, M.base
    return M if s == 0 else ShiftedModel(M, s)


class MatlisDualModel(GradedModel):
    """Graded dual ``M^∨`` with ``(M^∨)_i = Hom(M_{-i}, QQ)``.

    ``X`` acts by the transpose of X and ``D`` by minus the transpose of D,
    so the Weyl relations are preserved.
    """

    def __init__(self, base: GradedModel):
        if base.side != "left":
            raise ValueError("Matlis duals are taken of left modules")
        super().__init__(base.n, {"constructor": "dual", "of": base.provenance})
        self.base = base

    def _basis(self, d):
        return [f"dual({b})" for b in self.base.basis(-d)]

    def _act_x(self, i, d):
        return la.transpose(self.base.act_x(i, -d - 1))

    def _act_d(self, i, d):
        return la.scale(la.transpose(self.base.act_d(i, -d + 1)), -1)

    def support(self):
        lo, hi = self.base.support()
        return (None if hi is None else -hi), (None if lo is None else -lo)


def matlis_dual(M: GradedModel) -> GradedModel:
    """``M^∨``; dualizing a dual returns the original model."""
    if isinstance(M, MatlisDualModel):
        return M.base
    return MatlisDualModel(M)


class TransposeModel(GradedModel):
    """The right module ``M^♯``: same pieces, ``m ⋆ x_i = X_i m`` and ``m ⋆ d_i = -D_i m``."""

    side = "right"

    def __init__(self, base: GradedModel):
        if base.side != "left":
            raise ValueError("Transpose models are built from left modules")
        super().__init__(base.n, {"constructor": "transpose", "of": base.provenance})
        self.base = base

    def _basis(self, d):
        return self.base.basis(d)

    def _act_x(self, i, d):
        return self.base.act_x(i, d)

    def _act_d(self, i, d):
        return la.scale(self.base.act_d(i, d), -1)

    def support(self):
        return self.base.support()


def transpose_model(M: GradedModel) -> GradedModel:
    if isinstance(M, TransposeModel):
        return M.base
    return TransposeModel(M)


class KoszulOperatorModel(GradedModel):
    """Kernel or cokernel of ``x_n`` or ``d_n`` on M, as an A_{n-1}-module.

    ======  =====  ==========================================
    op      index  piece in degree d
    ======  =====  ==========================================
    ``x``   1      ``ker(x_n: M_{d-1} -> M_d)``
    ``x``   0      ``coker(x_n: M_{d-1} -> M_d)``
    ``d``   1      ``ker(d_n: M_d -> M_{d-1})``
    ``d``   0      ``coker(d_n: M_d -> M_{d-1})``
    ======  =====  ==========================================
    """

    def __init__(self, base: GradedModel, op: str, index: int):
        if base.side != "left" or base.n < 1:
            raise ValueError("Koszul operator models need a left module with n >= 1")
        if op not in ("x", "d") or index not in (0, 1):
            raise ValueError(f"Unsupported Koszul operator model ({op!r}, {index})")
        super().__init__(base.n - 1, {"constructor": "koszul", "op": op, "index": index,
                                      "of": base.provenance})
        self.base = base
        self.op = op
        self.index = index
        # Piece of degree d lives in M_{d + offset}; the operator has degree delta.
        self.delta = 1 if op == "x" else -1
        self.offset = -1 if (op, index) in (("x", 1), ("d", 0)) else 0

    def _operator(self, e: int) -> DomainMatrix:
        """The last operator out of ``M_e``."""
        last = self.base.n
        return self.base.act_x(last, e) if self.op == "x" else self.base.act_d(last, e)

    def _piece(self, d: int):
        def compute():
            e = d + self.offset
            if self.index == 1:
                return la.kernel(self._operator(e))
            return la.quotient(self._operator(e - self.delta), self.base.dim(e))
        return self._cached(("piece", d), compute)

    def _basis(self, d):
        labels = self.base.basis(d + self.offset)
        if self.index == 1:
            _, free = self._piece(d)
            return [f"ker[{labels[f]}]" for f in free]
        _, _, complement = self._piece(d)
        return [f"[{labels[c]}]" for c in complement]

    def _induced(self, A: DomainMatrix, d_src: int, d_dst: int) -> DomainMatrix:
        if self.index == 1:
            Z, _ = self._piece(d_src)
            _, free = self._piece(d_dst)
            return la.kernel_coordinates(la.matmul(A, Z), free)
        _, S, _ = self._piece(d_src)
        P, _, _ = self._piece(d_dst)
        return la.chain(P, A, S)

    def _act_x(self, i, d):
        return self._induced(self.base.act_x(i, d + self.offset), d, d + 1)

    def _act_d(self, i, d):
        return self._induced(self.base.act_d(i, d + self.offset), d, d - 1)

    def support(self):
        lo, hi = self.base.support()
        return (None if lo is None else lo - self.offset - 1), (None if hi is None else hi - self.offset + 1)


def koszul_operator_model(M: GradedModel, op: str, index: int) -> KoszulOperatorModel:
    return KoszulOperatorModel(M, op, index)


# ---------------------------------------------------------------------------
# Operators, relations and Euler checks
# ---------------------------------------------------------------------------

def operator_matrix(M: GradedModel, a: WeylElement, d: int) -> DomainMatrix:
    """Matrix of the action of *a* on ``M_d``.

    Left modules apply ``x^α d^β`` as ``X^α D^β``; right modules apply
    ``m ⋆ x^α d^β``, the X's first.
    """
    if a.n != M.n:
        raise ValueError(f"Element of A_{a.n} acting on a model over A_{M.n}")
    if a.is_zero():
        return la.zeros(M.dim(d), M.dim(d))
    deg = degree_of(a)
    if deg == INHOMOGENEOUS:
        raise ValueError(f"{a} is not homogeneous")
    out = la.zeros(M.dim(d + deg), M.dim(d))
    for (xe, de), c in a.terms.items():
        steps = [("d", i + 1) for i, e in enumerate(de) for _ in range(e)]
        xs = [("x", i + 1) for i, e in enumerate(xe) for _ in range(e)]
        steps = xs + steps if M.side == "right" else steps + xs
        mat = la.identity(M.dim(d))
        e = d
        for kind, i in steps:
            if kind == "x":
                mat = la.matmul(M.act_x(i, e), mat)
                e += 1
            else:
                mat = la.matmul(M.act_d(i, e), mat)
                e -= 1
        out = la.add(out, la.scale(mat, c))
    return out


def euler_matrix(M: GradedModel, d: int) -> DomainMatrix:
    """``E = sum_i X_i D_i`` on ``M_d``."""
    out = la.zeros(M.dim(d), M.dim(d))
    for i in range(1, M.n + 1):
        out = la.add(out, la.matmul(M.act_x(i, d - 1), M.act_d(i, d)))
    return out


def euler_charpoly(M: GradedModel, d: int) -> tuple:
    return la.charpoly(euler_matrix(M, d))


def check_weyl_relations(M: GradedModel, window: tuple[int, int]) -> list[str]:
    """Violations of the Weyl relations on the degrees in *window* (empty when they hold)."""
    problems = []
    lo, hi = window
    sign = 1 if M.side == "left" else -1
    for d in range(lo, hi + 1):
        ident = la.identity(M.dim(d))
        for i in range(1, M.n + 1):
            bracket = la.sub(la.matmul(M.act_d(i, d + 1), M.act_x(i, d)),
                             la.matmul(M.act_x(i, d - 1), M.act_d(i, d)))
            if not la.equal(bracket, la.scale(ident, sign)):
                problems.append(f"[d{i}, x{i}] != {sign} on degree {d}")
            for j in range(i + 1, M.n + 1):
                if not la.equal(la.matmul(M.act_x(i, d + 1), M.act_x(j, d)),
                                la.matmul(M.act_x(j, d + 1), M.act_x(i, d))):
                    problems.append(f"x{i}, x{j} do not commute on degree {d}")
                if not la.equal(la.matmul(M.act_d(i, d - 1), M.act_d(j, d)),
                                la.matmul(M.act_d(j, d - 1), M.act_d(i, d))):
                    problems.append(f"d{i}, d{j} do not commute on degree {d}")
            for j in range(1, M.n + 1):
                if j != i and not la.equal(la.matmul(M.act_x(i, d - 1), M.act_d(j, d)),
                                           la.matmul(M.act_d(j, d + 1), M.act_x(i, d))):
                    problems.append(f"x{i}, d{j} do not commute on degree {d}")
    return problems


@dataclass
class EulerianReport:
    """Per-degree nilpotency orders of ``E - d`` on a model."""

    window: tuple[int, int]
    orders: dict[int, int | None]
    bound: int
    provenance: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(a is not None for a in self.orders.values())

    @property
    def uniform_bound(self) -> int | None:
        if not self.passed:
            return None
        return max(self.orders.values(), default=1)

    @property
    def failures(self) -> list[int]:
        return [d for d, a in self.orders.items() if a is None]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "provenance": self.provenance,
            "window": list(self.window),
            "bound": self.bound,
            "passed": self.passed,
            "uniform_bound": self.uniform_bound,
            "orders": [[d, self.orders[d]] for d in sorted(self.orders)],
        }


def check_generalized_eulerian(M: GradedModel, window: tuple[int, int] | None = None,
                               bound: int = DEFAULT_BOUND) -> EulerianReport:
    """Least ``a`` with ``(E - d)^a = 0`` on each ``M_d`` in *window*."""
    if M.side != "left":
        raise ValueError("The Eulerian check applies to left modules")
    if window is None:
        window = default_window(M.n)
    lo, hi = window
    orders = {}
    for d in range(lo, hi + 1):
        T = la.sub(euler_matrix(M, d), la.scale(la.identity(M.dim(d)), d))
        orders[d] = la.nilpotency_order(T, bound)
    return EulerianReport((lo, hi), orders, bound, M.provenance)
