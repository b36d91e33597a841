"""Left Gröbner bases, syzygies and graded free resolutions over A_n(QQ).

Ideals are rank-one submodules of A_n; submodules of free modules A^r are
lists of :class:`FreeModuleElement`.  All orders are degree-compatible on
the concatenated exponent vector ``xExp + dExp``, which makes the left
Buchberger algorithm terminate.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from sympy import QQ

from .algebra import (
    INHOMOGENEOUS,
    WeylElement,
    degree_of,
    euler_operator,
    monomial_product,
    term_degree,
)

DEFAULT_ORDER = "degrevlex"
DEFAULT_AMAX = 10
DEFAULT_MAX_PAIRS = 10_000

# (component, xExp, dExp)
Term = tuple[int, tuple[int, ...], tuple[int, ...]]
Vector = dict[Term, "QQ.dtype"]


# ---------------------------------------------------------------------------
# Orders
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TermOrder:
    """Degree-compatible term order on ``xExp + dExp``."""

    kind: str = DEFAULT_ORDER

    def __post_init__(self):
        if self.kind not in ("degrevlex", "deglex"):
            raise ValueError(f"Unknown term order {self.kind!r}; use 'degrevlex' or 'deglex'")

    def key(self, exps: tuple[int, ...]) -> tuple:
        total = sum(exps)
        if self.kind == "deglex":
            return (total, exps)
        return (total, tuple(-e for e in reversed(exps)))


@dataclass(frozen=True)
class ModuleOrder:
    """Term-over-position order on A^r, optionally induced Schreyer-style.

    A Schreyer order compares ``m e_k`` through ``m * lead(g_k)`` in the
    parent order, breaking ties by the component index.
    """

    term_order: TermOrder = field(default_factory=TermOrder)
    leads: tuple[tuple[int, tuple[int, ...]], ...] | None = None
    parent: "ModuleOrder | None" = None

    def key(self, comp: int, exps: tuple[int, ...]) -> tuple:
        if self.parent is None:
            return (self.term_order.key(exps), -comp)
        pcomp, pexps = self.leads[comp]
        shifted = tuple(a + b for a, b in zip(exps, pexps))
        return self.parent.key(pcomp, shifted) + (-comp,)

    def term_key(self, term: Term) -> tuple:
        comp, xe, de = term
        return self.key(comp, xe + de)


OrderLike = Union[str, TermOrder, ModuleOrder]


def as_module_order(order: OrderLike) -> ModuleOrder:
    if isinstance(order, ModuleOrder):
        return order
    if isinstance(order, str):
        order = TermOrder(order)
    return ModuleOrder(order)


# ---------------------------------------------------------------------------
# Free module elements
# ---------------------------------------------------------------------------

class FreeModuleElement:
    """Row vector in the graded free module ``⊕ A(-degrees[k])``."""

    __slots__ = ("components", "degrees")

    def __init__(self, components: Sequence[WeylElement], degrees: Sequence[int] | None = None):
        components = tuple(components)
        if not components:
            raise ValueError("A free module element needs at least one component")
        n = components[0].n
        if any(c.n != n for c in components):
            raise ValueError("Components live in different Weyl algebras")
        degrees = tuple(degrees) if degrees is not None else (0,) * len(components)
        if len(degrees) != len(components):
            raise ValueError(f"{len(degrees)} generator degrees for rank {len(components)}")
        self.components = components
        self.degrees = degrees

    @property
    def n(self) -> int:
        return self.components[0].n

    @property
    def rank(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def degree(self) -> int | str:
        seen = {term_degree(m) + self.degrees[k]
                for k, c in enumerate(self.components) for m in c.terms}
        if not seen:
            raise ValueError("The zero vector has no degree")
        return seen.pop() if len(seen) == 1 else INHOMOGENEOUS

    def _like(self, comps) -> "FreeModuleElement":
        return FreeModuleElement(comps, self.degrees)

    def __add__(self, other: "FreeModuleElement") -> "FreeModuleElement":
        return self._like(a + b for a, b in zip(self.components, other.components))

    def __sub__(self, other: "FreeModuleElement") -> "FreeModuleElement":
        return self._like(a - b for a, b in zip(self.components, other.components))

    def __neg__(self) -> "FreeModuleElement":
        return self._like(-a for a in self.components)

    def __rmul__(self, a) -> "FreeModuleElement":
        return self._like(a * c for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeModuleElement):
            return NotImplemented
        return self.components == other.components and self.degrees == other.degrees

    def __hash__(self) -> int:
        return hash((self.components, self.degrees))

    def __repr__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"


Element = Union[WeylElement, FreeModuleElement]


def _to_vector(f: Element) -> Vector:
    comps = (f,) if isinstance(f, WeylElement) else f.components
    return {(k, xe, de): c for k, comp in enumerate(comps) for (xe, de), c in comp.terms.items()}


def _from_vector(vec: Vector, n: int, rank: int) -> list[WeylElement]:
    buckets: list[dict] = [{} for _ in range(rank)]
    for (k, xe, de), c in vec.items():
        buckets[k][(xe, de)] = c
    return [WeylElement(n, b) for b in buckets]


# ---------------------------------------------------------------------------
# Vector kernels
# ---------------------------------------------------------------------------

def _lead(vec: Vector, order: ModuleOrder) -> Term:
    return max(vec, key=order.term_key)


def _divides(g: Term, t: Term) -> bool:
    return (g[0] == t[0]
            and all(a <= b for a, b in zip(g[1], t[1]))
            and all(a <= b for a, b in zip(g[2], t[2])))


def _mono_times(xa, da, vec: Vector) -> Vector:
    out: Vector = {}
    for (k, xb, db), c in vec.items():
        for (xe, de), w in monomial_product(xa, da, xb, db):
            key = (k, xe, de)
            s = out.get(key, QQ.zero) + c * w
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _axpy(target: Vector, c, vec: Vector) -> None:
    for key, v in vec.items():
        s = target.get(key, QQ.zero) + c * v
        if s:
            target[key] = s
        else:
            target.pop(key, None)


def _monic(vec: Vector, order: ModuleOrder) -> Vector:
    lc = vec[_lead(vec, order)]
    return {k: v / lc for k, v in vec.items()}


def _reduce(vec: Vector, basis: Sequence[Vector], leads: Sequence[Term], order: ModuleOrder,
            quotients: list[dict] | None = None) -> Vector:
    """Full left reduction; quotients accumulate ``{(xExp, dExp): coeff}`` per divisor."""
    p = dict(vec)
    rest: Vector = {}
    while p:
        lt = _lead(p, order)
        c = p[lt]
        for idx, gl in enumerate(leads):
            if _divides(gl, lt):
                g = basis[idx]
                mx = tuple(a - b for a, b in zip(lt[1], gl[1]))
                md = tuple(a - b for a, b in zip(lt[2], gl[2]))
                q = c / g[gl]
                _axpy(p, -q, _mono_times(mx, md, g))
                if quotients is not None:
                    bucket = quotients[idx]
                    s = bucket.get((mx, md), QQ.zero) + q
                    if s:
                        bucket[(mx, md)] = s
                    else:
                        bucket.pop((mx, md), None)
                break
        else:
            rest[lt] = c
            del p[lt]
    return rest


def _lcm(a: Term, b: Term) -> Term:
    return (a[0], tuple(map(max, a[1], b[1])), tuple(map(max, a[2], b[2])))


def _cofactor(l: Term, t: Term) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(a - b for a, b in zip(l[1], t[1])), tuple(a - b for a, b in zip(l[2], t[2]))


def _spoly(gi: Vector, li: Term, gj: Vector, lj: Term) -> tuple[Vector, tuple, tuple]:
    l = _lcm(li, lj)
    mi, mj = _cofactor(l, li), _cofactor(l, lj)
    s = {}
    _axpy(s, QQ.one / gi[li], _mono_times(*mi, gi))
    _axpy(s, -QQ.one / gj[lj], _mono_times(*mj, gj))
    return s, mi, mj


def _coprime(a: Term, b: Term) -> bool:
    return not any(x and y for x, y in zip(a[1] + a[2], b[1] + b[2]))


def _support(vec: Vector) -> set[int]:
    used = set()
    for _, xe, de in vec:
        used.update(i for i, (p, q) in enumerate(zip(xe, de)) if p or q)
    return used


# ---------------------------------------------------------------------------
# Gröbner bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced left Gröbner basis with its order and free-module data."""

    generators: tuple[Element, ...]
    order: ModuleOrder
    n: int
    rank: int = 1
    degrees: tuple[int, ...] = (0,)
    reduced: bool = True

    @property
    def is_ideal(self) -> bool:
        return self.rank == 1 and all(isinstance(g, WeylElement) for g in self.generators)

    @property
    def term_order(self) -> TermOrder:
        order = self.order
        while order.parent is not None:
            order = order.parent
        return order.term_order

    def vectors(self) -> list[Vector]:
        return [_to_vector(g) for g in self.generators]

    def leads(self) -> list[Term]:
        return [_lead(v, self.order) for v in self.vectors()]

    def is_unit_ideal(self) -> bool:
        zero = (0,) * self.n
        return any(t[1] == zero and t[2] == zero for t in self.leads())

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


class BasisLimitError(ValueError):
    """Buchberger's algorithm ran past its S-pair budget."""


def _update_pairs(pairs: set[tuple[int, int]], L: Sequence[Term], active: list[bool],
                  k: int) -> None:
    """Gebauer-Möller update of *pairs* for the new basis element *k*."""
    lead = L[k]
    for i, j in list(pairs):
        l = _lcm(L[i], L[j])
        if _divides(lead, l) and _lcm(L[i], lead) != l and _lcm(L[j], lead) != l:
            pairs.discard((i, j))
    fresh = {i: _lcm(L[i], lead) for i in range(k) if active[i] and L[i][0] == lead[0]}
    kept: dict[int, Term] = {}
    for i, l in fresh.items():
        if any(m != l and _divides(m, l) for m in fresh.values()):
            continue
        if l in kept.values():
            continue
        kept[i] = l
    pairs.update((i, k) for i in kept)
    for i in range(k):
        if active[i] and _divides(lead, L[i]):
            active[i] = False


def _element(vec: Vector, n: int, rank: int, degrees: tuple[int, ...], ideal: bool) -> Element:
    comps = _from_vector(vec, n, rank)
    return comps[0] if ideal else FreeModuleElement(comps, degrees)


def buchberger(generators: Iterable[Element], order: OrderLike = DEFAULT_ORDER, *,
               n: int | None = None, degrees: Sequence[int] | None = None,
               max_pairs: int | None = DEFAULT_MAX_PAIRS, verbose: int = 0) -> GroebnerBasis:
    """Reduced left Gröbner basis of the submodule generated by *generators*.

    Parameters
    ----------
    generators:
        Homogeneous Weyl elements (an ideal) or free module elements of a
        common rank.
    order:
        ``"degrevlex"``, ``"deglex"``, a :class:`TermOrder` or a
        :class:`ModuleOrder` (Schreyer orders come from
        :func:`schreyer_order`).
    n:
        Ambient dimension, required only when *generators* is empty.
    degrees:
        Generator degrees of the free module; taken from the elements when
        omitted.
    max_pairs:
        S-pair reductions allowed before :class:`BasisLimitError` is raised;
        ``None`` for no limit.
    verbose:
        ``0`` = silent, ``2`` = one line per new basis element.
    """
    gens = list(generators)
    morder = as_module_order(order)
    ideal = all(isinstance(g, WeylElement) for g in gens)
    if gens:
        n = gens[0].n
    elif n is None:
        raise ValueError("Cannot infer n from an empty generator list")
    if ideal:
        rank, degs = 1, (0,)
    else:
        rank = gens[0].rank
        degs = tuple(degrees) if degrees is not None else gens[0].degrees
        if any(g.rank != rank for g in gens):
            raise ValueError("Generators have different ranks")
    for g in gens:
        if g.n != n:
            raise ValueError(f"Generator {g} is not in A_{n}")
        if g.is_zero():
            continue
        deg = degree_of(g) if isinstance(g, WeylElement) else FreeModuleElement(g.components, degs).degree()
        if deg == INHOMOGENEOUS:
            raise ValueError(f"Generator {g} is not homogeneous")

    G: list[Vector] = []
    L: list[Term] = []
    supports: list[set[int]] = []
    active: list[bool] = []
    pairs: set[tuple[int, int]] = set()

    def add(vec: Vector) -> None:
        vec = _monic(vec, morder)
        G.append(vec)
        L.append(_lead(vec, morder))
        supports.append(_support(vec))
        active.append(True)
        _update_pairs(pairs, L, active, len(G) - 1)

    for g in gens:
        vec = _to_vector(g)
        if vec:
            add(vec)

    def pair_key(p):
        l = _lcm(L[p[0]], L[p[1]])
        return (morder.term_key(l), p)

    done = 0
    while pairs:
        i, j = min(pairs, key=pair_key)
        pairs.discard((i, j))
        if ideal and _coprime(L[i], L[j]) and not supports[i] & supports[j]:
            continue
        if max_pairs is not None and done >= max_pairs:
            raise BasisLimitError(f"Buchberger stopped after {done} S-pair reductions with "
                                  f"{len(pairs) + 1} pairs pending and {len(G)} elements "
                                  f"(max_pairs={max_pairs})")
        done += 1
        s, _, _ = _spoly(G[i], L[i], G[j], L[j])
        r = _reduce(s, G, L, morder)
        if r:
            add(r)
            if verbose >= 2:
                print(f"  [gb] pair ({i}, {j}) -> element {len(G) - 1} "
                      f"({len(G)} elements, {len(pairs)} pairs pending)", file=sys.stderr)

    # Minimalise, then inter-reduce tails.
    keep = []
    for i, li in enumerate(L):
        if not active[i]:
            continue
        if any(j != i and active[j] and _divides(L[j], li) and (L[j] != li or j < i)
               for j in range(len(G))):
            continue
        keep.append(i)
    reduced = []
    for i in keep:
        others = [k for k in keep if k != i]
        r = _reduce(G[i], [G[k] for k in others], [L[k] for k in others], morder)
        reduced.append(_monic(r, morder))
    reduced.sort(key=lambda v: morder.term_key(_lead(v, morder)), reverse=True)

    return GroebnerBasis(
        generators=tuple(_element(v, n, rank, degs, ideal) for v in reduced),
        order=morder, n=n, rank=rank, degrees=degs, reduced=True,
    )


def left_ideal(generators: Iterable[WeylElement], order: OrderLike = DEFAULT_ORDER, *,
               n: int | None = None, max_pairs: int | None = DEFAULT_MAX_PAIRS,
               verbose: int = 0) -> GroebnerBasis:
    """Gröbner basis of the left ideal ``A·generators``."""
    return buchberger(list(generators), order, n=n, max_pairs=max_pairs, verbose=verbose)


def normal_form(f: Element, G: GroebnerBasis, order: OrderLike | None = None) -> Element:
    """Unique remainder of *f* modulo the submodule with basis *G*."""
    if order is not None and as_module_order(order) != G.order:
        raise ValueError("Order mismatch between the element and its Gröbner basis")
    if f.n != G.n:
        raise ValueError(f"Element lives in A_{f.n}, basis in A_{G.n}")
    ideal = isinstance(f, WeylElement)
    if ideal != G.is_ideal or (not ideal and f.rank != G.rank):
        raise ValueError("Element and Gröbner basis have different ranks")
    vecs = G.vectors()
    r = _reduce(_to_vector(f), vecs, [_lead(v, G.order) for v in vecs], G.order)
    if ideal:
        return _from_vector(r, G.n, 1)[0]
    return FreeModuleElement(_from_vector(r, G.n, G.rank), f.degrees)


def is_member(f: Element, G: GroebnerBasis) -> bool:
    return normal_form(f, G).is_zero()


def eulerian_index(G: GroebnerBasis, a_max: int = DEFAULT_AMAX, *, shift: int = 0) -> int | None:
    """Least ``a <= a_max`` with ``E^a`` in the ideal, else None.

    With *shift* the generator of ``(A/J)(shift)`` sits in degree
    ``-shift`` and ``(E + shift)^a`` is tested instead.
    """
    if not G.is_ideal:
        raise ValueError("The Eulerian index is defined for left ideals only")
    E = euler_operator(G.n) + shift
    r = WeylElement.one(G.n)
    for a in range(1, a_max + 1):
        r = normal_form(E * r, G)
        if r.is_zero():
            return a
    return None


# ---------------------------------------------------------------------------
# Syzygies and resolutions
# ---------------------------------------------------------------------------

def element_degrees(G: GroebnerBasis) -> tuple[int, ...]:
    """Degree of each basis element inside its free module."""
    out = []
    for g in G.generators:
        if isinstance(g, WeylElement):
            out.append(degree_of(g) + G.degrees[0])
        else:
            out.append(FreeModuleElement(g.components, G.degrees).degree())
    return tuple(out)


def schreyer_order(G: GroebnerBasis) -> ModuleOrder:
    leads = tuple((t[0], t[1] + t[2]) for t in G.leads())
    return ModuleOrder(G.term_order, leads, G.order)


def syzygies(G: GroebnerBasis) -> list[FreeModuleElement]:
    """Schreyer generators of the syzygy module of *G*'s elements.

    One vector per pair ``i < j`` with equal leading components, in pair
    order, living in ``⊕ A(-deg g_k)``.
    """
    if not G.reduced:
        raise ValueError("Syzygies need a reduced Gröbner basis")
    vecs = G.vectors()
    leads = [_lead(v, G.order) for v in vecs]
    degs = element_degrees(G)
    r = len(vecs)
    out: list[FreeModuleElement] = []
    for i in range(r):
        for j in range(i + 1, r):
            if leads[i][0] != leads[j][0]:
                continue
            s, mi, mj = _spoly(vecs[i], leads[i], vecs[j], leads[j])
            quotients: list[dict] = [{} for _ in range(r)]
            rest = _reduce(s, vecs, leads, G.order, quotients)
            if rest:
                raise RuntimeError("Input is not a Gröbner basis: an S-vector does not reduce to zero")
            comps = [-WeylElement(G.n, q) for q in quotients]
            comps[i] = comps[i] + WeylElement(G.n, {mi: QQ.one / vecs[i][leads[i]]})
            comps[j] = comps[j] - WeylElement(G.n, {mj: QQ.one / vecs[j][leads[j]]})
            out.append(FreeModuleElement(comps, degs))
    return out


@dataclass(frozen=True)
class FreeResolution:
    """Graded free resolution ``... -> F_1 -> F_0 -> A/J(shift) -> 0``.

    ``degrees[k]`` lists the generator degrees of ``F_k`` (a summand
    ``A(-g)`` has its generator in degree ``g``).  ``differentials[k - 1]``
    is the matrix of ``F_k -> F_{k-1}``: row ``j`` is the image of ``e_j``.
    """

    n: int
    generator_shift: int
    degrees: tuple[tuple[int, ...], ...]
    differentials: tuple[tuple[tuple[WeylElement, ...], ...], ...]
    truncated: bool = False

    @property
    def length(self) -> int:
        return len(self.differentials)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(len(d) for d in self.degrees)

    @property
    def shifts(self) -> tuple[tuple[int, ...], ...]:
        """Twists ``s`` with ``F_k = ⊕ A(s)``."""
        return tuple(tuple(-g for g in d) for d in self.degrees)

    def available(self, k: int) -> bool:
        """Whether ``F_k`` and its differential are known exactly."""
        return k <= self.length or not self.truncated

    def rank(self, k: int) -> int:
        return len(self.degrees[k]) if k < len(self.degrees) else 0

    def differential(self, k: int) -> tuple[tuple[WeylElement, ...], ...]:
        if k < 1 or k > self.length:
            return ()
        return self.differentials[k - 1]

    def is_complex(self) -> bool:
        """``D_{k+1} · D_k = 0`` for every consecutive pair."""
        for k in range(1, self.length):
            upper, lower = self.differentials[k], self.differentials[k - 1]
            for row in upper:
                for i in range(len(self.degrees[k - 1])):
                    acc = WeylElement.zero(self.n)
                    for m, a in enumerate(row):
                        acc = acc + a * lower[m][i]
                    if not acc.is_zero():
                        return False
        return True

    def is_homogeneous(self) -> bool:
        for k, rows in enumerate(self.differentials, start=1):
            for j, row in enumerate(rows):
                for i, a in enumerate(row):
                    if a.is_zero():
                        continue
                    if degree_of(a) != self.degrees[k][j] - self.degrees[k - 1][i]:
                        return False
        return True


def free_resolution(J: GroebnerBasis, generator_shift: int = 0, max_length: int | None = None,
                    *, verbose: int = 0) -> FreeResolution:
    """Graded free resolution of ``(A/J)(generator_shift)`` by Schreyer's method.

    Stops once a syzygy module vanishes; otherwise after *max_length*
    steps (default ``2n + 1``) with ``truncated=True``.
    """
    if not J.is_ideal:
        raise ValueError("free_resolution expects the Gröbner basis of a left ideal")
    if max_length is None:
        max_length = 2 * J.n + 1
    n = J.n
    deg0 = (-generator_shift,)
    current = GroebnerBasis(J.generators, J.order, n, 1, deg0, True)
    degrees = [deg0]
    differentials = []
    if current.generators:
        degrees.append(element_degrees(current))
        differentials.append(tuple((g,) for g in current.generators))
    truncated = False
    while current.generators:
        syz = syzygies(current)
        if not syz:
            break
        if len(differentials) >= max_length:
            truncated = True
            break
        if verbose >= 2:
            print(f"  [resolution] F_{len(differentials) + 1}: {len(syz)} Schreyer syzygies",
                  file=sys.stderr)
        current = buchberger(syz, schreyer_order(current), degrees=element_degrees(current))
        degrees.append(element_degrees(current))
        differentials.append(tuple(g.components for g in current.generators))
    return FreeResolution(n, generator_shift, tuple(degrees), tuple(differentials), truncated)
