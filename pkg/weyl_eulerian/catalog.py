"""Catalogs of test modules and the JSON descriptors that name them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

from .groebner import DEFAULT_ORDER, FreeResolution, GroebnerBasis, free_resolution, left_ideal
from .models import (
    CechModel,
    GradedModel,
    InfiniteDimensionalError,
    LocalizationModel,
    PolynomialModel,
    PresentationModel,
    ideal_label,
    koszul_operator_model,
    matlis_dual,
    parse_ideal,
    shift,
    transpose_model,
)
from .parse import parse_element


# ---------------------------------------------------------------------------
# Squarefree monomial ideals
# ---------------------------------------------------------------------------

def squarefree_ideals(n: int) -> list[tuple[frozenset[int], ...]]:
    """Minimal generating sets of all squarefree monomial ideals in n variables.

    Each ideal is an antichain of nonempty subsets of ``1..n``; the empty
    antichain is the zero ideal.
    """
    subsets = [frozenset(c) for k in range(1, n + 1)
               for c in itertools.combinations(range(1, n + 1), k)]
    out = []
    for size in range(len(subsets) + 1):
        for family in itertools.combinations(subsets, size):
            if any(a < b or b < a for a, b in itertools.combinations(family, 2)):
                continue
            out.append(tuple(family))
    return out


@dataclass
class LocalCohomologyEntry:
    """One ``H^i_I(R)``: modeled, or rejected with the reason."""

    n: int
    ideal: tuple[frozenset[int], ...]
    i: int
    model: CechModel | None = None
    diagnostic: str = ""

    @property
    def label(self) -> str:
        return f"H^{self.i}_{ideal_label(self.ideal)}(R), n={self.n}"

    @property
    def status(self) -> str:
        if self.model is None:
            return "rejected"
        return "zero" if self.model.is_zero_module else "modeled"

    def descriptor(self) -> dict:
        return {"constructor": "cech",
                "args": {"n": self.n, "ideal": ideal_label(self.ideal), "i": self.i}}


def local_cohomology_catalog(n: int) -> list[LocalCohomologyEntry]:
    """Every ``H^i_I(R)`` for squarefree ``I`` in n variables and ``0 <= i <= n``."""
    out = []
    for ideal in squarefree_ideals(n):
        for i in range(n + 1):
            try:
                out.append(LocalCohomologyEntry(n, ideal, i, CechModel(n, ideal, i)))
            except InfiniteDimensionalError as exc:
                out.append(LocalCohomologyEntry(n, ideal, i, diagnostic=str(exc)))
    return out


# ---------------------------------------------------------------------------
# Cyclic presentations
# ---------------------------------------------------------------------------

@dataclass
class PresentationEntry:
    """A cyclic module ``(A_n/J)(shift)`` and what is known about it."""

    name: str
    n: int
    gens: tuple[str, ...]
    shift: int = 0
    expected_index: int | None = None  # of (E + shift)
    expected_bound: int | None = None
    passes: bool = True
    cech: tuple[tuple[frozenset[int], ...], int] | None = None
    tags: tuple[str, ...] = field(default_factory=tuple)

    def groebner(self, order: str = DEFAULT_ORDER) -> GroebnerBasis:
        return left_ideal([parse_element(g, self.n) for g in self.gens], order, n=self.n)

    def model(self, bound: int | None = None) -> PresentationModel:
        return PresentationModel(self.groebner(), self.shift, self.gens, bound=bound)

    def resolution(self, max_length: int | None = None) -> FreeResolution:
        return free_resolution(self.groebner(), self.shift, max_length)

    def descriptor(self) -> dict:
        return {"constructor": "presentation",
                "args": {"n": self.n, "gens": list(self.gens)}, "shift": self.shift}


def coordinate_presentation(n: int, S: frozenset[int]) -> PresentationEntry:
    """``A_n / (x_j, j in S; d_k, k not in S)`` shifted by ``|S|``: ``H^{|S|}`` of R along S."""
    gens = tuple(f"x{j}" for j in sorted(S)) + tuple(f"d{k}" for k in range(1, n + 1) if k not in S)
    name = "R" if not S else ("E" if len(S) == n else f"H^{len(S)}_{sorted(S)}")
    ideal = tuple(frozenset((j,)) for j in sorted(S))
    return PresentationEntry(name=f"{name}, n={n}", n=n, gens=gens, shift=len(S),
                             expected_index=1, expected_bound=1, cech=(ideal, len(S)),
                             tags=("coordinate",))


def presentation_catalog(n: int) -> list[PresentationEntry]:
    """Finite-type coordinate presentations in n variables: R and the injective hull E."""
    entries = [coordinate_presentation(n, frozenset())]
    entries.append(coordinate_presentation(n, frozenset(range(1, n + 1))))
    return entries


def intermediate_presentations(n: int) -> list[PresentationEntry]:
    """Coordinate presentations with ``0 < |S| < n``; these have infinite pieces."""
    return [coordinate_presentation(n, frozenset(S))
            for k in range(1, n) for S in itertools.combinations(range(1, n + 1), k)]


def eulerian_fixtures() -> list[PresentationEntry]:
    """Small ideals with known Eulerian index and Eulerian behaviour."""
    return [
        PresentationEntry("A1/(x*d)", 1, ("x1*d1",), 0, 1, 1, True),
        PresentationEntry("A1/(E^2)", 1, ("E^2",), 0, 2, 2, True),
        PresentationEntry("A1/(x^2*d^2)", 1, ("x1^2*d1^2",), 0, None, None, False),
        PresentationEntry("A1/(x*d - 1)", 1, ("x1*d1 - 1",), 0, None, None, False),
        PresentationEntry("A1/(x)", 1, ("x1",), 0, None, None, False),
        PresentationEntry("A1/(x)(1)", 1, ("x1",), 1, 1, 1, True),
        PresentationEntry("A2/(x1, x2)", 2, ("x1", "x2"), 0, None, None, False),
        PresentationEntry("A2/(d1, d2)", 2, ("d1", "d2"), 0, 1, 1, True),
    ]


# ---------------------------------------------------------------------------
# Descriptors
# ---------------------------------------------------------------------------

BASE_CONSTRUCTORS = ("polynomial", "localization", "cech", "presentation")
DERIVED_CONSTRUCTORS = ("shift", "dual", "transpose", "koszul")


def build_model(descriptor: dict[str, Any]) -> GradedModel:
    """Model from a descriptor ``{constructor, args, shift, dual}``.

    Base constructors are ``polynomial``, ``localization``, ``cech`` and
    ``presentation``; their ``args`` carry ``n``.  Derived constructors
    (``shift``, ``dual``, ``transpose``, ``koszul``) wrap the descriptor
    under ``of``, so a model's provenance rebuilds it.  The shift is
    applied first, then the Matlis dual.
    """
    kind = descriptor.get("constructor")
    if kind in DERIVED_CONSTRUCTORS:
        model = _derived_model(kind, descriptor)
    else:
        model = _base_model(kind, dict(descriptor.get("args", {})))
    model = shift(model, int(descriptor.get("shift", 0)))
    if descriptor.get("dual"):
        model = matlis_dual(model)
    return model


def _derived_model(kind: str, descriptor: dict[str, Any]) -> GradedModel:
    args = dict(descriptor.get("args", {}))
    of = descriptor.get("of", args.get("of"))
    if not isinstance(of, dict):
        raise ValueError(f"Constructor {kind!r} needs the descriptor of its base model under 'of'")
    base = build_model(of)
    if kind == "shift":
        return shift(base, int(descriptor.get("s", args.get("s", 0))))
    if kind == "dual":
        return matlis_dual(base)
    if kind == "transpose":
        return transpose_model(base)
    op = descriptor.get("op", args.get("op"))
    index = descriptor.get("index", args.get("index"))
    if op is None or index is None:
        raise ValueError("Constructor 'koszul' needs 'op' (x or d) and 'index' (0 or 1)")
    return koszul_operator_model(base, str(op), int(index))


def _base_model(kind: str, args: dict[str, Any]) -> GradedModel:
    if kind not in BASE_CONSTRUCTORS:
        raise ValueError(f"Unknown constructor {kind!r}; expected one of "
                         f"{', '.join(BASE_CONSTRUCTORS + DERIVED_CONSTRUCTORS)}")
    if "n" not in args:
        raise ValueError("Descriptor args need 'n'")
    n = int(args["n"])
    if kind == "polynomial":
        return PolynomialModel(n)
    if kind == "localization":
        return LocalizationModel(n, args.get("S", [1]))
    if kind == "cech":
        ideal = args.get("ideal", "0")
        gens = parse_ideal(ideal, n) if isinstance(ideal, str) else [frozenset(g) for g in ideal]
        return CechModel(n, gens, int(args["i"]))
    gens = [parse_element(g, n) for g in args.get("gens", [])]
    G = left_ideal(gens, args.get("order", DEFAULT_ORDER), n=n)
    return PresentationModel(G, 0, args.get("gens"))


def build_resolution(descriptor: dict[str, Any], max_length: int | None = None) -> FreeResolution:
    """Free resolution of a ``presentation`` descriptor's cyclic module."""
    if descriptor.get("constructor") != "presentation" or descriptor.get("dual"):
        raise ValueError("Free resolutions are available for (shifted) presentation descriptors")
    args = descriptor.get("args", {})
    n = int(args["n"])
    gens = [parse_element(g, n) for g in args.get("gens", [])]
    G = left_ideal(gens, args.get("order", DEFAULT_ORDER), n=n)
    return free_resolution(G, int(descriptor.get("shift", 0)), max_length)
