"""Exact normal-ordered arithmetic in the graded Weyl algebra A_n(QQ).

Every element is a finite sum of terms ``c * x^a * d^b`` with all X-factors
written to the left of all derivation factors.  ``deg x_i = 1`` and
``deg d_i = -1``, so a term has degree ``|a| - |b|``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

from scipy.special import comb, perm
from sympy import QQ

MultiIndex = tuple[int, ...]
Monomial = tuple[MultiIndex, MultiIndex]
Scalar = Union[int, "QQ.dtype"]

INHOMOGENEOUS = "inhomogeneous"


def _coeff(value) -> "QQ.dtype":
    """Convert an int or a QQ element into QQ."""
    return QQ.convert(value)


def _check_index(entries: Iterable[int], n: int) -> MultiIndex:
    idx = tuple(int(e) for e in entries)
    if len(idx) != n:
        raise ValueError(f"Multi-index {idx} has length {len(idx)}, expected {n}")
    if any(e < 0 for e in idx):
        raise ValueError(f"Multi-index {idx} has a negative entry")
    return idx


# ---------------------------------------------------------------------------
# Reordering rule
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1 << 16)
def monomial_product(xa: MultiIndex, da: MultiIndex,
                     xb: MultiIndex, db: MultiIndex) -> tuple[tuple[Monomial, int], ...]:
    """Normal-ordered expansion of ``x^xa d^da * x^xb d^db``.

    Each variable contributes ``d^b x^a = sum_k C(b,k) a(a-1)...(a-k+1)
    x^(a-k) d^(b-k)``; distinct indices commute, so the product is the
    Cartesian product of the per-variable expansions.
    """
    per_var: list[list[tuple[int, int]]] = []
    for b, a in zip(da, xb):
        per_var.append([(k, int(comb(b, k, exact=True)) * int(perm(a, k, exact=True)))
                        for k in range(min(a, b) + 1)])

    out: dict[Monomial, int] = {}
    for choice in itertools.product(*per_var):
        c = 1
        for _, weight in choice:
            c *= weight
        ks = [k for k, _ in choice]
        xe = tuple(p + q - k for p, q, k in zip(xa, xb, ks))
        de = tuple(p + q - k for p, q, k in zip(da, db, ks))
        out[(xe, de)] = out.get((xe, de), 0) + c
    return tuple((m, c) for m, c in out.items() if c)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

class WeylElement:
    """Immutable element of A_n(QQ) in normal order.

    Equality is equality of the canonical term maps; the zero element is the
    empty sum.
    """

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, Scalar] | None = None):
        if n < 0:
            raise ValueError(f"Ambient dimension must be non-negative, got {n}")
        clean: dict[Monomial, "QQ.dtype"] = {}
        for (xe, de), c in (terms or {}).items():
            key = (_check_index(xe, n), _check_index(de, n))
            c = _coeff(c)
            if c:
                clean[key] = clean.get(key, QQ.zero) + c
                if not clean[key]:
                    del clean[key]
        self.n = n
        self._terms = clean
        self._hash = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "WeylElement":
        obj = cls.__new__(cls)
        obj.n = n
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, n: int) -> "WeylElement":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c: Scalar) -> "WeylElement":
        zero = (0,) * n
        return cls(n, {(zero, zero): c})

    @classmethod
    def one(cls, n: int) -> "WeylElement":
        return cls.constant(n, 1)

    @classmethod
    def monomial(cls, x_exp: Iterable[int], d_exp: Iterable[int], coeff: Scalar = 1) -> "WeylElement":
        x_exp, d_exp = tuple(x_exp), tuple(d_exp)
        return cls(len(x_exp), {(x_exp, d_exp): coeff})

    @classmethod
    def x(cls, n: int, i: int, power: int = 1) -> "WeylElement":
        """The generator ``x_i`` (1-based) raised to *power*."""
        _check_var(n, i)
        e = [0] * n
        e[i - 1] = power
        return cls(n, {(tuple(e), (0,) * n): 1})

    @classmethod
    def d(cls, n: int, i: int, power: int = 1) -> "WeylElement":
        """The derivation ``d_i`` (1-based) raised to *power*."""
        _check_var(n, i)
        e = [0] * n
        e[i - 1] = power
        return cls(n, {((0,) * n, tuple(e)): 1})

    # -- inspection ----------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, "QQ.dtype"]:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list[tuple[Monomial, "QQ.dtype"]]:
        """Terms sorted lexicographically on ``(xExp, dExp)``."""
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, "QQ.dtype"]]:
        return iter(self.sorted_terms())

    def variables(self) -> frozenset[int]:
        """1-based indices i such that x_i or d_i occurs in some term."""
        used = set()
        for xe, de in self._terms:
            used.update(i + 1 for i in range(self.n) if xe[i] or de[i])
        return frozenset(used)

    # -- arithmetic ----------------------------------------------------------

    def _check_same(self, other: "WeylElement") -> None:
        if other.n != self.n:
            raise ValueError(f"Dimension mismatch: A_{self.n} vs A_{other.n}")

    def _lift(self, other) -> "WeylElement | None":
        if isinstance(other, WeylElement):
            self._check_same(other)
            return other
        if isinstance(other, int) or _is_rational(other):
            return WeylElement.constant(self.n, other)
        return None

    def __add__(self, other) -> "WeylElement":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, QQ.zero) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return WeylElement._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "WeylElement":
        return WeylElement._raw(self.n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "WeylElement":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "WeylElement":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def scale(self, c: Scalar) -> "WeylElement":
        c = _coeff(c)
        if not c:
            return WeylElement.zero(self.n)
        return WeylElement._raw(self.n, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other) -> "WeylElement":
        if isinstance(other, int) or _is_rational(other):
            return self.scale(other)
        if not isinstance(other, WeylElement):
            return NotImplemented
        self._check_same(other)
        out: dict[Monomial, "QQ.dtype"] = {}
        for (xa, da), ca in self._terms.items():
            for (xb, db), cb in other._terms.items():
                cab = ca * cb
                for m, w in monomial_product(xa, da, xb, db):
                    s = out.get(m, QQ.zero) + cab * w
                    if s:
                        out[m] = s
                    else:
                        out.pop(m, None)
        return WeylElement._raw(self.n, out)

    def __rmul__(self, other) -> "WeylElement":
        if isinstance(other, int) or _is_rational(other):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "WeylElement":
        return power(self, k)

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, WeylElement):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, int) or _is_rational(other):
            return self == WeylElement.constant(self.n, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"WeylElement({self.n}, {format_element(self)!r})"


def _is_rational(value) -> bool:
    return type(value) is QQ.dtype


def _check_var(n: int, i: int) -> None:
    if not 1 <= i <= n:
        raise ValueError(f"Variable index {i} out of range for A_{n}")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def euler_operator(n: int) -> WeylElement:
    """``E_n = x_1 d_1 + ... + x_n d_n``."""
    if n < 1:
        raise ValueError(f"The Euler operator needs n >= 1, got {n}")
    terms = {}
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        terms[(e, e)] = 1
    return WeylElement(n, terms)


def term_degree(monomial: Monomial) -> int:
    xe, de = monomial
    return sum(xe) - sum(de)


def degree_of(a: WeylElement) -> int | str:
    """Common degree of all terms of *a*, or :data:`INHOMOGENEOUS`."""
    if a.is_zero():
        raise ValueError("The zero element has no degree")
    degrees = {term_degree(m) for m in a.terms}
    if len(degrees) > 1:
        return INHOMOGENEOUS
    return degrees.pop()


def is_homogeneous(a: WeylElement) -> bool:
    return a.is_zero() or degree_of(a) != INHOMOGENEOUS


def transpose(a: WeylElement) -> WeylElement:
    """The standard anti-automorphism: ``x^a d^b -> (-1)^|b| d^b x^a``."""
    zero = (0,) * a.n
    out: dict[Monomial, "QQ.dtype"] = {}
    for (xe, de), c in a.terms.items():
        sign = -c if sum(de) % 2 else c
        for m, w in monomial_product(zero, de, xe, zero):
            s = out.get(m, QQ.zero) + sign * w
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return WeylElement._raw(a.n, out)


def power(a: WeylElement, k: int) -> WeylElement:
    """``a`` multiplied with itself *k* times; ``power(a, 0) == 1``."""
    if k < 0:
        raise ValueError(f"Exponent must be non-negative, got {k}")
    result = WeylElement.one(a.n)
    base = a
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

def format_coeff(c) -> str:
    num, den = int(c.numerator), int(c.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def _factor(prefix: str, i: int, e: int) -> str:
    return f"{prefix}{i}" if e == 1 else f"{prefix}{i}^{e}"


def format_monomial(monomial: Monomial) -> str:
    xe, de = monomial
    factors = [_factor("x", i + 1, e) for i, e in enumerate(xe) if e]
    factors += [_factor("d", i + 1, e) for i, e in enumerate(de) if e]
    return "*".join(factors) if factors else "1"


def format_element(a: WeylElement) -> str:
    """Canonical text form, e.g. ``x1*d1 + 2*x2^2*d2 - 3/2``."""
    if a.is_zero():
        return "0"
    parts: list[str] = []
    for monomial, c in reversed(a.sorted_terms()):
        body = format_monomial(monomial)
        mag = -c if c < 0 else c
        if body == "1":
            text = format_coeff(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{format_coeff(mag)}*{body}"
        if not parts:
            parts.append(f"-{text}" if c < 0 else text)
        else:
            parts.append(f" - {text}" if c < 0 else f" + {text}")
    return "".join(parts)
