"""Finitely supported linear combinations over a ring.

Two bases are supported:

* ``monoid`` -- the Catalan monoid C_{n+1}; the product is composition
  extended bilinearly (the monoid algebra kC_{n+1}).
* ``pairs``  -- pairs ``(X, Y)`` with ``X <= Y`` in P_n; the product is
  ``(U,V)(X,Y) = (X,V)`` when ``Y == U`` and ``0`` otherwise (the incidence
  algebra I(P_n, k)).

Elements never store zero coefficients, and iterate their terms in basis
order (lexicographic images for maps, ``pair_key`` for pairs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterator, Mapping, Union

from .catalan import CMap, compose, identity as monoid_unit
from .errors import UsageError, ValidationError
from .posets import PosetPair, all_subsets, pair_key
from .rings import RingSpec, RingValue

MONOID = "monoid"
PAIRS = "pairs"

BasisKey = Union[CMap, PosetPair]


@dataclass(frozen=True)
class Basis:
    """Which basis an element lives on.

    ``degree`` is ``n + 1`` for both kinds: the monoid is C_degree and the
    pairs come from P_{degree-1}.
    """

    kind: str
    degree: int

    def __post_init__(self):
        if self.kind not in (MONOID, PAIRS):
            raise ValidationError(f"unknown basis kind {self.kind!r}")
        if self.degree < 1:
            raise ValidationError(f"degree must be >= 1, got {self.degree}")

    @property
    def n(self) -> int:
        return self.degree - 1

    def accepts(self, key) -> bool:
        if self.kind == MONOID:
            return isinstance(key, CMap) and key.degree == self.degree
        return isinstance(key, PosetPair) and key.n == self.n

    def sort_key(self, key):
        return key if self.kind == MONOID else pair_key(key)


def monoid_basis(degree: int) -> Basis:
    return Basis(MONOID, degree)


def pair_basis(n: int) -> Basis:
    return Basis(PAIRS, n + 1)


class AlgebraElement:
    __slots__ = ("ring", "basis", "_terms")

    def __init__(self, ring: RingSpec, basis: Basis, terms: Mapping[BasisKey, RingValue] | None = None):
        clean = {}
        for key, c in (terms or {}).items():
            if not basis.accepts(key):
                raise UsageError(f"{key!r} is not a basis element of {basis}")
            ring.check(c)
            if c != ring.zero:
                clean[key] = c
        self.ring = ring
        self.basis = basis
        self._terms = clean

    @classmethod
    def _normalized(cls, ring: RingSpec, basis: Basis, terms: dict) -> AlgebraElement:
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.basis = basis
        zero = ring.zero
        obj._terms = {k: c for k, c in terms.items() if c != zero}
        return obj

    @property
    def terms(self) -> Mapping[BasisKey, RingValue]:
        return MappingProxyType(self._terms)

    def coefficient(self, key: BasisKey) -> RingValue:
        return self._terms.get(key, self.ring.zero)

    def items(self) -> list[tuple[BasisKey, RingValue]]:
        """Terms sorted in basis order."""
        return sorted(self._terms.items(), key=lambda kc: self.basis.sort_key(kc[0]))

    def __iter__(self) -> Iterator[BasisKey]:
        return (k for k, _ in self.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.ring == other.ring and self.basis == other.basis and self._terms == other._terms

    def __hash__(self):
        return hash((self.ring, self.basis, frozenset(self._terms.items())))

    def __add__(self, other):
        return add_elements(self, other)

    def __neg__(self):
        return scale(self.ring.neg(self.ring.one), self)

    def __sub__(self, other):
        return add_elements(self, -other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return NotImplemented

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{self.ring.format(c)}*{k}" for k, c in self.items())

    def __repr__(self):
        return f"AlgebraElement({self.ring}, {self.basis.kind}, {self})"

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "basis": self.basis.kind,
            "n": self.basis.degree,
            "terms": [{"key": k.to_json(), "coeff": self.ring.format(c)} for k, c in self.items()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> AlgebraElement:
        try:
            ring = RingSpec.parse(data["ring"])
            kind = data["basis"]
            terms_in = data["terms"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed algebra element: {data!r}") from exc
        if "n" in data:
            degree = data["n"]
        elif kind == MONOID and terms_in:
            degree = len(terms_in[0]["key"])
        else:
            raise ValidationError("algebra element needs an 'n' field")
        basis = Basis(kind, degree)
        terms: dict = {}
        for t in terms_in:
            if kind == MONOID:
                key = CMap.from_json(t["key"])
            else:
                key = PosetPair.from_json(basis.n, t["key"])
            c = ring.coerce(t["coeff"])
            terms[key] = ring.add(terms[key], c) if key in terms else c
        return cls(ring, basis, terms)


def zero(ring: RingSpec, basis: Basis) -> AlgebraElement:
    return AlgebraElement(ring, basis)


def basis_element(key: BasisKey, ring: RingSpec, coeff: RingValue | None = None) -> AlgebraElement:
    """``coeff * key`` (coefficient 1 by default)."""
    if isinstance(key, CMap):
        basis = monoid_basis(key.degree)
    elif isinstance(key, PosetPair):
        basis = pair_basis(key.n)
    else:
        raise UsageError(f"{key!r} is not a basis key")
    return AlgebraElement(ring, basis, {key: ring.one if coeff is None else coeff})


def _compatible(a: AlgebraElement, b: AlgebraElement) -> None:
    if a.ring != b.ring:
        raise UsageError(f"ring mismatch: {a.ring} vs {b.ring}")
    if a.basis != b.basis:
        raise UsageError(f"basis mismatch: {a.basis} vs {b.basis}")


def add_elements(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _compatible(a, b)
    ring = a.ring
    out = dict(a._terms)
    for k, c in b._terms.items():
        out[k] = ring.add(out[k], c) if k in out else c
    return AlgebraElement._normalized(ring, a.basis, out)


def scale(c: RingValue, a: AlgebraElement) -> AlgebraElement:
    ring = a.ring
    ring.check(c)
    return AlgebraElement._normalized(ring, a.basis, {k: ring.mul(c, v) for k, v in a._terms.items()})


def monoid_product(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of ``(f, g) -> f * g``."""
    _compatible(a, b)
    if a.basis.kind != MONOID:
        raise UsageError("monoid_product needs elements on the monoid basis")
    ring = a.ring
    out: dict = {}
    for f, c in a._terms.items():
        for g, d in b._terms.items():
            h = compose(f, g)
            cd = ring.mul(c, d)
            out[h] = ring.add(out[h], cd) if h in out else cd
    return AlgebraElement._normalized(ring, a.basis, out)


def incidence_product(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of ``(U,V)(X,Y) = (X,V)`` if ``Y == U`` else 0."""
    _compatible(a, b)
    if a.basis.kind != PAIRS:
        raise UsageError("incidence_product needs elements on the pair basis")
    ring = a.ring
    by_top: dict = {}
    for p, d in b._terms.items():
        by_top.setdefault(p.Y, []).append((p.X, d))
    out: dict = {}
    for p, c in a._terms.items():
        for X, d in by_top.get(p.X, ()):
            q = PosetPair._trusted(X, p.Y)  # X <= U == Y' <= V
            cd = ring.mul(c, d)
            out[q] = ring.add(out[q], cd) if q in out else cd
    return AlgebraElement._normalized(ring, a.basis, out)


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.basis.kind == MONOID:
        return monoid_product(a, b)
    return incidence_product(a, b)


def incidence_identity(n: int, ring: RingSpec) -> AlgebraElement:
    """Sum of all ``(X, X)``."""
    return AlgebraElement(ring, pair_basis(n), {PosetPair(X, X): ring.one for X in all_subsets(n)})


def monoid_identity(degree: int, ring: RingSpec) -> AlgebraElement:
    return basis_element(monoid_unit(degree), ring)
