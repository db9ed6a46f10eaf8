"""The poset P_n of subsets of [n].

``X <= Y`` (``leq``) holds when both sets have the same size and the sorted
members of ``Y`` dominate those of ``X`` position by position.  ``preceq``
refines it: smaller sets come first, equal sizes fall back to ``leq``.

Subsets are bitmasks (bit ``i - 1`` set means ``i`` is a member) tagged with
their ambient size ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .bounds import require_degree
from .errors import DomainError, UsageError, ValidationError

MAX_AMBIENT = 62


def _members(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True, slots=True)
class Subset:
    n: int
    mask: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_AMBIENT:
            raise ValidationError(f"ambient size must be in [0, {MAX_AMBIENT}], got {self.n}")
        if self.mask < 0 or self.mask >> self.n:
            raise ValidationError(f"mask {self.mask:#b} is not a subset of [{self.n}]")

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> Subset:
        mask = 0
        for x in members:
            if isinstance(x, bool) or not isinstance(x, int) or not 1 <= x <= n:
                raise ValidationError(f"member {x!r} is outside [1, {n}]")
            if mask >> (x - 1) & 1:
                raise ValidationError(f"member {x} repeated")
            mask |= 1 << (x - 1)
        return cls(n, mask)

    @classmethod
    def empty(cls, n: int) -> Subset:
        return cls(n, 0)

    @property
    def members(self) -> tuple[int, ...]:
        return _members(self.mask)

    def __len__(self):
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, x) -> bool:
        return isinstance(x, int) and 1 <= x <= self.n and bool(self.mask >> (x - 1) & 1)

    def issubset(self, other: Subset) -> bool:
        return self.mask & ~other.mask == 0

    def __str__(self):
        return "{" + ",".join(map(str, self.members)) + "}"

    def __repr__(self):
        return f"Subset({self.n}, {str(self)})"

    def to_json(self) -> list[int]:
        return list(self.members)

    @classmethod
    def from_json(cls, n: int, data) -> Subset:
        if not isinstance(data, list):
            raise ValidationError(f"subset must be a JSON array, got {data!r}")
        if data != sorted(data):
            raise ValidationError(f"subset members must be sorted: {data!r}")
        return cls.of(n, data)

    @classmethod
    def parse(cls, n: int, text: str) -> Subset:
        """Parse ``{1,3}``, ``{}`` or ``∅``."""
        text = text.strip()
        if text in ("∅", "{}"):
            return cls.empty(n)
        if not (text.startswith("{") and text.endswith("}")):
            raise ValidationError(f"cannot parse subset {text!r}")
        try:
            items = [int(t) for t in text[1:-1].split(",")]
        except ValueError as exc:
            raise ValidationError(f"cannot parse subset {text!r}") from exc
        return cls.of(n, sorted(items))


def _same_ambient(X: Subset, Y: Subset) -> None:
    if X.n != Y.n:
        raise UsageError(f"subsets live in different ambients [{X.n}] and [{Y.n}]")


def leq(X: Subset, Y: Subset) -> bool:
    """Componentwise order of P_n."""
    _same_ambient(X, Y)
    if len(X) != len(Y):
        return False
    return all(x <= y for x, y in zip(X.members, Y.members))


def preceq(X: Subset, Y: Subset) -> bool:
    _same_ambient(X, Y)
    if len(X) != len(Y):
        return len(X) < len(Y)
    return all(x <= y for x, y in zip(X.members, Y.members))


def linext_key(X: Subset) -> tuple[int, int, tuple[int, ...]]:
    """Sort key of a linear extension of ``preceq``.

    At equal size, ``X <= Y`` with ``X != Y`` forces a strictly smaller
    element sum, so ``(size, sum, members)`` is compatible with ``preceq``.
    """
    members = X.members
    return (len(members), sum(members), members)


@dataclass(frozen=True, slots=True)
class PosetPair:
    X: Subset
    Y: Subset

    def __post_init__(self):
        if not leq(self.X, self.Y):
            raise DomainError(f"{self.X} <= {self.Y} does not hold in P_{self.X.n}")

    @classmethod
    def _trusted(cls, X: Subset, Y: Subset) -> PosetPair:
        obj = object.__new__(cls)
        object.__setattr__(obj, "X", X)
        object.__setattr__(obj, "Y", Y)
        return obj

    @property
    def n(self) -> int:
        return self.X.n

    def __str__(self):
        return f"{self.X}<{self.Y}"

    def __repr__(self):
        return f"PosetPair({self.X}, {self.Y})"

    def to_json(self) -> dict:
        return {"X": self.X.to_json(), "Y": self.Y.to_json()}

    @classmethod
    def from_json(cls, n: int, data) -> PosetPair:
        if not isinstance(data, dict) or set(data) != {"X", "Y"}:
            raise ValidationError(f"pair must be an object with keys X and Y, got {data!r}")
        return cls(Subset.from_json(n, data["X"]), Subset.from_json(n, data["Y"]))

    @classmethod
    def parse(cls, n: int, text: str) -> PosetPair:
        """Parse the label form ``{1}<{2}``."""
        left, sep, right = text.partition("<")
        if not sep:
            raise ValidationError(f"cannot parse pair {text!r}; expected X<Y such as {{1}}<{{2}}")
        return cls(Subset.parse(n, left), Subset.parse(n, right))


def pair_key(p: PosetPair):
    return (linext_key(p.X), linext_key(p.Y))


def all_subsets(n: int) -> list[Subset]:
    """Every subset of [n], in linear-extension order."""
    if not 0 <= n <= MAX_AMBIENT:
        raise ValidationError(f"ambient size must be in [0, {MAX_AMBIENT}], got {n}")
    return sorted((Subset(n, m) for m in range(1 << n)), key=linext_key)


def _dominating(n: int, xs: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    # strictly increasing ys with y_i >= x_i, all <= n
    k = len(xs)
    ys: list[int] = []

    def rec(i: int, lo: int):
        if i == k:
            yield tuple(ys)
            return
        for y in range(max(lo, xs[i]), n - (k - 1 - i) + 1):
            ys.append(y)
            yield from rec(i + 1, y + 1)
            ys.pop()

    return rec(0, 1)


def enumerate_pairs(n: int, bound: int | None = None) -> list[PosetPair]:
    """All pairs ``X <= Y`` of P_n sorted by ``pair_key``."""
    if not 0 <= n <= MAX_AMBIENT:
        raise ValidationError(f"ambient size must be in [0, {MAX_AMBIENT}], got {n}")
    require_degree(n + 1, bound, "pair enumeration")
    pairs = []
    for X in all_subsets(n):
        for ys in _dominating(n, X.members):
            pairs.append(PosetPair(X, Subset.of(n, ys)))
    pairs.sort(key=pair_key)
    return pairs
