"""The Catalan monoid C_{n+1}.

An element is an order-preserving, weakly increasing self-map of
``[n+1] = {1, ..., n+1}``, stored as its tuple of 1-based images.  The
product ``f * g`` is ``i -> f(g(i))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .bounds import require_degree
from .errors import DomainError, UsageError, ValidationError
from .posets import Subset, leq, linext_key


class ImageOutOfRange(ValidationError):
    pass


class NotOrderPreserving(ValidationError):
    pass


class NotWeaklyIncreasing(ValidationError):
    pass


@dataclass(frozen=True, order=True, slots=True)
class CMap:
    images: tuple[int, ...]

    def __post_init__(self):
        images = self.images
        if not isinstance(images, tuple):
            images = tuple(images)
            object.__setattr__(self, "images", images)
        size = len(images)
        if size == 0:
            raise ValidationError("a map needs at least one image")
        for i, v in enumerate(images, 1):
            if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= size:
                raise ImageOutOfRange(f"f({i}) = {v!r} is outside [1, {size}]")
        for i in range(1, size):
            if images[i - 1] > images[i]:
                raise NotOrderPreserving(f"f({i}) = {images[i - 1]} > f({i + 1}) = {images[i]}")
        for i, v in enumerate(images, 1):
            if v < i:
                raise NotWeaklyIncreasing(f"f({i}) = {v} < {i}")

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> CMap:
        obj = object.__new__(cls)
        object.__setattr__(obj, "images", images)
        return obj

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: CMap) -> CMap:
        return compose(self, other)

    def __str__(self):
        return "[" + ",".join(map(str, self.images)) + "]"

    def to_json(self) -> list[int]:
        return list(self.images)

    @classmethod
    def from_json(cls, data) -> CMap:
        if not isinstance(data, list):
            raise ValidationError(f"map must be a JSON array, got {data!r}")
        return make_cmap(data)

    @classmethod
    def parse(cls, text: str) -> CMap:
        """Parse the comma-separated CLI form ``2,3,3``."""
        text = text.strip().strip("[]")
        try:
            images = [int(t) for t in text.split(",")]
        except ValueError as exc:
            raise ValidationError(f"cannot parse map {text!r}; expected comma-separated images") from exc
        return make_cmap(images)


def make_cmap(images: Iterable[int]) -> CMap:
    return CMap(tuple(images))


def identity(degree: int) -> CMap:
    if degree < 1:
        raise ValidationError(f"degree must be >= 1, got {degree}")
    return CMap._trusted(tuple(range(1, degree + 1)))


def compose(f: CMap, g: CMap) -> CMap:
    """``f * g``, i.e. first ``g`` then ``f``."""
    if f.degree != g.degree:
        raise UsageError(f"cannot compose maps of degrees {f.degree} and {g.degree}")
    fi = f.images
    return CMap._trusted(tuple(fi[j - 1] for j in g.images))


def iter_monoid(degree: int) -> Iterator[CMap]:
    """Backtracking generator over C_degree in lexicographic order, unbounded."""
    if degree < 1:
        raise ValidationError(f"degree must be >= 1, got {degree}")
    images = [0] * degree
    last = degree - 1

    def rec(i: int, lo: int):
        # position i (0-based) takes values in [max(lo, i+1), degree]
        if i == last:
            images[i] = degree
            yield CMap._trusted(tuple(images))
            return
        for v in range(max(lo, i + 1), degree + 1):
            images[i] = v
            yield from rec(i + 1, v)

    return rec(0, 1)


def enumerate_monoid(degree: int, bound: int | None = None) -> list[CMap]:
    """All of C_degree in lexicographic order of image sequences."""
    if degree < 1:
        raise ValidationError(f"degree must be >= 1, got {degree}")
    require_degree(degree, bound, "monoid enumeration")
    return list(iter_monoid(degree))


def from_pair(X: Subset, Y: Subset, n: int) -> CMap:
    """The map f_{X,Y} in C_{n+1}.

    With ``X = {x_1 < ... < x_k}`` and ``Y = {y_1 < ... < y_k}``, ``i`` goes
    to ``y_j`` when ``x_{j-1} < i <= x_j`` (``x_0 = 0``) and to ``n+1`` past
    ``x_k``.
    """
    if X.n != n or Y.n != n:
        raise UsageError(f"subsets must live in [{n}], got [{X.n}] and [{Y.n}]")
    if not leq(X, Y):
        raise DomainError(f"{X} <= {Y} does not hold in P_{n}")
    images = []
    prev = 0
    for x, y in zip(X.members, Y.members):
        images.extend([y] * (x - prev))
        prev = x
    images.extend([n + 1] * (n + 1 - prev))
    return CMap._trusted(tuple(images))


def to_pair(f: CMap) -> tuple[Subset, Subset]:
    """Inverse of ``from_pair``.

    ``Y`` is the image minus ``{n+1}``; ``X`` holds the largest element of
    each fiber ``f^{-1}(y)`` for ``y`` in ``Y``.
    """
    n = f.degree - 1
    top = f.degree
    xmask = ymask = 0
    images = f.images
    for i in range(n):
        v = images[i]
        if v != top and images[i + 1] != v:
            xmask |= 1 << i
            ymask |= 1 << (v - 1)
    return Subset(n, xmask), Subset(n, ymask)


def image_of_set(f: CMap, S: Subset) -> Subset:
    """``f(S)``.

    ``S`` may live in ``[n]`` or ``[n+1]``.  The result stays in the ambient
    of ``S`` unless it contains ``n+1`` while ``S`` lives in ``[n]``; then it
    lives in ``[n+1]``.
    """
    top = f.degree
    if S.n not in (top - 1, top):
        raise UsageError(f"{S!r} does not live in [{top - 1}] or [{top}]")
    mask = 0
    for s in S.members:
        mask |= 1 << (f.images[s - 1] - 1)
    ambient = S.n if mask >> S.n == 0 else top
    return Subset(ambient, mask)


def is_pcs(f: CMap, S: Subset) -> bool:
    """Whether ``S`` is a partial cross-section of ``f``: ``f`` injective on ``S`` and ``n+1`` not in ``f(S)``."""
    n = f.degree - 1
    if S.n != n:
        raise UsageError(f"{S!r} does not live in [{n}]")
    seen = 0
    for s in S.members:
        bit = 1 << (f.images[s - 1] - 1)
        if seen & bit:
            return False
        seen |= bit
    return not seen >> n


def pcs(f: CMap) -> list[Subset]:
    """All partial cross-sections of ``f`` in linear-extension order.

    A partial cross-section picks at most one point from each fiber of ``f``
    other than the fiber of ``n+1``, so they are built fiber by fiber.
    """
    n = f.degree - 1
    fibers: dict[int, list[int]] = {}
    for i in range(1, n + 1):
        v = f.images[i - 1]
        if v != n + 1:
            fibers.setdefault(v, []).append(i)
    masks = [0]
    for points in fibers.values():
        masks = masks + [m | (1 << (p - 1)) for m in masks for p in points]
    return sorted((Subset(n, m) for m in masks), key=linext_key)


def _completion_counts(degree: int) -> list[list[int]]:
    # counts[i][lo]: valid tails for 0-based positions i.. given previous image lo
    counts = [[0] * (degree + 2) for _ in range(degree + 1)]
    for lo in range(degree + 2):
        counts[degree][lo] = 1
    for i in range(degree - 1, -1, -1):
        for lo in range(degree + 1):
            first = max(lo, i + 1)
            if i == degree - 1:
                counts[i][lo] = 1 if first <= degree else 0
            else:
                counts[i][lo] = sum(counts[i + 1][v] for v in range(first, degree + 1))
    return counts


def random_cmap(degree: int, rng) -> CMap:
    """Uniformly random element of C_degree drawn with ``rng`` (a ``random.Random``)."""
    if degree < 1:
        raise ValidationError(f"degree must be >= 1, got {degree}")
    counts = _completion_counts(degree)
    images = []
    lo = 1
    for i in range(degree):
        r = rng.randrange(counts[i][lo])
        for v in range(max(lo, i + 1), degree + 1):
            w = counts[i + 1][v] if i < degree - 1 else 1
            if r < w:
                break
            r -= w
        images.append(v)
        lo = v
    return CMap._trusted(tuple(images))
