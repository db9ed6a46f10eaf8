"""The algebra isomorphism phi: kC_{n+1} -> I(P_n, k) and its inverse.

``phi(f)`` is the sum of ``(S, f(S))`` over the partial cross-sections ``S``
of ``f``.  In the bases ordered by ``enumerate_pairs`` (maps indexed through
``to_pair``) its matrix is upper triangular with ones on the diagonal, so it
is inverted by back-substitution without any division.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .algebra import MONOID, PAIRS, AlgebraElement, monoid_basis, pair_basis
from .catalan import CMap, from_pair, image_of_set, pcs
from .errors import DomainError, UsageError, ValidationError
from .posets import PosetPair, enumerate_pairs
from .rings import INTEGERS, RingSpec, RingValue


def phi_basis(f: CMap, ring: RingSpec) -> AlgebraElement:
    one = ring.one
    terms = {PosetPair(S, image_of_set(f, S)): one for S in pcs(f)}
    return AlgebraElement._normalized(ring, pair_basis(f.degree - 1), terms)


def phi(a: AlgebraElement) -> AlgebraElement:
    if a.basis.kind != MONOID:
        raise UsageError("phi takes an element of the monoid algebra")
    ring = a.ring
    out: dict = {}
    for f, c in a.terms.items():
        for p, d in phi_basis(f, ring).terms.items():
            cd = ring.mul(c, d)
            out[p] = ring.add(out[p], cd) if p in out else cd
    return AlgebraElement._normalized(ring, pair_basis(a.basis.n), out)


@dataclass(frozen=True)
class RingMatrix:
    """Dense square matrix over a ring.

    ``labels`` names the pair basis shared by rows and columns; a column
    labelled ``(X, Y)`` stands for the map ``f_{X,Y}`` when the matrix is
    the matrix of ``phi``.
    """

    ring: RingSpec
    entries: tuple[tuple[RingValue, ...], ...]
    labels: tuple[PosetPair, ...] | None = None

    def __post_init__(self):
        d = len(self.entries)
        if any(len(row) != d for row in self.entries):
            raise ValidationError("matrix must be square")
        if self.labels is not None and len(self.labels) != d:
            raise ValidationError("one label per row is required")

    @classmethod
    def from_rows(cls, ring: RingSpec, rows: Sequence[Sequence], labels=None) -> RingMatrix:
        return cls(ring, tuple(tuple(ring.coerce(x) for x in row) for row in rows),
                   None if labels is None else tuple(labels))

    @classmethod
    def identity(cls, ring: RingSpec, dim: int, labels=None) -> RingMatrix:
        z, o = ring.zero, ring.one
        return cls(ring, tuple(tuple(o if i == j else z for j in range(dim)) for i in range(dim)),
                   None if labels is None else tuple(labels))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> RingValue:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.ring == other.ring and self.entries == other.entries

    def __hash__(self):
        return hash((self.ring, self.entries))

    def rows_sparse(self) -> list[dict[int, RingValue]]:
        z = self.ring.zero
        return [{j: x for j, x in enumerate(row) if x != z} for row in self.entries]

    def __matmul__(self, other: RingMatrix) -> RingMatrix:
        if self.ring != other.ring:
            raise UsageError(f"ring mismatch: {self.ring} vs {other.ring}")
        if self.dim != other.dim:
            raise UsageError(f"dimension mismatch: {self.dim} vs {other.dim}")
        ring = self.ring
        right = other.rows_sparse()
        rows = []
        for left_row in self.rows_sparse():
            acc: dict[int, RingValue] = {}
            for k, a in left_row.items():
                for j, b in right[k].items():
                    ab = ring.mul(a, b)
                    acc[j] = ring.add(acc[j], ab) if j in acc else ab
            rows.append(_densify(ring, acc, self.dim))
        return RingMatrix(ring, tuple(rows), self.labels)

    def is_unipotent_upper(self) -> bool:
        z, o = self.ring.zero, self.ring.one
        for i, row in enumerate(self.entries):
            if row[i] != o or any(x != z for x in row[:i]):
                return False
        return True

    def to_csv(self) -> str:
        labels = self.labels or tuple(str(i) for i in range(self.dim))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([""] + [str(p) for p in labels])
        for p, row in zip(labels, self.entries):
            w.writerow([str(p)] + [self.ring.format(x) for x in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, ring: RingSpec, text: str, n: int) -> RingMatrix:
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0][1:], rows[1:]
        labels = tuple(PosetPair.parse(n, h) for h in header)
        if [PosetPair.parse(n, r[0]) for r in body] != list(labels):
            raise ValidationError("row labels do not match the header")
        return cls.from_rows(ring, [r[1:] for r in body], labels)


def _densify(ring: RingSpec, sparse: dict[int, RingValue], dim: int) -> tuple[RingValue, ...]:
    z = ring.zero
    return tuple(sparse.get(j, z) for j in range(dim))


def phi_matrix(n: int, ring: RingSpec = INTEGERS, bound: int | None = None) -> RingMatrix:
    """Matrix of ``phi`` with rows and columns in ``enumerate_pairs(n)`` order.

    Column ``j`` holds the coordinates of ``phi(f_{X_j, Y_j})``.
    """
    pairs = enumerate_pairs(n, bound)
    index = {p: i for i, p in enumerate(pairs)}
    dim = len(pairs)
    z, o = ring.zero, ring.one
    cols = []
    for p in pairs:
        col = [z] * dim
        for q in phi_basis(from_pair(p.X, p.Y, n), ring).terms:
            col[index[q]] = o
        cols.append(col)
    entries = tuple(tuple(cols[j][i] for j in range(dim)) for i in range(dim))
    return RingMatrix(ring, entries, tuple(pairs))


def invert_unipotent(M: RingMatrix) -> RingMatrix:
    """Exact inverse of a unipotent upper triangular matrix.

    Rows are solved bottom-up from ``N[i] = e_i - sum_{k>i} M[i,k] N[k]``,
    which only needs ring addition, negation and multiplication.
    """
    if not M.is_unipotent_upper():
        raise DomainError("matrix is not unipotent upper triangular")
    ring = M.ring
    dim = M.dim
    m_rows = M.rows_sparse()
    inv: list[dict[int, RingValue]] = [{}] * dim
    for i in range(dim - 1, -1, -1):
        acc: dict[int, RingValue] = {i: ring.one}
        for k, a in m_rows[i].items():
            if k == i:
                continue
            na = ring.neg(a)
            for j, b in inv[k].items():
                t = ring.mul(na, b)
                acc[j] = ring.add(acc[j], t) if j in acc else t
        inv[i] = {j: x for j, x in acc.items() if x != ring.zero}
    return RingMatrix(ring, tuple(_densify(ring, row, dim) for row in inv), M.labels)


@lru_cache(maxsize=None)
def _integer_inverse(n: int, bound: int | None) -> RingMatrix:
    return invert_unipotent(phi_matrix(n, INTEGERS, bound))


def phi_inverse_matrix(n: int, ring: RingSpec = INTEGERS, bound: int | None = None) -> RingMatrix:
    """Inverse of ``phi_matrix(n, ring)``.

    Computed once per ``n`` over Z and pushed into ``ring`` along the unique
    unital map Z -> ring, which carries inverses to inverses.
    """
    inv = _integer_inverse(n, bound)
    if ring == INTEGERS:
        return inv
    return RingMatrix(ring, tuple(tuple(ring.coerce(x) for x in row) for row in inv.entries), inv.labels)


@lru_cache(maxsize=None)
def _inverse_columns(n: int, bound: int | None):
    inv = _integer_inverse(n, bound)
    dim = inv.dim
    cols = [{j: inv.entries[j][i] for j in range(dim) if inv.entries[j][i]} for i in range(dim)]
    maps = [from_pair(p.X, p.Y, n) for p in inv.labels]
    return {p: i for i, p in enumerate(inv.labels)}, cols, maps


def phi_inverse(b: AlgebraElement, bound: int | None = None) -> AlgebraElement:
    """The unique element ``a`` of kC_{n+1} with ``phi(a) == b``."""
    if b.basis.kind != PAIRS:
        raise UsageError("phi_inverse takes an element of the incidence algebra")
    ring = b.ring
    n = b.basis.n
    index, cols, maps = _inverse_columns(n, bound)
    out: dict = {}
    for p, c in b.terms.items():
        for j, x in cols[index[p]].items():
            t = ring.mul(ring.coerce(x), c)
            f = maps[j]
            out[f] = ring.add(out[f], t) if f in out else t
    return AlgebraElement._normalized(ring, monoid_basis(n + 1), out)
