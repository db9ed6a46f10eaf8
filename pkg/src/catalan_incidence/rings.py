"""Exact coefficient rings selected at runtime.

Values are plain Python objects in canonical form:

* ``Z``   -- ``int`` (arbitrary precision),
* ``Z/m`` -- ``int`` residue in ``[0, m)``,
* ``Q``   -- ``fractions.Fraction`` (always reduced, positive denominator).

Canonical forms are unique, so ``==`` on values is ring equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import UsageError, ValidationError

RingValue = Union[int, Fraction]

INTEGERS_KIND = "Z"
MOD_KIND = "Z/m"
RATIONALS_KIND = "Q"

_MOD_RE = re.compile(r"^Z/(\d+)$")


@dataclass(frozen=True)
class RingSpec:
    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind == MOD_KIND:
            if not isinstance(self.modulus, int) or self.modulus < 2:
                raise ValidationError(f"modulus must be an integer >= 2, got {self.modulus!r}")
        elif self.kind in (INTEGERS_KIND, RATIONALS_KIND):
            if self.modulus is not None:
                raise ValidationError(f"ring {self.kind} takes no modulus")
        else:
            raise ValidationError(f"unknown ring kind {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> RingSpec:
        """Parse ``"Z"``, ``"Q"`` or ``"Z/m"``."""
        text = text.strip()
        if text == "Z":
            return INTEGERS
        if text == "Q":
            return RATIONALS
        m = _MOD_RE.match(text)
        if m:
            return integers_mod(int(m.group(1)))
        raise ValidationError(f"cannot parse ring {text!r}; expected Z, Q or Z/m")

    def __str__(self):
        if self.kind == MOD_KIND:
            return f"Z/{self.modulus}"
        return self.kind

    @property
    def zero(self) -> RingValue:
        return Fraction(0) if self.kind == RATIONALS_KIND else 0

    @property
    def one(self) -> RingValue:
        return Fraction(1) if self.kind == RATIONALS_KIND else 1

    def contains(self, a) -> bool:
        """True if ``a`` is a canonical value of this ring."""
        if self.kind == RATIONALS_KIND:
            return type(a) is Fraction
        if type(a) is not int:
            return False
        if self.kind == MOD_KIND:
            return 0 <= a < self.modulus
        return True

    def check(self, *values) -> None:
        for a in values:
            if not self.contains(a):
                raise UsageError(f"{a!r} is not a canonical value of ring {self}")

    def coerce(self, x) -> RingValue:
        """Map an integer, a rational or a decimal/``p/q`` string into this ring.

        Integers map through the unique unital homomorphism from Z.  Rationals
        are accepted by ``Z`` and ``Z/m`` only when they are integral.
        """
        if isinstance(x, str):
            try:
                x = Fraction(x.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise ValidationError(f"cannot parse coefficient {x!r}") from exc
        if isinstance(x, bool) or not isinstance(x, Rational):
            raise ValidationError(f"cannot coerce {x!r} into ring {self}")
        if self.kind == RATIONALS_KIND:
            return Fraction(x)
        if Fraction(x).denominator != 1:
            raise ValidationError(f"{x} is not an element of {self}")
        x = int(x)
        if self.kind == MOD_KIND:
            return x % self.modulus
        return x

    def add(self, a: RingValue, b: RingValue) -> RingValue:
        self.check(a, b)
        if self.kind == MOD_KIND:
            return (a + b) % self.modulus
        return a + b

    def mul(self, a: RingValue, b: RingValue) -> RingValue:
        self.check(a, b)
        if self.kind == MOD_KIND:
            return (a * b) % self.modulus
        return a * b

    def neg(self, a: RingValue) -> RingValue:
        self.check(a)
        if self.kind == MOD_KIND:
            return -a % self.modulus
        return -a

    def sub(self, a: RingValue, b: RingValue) -> RingValue:
        return self.add(a, self.neg(b))

    def format(self, a: RingValue) -> str:
        """Decimal string, or ``p/q`` for non-integral rationals."""
        self.check(a)
        return str(a)


def integers_mod(m: int) -> RingSpec:
    return RingSpec(MOD_KIND, m)


INTEGERS = RingSpec(INTEGERS_KIND)
RATIONALS = RingSpec(RATIONALS_KIND)


def ring_add(r: RingSpec, a: RingValue, b: RingValue) -> RingValue:
    return r.add(a, b)


def ring_mul(r: RingSpec, a: RingValue, b: RingValue) -> RingValue:
    return r.mul(a, b)


def ring_neg(r: RingSpec, a: RingValue) -> RingValue:
    return r.neg(a)
