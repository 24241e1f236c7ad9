"""Exact scalar fields: the rationals and prime fields GF(p).

Elements are plain Python numbers: :class:`fractions.Fraction` for the
rationals and ``int`` in ``range(p)`` for GF(p).  Field objects only know how
to coerce, invert and test; the hot loops in :mod:`osalgebra.linalg` branch on
``field.p`` directly instead of dispatching through methods.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ValidationError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def primes_up_to(bound: int) -> list[int]:
    return [p for p in range(2, bound + 1) if is_prime(p)]


class ScalarField:
    #: characteristic; 0 for the rationals
    p: int = 0

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, x):
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        return isinstance(other, ScalarField) and self.p == other.p

    def __hash__(self) -> int:
        return hash(("field", self.p))

    def to_json(self, x):
        raise NotImplementedError


class Rationals(ScalarField):
    p = 0

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def descriptor(self) -> str:
        return "Q"

    def to_json(self, x) -> str:
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"

    def __repr__(self) -> str:
        return "QQ"


class PrimeField(ScalarField):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime")
        self.p = p

    def __call__(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def descriptor(self) -> str:
        return f"GF({self.p})"

    def to_json(self, x) -> int:
        return int(x) % self.p

    def __repr__(self) -> str:
        return f"GF({self.p})"


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_flags(name: str, p: int | None = None) -> ScalarField:
    if name in ("q", "Q", "QQ"):
        return QQ
    if name in ("fp", "gf"):
        if p is None:
            raise ValidationError("prime field needs a characteristic")
        return GF(p)
    raise ValidationError(f"unknown field {name!r}")
