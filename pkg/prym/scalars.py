"""Scalar arithmetic over F_p and the dual numbers F_p[ε]/(ε²)"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Optional, Union

import numpy as np
from sympy import isprime
from sympy.polys.domains import GF

from .errors import DivisionByZero, InvalidPrime, NotAUnit

RNG_NAME = "numpy.PCG64"

MIN_PRIME = 3
MAX_PRIME = 2 ** 31


@dataclass(frozen=True)
class Prime:
    """An odd prime small enough for machine-word residues."""

    value: int

    def __post_init__(self):
        value = self.value
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise InvalidPrime(f"prime must be an integer, got {value!r}")
        value = int(value)
        object.__setattr__(self, "value", value)
        if value == 2:
            raise InvalidPrime("p = 2 is not supported (the discriminant needs 1/2)")
        if not (MIN_PRIME <= value < MAX_PRIME) or not isprime(value):
            raise InvalidPrime(f"{value} is not a prime in [{MIN_PRIME}, 2^31)")

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


@lru_cache(maxsize=None)
def _field_domain(p: int):
    # FiniteField equality ignores identity, so one cached instance per prime keeps rings comparable.
    return GF(p, symmetric=False)


class PrimeField:
    """The field F_p. Elements are sympy residues with canonical value in [0, p)."""

    def __init__(self, prime: Union[Prime, int]):
        if not isinstance(prime, Prime):
            prime = Prime(prime)
        self.prime = prime
        self.p = prime.value
        self.domain = _field_domain(self.p)
        self.zero = self.domain.zero
        self.one = self.domain.one

    def __call__(self, value: Any):
        if isinstance(value, DualScalar):
            raise TypeError("cannot coerce a dual number into F_p")
        if isinstance(value, self.domain.dtype):
            return value
        return self.domain(int(value) % self.p)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def residue(self, x) -> int:
        """Canonical integer representative in [0, p)."""
        return int(x) % self.p

    def symmetric(self, x) -> int:
        """Representative in (-p/2, p/2), used for printing."""
        r = int(x) % self.p
        return r - self.p if r > self.p // 2 else r

    def random(self, rng: np.random.Generator):
        return self(int(rng.integers(0, self.p)))

    def random_unit(self, rng: np.random.Generator):
        return self(int(rng.integers(1, self.p)))

    def dual(self, a: Any = 0, b: Any = 0) -> "DualScalar":
        return DualScalar(self(a), self(b))


def field_of(domain) -> PrimeField:
    """Recover the PrimeField wrapping a sympy finite-field domain."""
    return _cached_field(int(domain.mod))


@lru_cache(maxsize=None)
def _cached_field(p: int) -> PrimeField:
    return PrimeField(p)


def field_add(a, b):
    return a + b


def field_sub(a, b):
    return a - b


def field_mul(a, b):
    return a * b


def field_neg(a):
    return -a


def field_inv(a):
    if not a:
        raise DivisionByZero("inverse of zero in F_p")
    return a.__class__(1) / a


@dataclass(frozen=True)
class DualScalar:
    """a + bε with ε² = 0. Both parts are F_p residues of the same field."""

    a: Any
    b: Any

    @classmethod
    def lift(cls, x) -> "DualScalar":
        if isinstance(x, DualScalar):
            return x
        return cls(x, x.__class__(0))

    def _coerce(self, other) -> "DualScalar":
        if isinstance(other, DualScalar):
            return other
        if isinstance(other, int):
            return DualScalar(self.a.__class__(other), self.a.__class__(0))
        return DualScalar(other, self.a.__class__(0))

    def __add__(self, other):
        o = self._coerce(other)
        return DualScalar(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return DualScalar(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return DualScalar(-self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        return DualScalar(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * dual_inv(self._coerce(other))

    def __rtruediv__(self, other):
        return self._coerce(other) * dual_inv(self)

    def __pow__(self, n: int):
        if n < 0:
            return dual_inv(self) ** (-n)
        # (a + bε)^n = a^n + n a^(n-1) b ε
        if n == 0:
            return DualScalar(self.a.__class__(1), self.a.__class__(0))
        return DualScalar(self.a ** n, self.a ** (n - 1) * self.b * n)

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DualScalar):
            if isinstance(other, int) or hasattr(other, "val"):
                other = self._coerce(other)
            else:
                return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((int(self.a), int(self.b)))

    @property
    def is_unit(self) -> bool:
        return bool(self.a)

    def reduce(self):
        """The ε → 0 image in F_p."""
        return self.a

    def __repr__(self) -> str:
        return f"{int(self.a)}+{int(self.b)}ε"


def dual_inv(x: DualScalar) -> DualScalar:
    if not x.is_unit:
        raise NotAUnit(f"{x!r} has zero constant part")
    inv = field_inv(x.a)
    return DualScalar(inv, -(inv * inv) * x.b)


def is_dual(x) -> bool:
    return isinstance(x, DualScalar)


def make_rng(seed: Optional[int] = 0) -> np.random.Generator:
    """Seeded generator used for every random choice in prym."""
    return np.random.Generator(np.random.PCG64(seed))
