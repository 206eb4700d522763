"""Exact arithmetic for dimension types in decorated form.

A dimension type assigns to every group in the Bockstein family
{Q, Z/p, Z_{p^inf}, Z_(p) : p prime} a value in N u {inf}, subject to
the regularity relations that cohomological dimension satisfies at each
prime.  At a prime the four constraints collapse to a single decorated
number: the value at Z/p carrying a sign that records which singular
pattern the prime follows.  This module implements decorated numbers,
finitely supported dimension types, and their operation algebra: the
product sum ``boxplus``, the dual sum ``oplus``, the sign involution
``star``, integer shifts, pointwise comparison, and dimension.

Everything here is immutable and safe to share.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterable, Mapping, Union


class ValidityError(ValueError):
    """A value that violates a structural invariant of the calculus."""


class NotRepresentableError(ValidityError):
    """An operation result with no decorated representation."""


class _Infinity:
    """The unbounded dimension value; compares above every integer."""

    _instance = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    def __lt__(self, other):
        if other is self or isinstance(other, int):
            return False
        return NotImplemented

    def __le__(self, other):
        if other is self:
            return True
        if isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other):
        if other is self:
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __ge__(self, other):
        if other is self or isinstance(other, int):
            return True
        return NotImplemented

    def __add__(self, other):
        if other is self or isinstance(other, int):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return self
        return NotImplemented


INF = _Infinity()

ExtNat = Union[int, _Infinity]


def as_extnat(value: object, what: str = "value") -> ExtNat:
    """Validate a value in N u {inf}."""
    if value is INF:
        return INF
    if isinstance(value, int) and not isinstance(value, bool):
        if value < 0:
            raise ValidityError(f"{what} must be >= 0, got {value}")
        return value
    raise ValidityError(f"{what} must be a non-negative integer or inf, got {value!r}")


def is_prime(n: object) -> bool:
    """Primality by trial division; everything here is desk-scale."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def require_prime(p: object, what: str = "prime") -> int:
    if not is_prime(p):
        raise ValidityError(f"{what} must be a prime number, got {p!r}")
    return p  # type: ignore[return-value]


class Decoration(IntEnum):
    """Singularity mark on a prime entry, ordered minus < none < plus."""

    MINUS = -1
    NONE = 0
    PLUS = 1

    @property
    def symbol(self) -> str:
        return {Decoration.MINUS: "-", Decoration.NONE: "", Decoration.PLUS: "+"}[self]

    @property
    def flipped(self) -> "Decoration":
        """Mirror image: plus and minus exchanged, none fixed."""
        return Decoration(-self.value)

    def combine(self, other: "Decoration") -> "Decoration":
        """Sign product: none is neutral, like signs persist, mixed give minus."""
        if self is Decoration.NONE:
            return other
        if other is Decoration.NONE:
            return self
        return Decoration(min(self.value, other.value))


def _dual_combine(a: Decoration, b: Decoration) -> Decoration:
    # Mirror conjugate of the sign product: mixed signs give plus.
    return a.flipped.combine(b.flipped).flipped


@functools.total_ordering
@dataclass(frozen=True)
class DecoratedNumber:
    """A base value with a singularity mark: 3-, 3, 3+ or inf+.

    The order interleaves marks between consecutive bases,
    3- < 3 < 3+ < 4-.  A minus mark on base 0 or inf is rejected:
    0- would stand for the value -1, and inf- duplicates inf+.

    >>> DecoratedNumber(3, Decoration.MINUS) < DecoratedNumber(3, Decoration.PLUS)
    True
    >>> print(DecoratedNumber(INF, Decoration.PLUS))
    inf+
    """

    base: ExtNat
    decoration: Decoration = Decoration.NONE

    def __post_init__(self):
        as_extnat(self.base, "base")
        if not isinstance(self.decoration, Decoration):
            raise ValidityError(f"decoration must be a Decoration, got {self.decoration!r}")
        if self.decoration is Decoration.MINUS and (self.base == 0 or self.base is INF):
            raise ValidityError(f"{self.base}- is not a representable decorated number")

    def _key(self):
        if self.base is INF:
            return (1, 0, self.decoration.value)
        return (0, self.base, self.decoration.value)

    def __lt__(self, other):
        if not isinstance(other, DecoratedNumber):
            return NotImplemented
        return self._key() < other._key()

    def __str__(self) -> str:
        return f"{self.base}{self.decoration.symbol}"

    def shifted(self, n: int) -> "DecoratedNumber":
        """Same mark, base raised by n."""
        return DecoratedNumber(self.base + n, self.decoration)

    def starred(self) -> "DecoratedNumber":
        """Mirror image; undefined at 0+ and inf+."""
        if self.decoration is Decoration.NONE:
            return self
        if self.decoration is Decoration.PLUS and (self.base == 0 or self.base is INF):
            raise NotRepresentableError(f"{self} has no mirror image")
        return DecoratedNumber(self.base, self.decoration.flipped)


class BasisKind(Enum):
    RATIONALS = "Q"
    CYCLIC = "Z/p"
    CIRCLE = "Z_{p^inf}"
    LOCALIZED = "Z_(p)"


@dataclass(frozen=True)
class BocksteinGroup:
    """One group of the Bockstein family: Q, Z/p, Z_{p^inf} or Z_(p)."""

    kind: BasisKind
    prime: int | None = None

    def __post_init__(self):
        if self.kind is BasisKind.RATIONALS:
            if self.prime is not None:
                raise ValidityError("Q carries no prime")
        else:
            require_prime(self.prime)

    @classmethod
    def rationals(cls) -> "BocksteinGroup":
        return cls(BasisKind.RATIONALS)

    @classmethod
    def cyclic(cls, p: int) -> "BocksteinGroup":
        return cls(BasisKind.CYCLIC, p)

    @classmethod
    def circle(cls, p: int) -> "BocksteinGroup":
        return cls(BasisKind.CIRCLE, p)

    @classmethod
    def localized(cls, p: int) -> "BocksteinGroup":
        return cls(BasisKind.LOCALIZED, p)

    def __str__(self) -> str:
        if self.kind is BasisKind.RATIONALS:
            return "Q"
        if self.kind is BasisKind.CYCLIC:
            return f"Z_{self.prime}"
        if self.kind is BasisKind.CIRCLE:
            return f"Z_{self.prime}^inf"
        return f"Z_({self.prime})"


class DimensionType:
    """A dimension type with finite support: the value at Q, a default
    prime entry, and decorated exceptions at finitely many primes.

    Canonical form is enforced on construction: an undecorated entry must
    equal the value at Q, and exceptional entries equal to the default are
    dropped, so ``==`` between instances decides equality as functions on
    the Bockstein family.  Calling an instance on a :class:`BocksteinGroup`
    gives its value there.

    >>> d = DimensionType(2, DecoratedNumber(3, Decoration.MINUS))
    >>> print(d)
    {q=2; *=3-}
    >>> d(BocksteinGroup.circle(5))
    2
    >>> d(BocksteinGroup.localized(5))
    3
    >>> print(d.boxplus(DimensionType(2, DecoratedNumber(1, Decoration.PLUS))))
    {q=4; *=4-}
    >>> print(d.oplus(DimensionType(2, DecoratedNumber(1, Decoration.PLUS))))
    {q=4; *=4+}
    """

    __slots__ = ("rational", "default", "exceptions")

    def __init__(
        self,
        rational: ExtNat,
        default: DecoratedNumber,
        exceptions: Mapping[int, DecoratedNumber] | Iterable[tuple[int, DecoratedNumber]] | None = None,
    ):
        rational = as_extnat(rational, "value at Q")
        if not isinstance(default, DecoratedNumber):
            raise ValidityError(f"default entry must be a DecoratedNumber, got {default!r}")
        self._check_entry(default, rational, "default entry")
        entries: dict[int, DecoratedNumber] = {}
        if exceptions is not None:
            items = exceptions.items() if isinstance(exceptions, Mapping) else exceptions
            for p, entry in items:
                require_prime(p, "exception key")
                if p in entries:
                    raise ValidityError(f"duplicate exception at prime {p}")
                if not isinstance(entry, DecoratedNumber):
                    raise ValidityError(f"entry at {p} must be a DecoratedNumber, got {entry!r}")
                self._check_entry(entry, rational, f"entry at {p}")
                entries[p] = entry
        self.rational = rational
        self.default = default
        # exceptions equal to the default carry no information: drop them
        self.exceptions = tuple(sorted((p, e) for p, e in entries.items() if e != default))

    @staticmethod
    def _check_entry(entry: DecoratedNumber, rational: ExtNat, what: str) -> None:
        if entry.decoration is Decoration.NONE and entry.base != rational:
            raise ValidityError(
                f"{what} {entry} is undecorated but differs from the value {rational} at Q"
            )

    def entry(self, p: int) -> DecoratedNumber:
        """Decorated value at the prime p."""
        require_prime(p)
        for q, e in self.exceptions:
            if q == p:
                return e
        return self.default

    def exception_primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.exceptions)

    def __eq__(self, other):
        if not isinstance(other, DimensionType):
            return NotImplemented
        return (
            self.rational == other.rational
            and self.default == other.default
            and self.exceptions == other.exceptions
        )

    def __hash__(self):
        return hash((self.rational, self.default, self.exceptions))

    def __repr__(self):
        if self.exceptions:
            return f"DimensionType({self.rational!r}, {self.default!r}, {dict(self.exceptions)!r})"
        return f"DimensionType({self.rational!r}, {self.default!r})"

    def __str__(self):
        parts = [f"q={self.rational}", f"*={self.default}"]
        parts.extend(f"{p}={e}" for p, e in self.exceptions)
        return "{" + "; ".join(parts) + "}"

    # -- evaluation ----------------------------------------------------

    def _values_at(self, e: DecoratedNumber) -> tuple[ExtNat, ExtNat, ExtNat]:
        # The values at (Z/p, Z_{p^inf}, Z_(p)) encoded by one entry.
        if e.decoration is Decoration.NONE:
            return e.base, e.base, e.base
        if e.decoration is Decoration.PLUS:
            return e.base, e.base, max(self.rational, e.base + 1)
        return e.base, e.base - 1, max(self.rational, e.base)

    def __call__(self, group: BocksteinGroup) -> ExtNat:
        """The value at one group of the Bockstein family."""
        if not isinstance(group, BocksteinGroup):
            raise TypeError(f"expected a BocksteinGroup, got {group!r}")
        if group.kind is BasisKind.RATIONALS:
            return self.rational
        cyclic, circle, localized = self._values_at(self.entry(group.prime))
        if group.kind is BasisKind.CYCLIC:
            return cyclic
        if group.kind is BasisKind.CIRCLE:
            return circle
        return localized

    def dim(self) -> ExtNat:
        """Largest value attained over the whole family.

        >>> boltyanskii_type(6).dim()
        6
        """
        values: list[ExtNat] = [self.rational]
        for e in (self.default, *(e for _, e in self.exceptions)):
            values.extend(self._values_at(e))
        return max(values)

    # -- order ---------------------------------------------------------

    def __le__(self, other):
        if not isinstance(other, DimensionType):
            return NotImplemented
        if not self.rational <= other.rational:
            return False
        if not self.default <= other.default:
            return False
        primes = set(self.exception_primes()) | set(other.exception_primes())
        return all(self.entry(p) <= other.entry(p) for p in primes)

    def __ge__(self, other):
        if not isinstance(other, DimensionType):
            return NotImplemented
        return other.__le__(self)

    def __lt__(self, other):
        if not isinstance(other, DimensionType):
            return NotImplemented
        return self != other and self.__le__(other)

    def __gt__(self, other):
        if not isinstance(other, DimensionType):
            return NotImplemented
        return self != other and other.__le__(self)

    # -- operations ----------------------------------------------------

    def _combine(self, other: "DimensionType", sign_rule) -> "DimensionType":
        if not isinstance(other, DimensionType):
            raise TypeError(f"expected a DimensionType, got {other!r}")

        def entry_sum(a: DecoratedNumber, b: DecoratedNumber) -> DecoratedNumber:
            base = a.base + b.base
            sign = sign_rule(a.decoration, b.decoration)
            if base is INF and sign is Decoration.MINUS:
                sign = Decoration.PLUS  # inf- and inf+ are the same pattern
            return DecoratedNumber(base, sign)

        primes = set(self.exception_primes()) | set(other.exception_primes())
        return DimensionType(
            self.rational + other.rational,
            entry_sum(self.default, other.default),
            {p: entry_sum(self.entry(p), other.entry(p)) for p in sorted(primes)},
        )

    def boxplus(self, other: "DimensionType") -> "DimensionType":
        """Product sum: values at Q add, bases add, signs multiply."""
        return self._combine(other, Decoration.combine)

    def oplus(self, other: "DimensionType") -> "DimensionType":
        """Dual sum, the mirror conjugate of :meth:`boxplus`: bases add
        and mixed signs give plus.  Defined exactly where the mirrors of
        both operands are."""
        self._require_starrable()
        other._require_starrable()
        return self._combine(other, _dual_combine)

    def _require_starrable(self) -> None:
        for e in (self.default, *(e for _, e in self.exceptions)):
            if e.decoration is Decoration.PLUS and (e.base == 0 or e.base is INF):
                raise NotRepresentableError(f"{self} has an entry {e} with no mirror image")

    def star(self) -> "DimensionType":
        """Sign involution; undefined when any entry is 0+ or inf+.

        >>> print(DimensionType(2, DecoratedNumber(3, Decoration.MINUS)).star())
        {q=2; *=3+}
        """
        return DimensionType(
            self.rational,
            self.default.starred(),
            {p: e.starred() for p, e in self.exceptions},
        )

    def __add__(self, n: int) -> "DimensionType":
        """Shift every value up by a non-negative integer."""
        if isinstance(n, bool) or not isinstance(n, int):
            return NotImplemented
        if n < 0:
            raise ValidityError(f"shift must be non-negative, got {n}")
        return DimensionType(
            self.rational + n,
            self.default.shifted(n),
            {p: e.shifted(n) for p, e in self.exceptions},
        )

    # -- predicates ------------------------------------------------------

    def is_full_valued(self) -> bool:
        """Constantly equal to its own dimension."""
        return self == constant(self.dim())

    def is_boltyanskii(self, n: int) -> bool:
        """Dimension exactly n and below the ceiling type of sides n.

        A type below ``boltyanskii_type(n)`` squares to dimension 2n-1
        instead of 2n.

        >>> boltyanskii_type(4).is_boltyanskii(4)
        True
        >>> constant(4).is_boltyanskii(4)
        False
        """
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            return False
        return self.dim() == n and self <= boltyanskii_type(n)


def constant(n: ExtNat) -> DimensionType:
    """The type with value n at every group of the family."""
    n = as_extnat(n, "constant value")
    return DimensionType(n, DecoratedNumber(n))


def boltyanskii_type(n: int) -> DimensionType:
    """Largest type of an n-dimensional compactum whose square drops a
    dimension: n-1 at Q and (n-1)+ at every prime.

    >>> print(boltyanskii_type(6))
    {q=5; *=5+}
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidityError(f"the ceiling type needs an integer n >= 1, got {n!r}")
    return DimensionType(n - 1, DecoratedNumber(n - 1, Decoration.PLUS))
