"""Abelian groups and their Bockstein bases.

The groups handled here are built from Q, free and finite cyclic groups,
p-adic circles Z_{p^inf}, localizations Z_(p), integer presentations, and
finite direct sums of all of those.  For each such group we compute, per
prime, whether the torsion-free quotient and the p-torsion are nonzero and
p-divisible; those four uniform predicates determine the Bockstein basis
sigma(G), the subset of the Bockstein family that controls cohomological
dimension with coefficients in G.

Predicates over primes are represented exactly as a default truth value
plus a finite exception set, closed under pointwise boolean algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .decorated import (
    BocksteinGroup,
    BasisKind,
    DecoratedNumber,
    Decoration,
    DimensionType,
    ExtNat,
    ValidityError,
    is_prime,
    require_prime,
)


@dataclass(frozen=True)
class PrimePredicate:
    """A boolean function on primes with finite exception set.

    >>> even = PrimePredicate(False, frozenset({2}))
    >>> even(2), even(3)
    (True, False)
    >>> (~even)(2)
    False
    """

    default: bool
    exceptions: frozenset[int] = frozenset()

    def __post_init__(self):
        for p in self.exceptions:
            require_prime(p, "exception")

    def __call__(self, p: int) -> bool:
        require_prime(p)
        return self.default != (p in self.exceptions)

    def _pointwise(self, other: "PrimePredicate", op) -> "PrimePredicate":
        default = op(self.default, other.default)
        primes = self.exceptions | other.exceptions
        flipped = frozenset(p for p in primes if op(self(p), other(p)) != default)
        return PrimePredicate(default, flipped)

    def __and__(self, other: "PrimePredicate") -> "PrimePredicate":
        return self._pointwise(other, lambda a, b: a and b)

    def __or__(self, other: "PrimePredicate") -> "PrimePredicate":
        return self._pointwise(other, lambda a, b: a or b)

    def __invert__(self) -> "PrimePredicate":
        return PrimePredicate(not self.default, self.exceptions)

    def always(self) -> bool:
        return self.default and not self.exceptions

    def never(self) -> bool:
        return not self.default and not self.exceptions


_ALWAYS = PrimePredicate(True)
_NEVER = PrimePredicate(False)


class GroupExpr:
    """Base class for coefficient group descriptions."""

    def __add__(self, other: "GroupExpr") -> "GroupExpr":
        if not isinstance(other, GroupExpr):
            return NotImplemented
        left = self.parts if isinstance(self, DirectSum) else (self,)
        right = other.parts if isinstance(other, DirectSum) else (other,)
        return DirectSum(left + right)


@dataclass(frozen=True)
class Rationals(GroupExpr):
    def __str__(self) -> str:
        return "Q"


@dataclass(frozen=True)
class Free(GroupExpr):
    """Free abelian group of finite rank."""

    rank: int = 1

    def __post_init__(self):
        if isinstance(self.rank, bool) or not isinstance(self.rank, int) or self.rank < 0:
            raise ValidityError(f"rank must be a non-negative integer, got {self.rank!r}")

    def __str__(self) -> str:
        return "Z" if self.rank == 1 else f"Z^{self.rank}"


@dataclass(frozen=True)
class Cyclic(GroupExpr):
    """Finite cyclic group Z/m, m >= 2."""

    modulus: int

    def __post_init__(self):
        if isinstance(self.modulus, bool) or not isinstance(self.modulus, int) or self.modulus < 2:
            raise ValidityError(f"modulus must be an integer >= 2, got {self.modulus!r}")

    def __str__(self) -> str:
        return f"Z/{self.modulus}"


@dataclass(frozen=True)
class PadicCircle(GroupExpr):
    """The Pruefer group Z_{p^inf}: all p-power roots of unity."""

    prime: int

    def __post_init__(self):
        require_prime(self.prime)

    def __str__(self) -> str:
        return f"Zpinf({self.prime})"


@dataclass(frozen=True)
class LocalizedIntegers(GroupExpr):
    """Integers localized at p: denominators prime to p allowed."""

    prime: int

    def __post_init__(self):
        require_prime(self.prime)

    def __str__(self) -> str:
        return f"Zloc({self.prime})"


@dataclass(frozen=True)
class Presented(GroupExpr):
    """Finitely presented abelian group: Z^generators / rows(relations).

    Each relation is one row of integer coefficients, one per generator.
    """

    generators: int
    relations: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if isinstance(self.generators, bool) or not isinstance(self.generators, int) or self.generators < 0:
            raise ValidityError(f"generator count must be >= 0, got {self.generators!r}")
        for row in self.relations:
            if len(row) != self.generators:
                raise ValidityError(
                    f"relation {list(row)} has {len(row)} coefficients for {self.generators} generators"
                )
            for c in row:
                if isinstance(c, bool) or not isinstance(c, int):
                    raise ValidityError(f"relation coefficient must be an integer, got {c!r}")

    def __str__(self) -> str:
        rows = ",".join("[" + ",".join(str(c) for c in row) + "]" for row in self.relations)
        return f"pres[{rows}]"


@dataclass(frozen=True)
class DirectSum(GroupExpr):
    parts: tuple[GroupExpr, ...]

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValidityError("a direct sum needs at least two summands")

    def __str__(self) -> str:
        return " + ".join(str(p) for p in self.parts)


def smith_normal_form(
    relations: Sequence[Sequence[int]], generators: int
) -> tuple[int, list[int]]:
    """Diagonalize an integer relation matrix.

    Returns ``(rank, factors)``: the free rank of the quotient group and
    the nontrivial invariant factors in divisibility order, units dropped.

    >>> smith_normal_form([[2, 0], [0, 12]], 2)
    (0, [2, 12])
    >>> smith_normal_form([[]], 1)
    (1, [])
    >>> smith_normal_form([[6, 4], [4, 6]], 2)
    (0, [2, 10])
    """
    m = [list(row) for row in relations if row]
    rows, cols = len(m), generators
    for row in m:
        if len(row) != cols:
            raise ValidityError(f"relation rows must have {cols} entries")

    diag: list[int] = []
    top = 0
    while top < rows and top < cols:
        # pick the nonzero entry of least magnitude as pivot
        pivot = None
        for i in range(top, rows):
            for j in range(top, cols):
                v = m[i][j]
                if v != 0 and (pivot is None or abs(v) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        m[top], m[i] = m[i], m[top]
        for r in range(rows):
            m[r][top], m[r][j] = m[r][j], m[r][top]
        # clear the pivot row and column; a leftover remainder becomes the
        # new, strictly smaller pivot on the next pass
        while True:
            p = m[top][top]
            dirty = False
            for i in range(top + 1, rows):
                q = m[i][top] // p
                if q:
                    for j in range(cols):
                        m[i][j] -= q * m[top][j]
                if m[i][top]:
                    m[top], m[i] = m[i], m[top]
                    dirty = True
                    break
            if dirty:
                continue
            for j in range(top + 1, cols):
                q = m[top][j] // p
                if q:
                    for i in range(rows):
                        m[i][j] -= q * m[i][top]
                if m[top][j]:
                    for i in range(rows):
                        m[i][top], m[i][j] = m[i][j], m[i][top]
                    dirty = True
                    break
            if not dirty:
                break
        diag.append(abs(m[top][top]))
        top += 1

    # repair divisibility along the diagonal with gcd/lcm passes
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a, b = diag[i], diag[i + 1]
            if b % a:
                g = math.gcd(a, b)
                diag[i], diag[i + 1] = g, a * b // g
                changed = True
    diag.sort()

    rank = generators - len(diag)
    return rank, [d for d in diag if d != 1]


def _prime_factors(n: int) -> set[int]:
    out: set[int] = set()
    f = 2
    while f * f <= n:
        while n % f == 0:
            out.add(f)
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.add(n)
    return out


@dataclass(frozen=True)
class StructuralProfile:
    """The four per-prime facts that determine a Bockstein basis."""

    free_quotient_nonzero: bool
    free_quotient_divisible: PrimePredicate
    torsion_nonzero: PrimePredicate
    torsion_divisible: PrimePredicate


def profile(group: GroupExpr) -> StructuralProfile:
    """Structural facts about the torsion-free quotient and p-torsion."""
    match group:
        case Rationals():
            return StructuralProfile(True, _ALWAYS, _NEVER, _ALWAYS)
        case Free(rank=r):
            return StructuralProfile(r > 0, _ALWAYS if r == 0 else _NEVER, _NEVER, _ALWAYS)
        case Cyclic(modulus=m):
            torsion = PrimePredicate(False, frozenset(_prime_factors(m)))
            return StructuralProfile(False, _ALWAYS, torsion, ~torsion)
        case PadicCircle(prime=p):
            return StructuralProfile(False, _ALWAYS, PrimePredicate(False, frozenset({p})), _ALWAYS)
        case LocalizedIntegers(prime=p):
            return StructuralProfile(True, PrimePredicate(True, frozenset({p})), _NEVER, _ALWAYS)
        case Presented(generators=g, relations=rel):
            rank, factors = smith_normal_form(rel, g)
            primes: set[int] = set()
            for f in factors:
                primes |= _prime_factors(f)
            torsion = PrimePredicate(False, frozenset(primes))
            return StructuralProfile(
                rank > 0, _ALWAYS if rank == 0 else _NEVER, torsion, ~torsion
            )
        case DirectSum(parts=parts):
            profiles = [profile(part) for part in parts]
            fq_nonzero = any(pr.free_quotient_nonzero for pr in profiles)
            fq_div = _ALWAYS
            t_nonzero = _NEVER
            t_div = _ALWAYS
            for pr in profiles:
                # a sum is p-divisible exactly when every summand is: the
                # free quotient and p-torsion both split across summands
                if pr.free_quotient_nonzero:
                    fq_div = fq_div & pr.free_quotient_divisible
                t_nonzero = t_nonzero | pr.torsion_nonzero
                t_div = t_div & (pr.torsion_divisible | ~pr.torsion_nonzero)
            return StructuralProfile(fq_nonzero, fq_div, t_nonzero, t_div)
        case _:
            raise TypeError(f"not a coefficient group: {group!r}")


@dataclass(frozen=True)
class SigmaSet:
    """A Bockstein basis: which of Q, Z/p, Z_{p^inf}, Z_(p) it contains.

    >>> print(bockstein_basis(Free(1)))
    {Z_(p): all p}
    >>> print(bockstein_basis(Cyclic(2) + Cyclic(12)))
    {Z_2, Z_3}
    """

    rationals: bool
    cyclic: PrimePredicate
    circle: PrimePredicate
    localized: PrimePredicate

    def __contains__(self, group: BocksteinGroup) -> bool:
        if not isinstance(group, BocksteinGroup):
            raise TypeError(f"expected a BocksteinGroup, got {group!r}")
        if group.kind is BasisKind.RATIONALS:
            return self.rationals
        pred = {
            BasisKind.CYCLIC: self.cyclic,
            BasisKind.CIRCLE: self.circle,
            BasisKind.LOCALIZED: self.localized,
        }[group.kind]
        return pred(group.prime)

    def is_empty(self) -> bool:
        return (
            not self.rationals
            and self.cyclic.never()
            and self.circle.never()
            and self.localized.never()
        )

    def exception_primes(self) -> tuple[int, ...]:
        return tuple(
            sorted(self.cyclic.exceptions | self.circle.exceptions | self.localized.exceptions)
        )

    def __str__(self) -> str:
        clauses: list[str] = []
        if self.rationals:
            clauses.append("Q")
        clauses.extend(_membership_clauses(self.cyclic, "Z_p", "Z_{p}"))
        clauses.extend(_membership_clauses(self.circle, "Z_p^inf", "Z_{p}^inf"))
        clauses.extend(_membership_clauses(self.localized, "Z_(p)", "Z_({p})"))
        if not clauses:
            return "{}"
        return "{" + "; ".join(clauses) + "}"


def _membership_clauses(pred: PrimePredicate, generic: str, fmt: str) -> list[str]:
    if pred.default:
        if pred.exceptions:
            missing = ", ".join(str(p) for p in sorted(pred.exceptions))
            return [f"{generic}: all p except {missing}"]
        return [f"{generic}: all p"]
    if pred.exceptions:
        return [", ".join(fmt.format(p=p) for p in sorted(pred.exceptions))]
    return []


def bockstein_basis(group: GroupExpr) -> SigmaSet:
    """The Bockstein basis sigma(G) of a coefficient group.

    Membership is decided per prime from the structural profile: Z_(p)
    enters when the torsion-free quotient is not p-divisible, Z/p when
    the p-torsion is nonzero and not p-divisible, Z_{p^inf} when it is
    nonzero and p-divisible, and Q when the torsion-free quotient is
    nonzero and divisible at every prime.

    >>> print(bockstein_basis(Rationals()))
    {Q}
    >>> print(bockstein_basis(PadicCircle(2) + Free(1)))
    {Z_2^inf; Z_(p): all p}
    """
    pr = profile(group)
    rationals = pr.free_quotient_nonzero and pr.free_quotient_divisible.always()
    cyclic = pr.torsion_nonzero & ~pr.torsion_divisible
    circle = pr.torsion_nonzero & pr.torsion_divisible
    localized = ~pr.free_quotient_divisible if pr.free_quotient_nonzero else _NEVER
    return SigmaSet(rationals, cyclic, circle, localized)


def _generic_prime(marked: tuple[int, ...]) -> int:
    p = 2
    while p in marked or not is_prime(p):
        p += 1
    return p


def dim_with_coefficients(d: DimensionType, group: GroupExpr) -> ExtNat:
    """Largest value of a dimension type over the basis of a group.

    The supremum over sigma(G) only needs the finitely many primes marked
    in either the type or the basis, plus one generic prime standing for
    all the rest.

    >>> dim_with_coefficients(DimensionType(2, DecoratedNumber(3, Decoration.MINUS)), Free(1))
    3
    """
    sigma = bockstein_basis(group)
    if sigma.is_empty():
        return 0
    values: list[ExtNat] = []
    if sigma.rationals:
        values.append(d(BocksteinGroup.rationals()))
    marked = tuple(sorted(set(d.exception_primes()) | set(sigma.exception_primes())))
    for p in (*marked, _generic_prime(marked)):
        if sigma.cyclic(p):
            values.append(d(BocksteinGroup.cyclic(p)))
        if sigma.circle(p):
            values.append(d(BocksteinGroup.circle(p)))
        if sigma.localized(p):
            values.append(d(BocksteinGroup.localized(p)))
    return max(values) if values else 0
