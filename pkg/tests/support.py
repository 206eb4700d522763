"""Independent oracles the test suite checks the package against.

Everything here is written from the defining formulas, not from the
package internals: the order oracle compares evaluations group by
group, and the Smith normal form oracle goes through determinantal
divisors.  Slow and obviously correct beats fast and clever in a test
oracle.
"""

from __future__ import annotations

import math
from itertools import combinations

from hypothesis import strategies as st

from dimcalc import INF, BocksteinGroup, DecoratedNumber, Decoration, DimensionType

ORACLE_PRIMES = (2, 3, 5, 7, 11)
EXCEPTION_PRIMES = (2, 3, 5, 7)


def bockstein_groups(primes=ORACLE_PRIMES):
    yield BocksteinGroup.rationals()
    for p in primes:
        yield BocksteinGroup.cyclic(p)
        yield BocksteinGroup.circle(p)
        yield BocksteinGroup.localized(p)


def pointwise_leq(d1: DimensionType, d2: DimensionType, primes=ORACLE_PRIMES) -> bool:
    """Order oracle: compare the two types group by group."""
    return all(d1(g) <= d2(g) for g in bockstein_groups(primes))


def pointwise_eq(d1: DimensionType, d2: DimensionType, primes=ORACLE_PRIMES) -> bool:
    return all(d1(g) == d2(g) for g in bockstein_groups(primes))


def dim_oracle(d: DimensionType, extra_primes=ORACLE_PRIMES):
    """Dimension oracle: largest evaluation over the exception primes of
    d plus a generic prime supply."""
    primes = tuple(sorted(set(d.exception_primes()) | set(extra_primes)))
    return max(d(g) for g in bockstein_groups(primes))


def _det(matrix: list[list[int]]) -> int:
    n = len(matrix)
    if n == 0:
        return 1
    if n == 1:
        return matrix[0][0]
    total = 0
    for j, value in enumerate(matrix[0]):
        if value == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        total += (-1) ** j * value * _det(minor)
    return total


def det_invariants(relations, generators: int):
    """Smith normal form oracle via determinantal divisors.

    d_k = gcd of all k-by-k minors; the k-th invariant factor is
    d_k / d_(k-1); the quotient's free rank is generators minus the
    number of nonzero divisor levels.
    """
    rows = [list(r) for r in relations if r]
    previous = 1
    factors = []
    matrix_rank = 0
    for k in range(1, min(len(rows), generators) + 1):
        divisor = 0
        for row_set in combinations(range(len(rows)), k):
            for col_set in combinations(range(generators), k):
                sub = [[rows[i][j] for j in col_set] for i in row_set]
                divisor = math.gcd(divisor, _det(sub))
        if divisor == 0:
            break
        factors.append(divisor // previous)
        previous = divisor
        matrix_rank = k
    return generators - matrix_rank, [f for f in factors if f != 1]


# -- hypothesis strategies -------------------------------------------------


def decorated_entries(q, max_base=12, star_safe=False, allow_inf=False):
    """Valid prime entries for a type whose value at Q is q."""
    choices = [st.just(DecoratedNumber(q))]
    plus_bases = st.integers(1 if star_safe else 0, max_base)
    if allow_inf and not star_safe:
        plus_bases = st.one_of(plus_bases, st.just(INF))
    choices.append(plus_bases.map(lambda b: DecoratedNumber(b, Decoration.PLUS)))
    choices.append(
        st.integers(1, max_base).map(lambda b: DecoratedNumber(b, Decoration.MINUS)))
    return st.one_of(choices)


@st.composite
def dimension_types(draw, max_base=12, star_safe=False, allow_inf=False):
    if allow_inf:
        q = draw(st.one_of(st.integers(0, max_base), st.just(INF)))
    else:
        q = draw(st.integers(0, max_base))
    default = draw(decorated_entries(q, max_base, star_safe, allow_inf))
    exceptions = {
        p: draw(decorated_entries(q, max_base, star_safe, allow_inf))
        for p in EXCEPTION_PRIMES
        if draw(st.booleans())
    }
    return DimensionType(q, default, exceptions)


@st.composite
def dominating_pairs(draw, max_base=12, star_safe=False):
    """(low, high) with low <= high entrywise, for monotonicity laws."""
    low = draw(dimension_types(max_base=max_base, star_safe=star_safe))
    high_q = draw(st.integers(low.rational, max_base + 1))

    def above(entry):
        candidates = []
        for base in range(max_base + 2):
            for dec in (Decoration.MINUS, Decoration.NONE, Decoration.PLUS):
                if dec is Decoration.MINUS and base == 0:
                    continue
                if dec is Decoration.NONE and base != high_q:
                    continue
                if star_safe and dec is Decoration.PLUS and base == 0:
                    continue
                candidate = DecoratedNumber(base, dec)
                if entry <= candidate:
                    candidates.append(candidate)
        return draw(st.sampled_from(candidates))

    high = DimensionType(
        high_q, above(low.default), {p: above(e) for p, e in low.exceptions})
    return low, high
