"""Monic irreducible polynomial counts over F_q.

pi_q(d) comes from Moebius inversion of the degree identity
sum_{d | N} d * pi_q(d) = q^N.  Everything here is exact integer arithmetic.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NotAPrimePower

__all__ = [
    "Params",
    "IrreducibleTable",
    "validate_prime_power",
    "mobius",
    "divisors",
    "count_irreducibles",
    "irreducible_table",
    "weighted_divisor_sum",
    "a_coefficient",
]

Q_MAX_DEFAULT = 2**20


def _factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; fine for the desk-scale inputs used here."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def validate_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k`` and ``p`` prime.

    >>> validate_prime_power(9)
    (3, 2)
    """
    if isinstance(q, bool) or not isinstance(q, int):
        raise NotAPrimePower(f"q must be an integer, got {q!r}")
    if q < 2:
        raise NotAPrimePower(f"q must be >= 2, got {q}")
    fac = _factorize(q)
    if len(fac) != 1:
        raise NotAPrimePower(f"{q} is not a prime power")
    ((p, k),) = fac.items()
    return p, k


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    fac = _factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@dataclass(frozen=True)
class Params:
    """A validated (q, n, m) triple with 1 <= m <= n."""

    q: int
    n: int
    m: int
    p: int = field(init=False, repr=False, compare=False)
    k: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        p, k = validate_prime_power(self.q)
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 1 <= self.m <= self.n:
            raise ValueError(f"m must lie in [1, n], got m={self.m}, n={self.n}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k", k)

    @property
    def u(self) -> float:
        return self.n / self.m


def count_irreducibles(q: int, d: int) -> int:
    """Number of monic irreducible polynomials of degree ``d`` over F_q."""
    validate_prime_power(q)
    if d < 1:
        raise ValueError("degree must be >= 1")
    return irreducible_table(q, d).counts[d]


@dataclass(frozen=True)
class IrreducibleTable:
    q: int
    max_degree: int
    counts: tuple[int, ...]  # counts[0] is a placeholder 0

    def __getitem__(self, d: int) -> int:
        return self.counts[d]


_tables: dict[int, IrreducibleTable] = {}
_tables_lock = threading.Lock()


def _build_table(q: int, max_degree: int) -> IrreducibleTable:
    counts = [0] * (max_degree + 1)
    for d in range(1, max_degree + 1):
        total = 0
        for e in divisors(d):
            mu = mobius(e)
            if mu:
                total += mu * q ** (d // e)
        assert total % d == 0, f"Moebius sum not divisible by d={d} (q={q})"
        counts[d] = total // d
    return IrreducibleTable(q, max_degree, tuple(counts))


def irreducible_table(q: int, max_degree: int) -> IrreducibleTable:
    """Immutable table of pi_q(d) for 1 <= d <= max_degree, memoized per q.

    A request for a larger degree replaces the cached table for that q; older
    tables stay valid for anyone still holding them.
    """
    validate_prime_power(q)
    tab = _tables.get(q)
    if tab is not None and tab.max_degree >= max_degree:
        return tab
    with _tables_lock:
        tab = _tables.get(q)
        if tab is None or tab.max_degree < max_degree:
            tab = _build_table(q, max(max_degree, 2 * (tab.max_degree if tab else 0), 8))
            _tables[q] = tab
    return tab


def weighted_divisor_sum(q: int, m: int, i: int) -> int:
    """sum of d * pi_q(d) over divisors d of i with d <= m.

    This is the integer numerator of a_i = a_{i,m,q}; a_i = result / q**i.
    """
    if i < 1 or m < 1:
        raise ValueError("need i >= 1 and m >= 1")
    top = min(m, i)
    tab = irreducible_table(q, top)
    return sum(d * tab[d] for d in divisors(i) if d <= m)


def a_coefficient(q: int, m: int, i: int) -> Fraction:
    """a_i as an exact rational."""
    return Fraction(weighted_divisor_sum(q, m, i), q**i)
