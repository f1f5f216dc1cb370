"""Exact friable counts for permutations and monic polynomials over F_q.

Counts are Python ints; probabilities are :class:`ExactProb` with the natural
denominator (n! or q^n) kept unreduced until asked.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .census import Params, irreducible_table, validate_prime_power, weighted_divisor_sum
from .errors import BudgetExceeded, NonPrimeField

__all__ = [
    "ExactProb",
    "FriableProfile",
    "psi_perm",
    "psi_perm_row",
    "psi_perm_oracle",
    "psi_poly",
    "psi_poly_row",
    "psi_poly_product",
    "psi_poly_oracle",
    "hildebrand_rhs",
    "friable_prob",
    "perm_prob",
    "poly_prob",
    "expected_largest",
    "expectation_gap",
    "expectation_gap_termwise",
]

PERM_ORACLE_MAX_N = 30
POLY_ORACLE_BUDGET = 10**6


@dataclass(frozen=True, eq=False)
class ExactProb:
    """numerator / denominator, not reduced unless :meth:`reduced` is called."""

    numerator: int
    denominator: int

    def __post_init__(self) -> None:
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def reduced(self) -> "ExactProb":
        g = math.gcd(self.numerator, self.denominator)
        return ExactProb(self.numerator // g, self.denominator // g)

    def __float__(self) -> float:
        return float(self.as_fraction())

    def log(self) -> float:
        """Natural log, safe for values far below the float range."""
        if self.numerator <= 0:
            return -math.inf
        return math.log(self.numerator) - math.log(self.denominator)

    def _cmp(self, other) -> int:
        if isinstance(other, ExactProb):
            a = self.numerator * other.denominator
            b = other.numerator * self.denominator
        else:
            other = Fraction(other)
            a = self.numerator * other.denominator
            b = other.numerator * self.denominator
        return (a > b) - (a < b)

    def __eq__(self, other) -> bool:
        try:
            return self._cmp(other) == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.as_fraction())

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __repr__(self) -> str:
        return f"ExactProb({self.numerator}/{self.denominator})"


@dataclass(frozen=True)
class FriableProfile:
    kind: str
    params: Params
    psi: int
    total: int
    prob: ExactProb


# --- permutations -----------------------------------------------------------

_perm_rows: dict[int, list[int]] = {}
_perm_lock = threading.Lock()


def psi_perm_row(n_max: int, m: int) -> list[int]:
    """[psi_pi(0, m), ..., psi_pi(n_max, m)] via the cycle-length recurrence.

    psi(n) = sum_{i=1}^{min(m, n)} (n-1)!/(n-i)! * psi(n-i), psi(0) = 1.
    """
    if m < 1 or n_max < 0:
        raise ValueError("need m >= 1 and n >= 0")
    row = _perm_rows.get(m)
    if row is not None and len(row) > n_max:
        return row[: n_max + 1]
    with _perm_lock:
        row = list(_perm_rows.get(m, [1]))
        for n in range(len(row), n_max + 1):
            total = 0
            falling = 1  # (n-1)!/(n-i)!
            for i in range(1, min(m, n) + 1):
                total += falling * row[n - i]
                falling *= n - i
            row.append(total)
        _perm_rows[m] = row
    return row[: n_max + 1]


def psi_perm(n: int, m: int) -> int:
    """Number of permutations of n letters with every cycle of length <= m."""
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    return psi_perm_row(n, min(m, max(n, 1)))[n]


def _partitions(n: int, largest: int):
    """Partitions of n into parts <= largest, as {part: multiplicity} dicts."""
    if n == 0:
        yield {}
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            out = dict(rest)
            out[k] = out.get(k, 0) + 1
            yield out


def psi_perm_oracle(n: int, m: int) -> int:
    """Brute-force count: sum of class sizes n!/prod(k^c_k c_k!) over partitions."""
    if n > PERM_ORACLE_MAX_N:
        raise BudgetExceeded(f"partition oracle limited to n <= {PERM_ORACLE_MAX_N}")
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    nf = math.factorial(n)
    total = 0
    for part in _partitions(n, m):
        denom = 1
        for k, c in part.items():
            denom *= k**c * math.factorial(c)
        total += nf // denom
    return total


# --- polynomials ------------------------------------------------------------

_poly_rows: dict[tuple[int, int], list[int]] = {}
_poly_lock = threading.Lock()


def psi_poly_row(q: int, n_max: int, m: int) -> list[int]:
    """[psi_q(0, m), ..., psi_q(n_max, m)] via the polynomial Hildebrand identity.

    n * psi(n) = sum_{k=1}^{n} psi(n-k) * W(k), W(k) = sum_{d | k, d <= m} d pi_q(d).
    """
    validate_prime_power(q)
    if m < 1 or n_max < 0:
        raise ValueError("need m >= 1 and n >= 0")
    key = (q, m)
    row = _poly_rows.get(key)
    if row is not None and len(row) > n_max:
        return row[: n_max + 1]
    with _poly_lock:
        row = list(_poly_rows.get(key, [1]))
        weights = [0] + [weighted_divisor_sum(q, m, k) for k in range(1, n_max + 1)]
        for n in range(len(row), n_max + 1):
            s = sum(row[n - k] * weights[k] for k in range(1, n + 1))
            psi, rem = divmod(s, n)
            assert rem == 0, f"Hildebrand sum not divisible by n={n} (q={q}, m={m})"
            row.append(psi)
        _poly_rows[key] = row
    return row[: n_max + 1]


def psi_poly(q: int, n: int, m: int) -> int:
    """Number of m-friable monic polynomials of degree n over F_q."""
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    return psi_poly_row(q, n, min(m, max(n, 1)))[n]


def psi_poly_product(q: int, n_max: int, m: int) -> list[int]:
    """psi_q(., m) from the Euler product prod_{d<=m} (1 - t^d)^{-pi_q(d)}.

    Independent of :func:`psi_poly_row`; used to re-check the Hildebrand
    identity from values that did not come out of it.
    """
    validate_prime_power(q)
    tab = irreducible_table(q, max(m, 1))
    coeffs = [1] + [0] * n_max
    for d in range(1, min(m, n_max) + 1):
        p = tab[d]
        # (1 - t^d)^{-p} = sum_k C(p+k-1, k) t^{dk}
        series = [1]
        for k in range(1, n_max // d + 1):
            series.append(series[-1] * (p + k - 1) // k)
        new = [0] * (n_max + 1)
        for i, c in enumerate(coeffs):
            if not c:
                continue
            for k, b in enumerate(series):
                j = i + d * k
                if j > n_max:
                    break
                new[j] += c * b
        coeffs = new
    return coeffs


def hildebrand_rhs(q: int, n: int, m: int, psi_values: list[int]) -> int:
    """sum over prime powers P^k, deg P <= m, deg P^k <= n of psi(n - deg P^k) * deg P."""
    tab = irreducible_table(q, max(1, min(m, n)))
    total = 0
    for d in range(1, min(m, n) + 1):
        inner = sum(psi_values[n - k * d] for k in range(1, n // d + 1))
        total += d * tab[d] * inner
    return total


def _poly_divmod(num: list[int], den: list[int], p: int) -> tuple[list[int], list[int]]:
    """Division of coefficient lists (lowest degree first) over F_p; den monic."""
    num = list(num)
    dd = len(den) - 1
    quot = [0] * max(len(num) - dd, 1)
    for i in range(len(num) - 1 - dd, -1, -1):
        c = num[i + dd] % p
        if c:
            quot[i] = c
            for j in range(dd + 1):
                num[i + j] = (num[i + j] - c * den[j]) % p
    rem = num[:dd]
    while rem and rem[-1] == 0:
        rem.pop()
    return quot, rem


def _monic_polys(p: int, d: int):
    for tail in product(range(p), repeat=d):
        yield list(tail) + [1]


def psi_poly_oracle(q: int, n: int, m: int) -> int:
    """Enumerate all monic degree-n polynomials over F_q (q prime) and factor by
    trial division against an enumerated list of irreducibles."""
    p, k = validate_prime_power(q)
    if k != 1:
        raise NonPrimeField(f"enumeration oracle needs a prime field, got q={q}")
    if q**n > POLY_ORACLE_BUDGET:
        raise BudgetExceeded(f"q^n = {q}^{n} exceeds {POLY_ORACLE_BUDGET}")
    if n == 0:
        return 1
    # irreducibles up to degree n//2 suffice for trial division
    irreducibles: list[list[int]] = []
    for d in range(1, n // 2 + 1):
        for f in _monic_polys(p, d):
            if all(_poly_divmod(f, g, p)[1] for g in irreducibles if 2 * (len(g) - 1) <= d):
                irreducibles.append(f)
    count = 0
    for f in _monic_polys(p, n):
        largest = 0
        for g in irreducibles:
            dg = len(g) - 1
            if 2 * dg > len(f) - 1:
                break
            while len(f) - 1 >= dg:
                quot, rem = _poly_divmod(f, g, p)
                if rem:
                    break
                f = quot
                largest = max(largest, dg)
        # whatever is left has no factor of degree <= deg/2, so it is irreducible
        largest = max(largest, len(f) - 1)
        if largest <= m:
            count += 1
    return count


# --- probabilities and expectations -----------------------------------------


def perm_prob(n: int, m: int) -> ExactProb:
    return ExactProb(psi_perm(n, m), math.factorial(n))


def poly_prob(q: int, n: int, m: int) -> ExactProb:
    return ExactProb(psi_poly(q, n, m), q**n)


def friable_prob(kind: str, params: Params) -> FriableProfile:
    if kind == "perm":
        psi, total = psi_perm(params.n, params.m), math.factorial(params.n)
    elif kind == "poly":
        psi, total = psi_poly(params.q, params.n, params.m), params.q**params.n
    else:
        raise ValueError(f"kind must be 'perm' or 'poly', got {kind!r}")
    return FriableProfile(kind, params, psi, total, ExactProb(psi, total))


def _friable_column(kind: str, n: int, q: int | None) -> list[int]:
    """[psi(n, 1), ..., psi(n, n)]."""
    if kind == "perm":
        return [psi_perm(n, m) for m in range(1, n + 1)]
    if kind == "poly":
        if q is None:
            raise ValueError("q is required for kind='poly'")
        return [psi_poly(q, n, m) for m in range(1, n + 1)]
    raise ValueError(f"kind must be 'perm' or 'poly', got {kind!r}")


def expected_largest(kind: str, n: int, q: int | None = None) -> Fraction:
    """E of the largest cycle length / largest irreducible factor degree.

    Uses E X = sum_{i >= 0} P(X > i) with P(X <= i) the i-friable probability.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    total = math.factorial(n) if kind == "perm" else q**n  # type: ignore[operator]
    column = _friable_column(kind, n, q)
    # i = 0 contributes 1; i = n contributes 0
    tail = sum(total - psi for psi in column[:-1])
    return Fraction(total + tail, total)


def expectation_gap_termwise(n: int, q: int) -> Fraction:
    """sum_{m=1}^{n} (P(f_n m-friable) - P(pi_n m-friable))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    nf, qn = math.factorial(n), q**n
    return sum(
        (Fraction(psi_poly(q, n, m), qn) - Fraction(psi_perm(n, m), nf) for m in range(1, n + 1)),
        Fraction(0),
    )


def expectation_gap(n: int, q: int) -> Fraction:
    """E L(pi_n) - E L_q(f_n), which is >= 0.

    Computed term-wise; :func:`expectation_gap_termwise` and the difference of
    :func:`expected_largest` values must agree exactly.
    """
    validate_prime_power(q)
    return expectation_gap_termwise(n, q)
