"""Saddle-point quantities for m-friable counts.

x solves sum_{j<=m} x^j = n.  Around it sit lambda = sum j x^j, the amplitude
Q(x) = exp(sum x^j / j) x^{-n}, and the correction factor

    G_q(z) = exp(sum_{i>m} a_i z^i / i),   a_i = q^{-i} sum_{d | i, d <= m} d pi_q(d),

which is the ratio of the polynomial and permutation generating functions.
G_q is summed to an index I chosen so that the remainder, bounded through
a_i <= 2 q^{-ceil(i/2)}, is certified below tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .census import Params, validate_prime_power, weighted_divisor_sum
from .dickman import LogReal
from .errors import DivergenceRisk

__all__ = [
    "SaddleData",
    "RatioPrediction",
    "solve_x",
    "power_sums",
    "g_q_eval",
    "g_q_derivatives",
    "log_g_q_terms",
    "saddle_data",
    "perm_saddle_estimate",
    "ratio_prediction",
    "classify_ranges",
    "ceil_half",
]

THEOREMS = ("Thm1.1", "Thm1.2", "Thm1.3-eq16", "Thm1.3-eq15", "Thm5.1")


def ceil_half(k: int) -> int:
    return -(-k // 2)


def _geom_sum(x: float, m: int) -> float:
    return math.fsum(x**j for j in range(1, m + 1))


def solve_x(n: int, m: int) -> float:
    """Positive root of x + x^2 + ... + x^m = n (so 1 <= x <= n^(1/m))."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    if m == 1:
        return float(n)
    if m == n:
        return 1.0
    lo, hi = 1.0, float(n) ** (1.0 / m)
    # Newton on log-scale keeps steps sane when x^m is large; bracket guards it
    x = min(hi, max(lo, (n * (1.0 - 1.0 / n)) ** (1.0 / m)))
    for _ in range(200):
        f = _geom_sum(x, m) - n
        if f < 0:
            lo = x
        else:
            hi = x
        df = math.fsum(j * x ** (j - 1) for j in range(1, m + 1))
        new = x - f / df
        if not lo <= new <= hi:
            new = 0.5 * (lo + hi)
        if abs(new - x) <= 1e-16 * x or hi - lo <= 2e-16 * hi:
            x = new
            break
        x = new
    return x


def power_sums(x: float, m: int, n: int | None = None) -> tuple[float, float, LogReal]:
    """(lambda, lambda2, Q) at x.

    lambda = sum j x^j and lambda2 = sum j^2 x^j.  Q = exp(sum x^j/j) x^{-n};
    ``n`` defaults to the value sum x^j that x solves for.
    """
    if x <= 0:
        raise ValueError("x must be positive")
    powers = [x**j for j in range(1, m + 1)]
    lam = math.fsum(j * p for j, p in enumerate(powers, 1))
    lam2 = math.fsum(j * j * p for j, p in enumerate(powers, 1))
    if n is None:
        n = round(math.fsum(powers))
    log_q = math.fsum(p / j for j, p in enumerate(powers, 1)) - n * math.log(x)
    return lam, lam2, LogReal(log_q, 1, 1e-14 * (1 + abs(log_q)))


# --- G_q --------------------------------------------------------------------


def _tail_majorant(q: int, z: float, start: int, power: int) -> float:
    """Bound for sum_{i >= start} i^power * 2 q^{-ceil(i/2)} z^i, valid when z^2 < q.

    Indices are grouped in pairs (2k-1, 2k) sharing q^{-k}; successive pair
    sums shrink at least by the factor ``ratio``.  Starting the pairing at the
    odd index at or below ``start`` only loosens the bound.
    """
    if z == 0:
        return 0.0
    k0 = ceil_half(start)
    i0 = 2 * k0 - 1
    ratio = (z * z / q) * ((i0 + 3) / (i0 + 1)) ** power
    if ratio >= 1:
        return math.inf
    log_first = math.log(2.0) - k0 * math.log(q) + power * math.log(2 * k0) + i0 * math.log(z) + math.log1p(z)
    if log_first < -745:
        return 0.0
    return math.exp(log_first) / (1.0 - ratio)


def log_g_q_terms(q: int, m: int, z: float, upto: int, start: int | None = None) -> list[tuple[int, float]]:
    """(i, a_i z^i) for max(m, start-1) < i <= upto, evaluated in log form."""
    out = []
    log_q = math.log(q)
    log_z = math.log(z) if z > 0 else -math.inf
    for i in range(max(m + 1, start or 0), upto + 1):
        w = weighted_divisor_sum(q, m, i)
        if w == 0 or z == 0:
            out.append((i, 0.0))
            continue
        e = math.log(w) - i * log_q + i * log_z
        out.append((i, math.exp(e) if e > -745 else 0.0))
    return out


def _series(q: int, m: int, z: float, power: int, rel_tol: float) -> tuple[list[tuple[int, float]], float]:
    """Terms (i, a_i z^i) with a certified majorant of sum_{i>I} i^power a_i z^i.

    The cutoff I grows until that majorant falls below rel_tol times the
    partial sum of i^power a_i z^i.
    """
    if z * z >= q:
        raise DivergenceRisk(f"z^2 = {z * z:g} >= q = {q}: tail bound unavailable")
    terms: list[tuple[int, float]] = []
    cutoff = m
    while True:
        new_cutoff = max(2 * m + 2, int(cutoff * 1.5) + 4)
        terms.extend(log_g_q_terms(q, m, z, new_cutoff, start=cutoff + 1))
        cutoff = new_cutoff
        partial = math.fsum(i**power * t for i, t in terms)
        tail = _tail_majorant(q, z, cutoff + 1, power)
        if tail <= rel_tol * partial or tail < 1e-300:
            return terms, tail
        if cutoff > 200000:
            raise DivergenceRisk(f"G_q series at z={z:g}, q={q} needs more than 2e5 terms")


def g_q_eval(q: int, m: int, z: float, rel_tol: float = 1e-12) -> tuple[float, float]:
    """G_q(z) on 0 <= z < sqrt(q), with a certified bound on the truncation error.

    Returns ``(value, tail_bound)`` where |G_q(z) - value| <= tail_bound up to
    float rounding of the retained sum.
    """
    validate_prime_power(q)
    if z < 0:
        raise ValueError("z must be nonnegative")
    if z * z >= q:
        raise DivergenceRisk(f"z^2 = {z * z:g} >= q = {q}")
    if z == 0:
        return 1.0, 0.0
    # log G <= G - 1 is tiny for large m, so certify against log G itself
    terms, tail_pow0 = _series(q, m, z, 0, rel_tol)
    log_g = math.fsum(t / i for i, t in terms)
    cutoff = terms[-1][0]
    log_tail = tail_pow0 / (cutoff + 1)
    value = math.exp(log_g)
    return value, value * math.expm1(log_tail)


def g_q_derivatives(q: int, m: int, x: float, rel_tol: float = 1e-10) -> tuple[float, float]:
    """(G_q'(x), G_q''(x)) from the term-wise differentiated logarithm.

    With L = log G_q: L' = sum a_i x^{i-1} and L'' = sum (i-1) a_i x^{i-2};
    then G' = G L' and G'' = G (L'' + L'^2).
    """
    validate_prime_power(q)
    if x * x >= q:
        raise DivergenceRisk(f"x^2 = {x * x:g} >= q = {q}")
    if x == 0:
        # log G starts at z^{m+1}; only m = 1 leaves a z^2 term
        return 0.0, (weighted_divisor_sum(q, 1, 2) / q**2 if m == 1 else 0.0)
    terms, _ = _series(q, m, x, 1, rel_tol)
    d1 = math.fsum(t for _, t in terms) / x
    d2 = math.fsum((i - 1) * t for i, t in terms) / (x * x)
    g, _ = g_q_eval(q, m, x)
    return g * d1, g * (d2 + d1 * d1)


# --- data bundles -----------------------------------------------------------


@dataclass(frozen=True)
class SaddleData:
    params: Params
    x: float
    lam: float
    lam2: float
    Q: LogReal
    gq_at_x: float | None
    tail_bound: float | None

    @property
    def lambda_(self) -> float:
        return self.lam


def saddle_data(params: Params) -> SaddleData:
    x = solve_x(params.n, params.m)
    lam, lam2, Q = power_sums(x, params.m, params.n)
    if x * x < params.q:
        g, tail = g_q_eval(params.q, params.m, x)
    else:
        g, tail = None, None
    return SaddleData(params, x, lam, lam2, Q, g, tail)


def perm_saddle_estimate(n: int, m: int) -> LogReal:
    """Q(x)/sqrt(2 pi lambda), the saddle-point estimate of P(pi_n is m-friable)."""
    x = solve_x(n, m)
    lam, _, Q = power_sums(x, m, n)
    return LogReal(Q.log_value - 0.5 * math.log(2 * math.pi * lam), 1, Q.abs_err_budget)


@dataclass(frozen=True)
class RatioPrediction:
    """Predicted P(f_n m-friable)/P(pi_n m-friable) with the applicable error envelope.

    The envelope is the bracketed error expression of the theorem with its
    implied constant set to 1.
    """

    params: Params
    g_q_x: float | None
    main_term: float | None
    thm_error_envelope: float | None
    applicable_theorem: str | None
    all_applicable: tuple[str, ...] = ()
    status: str = "ok"
    notes: tuple[str, ...] = field(default_factory=tuple)


def classify_ranges(n: int, m: int, q: int) -> dict[str, bool]:
    """Which stated m-ranges contain (n, m, q); strict inequalities throughout."""
    ln_n = math.log(n)
    logq_n = ln_n / math.log(q)
    if n >= 2:
        lll = math.log(math.log(n + 1))
        upper13 = n / (ln_n * lll**3) if lll > 0 and ln_n > 0 else math.inf
    else:
        upper13 = math.inf
    return {
        "Thm1.1": m > 6 * ln_n,
        "Thm1.2": 8 * ln_n > m > 2 * logq_n,
        "Thm1.3-eq16": upper13 > m > 2 * logq_n,
        "Thm1.3-eq15": 2 * logq_n > m > logq_n,
        "Thm5.1": min(upper13, n / 3) > m > logq_n,
    }


def _envelope(thm: str, n: int, m: int, q: int, sd: SaddleData | None) -> float | None:
    u = n / m
    a = 1 if m % 2 == 0 else 0
    qpow = float(q) ** ceil_half(m + 1)
    if thm == "Thm1.1":
        return u * math.log(u + 1) / (m * qpow)
    if thm == "Thm1.2":
        return u * n ** ((1 + a) / m) / qpow
    if thm == "Thm1.3-eq16":
        return n ** ((1 + a) / m) * min(m, math.log(u)) / (m * qpow)
    if thm == "Thm1.3-eq15":
        logq_n = math.log(n) / math.log(q)
        eps = min(m / logq_n - 1, 2 - m / logq_n)
        return float(n) ** max(1 - 2 * eps, -eps)
    if thm == "Thm5.1":
        if sd is None or sd.gq_at_x is None:
            return None
        g1, g2 = g_q_derivatives(q, m, sd.x)
        return (g2 * sd.x**2 + g1 * sd.x * m) / (n * m * sd.gq_at_x)
    raise ValueError(thm)


def ratio_prediction(params: Params) -> RatioPrediction:
    n, m, q = params.n, params.m, params.q
    ranges = classify_ranges(n, m, q)
    applicable = tuple(t for t in THEOREMS if ranges[t])
    notes = []
    if ranges["Thm1.3-eq16"] and not m < n / 3:
        notes.append("m inside the Thm1.3 range but outside the n/3 cap of Thm5.1")
    x = solve_x(n, m)
    sd = saddle_data(params) if x * x < q else None
    g = sd.gq_at_x if sd is not None else None
    if not applicable:
        return RatioPrediction(params, g, None, None, None, (), "RangeNotCovered", tuple(notes))
    thm = applicable[0]
    main = 1.0 if thm in ("Thm1.1", "Thm1.2") else g
    env = _envelope(thm, n, m, q, sd)
    status = "ok" if env is not None and main is not None else "GqUnavailable"
    return RatioPrediction(params, g, main, env, thm, applicable, status, tuple(notes))
