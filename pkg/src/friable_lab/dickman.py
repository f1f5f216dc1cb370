"""Dickman rho, the saddle parameter xi, and the exponential-integral family.

rho is tabulated once by marching the delay equation t rho'(t) = -rho(t-1)
over unit intervals.  On [k, k+1] we store a Taylor polynomial about k + 1/2;
its coefficients follow from those of the previous piece by a two-term
recurrence, and the constant term is fixed by continuity at k.  The analytic
continuation of piece k is singular only at 0, 1, ..., k-1, so each series
converges geometrically with ratio at most 1/3 on the interval.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import BudgetExceeded, DomainError, OutOfTabulatedRange

__all__ = [
    "EULER_GAMMA",
    "harmonic",
    "LogReal",
    "RhoTable",
    "rho_table",
    "rho",
    "rho_value",
    "log_rho",
    "rho_mp",
    "xi",
    "xi_prime",
    "exp_integral_I",
    "rho_laplace",
    "t_correction",
    "delay_integral",
    "delay_integral_ratio",
]

_GAMMA_DIGITS = "0.57721566490153286060651209008240243104215933593992"
EULER_GAMMA = float(_GAMMA_DIGITS)

U_MAX_DEFAULT = 100.0
# float Horner on the normalized pieces; the alternating terms cost a few ulps
_FLOAT_EVAL_REL_ERR = 2e-14


def harmonic(n: int) -> Fraction:
    """H_n = 1 + 1/2 + ... + 1/n as an exact rational (n <= 10^4)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > 10**4:
        raise BudgetExceeded("exact harmonic numbers are limited to n <= 10^4")
    return _harmonic(n)


@lru_cache(maxsize=None)
def _harmonic(n: int) -> Fraction:
    # binary splitting keeps the intermediate denominators balanced
    def split(a: int, b: int) -> tuple[int, int]:
        if b - a == 1:
            return 1, a
        mid = (a + b) // 2
        p1, q1 = split(a, mid)
        p2, q2 = split(mid, b)
        return p1 * q2 + p2 * q1, q1 * q2

    if n == 0:
        return Fraction(0)
    p, q = split(1, n + 1)
    return Fraction(p, q)


@dataclass(frozen=True)
class LogReal:
    """A nonnegative real stored as exp(log_value).

    ``abs_err_budget`` bounds the absolute error of ``log_value``, i.e. the
    relative error of the represented number.
    """

    log_value: float
    sign: int = 1
    abs_err_budget: float = 0.0

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return math.exp(self.log_value) if self.log_value < 709.0 else math.inf

    def __float__(self) -> float:
        return self.value

    @classmethod
    def from_value(cls, x: float, err: float = 0.0) -> "LogReal":
        if x < 0:
            raise ValueError("LogReal holds nonnegative numbers only")
        if x == 0:
            return cls(-math.inf, 0, err)
        return cls(math.log(x), 1, err)

    def __mul__(self, other: "LogReal") -> "LogReal":
        return LogReal(
            self.log_value + other.log_value,
            self.sign * other.sign,
            self.abs_err_budget + other.abs_err_budget,
        )

    def __truediv__(self, other: "LogReal") -> "LogReal":
        if other.sign == 0:
            raise ZeroDivisionError("division by LogReal zero")
        return LogReal(
            self.log_value - other.log_value,
            self.sign,
            self.abs_err_budget + other.abs_err_budget,
        )


class RhoTable:
    """Piecewise Taylor representation of rho on [0, u_max].

    Truncation errors made on an early piece do not decay along the delay
    equation while rho itself decays superexponentially, so every piece is
    built to an absolute accuracy below rho(u_max).  Each piece is then kept
    as log(b_0) plus float ratios b_j / b_0, which is all evaluation needs.
    """

    def __init__(self, u_max: float = U_MAX_DEFAULT, dps: int | None = None, max_degree: int = 4000):
        self.u_max = float(u_max)
        # rho(u) >= exp(-u log(u log u) - u) comfortably; carry 40 digits beyond that
        floor_digits = int(self.u_max * math.log10(max(self.u_max * math.log(max(self.u_max, 3.0)), 3.0))) + 1
        self.dps = dps if dps is not None else floor_digits + 40
        n_pieces = int(math.ceil(self.u_max)) + 1
        self.degrees: list[int] = []
        with mpmath.workdps(self.dps):
            half = mpmath.mpf(1) / 2
            cutoff = mpmath.mpf(10) ** (-(self.dps - 5))
            pieces = [[mpmath.mpf(1)]]
            for k in range(1, n_pieces):
                prev = pieces[-1]
                c = mpmath.mpf(k) + half
                b = [mpmath.mpf(0)]
                j = 0
                while True:
                    a_j = prev[j] if j < len(prev) else 0
                    b.append(-(a_j + j * b[j]) / (c * (j + 1)))
                    j += 1
                    if j >= 16 and j >= len(prev) and abs(b[j]) * half**j < cutoff:
                        break
                    if j >= max_degree:
                        raise RuntimeError(f"rho piece {k} did not converge within degree {max_degree}")
                left = mpmath.polyval(prev[::-1], half)
                mh = -half
                acc = mpmath.mpf(0)
                pw = mpmath.mpf(1)
                for coef in b[1:]:
                    pw *= mh
                    acc += coef * pw
                b[0] = left - acc
                pieces.append(b)
                self.degrees.append(len(b) - 1)
            self._pieces = pieces
            self._mp_rev = [pc[::-1] for pc in pieces]
            self._log_b0 = [float(mpmath.log(pc[0])) for pc in pieces]
            self._ratios_rev = []
            for pc in pieces:
                ratios = [pc[j] / pc[0] for j in range(len(pc))]
                keep = len(ratios)
                while keep > 1 and abs(ratios[keep - 1]) * half ** (keep - 1) < mpmath.mpf(10) ** -22:
                    keep -= 1
                self._ratios_rev.append([float(r) for r in ratios[:keep]][::-1])
            values_right = [mpmath.polyval(self._mp_rev[k], half) for k in range(n_pieces)]
            floor = float(mpmath.mpf(10) ** (-(self.dps - 8)))
            # absolute floor propagated with no decay, measured against the smallest value on the piece
            self.piece_rel_error = [0.0] + [
                k * floor / float(values_right[k]) if values_right[k] > 0 else math.inf
                for k in range(1, n_pieces)
            ]
        self.certified_rel_error = max(self.piece_rel_error)

    def _piece(self, u: float) -> int:
        if u < 0 or u > self.u_max:
            raise OutOfTabulatedRange(f"u={u} outside [0, {self.u_max}]")
        k = int(math.floor(u))
        if u == k and k >= 1:
            k -= 1  # integer points belong to the piece on their left
        return min(k, len(self._pieces) - 1)

    def eval_mp(self, u) -> mpmath.mpf:
        """High-precision value at working precision ``self.dps``."""
        uf = float(u)
        if uf <= 1.0:
            if uf < 0:
                raise OutOfTabulatedRange(f"u={u} is negative")
            return mpmath.mpf(1)
        k = self._piece(uf)
        with mpmath.workdps(self.dps):
            s = mpmath.mpf(u) - (k + mpmath.mpf(1) / 2)
            return mpmath.polyval(self._mp_rev[k], s)

    def log(self, u: float) -> float:
        if u <= 1.0:
            if u < 0:
                raise OutOfTabulatedRange(f"u={u} is negative")
            return 0.0
        k = self._piece(u)
        s = u - (k + 0.5)
        acc = 0.0
        for c in self._ratios_rev[k]:
            acc = acc * s + c
        return self._log_b0[k] + math.log(acc)

    def rel_error(self, u: float) -> float:
        if u <= 1.0:
            return 0.0
        return self.piece_rel_error[self._piece(u)]

    def __call__(self, u: float) -> float:
        return math.exp(self.log(u)) if u > 1.0 else 1.0


_table: RhoTable | None = None
_table_lock = threading.Lock()


def rho_table(u_max: float = U_MAX_DEFAULT) -> RhoTable:
    global _table
    tab = _table
    if tab is not None and tab.u_max >= u_max:
        return tab
    with _table_lock:
        if _table is None or _table.u_max < u_max:
            _table = RhoTable(max(u_max, U_MAX_DEFAULT))
        return _table


def rho(u: float, tol: float = 1e-13) -> LogReal:
    """Dickman rho(u) in log form; exactly 1 on [0, 1]."""
    if tol < 1e-14:
        raise ValueError("tol must be >= 1e-14")
    if u < 0:
        raise OutOfTabulatedRange("rho is tabulated for u >= 0 only")
    if u <= 1.0:
        return LogReal(0.0, 1, 0.0)
    tab = rho_table()
    if u > tab.u_max:
        raise OutOfTabulatedRange(f"u={u} beyond tabulated range {tab.u_max}")
    err = tab.rel_error(u) + _FLOAT_EVAL_REL_ERR
    if err > tol:
        raise OutOfTabulatedRange(f"table accuracy {err:.1e} at u={u} misses tol={tol:.1e}")
    return LogReal(tab.log(u), 1, err)


def rho_value(u: float) -> float:
    """Plain float rho(u); underflows to 0 past u ~ 143, which is beyond the table."""
    return rho(u).value


def log_rho(u: float) -> float:
    return rho(u).log_value


def rho_mp(u) -> mpmath.mpf:
    return rho_table().eval_mp(u)


def xi(u: float) -> float:
    """Positive root of e^xi = 1 + u*xi, for u > 1."""
    if not u > 1.0:
        raise DomainError(f"xi is defined for u > 1, got {u}")
    lo, hi = math.log(u), 2.0 * math.log(u)

    # h(t) = (e^t - 1)/t - u is increasing in t > 0, negative at lo, >= 0 at hi
    def h(t: float) -> float:
        return math.expm1(t) / t - u

    def dh(t: float) -> float:
        if t < 1e-3:
            return 0.5 + t / 3.0 + t * t / 8.0
        return (t * math.exp(t) - math.expm1(t)) / (t * t)

    t = math.log(u * math.log(u)) if u > math.e else 0.5 * (lo + hi)
    if not lo < t < hi:
        t = 0.5 * (lo + hi)
    for _ in range(200):
        val = h(t)
        if val < 0:
            lo = t
        else:
            hi = t
        step = val / dh(t)
        new = t - step
        if not lo < new < hi:
            new = 0.5 * (lo + hi)
        if abs(new - t) <= 1e-16 * new:
            t = new
            break
        t = new
        if hi - lo <= 4e-16 * hi:
            break
    return t


def xi_prime(u: float) -> float:
    """d xi / du = xi / (u xi - u + 1), from implicit differentiation."""
    x = xi(u)
    return x / (u * x - u + 1.0)


_I_BUDGET = 200.0


def _I_mp(s) -> mpmath.mpc:
    s = mpmath.mpmathify(s)
    mag = float(abs(s))
    if mag > _I_BUDGET:
        raise BudgetExceeded(f"|s| = {mag:.1f} exceeds series budget {_I_BUDGET}")
    if mag == 0:
        return mpmath.mpf(0)
    # the largest term is about e^|s|; carry enough digits to absorb it
    dps = 25 + int(mag / math.log(10)) + 5
    with mpmath.workdps(dps):
        s = mpmath.mpmathify(s)
        term = mpmath.mpf(1)  # s^k / k!
        total = mpmath.mpf(0)
        eps = mpmath.mpf(10) ** (-dps + 5)
        k = 0
        while True:
            k += 1
            term = term * s / k
            contrib = term / k
            total += contrib
            if k > 2 * mag + 5 and abs(contrib) < eps:
                break
        return +total


def exp_integral_I(s):
    """I(s) = integral_0^s (e^v - 1)/v dv, via the entire series sum s^k/(k k!)."""
    val = _I_mp(s)
    if isinstance(s, complex):
        return complex(val)
    return float(mpmath.re(val)) if not isinstance(val, mpmath.mpc) else complex(val)


def rho_laplace(s):
    """Laplace transform of rho, via the closed form exp(gamma + I(-s))."""
    with mpmath.workdps(30):
        val = mpmath.exp(mpmath.euler + _I_mp(-mpmath.mpmathify(s)))
    if isinstance(s, complex):
        return complex(val)
    return float(val)


_BERN = (
    mpmath.mpf(1) / 2,
    mpmath.mpf(1) / 12,
    mpmath.mpf(0),
    -mpmath.mpf(1) / 720,
    mpmath.mpf(0),
    mpmath.mpf(1) / 30240,
    mpmath.mpf(0),
    -mpmath.mpf(1) / 1209600,
    mpmath.mpf(0),
    mpmath.mpf(1) / 47900160,
)


def _t_integrand(v, m: int):
    """(e^v - 1)/v * (w e^w/(e^w - 1) - 1) with w = v/m, removable points handled."""
    if abs(v) < mpmath.mpf("1e-12"):
        first = 1 + v / 2
    else:
        first = mpmath.expm1(v) / v
    w = v / m
    if abs(w) < mpmath.mpf("0.1"):
        second = mpmath.mpf(0)
        wp = w
        for c in _BERN:
            second += c * wp
            wp *= w
    else:
        second = -w / mpmath.expm1(-w) - 1
    return first * second


def t_correction(s, m: int):
    """T(s) = integral_0^s (e^v - 1)/v * ((v/m) e^{v/m}/(e^{v/m} - 1) - 1) dv.

    Integrated along the straight segment from 0 to s.
    """
    if m < 1:
        raise DomainError("m must be >= 1")
    sc = complex(s)
    lim = math.pi * m
    if abs(sc.real) > lim or abs(sc.imag) > lim:
        raise DomainError(f"s={s} outside the window |Re s|, |Im s| <= pi*m")
    if sc == 0:
        return 0j if isinstance(s, complex) else 0.0
    with mpmath.workdps(25):
        target = mpmath.mpc(sc.real, sc.imag)
        val = mpmath.quad(lambda v: _t_integrand(v, m), [0, target / 2, target])
    if isinstance(s, complex):
        return complex(val)
    return float(mpmath.re(val))


def delay_integral_ratio(u: float) -> float:
    """integral_0^1 rho(u - t) dt / rho(u), by quadrature split at integers.

    Normalizing keeps the integrand O(1); mpmath's tolerance is absolute.
    """
    tab = rho_table()
    breaks = [0.0]
    frac = u - math.floor(u)
    if 0.0 < frac < 1.0:
        breaks.append(frac)
    breaks.append(1.0)
    with mpmath.workdps(30):
        scale = tab.eval_mp(u)
        total = mpmath.quad(lambda t: tab.eval_mp(u - t) / scale, breaks)
    return float(total)


def delay_integral(u: float) -> float:
    """integral_0^1 rho(u - t) dt, which equals u * rho(u) for u >= 1."""
    return delay_integral_ratio(u) * rho_table()(u)
