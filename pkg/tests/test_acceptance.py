"""The thirteen acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary, and also when this file is run directly as a script.
"""

import math
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from friable_lab import lab
from friable_lab.census import count_irreducibles
from friable_lab.dickman import delay_integral, delay_integral_ratio, rho_value, xi
from friable_lab.exact import (
    expectation_gap,
    poly_prob,
    psi_perm,
    psi_perm_oracle,
    psi_poly,
    psi_poly_oracle,
)


def record(k: int, title: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE_LINES.append(f"criterion {k}: {'PASS' if ok else 'FAIL'} {title}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {k} failed: {detail}"


def test_01_exactness():
    t0 = time.perf_counter()
    bad = [(n, m) for n in range(1, 21) for m in range(1, n + 1) if psi_perm(n, m) != psi_perm_oracle(n, m)]
    for q, n_max in ((2, 10), (3, 7), (5, 5)):
        bad += [(q, n, m) for n in range(1, n_max + 1) for m in range(1, n + 1) if psi_poly(q, n, m) != psi_poly_oracle(q, n, m)]
    elapsed = time.perf_counter() - t0
    record(1, "recurrences equal brute-force oracles", not bad and elapsed < 60, f"{len(bad)} mismatches, {elapsed:.1f} s")


def test_02_counterexample():
    vals = (psi_poly(3, 4, 2), psi_poly(3, 4, 1), count_irreducibles(3, 2), psi_poly(3, 2, 2))
    oracle = (psi_poly_oracle(3, 4, 2), psi_poly_oracle(3, 4, 1), psi_poly_oracle(3, 2, 2))
    lhs, rhs = vals[0] - vals[1], vals[2] * vals[3]
    ok = vals == (39, 15, 3, 9) and oracle == (39, 15, 9) and (lhs, rhs) == (24, 27)
    record(2, "counterexample 24 != 27", ok, f"{lhs} vs {rhs}")


def test_03_hildebrand_identity():
    t0 = time.perf_counter()
    r = lab.suite_counterexample(q_list=(2, 3, 4, 8, 9), n_max=40)
    elapsed = time.perf_counter() - t0
    ok = r.passed and r.details["identity_points"] == 5 * 820 and elapsed < 120
    record(3, "polynomial Hildebrand identity, exact", ok, f"{r.details['identity_points']} points, {elapsed:.1f} s")


def test_04_positivity():
    r = lab.suite_positivity()
    ok = r.passed and math.isfinite(r.empirical_constant)
    record(4, "P_f - P_pi >= 0 on the default grid", ok, f"normalized sup {r.empirical_constant:.4g} at {r.worst_case[0]}")


def test_05_ppt_endpoint():
    bad = []
    for q in (2, 3):
        for n in range(2, 31):
            if 1 - poly_prob(q, n, n - 1).as_fraction() != Fraction(count_irreducibles(q, n), q**n):
                bad.append((q, n))
    record(5, "PPT endpoint, exact", not bad, f"{len(bad)} mismatches")


def test_06_dickman_accuracy():
    e2 = abs(rho_value(2.0) - (1 - math.log(2)))
    delay = max(abs(delay_integral(u) - u * rho_value(u)) for u in (1.5, 2.5, 5, 10, 20))
    delay_rel = max(abs(delay_integral_ratio(u) / u - 1) for u in (1.5, 2.5, 5, 10, 20))
    vals = [rho_value(k / 100) for k in range(0, 3001)]
    mono = all(b <= a for a, b in zip(vals, vals[1:]))
    ok = e2 <= 1e-12 and delay <= 1e-10 and mono
    record(6, "Dickman rho accuracy", ok, f"|rho(2)-(1-ln2)|={e2:.1e}, delay residual {delay:.1e} (relative {delay_rel:.1e}), monotone={mono}")


def test_07_xi_bounds():
    worst = 0.0
    ok = True
    for u in (1.01, 2, 10, 100, 1e4):
        s = xi(u)
        ok &= math.log(u) < s <= 2 * math.log(u)
        res = abs(math.expm1(s) - u * s) / (1 + u * s)
        worst = max(worst, res)
    ok &= worst <= 1e-10
    record(7, "xi root bounds and residual", ok, f"max scaled residual {worst:.1e}")


def test_08_rho_and_I():
    r5, r20 = lab.rho_and_i_residual(5.0), lab.rho_and_i_residual(20.0)
    ok = abs(r20) < abs(r5) and abs(r20) <= 0.1
    record(8, "rho vs Laplace-side saddle, residual shrinks", ok, f"u=5: {r5:.4g}, u=20: {r20:.4g}")


def test_09_saddle_trend():
    errs = lab.saddle_trend(10, (3, 5, 8, 10))
    seq = [errs[u] for u in (3, 5, 8, 10)]
    ok = all(b < a for a, b in zip(seq, seq[1:]))
    anchors = [0.02243, 0.01441, 0.00898, 0.00723]
    ok &= all(abs(a - b) < 5e-5 for a, b in zip(seq, anchors))
    record(9, "saddle estimate error decreases in u (m=10)", ok, ", ".join(f"{e:.5f}" for e in seq))


def test_10_delta():
    r = lab.suite_delta(60)
    ok = r.passed and r.empirical_constant > 0 and r.details["max_identity_gap"] <= 1e-8
    record(10, "Delta > 0, Delta = S1 + S2", ok, f"inf Delta m/(u log u) = {r.empirical_constant:.4g}, max gap {r.details['max_identity_gap']:.1e}")


def test_11_gap():
    r = lab.suite_gap((2, 3, 5), 40)
    lo, hi = r.details["band"]
    ok = expectation_gap(2, 2) == Fraction(1, 4) and r.passed and 0 < lo <= hi < math.inf
    record(11, "expectation gap positive with finite band", ok, f"gap(2,2)=1/4, band [{lo:.4g}, {hi:.4g}]")


def test_12_golomb():
    t0 = time.perf_counter()
    v = lab.golomb_dickman_estimate(400, exact=False)
    elapsed = time.perf_counter() - t0
    ok = abs(v - 0.624329) <= 0.01 and elapsed < 120
    record(12, "Golomb-Dickman at n=400", ok, f"{v:.6f} in {elapsed:.2f} s")


def test_13_ford_ghs():
    r = lab.suite_envelopes()
    d = r.details
    record(13, "Ford and GHS bounds on the grid", r.passed, f"min Ford log-slack {d['ford_min_log_slack'][1]:.3g}, min GHS margin {d['ghs_min_margin'][1]:.3g}")


if __name__ == "__main__":
    import sys

    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                pass
    for line in ACCEPTANCE_LINES:
        print(line)
    sys.exit(0 if all(" PASS " in line for line in ACCEPTANCE_LINES) else 1)
