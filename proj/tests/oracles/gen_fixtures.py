#!/usr/bin/env python3
"""Regenerates fixtures.hpp from scipy/mpmath reference computations.

    python3 tests/oracles/gen_fixtures.py > tests/oracles/fixtures.hpp
"""

import mpmath as mp
import numpy as np
from scipy import stats

mp.mp.dps = 50

# ---------------------------------------------------------------------------
# Five-record dataset: (x, y, z, e)
RECORDS = [
    (0.0, 0.0, 0, 0),
    (0.0, 0.0, 0, 1),
    (0.35, 0.0, 1, 0),
    (0.0, 0.42, 0, 1),
    (0.6, 0.25, 1, 1),
]

TOX_POINTS = [
    (0.05, 0.3, 0.25, 1.0),
    (0.01, 0.5, 0.2, 0.1),
    (1e-4, 0.1, 0.6, 4.0),
    (0.2, 0.45, 0.35, 0.5),
]

EFF_POINTS = [
    (-1.0, 0.5, 0.7, 1.2, 0.0, 0.0),
    (-2.5, 2.0, 0.3, 0.05, 1.5, -0.5),
    (0.4, 0.01, 3.0, 2.0, -1.0, 2.0),
]


def log_phi_clamped(t):
    p = stats.norm.cdf(t)
    p = min(max(p, 1e-12), 1 - 1e-12)
    return np.log(p)


def log_post_tox(r00, r10, r01, a3):
    a0 = stats.norm.ppf(r00)
    a1 = stats.norm.ppf(r10) - a0
    a2 = stats.norm.ppf(r01) - a0
    ll = 0.0
    for x, y, z, _ in RECORDS:
        eta = a0 + a1 * x + a2 * y + a3 * x * y
        ll += log_phi_clamped(eta if z else -eta)
    m = min(r10, r01)
    lp = (stats.beta.logpdf(r01, 1, 1) + stats.beta.logpdf(r10, 1, 1) + stats.beta.logpdf(r00 / m, 1, 1)
          - np.log(m) + stats.gamma.logpdf(a3, 0.1, scale=1 / 0.1))
    return ll + lp


def log_post_eff(b):
    ll = 0.0
    for x, y, _, e in RECORDS:
        eta = b[0] + b[1] * x + b[2] * y + b[3] * x * y + b[4] * x * x + b[5] * y * y
        ll += log_phi_clamped(eta if e else -eta)
    lp = (stats.norm.logpdf(b[0], 0, 10) + stats.norm.logpdf(b[4], 0, 10) + stats.norm.logpdf(b[5], 0, 10)
          + sum(stats.gamma.logpdf(b[i], 0.1, scale=10) for i in (1, 2, 3)))
    return ll + lp


# ---------------------------------------------------------------------------
# Stage-2 safety: P(Theta > 0.43), Theta ~ beta(0.5 + s, 0.5 + n - s)
SAFETY_PAIRS = [(0, 0), (1, 0), (1, 1), (2, 1), (5, 2), (10, 4), (12, 7), (20, 8), (30, 5), (30, 20), (45, 20),
                (60, 25), (60, 40)]


def overdose(n, s):
    return float(mp.betainc(0.5 + s, 0.5 + n - s, 0.43, 1, regularized=True))


# ---------------------------------------------------------------------------
# Max of the true efficacy probability along the true MTD contour, dense scan.
TOX = {1: (1e-7, 0.3, 0.3, 2.0), 2: (1e-5, 0.005, 0.01, 9.0)}
EFF = {
    (1, 1): (-6.3, -5.51, 2, 4.3, 10), (1, 2): (-6.3, -5.51, 4.3, 2, 10), (1, 3): (-7.3, -6.5, 6.17, 5.5, 0),
    (1, 4): (-4.8, -4, 1.25, 1.25, 12), (2, 1): (-2.8, -2, 0.05, 1.57, 1), (2, 2): (-2.8, -2, 1.55, 0.05, 1),
    (2, 3): (-6.6, -5.8, 4.63, 4.73, 0), (2, 4): (-7.28, -6.49, 0.2, 0.2, 26),
}


def true_curve_max(t, e, h):
    r00, r10, r01, a3 = TOX[t]
    a0 = stats.norm.ppf(r00)
    a1 = stats.norm.ppf(r10) - a0
    a2 = stats.norm.ppf(r01) - a0
    k = stats.norm.ppf(0.33) - a0
    lo = max(0.0, (k - a2) / (a1 + a3))
    hi = min(1.0, k / a1)
    xs = np.linspace(lo, hi, 200001)
    ys = np.clip((k - a1 * xs) / (a2 + a3 * xs), 0, 1)
    b0h0, b0h1, b1, b2, b3 = EFF[(t, e)]
    b0 = b0h0 if h == 0 else b0h1
    return float(np.max(stats.norm.cdf(b0 + b1 * xs + b2 * ys + b3 * xs * ys))), lo


QUANTILE_PROBS = [1e-300, 1e-100, 1e-20, 1e-10, 1e-7, 1e-5, 0.001, 0.02425, 0.05, 0.2, 0.33, 0.425, 0.5, 0.575,
                  0.8, 0.95, 0.97575, 0.999, 1 - 1e-7, 1 - 1e-12]


def main():
    out = []
    w = out.append
    w("// Generated by tests/oracles/gen_fixtures.py. Do not edit.")
    w("#pragma once\n\n#include <array>\n\nnamespace fixtures {\n")
    w("struct Rec { double x, y; int z, e; };")
    w("inline constexpr std::array<Rec, %d> kRecords = {{" % len(RECORDS))
    for x, y, z, e in RECORDS:
        w("    {%r, %r, %d, %d}," % (x, y, z, e))
    w("}};\n")
    w("struct ToxCase { double rho00, rho10, rho01, alpha3, log_post; };")
    w("inline constexpr std::array<ToxCase, %d> kToxLogPost = {{" % len(TOX_POINTS))
    for p in TOX_POINTS:
        w("    {%r, %r, %r, %r, %.17g}," % (*p, log_post_tox(*p)))
    w("}};\n")
    w("struct EffCase { double beta[6]; double log_post; };")
    w("inline constexpr std::array<EffCase, %d> kEffLogPost = {{" % len(EFF_POINTS))
    for b in EFF_POINTS:
        w("    {{%s}, %.17g}," % (", ".join(repr(float(v)) for v in b), log_post_eff(b)))
    w("}};\n")
    w("struct SafetyCase { int n, s; double prob; };")
    w("inline constexpr std::array<SafetyCase, %d> kStage2Overdose = {{" % len(SAFETY_PAIRS))
    for n, s in SAFETY_PAIRS:
        w("    {%d, %d, %.17g}," % (n, s, overdose(n, s)))
    w("}};\n")
    w("struct QuantileCase { double p, q; };")
    w("inline constexpr std::array<QuantileCase, %d> kNormalQuantile = {{" % len(QUANTILE_PROBS))
    for p in QUANTILE_PROBS:
        pm = mp.mpf(p)
        q = mp.findroot(lambda t: mp.log(mp.ncdf(t)) - mp.log(pm), float(stats.norm.ppf(p)))
        w("    {%.17g, %.17g}," % (p, float(q)))
    w("}};\n")
    w("struct CurveMaxCase { int tox, eff, h1; double max_pi_e; double x_lo; };")
    cases = [(t, e, h) for t in (1, 2) for e in (1, 2, 3, 4) for h in (0, 1)]
    w("inline constexpr std::array<CurveMaxCase, %d> kTrueCurveMax = {{" % len(cases))
    for t, e, h in cases:
        m, lo = true_curve_max(t, e, h)
        w("    {%d, %d, %d, %.17g, %.17g}," % (t, e, h, m, lo))
    w("}};\n")
    w("}  // namespace fixtures")
    print("\n".join(out))


if __name__ == "__main__":
    main()
