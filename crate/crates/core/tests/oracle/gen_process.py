#!/usr/bin/env python3
"""Extended-precision reference values for the laws of the counting process.

P{N(t) = n} = x^n E^{n+1}_{nu, n nu + 1}(-x) with x = Lambda t^nu, and
P{M(t) = j} = sum_r P{S_r = j} P{N(t) = r}, where S_r is a sum of r jump
sizes drawn with probabilities lambda_i / Lambda. Composition probabilities
are exact rationals (fractions.Fraction) and the Prabhakar values come from
the series in gen_special.py. Output: ../data/process.csv and
../data/pmf_grid.csv.

    python3 gen_process.py
"""
import random
from fractions import Fraction

import mpmath as mp

from gen_special import gml, write


def mpq(v):
    v = Fraction(v)
    return mp.mpf(v.numerator) / v.denominator


def fp_pmf(nu, x, n):
    if n == 0:
        return gml(nu, 1, 1, -x)
    v = gml(nu, n * nu + 1, n + 1, -x)
    mp.mp.dps = 60
    return mp.mpf(x) ** n * v


def waiting_cdf(nu, x, r):
    v = gml(nu, r * nu + 1, r, -x)
    mp.mp.dps = 60
    return mp.mpf(x) ** r * v


def compositions(rates, j_max):
    """q[j][r] = P{S_r = j} as exact fractions."""
    rates = [Fraction(r) for r in rates]
    lam = sum(rates)
    probs = [r / lam for r in rates]
    q = [[Fraction(0)] * (j_max + 1) for _ in range(j_max + 1)]
    q[0][0] = Fraction(1)
    for j in range(1, j_max + 1):
        for r in range(1, j + 1):
            q[j][r] = sum(
                (p * q[j - i - 1][r - 1] for i, p in enumerate(probs) if i + 1 <= j),
                Fraction(0),
            )
    return q


def pmf_m(nu, rates, t, j_max):
    lam = sum(Fraction(r) for r in rates)
    mp.mp.dps = 60
    x = mpq(lam) * mpq(t) ** nu
    fp = [fp_pmf(nu, x, r) for r in range(j_max + 1)]
    q = compositions(rates, j_max)
    mp.mp.dps = 60
    out = []
    for j in range(j_max + 1):
        out.append(sum(mpq(q[j][r]) * fp[r] for r in range(j + 1)))
    return out


def fmt(v):
    return mp.nstr(v, 20, min_fixed=-30, max_fixed=30)


def main():
    rows = []
    half = mp.mpf(1) / 2
    # displayed mass of the k = 3, nu = 1/2, unit-rate pmf over j = 0..11
    for t in (1, 2):
        p = pmf_m(half, [1, 1, 1], t, 11)
        mp.mp.dps = 60
        rows.append((f"fig1_mass_t{t}", fmt(sum(p))))
    rows.append(("pmf_n_0.5_1_1_n1", fmt(fp_pmf(half, 1, 1))))
    rows.append(("waiting_cdf_0.5_1_1_k1", fmt(waiting_cdf(half, 1, 1))))
    rows.append(("waiting_cdf_0.5_1_1_k2", fmt(waiting_cdf(half, 1, 2))))

    # moments by truncated sum_j j^m p_j; the tail beyond j = 160 is far below 1e-20 here
    for name, nu, rates, t in [
        ("m3_half", half, [1, 1, 1], 1),
        ("m2_07", mp.mpf("0.7"), [Fraction(1, 2), 2], Fraction(3, 2)),
        ("m1_1", 1, [1, Fraction(1, 2)], 1),
    ]:
        p = pmf_m(nu, rates, t, 160)
        mp.mp.dps = 60
        for m in range(1, 5):
            rows.append((f"moment_{name}_m{m}", fmt(sum(mp.mpf(j) ** m * pj for j, pj in enumerate(p)))))

    # first jump of size j: rate lambda_j alone
    for name, nu, lam_j, t in [("h_half", half, Fraction(2), 1), ("h_03", mp.mpf("0.3"), Fraction(3, 4), 2)]:
        mp.mp.dps = 60
        x = mpq(lam_j) * mpq(t) ** nu
        rows.append((name, fmt(waiting_cdf(nu, x, 1))))

    # first passage of level n in renewal form, nu = 1/2, rates (1, 1), t = 1
    q = compositions([1, 1], 3)
    for n in (1, 2, 3):
        mp.mp.dps = 60
        v = sum(mpq(q[n][r]) * waiting_cdf(half, 2, r) for r in range(1, n + 1))
        rows.append((f"fpt_renewal_half_n{n}", fmt(v)))
    write("process.csv", ["name", "value"], rows)

    rng = random.Random(20240611)
    grid = []
    for case in range(8):
        k = 1 + case % 3
        nu = [mp.mpf("0.3"), half, mp.mpf("0.75"), mp.mpf(1)][case % 4]
        rates = [Fraction(rng.randint(1, 12), 4) for _ in range(k)]
        t = Fraction(rng.randint(1, 8), 4)
        p = pmf_m(nu, rates, t, 10)
        for j, pj in enumerate(p):
            grid.append(
                (
                    mp.nstr(nu, 6),
                    ";".join(str(float(r)) for r in rates),
                    str(float(t)),
                    j,
                    fmt(pj),
                )
            )
    write("pmf_grid.csv", ["nu", "rates", "t", "j", "value"], grid)


if __name__ == "__main__":
    main()
