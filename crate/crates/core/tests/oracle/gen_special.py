#!/usr/bin/env python3
"""Extended-precision reference values for the special-function tests.

The random grid stays where double precision can deliver 1e-12: negative
arguments with alpha > 1 (or Wright order >= 0) are kept small because the
alternating series is the only route there.

Every value is a direct series summation in mpmath, repeated at twice the
working precision until the two agree to 30 digits. Output goes to
../data/*.csv and is checked in; the Rust tests only read those files.

    python3 gen_special.py
"""
import csv
import os
import random

import mpmath as mp

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")


def _gml_series(a, b, g, z, dps):
    mp.mp.dps = dps
    a, b, g, z = mp.mpf(a), mp.mpf(b), mp.mpf(g), mp.mpf(z)
    eps = mp.mpf(10) ** (-dps + 5)
    s = mp.mpf(0)
    r = 0
    poch = mp.mpf(1)
    small = 0
    while True:
        term = poch * z**r / mp.factorial(r) * mp.rgamma(a * r + b)
        s += term
        poch *= g + r
        r += 1
        small = small + 1 if abs(term) < eps * max(1, abs(s)) else 0
        if small >= 5 and r > abs(z) ** (1 / a) + 5:
            return s


def _wright_series(lam, mu, x, dps):
    mp.mp.dps = dps
    lam, mu, x = mp.mpf(lam), mp.mpf(mu), mp.mpf(x)
    eps = mp.mpf(10) ** (-dps + 5)
    s = mp.mpf(0)
    k = 0
    small = 0
    while True:
        arg = lam * k + mu
        base = x**k / mp.factorial(k)
        s += base * mp.rgamma(arg)
        env = abs(base) * (mp.rgamma(arg) if arg > 0 else mp.gamma(1 - arg) / mp.pi)
        k += 1
        small = small + 1 if abs(env) < eps * max(1, abs(s)) else 0
        if small >= 5:
            return s


def _stable(f, *args, dps=50):
    while True:
        v1 = f(*args, dps)
        v2 = f(*args, 2 * dps)
        mp.mp.dps = 2 * dps
        if abs(v1 - v2) < mp.mpf(10) ** -30:
            return v2
        dps *= 2


def gml(a, b, g, z):
    return _stable(_gml_series, a, b, g, z)


def wright(lam, mu, x):
    return _stable(_wright_series, lam, mu, x)



def honesty_grid(rng):
    rows = []
    # two-parameter Mittag-Leffler
    while len([r for r in rows if r[0] == "ml"]) < 400:
        a = rng.uniform(0.3, 1.5)
        b = rng.uniform(0.2, 3.0)
        if a <= 1.0:
            zmax = min(30.0, 40.0 ** a)
            z = rng.uniform(-zmax, zmax * 0.5)
        else:
            z = rng.uniform(-4.0, 6.0)
        rows.append(("ml", a, b, 1.0, z))
    while len([r for r in rows if r[0] == "gml"]) < 300:
        a = rng.uniform(0.3, 1.0)
        b = rng.uniform(0.2, 3.0)
        g = rng.uniform(0.5, 5.0)
        if a <= 1.0:
            zmax = min(20.0, 30.0 ** a)
            z = rng.uniform(-zmax, zmax * 0.3)
        else:
            z = rng.uniform(-6.0, 4.0)
        rows.append(("gml", a, b, g, z))
    # M-Wright case W_{-ν,1-ν}(-u), the inverse-stable density kernel
    while len([r for r in rows if r[0] == "mwright"]) < 100:
        nu = rng.uniform(0.1, 0.9)
        u = rng.uniform(0.0, min(20.0, 300.0 ** (1 - nu)))
        rows.append(("mwright", -nu, 1.0 - nu, 0.0, -u))
    while len([r for r in rows if r[0] == "wright"]) < 200:
        lam = rng.uniform(-0.9, 0.6)
        mu = rng.uniform(0.1, 2.5)
        if lam < 0.0:
            xmax = min(20.0, 30.0 ** (1 + lam))
            x = rng.uniform(-xmax, xmax * 0.3)
        else:
            x = rng.uniform(-4.0, 6.0)
        rows.append(("wright", lam, mu, 0.0, x))
    out = []
    for kind, a, b, g, z in rows:
        if kind in ("wright", "mwright"):
            v = wright(a, b, z)
        else:
            v = gml(a, b, g, z)
        out.append((kind, repr(a), repr(b), repr(g), repr(z), mp.nstr(v, 25)))
    return out


def anchors():
    mp.mp.dps = 50
    e = mp.e
    vals = {
        "ml_0.5_1_m1": gml(0.5, 1, 1, -1),
        "ml_0.5_0.5_m1": gml(0.5, 0.5, 1, -1),
        "one_minus_ml_0.5_1_m1": 1 - gml(0.5, 1, 1, -1),
        "gml_0.5_1.5_2_m1": gml(0.5, 1.5, 2, -1),
        "gml_1_1_2_1": gml(1, 1, 2, 1),
        "wright_m0.5_0.5_m1": wright(-0.5, 0.5, -1),
        "ml_0.25_1_m1": gml(0.25, 1, 1, -1),
        "recip_gamma_1.5": 1 / mp.gamma(mp.mpf(1.5)),
        "two_over_gamma_1.5": 2 / mp.gamma(mp.mpf(1.5)),
        "e_sq_minus_1": mp.exp(e - 1),
    }
    return [(k, mp.nstr(v, 25)) for k, v in vals.items()]


def erfcx_grid():
    mp.mp.dps = 50
    rows = []
    for i in range(50):
        x = mp.mpf(i) * mp.mpf(10) / 49
        rows.append((repr(float(x)), mp.nstr(mp.exp(x * x) * mp.erfc(x), 25)))
    return rows


def write(name, header, rows):
    with open(os.path.join(OUT, name), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def main():
    rng = random.Random(20261016)
    write("anchors.csv", ["name", "value"], anchors())
    write("erfcx.csv", ["x", "value"], erfcx_grid())
    write("honesty_grid.csv", ["kind", "alpha", "beta", "gamma", "z", "value"], honesty_grid(rng))


if __name__ == "__main__":
    main()
