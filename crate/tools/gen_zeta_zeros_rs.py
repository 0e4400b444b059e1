#!/usr/bin/env python3
"""Extend a table of zeta zero ordinates past its last entry.

Sign changes of Hardy's Z function are bracketed between Gram points with a
double-precision Riemann-Siegel evaluation, each root is polished with
mpmath.siegelz (dps=20), and the running count is checked at every good
Gram point g_n (where (-1)^n Z(g_n) > 0), which must have exactly n + 1
zeros below it. When a check fails, the Gram intervals since the last
verified point are rescanned on a fine grid of mpmath.siegelz values.
Progress is checkpointed to OUTPUT.partial at verified Gram points.

Usage: gen_zeta_zeros_rs.py EXISTING COUNT OUTPUT
"""
import math
import sys

import mpmath
import numpy as np
from scipy.optimize import brentq

TWO_PI = 2.0 * math.pi


def theta(t):
    t = np.asarray(t, dtype=float)
    return (t / 2) * np.log(t / TWO_PI) - t / 2 - math.pi / 8 + 1 / (48 * t) + 7 / (5760 * t**3)


def psi0(p):
    c = np.cos(TWO_PI * p)
    near = np.abs(c) < 1e-6
    p = np.where(near, p + 1e-5, p)
    return np.cos(TWO_PI * (p * p - p - 1.0 / 16)) / np.cos(TWO_PI * p)


def z_rs(t):
    """Riemann-Siegel Z with the leading remainder term; accurate to ~1e-5 for t > 1000."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    a = np.sqrt(t / TWO_PI)
    n_max = np.floor(a).astype(int)
    th = theta(t)
    out = np.empty_like(t)
    for i, (ti, ni, thi) in enumerate(zip(t, n_max, th)):
        n = np.arange(1, ni + 1, dtype=float)
        out[i] = 2.0 * np.sum(np.cos(thi - ti * np.log(n)) / np.sqrt(n))
    p = a - n_max
    sign = np.where((n_max - 1) % 2 == 0, 1.0, -1.0)
    return out + sign * (t / TWO_PI) ** -0.25 * psi0(p)


def gram_point(n, guess):
    return brentq(lambda t: float(theta(t)) - n * math.pi, guess * 0.5, guess * 2.0 + 100.0, xtol=1e-13)


def polish(x0):
    root = mpmath.findroot(mpmath.siegelz, (mpmath.mpf(x0), mpmath.mpf(x0) + mpmath.mpf("1e-7")), solver="secant", tol=1e-30)
    return root


def roots_in(a, b, points, fine):
    grid = np.linspace(a, b, points)
    if fine:
        vals = np.array([float(mpmath.siegelz(x)) for x in grid])
        f = lambda t: float(mpmath.siegelz(t))
    else:
        vals = z_rs(grid)
        f = lambda t: float(z_rs(t)[0])
    out = []
    for lo, hi, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa * fb < 0:
            x0 = brentq(f, lo, hi, xtol=1e-12)
            root = polish(x0)
            if not (lo - 1e-6 <= float(root) <= hi + 1e-6):
                raise SystemExit(f"polish left bracket [{lo}, {hi}] near {x0}")
            out.append(root)
    return out


def write(path, count, header, known, texts, checked):
    with open(path, "w") as fh:
        fh.write(f"# first {count} ordinates of nontrivial zeros of zeta(s)\n")
        for line in header[1:]:
            fh.write(line)
        fh.write(
            f"# entries {known + 1}..{count}: tools/gen_zeta_zeros_rs.py (Riemann-Siegel bracketing, "
            f"mpmath.siegelz polish, dps=20, {checked} good Gram points count-checked)\n"
        )
        for s in texts[:count]:
            fh.write(s + "\n")


def main():
    existing, count, out = sys.argv[1], int(sys.argv[2]), sys.argv[3]
    mpmath.mp.dps = 20
    with open(existing) as fh:
        lines = fh.readlines()
    header = [line for line in lines if line.startswith("#")]
    texts = [line.strip() for line in lines if line.strip() and not line.startswith("#")]
    known = len(texts)
    if len(header) > 2 and "gen_zeta_zeros_rs" in header[-1]:
        # Resuming from a checkpoint: keep the original provenance split.
        known = int(header[-1].split("entries ")[1].split("..")[0]) - 1
        header = header[:-1]
    zeros = [float(x) for x in texts]
    start = zeros[-1]
    n = int(math.floor(float(theta(start)) / math.pi)) + 1
    g_prev = gram_point(n - 1, start)
    checked = 0
    # Gram intervals scanned since the last verified Gram point.
    pending = []
    verified = len(zeros)
    while len(zeros) < count:
        g = gram_point(n, g_prev + 1.0)
        lo = max(g_prev, start + 1e-3)
        pending.append((lo, g, len(zeros)))
        for root in roots_in(lo, g, 17, False):
            if float(root) <= zeros[-1]:
                raise SystemExit(f"root {root} not above previous zero {zeros[-1]}")
            zeros.append(float(root))
            texts.append(mpmath.nstr(root, 17, strip_zeros=False))
        zg = float(z_rs(g)[0])
        if abs(zg) < 1e-3:
            zg = float(mpmath.siegelz(g))
        if (-1) ** n * zg > 0:
            below = sum(1 for x in zeros if x < g)
            if below != n + 1:
                print(f"rescanning {len(pending)} Gram intervals below g_{n} = {g}", file=sys.stderr, flush=True)
                keep = pending[0][2]
                del zeros[keep:]
                del texts[keep:]
                for a, b, _ in pending:
                    for root in roots_in(a, b, 257, True):
                        zeros.append(float(root))
                        texts.append(mpmath.nstr(root, 17, strip_zeros=False))
                below = sum(1 for x in zeros if x < g)
                if below != n + 1:
                    raise SystemExit(f"count check failed at Gram point g_{n} = {g}: {below} zeros, expected {n + 1}")
            checked += 1
            pending = []
            if len(zeros) - verified >= 250:
                verified = len(zeros)
                write(out + ".partial", len(zeros), header, known, texts, checked)
                print(len(zeros), zeros[-1], checked, file=sys.stderr, flush=True)
        g_prev = g
        n += 1
    write(out, count, header, known, texts, checked)


if __name__ == "__main__":
    main()
