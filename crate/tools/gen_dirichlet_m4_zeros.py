#!/usr/bin/env python3
"""Generate ordinates of nontrivial zeros of L(s, chi_-4) with mpmath.

Locates sign changes of the real function
    Z(t) = exp(i theta(t)) L(1/2 + it, chi_-4),
    theta(t) = Im log[(4/pi)^{s/2} Gamma((s + 1)/2)],
refines each with the Illinois method, and checks the count against the
smooth counting function.

Usage: gen_dirichlet_m4_zeros.py COUNT OUTPUT
"""
import sys

import mpmath

CHI = [0, 1, 0, -1]


def z(t):
    s = mpmath.mpc(0.5, t)
    theta = mpmath.im(s / 2 * mpmath.log(4 / mpmath.pi) + mpmath.loggamma((s + 1) / 2))
    return mpmath.re(mpmath.expj(theta) * mpmath.dirichlet(s, CHI))


def smooth_count(t):
    # (T/2pi) log(4T/(2pi e)) + 1/8 - 1/8 rounding; used only as a sanity check.
    return t / (2 * mpmath.pi) * mpmath.log(4 * t / (2 * mpmath.pi * mpmath.e))


def scan(count):
    zeros = []
    t = mpmath.mpf(1)
    prev = z(t)
    while len(zeros) < count:
        spacing = 2 * mpmath.pi / max(mpmath.log(4 * t / (2 * mpmath.pi)), 1)
        h = spacing / 12
        nxt = z(t + h)
        if prev * nxt < 0:
            root = mpmath.findroot(z, (t, t + h), solver="illinois", tol=mpmath.mpf(10) ** -18)
            zeros.append(root)
            if len(zeros) % 100 == 0:
                print(len(zeros), float(root), float(smooth_count(root)), file=sys.stderr, flush=True)
        t += h
        prev = nxt
    return zeros


def main():
    count = int(sys.argv[1])
    out = sys.argv[2]
    mpmath.mp.dps = 20
    zeros = scan(count)
    with open(out, "w") as fh:
        fh.write(f"# first {count} ordinates of nontrivial zeros of L(s, chi_-4)\n")
        fh.write("# generated by tools/gen_dirichlet_m4_zeros.py (mpmath, Hardy Z sign changes, dps=20)\n")
        for g in zeros:
            fh.write(mpmath.nstr(g, 17, strip_zeros=False) + "\n")


if __name__ == "__main__":
    main()
