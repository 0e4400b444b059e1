#!/usr/bin/env python3
"""Generate a table of Riemann zeta zero ordinates with mpmath.

Usage: gen_zeta_zeros.py COUNT OUTPUT
"""
import sys

import mpmath


def main():
    count = int(sys.argv[1])
    out = sys.argv[2]
    mpmath.mp.dps = 20
    with open(out, "w") as fh:
        fh.write(f"# first {count} ordinates of nontrivial zeros of zeta(s)\n")
        fh.write("# generated by tools/gen_zeta_zeros.py (mpmath.zetazero, dps=20)\n")
        for n in range(1, count + 1):
            rho = mpmath.zetazero(n)
            fh.write(mpmath.nstr(rho.imag, 17, strip_zeros=False) + "\n")
            if n % 500 == 0:
                fh.flush()
                print(n, file=sys.stderr, flush=True)


if __name__ == "__main__":
    main()
