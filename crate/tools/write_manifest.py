#!/usr/bin/env python3
"""Write data/MANIFEST: filename, sha256, source citation."""
import hashlib
import pathlib

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

SOURCES = {
    "zeta_zeros.txt": "first 10000 zeta zeros; 1..3500 mpmath.zetazero (tools/gen_zeta_zeros.py), "
    "3501..10000 Riemann-Siegel bracketing with mpmath.siegelz polish (tools/gen_zeta_zeros_rs.py)",
    "dirichlet_m4_zeros.txt": "first 1000 zeros of L(s, chi_-4); mpmath Hardy Z sign changes "
    "(tools/gen_dirichlet_m4_zeros.py)",
    "zeta.desc": "descriptor for zeta(s)",
    "dirichlet_m4.desc": "descriptor for L(s, chi_-4)",
    "characters/chi_4_1.csv": "nonprincipal character modulo 4",
}


def main():
    lines = ["# filename, sha256, source"]
    for name, source in SOURCES.items():
        digest = hashlib.sha256((DATA / name).read_bytes()).hexdigest()
        lines.append(f"{name}, {digest}, {source}")
    (DATA / "MANIFEST").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
