"""NumPy fallback for the rational-point height scan.

For y^2 = f(x) with integer coefficients c_0..c_n and x = a/b, the value
f(a/b) is a rational square exactly when G(a, b) = sum_i c_i a^i b^(2n-i)
is a non-negative perfect square.  This module runs the no-false-negative
part: G mod m must be a square residue for every modulus m in a fixed
list.  Survivors are confirmed exactly by the caller.

The compiled kernel in ``_scanfast.pyx`` implements the identical filter;
the two paths must produce identical survivor lists, in the same order
(b ascending, a ascending within each b).
"""

import numpy as np

SCAN_MODULI = (64, 63, 65, 11)


def _square_table(m):
    tab = np.zeros(m, dtype=bool)
    tab[(np.arange(m, dtype=np.int64) ** 2) % m] = True
    return tab


_TABLES = [_square_table(m) for m in SCAN_MODULI]


def scan_candidates(coeffs, height):
    """Return [(a, b), ...] passing all modular square filters.

    ``coeffs`` are the integer coefficients of f, ascending, degree n =
    len(coeffs) - 1.  Scans b in [1, height], a in [-height, height].
    gcd screening and the exact perfect-square confirmation are left to
    the caller.
    """
    n = len(coeffs) - 1
    if n < 0:
        return []
    if n >= 16 or len(SCAN_MODULI) > 8:
        raise ValueError("degree or modulus count out of range for the kernel")

    a_all = np.arange(-height, height + 1, dtype=np.int64)
    a_mods = [a_all % m for m in SCAN_MODULI]  # numpy % is non-negative
    cred = [[int(c) % m for c in coeffs] for m in SCAN_MODULI]

    out = []
    for b in range(1, height + 1):
        mask = np.ones(a_all.shape, dtype=bool)
        for k, m in enumerate(SCAN_MODULI):
            # cb[i] = c_i * b^(2n-i) mod m, so G(a, b) = sum_i cb[i] a^i
            cb = [cred[k][i] * pow(b, 2 * n - i, m) % m for i in range(n + 1)]
            amod = a_mods[k]
            acc = np.full(a_all.shape, cb[n], dtype=np.int64)
            for i in range(n - 1, -1, -1):
                acc *= amod
                acc += cb[i]
                acc %= m
            mask &= _TABLES[k][acc]
            if not mask.any():
                break
        for a in a_all[mask]:
            out.append((int(a), b))
    return out


def kernel_id():
    return "numpy"
