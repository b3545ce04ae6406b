# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for the rational-point height scan.

For y^2 = f(x) with integer coefficients c_0..c_n and x = a/b, the value
f(a/b) is a rational square exactly when G(a, b) = sum_i c_i a^i b^(2n-i)
is a non-negative perfect square.  This kernel runs the no-false-negative
part: G mod m must be a square residue for every modulus m in a fixed list.
Survivors are confirmed exactly in Python.

The NumPy fallback in ``_scan_np.py`` implements the identical filter; the
two paths must produce identical survivor lists.
"""

from libc.stdint cimport int64_t, uint8_t

SCAN_MODULI = (64, 63, 65, 11)


def _square_table(int m):
    tab = bytearray(m)
    for r in range(m):
        tab[(r * r) % m] = 1
    return bytes(tab)


_TABLES = [_square_table(m) for m in SCAN_MODULI]


def scan_candidates(coeffs, long height):
    """Return [(a, b), ...] passing all modular square filters.

    ``coeffs`` are the integer coefficients of f, ascending, degree n =
    len(coeffs) - 1.  Scans b in [1, height], a in [-height, height].
    gcd screening and the exact perfect-square confirmation are left to
    the caller.
    """
    cdef int n = len(coeffs) - 1
    cdef int nmod = len(SCAN_MODULI)
    if n < 0:
        return []
    if n >= 16 or nmod > 8:
        raise ValueError("degree or modulus count out of range for the kernel")

    cdef long long mods[8]
    cdef int64_t cred[8][16]
    cdef const uint8_t* tabs[8]
    cdef int i, k
    cdef list tables = _TABLES
    cdef bytes tb
    for k in range(nmod):
        mods[k] = SCAN_MODULI[k]
        tb = tables[k]
        tabs[k] = <const uint8_t*> tb
        for i in range(n + 1):
            cred[k][i] = (<object> coeffs[i]) % mods[k]

    # cb[k][i] = c_i * b^(2n-i) mod m, so G(a, b) = sum_i cb[k][i] a^i
    cdef int64_t cb[8][16]
    cdef int64_t bpow[33]
    cdef long long b, a, m, acc, amod
    cdef int ok, j
    out = []
    for b in range(1, height + 1):
        for k in range(nmod):
            m = mods[k]
            bpow[0] = 1
            for j in range(1, 2 * n + 1):
                bpow[j] = (bpow[j - 1] * b) % m
            for i in range(n + 1):
                cb[k][i] = (cred[k][i] * bpow[2 * n - i]) % m
        for a in range(-height, height + 1):
            ok = 1
            for k in range(nmod):
                m = mods[k]
                amod = a % m
                if amod < 0:
                    amod += m
                acc = cb[k][n]
                for i in range(n - 1, -1, -1):
                    acc = (acc * amod + cb[k][i]) % m
                if not tabs[k][acc]:
                    ok = 0
                    break
            if ok:
                out.append((a, b))
    return out


def kernel_id():
    return "cython"
