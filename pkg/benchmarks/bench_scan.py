"""Benchmark the compiled scan kernel against the NumPy fallback.

Usage: python3 benchmarks/bench_scan.py [height]

Runs the modular square-residue scan for y^2 = x^7 + 1 over both kernels,
checks the survivor lists agree, and reports the timings.
"""

import sys
import time

from padicann import _scan_np
from padicann.scanner import active_kernel, scan_candidates, scan_candidates_reference

COEFFS = [1, 0, 0, 0, 0, 0, 0, 1]


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def main():
    height = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    print(f"scan height {height}, degree {len(COEFFS) - 1}, "
          f"active kernel: {active_kernel()}")

    fast, t_fast = timed(scan_candidates, COEFFS, height)
    ref, t_ref = timed(scan_candidates_reference, COEFFS, height)
    if fast != ref:
        raise SystemExit("kernel mismatch: survivor lists differ")

    pairs = height * (2 * height + 1)
    print(f"pairs scanned: {pairs}, survivors: {len(fast)}")
    print(f"active kernel : {t_fast:8.3f} s  ({pairs / t_fast / 1e6:7.1f} Mpairs/s)")
    print(f"numpy fallback: {t_ref:8.3f} s  ({pairs / t_ref / 1e6:7.1f} Mpairs/s)")
    if active_kernel() != _scan_np.kernel_id():
        print(f"speedup: {t_ref / t_fast:.1f}x")


if __name__ == "__main__":
    main()
