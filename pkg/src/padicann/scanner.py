"""Kernel selection for the rational-point height scan.

Prefers the compiled extension and falls back to the NumPy implementation
when the extension was not built.  Both produce identical survivor lists;
``scan_candidates_reference`` always runs the NumPy path so the two can be
compared in tests and benchmarks.
"""

from . import _scan_np

try:  # pragma: no cover - exercised indirectly via active_kernel()
    from . import _scanfast as _impl
except ImportError:  # pragma: no cover
    _impl = _scan_np

SCAN_MODULI = tuple(_scan_np.SCAN_MODULI)
assert tuple(_impl.SCAN_MODULI) == SCAN_MODULI


def scan_candidates(coeffs, height):
    """Modular square-residue pre-filter; see the kernel docstrings."""
    return _impl.scan_candidates(coeffs, height)


def scan_candidates_reference(coeffs, height):
    """The NumPy path, regardless of which kernel is active."""
    return _scan_np.scan_candidates(coeffs, height)


def active_kernel() -> str:
    """"cython" when the compiled extension loaded, else "numpy"."""
    return _impl.kernel_id()
