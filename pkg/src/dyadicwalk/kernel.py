"""Kernel backend selection.

The hot loops (dyadic cell sweeps, compensated reductions) exist twice:
a Cython extension (``_ckernel``) and a pure numpy fallback
(``_pykernel``).  The compiled backend is picked at import when
available; ``set_backend`` overrides the choice (used by tests and the
benchmark).  Both backends produce identical cell values up to ~1 ulp
and reductions accurate to ~1 ulp of the exact sum, so everything
downstream is backend-agnostic far below the 2**-40 agreement contract.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _pykernel

try:
    from . import _ckernel
except ImportError:  # extension not built; numpy fallback
    _ckernel = None

HAVE_COMPILED = _ckernel is not None

_active = "compiled" if HAVE_COMPILED else "python"


def active_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    """Select 'compiled', 'python', or 'auto'."""
    global _active
    if name == "auto":
        name = "compiled" if HAVE_COMPILED else "python"
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and not HAVE_COMPILED:
        raise RuntimeError("compiled kernel is not available")
    _active = name


def curve_values(
    lam: float, depth: int, want_u: bool = False, workers: int = 1
) -> tuple[np.ndarray, np.ndarray | None]:
    """Truncated curve values on all 2**(depth+1) cells, in cell order.

    With workers > 1 the cell range is partitioned into contiguous
    chunks; every cell value is computed by the same arithmetic path
    regardless of the partition, so the output is bit-identical to the
    sequential sweep.
    """
    if _active == "python":
        return _pykernel.curve_values(lam, depth, want_u)
    n = 1 << (depth + 1)
    v = np.empty(n)
    u = np.empty(n) if want_u else None
    if workers <= 1 or n < (1 << 16):
        _ckernel.sweep_range(lam, depth, 0, n, v, u)
    else:
        bounds = [n * k // workers for k in range(workers + 1)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futs = [
                pool.submit(_ckernel.sweep_range, lam, depth, bounds[k], bounds[k + 1], v, u)
                for k in range(workers)
            ]
            for f in futs:
                f.result()
    return v, u


def comp_sum(a: np.ndarray) -> float:
    """Compensated sum, accurate to ~1 ulp and order-robust."""
    a = np.ascontiguousarray(a, dtype=np.float64).ravel()
    if _active == "compiled":
        return _ckernel.comp_sum(a)
    return _pykernel.comp_sum(a)


def comp_dot(a: np.ndarray, b: np.ndarray) -> float:
    """Compensated dot product of equal-length float64 arrays."""
    a = np.ascontiguousarray(a, dtype=np.float64).ravel()
    b = np.ascontiguousarray(b, dtype=np.float64).ravel()
    if _active == "compiled":
        return _ckernel.comp_dot(a, b)
    return _pykernel.comp_dot(a, b)
