"""Pure numpy fallback for the cell-sweep kernels.

Same contract as the compiled extension in ``_ckernel``: per-cell values
of the truncated return-counting curve (v) and loop-counting curve (u)
over all 2**(M+1) depth-M dyadic cells, in left-to-right cell order, and
compensated reductions.  Selected automatically at import time when the
extension is unavailable; the two backends agree to well below 2**-40
relative.
"""

from __future__ import annotations

import math

import numpy as np


def _weight_powers(lam: float, depth: int) -> np.ndarray:
    # pows[n] = lam**(n+1), built by sequential multiplication so the
    # compiled backend (a plain C loop) rounds identically.
    return np.cumprod(np.full(depth + 1, lam))


def _v_levels(lam: float, depth: int) -> tuple[list[np.ndarray], np.ndarray]:
    """Truncated v arrays for every depth d = 0..depth.

    Level d is built from level d-1 by appending one digit: cell 2j+b of
    level d extends cell j with digit (-1, +1)[b].  Returns the list of
    per-depth value arrays and the final prefix-sum array.
    """
    pows = _weight_powers(lam, depth)
    s = np.array([-1, 1], dtype=np.int8)
    v = np.ones(2)  # a single digit never sums to zero
    levels = [v]
    for d in range(1, depth + 1):
        s = np.repeat(s, 2)
        s[0::2] -= 1
        s[1::2] += 1
        v = np.repeat(v, 2)
        v += pows[d] * (s == 0)
        levels.append(v)
    return levels, s


def curve_values(
    lam: float, depth: int, want_u: bool = False, workers: int = 1
) -> tuple[np.ndarray, np.ndarray | None]:
    """Per-cell truncated curve values at the given depth.

    Cell i covers [i*2**-M - 1, (i+1)*2**-M - 1]; its digits are the
    bits of i (most significant bit = leading digit).  The u array is
    assembled from the exact transfer identity
    u = sum_m lam**m (v_shifted_m - 1), where the m-fold digit shift of
    cell i is cell i mod 2**(M+1-m) at depth M-m.  `workers` is accepted
    for interface parity; the vectorized path is already deterministic.
    """
    levels, _ = _v_levels(lam, depth)
    v = levels[-1]
    if not want_u:
        return v, None
    n = v.size
    u = v - 1.0
    lam_m = 1.0
    for m in range(1, depth + 1):
        lam_m *= lam
        u += lam_m * (np.tile(levels[depth - m], 1 << m) - 1.0)
    assert u.size == n
    return v, u


_FOLD_ROWS = 128


def comp_sum(a: np.ndarray) -> float:
    """Compensated (error-free-transform) sum of a float64 array.

    Neumaier two-sum folded across 128 rows of lanes, then the lane sums
    and compensations are combined exactly with math.fsum.  Deterministic
    for a given array and accurate to ~1 ulp of the true sum.
    """
    a = np.ascontiguousarray(a, dtype=np.float64).ravel()
    n = a.size
    if n == 0:
        return 0.0
    lanes = -(-n // _FOLD_ROWS)
    padded = np.zeros(_FOLD_ROWS * lanes)
    padded[:n] = a
    body = padded.reshape(_FOLD_ROWS, lanes)
    s = body[0].copy()
    c = np.zeros(lanes)
    for r in range(1, _FOLD_ROWS):
        x = body[r]
        t = s + x
        swap = np.abs(s) >= np.abs(x)
        c += np.where(swap, (s - t) + x, (x - t) + s)
        s = t
    return math.fsum(s.tolist() + c.tolist())


def comp_dot(a: np.ndarray, b: np.ndarray) -> float:
    """Compensated dot product; products are rounded once, then summed
    with comp_sum (matches the compiled backend's rounding)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return comp_sum(a * b)
