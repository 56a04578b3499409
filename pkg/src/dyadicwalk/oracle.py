"""Brute-force oracle for the return-counting curve v and loop-counting
curve u.

Truncated at depth M, both curves are constant on each of the 2**(M+1)
dyadic cells, so integrals of the truncations are exact finite sums over
cells; the difference from the untruncated curves is controlled by
geometric tail bounds that every result carries along.  v(x) is
1 + sum_n lam**(n+1) [s_n == 0] over prefix sums s_n of the digit walk;
u(x) additionally counts zero-sum digit segments starting anywhere.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernel
from .digits import DigitExpansion, Params

DEFAULT_DEPTH = 22
CELL_BUDGET = 1 << 28


class CellBudgetError(RuntimeError):
    """Requested depth would enumerate more cells than the budget allows."""


@dataclass(frozen=True)
class DyadicCell:
    """Depth-M interval on which the truncated curves are constant."""

    prefix: DigitExpansion
    lo: float
    hi: float

    def __post_init__(self):
        width = 2.0 ** -self.prefix.depth
        if not (-1.0 <= self.lo < self.hi <= 1.0) or self.hi - self.lo != width:
            raise ValueError("endpoints do not match the prefix depth")
        if abs(0.5 * (self.lo + self.hi) - self.prefix.midpoint()) > 0.25 * width:
            raise ValueError("endpoints do not match the prefix midpoint")

    @classmethod
    def from_prefix(cls, e: DigitExpansion) -> "DyadicCell":
        lo, hi = e.interval()
        return cls(e, lo, hi)

    @classmethod
    def from_index(cls, i: int, depth: int) -> "DyadicCell":
        """Cell number i (0-based, left to right) among 2**(depth+1)."""
        if not 0 <= i < (1 << (depth + 1)):
            raise ValueError("cell index out of range")
        bits = ((i >> (depth - n)) & 1 for n in range(depth + 1))
        e = DigitExpansion(tuple(2 * b - 1 for b in bits))
        return cls.from_prefix(e)


@dataclass(frozen=True)
class OracleResult:
    value: float
    truncation_bound: float
    depth: int

    def __post_init__(self):
        if not (self.truncation_bound >= 0.0 and math.isfinite(self.truncation_bound)):
            raise ValueError("truncation bound must be finite and nonnegative")


def v_trunc(e: DigitExpansion, p: Params) -> float:
    """Truncated return count at the cell of e.

    Differs from the untruncated value by at most
    |lam|**(M+2) / (1 - |lam|).
    """
    lam = p.lam
    s = 0
    w = 1.0
    acc = 1.0
    for n, d in enumerate(e.digits):
        s += d
        w *= lam
        if s == 0:
            assert n % 2 == 1, "a zero prefix sum needs an even digit count"
            acc += w
    return acc


def u_trunc(e: DigitExpansion, p: Params) -> float:
    """Truncated loop count at the cell of e.

    Counts every segment x_m..x_n (n <= M) with zero sum, weighted by
    lam**(n+1).  A running map from prefix-sum value to its multiplicity
    makes this O(M): the number of zero-sum segments ending at n equals
    the number of earlier prefix sums equal to s_n.
    """
    lam = p.lam
    seen = {0: 1}
    s = 0
    w = 1.0
    acc = 0.0
    for d in e.digits:
        s += d
        w *= lam
        k = seen.get(s, 0)
        acc += w * k
        seen[s] = k + 1
    return acc


def v_tail_bound(p: Params, depth: int) -> float:
    """Pointwise |v - v_trunc| bound: geometric tail of the weights."""
    a = abs(p.lam)
    return a ** (depth + 2) / (1.0 - a)


def u_tail_bound(p: Params, depth: int) -> float:
    """Pointwise |u - u_trunc| bound; at most n+1 segments end at n."""
    a = abs(p.lam)
    return (depth + 3) * a ** (depth + 2) / (1.0 - a) ** 2


# Cell-value arrays are expensive (a full sweep) and reused across every
# integral at the same (lam, depth); keep the most recent few.
_CACHE_SLOTS = 3
_curve_cache: OrderedDict = OrderedDict()


def clear_cache() -> None:
    _curve_cache.clear()


def _check_budget(depth: int) -> None:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if (1 << (depth + 1)) > CELL_BUDGET:
        raise CellBudgetError(
            f"depth {depth} needs {1 << (depth + 1)} cells, budget is {CELL_BUDGET}"
        )


def curve_arrays(
    p: Params, depth: int, want_u: bool = False, workers: int = 1
) -> tuple[np.ndarray, np.ndarray | None]:
    """Per-cell truncated values over all cells at the given depth."""
    _check_budget(depth)
    key = (p.lam, depth)
    hit = _curve_cache.get(key)
    if hit is not None and (hit[1] is not None or not want_u):
        _curve_cache.move_to_end(key)
        return hit
    v, u = kernel.curve_values(p.lam, depth, want_u=want_u, workers=workers)
    _curve_cache[key] = (v, u)
    _curve_cache.move_to_end(key)
    while len(_curve_cache) > _CACHE_SLOTS:
        _curve_cache.popitem(last=False)
    return v, u


@lru_cache(maxsize=2)
def _cell_midpoints(depth: int) -> np.ndarray:
    n = 1 << (depth + 1)
    half = 2.0 ** -(depth + 1)
    return (2.0 * np.arange(n) + 1.0) * half - 1.0


def _monomial_cell_weights(N: int, depth: int) -> np.ndarray:
    """Exact per-cell integral of x**N, evaluated cancellation-free.

    With cell center m and half-width d,
    int x**N dx = 2/(N+1) * sum_{odd k} C(N+1, k) m**(N+1-k) d**k;
    for even N all terms share the sign of 1, for odd N the sign of m,
    so the sum never cancels.
    """
    half = 2.0 ** -(depth + 1)
    mids = _cell_midpoints(depth)
    acc = np.zeros_like(mids)
    for k in range(1, N + 2, 2):
        acc += (math.comb(N + 1, k) * half**k) * mids ** (N + 1 - k)
    acc *= 2.0 / (N + 1)
    return acc


def _poly_cell_weights(coeffs: np.ndarray, depth: int) -> np.ndarray:
    """Exact per-cell integral of a polynomial, as one Horner pass.

    The per-monomial expansions are regrouped by powers of the cell
    center, so the per-cell cost is independent of how many monomials
    are present."""
    half = 2.0 ** -(depth + 1)
    deg = len(coeffs) - 1
    table = np.zeros(deg + 2)
    for n, c in enumerate(coeffs):
        if c != 0.0:
            s = 2.0 * c / (n + 1)
            for k in range(1, n + 2, 2):
                table[n + 1 - k] += s * math.comb(n + 1, k) * half**k
    mids = _cell_midpoints(depth)
    w = np.full_like(mids, table[deg + 1])
    for j in range(deg, -1, -1):
        w *= mids
        w += table[j]
    return w


def _sinhc(t: float) -> float:
    if abs(t) < 1e-4:
        t2 = t * t
        return 1.0 + t2 / 6.0 + t2 * t2 / 120.0
    return math.sinh(t) / t


def _sinc(t: float) -> float:
    if abs(t) < 1e-4:
        t2 = t * t
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0
    return math.sin(t) / t


@dataclass(frozen=True)
class ExpKernel:
    """Weight kernel x -> exp(omega * x); integrable in closed form."""

    omega: float


@dataclass(frozen=True)
class CosKernel:
    """Weight kernel x -> cos(omega * x); integrable in closed form."""

    omega: float


def integrate_v_power(
    N: int, p: Params, depth: int = DEFAULT_DEPTH, workers: int = 1
) -> OracleResult:
    """Cell sum for the integral of v**N over [-1, 1]."""
    if N < 0:
        raise ValueError("power must be >= 0")
    v, _ = curve_arrays(p, depth, workers=workers)
    total = kernel.comp_sum(v**N) * 2.0 ** -depth
    if N == 0:
        bound = 0.0
    else:
        vmax = 1.0 / (1.0 - abs(p.lam))
        bound = 2.0 * N * vmax ** (N - 1) * v_tail_bound(p, depth)
    return OracleResult(total, bound, depth)


def integrate_v_monomial(
    N: int, p: Params, depth: int = DEFAULT_DEPTH, workers: int = 1
) -> OracleResult:
    """Cell sum for the integral of v(x) * x**N."""
    if N < 0:
        raise ValueError("exponent must be >= 0")
    v, _ = curve_arrays(p, depth, workers=workers)
    total = kernel.comp_dot(v, _monomial_cell_weights(N, depth))
    return OracleResult(total, 2.0 * v_tail_bound(p, depth), depth)


def integrate_u_monomial(
    N: int, p: Params, depth: int = DEFAULT_DEPTH, workers: int = 1
) -> OracleResult:
    """Cell sum for the integral of u(x) * x**N."""
    if N < 0:
        raise ValueError("exponent must be >= 0")
    _, u = curve_arrays(p, depth, want_u=True, workers=workers)
    total = kernel.comp_dot(u, _monomial_cell_weights(N, depth))
    return OracleResult(total, 2.0 * u_tail_bound(p, depth), depth)


def integrate_weighted(
    kernel_fn, which: str, p: Params, depth: int = DEFAULT_DEPTH, workers: int = 1
) -> OracleResult:
    """Cell sum for the integral of curve(x) * kernel(x).

    The kernel must be exactly integrable per cell: an ExpKernel, a
    CosKernel, or a polynomial given by its monomial coefficients
    (anything with a `coeffs` attribute, or a plain sequence).
    """
    which = which.lower()
    if which not in ("v", "u"):
        raise ValueError("which must be 'v' or 'u'")
    if isinstance(kernel_fn, ExpKernel):
        om = kernel_fn.omega
        half = 2.0 ** -(depth + 1)
        w = np.exp(om * _cell_midpoints(depth)) * (2.0 * half * _sinhc(om * half))
        kern_max = math.exp(abs(om))
    elif isinstance(kernel_fn, CosKernel):
        om = kernel_fn.omega
        half = 2.0 ** -(depth + 1)
        w = np.cos(om * _cell_midpoints(depth)) * (2.0 * half * _sinc(om * half))
        kern_max = 1.0
    else:
        coeffs = np.asarray(getattr(kernel_fn, "coeffs", kernel_fn), dtype=np.float64).ravel()
        if coeffs.size == 0:
            coeffs = np.zeros(1)
        w = _poly_cell_weights(coeffs, depth)
        kern_max = float(np.sum(np.abs(coeffs)))
    vals = curve_arrays(p, depth, want_u=(which == "u"), workers=workers)[0 if which == "v" else 1]
    total = kernel.comp_dot(vals, w)
    tail = v_tail_bound(p, depth) if which == "v" else u_tail_bound(p, depth)
    return OracleResult(total, 2.0 * kern_max * tail, depth)
