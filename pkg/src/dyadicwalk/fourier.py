"""Cosine transform of the return-counting curve.

The transform at frequency omega equals the average over phi in
[-pi, pi] of an oscillatory kernel built from halved angles:

    sum_n lam**n sinc(omega/2**n) prod_{j<=n} cos(phi + omega/2**j).

The series form converges geometrically for every real (phi, omega) and
is the computational primary; an equivalent continued fraction exists
away from omega in pi*Z and serves as a cross-check.  The phi-average
uses the periodic trapezoid rule, spectrally accurate here because the
truncated kernel is a trigonometric polynomial in phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .digits import Params

NODE_CAP = 1 << 16
_MAX_TERMS = 200_000


class KernelDomainError(ValueError):
    """Continued-fraction form requested outside its validity set."""


class QuadratureError(RuntimeError):
    """Periodic trapezoid failed to settle below tolerance at the node cap."""


@dataclass(frozen=True)
class FourierKernelEval:
    phi: float
    omega: float
    value: float
    terms_used: int

    def __post_init__(self):
        if self.terms_used < 1 or not math.isfinite(self.value):
            raise ValueError("kernel evaluation must use >= 1 terms and be finite")


@dataclass(frozen=True)
class CosineSeries:
    """Transform values c_n at frequencies n*pi, n = 0..K."""

    lam: float
    coeffs: tuple[float, ...]


def _sinc(t: float) -> float:
    # guarded small-argument expansion; relative error ~ t**6/5040
    if abs(t) < 1e-4:
        t2 = t * t
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0
    return math.sin(t) / t


def _series_terms(lam: float, tol: float) -> int:
    """Terms needed so the geometric tail |lam|**n/(1-|lam|) sits below
    tol; every term is bounded by |lam|**n since sinc and cosines stay
    within [-1, 1] on the real line."""
    a = abs(lam)
    if a == 0.0:
        return 1
    need = math.log(tol * (1.0 - a)) / math.log(a)
    if need >= _MAX_TERMS:
        raise QuadratureError(
            f"kernel series needs ~{need:.0f} terms at weight {lam}, cap is {_MAX_TERMS}"
        )
    return max(1, math.ceil(need))


def _series_grid(phis: np.ndarray, omega: float, lam: float, tol: float) -> tuple[np.ndarray, int]:
    """Kernel series on an array of phi values, one shared term count."""
    count = _series_terms(lam, tol)
    acc = np.full_like(phis, _sinc(omega), dtype=np.float64)
    prod = np.ones_like(acc)
    lam_n = 1.0
    for n in range(1, count):
        lam_n *= lam
        prod *= np.cos(phis + omega * 0.5**n)
        acc += (lam_n * _sinc(omega * 0.5**n)) * prod
    return acc, count


def kernel_series(phi: float, omega: float, p: Params, tol: float = 1e-12) -> FourierKernelEval:
    """Evaluate the kernel by its geometric series; valid for all real
    phi and omega."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    vals, used = _series_grid(np.array([float(phi)]), float(omega), p.lam, tol)
    return FourierKernelEval(float(phi), float(omega), float(vals[0]), used)


def kernel_cf(phi: float, omega: float, p: Params, depth: int = 60) -> float:
    """Evaluate the kernel by its continued fraction, truncated at the
    given depth and folded bottom-up.

    Raises KernelDomainError when omega is a nonzero multiple of pi or
    some halved angle omega/2**j lands too close to an odd multiple of
    pi/2 (the fraction's partial denominators degenerate there); callers
    fall back to kernel_series.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    lam = p.lam
    m = round(omega / math.pi)
    if m != 0 and abs(omega - m * math.pi) < 1e-10:
        raise KernelDomainError(f"omega = {omega} is a multiple of pi")
    half = [omega / 2.0**j for j in range(depth + 1)]  # half[j] = omega/2**j
    cos_half = [math.cos(t) for t in half]
    if any(abs(c) < 1e-8 for c in cos_half[1:]):
        raise KernelDomainError("a halved angle falls on the excluded set")

    def b(k: int) -> float:
        return cos_half[k] + lam * math.cos(phi + half[k])

    t = b(depth)
    for k in range(depth - 1, 0, -1):
        a_next = lam * cos_half[k] * math.cos(phi + half[k + 1])
        if t == 0.0:
            raise KernelDomainError("continued fraction denominator vanished")
        t = b(k) - a_next / t
    a1 = lam * math.cos(phi + half[1])
    if t == 0.0:
        raise KernelDomainError("continued fraction denominator vanished")
    den = 1.0 - a1 / t
    if den == 0.0:
        raise KernelDomainError("continued fraction denominator vanished")
    return _sinc(omega) / den


def _phi_average(omega: float, lam: float, nodes: int, series_tol: float) -> float:
    phis = -math.pi + (2.0 * math.pi / nodes) * np.arange(nodes)
    vals, _ = _series_grid(phis, omega, lam, series_tol)
    return (2.0 / nodes) * math.fsum(vals.tolist())


def cosine_transform(omega: float, p: Params, tol: float = 1e-10) -> float:
    """Integral of v(x) cos(omega x) over [-1, 1].

    Periodic trapezoid over phi, nodes doubled from 64 until successive
    values differ by less than tol.  Evaluated at |omega| so evenness in
    omega holds by construction.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    om = abs(float(omega))
    series_tol = tol / 4.0
    nodes = 64
    prev = _phi_average(om, p.lam, nodes, series_tol)
    while nodes <= NODE_CAP // 2:
        nodes *= 2
        cur = _phi_average(om, p.lam, nodes, series_tol)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise QuadratureError(f"no convergence below {tol} within {NODE_CAP} nodes")


def cosine_series(p: Params, harmonics: int, tol: float = 1e-10) -> CosineSeries:
    """Transform values at the Fourier frequencies n*pi, n = 0..harmonics."""
    if harmonics < 0:
        raise ValueError("harmonics must be >= 0")
    coeffs = tuple(cosine_transform(n * math.pi, p, tol) for n in range(harmonics + 1))
    return CosineSeries(p.lam, coeffs)


def reconstruct(x: float, cs: CosineSeries) -> float:
    """Partial cosine sum at a point.

    On [-1, 1] the basis {1, cos(n pi x)} has squared norms {2, 1}, so
    the projection is c_0/2 + sum_{n>=1} c_n cos(n pi x).
    """
    terms = [0.5 * cs.coeffs[0]]
    terms += [c * math.cos(n * math.pi * x) for n, c in enumerate(cs.coeffs) if n >= 1]
    return math.fsum(terms)
