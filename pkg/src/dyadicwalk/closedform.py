"""Closed-form integrals of the return-counting curve v and the
loop-counting curve u.

Everything here evaluates finite expressions in the weight lam: powers
of v integrate to ratios of Hessenberg determinants (equivalently a
binomial recurrence), monomial moments of v come out of a residue sum
of bordered determinants, and u moments reduce to a triangular system
fed by the v moments.  Routes that the theory makes equal are computed
both ways and cross-checked at runtime; a mismatch raises
ArithmeticError rather than returning a silently wrong number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .digits import Params
from .fourier import QuadratureError

REL_CHECK = 1e-10  # internal agreement threshold for dual-route values


@dataclass(frozen=True)
class Poly:
    """Dense polynomial in the monomial basis; coeffs[n] multiplies x**n.

    Trailing zeros are trimmed on construction; the zero polynomial has
    an empty coefficient tuple.
    """

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        cs = tuple(self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def poly_compose_affine(f: Poly, a: float, b: float) -> Poly:
    """Coefficients of f(a*x + b)."""
    acc = np.zeros(max(len(f.coeffs), 1), dtype=complex)
    pw = np.array([1.0 + 0.0j])  # (a x + b)**n, grown incrementally
    for n, c in enumerate(f.coeffs):
        if n > 0:
            nxt = np.zeros(n + 1, dtype=complex)
            nxt[:n] += b * pw
            nxt[1:] += a * pw
            pw = nxt
        acc[: n + 1] += c * pw
    return Poly(tuple(acc))


def poly_l2_inner(f: Poly, g: Poly) -> complex:
    """Exact int_{-1}^{1} f(x) conj(g(x)) dx from the coefficients."""
    total = 0.0 + 0.0j
    for j, cf in enumerate(f.coeffs):
        for k, cg in enumerate(g.coeffs):
            if (j + k) % 2 == 0:
                total += cf * complex(cg).conjugate() * (2.0 / (j + k + 1))
    return total


def poly_l2_norm_sq(f: Poly) -> float:
    return poly_l2_inner(f, f).real


def lower_hessenberg_det(H: np.ndarray):
    """Determinant of a lower Hessenberg matrix by the leading-minor
    recurrence: expand the m-th leading minor along its last row; the
    cofactors split into a smaller leading minor times a run of
    superdiagonal entries.  O(n^2)."""
    m = H.shape[0]
    if m == 0:
        return H.dtype.type(1.0)
    D = np.empty(m + 1, dtype=H.dtype)
    D[0] = 1.0
    for r in range(1, m + 1):
        acc = H[r - 1, r - 1] * D[r - 1]
        prod = 1.0
        for k in range(r - 2, -1, -1):
            prod *= H[k, k + 1]
            term = H[r - 1, k] * D[k] * prod
            acc += term if (r - 1 - k) % 2 == 0 else -term
        D[r] = acc
    return D[m]


def _roots_even(lam: float, N: int) -> list[float]:
    # sqrt(1 - lam**(2n)) for n = 0..N
    lam2 = lam * lam
    return [math.sqrt(1.0 - lam2**n) for n in range(N + 1)]


def v_power_rec(N: int, p: Params) -> float:
    """Integral of v**N over [-1, 1] by the binomial recurrence.

    I_0 = 2 and
    I_m = (2 + sum_{n<m} C(m,n) (1 - sqrt(1-lam**(2n))) I_n)
          / sqrt(1 - lam**(2m)).
    """
    if N < 0:
        raise ValueError("power must be >= 0")
    root = _roots_even(p.lam, N)
    vals = [2.0]
    for m in range(1, N + 1):
        s = 2.0
        for n in range(1, m):
            s += math.comb(m, n) * (1.0 - root[n]) * vals[n]
        vals.append(s / root[m])
    return vals[N]


def _power_hessenberg(lam: float, N: int, border=None) -> np.ndarray:
    """Hessenberg matrix behind the v-power determinants.

    Row r (r >= 0) holds 1, C(r+1,k) lam**(2k)/(1+sqrt(1-lam**(2k))) for
    k=1..r, then -sqrt(1-lam**(2(r+1))) on the superdiagonal.  With
    `border`, a final row of polynomial coefficients is appended and the
    matrix is (N+1) x (N+1); otherwise it is N x N.
    """
    root = _roots_even(lam, N)
    lam2 = lam * lam
    size = N + 1 if border is not None else N
    dtype = complex if border is not None and any(complex(c).imag for c in border) else float
    H = np.zeros((size, size), dtype=dtype)
    for r in range(N):
        H[r, 0] = 1.0
        for k in range(1, r + 1):
            H[r, k] = math.comb(r + 1, k) * lam2**k / (1.0 + root[k])
        if r + 1 < size:
            H[r, r + 1] = -root[r + 1]
    if border is not None:
        H[N, : len(border)] = border
    return H


def v_power_det(N: int, p: Params) -> float:
    """Integral of v**N over [-1, 1] by the Hessenberg determinant route."""
    if N < 0:
        raise ValueError("power must be >= 0")
    if N > 64:
        raise ValueError("power above 64 exceeds exact binomial range")
    if N == 0:
        return 2.0
    H = _power_hessenberg(p.lam, N)
    root = _roots_even(p.lam, N)
    scale = 2.0 / math.prod(root[1 : N + 1])
    return scale * float(lower_hessenberg_det(H))


def _check_routes(a, b, what: str, rel: float = REL_CHECK) -> None:
    scale = max(1.0, abs(a), abs(b))
    if abs(a - b) > rel * scale:
        raise ArithmeticError(f"{what}: dual routes disagree ({a!r} vs {b!r})")


def v_poly_integral(P: Poly, p: Params) -> complex:
    """Integral of P(v(x)) over [-1, 1] for a polynomial P.

    Computed twice: as sum_n p_n * (integral of v**n), and as the
    bordered Hessenberg determinant with the coefficients of P as the
    final row.  The two must agree to REL_CHECK.
    """
    if P.degree < 0:
        return 0.0 + 0.0j
    if P.degree > 64:
        raise ValueError("degree above 64 exceeds exact binomial range")
    by_sum = sum(c * v_power_rec(n, p) for n, c in enumerate(P.coeffs))
    N = P.degree
    H = _power_hessenberg(p.lam, N, border=P.coeffs)
    root = _roots_even(p.lam, N)
    by_det = lower_hessenberg_det(H) * 2.0 / math.prod(root[1 : N + 1])
    _check_routes(complex(by_sum), complex(by_det), "v_poly_integral")
    return complex(by_sum)


def _resolvent_matrix(z: complex, lam: float, N: int) -> np.ndarray:
    """Matrix of 1 - lam*(z**-1 L + z R)/2 on 1, x, ..., x**N, where
    (L h)(x) = h((x-1)/2) and (R h)(x) = h((x+1)/2).  Row n maps x**n to
    (1 - lam (z + 1/z)/2**(n+1)) x**n
      - lam/2**(n+1) * sum_{j<n} C(n,j) ((-1)**(n-j)/z + z) x**j."""
    zinv = 1.0 / z
    T = np.zeros((N + 1, N + 1), dtype=complex)
    for n in range(N + 1):
        scale = lam / 2.0 ** (n + 1)
        T[n, n] = 1.0 - scale * (z + zinv)
        for j in range(n):
            sign = -1.0 if (n - j) % 2 else 1.0
            T[n, j] = -scale * math.comb(n, j) * (sign * zinv + z)
    return T


def _require_unit_circle(z: complex) -> None:
    if abs(abs(z) - 1.0) > 1e-9:
        raise ValueError(f"z must lie on the unit circle, got |z| = {abs(z)}")


def resolvent_forward(P: Poly, z: complex, p: Params) -> Poly:
    """Apply 1 - lam*(z**-1 L + z R)/2 to a polynomial."""
    _require_unit_circle(z)
    if P.degree < 0:
        return P
    T = _resolvent_matrix(z, p.lam, P.degree)
    return Poly(tuple(T.T @ np.asarray(P.coeffs, dtype=complex)))


def resolvent_poly(P: Poly, z: complex, p: Params) -> Poly:
    """Invert 1 - lam*(z**-1 L + z R)/2 on a polynomial.

    The matrix on the monomial basis is triangular with diagonal
    1 - lam (z + 1/z)/2**(n+1), nonzero whenever |lam| < 1 and |z| = 1,
    so the system solves by substitution from the top degree down.
    """
    _require_unit_circle(z)
    if P.degree < 0:
        return P
    N = P.degree
    T = _resolvent_matrix(z, p.lam, N)
    rhs = np.asarray(P.coeffs, dtype=complex)
    c = np.zeros(N + 1, dtype=complex)
    for n in range(N, -1, -1):
        c[n] = (rhs[n] - T[n + 1 :, n] @ c[n + 1 :]) / T[n, n]
    return Poly(tuple(c))


#: Largest N at which the residue-determinant sum is numerically sound;
#: its terms cancel by ~4**N, exhausting float64 soon after this.
RESIDUE_MOMENT_MAX = 10

_CONTOUR_NODE_CAP = 1 << 14


def _v_moment_residue(N: int, p: Params) -> float:
    """Moment as a residue sum of bordered determinants: one dense
    triangular-plus-column determinant (via LU) per inner pole of the
    halving-average system."""
    lam = p.lam
    lam2 = lam * lam
    total = 0.0
    for j in range(N + 1):
        s_j = math.sqrt(1.0 - lam2 / 4.0**j)
        prod = 1.0
        for n in range(N + 1):
            if n != j:
                prod *= 1.0 - 2.0 ** (n - j)
        A = np.zeros((N + 1, N + 1))
        for r in range(N + 1):
            for k in range(min(r, N)):
                c = math.comb(r, k)
                A[r, k] = -c * s_j if (r - k) % 2 else c
            if r < N:
                A[r, r] = 1.0 - 2.0 ** (r - j)
            if r % 2 == 0:
                A[r, N] = 2.0**r / (r + 1)
        total += 2.0 / (2.0**j * s_j * prod) * float(np.linalg.det(A))
    return total


def _v_moment_contour(N: int, p: Params, tol: float = 1e-12) -> float:
    """Moment as the average over |z| = 1 of the top response of the
    halving-average system: forward-substitute at each node, average.

    The integrand is analytic in an annulus around the circle (inner
    poles sit at radius |lam|/(1 + sqrt(1-lam**2)) < 1), so the periodic
    trapezoid converges spectrally, and the triangular solves are
    well-conditioned (diagonals at least 1 - |lam|) at every N."""
    lam = p.lam
    b = np.array([2.0 / (n + 1) if n % 2 == 0 else 0.0 for n in range(N + 1)])

    def mean(K: int) -> float:
        phi = (2.0 * math.pi / K) * np.arange(K)
        cos2 = 2.0 * np.cos(phi)  # z + 1/z on the circle
        sin2i = 2j * np.sin(phi)  # z - 1/z
        y = np.zeros((N + 1, K), dtype=complex)
        for n in range(N + 1):
            acc = np.full(K, b[n], dtype=complex)
            scale = lam / 2.0 ** (n + 1)
            for j in range(n):
                pair = cos2 if (n - j) % 2 == 0 else sin2i
                acc += scale * math.comb(n, j) * pair * y[j]
            y[n] = acc / (1.0 - scale * cos2)
        return math.fsum(y[N].real.tolist()) / K

    K = 64
    prev = mean(K)
    while K <= _CONTOUR_NODE_CAP // 2:
        K *= 2
        cur = mean(K)
        if abs(cur - prev) < tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise QuadratureError(f"circle average for moment {N} did not settle below {tol}")


def v_moment(N: int, p: Params) -> float:
    """Integral of v(x) * x**N over [-1, 1].

    Zero for odd N (v is even).  Up to N = RESIDUE_MOMENT_MAX the
    residue sum of bordered determinants is evaluated and cross-checked
    against the circle-average route (condition monitoring by route
    comparison); past that the residue terms cancel catastrophically in
    float64 and the circle average is used alone.
    """
    if N < 0:
        raise ValueError("exponent must be >= 0")
    if N % 2 == 1:
        return 0.0
    if N > 40:
        raise ValueError("exponent above 40 overflows the residue prefactors")
    if p.lam == 0.0:
        return 2.0 / (N + 1)
    if N <= RESIDUE_MOMENT_MAX:
        val = _v_moment_residue(N, p)
        _check_routes(val, _v_moment_contour(N, p), "v_moment", rel=1e-8)
        return val
    return _v_moment_contour(N, p)


def u_moment(N: int, p: Params) -> float:
    """Integral of u(x) * x**N over [-1, 1].

    Zero for odd N (u is even).  For even N the even-monomial averaging
    system with diagonal 1 - lam/4**k and strict lower entries
    -lam C(2k,2j)/4**k ties the u moment to the v moments; evaluated
    both as a bordered determinant over the diagonal product and by a
    triangular solve plus inner product, which must agree."""
    if N < 0:
        raise ValueError("exponent must be >= 0")
    if N % 2 == 1:
        return 0.0
    if N > 40:
        raise ValueError("exponent above 40 overflows the residue prefactors")
    lam = p.lam
    K = N // 2
    v_moms = np.array([v_moment(2 * k, p) for k in range(K + 1)])
    M = np.zeros((K + 1, K + 1))
    for k in range(K + 1):
        M[k, k] = 1.0 - lam / 4.0**k
        for j in range(k):
            M[k, j] = -lam * math.comb(2 * k, 2 * j) / 4.0**k
    shift = 2.0 / ((1.0 - lam) * (N + 1))
    B = M.copy()
    B[:, K] = v_moms
    diag_prod = math.prod(1.0 - lam / 4.0**k for k in range(K + 1))
    by_det = float(np.linalg.det(B)) / diag_prod - shift
    # substitution on the transposed system, highest index first
    g = np.zeros(K + 1)
    g[K] = 1.0 / M[K, K]
    for k in range(K - 1, -1, -1):
        g[k] = -(M[k + 1 :, k] @ g[k + 1 :]) / M[k, k]
    by_solve = float(g @ v_moms) - shift
    _check_routes(by_det, by_solve, "u_moment")
    return by_det


@dataclass(frozen=True)
class MomentTable:
    """Closed-form moments at one weight: v powers, v moments, u moments
    for indices 0..n_max.  Odd-index moments are exactly zero."""

    lam: float
    v_powers: tuple[float, ...]
    v_moments: tuple[float, ...]
    u_moments: tuple[float, ...]

    def __post_init__(self):
        if self.v_powers[0] != 2.0:
            raise ValueError("zeroth power integral must be 2")
        if any(self.v_moments[n] != 0.0 or self.u_moments[n] != 0.0
               for n in range(1, len(self.v_moments), 2)):
            raise ValueError("odd moments must be exactly zero")


def moment_table(p: Params, n_max: int) -> MomentTable:
    return MomentTable(
        lam=p.lam,
        v_powers=tuple(v_power_rec(n, p) for n in range(n_max + 1)),
        v_moments=tuple(v_moment(n, p) for n in range(n_max + 1)),
        u_moments=tuple(u_moment(n, p) for n in range(n_max + 1)),
    )
