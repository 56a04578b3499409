"""Shift-averaged Bernoulli-type polynomials and the u <-> v moment
transfer they diagonalize.

The family here is B_n rescaled to [-1, 1]: an Appell sequence (its
derivative steps down the index) whose members are eigenvectors of the
two-sided halving average h(x) -> (h((x+1)/2) + h((x-1)/2)) with
eigenvalue 2**(1-n).  All coefficient work is exact rational; floats
only appear when a weight lam enters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .closedform import Poly, v_moment
from .digits import Params


@dataclass(frozen=True)
class RationalPoly:
    """Polynomial with exact Fraction coefficients, index = power of x."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RationalPoly":
        if self.degree <= 0:
            return RationalPoly((Fraction(0),))
        return RationalPoly(tuple(n * c for n, c in enumerate(self.coeffs) if n > 0))

    def compose_affine(self, a: Fraction, b: Fraction) -> "RationalPoly":
        """Exact coefficients of self(a*x + b)."""
        a, b = Fraction(a), Fraction(b)
        acc = [Fraction(0)] * max(len(self.coeffs), 1)
        pw = [Fraction(1)]
        for n, c in enumerate(self.coeffs):
            if n > 0:
                nxt = [Fraction(0)] * (n + 1)
                for k, q in enumerate(pw):
                    nxt[k] += b * q
                    nxt[k + 1] += a * q
                pw = nxt
            for k, q in enumerate(pw):
                acc[k] += c * q
        while len(acc) > 1 and acc[-1] == 0:
            acc.pop()
        return RationalPoly(tuple(acc))

    def as_float_poly(self) -> Poly:
        return Poly(tuple(float(c) for c in self.coeffs))


def c_coeffs(n_max: int) -> list[Fraction]:
    """Taylor coefficients of t/sinh(t) scaled by n!: the free terms of
    the polynomial family.

    c_0 = 1, odd entries vanish, and
    c_{2n} = -sum_{j<n} C(2n, 2j) c_{2j} / (2n - 2j + 1).
    Exact rationals throughout (Python integers never overflow).
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    cs = [Fraction(0)] * (n_max + 1)
    cs[0] = Fraction(1)
    for m in range(2, n_max + 1, 2):
        n = m // 2
        acc = Fraction(0)
        for j in range(n):
            acc += Fraction(math.comb(m, 2 * j), m - 2 * j + 1) * cs[2 * j]
        cs[m] = -acc
    return cs


def p_poly(n: int) -> RationalPoly:
    """n-th member of the family: sum_j C(n,j) c_j x**(n-j)."""
    if n < 0:
        raise ValueError("index must be >= 0")
    cs = c_coeffs(n)
    coeffs = [Fraction(0)] * (n + 1)
    for j in range(n + 1):
        coeffs[n - j] = math.comb(n, j) * cs[j]
    return RationalPoly(tuple(coeffs))


def monomial_in_p(n: int) -> dict[int, Fraction]:
    """Expansion of an even monomial over the polynomial family:
    x**n = sum_j C(n,2j)/(2j+1) * P_{n-2j}.  Keys are family indices."""
    if n < 0 or n % 2 == 1:
        raise ValueError("only even monomials expand over even-step members")
    return {n - 2 * j: Fraction(math.comb(n, 2 * j), 2 * j + 1) for j in range(n // 2 + 1)}


def q_poly(N: int, p: Params) -> Poly:
    """Companion polynomial whose v-pairing gives the u moment of x**N:
    Q_N = sum_j C(N,2j) / ((1 - 2**(2j-N) lam)(2j+1)) * P_{N-2j}.

    Rational steps stay exact; the lam-dependent weights are the only
    float factors."""
    if N < 0 or N % 2 == 1:
        raise ValueError("only even N is defined")
    lam = p.lam
    acc = [0.0] * (N + 1)
    for j in range(N // 2 + 1):
        w = math.comb(N, 2 * j) / ((1.0 - 2.0 ** (2 * j - N) * lam) * (2 * j + 1))
        member = p_poly(N - 2 * j)
        for k, c in enumerate(member.coeffs):
            acc[k] += w * float(c)
    return Poly(tuple(acc))


def u_moment_bernoulli(N: int, p: Params) -> float:
    """Integral of u(x) * x**N via the polynomial-family route:
    pair v with Q_N, then subtract 2/((1-lam)(N+1)).

    Agrees with the determinant route in closedform.u_moment; odd N
    gives exactly zero by evenness."""
    if N < 0:
        raise ValueError("exponent must be >= 0")
    if N % 2 == 1:
        return 0.0
    q = q_poly(N, p)
    pairing = sum(
        c.real * v_moment(n, p) for n, c in enumerate(q.coeffs) if n % 2 == 0
    )
    return pairing - 2.0 / ((1.0 - p.lam) * (N + 1))
