"""Signed binary digit expansions of points in [-1, 1].

Every x in [-1, 1] is written as x = x_0/2 + x_1/4 + x_2/8 + ... with
digits x_n in {-1, +1}.  A finite prefix of depth M pins x down to a
dyadic cell of width 2**-M; all curve evaluations downstream are
constant on such cells.  Dyadic rationals have two expansions; we fix
the convention that a zero remainder takes the +1 digit, which makes
`expand` total and deterministic (integrals never see the difference,
the ambiguous set has measure zero).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class DigitExpansion:
    """A depth-M prefix (x_0, ..., x_M) of a signed binary expansion."""

    digits: tuple[int, ...]

    def __post_init__(self):
        if len(self.digits) == 0:
            raise ValueError("expansion needs at least one digit")
        if any(d not in (-1, 1) for d in self.digits):
            raise ValueError("digits must be -1 or +1")

    @property
    def depth(self) -> int:
        return len(self.digits) - 1

    def midpoint(self) -> float:
        """Center of the dyadic cell this prefix represents.

        Summed from the least significant digit up so every partial sum
        is exactly representable (all are dyadics with few bits).
        """
        acc = 0.0
        for n in range(self.depth, -1, -1):
            acc += self.digits[n] * 2.0 ** -(n + 1)
        return acc

    def interval(self) -> tuple[float, float]:
        """Closed cell [midpoint - 2**-(M+1), midpoint + 2**-(M+1)]."""
        half = 2.0 ** -(self.depth + 1)
        mid = self.midpoint()
        return mid - half, mid + half


@dataclass(frozen=True)
class Params:
    """Geometric weight of the loop counts; must satisfy |lam| < 1."""

    lam: float

    def __post_init__(self):
        if not abs(self.lam) < 1.0:
            raise ValueError(f"weight must satisfy |lam| < 1, got {self.lam}")


def expand(x: float, depth: int) -> DigitExpansion:
    """Greedy signed binary expansion of x to the given depth.

    Remainder recursion: r_0 = x, x_n = +1 if r_n >= 0 else -1,
    r_{n+1} = 2 r_n - x_n.  The exact tail identity
    x = sum_{n<=M} x_n 2**-(n+1) + 2**-(M+1) r_{M+1} holds with
    |r_{M+1}| <= 1.
    """
    if not -1.0 <= x <= 1.0:
        raise ValueError(f"point must lie in [-1, 1], got {x}")
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    digits = []
    r = float(x)
    for _ in range(depth + 1):
        d = 1 if r >= 0.0 else -1
        digits.append(d)
        r = 2.0 * r - d
    return DigitExpansion(tuple(digits))


def shift(e: DigitExpansion) -> DigitExpansion:
    """Drop the leading digit: (x_0, ..., x_M) -> (x_1, ..., x_M).

    On values this doubles x and folds back into [-1, 1], the fractal
    resize map the loop counts recurse through.
    """
    if e.depth < 1:
        raise ValueError("cannot shift a depth-0 expansion")
    return DigitExpansion(e.digits[1:])


def swap_pairs(e: DigitExpansion) -> DigitExpansion:
    """Exchange x_{2n} <-> x_{2n+1} in every complete pair.

    A trailing unpaired digit is left in place.  The return-counting
    curve is invariant under this map.
    """
    ds = list(e.digits)
    for k in range(0, len(ds) - 1, 2):
        ds[k], ds[k + 1] = ds[k + 1], ds[k]
    return DigitExpansion(tuple(ds))


def negate(e: DigitExpansion) -> DigitExpansion:
    """Flip every digit; represents -x.  Involution."""
    return DigitExpansion(tuple(-d for d in e.digits))
