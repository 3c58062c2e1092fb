"""Directed rational bounds for the handful of irrational quantities
(pi, square roots, fractional powers) that enter growth estimates.

Every bound that certifies an inequality is rounded in the safe
direction, so certificates built from these values remain true statements
about the real constants.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

#: rational bracket pi_lo < pi < pi_hi (about 1e-10 wide)
PI_LO = Fraction(31415926535, 10**10)
PI_HI = Fraction(31415926536, 10**10)

TWO_PI_LO = 2 * PI_LO
TWO_PI_HI = 2 * PI_HI


def sqrt_up(x: Fraction, scale: int = 10**24) -> Fraction:
    """Rational upper bound on sqrt(x) for x >= 0."""
    if x < 0:
        raise ValueError("sqrt of a negative rational")
    if x == 0:
        return Fraction(0)
    n = x.numerator * scale * scale // x.denominator
    r = isqrt(n)
    if r * r < n:
        r += 1
    return Fraction(r, scale)


def sqrt_down(x: Fraction, scale: int = 10**24) -> Fraction:
    """Rational lower bound on sqrt(x) for x >= 0."""
    if x < 0:
        raise ValueError("sqrt of a negative rational")
    if x == 0:
        return Fraction(0)
    n = x.numerator * scale * scale // x.denominator
    return Fraction(isqrt(n), scale)


def root_up(x: Fraction, k: int, scale: int = 10**18) -> Fraction:
    """Rational upper bound on x**(1/k) for x >= 0, integer k >= 1."""
    if k == 1:
        return x
    if x < 0:
        raise ValueError("root of a negative rational")
    if x == 0:
        return Fraction(0)
    n = x.numerator * scale**k // x.denominator + 1
    r = _iroot(n, k)
    if r**k < n:
        r += 1
    return Fraction(r, scale)


def root_down(x: Fraction, k: int, scale: int = 10**18) -> Fraction:
    """Rational lower bound on x**(1/k) for x >= 0, integer k >= 1."""
    if k == 1:
        return x
    if x < 0:
        raise ValueError("root of a negative rational")
    if x == 0:
        return Fraction(0)
    n = x.numerator * scale**k // x.denominator
    return Fraction(_iroot(n, k), scale)


def pow_up(x: Fraction, num: int, den: int) -> Fraction:
    """Rational upper bound on x**(num/den) for x >= 0."""
    if den == 1:
        return x**num
    return root_up(x**num, den)


def pow_down(x: Fraction, num: int, den: int) -> Fraction:
    """Rational lower bound on x**(num/den) for x >= 0."""
    if den == 1:
        return x**num
    return root_down(x**num, den)


def _iroot(n: int, k: int) -> int:
    """Floor of the integer k-th root."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0
    r = int(round(n ** (1.0 / k)))
    r = max(r, 1)
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r
