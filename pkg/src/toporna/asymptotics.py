"""Singularity analysis: growth rates, arc-count limit law, exponent fits.

The dominant singularity of every genus-g series in a structure class is the
smallest positive root of the discriminant B^2 - 4 (x^2 y)^r A at y = 1;
genus only changes the subexponential factor n^((6g-3)/2).  This module
locates that root numerically (mpmath bisection to controlled precision),
differentiates the root curve implicitly to get the arc-count limit law, and
provides a least-squares helper for reading exponents off exact coefficient
data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .genfun import StructureClass, discriminant_poly
from .series import Polynomial, XYPolynomial


def _poly_eval(p: Polynomial, x):
    acc = mp.mpf(0)
    for c in reversed(p.coeffs):
        if isinstance(c, Fraction):
            c = mp.mpf(c.numerator) / c.denominator
        acc = acc * x + c
    return acc


def _at_y1(p: XYPolynomial) -> Polynomial:
    return p.at_y(1)


def singularity(cls_: StructureClass, dps: int = 50):
    """Smallest positive root of the discriminant at marker value 1."""
    poly = _at_y1(discriminant_poly(cls_))
    with mp.workdps(dps + 15):
        def f(t):
            return _poly_eval(poly, t)

        step = mp.mpf(1) / 1024
        lo = mp.mpf(0)
        hi = None
        t = step
        while t < 2:
            if f(t) < 0:
                hi = t
                lo = t - step
                break
            t += step
        if hi is None:
            raise ArithmeticError("no sign change found below x = 2")
        target = mp.mpf(10) ** (-(dps + 10))
        while hi - lo > target:
            mid = (lo + hi) / 2
            if f(mid) < 0:
                hi = mid
            else:
                lo = mid
        return (lo + hi) / 2


@dataclass(frozen=True)
class ArcLaw:
    """Arc-count limit law data for one structure class (any genus >= 0)."""

    rho: object
    rho_d1: object
    rho_d2: object
    mean: object
    variance: object


def arc_law(cls_: StructureClass, dps: int = 50) -> ArcLaw:
    """Mean and variance coefficients of the arc-count limit law.

    The number of arcs in a random length-n structure is asymptotically
    Gaussian with mean ``mean * n`` and variance ``variance * n``; both
    coefficients are independent of genus.
    """
    disc = discriminant_poly(cls_)
    px = _at_y1(disc.partial_x())
    py = _at_y1(disc.partial_y())
    pxx = _at_y1(disc.partial_x().partial_x())
    pxy = _at_y1(disc.partial_x().partial_y())
    pyy = _at_y1(disc.partial_y().partial_y())
    with mp.workdps(dps + 15):
        rho = singularity(cls_, dps)
        vx = _poly_eval(px, rho)
        vy = _poly_eval(py, rho)
        d1 = -vy / vx
        d2 = -(_poly_eval(pxx, rho) * d1 * d1
               + 2 * _poly_eval(pxy, rho) * d1
               + _poly_eval(pyy, rho)) / vx
        ratio = d1 / rho
        mean = -ratio
        variance = ratio * ratio - (d2 + d1) / rho
        return ArcLaw(rho, d1, d2, mean, variance)


def mean_arc_grid(max_arc: int = 6, max_stack: int = 6) -> dict[tuple[int, int], float]:
    """Mean-arc coefficients for every class with min_arc <= min_stack + 1."""
    out: dict[tuple[int, int], float] = {}
    for lam in range(1, max_arc + 1):
        for r in range(1, max_stack + 1):
            if lam > r + 1:
                continue
            out[(lam, r)] = float(arc_law(StructureClass(lam, r)).mean)
    return out


# Numerators of the limiting type probabilities for genus-1 structures in the
# unconstrained class, over the common denominator 16n - 51.  Each entry is
# (constant, coefficient of sqrt(3*pi*n), coefficient of n).
GENUS1_TYPE_NUMERATORS = {
    "H": (288, 0, 0),
    "K": (-432, 24, 0),
    "L": (-432, 24, 0),
    "M": (525, -48, 16),
}
GENUS1_TYPE_DENOMINATOR = (-51, 0, 16)


def genus1_type_probability(kind: str, n: int, dps: int = 30):
    """Asymptotic probability that a genus-1 structure's block has this type."""
    a, b, c = GENUS1_TYPE_NUMERATORS[kind]
    da, db, dc = GENUS1_TYPE_DENOMINATOR
    with mp.workdps(dps):
        root = mp.sqrt(3 * mp.pi * n)
        return (a + b * root + c * n) / (da + db * root + dc * n)


def fit_power_exponent(values, n_lo: int, n_hi: int, rho, dps: int = 50):
    """Least-squares exponent d in values[n] ~ C * n^d * rho^(-n).

    ``values`` is indexable by n (list or dict) with positive entries over
    [n_lo, n_hi].  Returns (d, log_C) as floats.
    """
    with mp.workdps(dps):
        log_rho = mp.log(mp.mpf(rho))
        xs = []
        ys = []
        for n in range(n_lo, n_hi + 1):
            v = values[n]
            if v <= 0:
                raise ValueError(f"nonpositive value at n={n}")
            xs.append(mp.log(n))
            ys.append(mp.log(mp.mpf(v)) + n * log_rho)
        m = len(xs)
        mean_x = mp.fsum(xs) / m
        mean_y = mp.fsum(ys) / m
        sxx = mp.fsum((x - mean_x) ** 2 for x in xs)
        sxy = mp.fsum(
            (x - mean_x) * (y - mean_y) for x, y in zip(xs, ys)
        )
        slope = sxy / sxx
        intercept = mean_y - slope * mean_x
        return float(slope), float(intercept)
