"""Stable evaluation of the exponential-integrator weight functions.

For a >= 0 the three weights are

    phi0(a) = exp(-a)
    phi1(a) = (1 - exp(-a)) / a
    phi2(a) = (a - (1 - exp(-a))) / a**2

with the limits (1, 1, 1/2) at a = 0.  They are the scalar multipliers an
exponential two-stage step applies per eigenvalue of the diagonalised linear
operator, so they must stay accurate over the whole argument range, from the
zero mode (a = 0) up to arguments where exp(-a) underflows.

phi1 is computed through ``expm1`` so no digits are lost for small a; below
``PHI1_SERIES_SPLIT`` it switches to a four-term series whose rounded
evaluation is monotone point by point, because the expm1 quotient can jitter
by one unit in the last place exactly where the true decrease between nearby
arguments is smaller than an ulp.  The closed form of phi2 cancels
catastrophically near 0, so below ``SERIES_SPLIT`` it is evaluated as the
alternating series sum_{k>=0} (-a)**k / (k+2)!; the fixed truncation order
keeps the neglected tail below 1e-21 on that branch, tighter than the 1e-18
cut the series targets.  Beyond roughly a = 708 the exponential underflows
and the formulas degrade gracefully to phi0 = 0, phi1 = 1/a,
phi2 = (a-1)/a**2.

Everything here is a pure function of its argument and safe to call from any
thread.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

__all__ = [
    "PhiEval",
    "phi",
    "phi_ratio",
    "phi_values",
    "SERIES_SPLIT",
    "PHI1_SERIES_SPLIT",
]

SERIES_SPLIT = 0.5
PHI1_SERIES_SPLIT = 1e-4

# Coefficients 1/(k+2)! of the phi2 series.  18 terms leave a tail below
# (0.5**18)/20! ~ 1.6e-24 at the branch point.
_PHI2_COEFFS = [1.0 / factorial(k + 2) for k in range(18)]

# Coefficients 1/(k+1)! of the phi1 series; the truncated a**5 tail stays
# below 1e-18 relative even at ten times the branch point.
_PHI1_COEFFS = [1.0 / factorial(k + 1) for k in range(5)]


@dataclass(frozen=True)
class PhiEval:
    """The three weights evaluated at a single argument.

    For a > 0 the values satisfy 0 < phi1 <= 1, 0 < phi2 <= 1/2 and
    0 < phi2/phi1 <= 1, all three decreasing in a; a = 0 returns the limits.
    """

    a: float
    phi0: float
    phi1: float
    phi2: float


def _alternating_series(a: np.ndarray, coeffs) -> np.ndarray:
    acc = np.full_like(a, coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = c - a * acc
    return acc


def _validate(a: np.ndarray):
    if not np.isfinite(a).all():
        raise ValueError("phi argument must be finite")
    if (a < 0).any():
        raise ValueError("phi argument must be nonnegative")


def phi_values(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised (phi0, phi1, phi2) for nonnegative arguments.

    Accepts scalars or arrays; raises ValueError on negative or non-finite
    input.  The a = 0 entries get the exact limit values.
    """
    a = np.asarray(a, dtype=np.float64)
    _validate(a)
    p0 = np.exp(-a)
    safe = np.where(a == 0.0, 1.0, a)
    # the branch each lane discards may overflow or hit 0/0 harmlessly
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        p1 = np.where(
            a < PHI1_SERIES_SPLIT,
            _alternating_series(a, _PHI1_COEFFS),
            -np.expm1(-a) / safe,
        )
        closed = (a + np.expm1(-a)) / (safe * safe)
        p2 = np.where(a < SERIES_SPLIT, _alternating_series(a, _PHI2_COEFFS), closed)
    return p0, p1, p2


def phi(a: float) -> PhiEval:
    """Evaluate all three weights at one nonnegative argument."""
    arr = np.asarray(float(a))
    p0, p1, p2 = phi_values(arr)
    return PhiEval(a=float(a), phi0=float(p0), phi1=float(p1), phi2=float(p2))


def phi_ratio(a) -> np.ndarray | float:
    """phi2(a)/phi1(a), the second-stage correction weight relative to the
    first; lies in (0, 1] with limit 1/2 at a = 0."""
    scalar = np.isscalar(a) or getattr(a, "ndim", 0) == 0
    _, p1, p2 = phi_values(a)
    ratio = p2 / p1
    return float(ratio) if scalar else ratio
