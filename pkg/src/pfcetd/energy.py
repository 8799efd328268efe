"""Discrete free energy of the crystal density field and its diagnostics.

The energy of a field u at undercooling epsilon splits into four parts,

    quartic     =  (1/4) <u**4, 1>
    quadratic   =  ((1 - epsilon)/2) * ||u||_2**2
    gradient    = -||grad_h u||_2**2
    biharmonic  =  (1/2) * ||lap_h u||_2**2

whose sum is the total.  The gradient part is the only indefinite one, which
is why the parts are exposed separately: its cancellation against the
biharmonic part is worth watching in diagnostics.  An equivalent single
formula replaces the last three parts by (1/2)||u + lap_h u||_2**2 minus
(epsilon/2)||u||_2**2; discrete summation by parts makes the two forms agree
identically, and that agreement is a test, not an assumption.

The chemical potential u**3 - epsilon*u + (I + lap_h)**2 u is the variational
derivative of the energy, with the squared Helmholtz-like operator applied
through its diagonal multiplier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import RealField, grad, inner, laplacian, staggered_inner
from .spectral import apply_diagonal, build_symbols, SymbolTable

__all__ = [
    "EnergyBreakdown",
    "H2Bound",
    "energy",
    "energy_equivalent",
    "chemical_potential",
    "h2_bound",
]


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy parts and their compensated total."""

    quartic: float
    quadratic: float
    gradient: float
    biharmonic: float
    total: float


@dataclass(frozen=True)
class H2Bound:
    """One evaluation of the Laplacian-norm bound 2*sqrt(E + |domain|)."""

    lhs: float
    rhs: float
    holds: bool


def _check_epsilon(epsilon: float):
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")


def energy(u: RealField, epsilon: float) -> EnergyBreakdown:
    """Energy of u split into quartic/quadratic/gradient/biharmonic parts.

    Finite fields near the overflow threshold can push single parts past the
    float range; the total then degrades to inf/nan instead of raising, so
    diagnostics never kill a run that the divergence check would catch.
    """
    _check_epsilon(epsilon)
    vol_cell = u.spec.h**u.spec.dim
    v = u.values
    with np.errstate(over="ignore"):
        quartic = 0.25 * vol_cell * float(np.sum(v**4))
        quadratic = 0.5 * (1.0 - epsilon) * inner(u, u)
        g = grad(u)
        gradient = -staggered_inner(g, g)
        lap = laplacian(u)
        biharmonic = 0.5 * inner(lap, lap)
    parts = (quartic, quadratic, gradient, biharmonic)
    if all(map(math.isfinite, parts)):
        total = math.fsum(parts)
    else:
        total = quartic + quadratic + gradient + biharmonic
    return EnergyBreakdown(quartic, quadratic, gradient, biharmonic, total)


def energy_equivalent(u: RealField, epsilon: float) -> float:
    """Same energy through the (I + lap_h) form; equals energy(u).total up to
    roundoff because of discrete summation by parts."""
    _check_epsilon(epsilon)
    vol_cell = u.spec.h**u.spec.dim
    v = u.values
    quartic = 0.25 * vol_cell * float(np.sum(v**4))
    shifted = u + laplacian(u)
    return math.fsum(
        (quartic, -0.5 * epsilon * inner(u, u), 0.5 * inner(shifted, shifted))
    )


def chemical_potential(
    u: RealField, epsilon: float, table: SymbolTable | None = None
) -> RealField:
    """Variational derivative u**3 - epsilon*u + (I + lap_h)**2 u.

    A symbol table may be passed to reuse cached multipliers; kappa and dt in
    it are irrelevant for this operator.
    """
    _check_epsilon(epsilon)
    if table is None:
        table = build_symbols(u.spec, kappa=0.0, dt=1.0)
    squared_helmholtz = apply_diagonal(u, table, "stab_lap")
    return RealField(
        u.spec, u.values**3 - epsilon * u.values + squared_helmholtz.values
    )


def h2_bound(u: RealField, epsilon: float) -> H2Bound:
    """Check ||lap_h u||_2 <= 2*sqrt(E(u) + |domain|).

    The bound holds for every field because the pointwise part of the energy
    is bounded below by -1 once the gradient part is absorbed, so it is
    checked as a universal inequality with a relative slack of 1e-10.
    """
    total = energy(u, epsilon).total
    shifted = total + u.spec.volume
    lap = laplacian(u)
    lhs = float(np.sqrt(inner(lap, lap)))
    if shifted < 0.0:
        return H2Bound(lhs=lhs, rhs=float("nan"), holds=False)
    rhs = 2.0 * float(np.sqrt(shifted))
    return H2Bound(lhs=lhs, rhs=rhs, holds=lhs <= rhs + 1e-10 * rhs)
