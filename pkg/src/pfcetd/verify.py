"""Randomized mechanical checks of the energy-decay machinery.

Every estimate the global decay argument leans on is turned into an
executable check over seeded random fields: the summation-by-parts
identities of the difference calculus, the per-mode bounds tying the
smoothing operators to the diffusion products, the two-field damping
inequality, the explicit cubic gradient bound, and the step-by-step energy
decrease of an actual run.  Equality claims are evaluated along two
independent routes (real-space stencils against transform-space sums) and
compared with a relative tolerance; inequality claims are allowed a one-sided
slack proportional to the magnitude of both sides.

Each report is reproducible: the per-trial seed schedule depends only on the
base seed and the trial index, never on execution order, so repeated runs
give bit-identical worst violations.  Trial fields alternate between
band-limited noise (which probes the near-equality regime of the bounds) and
full-spectrum noise (which probes the extremes); both populations matter
because the claims hold for arbitrary grid functions.

Norms of the form ||G0 grad lap f||_2 are evaluated in transform space as
eigenvalue-weighted coefficient sums; the exactness of that shortcut against
materialising the staggered fields is itself one of the tested identities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (
    GridSpec,
    RealField,
    StaggeredField,
    divergence,
    grad,
    inner,
    laplacian,
    mean,
    random_field,
    staggered_inner,
)
from .scheme import RunTrace
from .spectral import SymbolTable, apply_diagonal, build_symbols, dft, lowpass

__all__ = [
    "CheckReport",
    "EmbeddingEstimate",
    "TOLERANCES",
    "check_sbp",
    "check_prop1",
    "check_prop2",
    "check_nonlinear",
    "estimate_embedding_constants",
    "check_dissipation",
]

#: Pass tolerance per check name: a check passes iff its worst violation is
#: no more negative than -tolerance.
TOLERANCES = {
    "sbp": 1e-12,
    "prop1.interpolation": 1e-10,
    "prop1.step_bound": 1e-10,
    "prop1.product_identity": 1e-11,
    "prop1.product_lower": 1e-10,
    "prop1.decayed_product": 1e-10,
    "prop1.operator_norms": 1e-10,
    "prop2.refined": 1e-10,
    "prop2.halved": 1e-10,
    "nonlinear": 1e-12,
    "embed": 0.0,
    "dissipation.energy": 1e-11,
    "dissipation.kappa": 1e-12,
}


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one named check over many trials.

    ``worst_violation`` is the most negative normalised slack seen (0 when
    the claim was never violated) and ``worst_seed`` the per-trial seed that
    produced it (for trace-based checks it holds the step index instead).
    ``passed`` is equivalent to worst_violation >= -tolerance.
    """

    name: str
    trials: int
    worst_violation: float
    worst_seed: int
    passed: bool
    tolerance: float
    detail: str = ""


class _Worst:
    """Tracks the most negative slack and where it happened."""

    def __init__(self, name: str):
        self.name = name
        self.tolerance = TOLERANCES[name]
        self.value = 0.0
        self.where = -1

    def update(self, slack: float, where: int):
        slack = min(0.0, slack)
        if slack < self.value:
            self.value = slack
            self.where = where

    def report(self, trials: int, detail: str = "") -> CheckReport:
        return CheckReport(
            name=self.name,
            trials=trials,
            worst_violation=self.value,
            worst_seed=self.where,
            passed=self.value >= -self.tolerance,
            tolerance=self.tolerance,
            detail=detail,
        )


def _eq_slack(a: float, b: float) -> float:
    """Negative relative residual of an equality claim (0 if both vanish)."""
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return 0.0
    return -abs(a - b) / scale


def _ineq_slack(lhs: float, rhs: float) -> float:
    """Normalised margin of a claim lhs >= rhs; negative means violated."""
    return (lhs - rhs) / (max(abs(lhs), abs(rhs)) + 1.0)


def _trial_field(
    spec: GridSpec,
    rng: np.random.Generator,
    index: int,
    amplitude: float = 1.0,
    mean_zero: bool = False,
) -> RealField:
    """Band-limited noise on even trials, full-spectrum noise on odd ones."""
    f = random_field(spec, rng, amplitude)
    if index % 2 == 0:
        f = lowpass(f, max(1, spec.n // 4))
    if mean_zero:
        f = RealField(spec, f.values - np.mean(f.values))
    return f


# ---------------------------------------------------------------------------
# summation by parts


def check_sbp(spec: GridSpec, seed: int, trials: int) -> CheckReport:
    """All five summation-by-parts identities on random field pairs."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    worst = _Worst("sbp")
    for t in range(trials):
        trial_seed = seed + t
        rng = np.random.default_rng(trial_seed)
        psi = _trial_field(spec, rng, t)
        phi = _trial_field(spec, rng, t + 1)
        noise = StaggeredField(
            spec, tuple(rng.uniform(-1, 1, spec.shape) for _ in range(spec.dim))
        )
        vec = grad(_trial_field(spec, rng, t)) + noise

        lap_phi = laplacian(phi)
        lap2_phi = laplacian(lap_phi)
        lap_psi = laplacian(psi)
        lap2_psi = laplacian(lap_psi)
        lap3_psi = laplacian(lap2_psi)
        pairs = (
            (inner(psi, divergence(vec)), -staggered_inner(grad(psi), vec)),
            (inner(psi, lap_phi), -staggered_inner(grad(psi), grad(phi))),
            (inner(psi, lap2_phi), inner(lap_psi, lap_phi)),
            (inner(lap_psi, lap2_phi), -staggered_inner(grad(psi), grad(lap2_phi))),
            (inner(lap3_psi, lap2_phi),
             -staggered_inner(grad(lap2_psi), grad(lap2_phi))),
        )
        for lhs, rhs in pairs:
            worst.update(_eq_slack(lhs, rhs), trial_seed)
    return worst.report(trials)


# ---------------------------------------------------------------------------
# per-mode smoothing and diffusion bounds


def _weighted_sum(table: SymbolTable, coeff_sq: np.ndarray, lap_power: int) -> float:
    """volume * sum(phi1 * lap**power * |fhat|**2), the transform-space value
    of the squared smoothed-derivative norms."""
    w = table.multiplier("phi1") * table.lap_eigs**lap_power
    return table.spec.volume * float(np.sum(w * coeff_sq))


def _smoothed_product_field(f: RealField, table: SymbolTable) -> RealField:
    """The smoothed stiff flux phi1(dt*L) L f, materialised on the grid."""
    c = dft(f).coeffs * table.multiplier("phi1") * table.lin_eigs
    return RealField(f.spec, np.fft.ifftn(c).real * f.spec.size)


def check_prop1(
    spec: GridSpec, kappa: float, dt: float, seed: int, trials: int
) -> list[CheckReport]:
    """Bounds relating the smoothing operators to the diffusion products.

    Requires kappa >= 1 (the claims assume it).  Checked on random mean-zero
    fields: the interpolation bound on the smoothed mixed derivative, the
    step bound tau*||G5 f||^2 <= ||lap f||^2, the two-route identity
    <phi1(dtL) L f, lap^2 f> = ||G5 f||^2 with its lower bound, the decayed
    variant, and the four operator-norm contractions.
    """
    if kappa < 1:
        raise ValueError(f"these bounds require kappa >= 1, got {kappa}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    table = build_symbols(spec, kappa, dt)
    names = (
        "prop1.interpolation",
        "prop1.step_bound",
        "prop1.product_identity",
        "prop1.product_lower",
        "prop1.decayed_product",
        "prop1.operator_norms",
    )
    worst = {n: _Worst(n) for n in names}
    for t in range(trials):
        trial_seed = seed + t
        rng = np.random.default_rng(trial_seed)
        f = _trial_field(spec, rng, t, mean_zero=True)
        coeff_sq = np.abs(dft(f).coeffs) ** 2

        mixed_sq = _weighted_sum(table, coeff_sq, 3)     # ||G0 grad lap f||^2
        lap_sq = _weighted_sum(table, coeff_sq, 2)       # ||G0 lap f||^2
        high_sq = _weighted_sum(table, coeff_sq, 5)      # ||G0 grad lap^2 f||^2
        worst["prop1.interpolation"].update(
            _ineq_slack(lap_sq ** (1.0 / 3.0) * high_sq ** (1.0 / 6.0),
                        np.sqrt(mixed_sq)),
            trial_seed,
        )

        g5 = apply_diagonal(f, table, "G5")
        g5_sq = inner(g5, g5)
        lap_f = laplacian(f)
        worst["prop1.step_bound"].update(
            _ineq_slack(inner(lap_f, lap_f), dt * g5_sq), trial_seed
        )

        product = inner(_smoothed_product_field(f, table), laplacian(lap_f))
        worst["prop1.product_identity"].update(
            _eq_slack(product, g5_sq), trial_seed
        )
        worst["prop1.product_lower"].update(
            _ineq_slack(g5_sq, 0.5 * high_sq + (kappa - 1.0) * mixed_sq),
            trial_seed,
        )

        decayed = apply_diagonal(f, table, "exp")
        g5_decayed = apply_diagonal(decayed, table, "G5")
        product_decayed = inner(
            _smoothed_product_field(f, table), laplacian(laplacian(decayed))
        )
        worst["prop1.decayed_product"].update(
            _ineq_slack(product_decayed, inner(g5_decayed, g5_decayed)),
            trial_seed,
        )

        norm_f = np.sqrt(inner(f, f))
        g0 = apply_diagonal(f, table, "G0")
        g3 = apply_diagonal(f, table, "G3")
        g4 = apply_diagonal(f, table, "G4")
        norm_g0 = np.sqrt(inner(g0, g0))
        norm_g3 = np.sqrt(inner(g3, g3))
        norm_g4 = np.sqrt(inner(g4, g4))
        for lhs, rhs in (
            (norm_f, norm_g0),
            (norm_g0, norm_g3),
            (norm_f / np.sqrt(2.0), norm_g3),
            (norm_f, norm_g4),
        ):
            worst["prop1.operator_norms"].update(_ineq_slack(lhs, rhs), trial_seed)
    return [worst[n].report(trials) for n in names]


def check_prop2(
    spec: GridSpec, kappa: float, dt: float, seed: int, trials: int
) -> list[CheckReport]:
    """Two-field damping inequality (no kappa >= 1 assumption).

    For arbitrary periodic f and g the decayed diffusion product plus the
    Laplacian distance between g and the decayed f dominates
    dt*||G5 g||^2; the halved variant follows from the single-field bounds
    and is checked alongside.  Each trial exercises an independent random
    pair and the structured cases g = exp(-dt L) f and g = f.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    table = build_symbols(spec, kappa, dt)
    names = ("prop2.refined", "prop2.halved")
    worst = {n: _Worst(n) for n in names}
    for t in range(trials):
        trial_seed = seed + t
        rng = np.random.default_rng(trial_seed)
        f = _trial_field(spec, rng, t)
        decayed = apply_diagonal(f, table, "exp")
        base = dt * inner(
            _smoothed_product_field(f, table), laplacian(laplacian(decayed))
        )
        for g in (
            _trial_field(spec, rng, t + 1),
            decayed,
            f,
        ):
            diff_lap = laplacian(g - decayed)
            lhs = base + inner(diff_lap, diff_lap)
            g5g = apply_diagonal(g, table, "G5")
            rhs = dt * inner(g5g, g5g)
            worst["prop2.refined"].update(_ineq_slack(lhs, rhs), trial_seed)
            worst["prop2.halved"].update(_ineq_slack(lhs, 0.5 * rhs), trial_seed)
    return [worst[n].report(trials) for n in names]


# ---------------------------------------------------------------------------
# nonlinear bounds and embedding constants


def check_nonlinear(spec: GridSpec, seed: int, trials: int) -> CheckReport:
    """Explicit cubic gradient bound ||grad(f**3)|| <= 3*||f||_inf**2*||grad f||,
    swept over amplitudes 0.1, 1 and 10."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    amplitudes = (0.1, 1.0, 10.0)
    worst = _Worst("nonlinear")
    for t in range(trials):
        trial_seed = seed + t
        rng = np.random.default_rng(trial_seed)
        f = _trial_field(spec, rng, t, amplitude=amplitudes[t % 3])
        cube = RealField(spec, f.values**3)
        gc = grad(cube)
        gf = grad(f)
        lhs = 3.0 * float(np.max(np.abs(f.values))) ** 2 * np.sqrt(
            staggered_inner(gf, gf)
        )
        rhs = np.sqrt(staggered_inner(gc, gc))
        worst.update(_ineq_slack(lhs, rhs), trial_seed)
    return worst.report(trials)


@dataclass(frozen=True)
class EmbeddingEstimate:
    """Empirical lower bounds for the two embedding constants.

    ``c_sup`` is the largest observed ||f||_inf / (|mean f| + ||lap f||_2)
    and ``c_grad`` the largest ||grad f||_2 / ||lap f||_2; both are sample
    maxima, hence lower bounds for the true domain constants, and should be
    inflated by a safety factor before feeding the theory policy.
    """

    c_sup: float
    c_grad: float
    trials: int
    seed: int

    def as_report(self) -> CheckReport:
        return CheckReport(
            name="embed",
            trials=self.trials,
            worst_violation=0.0,
            worst_seed=self.seed,
            passed=True,
            tolerance=TOLERANCES["embed"],
            detail=f"C2_emp={self.c_sup:.17g} C3_emp={self.c_grad:.17g}",
        )


def estimate_embedding_constants(
    spec: GridSpec, seed: int, trials: int
) -> EmbeddingEstimate:
    """Running maxima of the embedding ratios over random nonconstant fields."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    c_sup = 0.0
    c_grad = 0.0
    used = 0
    for t in range(trials):
        rng = np.random.default_rng(seed + t)
        f = _trial_field(spec, rng, t)
        lap = laplacian(f)
        lap_norm = np.sqrt(inner(lap, lap))
        if lap_norm == 0.0:
            continue
        used += 1
        g = grad(f)
        linf = float(np.max(np.abs(f.values)))
        c_sup = max(c_sup, linf / (abs(mean(f)) + lap_norm))
        c_grad = max(c_grad, float(np.sqrt(staggered_inner(g, g))) / lap_norm)
    if used == 0:
        raise ValueError("every sampled field was constant; cannot estimate")
    return EmbeddingEstimate(c_sup=c_sup, c_grad=c_grad, trials=trials, seed=seed)


# ---------------------------------------------------------------------------
# trajectory checks


def check_dissipation(trace: RunTrace) -> list[CheckReport]:
    """Step-by-step energy decrease and stabilisation condition of a run.

    The energy may increase by at most 1e-11*(1 + |E|) per step (roundoff
    slack only), and the realised per-step max-norm must satisfy the
    stabilisation condition kappa >= (3*m0**2 - eps)/2.  ``worst_seed`` in
    these reports holds the first/worst violating step index.
    """
    if not trace.records:
        raise ValueError("trace has no records")
    energy_worst = _Worst("dissipation.energy")
    kappa_worst = _Worst("dissipation.kappa")
    first_energy = None
    first_kappa = None
    for prev, cur in zip(trace.records, trace.records[1:]):
        slack = (prev.energy - cur.energy) / (1.0 + abs(prev.energy))
        energy_worst.update(slack, cur.step)
        if slack < -TOLERANCES["dissipation.energy"] and first_energy is None:
            first_energy = cur.step
        required = (3.0 * cur.m0**2 - trace.epsilon) / 2.0
        kslack = (cur.kappa - required) / (1.0 + cur.kappa)
        kappa_worst.update(kslack, cur.step)
        if kslack < -TOLERANCES["dissipation.kappa"] and first_kappa is None:
            first_kappa = cur.step
    n = len(trace.records) - 1
    detail_e = "" if first_energy is None else f"first_violation_step={first_energy}"
    detail_k = "" if first_kappa is None else f"first_violation_step={first_kappa}"
    return [
        energy_worst.report(n, detail_e),
        kappa_worst.report(n, detail_k),
    ]
