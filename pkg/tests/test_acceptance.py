"""Acceptance suite: one test per release criterion, each at its stated
tolerance, printing one pass line per criterion (run with ``pytest -s``).

The expensive trajectory (2-D, N=64, 10^4 steps) is computed once through
the command-line driver and shared by the mass, dissipation and resume
criteria.
"""

import math
import time

import numpy as np
import pytest

from _oracles import mp_phi_floats
from conftest import rough_field
from pfcetd.cli import cmd_constants, order_study, parse_config, run_simulation
from pfcetd.energy import energy, energy_equivalent, chemical_potential
from pfcetd.grid import GridSpec, RealField, inner, laplacian
from pfcetd.phifunc import phi, phi_values
from pfcetd.scheme import constants_chain
from pfcetd.spectral import apply_diagonal, build_symbols, lowpass
from pfcetd.verify import (
    check_dissipation,
    check_nonlinear,
    check_prop1,
    check_prop2,
    check_sbp,
)

LONG_L = 16 * np.pi

LONG_CONFIG = f"""
dim = 2
N = 64
L = {LONG_L!r}
epsilon = 0.25
tau = 0.01
n_steps = 10000
kappa_policy = lemma_adaptive
ic = constant_noise
beta0 = 0.07
delta = 0.01
seed = 2024
snapshot_every = 5000
checkpoint_every = 1000
out_dir = UNSET
"""

ORDER_CONFIG = f"""
dim = 2
N = 64
L = {LONG_L!r}
epsilon = 0.25
tau = 0.01
n_steps = 1
kappa_policy = fixed
kappa = 1.0
ic = constant_noise
beta0 = 0.07
delta = 0.01
seed = 7
noise_cutoff = 8
out_dir = UNSET
"""


def _ok(num: int, text: str):
    print(f"[acceptance] criterion {num:02d} PASS: {text}")


def _write_config(tmp_path_factory, text, name):
    base = tmp_path_factory.mktemp(name)
    path = base / "run.cfg"
    path.write_text(text.replace("out_dir = UNSET", f"out_dir = {base/'out'}"))
    return path, base / "out"


@pytest.fixture(scope="module")
def long_run(tmp_path_factory):
    """The shared 10^4-step trajectory, driven through the CLI layer."""
    cfg_path, out = _write_config(tmp_path_factory, LONG_CONFIG, "long")
    config = parse_config(str(cfg_path))
    code, trace = run_simulation(config)
    assert code == 0
    return config, out, trace


def test_c01_summation_by_parts_identities():
    start = time.perf_counter()
    for dim, n in ((2, 16), (3, 8)):
        spec = GridSpec(dim=dim, n=n, length=2 * np.pi)
        report = check_sbp(spec, seed=11, trials=100)
        assert report.passed, report
        assert report.worst_violation >= -1e-12
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _ok(1, f"five SBP identities, 100 pairs per dimension ({elapsed:.2f}s)")


def test_c02_stencil_spectral_equivalence():
    start = time.perf_counter()
    for dim, n in ((2, 16), (3, 8)):
        spec = GridSpec(dim=dim, n=n, length=2 * np.pi)
        table = build_symbols(spec, kappa=0.0, dt=1.0)
        for seed in range(50):
            f = rough_field(spec, 7000 + seed)
            stencil = laplacian(f)
            diagonal = apply_diagonal(f, table, "laplacian")
            scale = np.max(np.abs(stencil.values))
            assert np.max(np.abs(stencil.values - diagonal.values)) <= 1e-12 * scale
    elapsed = time.perf_counter() - start
    assert elapsed < 2.0
    _ok(2, f"Laplacian stencil equals its diagonal symbol, 50 fields x 2 dims "
           f"({elapsed:.2f}s)")


def test_c03_weight_function_accuracy():
    start = time.perf_counter()
    assert (phi(0.0).phi0, phi(0.0).phi1, phi(0.0).phi2) == (1.0, 1.0, 0.5)
    a_vals = np.geomspace(1e-14, 708.0, 10_000)
    p0, p1, p2 = phi_values(a_vals)
    for a, v0, v1, v2 in zip(a_vals, p0, p1, p2):
        r0, r1, r2 = mp_phi_floats(a)
        if r0 > 1e-280:
            assert abs(v0 - r0) <= 1e-14 * r0
        assert abs(v1 - r1) <= 1e-14 * r1
        assert abs(v2 - r2) <= 1e-14 * r2
    assert np.all(np.diff(p0) <= 0.0)
    assert np.all(np.diff(p1) <= 0.0)
    assert np.all(np.diff(p2) <= 0.0)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    _ok(3, f"weights within 1e-14 of extended precision at 1e4 points, "
           f"monotone ({elapsed:.2f}s)")


def test_c04_diffusion_bound_suite():
    start = time.perf_counter()
    spec = GridSpec(dim=2, n=16, length=2 * np.pi)
    for kappa in (1.0, 2.0, 10.0):
        for dt in (1e-3, 1e-1, 1.0):
            reports = check_prop1(spec, kappa=kappa, dt=dt, seed=23, trials=200)
            for r in reports:
                assert r.passed, r
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    _ok(4, f"smoothing/diffusion bounds, 200 fields x 9 (kappa, tau) pairs "
           f"({elapsed:.1f}s)")


def test_c05_two_field_bound_suite():
    start = time.perf_counter()
    spec = GridSpec(dim=2, n=16, length=2 * np.pi)
    for kappa, dt in ((0.0, 1e-3), (1.0, 0.1), (5.0, 1.0)):
        reports = check_prop2(spec, kappa=kappa, dt=dt, seed=29, trials=200)
        for r in reports:
            assert r.passed, r
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    _ok(5, f"two-field damping bound, 200 pairs plus structured cases x 3 "
           f"settings ({elapsed:.1f}s)")


def test_c06_cubic_gradient_bound():
    start = time.perf_counter()
    spec = GridSpec(dim=2, n=16, length=2 * np.pi)
    report = check_nonlinear(spec, seed=31, trials=500)
    assert report.passed, report
    assert report.worst_violation >= -1e-12
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _ok(6, f"cubic gradient bound with constant 3, 500 fields over amplitudes "
           f"0.1/1/10 ({elapsed:.2f}s)")


def test_c07_energy_form_equivalence():
    start = time.perf_counter()
    spec = GridSpec(dim=2, n=16, length=2 * np.pi)
    for seed in range(100):
        u = rough_field(spec, 9000 + seed, amplitude=1.5)
        a = energy(u, 0.25).total
        b = energy_equivalent(u, 0.25)
        assert abs(a - b) <= 1e-12 * (1.0 + abs(a))
    elapsed = time.perf_counter() - start
    assert elapsed < 2.0
    _ok(7, f"both energy formulas agree to 1e-12 on 100 fields ({elapsed:.2f}s)")


def test_c08_variational_consistency():
    start = time.perf_counter()
    spec = GridSpec(dim=2, n=16, length=4 * np.pi)
    u = lowpass(rough_field(spec, 90, amplitude=1.5), 2)
    v = lowpass(rough_field(spec, 91, amplitude=1.5), 2)
    pairing = inner(chemical_potential(u, 0.25), v)
    errors = []
    for s in (1e-3, 1e-4):
        plus = energy(RealField(spec, u.values + s * v.values), 0.25).total
        minus = energy(RealField(spec, u.values - s * v.values), 0.25).total
        errors.append(abs((plus - minus) / (2.0 * s) - pairing))
    floor = np.finfo(float).eps * abs(energy(u, 0.25).total) / 2e-4
    assert errors[1] > 100.0 * floor  # probe regime is above the roundoff floor
    ratio = errors[0] / errors[1]
    assert 90.0 <= ratio <= 110.0
    elapsed = time.perf_counter() - start
    assert elapsed < 2.0
    _ok(8, f"energy slope matches the chemical potential, probe-error ratio "
           f"{ratio:.1f} ({elapsed:.2f}s)")


def test_c09_mass_conservation(long_run):
    _, out, trace = long_run
    masses = [r.mass for r in trace.records]
    drift = max(abs(m - masses[0]) for m in masses) / (1.0 + abs(masses[0]))
    assert drift <= 1e-13
    # the CSV mass column carries the same values
    lines = (out / "trace.csv").read_text().strip().splitlines()[1:]
    csv_masses = [float(line.split(",")[7]) for line in lines]
    assert csv_masses == masses
    _ok(9, f"mass drift {drift:.2e} over 1e4 steps at N=64")


def test_c10_global_energy_dissipation(long_run):
    config, _, trace = long_run
    reports = check_dissipation(trace)
    for r in reports:
        assert r.passed, r
    volume = config.spec().volume
    for rec in trace.records:
        shifted = rec.energy + volume
        assert shifted >= 0.0
        rhs = 2.0 * math.sqrt(shifted)
        assert rec.lap_l2 <= rhs * (1.0 + 1e-10)
    _ok(10, f"energy nonincreasing, stabilisation condition and H2 bound hold "
            f"at all {len(trace.records) - 1} steps (kappa={trace.kappa})")


def test_c11_second_order_in_time(tmp_path_factory):
    start = time.perf_counter()
    cfg_path, _ = _write_config(tmp_path_factory, ORDER_CONFIG, "order")
    config = parse_config(str(cfg_path))
    study = order_study(
        config, taus=(0.02, 0.01, 0.005), tau_ref=0.000625, final_time=1.0
    )
    assert not study.exact
    assert 1.9 <= study.order_l2 <= 2.1
    elapsed = time.perf_counter() - start
    assert elapsed < 600.0
    _ok(11, f"observed temporal order {study.order_l2:.3f} on N=64 "
            f"({elapsed:.1f}s)")


def test_c12_constants_chain(capsys):
    start = time.perf_counter()
    assert cmd_constants(e0=0.0, beta0=0.0, dim=2, n=16, length=1.0,
                         epsilon=0.25, c2=1.0, c3=1.0) == 0
    pairs = dict(
        line.split("=", 1) for line in capsys.readouterr().out.splitlines()
    )
    assert float(pairs["C1"]) == 2.0
    assert float(pairs["C2"]) == 2.0
    assert float(pairs["C3"]) == 24.0
    assert float(pairs["C4"]) == 3.0
    rng = np.random.default_rng(12)
    for _ in range(100):
        chain = constants_chain(
            e0=rng.uniform(-0.5, 50.0),
            beta0=rng.uniform(-2.0, 2.0),
            volume=rng.uniform(0.5, 100.0),
            embed_sup=rng.uniform(0.1, 5.0),
            embed_grad=rng.uniform(0.1, 5.0),
            epsilon=rng.uniform(0.05, 0.95),
        )
        assert chain.c10 >= chain.c5 >= chain.c2
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    with capsys.disabled():
        _ok(12, f"hand-checked chain values and bound ordering on 100 draws "
                f"({elapsed:.2f}s)")


def test_c13_interrupt_and_resume_is_byte_identical(long_run, tmp_path_factory):
    config, full_out, _ = long_run
    partial_out = tmp_path_factory.mktemp("resume") / "out"
    code, _ = run_simulation(config, out_dir=str(partial_out),
                             abort_at_step=5000)
    assert code == 3  # the simulated kill
    assert not (partial_out / "final.pfcsnap").exists()
    code, _ = run_simulation(config, out_dir=str(partial_out), resume=True)
    assert code == 0
    assert (partial_out / "trace.csv").read_bytes() == (
        full_out / "trace.csv"
    ).read_bytes()
    assert (partial_out / "final.pfcsnap").read_bytes() == (
        full_out / "final.pfcsnap"
    ).read_bytes()
    _ok(13, "run killed at step 5000 and resumed: CSV and final snapshot "
            "byte-identical")
