"""Command-line front end.

Four subcommands drive the library:

``run``        advance a configured simulation, writing a CSV time series,
               periodic snapshots and exact-restart checkpoints.
``verify``     execute one of the randomized check suites and print one
               report line per check.
``order``      self-convergence study over a list of step sizes against a
               finer reference step.
``constants``  evaluate the a-priori constants chain and the step-size
               ceilings for given inputs.

Configuration is a flat text file, one ``key = value`` per line with ``#``
comments, chosen over nested formats to keep parsing dependency-free and
diffs trivial.  Parse errors name the file, line and offending key.  All
numeric output uses 17 significant digits so downstream comparisons are
never format-limited, and a fixed (config, seeds) pair reproduces every
output byte for byte; interrupting a run and resuming from its checkpoint
changes nothing in the bytes that follow.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import GridSpec, RealField, inner
from .scheme import (
    SchemeParams,
    Simulation,
    SimulationDiverged,
    RunTrace,
    constants_chain,
    noisy_constant_ic,
    single_mode_ic,
)
from .snapshots import (
    SnapshotHeader,
    read_checkpoint,
    read_snapshot,
    snapshot_mean,
    write_checkpoint,
    write_snapshot,
)
from .verify import (
    check_nonlinear,
    check_prop1,
    check_prop2,
    check_sbp,
    estimate_embedding_constants,
)

__all__ = [
    "ConfigError",
    "RunConfig",
    "parse_config",
    "build_initial",
    "run_simulation",
    "order_study",
    "OrderStudy",
    "cmd_run",
    "cmd_verify",
    "cmd_order",
    "cmd_constants",
    "main",
]

CSV_HEADER = (
    "step,time,energy,quartic,quadratic,gradient,biharmonic,"
    "mass,linf,h2norm,kappa\n"
)

POLICIES = ("fixed", "lemma_adaptive", "theory")
IC_KINDS = ("constant_noise", "single_mode", "file")
NONLINEARITIES = ("full", "no_cube", "none")
VERIFY_SUITES = ("sbp", "prop1", "prop2", "nonlinear", "embed", "all")


class ConfigError(Exception):
    """Malformed or inconsistent configuration input."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    dim: int
    n: int
    length: float
    epsilon: float
    dt: float
    n_steps: int
    policy: str
    kappa: float | None
    c2: float | None
    c3: float | None
    strict: bool
    ic: str
    beta0: float | None
    delta: float | None
    seed: int | None
    noise_cutoff: int | None
    mode: tuple[int, ...] | None
    amplitude: float | None
    ic_file: str | None
    out_dir: str
    snapshot_every: int
    checkpoint_every: int
    nonlinearity: str

    def spec(self) -> GridSpec:
        return GridSpec(dim=self.dim, n=self.n, length=self.length)

    def params(self) -> SchemeParams:
        return SchemeParams(
            dt=self.dt,
            epsilon=self.epsilon,
            policy=self.policy,
            kappa=self.kappa if self.kappa is not None else 0.0,
            embed_sup=self.c2,
            embed_grad=self.c3,
            strict=self.strict,
        )


class _Reader:
    """key = value lines with # comments; remembers line numbers."""

    def __init__(self, path: str):
        self.path = path
        self.entries: dict[str, tuple[str, int]] = {}
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key or not value:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            if key in self.entries:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            self.entries[key] = (value, lineno)

    def take(self, key: str, convert, required: bool = False, default=None):
        if key not in self.entries:
            if required:
                raise ConfigError(f"{self.path}: missing required key {key!r}")
            return default
        value, lineno = self.entries.pop(key)
        try:
            return convert(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(
                f"{self.path}:{lineno}: {key}: invalid value {value!r} ({exc})"
            ) from exc


def _to_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ValueError("expected true/false")


def _to_choice(choices):
    def convert(text: str) -> str:
        if text not in choices:
            raise ValueError(f"expected one of {choices}")
        return text

    return convert


def _to_mode(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split())


def parse_config(path: str) -> RunConfig:
    """Read and validate a run configuration; errors carry file:line."""
    r = _Reader(path)
    cfg = RunConfig(
        dim=r.take("dim", int, required=True),
        n=r.take("N", int, required=True),
        length=r.take("L", float, required=True),
        epsilon=r.take("epsilon", float, required=True),
        dt=r.take("tau", float, required=True),
        n_steps=r.take("n_steps", int, required=True),
        policy=r.take("kappa_policy", _to_choice(POLICIES), required=True),
        kappa=r.take("kappa", float),
        c2=r.take("C2", float),
        c3=r.take("C3", float),
        strict=r.take("strict", _to_bool, default=False),
        ic=r.take("ic", _to_choice(IC_KINDS), required=True),
        beta0=r.take("beta0", float),
        delta=r.take("delta", float),
        seed=r.take("seed", int),
        noise_cutoff=r.take("noise_cutoff", int),
        mode=r.take("mode", _to_mode),
        amplitude=r.take("amplitude", float),
        ic_file=r.take("ic_file", str),
        out_dir=r.take("out_dir", str, default="out"),
        snapshot_every=r.take("snapshot_every", int, default=0),
        checkpoint_every=r.take("checkpoint_every", int, default=0),
        nonlinearity=r.take("nonlinearity", _to_choice(NONLINEARITIES),
                            default="full"),
    )
    if r.entries:
        key, (_, lineno) = next(iter(r.entries.items()))
        raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")

    # cross-field requirements, reported against the governing key
    if cfg.policy == "fixed" and cfg.kappa is None:
        raise ConfigError(f"{path}: kappa_policy=fixed requires a kappa value")
    if cfg.policy == "theory" and (cfg.c2 is None or cfg.c3 is None):
        raise ConfigError(f"{path}: kappa_policy=theory requires C2 and C3")
    if cfg.ic == "constant_noise" and None in (cfg.beta0, cfg.delta, cfg.seed):
        raise ConfigError(
            f"{path}: ic=constant_noise requires beta0, delta and seed"
        )
    if cfg.ic == "single_mode" and None in (cfg.mode, cfg.amplitude):
        raise ConfigError(f"{path}: ic=single_mode requires mode and amplitude")
    if cfg.ic == "file" and cfg.ic_file is None:
        raise ConfigError(f"{path}: ic=file requires ic_file")
    if cfg.snapshot_every < 0 or cfg.checkpoint_every < 0:
        raise ConfigError(f"{path}: snapshot_every/checkpoint_every must be >= 0")

    # constructor-level validation, surfaced as config errors
    try:
        cfg.spec()
        cfg.params()
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return cfg


def build_initial(config: RunConfig) -> RealField:
    """Construct the initial field the configuration describes."""
    spec = config.spec()
    if config.ic == "constant_noise":
        return noisy_constant_ic(
            spec, config.beta0, config.delta, config.seed, config.noise_cutoff
        )
    if config.ic == "single_mode":
        return single_mode_ic(spec, config.mode, config.amplitude)
    header, values = read_snapshot(config.ic_file)
    if (header.dim, header.n) != (config.dim, config.n) or header.length != config.length:
        raise ConfigError(
            f"{config.ic_file}: snapshot grid {header.dim}d N={header.n} "
            f"L={header.length} does not match the configuration"
        )
    return RealField(spec, values)


# ---------------------------------------------------------------------------
# the run subcommand


def _csv_row(rec) -> bytes:
    cells = (
        str(rec.step),
        _fmt(rec.time),
        _fmt(rec.energy),
        _fmt(rec.quartic),
        _fmt(rec.quadratic),
        _fmt(rec.gradient),
        _fmt(rec.biharmonic),
        _fmt(rec.mass),
        _fmt(rec.linf),
        _fmt(rec.lap_l2),
        _fmt(rec.kappa),
    )
    return (",".join(cells) + "\n").encode()


def _snapshot(out: Path, name: str, sim: Simulation, config: RunConfig):
    st = sim.state
    header = SnapshotHeader(
        dim=config.dim,
        n=config.n,
        length=config.length,
        epsilon=config.epsilon,
        dt=config.dt,
        step=st.step_index,
        time=st.time,
        mean=snapshot_mean(st.u.values),
    )
    write_snapshot(out / name, st.u.values, header)


def _checkpoint_meta(sim: Simulation, config: RunConfig, csv_offset: int) -> dict:
    st = sim.state
    return {
        "dim": config.dim,
        "N": config.n,
        "L": config.length,
        "epsilon": config.epsilon,
        "tau": config.dt,
        "policy": config.policy,
        "nonlinearity": config.nonlinearity,
        "kappa": st.kappa,
        "step": st.step_index,
        "running_max_inf": st.running_max_inf,
        "csv_offset": csv_offset,
    }


def _validate_checkpoint(meta: dict, config: RunConfig, path):
    expected = {
        "dim": config.dim,
        "N": config.n,
        "L": config.length,
        "epsilon": config.epsilon,
        "tau": config.dt,
        "policy": config.policy,
        "nonlinearity": config.nonlinearity,
    }
    for key, want in expected.items():
        if meta.get(key) != want:
            raise ConfigError(
                f"{path}: checkpoint {key}={meta.get(key)!r} does not match "
                f"the configuration ({want!r})"
            )
    if int(meta["step"]) > config.n_steps:
        raise ConfigError(
            f"{path}: checkpoint step {meta['step']} is beyond n_steps={config.n_steps}"
        )


def run_simulation(
    config: RunConfig,
    out_dir: str | None = None,
    resume: bool = False,
    abort_at_step: int | None = None,
) -> tuple[int, RunTrace | None]:
    """Drive one configured run, writing all outputs.

    Returns (exit_code, trace); the trace is None when the run was aborted by
    ``abort_at_step`` (a testing hook emulating a killed process: the loop
    simply stops after that step, leaving files exactly as a kill would).
    With ``strict`` in the configuration and the adaptive policy, a fresh
    run whose realised max-norms violate the warm-up kappa is rerun from
    scratch with the enlarged value and all outputs are rewritten.
    """
    out = Path(out_dir if out_dir is not None else config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "trace.csv"
    chk_path = out / "checkpoint.pfcchk"

    kappa_override: float | None = None
    restarts = 0
    while True:
        records = []
        if resume:
            try:
                meta, coeffs = read_checkpoint(chk_path)
            except OSError as exc:
                raise ConfigError(f"cannot resume: {exc}") from exc
            _validate_checkpoint(meta, config, chk_path)
            params = dataclasses.replace(config.params(), kappa=float(meta["kappa"]))
            sim = Simulation.from_state(
                config.spec(),
                params,
                coeffs,
                step_index=int(meta["step"]),
                running_max_inf=float(meta["running_max_inf"]),
                nonlinearity=config.nonlinearity,
            )
            csv_file = open(csv_path, "r+b")
            csv_file.truncate(int(meta["csv_offset"]))
            csv_file.seek(int(meta["csv_offset"]))
        else:
            params = config.params()
            if kappa_override is not None:
                params = dataclasses.replace(
                    params, policy="fixed", kappa=kappa_override
                )
            u0 = build_initial(config)
            sim = Simulation.start(u0, params, config.nonlinearity)
            csv_file = open(csv_path, "wb")
            csv_file.write(CSV_HEADER.encode())
            rec = sim.initial_record()
            records.append(rec)
            csv_file.write(_csv_row(rec))
            if config.snapshot_every > 0:
                _snapshot(out, "snapshot_00000000.pfcsnap", sim, config)

        aborted = False
        try:
            with csv_file:
                while sim.state.step_index < config.n_steps:
                    try:
                        rec = sim.advance()
                    except SimulationDiverged as exc:
                        csv_file.flush()
                        print(
                            f"error: non-finite state at step {exc.step}; "
                            f"partial series kept in {csv_path}",
                            file=sys.stderr,
                        )
                        return 1, None
                    records.append(rec)
                    csv_file.write(_csv_row(rec))
                    step = rec.step
                    if config.snapshot_every > 0 and step % config.snapshot_every == 0:
                        _snapshot(out, f"snapshot_{step:08d}.pfcsnap", sim, config)
                    if config.checkpoint_every > 0 and step % config.checkpoint_every == 0:
                        csv_file.flush()
                        write_checkpoint(
                            chk_path,
                            _checkpoint_meta(sim, config, csv_file.tell()),
                            sim.state.coeffs,
                        )
                    if abort_at_step is not None and step >= abort_at_step:
                        aborted = True
                        break
                csv_file.flush()
        finally:
            if not csv_file.closed:
                csv_file.close()

        if aborted:
            return 3, None
        if (
            not resume
            and config.strict
            and config.policy == "lemma_adaptive"
            and sim.kappa_violations
            and restarts < 4
        ):
            # same 5% headroom as the library driver
            m = sim.state.running_max_inf
            kappa_override = 1.05 * max((3.0 * m * m - config.epsilon) / 2.0, 1.0)
            restarts += 1
            continue

        _snapshot(out, "final.pfcsnap", sim, config)
        trace = RunTrace(
            spec=config.spec(),
            dt=config.dt,
            epsilon=config.epsilon,
            kappa=sim.state.kappa,
            policy=config.policy,
            nonlinearity=config.nonlinearity,
            records=records,
            restarts=restarts,
        )
        return 0, trace


def cmd_run(
    config_path: str,
    resume: bool = False,
    out_dir: str | None = None,
    seed: int | None = None,
    abort_at_step: int | None = None,
) -> int:
    try:
        config = parse_config(config_path)
        if seed is not None:
            config = dataclasses.replace(config, seed=seed)
        code, trace = run_simulation(
            config, out_dir=out_dir, resume=resume, abort_at_step=abort_at_step
        )
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if code == 0 and trace is not None:
        last = trace.records[-1]
        print(
            f"completed {last.step} steps to t={_fmt(last.time)} "
            f"(kappa={_fmt(trace.kappa)}, energy={_fmt(last.energy)})"
        )
    return code


# ---------------------------------------------------------------------------
# the verify subcommand


def _report_line(report) -> str:
    tag = "PASS" if report.passed else "FAIL"
    line = (
        f"[{tag}] {report.name} trials={report.trials} "
        f"worst_violation={_fmt(report.worst_violation)} "
        f"worst_seed={report.worst_seed}"
    )
    if report.detail:
        line += f" {report.detail}"
    return line


def cmd_verify(
    suite: str,
    dim: int = 2,
    n: int = 16,
    length: float = 2.0 * np.pi,
    kappa: float = 2.0,
    dt: float = 0.1,
    seed: int = 0,
    trials: int = 100,
) -> int:
    if suite not in VERIFY_SUITES:
        print(
            f"error: unknown suite {suite!r}; expected one of {VERIFY_SUITES}",
            file=sys.stderr,
        )
        return 2
    try:
        spec = GridSpec(dim=dim, n=n, length=length)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    reports = []
    try:
        if suite in ("sbp", "all"):
            reports.append(check_sbp(spec, seed, trials))
        if suite in ("prop1", "all"):
            reports.extend(check_prop1(spec, kappa, dt, seed, trials))
        if suite in ("prop2", "all"):
            reports.extend(check_prop2(spec, kappa, dt, seed, trials))
        if suite in ("nonlinear", "all"):
            reports.append(check_nonlinear(spec, seed, trials))
        if suite in ("embed", "all"):
            reports.append(estimate_embedding_constants(spec, seed, trials).as_report())
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for report in reports:
        print(_report_line(report))
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------
# the order subcommand


@dataclass(frozen=True)
class OrderStudy:
    taus: tuple[float, ...]
    l2_errors: tuple[float, ...]
    linf_errors: tuple[float, ...]
    order_l2: float
    order_linf: float
    exact: bool


def _steps_for(final_time: float, dt: float) -> int:
    n = final_time / dt
    rounded = round(n)
    if rounded < 1 or abs(n - rounded) > 1e-9 * max(1.0, abs(n)):
        raise ValueError(
            f"final time {final_time} is not an integer multiple of tau={dt}"
        )
    return int(rounded)


def _evolve(u0: RealField, config: RunConfig, dt: float, n_steps: int) -> RealField:
    params = dataclasses.replace(config.params(), dt=dt)
    sim = Simulation.start(u0, params, config.nonlinearity)
    for _ in range(n_steps):
        sim.advance()
    return sim.state.u


def order_study(
    config: RunConfig,
    taus: tuple[float, ...],
    tau_ref: float,
    final_time: float,
) -> OrderStudy:
    """Self-convergence of the stepper on one grid.

    Every listed step size runs to the same final time from the same initial
    state and is compared against the tau_ref solution; the observed order
    is the least-squares slope of log(error) against log(tau).  When all
    errors sit at the roundoff floor (the explicit term switched off makes
    the step exact), the study reports exact instead of an order.
    """
    if len(taus) < 2:
        raise ValueError("order study needs at least two step sizes")
    if any(t <= 0 for t in taus) or tau_ref <= 0:
        raise ValueError("step sizes must be positive")
    if tau_ref * 8.0 > min(taus) * (1.0 + 1e-12):
        raise ValueError(
            f"reference step {tau_ref} must be at least 8x smaller than the "
            f"smallest listed step {min(taus)}"
        )
    step_counts = [_steps_for(final_time, t) for t in taus]
    ref_steps = _steps_for(final_time, tau_ref)
    u0 = build_initial(config)
    u_ref = _evolve(u0, config, tau_ref, ref_steps)
    l2_errors = []
    linf_errors = []
    for dt, n_steps in zip(taus, step_counts):
        u = _evolve(u0, config, dt, n_steps)
        diff = u - u_ref
        l2_errors.append(float(np.sqrt(inner(diff, diff))))
        linf_errors.append(float(np.max(np.abs(diff.values))))
    ref_norm = float(np.sqrt(inner(u_ref, u_ref)))
    if max(l2_errors) <= 1e-12 * (1.0 + ref_norm):
        return OrderStudy(
            taus=tuple(taus),
            l2_errors=tuple(l2_errors),
            linf_errors=tuple(linf_errors),
            order_l2=float("nan"),
            order_linf=float("nan"),
            exact=True,
        )
    log_tau = np.log(np.asarray(taus))
    order_l2 = float(np.polyfit(log_tau, np.log(np.asarray(l2_errors)), 1)[0])
    order_linf = float(np.polyfit(log_tau, np.log(np.asarray(linf_errors)), 1)[0])
    return OrderStudy(
        taus=tuple(taus),
        l2_errors=tuple(l2_errors),
        linf_errors=tuple(linf_errors),
        order_l2=order_l2,
        order_linf=order_linf,
        exact=False,
    )


def cmd_order(
    config_path: str,
    taus: tuple[float, ...],
    tau_ref: float,
    final_time: float,
) -> int:
    try:
        config = parse_config(config_path)
        study = order_study(config, taus, tau_ref, final_time)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for dt, e2, einf in zip(study.taus, study.l2_errors, study.linf_errors):
        print(f"tau={_fmt(dt)} l2_error={_fmt(e2)} linf_error={_fmt(einf)}")
    if study.exact:
        print("order=exact")
        return 0
    print(f"observed_order_l2={_fmt(study.order_l2)}")
    print(f"observed_order_linf={_fmt(study.order_linf)}")
    return 0 if study.order_l2 >= 1.9 else 1


# ---------------------------------------------------------------------------
# the constants subcommand


def cmd_constants(
    e0: float,
    beta0: float,
    dim: int,
    n: int,
    length: float,
    epsilon: float,
    c2: float,
    c3: float,
) -> int:
    try:
        spec = GridSpec(dim=dim, n=n, length=length)
        chain = constants_chain(e0, beta0, spec.volume, c2, c3, epsilon)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for key, value in (
        ("C0", chain.c0),
        ("C1", chain.c1),
        ("C2", chain.c2),
        ("C3", chain.c3),
        ("C4", chain.c4),
        ("C5", chain.c5),
        ("C6", chain.c6),
        ("C8", chain.c8),
        ("C9", chain.c9),
        ("C10", chain.c10),
        ("kappa_theory", chain.kappa_theory),
        ("tau_max", chain.tau_max),
        ("tau_max_stage1", chain.tau_max_stage1),
    ):
        print(f"{key}={_fmt(value)}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pfcetd",
        description="Exponential two-stage solver for the phase field "
        "crystal equation, with verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="advance a configured simulation")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--resume", action="store_true",
                       help="continue from the checkpoint in the output directory")
    p_run.add_argument("--out-dir", default=None,
                       help="override the configured output directory")
    p_run.add_argument("--seed", type=int, default=None,
                       help="override the configured noise seed")

    p_verify = sub.add_parser("verify", help="run a randomized check suite")
    p_verify.add_argument("suite", choices=VERIFY_SUITES)
    p_verify.add_argument("--N", type=int, default=16)
    p_verify.add_argument("--dim", type=int, default=2)
    p_verify.add_argument("--L", type=float, default=2.0 * np.pi)
    p_verify.add_argument("--kappa", type=float, default=2.0)
    p_verify.add_argument("--tau", type=float, default=0.1)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--trials", type=int, default=100)

    p_order = sub.add_parser("order", help="temporal self-convergence study")
    p_order.add_argument("--config", required=True)
    p_order.add_argument("--taus", required=True,
                         help="comma-separated step sizes, e.g. 0.02,0.01,0.005")
    p_order.add_argument("--tau-ref", type=float, required=True,
                         help="reference step, at least 8x smaller than min(taus)")
    p_order.add_argument("--final-time", type=float, required=True)

    p_const = sub.add_parser("constants", help="evaluate the constants chain")
    p_const.add_argument("--E0", type=float, required=True)
    p_const.add_argument("--beta0", type=float, required=True)
    p_const.add_argument("--dim", type=int, default=3)
    p_const.add_argument("--N", type=int, default=16)
    p_const.add_argument("--L", type=float, required=True)
    p_const.add_argument("--epsilon", type=float, required=True)
    p_const.add_argument("--C2", type=float, required=True)
    p_const.add_argument("--C3", type=float, required=True)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args.config, resume=args.resume, out_dir=args.out_dir,
                       seed=args.seed)
    if args.command == "verify":
        return cmd_verify(args.suite, dim=args.dim, n=args.N, length=args.L,
                          kappa=args.kappa, dt=args.tau, seed=args.seed,
                          trials=args.trials)
    if args.command == "order":
        try:
            taus = tuple(float(part) for part in args.taus.split(","))
        except ValueError:
            print(f"error: cannot parse --taus {args.taus!r}", file=sys.stderr)
            return 2
        return cmd_order(args.config, taus, args.tau_ref, args.final_time)
    return cmd_constants(args.E0, args.beta0, args.dim, args.N, args.L,
                         args.epsilon, args.C2, args.C3)
