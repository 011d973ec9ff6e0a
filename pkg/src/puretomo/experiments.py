"""Seeded Monte Carlo studies with CSV output.

Every trial is a pure function of ``(config, parameter point, trial index)``;
trial ``t`` always draws from ``RandomStream(config.seed, t)``, so the same
Haar states are reused across the noise grid of a study and results do not
depend on how many worker processes are used.
"""

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import partial
from pathlib import Path
from typing import Optional

import numpy as np

from .core import PureState, RandomStream, fidelity, haar_random_state, purity, white_noise_state
from .errors import DomainError, TomographyError
from .measurement import NoiseModel
from .mub import build_mubs, simulate_mub_tomography
from .reconstruct import run_adaptive_tomography

__all__ = [
    "STUDIES",
    "ConfigError",
    "ExperimentIOError",
    "ExperimentConfig",
    "StudyResult",
    "default_config",
    "run_fidelity_vs_dimension",
    "run_visibility_vs_purity",
    "run_method_comparison",
    "run_single_shot",
    "run_study",
    "parse_state",
]

STUDIES = ("compare-d7", "fidelity-vs-dim", "visibility-vs-purity", "single-shot")

FID_VS_DIM_COLUMNS = ("dim", "dark_rate", "trial", "seed", "fidelity")
VIS_VS_PURITY_COLUMNS = ("lambda", "purity", "trial", "seed", "max_residual")
COMPARE_COLUMNS = (
    "dim",
    "trial",
    "seed",
    "fidelity_adaptive",
    "fidelity_mub",
    "outcomes_adaptive",
    "outcomes_mub",
)
SINGLE_COLUMNS = ("setting", "k", "ell", "counts", "estimated_prob")


class ConfigError(TomographyError):
    pass


class ExperimentIOError(OSError):
    pass


def _default_lambda_grid():
    return tuple(round(0.1 * i, 10) for i in range(11))


@dataclass(frozen=True)
class ExperimentConfig:
    study: str
    dims: tuple = (4, 8, 16)
    trials: int = 2000
    mu: float = 0.18
    pulses: int = 50_000
    dark_rates: tuple = (0.0, 2e-4, 5e-4)
    lambda_grid: tuple = field(default_factory=_default_lambda_grid)
    seed: int = 20190101
    output_path: Optional[str] = None
    exact_mode: bool = False
    state: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        if self.study not in STUDIES:
            raise ConfigError(f"unknown study {self.study!r}; expected one of {STUDIES}")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "dark_rates", tuple(float(x) for x in self.dark_rates))
        object.__setattr__(self, "lambda_grid", tuple(float(x) for x in self.lambda_grid))
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not self.dims:
            raise ConfigError("at least one dimension is required")
        if any(d < 2 for d in self.dims):
            raise ConfigError(f"dimensions must be >= 2, got {self.dims}")
        if any(not 0.0 <= lam <= 1.0 for lam in self.lambda_grid):
            raise ConfigError("lambda grid values must lie in [0, 1]")
        if any(x < 0 for x in self.dark_rates):
            raise ConfigError("dark rates must be non-negative")
        if not self.exact_mode and (self.mu <= 0 or self.pulses < 1):
            raise ConfigError("noisy mode needs mu > 0 and pulses >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def noise_model(self, dark_rate=None):
        if self.exact_mode:
            return None
        if dark_rate is None:
            dark_rate = self.dark_rates[0] if self.dark_rates else 0.0
        return NoiseModel(mu=self.mu, lambda_dc=dark_rate, pulses=self.pulses)

    def header_lines(self):
        """Comment lines describing every parameter that affects the numbers."""
        skip = {"output_path", "workers"}
        lines = []
        for key, value in asdict(self).items():
            if key in skip:
                continue
            if isinstance(value, (tuple, list)):
                value = " ".join(repr(v) for v in value)
            lines.append(f"# {key}={value}")
        return lines


_STUDY_DEFAULTS = {
    "compare-d7": dict(dims=(7,), trials=200, dark_rates=(2e-4,)),
    "fidelity-vs-dim": dict(dims=(4, 8, 16), trials=2000, dark_rates=(0.0, 2e-4, 5e-4)),
    "visibility-vs-purity": dict(dims=(8,), trials=2000, dark_rates=(0.0,)),
    "single-shot": dict(dims=(4,), trials=1, dark_rates=(0.0,), state="uniform"),
}


def default_config(study, **overrides):
    """Study-specific defaults mirroring the published setups."""
    if study not in _STUDY_DEFAULTS:
        raise ConfigError(f"unknown study {study!r}; expected one of {STUDIES}")
    params = dict(_STUDY_DEFAULTS[study])
    params.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(study=study, **params)


@dataclass(frozen=True)
class StudyResult:
    config: ExperimentConfig
    columns: tuple
    rows: list
    summary_columns: tuple = ()
    summary: list = field(default_factory=list)
    report: str = ""

    def to_csv(self):
        return _render_csv(self.config.header_lines(), self.columns, self.rows)

    def summary_csv(self):
        return _render_csv(self.config.header_lines(), self.summary_columns, self.summary)

    def column(self, name):
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows])


def _render_csv(comments, columns, rows):
    buf = io.StringIO(newline="")
    for line in comments:
        buf.write(line + "\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


def summary_path(path):
    path = Path(path)
    return path.with_name(f"{path.stem}_summary{path.suffix or '.csv'}")


def write_result(result, path=None):
    """Write rows to ``path`` and the per-cell summary next to it."""
    path = path or result.config.output_path
    if path is None:
        return None
    targets = [(Path(path), result.to_csv())]
    if result.summary_columns:
        targets.append((summary_path(path), result.summary_csv()))
    for target, text in targets:
        try:
            with open(target, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise ExperimentIOError(f"cannot write {target}: {exc.strerror or exc}") from exc
    return Path(path)


def _map_trials(func, tasks, workers):
    if workers <= 1 or len(tasks) < 2:
        return [func(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks, chunksize=chunk))


def _mean_std(values):
    values = np.asarray(values, dtype=float)
    # numpy reductions use pairwise summation in a fixed order
    return float(np.mean(values)), float(np.std(values))


def _trial_state(config, d, gen):
    if config.state:
        return parse_state(config.state, d, gen)
    return haar_random_state(d, gen)


def _fid_trial(config, task):
    d, dark, trial = task
    gen = RandomStream(config.seed, trial).generator()
    psi = _trial_state(config, d, gen)
    run = run_adaptive_tomography(psi, config.noise_model(dark), gen)
    return fidelity(run.estimate, psi)


def run_fidelity_vs_dimension(config, write=True):
    """Noisy adaptive tomography of Haar states across dimensions and dark rates."""
    if config.exact_mode:
        raise ConfigError("fidelity-vs-dim is a noise study; exact mode is not allowed")
    if not config.dark_rates:
        raise ConfigError("at least one dark rate is required")
    tasks = [(d, dark, t) for d in config.dims for dark in config.dark_rates for t in range(config.trials)]
    values = _map_trials(partial(_fid_trial, config), tasks, config.workers)
    rows = [(d, dark, t, config.seed, f) for (d, dark, t), f in zip(tasks, values)]

    summary = []
    n = config.trials
    for i, (d, dark) in enumerate((d, dark) for d in config.dims for dark in config.dark_rates):
        mean, std = _mean_std(values[i * n : (i + 1) * n])
        summary.append((d, dark, n, mean, std))
    result = StudyResult(
        config,
        FID_VS_DIM_COLUMNS,
        rows,
        ("dim", "dark_rate", "trials", "mean_fidelity", "std_fidelity"),
        summary,
    )
    if write:
        write_result(result)
    return result


def _vis_trial(config, task):
    lam, trial = task
    d = config.dims[0]
    gen = RandomStream(config.seed, trial).generator()
    psi = _trial_state(config, d, gen)
    rho = white_noise_state(psi, lam)
    run = run_adaptive_tomography(rho, config.noise_model(), gen)
    return run.result.max_residual


def run_visibility_vs_purity(config, write=True):
    """Largest purity residual for white-noise states over a noise-weight grid."""
    d = config.dims[0]
    tasks = [(lam, t) for lam in config.lambda_grid for t in range(config.trials)]
    values = _map_trials(partial(_vis_trial, config), tasks, config.workers)
    purities = {lam: (d - 1) / d * (lam - 1.0) ** 2 + 1.0 / d for lam in config.lambda_grid}
    rows = [(lam, purities[lam], t, config.seed, v) for (lam, t), v in zip(tasks, values)]

    summary = []
    n = config.trials
    for i, lam in enumerate(config.lambda_grid):
        mean, std = _mean_std(values[i * n : (i + 1) * n])
        summary.append((lam, purities[lam], n, mean, std))
    result = StudyResult(
        config,
        VIS_VS_PURITY_COLUMNS,
        rows,
        ("lambda", "purity", "trials", "mean_max_residual", "std_max_residual"),
        summary,
    )
    if write:
        write_result(result)
    return result


def _compare_trial(config, trial):
    d = config.dims[0]
    gen = RandomStream(config.seed, trial).generator()
    psi = _trial_state(config, d, gen)
    model = config.noise_model()
    run = run_adaptive_tomography(psi, model, gen)
    rho_mub, _ = simulate_mub_tomography(psi, model, gen)
    return fidelity(run.estimate, psi), fidelity(psi, rho_mub), len(run.records)


def run_method_comparison(config, write=True):
    """Adaptive versus MUB tomography on the same Haar states and noise model."""
    d = config.dims[0]
    family = build_mubs(d)
    values = _map_trials(partial(_compare_trial, config), list(range(config.trials)), config.workers)
    rows = [
        (d, t, config.seed, fa, fm, n_adaptive, family.outcome_count)
        for t, (fa, fm, n_adaptive) in enumerate(values)
    ]
    fa_mean, fa_std = _mean_std([v[0] for v in values])
    fm_mean, fm_std = _mean_std([v[1] for v in values])
    result = StudyResult(
        config,
        COMPARE_COLUMNS,
        rows,
        (
            "dim",
            "trials",
            "mean_fidelity_adaptive",
            "std_fidelity_adaptive",
            "mean_fidelity_mub",
            "std_fidelity_mub",
        ),
        [(d, config.trials, fa_mean, fa_std, fm_mean, fm_std)],
    )
    if write:
        write_result(result)
    return result


def parse_state(spec, dim, rng=None):
    """Build a pure state from a preset name or an amplitude list.

    Accepted forms: ``uniform``, ``basis-K``, ``random`` (Haar, needs
    ``rng``), or comma-separated complex amplitudes such as ``"0,1"`` or
    ``"1,1j,-0.5+0.5j"`` (normalized; their count overrides ``dim``).
    """
    spec = spec.strip()
    if spec == "uniform":
        return PureState.uniform(dim)
    if spec == "random":
        if rng is None:
            raise ConfigError("the random preset needs a seed")
        return haar_random_state(dim, rng)
    if spec.startswith("basis-"):
        try:
            index = int(spec[len("basis-") :])
        except ValueError:
            raise ConfigError(f"bad basis preset {spec!r}") from None
        try:
            return PureState.basis(index, dim)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
    try:
        amps = [complex(tok.replace(" ", "")) for tok in spec.split(",")]
    except ValueError:
        raise ConfigError(f"cannot parse state {spec!r}") from None
    try:
        return PureState.from_amplitudes(amps)
    except TomographyError as exc:
        raise ConfigError(f"state {spec!r}: {exc}") from None


def _format_amplitude(c):
    return f"{c.real:+.6f}{c.imag:+.6f}j  (|c|={abs(c):.6f}, arg={np.angle(c):+.6f})"


def run_single_shot(config, write=True):
    """Reconstruct one state and produce a readable report."""
    d = config.dims[0]
    gen = RandomStream(config.seed, 0).generator()
    psi = parse_state(config.state or "uniform", d, gen)
    d = psi.dim
    model = config.noise_model()
    run = run_adaptive_tomography(psi, model, gen)
    f = fidelity(run.estimate, psi)
    cert = run.certificate

    lines = [
        f"dimension: {d}",
        f"mode: {'exact' if model is None else f'noisy (mu={model.mu}, dark={model.lambda_dc}, pulses={model.pulses})'}",
        f"reference index: {run.result.reference}",
        f"outcomes: {len(run.records)} (4d-3 = {4 * d - 3})",
    ]
    for rec in run.records:
        counts = "" if rec.counts is None else f" counts={rec.counts}"
        sat = " SATURATED" if rec.saturated else ""
        lines.append(f"  {rec.setting.label():<16} p={rec.estimated_prob:.9f}{counts}{sat}")
    lines.append("reconstructed amplitudes:")
    for k, c in enumerate(run.estimate.amplitudes):
        lines.append(f"  c[{k}] = {_format_amplitude(c)}")
    lines.append(f"fidelity: {f:.12f}")
    lines.append(
        f"purity certificate: {'PASS' if cert.passed else 'FAIL'} "
        f"(max residual {cert.max_residual:.3e}, threshold {cert.threshold:.3e})"
    )
    lines.append(f"state purity: {purity(psi):.6f}")

    rows = [
        (rec.setting.label(), rec.setting.k, rec.setting.ell, "" if rec.counts is None else rec.counts, rec.estimated_prob)
        for rec in run.records
    ]
    result = StudyResult(config, SINGLE_COLUMNS, rows, report="\n".join(lines) + "\n")
    if write:
        write_result(result)
    return result


_RUNNERS = {
    "compare-d7": run_method_comparison,
    "fidelity-vs-dim": run_fidelity_vs_dimension,
    "visibility-vs-purity": run_visibility_vs_purity,
    "single-shot": run_single_shot,
}


def run_study(config, write=True):
    return _RUNNERS[config.study](config, write=write)


def with_overrides(config, **changes):
    return replace(config, **{k: v for k, v in changes.items() if v is not None})


def available_workers():
    return os.cpu_count() or 1
