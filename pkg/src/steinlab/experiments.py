"""Experiment drivers behind the ``stein-lab`` commands.

Each ``run_*`` function is a pure function of its :class:`ExperimentConfig`:
seeds for subordinate tasks are derived from the root seed and a stable
task index, so results do not depend on scheduling.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .abelian import (
    choose_block_length,
    classical_reduction,
    hiai_petz_decomposition_check,
)
from .channels import KrausChannel, apply, dilate, monotonicity_gap, random_channel, tilde_states
from .entropy import relative_entropy
from .hypothesis_testing import (
    DENSE_PENCIL_MAX_DIM,
    check_pencil_budget,
    stein_point,
    subalgebra_beta_check,
)
from .io import load_channel, load_state
from .operators import BudgetExceededError, derive_seed, max_abs, random_density, rng_from, tensor_power
from .typical import ReducedAlphabet, first_reaching, lln_convergence

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_SUPPORT = 3
EXIT_NO_BLOCK_LENGTH = 4
EXIT_VERDICT = 5

HIAI_PETZ_SLACK = 1e-8
GAP_FLOOR = -1e-9
MONOTONICITY_SLACK = 1e-8
TILDE_SLACK = 1e-9
BETA_SLACK = 1e-9
SANDWICH_SLACK = 1e-9


class SupportViolation(ValueError):
    """supp(psi) is not contained in supp(phi)."""


class BlockLengthNotFound(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    command: str
    dim: int = 2
    n_max: int = 10
    epsilon: float = 0.1
    delta: float = 0.05
    eta: float = 0.1
    l_max: int = 3
    seed: int = 7
    trials: int = 1000
    max_kraus: int = 4
    output: str | None = None
    format: str = "csv"
    psi: str | None = None
    phi: str | None = None
    channel: str | None = None
    workers: int = 1
    units: str = "nats"

    def validate(self) -> None:
        if not 0 < self.epsilon < 1:
            raise ValueError(f"--epsilon must lie in (0, 1), got {self.epsilon}")
        if self.delta <= 0:
            raise ValueError(f"--delta must be positive, got {self.delta}")
        if self.eta <= 0:
            raise ValueError(f"--eta must be positive, got {self.eta}")
        if self.n_max < 1:
            raise ValueError(f"--n-max must be at least 1, got {self.n_max}")
        if self.trials < 1:
            raise ValueError(f"--trials must be at least 1, got {self.trials}")
        if self.dim < 1 or self.l_max < 1 or self.max_kraus < 1:
            raise ValueError("--dim, --l-max and --max-kraus must be positive")
        if self.format not in ("csv", "json"):
            raise ValueError(f"--format must be csv or json, got {self.format!r}")
        if self.units not in ("nats", "bits"):
            raise ValueError(f"--units must be nats or bits, got {self.units!r}")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("output")
        d.pop("workers")
        return d


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    slack: float
    detail: str = ""


@dataclass
class RunReport:
    config: ExperimentConfig
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    verdicts: list[Verdict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(x) for x in row])
        # trailer lines go through the csv writer so commas in names stay quoted
        for key, value in self.summary.items():
            w.writerow(["# summary", key, _fmt(value)])
        for v in self.verdicts:
            w.writerow(["# verdict", v.name, "PASS" if v.passed else "FAIL", _fmt(v.slack), v.detail])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "meta": {
                "version": __version__,
                "numpy": np.__version__,
            },
            "config": self.config.echo(),
            "columns": list(self.columns),
            "rows": [[_json_value(x) for x in row] for row in self.rows],
            "summary": {k: _json_value(v) for k, v in self.summary.items()},
            "verdicts": [asdict(v) for v in self.verdicts],
            "passed": self.passed,
        }


# Row columns and summary keys measured in nats; everything else is a count,
# a probability or a beta value and is never rescaled.
ENTROPY_FIELDS = frozenset({
    "lower_rate", "upper_rate", "reference",
    "lhs", "restricted", "pinched_entropy", "state_entropy", "residual", "gap", "gap_bound", "restricted_rate",
    "s_in", "s_out", "tilde_residual",
    "relative_entropy", "D_M", "h", "E_l", "min_gap", "median_gap",
})


def in_units(report: RunReport, units: str) -> RunReport:
    """Copy of ``report`` with entropy-valued rows and summary entries in ``units``.

    Verdicts are always evaluated in nats and are passed through unchanged.
    """
    if units == "nats":
        return report
    if units != "bits":
        raise ValueError(f"unknown units {units!r}")
    scale = 1.0 / math.log(2.0)
    hit = [c in ENTROPY_FIELDS for c in report.columns]
    rows = [tuple(x * scale if h else x for x, h in zip(row, hit)) for row in report.rows]
    summary = {
        k: v * scale if k in ENTROPY_FIELDS and isinstance(v, float) else v for k, v in report.summary.items()
    }
    return RunReport(report.config, report.columns, rows, list(report.verdicts), summary, report.wall_time)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _json_value(x):
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


# --------------------------------------------------------------------------
# inputs


def state_pair(config: ExperimentConfig) -> tuple[np.ndarray, np.ndarray]:
    """Explicit states from files, or a full-rank pair drawn from the root seed."""
    if config.psi or config.phi:
        if not (config.psi and config.phi):
            raise ValueError("--psi and --phi must be given together")
        psi, phi = load_state(config.psi), load_state(config.phi)
        if psi.shape != phi.shape:
            raise ValueError(f"state dimensions differ: {psi.shape[0]} vs {phi.shape[0]}")
        return psi, phi
    return seeded_pair(config.dim, config.seed)


def seeded_pair(dim: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    psi = random_density(dim, dim, derive_seed(seed, 0))
    phi = random_density(dim, dim, derive_seed(seed, 1))
    return psi, phi


def _require_support(psi, phi) -> float:
    s = relative_entropy(psi, phi)
    if not s.finite:
        raise SupportViolation("supp(psi) is not contained in supp(phi): S(psi||phi) is infinite")
    return s.value


def _map(fn, items, workers: int):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# --------------------------------------------------------------------------
# stein


STEIN_COLUMNS = ("n", "lower_rate", "upper_rate", "reference")


def _stein_task(args):
    psi, phi, eps, n = args
    return stein_point(psi, phi, eps, n).as_row()


def run_stein(config: ExperimentConfig) -> RunReport:
    start = time.perf_counter()
    psi, phi = state_pair(config)
    s = _require_support(psi, phi)
    check_pencil_budget(psi, phi, config.n_max)
    tasks = [(psi, phi, config.epsilon, n) for n in range(1, config.n_max + 1)]
    rows = _map(_stein_task, tasks, config.workers)
    report = RunReport(config, STEIN_COLUMNS, rows)

    worst = max(r[1] - r[2] for r in rows)
    report.verdicts.append(Verdict("sandwich lower_rate <= upper_rate", worst <= SANDWICH_SLACK, SANDWICH_SLACK, f"max excess {worst!r}"))
    n_ref = min(4, config.n_max)
    if config.n_max > n_ref:
        dev_ref = abs(rows[n_ref - 1][1] + s)
        dev_end = abs(rows[-1][1] + s)
        report.verdicts.append(Verdict(
            f"trend |lower_rate + S| at n={config.n_max} < at n={n_ref}",
            dev_end < dev_ref, 0.0, f"{dev_end!r} vs {dev_ref!r}",
        ))
    band = all(-s - 5 / math.sqrt(r[0]) <= r[1] <= 1e-12 for r in rows)
    report.verdicts.append(Verdict("lower_rate within [-S - 5/sqrt(n), 0]", band, 0.0))
    report.summary = {"relative_entropy": s, "dim": psi.shape[0]}
    report.wall_time = time.perf_counter() - start
    return report


# --------------------------------------------------------------------------
# hiai-petz


HIAI_PETZ_COLUMNS = (
    "n", "lhs", "restricted", "pinched_entropy", "state_entropy",
    "residual", "gap", "gap_bound", "restricted_rate",
)


def _hiai_petz_task(args):
    psi, phi, n = args
    r = hiai_petz_decomposition_check(psi, phi, n)
    d = psi.shape[0]
    return (
        n, float(r.lhs), float(r.restricted), r.pinched_entropy, r.state_entropy,
        r.residual, r.gap, d * math.log(n + 1), float(r.restricted) / n,
    )


def run_hiai_petz(config: ExperimentConfig) -> RunReport:
    start = time.perf_counter()
    psi, phi = state_pair(config)
    s = _require_support(psi, phi)
    d = psi.shape[0]
    if d**config.n_max > DENSE_PENCIL_MAX_DIM:
        # every row diagonalizes dense d^n x d^n blocks
        raise BudgetExceededError(
            f"dimension {d}^{config.n_max} = {d**config.n_max} exceeds dense cap {DENSE_PENCIL_MAX_DIM}"
        )
    tasks = [(psi, phi, n) for n in range(1, config.n_max + 1)]
    rows = _map(_hiai_petz_task, tasks, config.workers)
    report = RunReport(config, HIAI_PETZ_COLUMNS, rows)

    worst_res = max(abs(r[5]) for r in rows)
    report.verdicts.append(Verdict("|residual| <= 1e-8", worst_res <= HIAI_PETZ_SLACK, HIAI_PETZ_SLACK, f"max {worst_res!r}"))
    gap_ok = all(GAP_FLOOR <= r[6] <= r[7] for r in rows)
    report.verdicts.append(Verdict("gap in [-1e-9, d log(n+1)]", gap_ok, -GAP_FLOOR))
    rate_ok = all(
        s - d * math.log(r[0] + 1) / r[0] - HIAI_PETZ_SLACK <= r[8] <= s + HIAI_PETZ_SLACK for r in rows
    )
    report.verdicts.append(Verdict("S - d log(n+1)/n <= restricted_rate <= S", rate_ok, HIAI_PETZ_SLACK))
    report.summary = {"relative_entropy": s, "dim": d}
    report.wall_time = time.perf_counter() - start
    return report


# --------------------------------------------------------------------------
# typical


TYPICAL_COLUMNS = ("n", "delta", "p_c", "q_c", "p_f", "p_l", "p_cfl", "bound_q_c")


def run_typical(config: ExperimentConfig) -> RunReport:
    start = time.perf_counter()
    psi, phi = state_pair(config)
    s = _require_support(psi, phi)
    l = choose_block_length(psi, phi, config.eta, config.l_max)
    if l is None:
        raise BlockLengthNotFound(
            f"no block length l <= {config.l_max} reaches D_M(l)/l >= S - eta (eta={config.eta})"
        )
    reduction = classical_reduction(psi, phi, l)
    alphabet = ReducedAlphabet.from_reduction(reduction)
    reports = lln_convergence(alphabet, config.delta, range(1, config.n_max + 1))
    report = RunReport(config, TYPICAL_COLUMNS, [r.csv_row() for r in reports])

    target = 1 - config.epsilon
    n_hit = first_reaching(reports, target)
    report.verdicts.append(Verdict(
        "Q(C) <= exp(-n(D_M - delta)) in every row",
        all(r.q_bound_holds for r in reports), 1e-12,
    ))
    report.verdicts.append(Verdict(
        "per-outcome floor on C n F", all(r.floor_holds for r in reports), 0.0,
    ))
    report.verdicts.append(Verdict(
        f"P(C n F n L) >= {target!r} reached", n_hit is not None, 0.0,
        f"first n = {n_hit}",
    ))
    report.summary = {
        "relative_entropy": s,
        "block_length": l,
        "alphabet_size": alphabet.size,
        "D_M": alphabet.D_M,
        "h": alphabet.h,
        "E_l": alphabet.E_l,
        "first_n_reaching_target": n_hit if n_hit is not None else "none",
    }
    report.wall_time = time.perf_counter() - start
    return report


# --------------------------------------------------------------------------
# monotonicity


MONOTONICITY_COLUMNS = (
    "trial", "dim", "kraus", "s_in", "s_out", "gap",
    "tilde_residual", "beta_restricted", "beta_full",
)


@dataclass(frozen=True)
class MonotonicityTrial:
    trial: int
    dim: int
    kraus: int
    s_in: float
    s_out: float
    gap: float
    tilde_residual: float
    beta_restricted: float
    beta_full: float

    def as_row(self) -> tuple:
        return tuple(asdict(self).values())


def monotonicity_trial(
    psi: np.ndarray, phi: np.ndarray, channel: KrausChannel, eps: float, trial: int = 0
) -> MonotonicityTrial:
    """Gap, tilde-state invariance and the subalgebra beta comparison on one triple."""
    rep = monotonicity_gap(psi, phi, channel)
    dil = dilate(channel)
    psi_t, phi_t = tilde_states(psi, phi, dil)
    s_tilde = relative_entropy(psi_t, phi_t)
    tilde = abs(float(s_tilde) - float(rep.s_in)) if rep.s_in.finite else 0.0
    b_sub, b_full = subalgebra_beta_check(psi_t, phi_t, (dil.dim, dil.env_dim), eps)
    return MonotonicityTrial(
        trial, channel.dim, channel.m, float(rep.s_in), float(rep.s_out), rep.gap, tilde, b_sub, b_full
    )


def random_triple(seed: int, trial: int, dims=(2, 3, 4), max_kraus: int = 4):
    rng = rng_from(derive_seed(seed, trial))
    d = int(rng.choice(dims))
    m = int(rng.integers(1, max_kraus + 1))
    psi = random_density(d, d, rng)
    phi = random_density(d, d, rng)
    return psi, phi, random_channel(d, m, rng)


def _monotonicity_task(args):
    seed, trial, dims, max_kraus, eps, fixed = args
    psi, phi, channel = random_triple(seed, trial, dims, max_kraus)
    if fixed is not None:
        f_psi, f_phi, f_channel = fixed
        channel = f_channel or channel
        d = channel.dim
        if f_psi is not None:
            psi, phi = f_psi, f_phi
        elif psi.shape[0] != d:
            rng = rng_from(derive_seed(seed, trial, 1))
            psi, phi = random_density(d, d, rng), random_density(d, d, rng)
    return monotonicity_trial(psi, phi, channel, eps, trial).as_row()


def monotonicity_fuzz(seed: int, trials: int, dims=(2, 3, 4), max_kraus: int = 4, eps: float = 0.1, fixed=None, workers: int = 1) -> list[tuple]:
    tasks = [(seed, i, tuple(dims), max_kraus, eps, fixed) for i in range(trials)]
    return _map(_monotonicity_task, tasks, workers)


def run_monotonicity(config: ExperimentConfig) -> RunReport:
    start = time.perf_counter()
    fixed = None
    if config.channel or config.psi or config.phi:
        channel = load_channel(config.channel) if config.channel else None
        psi = phi = None
        if config.psi or config.phi:
            psi, phi = state_pair(config)
            if channel is not None and channel.dim != psi.shape[0]:
                raise ValueError(f"channel acts on dim {channel.dim}, states have dim {psi.shape[0]}")
            if channel is None:
                channel = random_channel(psi.shape[0], 1, derive_seed(config.seed, 0, 2))
        fixed = (psi, phi, channel)
    rows = monotonicity_fuzz(
        config.seed, config.trials, (config.dim,), config.max_kraus, config.epsilon, fixed, config.workers
    )
    report = RunReport(config, MONOTONICITY_COLUMNS, rows)
    gaps = [r[5] for r in rows]
    min_gap = min(gaps)
    report.verdicts.append(Verdict("min gap >= -1e-8", min_gap >= -MONOTONICITY_SLACK, MONOTONICITY_SLACK, f"min {min_gap!r}"))
    worst_tilde = max(r[6] for r in rows)
    report.verdicts.append(Verdict("|S(tilde) - S| <= 1e-9", worst_tilde <= TILDE_SLACK, TILDE_SLACK, f"max {worst_tilde!r}"))
    worst_beta = max(r[8] - r[7] for r in rows)
    report.verdicts.append(Verdict("restricted beta >= full beta", worst_beta <= BETA_SLACK, BETA_SLACK, f"max deficit {worst_beta!r}"))
    report.summary = {"min_gap": min_gap, "median_gap": statistics.median(gaps)}
    report.wall_time = time.perf_counter() - start
    return report


# --------------------------------------------------------------------------
# selftest


def run_selftest(config: ExperimentConfig) -> RunReport:
    """Small versions of every experiment; one verdict line per check."""
    start = time.perf_counter()
    report = RunReport(config, ("check", "passed"))
    small = [
        ("stein", ExperimentConfig("stein", dim=2, n_max=12, seed=config.seed)),
        ("hiai-petz", ExperimentConfig("hiai-petz", dim=2, n_max=4, seed=config.seed)),
        ("typical", ExperimentConfig("typical", dim=2, n_max=40, seed=config.seed, l_max=2, eta=0.5)),
        ("monotonicity", ExperimentConfig("monotonicity", dim=3, trials=25, seed=config.seed)),
    ]
    runners = {"stein": run_stein, "hiai-petz": run_hiai_petz, "typical": run_typical, "monotonicity": run_monotonicity}
    for name, cfg in small:
        sub = runners[name](cfg)
        for v in sub.verdicts:
            if name == "typical" and v.name.startswith("P(C n F n L)"):
                continue  # reaching the target needs longer runs
            report.rows.append((f"{name}: {v.name}", v.passed))
            report.verdicts.append(Verdict(f"{name}: {v.name}", v.passed, v.slack, v.detail))
    psi, phi = seeded_pair(2, config.seed)
    additivity = abs(float(relative_entropy(tensor_power(psi, 3), tensor_power(phi, 3))) / 3 - float(relative_entropy(psi, phi)))
    report.rows.append(("additivity n=3", additivity <= 1e-8))
    report.verdicts.append(Verdict("additivity n=3", additivity <= 1e-8, 1e-8, repr(additivity)))
    channel = random_channel(2, 3, derive_seed(config.seed, 99))
    dil = dilate(channel)
    roundtrip = max_abs(dil.apply(psi) - apply(channel, psi))
    report.rows.append(("dilation roundtrip", roundtrip < 1e-10))
    report.verdicts.append(Verdict("dilation roundtrip", roundtrip < 1e-10, 1e-10, repr(roundtrip)))
    report.wall_time = time.perf_counter() - start
    return report


RUNNERS = {
    "stein": run_stein,
    "hiai-petz": run_hiai_petz,
    "typical": run_typical,
    "monotonicity": run_monotonicity,
    "selftest": run_selftest,
}
