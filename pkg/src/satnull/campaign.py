"""Seeded Monte-Carlo campaigns, transmit-power and penalty-weight sweeps,
CDF assembly, gradient verification, and CSV emission.

Every CSV produced here is a pure function of (scenario, options): trials
derive their random streams from (rng_seed, trial_index), methods run in the
requested order, and floats are written with shortest round-trip formatting.
Wall-clock columns are zeroed unless timing is explicitly requested, which
keeps repeated runs byte-identical.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .baselines import BaselineKind, hf, run_baseline
from .channel import ChannelSet, SatelliteGeometry, build_sat_matrix, ura
from .errors import ConfigurationError, NumericalError
from .metrics import evaluate_link
from .precoding import (
    CombinerSet,
    HybridPrecoder,
    OptimizerConfig,
    as_effective,
    bcd_optimize,
    cost,
    grad_f_bb,
    grad_f_rf,
    project_unit_modulus,
)
from .scenario import Scenario, optimizer_config, sample_channel_set, trial_rng

PROPOSED = "proposed"
METHOD_TAGS = (PROPOSED,) + tuple(kind.value for kind in BaselineKind)

DEFAULT_POWER_GRID = tuple(np.linspace(0.01, 1.0, 10).round(12).tolist())
DEFAULT_LAMBDA_GRID = (0.0, 1.0, 10.0, 100.0)

GRADCHECK_TOL = 1e-5


@dataclass
class TrialRecord:
    """Per-trial, per-method outcome of a campaign."""

    trial_index: int
    method: str
    sum_rate_bits: float
    per_sat_inr_db: list[float]
    final_cost: float
    wall_time_ms: float = 0.0
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def validate_methods(methods) -> list[str]:
    tags = list(methods) if methods else list(METHOD_TAGS)
    for tag in tags:
        if tag not in METHOD_TAGS:
            raise ConfigurationError(
                f"unknown method {tag!r}; expected one of: {', '.join(METHOD_TAGS)}"
            )
    return tags


def design_precoder(tag: str, channels: ChannelSet, cfg: OptimizerConfig, n_rf: int):
    """Design one method's precoder for a channel realization.

    Returns (effective precoder matrix, combiners). The proposed method runs
    the penalized gradient optimizer from the nulling hybrid factorization;
    baselines dispatch through ``run_baseline``.
    """
    if tag == PROPOSED:
        init, _ = hf(channels, cfg.p_t, n_rf, include_satellites=True)
        prec, comb, _ = bcd_optimize(channels, cfg, init)
        return prec.effective(), comb
    prec, comb = run_baseline(tag, channels, cfg, n_rf)
    return as_effective(prec), comb


def _run_trial_method(
    trial: int,
    tag: str,
    channels: ChannelSet,
    cfg: OptimizerConfig,
    n_rf: int,
    inr_power_factor: str,
    timing: bool,
) -> TrialRecord:
    start = time.perf_counter()
    try:
        f, comb = design_precoder(tag, channels, cfg, n_rf)
        link = evaluate_link(channels, f, comb, cfg.p_t, inr_power_factor)
    except (ConfigurationError, NumericalError, np.linalg.LinAlgError) as exc:
        nan = float("nan")
        return TrialRecord(
            trial, tag, nan, [nan] * channels.n_sat, nan, 0.0,
            error=f"{type(exc).__name__}: {exc}",
        )
    wall_ms = (time.perf_counter() - start) * 1e3 if timing else 0.0
    # Comparable across methods: the optimizer's objective evaluated at the
    # returned solution with the scenario's penalty weight.
    final_cost = cfg.lambda_sat * link.interference_power - math.log(2.0) * link.sum_rate_bits
    return TrialRecord(trial, tag, link.sum_rate_bits, link.per_sat_inr_db, final_cost, wall_ms)


def run_campaign(
    scenario: Scenario,
    methods=None,
    inr_power_factor: str = "literal",
    timing: bool = False,
) -> list[TrialRecord]:
    """Run every requested method on ``trial_count`` shared channel draws.

    All methods within a trial consume the identical ChannelSet. Per-trial
    failures are recorded (NaN metrics plus an error note) without aborting
    the campaign.
    """
    tags = validate_methods(methods)
    cfg = optimizer_config(scenario)
    records: list[TrialRecord] = []
    for trial in range(scenario.trial_count):
        channels = sample_channel_set(scenario, trial_rng(scenario.rng_seed, trial))
        for tag in tags:
            records.append(
                _run_trial_method(trial, tag, channels, cfg, scenario.n_rf, inr_power_factor, timing)
            )
    return records


@dataclass
class SweepPoint:
    """Aggregated campaign result at one sweep setting."""

    sweep_value: float
    method: str
    mean_sum_rate: float
    mean_inr_db: float


def mean_inr_db(values) -> float:
    """Average INR samples in the linear power domain, reported in dB.

    Interference powers add physically, so the mean is taken over the linear
    ratios 10^(INR/10); -inf sentinels contribute zero power, and an all-null
    set stays at -inf.
    """
    linear = [10.0 ** (v / 10.0) for v in values]
    if not linear:
        return float("nan")
    mean = float(np.mean(linear))
    if mean <= 0.0:
        return float("-inf")
    return float(10.0 * np.log10(mean))


def _mean_points(value: float, records: list[TrialRecord], tags) -> list[SweepPoint]:
    points = []
    for tag in tags:
        good = [r for r in records if r.method == tag and not r.failed]
        if good:
            rate = float(np.mean([r.sum_rate_bits for r in good]))
            inr = mean_inr_db([v for r in good for v in r.per_sat_inr_db])
        else:
            rate = inr = float("nan")
        points.append(SweepPoint(value, tag, rate, inr))
    return points


def power_sweep(
    scenario: Scenario, powers=None, methods=None, inr_power_factor: str = "literal"
) -> list[SweepPoint]:
    """Mean sum-rate and mean INR per method across a transmit-power grid."""
    grid = [float(p) for p in (powers if powers is not None else DEFAULT_POWER_GRID)]
    if not grid:
        raise ConfigurationError("power grid is empty")
    if min(grid) <= 0:
        raise ConfigurationError("transmit powers must be positive")
    tags = validate_methods(methods)
    points = []
    for p_t in grid:
        records = run_campaign(
            scenario.model_copy(update={"p_t_watts": p_t}), tags, inr_power_factor
        )
        points.extend(_mean_points(p_t, records, tags))
    return points


def lambda_sweep(
    scenario: Scenario, lambdas=None, methods=None, inr_power_factor: str = "literal"
) -> list[SweepPoint]:
    """Mean sum-rate and mean INR across penalty weights (proposed method by
    default; other methods may be included for reference)."""
    grid = [float(v) for v in (lambdas if lambdas is not None else DEFAULT_LAMBDA_GRID)]
    if not grid:
        raise ConfigurationError("lambda grid is empty")
    if min(grid) < 0:
        raise ConfigurationError("lambda values must be >= 0")
    tags = validate_methods(methods if methods is not None else [PROPOSED])
    points = []
    for lam in grid:
        optimizer = scenario.optimizer.model_copy(update={"lambda_sat": lam})
        records = run_campaign(
            scenario.model_copy(update={"optimizer": optimizer}), tags, inr_power_factor
        )
        points.extend(_mean_points(lam, records, tags))
    return points


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def records_csv(records: list[TrialRecord], n_sat: int) -> str:
    """Campaign records as CSV: trial,method,sum_rate_bits,inr_db_sat*,final_cost,wall_ms."""
    fields = ["trial", "method", "sum_rate_bits"]
    fields += [f"inr_db_sat{i + 1}" for i in range(n_sat)]
    fields += ["final_cost", "wall_ms"]
    lines = [",".join(fields)]
    for r in records:
        inrs = list(r.per_sat_inr_db) + [float("nan")] * (n_sat - len(r.per_sat_inr_db))
        row = [str(r.trial_index), r.method, _fmt(r.sum_rate_bits)]
        row += [_fmt(v) for v in inrs[:n_sat]]
        row += [_fmt(r.final_cost), _fmt(r.wall_time_ms)]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _record_metric(record: TrialRecord, metric: str) -> float:
    if metric == "sum_rate":
        return record.sum_rate_bits
    if not record.per_sat_inr_db:
        return float("nan")
    return mean_inr_db(record.per_sat_inr_db)


def cdf_csv(records: list[TrialRecord], metric: str) -> str:
    """Empirical CDF per method as CSV ``method,value,cdf``.

    ``metric`` is "inr" (per-trial INR averaged over satellites in the linear
    power domain, reported in dB) or "sum_rate". Values are sorted ascending,
    -inf sentinels first; ordinates are k/n. Failed records are excluded.
    """
    if metric not in ("inr", "sum_rate"):
        raise ConfigurationError(f"unknown CDF metric {metric!r}")
    if not records:
        raise ConfigurationError("no records to summarize")
    by_method: dict[str, list[float]] = {}
    for r in records:
        if r.failed:
            continue
        value = _record_metric(r, metric)
        if math.isnan(value):
            continue
        by_method.setdefault(r.method, []).append(value)
    if not by_method:
        raise ConfigurationError("no finite metric values to summarize")
    lines = ["method,value,cdf"]
    for method, values in by_method.items():
        values.sort()
        n = len(values)
        for k, v in enumerate(values, start=1):
            lines.append(f"{method},{_fmt(v)},{_fmt(k / n)}")
    return "\n".join(lines) + "\n"


def sweep_csv(points: list[SweepPoint], value_field: str) -> str:
    """Sweep results as CSV with the sweep variable in the first column."""
    lines = [f"{value_field},method,mean_sum_rate,mean_inr_db"]
    for p in points:
        lines.append(f"{_fmt(p.sweep_value)},{p.method},{_fmt(p.mean_sum_rate)},{_fmt(p.mean_inr_db)}")
    return "\n".join(lines) + "\n"


@dataclass
class GradCheckResult:
    """Analytic-versus-finite-difference agreement for one random instance."""

    index: int
    n_tx: int
    n_rf: int
    n_ue: int
    lambda_sat: float
    rel_err_bb: float
    rel_err_rf: float

    @property
    def passed(self) -> bool:
        return max(self.rel_err_bb, self.rel_err_rf) <= GRADCHECK_TOL


def finite_difference_gradient(func, x: np.ndarray, step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of a real function of a complex array,
    packed as d/d(real part) + j * d/d(imag part) per entry."""
    grad = np.zeros(x.shape, dtype=np.complex128)
    flat_x = x.ravel()
    flat_g = grad.ravel()
    for k in range(flat_x.size):
        original = flat_x[k]
        for direction in (1.0, 1j):
            flat_x[k] = original + step * direction
            plus = func(x)
            flat_x[k] = original - step * direction
            minus = func(x)
            flat_g[k] += direction * (plus - minus) / (2.0 * step)
        flat_x[k] = original
    return grad


_GRADCHECK_ARRAYS = {4: (2, 2), 8: (2, 4), 16: (4, 4)}


def _random_instance(rng: np.random.Generator):
    """One well-conditioned random problem for gradient verification."""
    n_tx = int(rng.choice([4, 8, 16]))
    n_rf = int(rng.choice([k for k in (2, 4, 8) if k <= n_tx]))
    n_ue = int(rng.choice([1, 2, 3]))
    lam = float(rng.choice([0.0, 10.0]))
    n_rx, n_sat = 2, 2
    geom = ura(*_GRADCHECK_ARRAYS[n_tx])

    def crandn(*shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)

    sats = [
        SatelliteGeometry(rng.uniform(-np.pi, np.pi), rng.uniform(0.3, np.pi / 2), 1.0)
        for _ in range(n_sat)
    ]
    channels = ChannelSet(
        ue_channels=[crandn(n_rx, n_tx) for _ in range(n_ue)],
        sat_matrix=build_sat_matrix(geom, sats),
        sat_pathloss=np.ones(n_sat),
        sat_noise_power=np.ones(n_sat),
        ue_noise_power=np.ones(n_ue),
    )
    prec = HybridPrecoder(
        project_unit_modulus(crandn(n_tx, n_rf)),
        crandn(n_rf, n_ue),
    )
    combiners = []
    for _ in range(n_ue):
        w = crandn(n_rx)
        combiners.append(w / np.linalg.norm(w))
    cfg = OptimizerConfig(lambda_sat=lam, p_t=1.0)
    return channels, prec, CombinerSet(combiners), cfg


def gradient_check(seed: int = 0, instances: int = 20, fd_step: float = 1e-6) -> list[GradCheckResult]:
    """Compare both analytic gradients against central finite differences of
    the cost on random instances spanning the supported problem sizes."""
    if instances < 1:
        raise ConfigurationError("instances must be >= 1")
    if fd_step <= 0:
        raise ConfigurationError("fd_step must be positive")
    rng = np.random.default_rng([seed, 0x67726164])
    results = []
    for index in range(instances):
        channels, prec, comb, cfg = _random_instance(rng)

        analytic_bb = grad_f_bb(channels, prec, comb, cfg)
        fd_bb = finite_difference_gradient(
            lambda x: cost(channels, HybridPrecoder(prec.f_rf, x), comb, cfg),
            prec.f_bb.copy(),
            fd_step,
        )
        analytic_rf = grad_f_rf(channels, prec, comb, cfg)
        fd_rf = finite_difference_gradient(
            lambda x: cost(channels, HybridPrecoder(x, prec.f_bb), comb, cfg),
            prec.f_rf.copy(),
            fd_step,
        )
        results.append(
            GradCheckResult(
                index=index,
                n_tx=channels.n_tx,
                n_rf=prec.n_rf,
                n_ue=channels.n_ue,
                lambda_sat=cfg.lambda_sat,
                rel_err_bb=float(np.linalg.norm(analytic_bb - fd_bb) / np.linalg.norm(fd_bb)),
                rel_err_rf=float(np.linalg.norm(analytic_rf - fd_rf) / np.linalg.norm(fd_rf)),
            )
        )
    return results


def gradcheck_csv(results: list[GradCheckResult]) -> str:
    lines = ["instance,n_tx,n_rf,n_ue,lambda_sat,rel_err_bb,rel_err_rf"]
    for r in results:
        lines.append(
            f"{r.index},{r.n_tx},{r.n_rf},{r.n_ue},{_fmt(r.lambda_sat)},"
            f"{_fmt(r.rel_err_bb)},{_fmt(r.rel_err_rf)}"
        )
    return "\n".join(lines) + "\n"
