"""Scenario configuration schema and per-trial channel sampling.

A scenario file is YAML (or JSON) matching the ``Scenario`` model below; the
same model doubles as the request body schema of the evaluation service. The
defaults reproduce the reference simulation setup: an 8x8 transmit URA with 8
RF chains serving 2 two-antenna UEs at 14 GHz / 200 MHz while protecting 2
LEO satellites.
"""
from __future__ import annotations

import math

import numpy as np
import yaml
from pydantic import BaseModel, Field, ValidationError, model_validator

from .channel import (
    ArrayGeometry,
    ChannelSet,
    SatelliteGeometry,
    build_sat_matrix,
    generate_random_paths,
    generate_ue_channel,
    satellite_pathloss,
    thermal_noise_power,
    ula,
    ura,
)
from .errors import ConfigurationError
from .precoding import OptimizerConfig

SCHEMA_VERSION = 1


class ArraySpec(BaseModel):
    rows: int = Field(8, ge=1)
    cols: int = Field(8, ge=1)
    spacing_wavelengths: float = Field(0.5, gt=0)

    def geometry(self) -> ArrayGeometry:
        return ura(self.rows, self.cols, self.spacing_wavelengths)


class SatelliteSpec(BaseModel):
    """One fixed satellite position as seen from the transmitter."""

    azimuth_deg: float = Field(ge=-180.0, le=180.0)
    elevation_deg: float = Field(gt=0.0, le=90.0)
    slant_range_m: float = Field(150e3, gt=0)
    atmospheric_loss_db: float = Field(0.5, ge=0)

    def geometry(self) -> SatelliteGeometry:
        return SatelliteGeometry(
            math.radians(self.azimuth_deg),
            math.radians(self.elevation_deg),
            self.slant_range_m,
            self.atmospheric_loss_db,
        )


def _default_fixed_satellites() -> list[SatelliteSpec]:
    return [
        SatelliteSpec(azimuth_deg=20.0, elevation_deg=55.0, slant_range_m=122e3),
        SatelliteSpec(azimuth_deg=-35.0, elevation_deg=40.0, slant_range_m=156e3),
    ]


class SatelliteField(BaseModel):
    """Satellites to protect: a fixed list, or fresh random draws per trial
    (uniform azimuth, elevation uniform over ``elevation_range_deg``)."""

    mode: str = Field("random", pattern="^(fixed|random)$")
    fixed: list[SatelliteSpec] = Field(default_factory=_default_fixed_satellites)
    count: int = Field(2, ge=0)
    slant_range_m: float = Field(150e3, gt=0)
    atmospheric_loss_db: float = Field(0.5, ge=0)
    elevation_range_deg: tuple[float, float] = (30.0, 90.0)

    @model_validator(mode="after")
    def _check(self):
        lo, hi = self.elevation_range_deg
        if not 0.0 < lo <= hi <= 90.0:
            raise ValueError("elevation_range_deg must satisfy 0 < lo <= hi <= 90")
        return self

    @property
    def n_sat(self) -> int:
        return len(self.fixed) if self.mode == "fixed" else self.count


class OptimizerSettings(BaseModel):
    """Gradient-optimizer hyperparameters used by campaigns.

    The fixed step size must be hand-tuned to the channel distribution; the
    default suits the synthetic link budget below (UE SINRs around 30-45 dB),
    where coarser steps overshoot the stiff interference terms and lose rate.
    """

    lambda_sat: float = Field(10.0, ge=0)
    step_size: float = Field(1.5e-6, gt=0)
    iter_bb: int = Field(5, ge=1)
    iter_rf: int = Field(5, ge=1)
    outer_iters: int = Field(200, ge=1)


class Scenario(BaseModel):
    """Complete description of one Monte-Carlo experiment."""

    schema_version: int = SCHEMA_VERSION
    tx_array: ArraySpec = Field(default_factory=ArraySpec)
    n_rf: int = Field(8, ge=1)
    n_ue: int = Field(2, ge=1)
    n_r: int = Field(2, ge=1)
    carrier_hz: float = Field(14e9, gt=0)
    bandwidth_hz: float = Field(200e6, gt=0)
    p_t_watts: float = Field(1.0, gt=0)
    ue_pathloss_range_db: tuple[float, float] = (80.0, 110.0)
    paths_per_ue: int = Field(4, ge=1)
    ue_noise_figure_db: float = Field(7.0, ge=0)
    sat_noise_figure_db: float = Field(2.0, ge=0)
    satellites: SatelliteField = Field(default_factory=SatelliteField)
    optimizer: OptimizerSettings = Field(default_factory=OptimizerSettings)
    rng_seed: int = Field(0, ge=0)
    trial_count: int = Field(500, ge=1)

    @model_validator(mode="after")
    def _check(self):
        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {self.schema_version}")
        if self.n_rf > self.n_t:
            raise ValueError(f"n_rf={self.n_rf} exceeds the antenna count {self.n_t}")
        lo, hi = self.ue_pathloss_range_db
        if lo > hi:
            raise ValueError("ue_pathloss_range_db must be ordered (lo, hi)")
        return self

    @property
    def n_t(self) -> int:
        return self.tx_array.rows * self.tx_array.cols

    @property
    def n_sat(self) -> int:
        return self.satellites.n_sat


def paper_default_scenario(trial_count: int = 500, rng_seed: int = 0) -> Scenario:
    """The built-in default experiment (all schema defaults)."""
    return Scenario(trial_count=trial_count, rng_seed=rng_seed)


def load_scenario(path) -> Scenario:
    """Load and validate a YAML/JSON scenario file."""
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read scenario file: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"scenario file is not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError("scenario file must contain a mapping")
    return validate_scenario(data)


def validate_scenario(data: dict) -> Scenario:
    try:
        return Scenario.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(str(exc)) from exc


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Independent, reproducible random stream for one trial."""
    return np.random.default_rng([seed, trial_index])


def _draw_satellites(field: SatelliteField, rng: np.random.Generator) -> list[SatelliteGeometry]:
    if field.mode == "fixed":
        return [s.geometry() for s in field.fixed]
    lo, hi = (math.radians(v) for v in field.elevation_range_deg)
    sats = []
    for _ in range(field.count):
        azimuth = rng.uniform(-np.pi, np.pi)
        elevation = rng.uniform(lo, hi)
        sats.append(
            SatelliteGeometry(azimuth, elevation, field.slant_range_m, field.atmospheric_loss_db)
        )
    return sats


def sample_channel_set(scenario: Scenario, rng: np.random.Generator) -> ChannelSet:
    """Draw one synthetic channel realization.

    The generator is consumed in a fixed order (UE pathloss and paths first,
    then satellite positions) so a given (seed, trial) pair always produces
    the same channels.
    """
    geom_tx = scenario.tx_array.geometry()
    geom_rx = ula(scenario.n_r)
    lo, hi = scenario.ue_pathloss_range_db
    ue_channels = []
    for _ in range(scenario.n_ue):
        pathloss_db = rng.uniform(lo, hi)
        paths = generate_random_paths(rng, scenario.paths_per_ue, pathloss_db)
        ue_channels.append(generate_ue_channel(geom_tx, geom_rx, paths))
    sats = _draw_satellites(scenario.satellites, rng)
    sat_matrix = build_sat_matrix(geom_tx, sats)
    sat_loss = np.array([satellite_pathloss(s, scenario.carrier_hz) for s in sats])
    sigma2_sat = thermal_noise_power(scenario.bandwidth_hz, scenario.sat_noise_figure_db)
    sigma2_ue = thermal_noise_power(scenario.bandwidth_hz, scenario.ue_noise_figure_db)
    channels = ChannelSet(
        ue_channels=ue_channels,
        sat_matrix=sat_matrix,
        sat_pathloss=sat_loss,
        sat_noise_power=np.full(len(sats), sigma2_sat),
        ue_noise_power=np.full(scenario.n_ue, sigma2_ue),
    )
    channels.validate()
    return channels


def optimizer_config(scenario: Scenario) -> OptimizerConfig:
    opt = scenario.optimizer
    return OptimizerConfig(
        lambda_sat=opt.lambda_sat,
        p_t=scenario.p_t_watts,
        step_size=opt.step_size,
        iter_bb=opt.iter_bb,
        iter_rf=opt.iter_rf,
        outer_iters=opt.outer_iters,
    )
