"""Array steering vectors, geometric multipath channels, satellite line-of-sight
channels, and link-budget helpers (free-space pathloss, thermal noise).

Phase convention, shared by every module: positive-exponent steering phases;
a URA is indexed row-major over an (n_rows, n_cols) grid, so element (m, n)
responds with exp(j*2*pi*spacing*(m*sin(el)*cos(az) + n*sin(el)*sin(az))),
and ULA element m with exp(j*2*pi*spacing*m*sin(az)). Angles are radians,
spacing is in wavelengths.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants

T0_KELVIN = 290.0

_ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class ArrayGeometry:
    """Antenna array layout; ``dims`` is (n_rows, n_cols), ULAs use (n, 1)."""

    kind: str
    dims: tuple[int, int]
    spacing: float = 0.5

    def __post_init__(self):
        if self.kind not in ("ura", "ula"):
            raise ValueError(f"unknown array kind {self.kind!r}")
        rows, cols = self.dims
        if rows < 1 or cols < 1:
            raise ValueError(f"array dims must be positive, got {self.dims}")
        if self.kind == "ula" and cols != 1:
            raise ValueError("ULA dims must be (n, 1)")
        if self.spacing <= 0:
            raise ValueError("element spacing must be positive")

    @property
    def n_elements(self) -> int:
        return self.dims[0] * self.dims[1]


def ula(n: int, spacing: float = 0.5) -> ArrayGeometry:
    return ArrayGeometry("ula", (n, 1), spacing)


def ura(rows: int, cols: int, spacing: float = 0.5) -> ArrayGeometry:
    return ArrayGeometry("ura", (rows, cols), spacing)


@dataclass(frozen=True)
class PathParams:
    """One propagation path: complex gain (pathloss included), departure
    azimuth/elevation at the transmit array, arrival azimuth at the ULA."""

    gain: complex
    aod_azimuth: float
    aod_elevation: float
    aoa_azimuth: float

    def __post_init__(self):
        for name in ("aod_azimuth", "aoa_azimuth"):
            if abs(getattr(self, name)) > np.pi + _ANGLE_TOL:
                raise ValueError(f"{name} outside [-pi, pi]")
        if abs(self.aod_elevation) > np.pi / 2 + _ANGLE_TOL:
            raise ValueError("aod_elevation outside [-pi/2, pi/2]")


@dataclass(frozen=True)
class SatelliteGeometry:
    """Satellite position as seen from the transmit array."""

    azimuth: float
    elevation: float
    slant_range_m: float
    atmospheric_loss_db: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.elevation <= np.pi / 2 + _ANGLE_TOL:
            raise ValueError("elevation must lie in (0, pi/2]")
        if self.slant_range_m <= 0:
            raise ValueError("slant range must be positive")
        if self.atmospheric_loss_db < 0:
            raise ValueError("atmospheric loss cannot be negative")


def steering_vector(geom: ArrayGeometry, azimuth: float, elevation: float = 0.0) -> np.ndarray:
    """Unit-modulus array response for the given direction.

    For a ULA the elevation argument is ignored.
    """
    two_pi_d = 2.0 * np.pi * geom.spacing
    if geom.kind == "ula":
        n = np.arange(geom.dims[0])
        return np.exp(1j * two_pi_d * n * np.sin(azimuth))
    rows, cols = geom.dims
    m = np.arange(rows)[:, None]
    n = np.arange(cols)[None, :]
    phase = two_pi_d * (
        m * np.sin(elevation) * np.cos(azimuth) + n * np.sin(elevation) * np.sin(azimuth)
    )
    return np.exp(1j * phase).reshape(-1)


def generate_ue_channel(geom_tx: ArrayGeometry, geom_rx: ArrayGeometry, paths) -> np.ndarray:
    """Narrowband channel as a sum of per-path outer products
    gain * a_rx(aoa) @ a_tx(aod)^H, shaped (n_rx, n_tx)."""
    if not paths:
        raise ValueError("at least one path is required")
    h = np.zeros((geom_rx.n_elements, geom_tx.n_elements), dtype=np.complex128)
    for p in paths:
        a_rx = steering_vector(geom_rx, p.aoa_azimuth)
        a_tx = steering_vector(geom_tx, p.aod_azimuth, p.aod_elevation)
        h += p.gain * np.outer(a_rx, a_tx.conj())
    return h


def generate_random_paths(rng, count: int, pathloss_db: float) -> list[PathParams]:
    """Draw i.i.d. path parameters: circularly symmetric complex Gaussian gains
    with per-path variance 10^(-pathloss_db/10)/count and uniform angles.

    ``rng`` is an integer seed or a numpy Generator; a given seed always
    produces the same paths.
    """
    if count < 1:
        raise ValueError("path count must be >= 1")
    rng = np.random.default_rng(rng)
    sigma = np.sqrt(10.0 ** (-pathloss_db / 10.0) / count / 2.0)
    gains = sigma * (rng.standard_normal(count) + 1j * rng.standard_normal(count))
    aod_az = rng.uniform(-np.pi, np.pi, count)
    aod_el = rng.uniform(-np.pi / 2, np.pi / 2, count)
    aoa_az = rng.uniform(-np.pi, np.pi, count)
    return [
        PathParams(complex(g), float(az), float(el), float(aoa))
        for g, az, el, aoa in zip(gains, aod_az, aod_el, aoa_az)
    ]


def satellite_channel(geom_tx: ArrayGeometry, sat: SatelliteGeometry) -> np.ndarray:
    """Line-of-sight channel toward a satellite: the bare steering vector.

    Large-scale pathloss is tracked separately (see satellite_pathloss), so
    the returned vector always has squared norm equal to the element count.
    """
    return steering_vector(geom_tx, sat.azimuth, sat.elevation)


def build_sat_matrix(geom_tx: ArrayGeometry, sats) -> np.ndarray:
    """Stack conjugated satellite steering vectors as rows, one per satellite,
    so that ``sat_matrix @ F`` yields the per-satellite beamforming gains."""
    if not sats:
        return np.zeros((0, geom_tx.n_elements), dtype=np.complex128)
    return np.stack([satellite_channel(geom_tx, s).conj() for s in sats])


def satellite_pathloss(sat: SatelliteGeometry, carrier_hz: float) -> float:
    """Free-space pathloss plus atmospheric attenuation, as a linear factor."""
    if carrier_hz <= 0:
        raise ValueError("carrier frequency must be positive")
    fspl_db = 20.0 * np.log10(4.0 * np.pi * sat.slant_range_m * carrier_hz / constants.c)
    return float(10.0 ** ((fspl_db + sat.atmospheric_loss_db) / 10.0))


def thermal_noise_power(bandwidth_hz: float, noise_figure_db: float = 0.0) -> float:
    """k*T0*B noise power in watts, scaled by the receiver noise figure."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be positive")
    return float(constants.k * T0_KELVIN * bandwidth_hz * 10.0 ** (noise_figure_db / 10.0))


@dataclass
class ChannelSet:
    """One realization of every channel the precoders need.

    ``sat_matrix`` rows are conjugated satellite steering vectors;
    ``sat_pathloss`` holds the matching linear loss factors and the noise
    arrays hold per-receiver noise powers in watts.
    """

    ue_channels: list[np.ndarray]
    sat_matrix: np.ndarray
    sat_pathloss: np.ndarray
    sat_noise_power: np.ndarray
    ue_noise_power: np.ndarray

    @property
    def n_ue(self) -> int:
        return len(self.ue_channels)

    @property
    def n_tx(self) -> int:
        return self.ue_channels[0].shape[1] if self.ue_channels else self.sat_matrix.shape[1]

    @property
    def n_sat(self) -> int:
        return self.sat_matrix.shape[0]

    def validate(self):
        if not self.ue_channels:
            raise ValueError("at least one UE channel is required")
        n_tx = self.ue_channels[0].shape[1]
        for u, h in enumerate(self.ue_channels):
            if h.ndim != 2 or h.shape[1] != n_tx:
                raise ValueError(f"UE {u} channel shape {h.shape} inconsistent with n_tx={n_tx}")
        if self.sat_matrix.ndim != 2 or self.sat_matrix.shape[1] != n_tx:
            raise ValueError("satellite matrix column count must equal n_tx")
        row_power = np.sum(np.abs(self.sat_matrix) ** 2, axis=1)
        if self.n_sat and np.max(np.abs(row_power - n_tx)) > 1e-9:
            raise ValueError("satellite rows must be pure steering vectors (norm^2 = n_tx)")
        for name, arr, want in (
            ("sat_pathloss", self.sat_pathloss, self.n_sat),
            ("sat_noise_power", self.sat_noise_power, self.n_sat),
            ("ue_noise_power", self.ue_noise_power, self.n_ue),
        ):
            if len(arr) != want:
                raise ValueError(f"{name} must have length {want}")
            if want and np.min(arr) <= 0:
                raise ValueError(f"{name} entries must be positive")
