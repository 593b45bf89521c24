"""Link-quality metrics for any precoder/combiner pair: per-UE SINR, sum rate,
aggregate satellite interference power, and per-satellite INR in dB.

These evaluations are kept independent of the optimizer internals so they can
cross-check the optimizer's cost function.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet
from .precoding import CombinerSet, as_effective

INR_POWER_FACTORS = ("literal", "unit")

# Beam gains whose magnitude is indistinguishable from zero at double
# precision (relative to the channel and precoder norms) report -inf INR.
_ZERO_FLOOR = 100.0 * np.finfo(np.float64).eps


@dataclass
class LinkMetrics:
    """Metrics for one precoder/combiner pair on one channel realization."""

    per_ue_sinr: list[float]
    sum_rate_bits: float
    per_sat_inr_db: list[float]
    interference_power: float


def sinr(channels: ChannelSet, prec, comb: CombinerSet, ue_index: int) -> float:
    """Post-combining SINR of one UE; accepts hybrid or fully digital precoders."""
    f = as_effective(prec)
    w = comb.combiners[ue_index]
    t = w.conj() @ channels.ue_channels[ue_index] @ f
    power = np.abs(t) ** 2
    signal = float(power[ue_index])
    other = power.copy()
    other[ue_index] = 0.0
    return signal / float(channels.ue_noise_power[ue_index] + other.sum())


def sum_rate(channels: ChannelSet, prec, comb: CombinerSet) -> float:
    """Sum over UEs of log2(1 + SINR), in bits/s/Hz."""
    f = as_effective(prec)
    return float(sum(np.log2(1.0 + sinr(channels, f, comb, u)) for u in range(channels.n_ue)))


def interference_power(sat_matrix: np.ndarray, prec) -> float:
    """Total beamforming power toward the satellites, ||H_sat @ F||_F^2."""
    f = as_effective(prec)
    if sat_matrix.shape[1] != f.shape[0]:
        raise ValueError(
            f"satellite matrix has {sat_matrix.shape[1]} columns, precoder has {f.shape[0]} rows"
        )
    return float(np.linalg.norm(sat_matrix @ f) ** 2)


def inr_db(
    sat_row: np.ndarray,
    prec,
    p_t: float,
    pathloss_linear: float,
    sigma2: float,
    power_factor: str = "literal",
) -> float:
    """Interference-to-noise ratio at one satellite, in dB.

    ``sat_row`` is the conjugated steering vector (a row of
    ChannelSet.sat_matrix); its beam gain is summed across all UE streams.
    ``power_factor="literal"`` multiplies by ``p_t`` on top of the
    power-normalized precoder; ``"unit"`` omits that factor. Beam gains
    indistinguishable from zero at double precision return -inf.
    """
    if pathloss_linear <= 0:
        raise ValueError("pathloss must be positive")
    if sigma2 <= 0:
        raise ValueError("noise power must be positive")
    if power_factor not in INR_POWER_FACTORS:
        raise ValueError(f"power_factor must be one of {INR_POWER_FACTORS}")
    f = as_effective(prec)
    row = np.asarray(sat_row) @ f
    beam_power = float(np.sum(np.abs(row) ** 2))
    floor = (_ZERO_FLOOR * np.linalg.norm(sat_row) * np.linalg.norm(f)) ** 2
    if beam_power <= floor:
        return float("-inf")
    scale = p_t if power_factor == "literal" else 1.0
    return float(10.0 * np.log10(scale * beam_power / (pathloss_linear * sigma2)))


def evaluate_link(
    channels: ChannelSet, prec, comb: CombinerSet, p_t: float, power_factor: str = "literal"
) -> LinkMetrics:
    """Evaluate every metric for one precoder on one channel realization."""
    f = as_effective(prec)
    sinrs = [sinr(channels, f, comb, u) for u in range(channels.n_ue)]
    rate = float(sum(np.log2(1.0 + s) for s in sinrs))
    inrs = [
        inr_db(
            channels.sat_matrix[i],
            f,
            p_t,
            float(channels.sat_pathloss[i]),
            float(channels.sat_noise_power[i]),
            power_factor,
        )
        for i in range(channels.n_sat)
    ]
    return LinkMetrics(sinrs, rate, inrs, interference_power(channels.sat_matrix, f))


def protection_violation_rate(per_trial_inr_db, threshold_db: float) -> float:
    """Fraction of (trial, satellite) INR samples above the protection threshold.

    ``per_trial_inr_db`` is an iterable of per-trial INR lists (one value per
    satellite, dB). Raises ValueError when no samples are supplied.
    """
    values = [v for trial in per_trial_inr_db for v in trial]
    if not values:
        raise ValueError("no INR samples supplied")
    exceed = sum(1 for v in values if v > threshold_db)
    return exceed / len(values)
