"""Multiuser hybrid precoding with LEO satellite interference nulling.

Core pieces: complex linear-algebra kernels (:mod:`satnull.linalg`), channel
generation (:mod:`satnull.channel`), the penalized gradient optimizer
(:mod:`satnull.precoding`), benchmark precoders (:mod:`satnull.baselines`),
link metrics (:mod:`satnull.metrics`), and the Monte-Carlo harness
(:mod:`satnull.scenario`, :mod:`satnull.campaign`) exposed through a FastAPI
service (:mod:`satnull.service`) with a thin CLI client (:mod:`satnull.cli`).
"""

__version__ = "0.1.0"

from .baselines import BaselineKind, dft_bd, fd_bd, hf, run_baseline
from .campaign import (
    METHOD_TAGS,
    PROPOSED,
    TrialRecord,
    design_precoder,
    gradient_check,
    lambda_sweep,
    mean_inr_db,
    power_sweep,
    run_campaign,
)
from .channel import (
    ArrayGeometry,
    ChannelSet,
    PathParams,
    SatelliteGeometry,
    generate_random_paths,
    generate_ue_channel,
    satellite_channel,
    satellite_pathloss,
    steering_vector,
    thermal_noise_power,
    ula,
    ura,
)
from .errors import ConfigurationError, DivergenceError, InfeasibleError, NumericalError
from .metrics import (
    LinkMetrics,
    evaluate_link,
    inr_db,
    interference_power,
    protection_violation_rate,
    sinr,
    sum_rate,
)
from .precoding import (
    CombinerSet,
    HybridPrecoder,
    OptimizerConfig,
    bcd_optimize,
    cost,
    grad_f_bb,
    grad_f_rf,
    normalize_power,
    project_unit_modulus,
    update_combiner,
)
from .scenario import Scenario, load_scenario, paper_default_scenario, sample_channel_set

__all__ = [
    "ArrayGeometry",
    "BaselineKind",
    "ChannelSet",
    "CombinerSet",
    "ConfigurationError",
    "DivergenceError",
    "HybridPrecoder",
    "InfeasibleError",
    "LinkMetrics",
    "METHOD_TAGS",
    "NumericalError",
    "OptimizerConfig",
    "PROPOSED",
    "PathParams",
    "SatelliteGeometry",
    "Scenario",
    "TrialRecord",
    "bcd_optimize",
    "cost",
    "design_precoder",
    "dft_bd",
    "evaluate_link",
    "fd_bd",
    "generate_random_paths",
    "generate_ue_channel",
    "grad_f_bb",
    "grad_f_rf",
    "gradient_check",
    "hf",
    "inr_db",
    "interference_power",
    "lambda_sweep",
    "load_scenario",
    "mean_inr_db",
    "normalize_power",
    "paper_default_scenario",
    "power_sweep",
    "project_unit_modulus",
    "protection_violation_rate",
    "run_baseline",
    "run_campaign",
    "sample_channel_set",
    "satellite_channel",
    "satellite_pathloss",
    "sinr",
    "steering_vector",
    "sum_rate",
    "thermal_noise_power",
    "ula",
    "update_combiner",
    "ura",
]
