"""Pydantic request/response models of the evaluation service."""
from __future__ import annotations

from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field

from ..campaign import DEFAULT_LAMBDA_GRID, DEFAULT_POWER_GRID, PROPOSED
from ..scenario import Scenario


class CampaignRequest(BaseModel):
    scenario: Scenario = Field(default_factory=Scenario)
    methods: Optional[list[str]] = None
    inr_power_factor: Literal["literal", "unit"] = "literal"
    output: Literal["records", "cdf-inr", "cdf-sum-rate"] = "records"
    timing: bool = False


class PowerSweepRequest(BaseModel):
    scenario: Scenario = Field(default_factory=Scenario)
    methods: Optional[list[str]] = None
    inr_power_factor: Literal["literal", "unit"] = "literal"
    powers: list[float] = Field(default_factory=lambda: list(DEFAULT_POWER_GRID))


class LambdaSweepRequest(BaseModel):
    scenario: Scenario = Field(default_factory=Scenario)
    methods: list[str] = Field(default_factory=lambda: [PROPOSED])
    inr_power_factor: Literal["literal", "unit"] = "literal"
    lambdas: list[float] = Field(default_factory=lambda: list(DEFAULT_LAMBDA_GRID))


class GradCheckRequest(BaseModel):
    seed: int = Field(0, ge=0)
    instances: int = Field(20, ge=1)
    fd_step: float = Field(1e-6, gt=0)


class ComplexMatrixPayload(BaseModel):
    """JSON-safe complex matrix split into real and imaginary parts."""

    re: list[list[float]]
    im: list[list[float]]

    @classmethod
    def from_array(cls, a: np.ndarray) -> "ComplexMatrixPayload":
        a = np.atleast_2d(np.asarray(a, dtype=np.complex128))
        return cls(re=a.real.tolist(), im=a.imag.tolist())

    def to_array(self) -> np.ndarray:
        return np.asarray(self.re, dtype=np.float64) + 1j * np.asarray(self.im, dtype=np.float64)


class DesignRequest(BaseModel):
    """Single-shot precoder design on one sampled channel realization."""

    scenario: Scenario = Field(default_factory=Scenario)
    method: str = PROPOSED
    trial_index: int = Field(0, ge=0)
    inr_power_factor: Literal["literal", "unit"] = "literal"


class DesignResponse(BaseModel):
    method: str
    sum_rate_bits: float
    per_ue_sinr: list[float]
    per_sat_inr_db: list[float]
    interference_power: float
    precoder: ComplexMatrixPayload
    combiners: list[ComplexMatrixPayload]


class ServiceInfo(BaseModel):
    name: str
    version: str
    method_tags: list[str]
    endpoints: list[str]
