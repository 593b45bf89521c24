"""FastAPI service exposing campaigns, sweeps, gradient verification, and
single-shot precoder design over the core library.

CSV-producing endpoints return ``text/csv`` bodies that are byte-identical
for identical requests. Configuration problems map to HTTP 400, numerical
failures to HTTP 500, both with a machine-readable ``kind`` field.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import __version__
from ..campaign import (
    METHOD_TAGS,
    cdf_csv,
    design_precoder,
    gradcheck_csv,
    gradient_check,
    lambda_sweep,
    power_sweep,
    records_csv,
    run_campaign,
    sweep_csv,
    validate_methods,
)
from ..errors import ConfigurationError, NumericalError
from ..metrics import evaluate_link
from ..scenario import optimizer_config, sample_channel_set, trial_rng
from .schemas import (
    CampaignRequest,
    ComplexMatrixPayload,
    DesignRequest,
    DesignResponse,
    GradCheckRequest,
    LambdaSweepRequest,
    PowerSweepRequest,
    ServiceInfo,
)

app = FastAPI(
    title="satnull",
    version=__version__,
    description="Hybrid precoding with satellite interference nulling: "
    "Monte-Carlo campaigns, sweeps, and single-shot designs.",
)


@app.exception_handler(ConfigurationError)
async def _configuration_error(_: Request, exc: ConfigurationError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc), "kind": "configuration"})


@app.exception_handler(NumericalError)
async def _numerical_error(_: Request, exc: NumericalError) -> JSONResponse:
    return JSONResponse(status_code=500, content={"detail": str(exc), "kind": "numerical"})


def _csv_response(text: str) -> PlainTextResponse:
    return PlainTextResponse(text, media_type="text/csv")


@app.get("/", response_model=ServiceInfo)
def info() -> ServiceInfo:
    return ServiceInfo(
        name="satnull",
        version=__version__,
        method_tags=list(METHOD_TAGS),
        endpoints=["/campaign", "/power-sweep", "/lambda-sweep", "/gradcheck", "/design"],
    )


@app.post("/campaign", response_class=PlainTextResponse)
def campaign(req: CampaignRequest) -> PlainTextResponse:
    records = run_campaign(req.scenario, req.methods, req.inr_power_factor, req.timing)
    if req.output == "records":
        text = records_csv(records, req.scenario.n_sat)
    elif req.output == "cdf-inr":
        text = cdf_csv(records, "inr")
    else:
        text = cdf_csv(records, "sum_rate")
    return _csv_response(text)


@app.post("/power-sweep", response_class=PlainTextResponse)
def sweep_power(req: PowerSweepRequest) -> PlainTextResponse:
    points = power_sweep(req.scenario, req.powers, req.methods, req.inr_power_factor)
    return _csv_response(sweep_csv(points, "p_t_watts"))


@app.post("/lambda-sweep", response_class=PlainTextResponse)
def sweep_lambda(req: LambdaSweepRequest) -> PlainTextResponse:
    points = lambda_sweep(req.scenario, req.lambdas, req.methods, req.inr_power_factor)
    return _csv_response(sweep_csv(points, "lambda_sat"))


@app.post("/gradcheck", response_class=PlainTextResponse)
def gradcheck(req: GradCheckRequest) -> PlainTextResponse:
    results = gradient_check(req.seed, req.instances, req.fd_step)
    return _csv_response(gradcheck_csv(results))


@app.post("/design", response_model=DesignResponse)
def design(req: DesignRequest) -> DesignResponse:
    validate_methods([req.method])
    scenario = req.scenario
    channels = sample_channel_set(scenario, trial_rng(scenario.rng_seed, req.trial_index))
    cfg = optimizer_config(scenario)
    f, comb = design_precoder(req.method, channels, cfg, scenario.n_rf)
    link = evaluate_link(channels, f, comb, cfg.p_t, req.inr_power_factor)
    return DesignResponse(
        method=req.method,
        sum_rate_bits=link.sum_rate_bits,
        per_ue_sinr=link.per_ue_sinr,
        per_sat_inr_db=link.per_sat_inr_db,
        interference_power=link.interference_power,
        precoder=ComplexMatrixPayload.from_array(f),
        combiners=[ComplexMatrixPayload.from_array(w.reshape(-1, 1)) for w in comb],
    )
