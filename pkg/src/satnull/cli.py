"""Thin command-line client for the evaluation service.

Each subcommand builds a request from the scenario file plus flags and sends
it to the FastAPI app, by default over an in-process ASGI transport (no
network involved); ``--server-url`` targets a running remote instance
instead. Responses are written verbatim, so repeated runs with identical
inputs produce byte-identical CSV.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""
from __future__ import annotations

import asyncio
import sys
from pathlib import Path

import click
import httpx

from .campaign import GRADCHECK_TOL, METHOD_TAGS
from .errors import ConfigurationError, NumericalError
from .scenario import paper_default_scenario, load_scenario, validate_scenario


def _post(path: str, payload: dict, server_url: str | None) -> httpx.Response:
    if server_url:
        return httpx.post(server_url.rstrip("/") + path, json=payload, timeout=None)

    from .service.app import app

    async def call():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://satnull.internal", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(call())


def _deliver(response: httpx.Response, out_path: str | None) -> str:
    if response.status_code >= 400:
        try:
            body = response.json()
            detail, kind = body.get("detail"), body.get("kind", "configuration")
        except ValueError:
            detail, kind = response.text, "configuration"
        if response.status_code >= 500 or kind == "numerical":
            raise NumericalError(str(detail))
        raise ConfigurationError(str(detail))
    text = response.text
    if out_path:
        Path(out_path).write_text(text)
        click.echo(f"wrote {out_path}", err=True)
    else:
        click.echo(text, nl=False)
    return text


def _scenario_payload(scenario_path, seed, trials) -> dict:
    scenario = load_scenario(scenario_path) if scenario_path else paper_default_scenario()
    data = scenario.model_dump()
    if seed is not None:
        data["rng_seed"] = seed
    if trials is not None:
        data["trial_count"] = trials
    return validate_scenario(data).model_dump(mode="json")


def _parse_methods(methods: str | None):
    if methods is None:
        return None
    return [m.strip() for m in methods.split(",") if m.strip()]


def _parse_floats(text: str | None, flag: str):
    if text is None:
        return None
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"{flag} expects a comma-separated list of numbers") from exc


def common_options(fn):
    for option in reversed(
        [
            click.option(
                "--scenario",
                "scenario_path",
                type=click.Path(),
                default=None,
                help="Scenario YAML/JSON file (defaults to the built-in setup).",
            ),
            click.option(
                "--methods",
                default=None,
                help=f"Comma-separated method tags from: {', '.join(METHOD_TAGS)}.",
            ),
            click.option("--seed", type=int, default=None, help="Override the scenario RNG seed."),
            click.option("--trials", type=int, default=None, help="Override the trial count."),
            click.option("--out", "out_path", type=click.Path(), default=None,
                         help="Write the CSV here instead of stdout."),
            click.option(
                "--inr-power-factor",
                type=click.Choice(["literal", "unit"]),
                default="literal",
                show_default=True,
                help="Scale INR by the transmit power (literal) or not (unit).",
            ),
            click.option("--server-url", default=None,
                         help="Send requests to a running service instead of in-process."),
        ]
    ):
        fn = option(fn)
    return fn


@click.group()
def cli():
    """Hybrid precoding with LEO satellite nulling: campaigns, sweeps, checks."""


@cli.command()
@common_options
@click.option("--cdf", type=click.Choice(["inr", "sum-rate"]), default=None,
              help="Emit a per-method CDF instead of raw trial records.")
@click.option("--timing", is_flag=True, default=False,
              help="Record wall-clock times (makes output non-reproducible).")
def campaign(scenario_path, methods, seed, trials, out_path, inr_power_factor, server_url, cdf, timing):
    """Run a Monte-Carlo campaign and emit trial records or a CDF as CSV."""
    payload = {
        "scenario": _scenario_payload(scenario_path, seed, trials),
        "methods": _parse_methods(methods),
        "inr_power_factor": inr_power_factor,
        "output": "records" if cdf is None else f"cdf-{cdf}",
        "timing": timing,
    }
    _deliver(_post("/campaign", payload, server_url), out_path)


@cli.command("power-sweep")
@common_options
@click.option("--powers", default=None,
              help="Comma-separated transmit powers in watts (default 0.01..1).")
def power_sweep_cmd(scenario_path, methods, seed, trials, out_path, inr_power_factor, server_url, powers):
    """Sweep the transmit power and emit per-method means as CSV."""
    payload = {
        "scenario": _scenario_payload(scenario_path, seed, trials),
        "methods": _parse_methods(methods),
        "inr_power_factor": inr_power_factor,
    }
    parsed = _parse_floats(powers, "--powers")
    if parsed is not None:
        payload["powers"] = parsed
    _deliver(_post("/power-sweep", payload, server_url), out_path)


@cli.command("lambda-sweep")
@common_options
@click.option("--lambdas", default=None,
              help="Comma-separated penalty weights (default 0,1,10,100).")
def lambda_sweep_cmd(scenario_path, methods, seed, trials, out_path, inr_power_factor, server_url, lambdas):
    """Sweep the satellite penalty weight and emit per-method means as CSV."""
    payload = {
        "scenario": _scenario_payload(scenario_path, seed, trials),
        "inr_power_factor": inr_power_factor,
    }
    parsed_methods = _parse_methods(methods)
    if parsed_methods is not None:
        payload["methods"] = parsed_methods
    parsed = _parse_floats(lambdas, "--lambdas")
    if parsed is not None:
        payload["lambdas"] = parsed
    _deliver(_post("/lambda-sweep", payload, server_url), out_path)


@cli.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--instances", type=int, default=20, show_default=True)
@click.option("--fd-step", type=float, default=1e-6, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--server-url", default=None)
def gradcheck(seed, instances, fd_step, out_path, server_url):
    """Verify the analytic gradients against finite differences."""
    payload = {"seed": seed, "instances": instances, "fd_step": fd_step}
    text = _deliver(_post("/gradcheck", payload, server_url), out_path)
    worst = 0.0
    for line in text.strip().splitlines()[1:]:
        fields = line.split(",")
        worst = max(worst, float(fields[-2]), float(fields[-1]))
    if worst > GRADCHECK_TOL:
        raise NumericalError(
            f"gradient check failed: worst relative error {worst:.3e} > {GRADCHECK_TOL:.0e}"
        )
    click.echo(f"gradient check passed: worst relative error {worst:.3e}", err=True)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the evaluation service with uvicorn."""
    import uvicorn

    uvicorn.run("satnull.service.app:app", host=host, port=port)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.Abort:
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except ConfigurationError as exc:
        click.echo(f"configuration error: {exc}", err=True)
        sys.exit(1)
    except NumericalError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(2)
    except httpx.HTTPError as exc:
        click.echo(f"transport error: {exc}", err=True)
        sys.exit(1)
    return 0


if __name__ == "__main__":
    main()
