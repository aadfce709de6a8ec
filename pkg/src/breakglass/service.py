"""Stateless JSON service over the same library calls the CLI uses.

All endpoints live under /v1. Request bodies mirror the scenario document
and result types field for field; every number is a JSON number. Errors are
structured {"code", "field", "message"}: 400 for malformed bodies (schema),
422 for values that violate a domain invariant, and the degenerate
break-even case reports code "degenerate". Simulation requests must carry an
explicit seed: the service never generates entropy, so identical requests
always produce identical bodies.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__, reporting
from .errors import (
    BreakglassError,
    DegenerateError,
    DomainError,
    InsufficientDataError,
    SchemaError,
)
from .losstail import attach_p_value, fit_power_law
from .scenario import ScenarioDocument, from_dict as scenario_from_dict
from .sentiment import aggregate, cost_multiplier, score_post
from .simulator import SimConfig, simulate as run_simulation
from .taxonomy import AuthorityMode, Calibration, DEFAULT_CALIBRATION, ScopeLevel


def _error_body(code: str, field: str, message: str) -> dict:
    return {"code": code, "field": field, "message": message}


def _require(body: dict, key: str, where: str = "body"):
    if not isinstance(body, dict):
        raise SchemaError(f"{where} must be a JSON object")
    if key not in body:
        raise SchemaError(f"{where}: missing required key {key!r}")
    return body[key]


def _parse_scenario(body: dict) -> ScenarioDocument:
    return scenario_from_dict(_require(body, "scenario"))


def _parse_cell(doc, where: str) -> tuple[ScopeLevel, AuthorityMode]:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where} must be an object with scope and authority")
    scope = _require(doc, "scope", where)
    authority = _require(doc, "authority", where)
    return ScopeLevel.parse(str(scope)), AuthorityMode.parse(str(authority))


def create_app(calibration: Optional[Calibration] = None) -> FastAPI:
    cal = calibration or DEFAULT_CALIBRATION
    app = FastAPI(title="breakglass", version=__version__)
    # Stateless, unauthenticated analytics: any origin may read it, which
    # lets the what-if UI be served from a different port.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(SchemaError)
    async def schema_error(_req: Request, exc: SchemaError):
        return JSONResponse(status_code=400, content=_error_body("schema", "-", str(exc)))

    @app.exception_handler(RequestValidationError)
    async def body_error(_req: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content=_error_body("schema", "-", "malformed JSON body")
        )

    @app.exception_handler(DomainError)
    async def domain_error(_req: Request, exc: DomainError):
        return JSONResponse(
            status_code=422, content=_error_body("domain", exc.field, exc.message)
        )

    @app.exception_handler(DegenerateError)
    async def degenerate_error(_req: Request, exc: DegenerateError):
        return JSONResponse(
            status_code=422, content=_error_body("degenerate", "pair", str(exc))
        )

    @app.exception_handler(InsufficientDataError)
    async def insufficient_error(_req: Request, exc: InsufficientDataError):
        return JSONResponse(
            status_code=422, content=_error_body("insufficient_data", "losses", str(exc))
        )

    @app.exception_handler(BreakglassError)
    async def fallback_error(_req: Request, exc: BreakglassError):
        return JSONResponse(status_code=422, content=_error_body("error", "-", str(exc)))

    @app.get("/v1/health")
    async def health():
        return {
            "status": "ok",
            "version": __version__,
            "calibration_version": cal.version(),
        }

    @app.get("/v1/defaults")
    async def defaults():
        return reporting.defaults_payload(cal)

    @app.post("/v1/evaluate")
    async def evaluate(body: dict):
        return reporting.evaluate_payload(_parse_scenario(body), cal)

    @app.post("/v1/rank")
    async def rank(body: dict):
        return reporting.rank_payload(_parse_scenario(body), cal)

    @app.post("/v1/breakeven")
    async def breakeven(body: dict):
        scenario = _parse_scenario(body)
        pair = _require(body, "pair")
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError("pair must be a two-element list of cells")
        cell_a = _parse_cell(pair[0], "pair[0]")
        cell_b = _parse_cell(pair[1], "pair[1]")
        return reporting.breakeven_payload(scenario, cell_a, cell_b, cal)

    @app.post("/v1/simulate")
    async def simulate(body: dict):
        scenario = _parse_scenario(body)
        cell = _parse_cell(_require(body, "architecture"), "architecture")
        config = _require(body, "config")
        if not isinstance(config, dict):
            raise SchemaError("config must be an object")
        if "seed" not in config or "n_trials" not in config:
            raise SchemaError("config requires explicit n_trials and seed")
        flag = bool(
            config.get("blast_on_trigger_only", scenario.blast_on_trigger_only)
        )
        cfg = SimConfig(
            n_trials=int(config["n_trials"]),
            seed=int(config["seed"]),
            time_jitter=float(config.get("time_jitter", 0.0)),
            blast_on_trigger_only=flag,
            n_partitions=int(config.get("n_partitions", 1)),
        )
        space = {arch.cell: arch for arch in scenario.space(cal)}
        if cell not in space:
            raise DomainError("architecture", "cell not in the design space")
        result = run_simulation(space[cell], scenario.threat, scenario.market, cfg)
        return result.as_dict()

    @app.post("/v1/fit")
    async def fit(body: dict):
        losses = _require(body, "losses")
        if not isinstance(losses, list):
            raise SchemaError("losses must be a list of numbers")
        try:
            values = [float(v) for v in losses]
        except (TypeError, ValueError):
            raise SchemaError("losses must be a list of numbers") from None
        xmin = body.get("xmin")
        result = fit_power_law(values, xmin=float(xmin) if xmin is not None else None)
        boot = body.get("bootstrap")
        if boot is not None:
            if not isinstance(boot, dict) or "seed" not in boot:
                raise SchemaError("bootstrap must be an object with n_boot and seed")
            result = attach_p_value(
                values,
                result,
                n_boot=int(boot.get("n_boot", 1000)),
                seed=int(boot["seed"]),
            )
        return {
            "alpha": result.alpha,
            "xmin": result.xmin,
            "n_tail": result.n_tail,
            "ks_statistic": result.ks_statistic,
            "p_value": result.p_value,
        }

    @app.post("/v1/sentiment/aggregate")
    async def sentiment_aggregate(body: dict):
        scores = body.get("scores")
        posts = body.get("posts")
        if (scores is None) == (posts is None):
            raise SchemaError("provide exactly one of scores or posts")
        if scores is not None:
            if not isinstance(scores, list):
                raise SchemaError("scores must be a list of numbers")
            try:
                values = [float(v) for v in scores]
            except (TypeError, ValueError):
                raise SchemaError("scores must be a list of numbers") from None
        else:
            if not isinstance(posts, list) or not all(isinstance(p, str) for p in posts):
                raise SchemaError("posts must be a list of strings")
            values = [score_post(p) for p in posts]
        mean = aggregate(values)
        return {
            "count": len(values),
            "mean_compound": mean,
            "cost_multiplier": cost_multiplier(mean),
        }

    return app


app = create_app()
