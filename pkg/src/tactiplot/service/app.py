"""FastAPI application: a thin adapter over the core package.

Endpoint configuration for /extract comes from the environment:
``TACTIPLOT_FIXTURES`` selects fixture mode, otherwise
``TACTIPLOT_ENDPOINT`` (+ optional ``TACTIPLOT_TOKEN``) selects live
mode; with neither set the route answers 503.
"""

from __future__ import annotations

import base64
import binascii
import os
from dataclasses import replace

from fastapi import FastAPI, HTTPException

from ..client import ClientError, EndpointConfig, extract_metadata
from ..ingest import SpecParseError, spec_from_document, spec_to_document
from ..model import TactiplotError, ValidationReport
from ..pipeline import PipelineConfig, compile_scene, compile_visual_scene
from ..svg import emit_svg
from ..validate import DEFAULT_RULES, explain_rule, validate_svg
from ..version import VERSION
from .schemas import (
    ConvertRequest,
    ConvertResponse,
    ExtractRequest,
    ExtractResponse,
    FindingBody,
    HealthBody,
    RuleBody,
    ValidateRequest,
    ValidateResponse,
)


def _findings(report: ValidationReport) -> list[FindingBody]:
    return [FindingBody(rule_id=f.rule_id, severity=f.severity.value,
                        locus=f.locus, message=f.message)
            for f in report.findings]


def _endpoint_from_env() -> EndpointConfig | None:
    fixtures = os.environ.get("TACTIPLOT_FIXTURES")
    if fixtures:
        return EndpointConfig(mode="fixture", fixture_dir=fixtures)
    url = os.environ.get("TACTIPLOT_ENDPOINT")
    if url:
        return EndpointConfig(mode="live", base_url=url,
                              auth_token=os.environ.get("TACTIPLOT_TOKEN"))
    return None


def create_app() -> FastAPI:
    app = FastAPI(title="tactiplot", version=VERSION,
                  description="Chart specs to tactile-accessible SVG.")

    @app.post("/convert", response_model=ConvertResponse)
    def convert(request: ConvertRequest) -> ConvertResponse:
        cfg = PipelineConfig()
        if request.smoothing_iterations:
            cfg = replace(cfg, simplify=replace(
                cfg.simplify, smoothing_iterations=request.smoothing_iterations))
        try:
            spec = spec_from_document(request.spec)
            if request.variant == "visual":
                scene = compile_visual_scene(spec, cfg)
                emit_cfg = replace(cfg.emit, variant="visual")
            else:
                scene = compile_scene(spec, cfg)
                emit_cfg = cfg.emit
            svg_text = emit_svg(scene, emit_cfg)
        except SpecParseError as exc:
            raise HTTPException(status_code=422, detail={
                "kind": exc.kind, "path": exc.path, "message": exc.message})
        except TactiplotError as exc:
            raise HTTPException(status_code=422, detail={
                "kind": "pipeline", "path": "", "message": str(exc)})
        findings = None
        if request.check and request.variant == "tactile":
            findings = _findings(validate_svg(svg_text, DEFAULT_RULES))
        return ConvertResponse(svg=svg_text, findings=findings)

    @app.post("/validate", response_model=ValidateResponse)
    def validate(request: ValidateRequest) -> ValidateResponse:
        report = validate_svg(request.svg, DEFAULT_RULES)
        return ValidateResponse(clean=report.clean, fatal=report.fatal,
                                findings=_findings(report))

    @app.post("/extract", response_model=ExtractResponse)
    def extract(request: ExtractRequest) -> ExtractResponse:
        cfg = _endpoint_from_env()
        if cfg is None:
            raise HTTPException(status_code=503, detail=(
                "no extraction endpoint configured; set TACTIPLOT_FIXTURES "
                "or TACTIPLOT_ENDPOINT"))
        try:
            image = base64.b64decode(request.image_b64, validate=True)
        except (binascii.Error, ValueError):
            raise HTTPException(status_code=400, detail="image_b64 is not valid base64")
        try:
            result = extract_metadata(image, request.media_type, cfg)
        except ClientError as exc:
            status = 422 if exc.kind in ("parse", "fixture-missing") else 502
            raise HTTPException(status_code=status, detail={
                "kind": exc.kind, "message": str(exc),
                "raw_response": exc.raw_response})
        return ExtractResponse(spec=spec_to_document(result.spec),
                               prompt_version=result.prompt_version)

    @app.get("/rules", response_model=list[RuleBody])
    def rules() -> list[RuleBody]:
        return [RuleBody(rule_id=r.rule_id, severity=r.severity.value,
                         explanation=explain_rule(r.rule_id))
                for r in DEFAULT_RULES.rules]

    @app.get("/rules/{rule_id}", response_model=RuleBody)
    def rule(rule_id: str) -> RuleBody:
        entry = DEFAULT_RULES.rule(rule_id)
        try:
            explanation = explain_rule(rule_id)
        except TactiplotError:
            raise HTTPException(status_code=404, detail=f"unknown rule {rule_id!r}")
        severity = entry.severity.value if entry else "warning"
        return RuleBody(rule_id=rule_id, severity=severity, explanation=explanation)

    @app.get("/healthz", response_model=HealthBody)
    def healthz() -> HealthBody:
        return HealthBody(status="ok", version=VERSION)

    return app
