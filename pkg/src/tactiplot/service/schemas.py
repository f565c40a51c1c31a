"""Request and response bodies for the HTTP service."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field


class ConvertRequest(BaseModel):
    spec: dict[str, Any]
    variant: Literal["tactile", "visual"] = "tactile"
    check: bool = Field(default=False, description="Lint the tactile output.")
    smoothing_iterations: int = Field(default=0, ge=0, le=3)


class FindingBody(BaseModel):
    rule_id: str
    severity: str
    locus: str
    message: str


class ConvertResponse(BaseModel):
    svg: str
    findings: list[FindingBody] | None = None


class ValidateRequest(BaseModel):
    svg: str


class ValidateResponse(BaseModel):
    clean: bool
    fatal: bool
    findings: list[FindingBody]


class ExtractRequest(BaseModel):
    image_b64: str
    media_type: str = "image/png"


class ExtractResponse(BaseModel):
    spec: dict[str, Any]
    prompt_version: str


class RuleBody(BaseModel):
    rule_id: str
    severity: str
    explanation: str


class HealthBody(BaseModel):
    status: str
    version: str
