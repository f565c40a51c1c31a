"""Client for an external chart-extraction endpoint.

The endpoint receives a raster chart image plus a fixed instruction
prompt and answers with a spec document; everything it returns is
validated through the normal parser before anything reaches a caller.
Fixture mode replays recorded responses keyed by the image's SHA-256,
which keeps every test and offline run byte-deterministic.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import httpx

from .ingest import SpecParseError, parse_spec
from .model import ChartSpec, TactiplotError
from .version import VERSION

# Versioned so recorded fixtures stay attributable to the exact
# instruction the endpoint saw.
PROMPT_VERSION = "1"
EXTRACTION_PROMPT = (
    "Analyze the attached x-y chart image and answer with a single JSON "
    "document and nothing else. Schema: {chart_type: line|bar|scatter|"
    "error_bar, title, x_axis: {title, encoding: int|float|fraction|"
    "datetime|text, domain}, y_axis: same, series: [{name, points: "
    "[[x, y], ...], y_err?}], legend_title?}. Numeric domains are "
    "[lo, hi]; text domains list the category names; datetime values "
    "are ISO dates. Report only data readable from the image."
    f" (instruction revision {PROMPT_VERSION})"
)


class ClientError(TactiplotError):
    """Extraction failure; ``kind`` states which stage failed.

    ``raw_response`` carries the verbatim endpoint body when one was
    received, so a parse failure can be diagnosed offline.
    """

    def __init__(self, kind: str, message: str, raw_response: str | None = None):
        super().__init__(message)
        self.kind = kind
        self.raw_response = raw_response


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str = ""
    timeout_s: float = 30.0
    auth_token: str | None = None
    mode: str = "live"
    fixture_dir: str | Path | None = None

    def __post_init__(self):
        if self.mode not in ("live", "fixture"):
            raise ValueError(f"mode must be 'live' or 'fixture', not {self.mode!r}")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be positive")
        if self.mode == "live" and not self.base_url:
            raise ValueError("live mode needs a base_url")
        if self.mode == "fixture":
            if self.fixture_dir is None:
                raise ValueError("fixture mode needs a fixture_dir")
            if not Path(self.fixture_dir).is_dir():
                raise ValueError(f"fixture_dir {self.fixture_dir!r} is not a directory")


@dataclass(frozen=True)
class ExtractionResult:
    spec: ChartSpec
    raw_response: str
    prompt_version: str = PROMPT_VERSION


def image_digest(image: bytes) -> str:
    return hashlib.sha256(image).hexdigest()


def record_fixture(fixture_dir: str | Path, image: bytes, media_type: str,
                   response_body: str) -> str:
    """Store a response under the image hash; returns the digest.

    The sibling ``.meta.json`` records how the response was obtained.
    """
    digest = image_digest(image)
    root = Path(fixture_dir)
    (root / f"{digest}.response.json").write_text(response_body, encoding="utf-8")
    meta = {"sha256": digest, "media_type": media_type,
            "prompt_version": PROMPT_VERSION, "generator": f"tactiplot/{VERSION}"}
    (root / f"{digest}.meta.json").write_text(
        json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return digest


def _fetch_fixture(image: bytes, cfg: EndpointConfig) -> str:
    digest = image_digest(image)
    path = Path(cfg.fixture_dir) / f"{digest}.response.json"
    if not path.is_file():
        raise ClientError("fixture-missing",
                          f"no recorded response for image sha256 {digest}")
    return path.read_text(encoding="utf-8")


def _fetch_live(image: bytes, media_type: str, cfg: EndpointConfig,
                transport: httpx.BaseTransport | None) -> str:
    headers = {}
    if cfg.auth_token:
        headers["Authorization"] = f"Bearer {cfg.auth_token}"
    files = {"image": ("chart", image, media_type),
             "prompt": (None, EXTRACTION_PROMPT)}
    try:
        with httpx.Client(timeout=cfg.timeout_s, transport=transport) as http:
            response = http.post(cfg.base_url, files=files, headers=headers)
    except httpx.TimeoutException as exc:
        raise ClientError("timeout", f"endpoint timed out after {cfg.timeout_s}s: {exc}")
    except httpx.HTTPError as exc:
        raise ClientError("transport", f"endpoint unreachable: {exc}")
    if response.status_code != 200:
        raise ClientError("status",
                          f"endpoint answered HTTP {response.status_code}",
                          raw_response=response.text)
    return response.text


def extract_metadata(image: bytes, media_type: str, cfg: EndpointConfig,
                     transport: httpx.BaseTransport | None = None) -> ExtractionResult:
    """Map a chart image to a validated ChartSpec.

    ``transport`` is a testing hook passed through to the HTTP client;
    fixture mode never touches the network.
    """
    if not image:
        raise ClientError("transport", "image is empty")
    if cfg.mode == "fixture":
        body = _fetch_fixture(image, cfg)
    else:
        body = _fetch_live(image, media_type, cfg, transport)
    try:
        spec = parse_spec(body.encode("utf-8"))
    except SpecParseError as exc:
        raise ClientError("parse", f"endpoint response is not a valid spec: {exc}",
                          raw_response=body)
    return ExtractionResult(spec=spec, raw_response=body)
