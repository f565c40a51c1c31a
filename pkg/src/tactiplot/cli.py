"""Command-line interface.

Commands compose like a pipeline: diagnostics go to stderr, paths and
reports to stdout, and the exit code is 0 for success, 1 for guideline
findings, 2 for fatal errors (unparseable input, I/O, endpoint
failures).  A JSON config file under a ``config`` root can preset the
simplify/canvas/emit knobs; flags override it.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import click

from .client import ClientError, EndpointConfig, extract_metadata
from .datagen import GenConfig, GenerationError, gen_dataset
from .ingest import (
    SpecParseError,
    parse_spec,
    serialize_spec,
    spec_from_csv,
)
from .layout import CanvasConfig
from .model import ChartType, Encoding, TactiplotError
from .pipeline import (
    PipelineConfig,
    compile_scene,
    compile_visual_scene,
    inspect_summary,
)
from .simplify import SimplifyConfig
from .svg import EmitConfig, emit_svg
from .validate import DEFAULT_RULES, report_json, report_text, validate_svg
from .version import VERSION

_CHART_TYPES = [t.value for t in ChartType]
_ENCODINGS = [e.value for e in Encoding]


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _load_pipeline_config(path: str | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        _fail(f"config file {path}: {exc}")
    section = doc.get("config", {}) if isinstance(doc, dict) else {}
    if not isinstance(section, dict):
        _fail(f"config file {path}: 'config' must be an object")
    try:
        return PipelineConfig(
            simplify=SimplifyConfig(**section.get("simplify", {})),
            canvas=CanvasConfig(**section.get("canvas", {})),
            emit=EmitConfig(**section.get("emit", {})),
        )
    except (TypeError, ValueError) as exc:
        _fail(f"config file {path}: {exc}")


@click.group()
@click.version_option(version=VERSION, prog_name="tactiplot")
def main() -> None:
    """Compile chart specs into tactile-accessible SVG documents."""


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False),
              help="Tactile SVG path (default: source name with .svg).")
@click.option("--visual", "visual_out", type=click.Path(dir_okay=False),
              help="Also write the sighted sibling SVG here.")
@click.option("--check", is_flag=True,
              help="Lint the output; findings exit 1.")
@click.option("--type", "chart_type", type=click.Choice(_CHART_TYPES),
              help="Chart type (required for CSV input).")
@click.option("--x-encoding", type=click.Choice(_ENCODINGS), default="int",
              show_default=True, help="X value encoding for CSV input.")
@click.option("--y-encoding", type=click.Choice(_ENCODINGS), default="float",
              show_default=True, help="Y value encoding for CSV input.")
@click.option("--title", default="Chart", show_default=True,
              help="Chart title for CSV input.")
@click.option("--x-title", default="X", show_default=True)
@click.option("--y-title", default="Y", show_default=True)
@click.option("--legend-title", default=None)
@click.option("--smooth", type=click.IntRange(0, 3), default=None,
              help="Corner-cutting smoothing rounds for line charts.")
@click.option("-c", "--config", "config_path", type=click.Path(dir_okay=False),
              help="JSON config file with a 'config' root.")
def convert(source, output, visual_out, check, chart_type, x_encoding,
            y_encoding, title, x_title, y_title, legend_title, smooth,
            config_path) -> None:
    """Compile a spec (JSON) or data table (CSV) to a tactile SVG."""
    cfg = _load_pipeline_config(config_path)
    if smooth is not None:
        cfg = replace(cfg, simplify=replace(cfg.simplify, smoothing_iterations=smooth))
    src = Path(source)
    try:
        raw = src.read_bytes()
    except OSError as exc:
        _fail(f"cannot read {source}: {exc}")
    try:
        if src.suffix.lower() == ".csv" or chart_type is not None:
            if chart_type is None:
                _fail("CSV input needs --type")
            spec = spec_from_csv(
                raw, chart_type=ChartType(chart_type), title=title,
                x_title=x_title, y_title=y_title,
                x_encoding=Encoding(x_encoding), y_encoding=Encoding(y_encoding),
                legend_title=legend_title)
        else:
            spec = parse_spec(raw)
        scene = compile_scene(spec, cfg)
        svg_text = emit_svg(scene, cfg.emit)
        visual_text = None
        if visual_out:
            visual_scene = compile_visual_scene(spec, cfg)
            visual_text = emit_svg(visual_scene, replace(cfg.emit, variant="visual"))
    except SpecParseError as exc:
        _fail(f"kind={exc.kind} path={exc.path}: {exc.message}")
    except TactiplotError as exc:
        _fail(str(exc))
    out = Path(output) if output else src.with_suffix(".svg")
    try:
        out.write_text(svg_text, encoding="utf-8")
        if visual_text is not None:
            Path(visual_out).write_text(visual_text, encoding="utf-8")
    except OSError as exc:
        _fail(f"cannot write output: {exc}")
    click.echo(str(out))
    if visual_text is not None:
        click.echo(str(visual_out))
    if check:
        report = validate_svg(svg_text, DEFAULT_RULES)
        if not report.clean:
            click.echo(report_text(report), nl=False)
            sys.exit(1)


@main.command()
@click.argument("document", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
def validate(document, fmt) -> None:
    """Lint an SVG document against the tactile guidelines."""
    try:
        raw = Path(document).read_bytes()
    except OSError as exc:
        _fail(f"cannot read {document}: {exc}")
    report = validate_svg(raw, DEFAULT_RULES)
    click.echo(report_json(report) if fmt == "json" else report_text(report), nl=False)
    if report.fatal:
        sys.exit(2)
    if not report.clean:
        sys.exit(1)


@main.command("gen-dataset")
@click.option("-n", "--n-per-category", type=click.IntRange(min=1), required=True,
              help="Samples per chart category.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--categories", multiple=True, type=click.Choice(_CHART_TYPES),
              help="Chart categories to generate (default: all four).")
@click.option("-o", "--out", "out_dir", type=click.Path(file_okay=False),
              required=True)
def gen_dataset_cmd(n_per_category, seed, categories, out_dir) -> None:
    """Generate a seeded spec/tactile/visual corpus with a manifest."""
    kwargs = {"n_per_category": n_per_category, "seed": seed}
    if categories:
        kwargs["categories"] = tuple(ChartType(c) for c in categories)
    try:
        cfg = GenConfig(**kwargs)
        gen_dataset(cfg, out_dir)
    except (GenerationError, TactiplotError, ValueError, OSError) as exc:
        _fail(str(exc))
    click.echo(str(Path(out_dir) / "manifest.json"))


@main.command()
@click.argument("image", type=click.Path(exists=True, dir_okay=False))
@click.option("--endpoint", help="Extraction endpoint URL (live mode).")
@click.option("--fixtures", type=click.Path(file_okay=False),
              help="Recorded-response directory (fixture mode).")
@click.option("--timeout", type=float, default=30.0, show_default=True)
@click.option("--token-env", default="TACTIPLOT_TOKEN", show_default=True,
              help="Environment variable holding the bearer token.")
@click.option("-o", "--output", type=click.Path(dir_okay=False),
              help="Spec document path (default: image name with .spec.json).")
@click.option("--convert", "also_convert", is_flag=True,
              help="Chain into convert and write the tactile SVG too.")
@click.option("-c", "--config", "config_path", type=click.Path(dir_okay=False))
def extract(image, endpoint, fixtures, timeout, token_env, output,
            also_convert, config_path) -> None:
    """Extract a ChartSpec from a raster chart image via the endpoint."""
    img_path = Path(image)
    suffix = img_path.suffix.lower().lstrip(".") or "png"
    media_type = f"image/{'jpeg' if suffix == 'jpg' else suffix}"
    try:
        if fixtures:
            endpoint_cfg = EndpointConfig(mode="fixture", fixture_dir=fixtures)
        elif endpoint:
            endpoint_cfg = EndpointConfig(mode="live", base_url=endpoint,
                                          timeout_s=timeout,
                                          auth_token=os.environ.get(token_env))
        else:
            _fail("extract needs --endpoint or --fixtures")
        result = extract_metadata(img_path.read_bytes(), media_type, endpoint_cfg)
    except ClientError as exc:
        _fail(f"kind={exc.kind}: {exc}")
    except (OSError, ValueError) as exc:
        _fail(str(exc))
    out = Path(output) if output else img_path.with_suffix(".spec.json")
    out.write_text(serialize_spec(result.spec, indent=2), encoding="utf-8")
    click.echo(str(out))
    if also_convert:
        cfg = _load_pipeline_config(config_path)
        try:
            svg_text = emit_svg(compile_scene(result.spec, cfg), cfg.emit)
        except TactiplotError as exc:
            _fail(str(exc))
        svg_out = out.with_suffix("").with_suffix(".svg")
        svg_out.write_text(svg_text, encoding="utf-8")
        click.echo(str(svg_out))


@main.command()
@click.argument("spec_path", type=click.Path(exists=True, dir_okay=False))
@click.option("-c", "--config", "config_path", type=click.Path(dir_okay=False))
def inspect(spec_path, config_path) -> None:
    """Summarize what compilation would do with a spec."""
    cfg = _load_pipeline_config(config_path)
    try:
        spec = parse_spec(Path(spec_path).read_bytes())
        click.echo(inspect_summary(spec, cfg), nl=False)
    except SpecParseError as exc:
        _fail(f"kind={exc.kind} path={exc.path}: {exc.message}")
    except (TactiplotError, OSError) as exc:
        _fail(str(exc))


if __name__ == "__main__":
    main()
