"""End-to-end compilation: ChartSpec -> scene -> SVG text.

Order of passes: choose axis labels, assign per-series styles, build
the plot mapping, decimate scatter points in physical space, lay out
the scene, emit.  The visual sibling runs the same layout with no
decimation and no smoothing, then renders with sighted styling.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .ingest import serialize_spec
from .layout import CanvasConfig, layout_scene, plot_geometry
from .model import ChartSpec, ChartType, Encoding, TactileScene, TickLabel
from .simplify import (
    SimplifyConfig,
    assign_styles,
    decimate_scatter,
    reduce_axis_labels,
)
from .svg import EmitConfig, emit_svg


@dataclass(frozen=True)
class PipelineConfig:
    simplify: SimplifyConfig = SimplifyConfig()
    canvas: CanvasConfig = CanvasConfig()
    emit: EmitConfig = EmitConfig()


DEFAULT_PIPELINE = PipelineConfig()


def _numeric_ticks(ticks: list[TickLabel], spec: ChartSpec) -> list[TickLabel]:
    """Tick labels with category names swapped for slot indices."""
    if spec.x_axis.encoding is not Encoding.TEXT:
        return ticks
    return [TickLabel(value=float(spec.x_axis.categories.index(t.value)),
                      label_text=t.label_text, braille_text=t.braille_text)
            for t in ticks]


def choose_ticks(spec: ChartSpec) -> tuple[list[TickLabel], list[TickLabel]]:
    return (reduce_axis_labels(spec.x_axis.domain, spec.x_axis.encoding),
            reduce_axis_labels(spec.y_axis.domain, spec.y_axis.encoding))


def select_points(spec: ChartSpec, x_ticks: list[TickLabel],
                  y_ticks: list[TickLabel],
                  cfg: PipelineConfig) -> dict[str, list[int]] | None:
    """Scatter decimation per series; None for other chart types."""
    if spec.chart_type is not ChartType.SCATTER:
        return None
    geo = plot_geometry(spec, x_ticks, y_ticks, cfg.canvas)
    styles = assign_styles(len(spec.series), spec.chart_type, cfg.simplify)
    interval_ticks = _numeric_ticks(x_ticks, spec)
    selected = {}
    for series, style in zip(spec.series, styles):
        # the touched footprint includes the stroke on both sides
        effective = style.marker_diameter_mm + style.stroke_width_mm
        selected[series.name] = decimate_scatter(
            series.points, interval_ticks, cfg.simplify, effective, geo.to_mm)
    return selected


def compile_scene(spec: ChartSpec, cfg: PipelineConfig = DEFAULT_PIPELINE) -> TactileScene:
    """Lower a spec to a fully placed tactile scene."""
    x_ticks, y_ticks = choose_ticks(spec)
    styles = assign_styles(len(spec.series), spec.chart_type, cfg.simplify)
    selected = select_points(spec, x_ticks, y_ticks, cfg)
    return layout_scene(spec, x_ticks, y_ticks, styles, selected, cfg.canvas,
                        smoothing_iterations=cfg.simplify.smoothing_iterations)


def compile_visual_scene(spec: ChartSpec, cfg: PipelineConfig = DEFAULT_PIPELINE) -> TactileScene:
    """Same layout with every point kept and no smoothing."""
    x_ticks, y_ticks = choose_ticks(spec)
    styles = assign_styles(len(spec.series), spec.chart_type, cfg.simplify)
    return layout_scene(spec, x_ticks, y_ticks, styles, None, cfg.canvas,
                        smoothing_iterations=0)


def convert_spec(spec: ChartSpec, cfg: PipelineConfig = DEFAULT_PIPELINE) -> str:
    """Spec to tactile SVG text in one call."""
    return emit_svg(compile_scene(spec, cfg), cfg.emit)


def emit_dataset_pair(spec: ChartSpec,
                      cfg: PipelineConfig = DEFAULT_PIPELINE) -> tuple[str, str, str]:
    """(tactile SVG, visual SVG, canonical spec document) for one chart."""
    tactile = emit_svg(compile_scene(spec, cfg), replace(cfg.emit, variant="tactile"))
    visual = emit_svg(compile_visual_scene(spec, cfg), replace(cfg.emit, variant="visual"))
    return tactile, visual, serialize_spec(spec, indent=2)


def _style_words(style) -> str:
    parts = []
    if style.dash_pattern:
        dashes = ", ".join(f"{on:g} on {off:g} off" for on, off in style.dash_pattern)
        parts.append(f"dashed ({dashes})")
    else:
        parts.append("solid")
    parts.append(f"{style.stroke_width_mm:g} mm stroke")
    if style.marker is not None:
        parts.append(f"{style.marker.value} marker {style.marker_diameter_mm:g} mm")
    if style.hatch is not None:
        parts.append(f"{style.hatch.value} fill")
    return ", ".join(parts)


def inspect_summary(spec: ChartSpec, cfg: PipelineConfig = DEFAULT_PIPELINE) -> str:
    """Human-readable report of what compilation would do."""
    x_ticks, y_ticks = choose_ticks(spec)
    styles = assign_styles(len(spec.series), spec.chart_type, cfg.simplify)
    selected = select_points(spec, x_ticks, y_ticks, cfg)
    lines = [
        f"chart: {spec.chart_type.value}  title: {spec.title}",
        f"x axis: {spec.x_axis.title} ({spec.x_axis.encoding.value})",
        f"  labels: {', '.join(t.label_text for t in x_ticks)}",
        f"y axis: {spec.y_axis.title} ({spec.y_axis.encoding.value})",
        f"  labels: {', '.join(t.label_text for t in y_ticks)}",
    ]
    for series, style in zip(spec.series, styles):
        n = len(series.points)
        kept = len(selected[series.name]) if selected else n
        shown = f"{kept} of {n} points" if kept != n else f"{n} points"
        lines.append(f"series {series.name}: {shown}; style: {_style_words(style)}")
    if cfg.simplify.smoothing_iterations:
        lines.append(f"smoothing: {cfg.simplify.smoothing_iterations} corner-cutting rounds")
    return "\n".join(lines) + "\n"
