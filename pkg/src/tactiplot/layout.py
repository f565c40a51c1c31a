"""Physical placement: from a simplified spec to a TactileScene.

Everything is positioned in millimetres on the configured canvas.  The
vertical stack, top to bottom: chart title, axis title for the value
axis (horizontal, since tactile text is never rotated), the plot
rectangle, x tick labels (one or two staggered rows), the x axis
title, and the legend row for multi-series charts.  Y tick labels sit
left of the plot, right-aligned against the tick marks.

Tick labels must fit or the layout fails; legend series names may be
truncated with a trailing dot-6 ellipsis cell (the full name survives
in the element description).
"""

from __future__ import annotations

from dataclasses import dataclass

from .braille import transcribe
from .ingest import serialize_spec
from .model import (
    BRAILLE_CELL_ADVANCE_MM,
    BRAILLE_LINE_HEIGHT_MM,
    AxisSpec,
    BrailleRunGeom,
    ChartSpec,
    ChartType,
    Encoding,
    MarkerGeom,
    Polyline,
    Rect,
    Role,
    SceneElement,
    Series,
    SourceRef,
    TactileScene,
    TactileStyle,
    TactiplotError,
    TickLabel,
    days_to_iso,
)
from .simplify import smooth_polyline

ELLIPSIS_CELL = "⠠"  # dot 6: marks a truncated braille run

FRAME_STYLE = TactileStyle(stroke_width_mm=2.0)
TICK_STYLE = TactileStyle(stroke_width_mm=1.5)
BOX_STYLE = TactileStyle(stroke_width_mm=1.0)
TEXT_STYLE = TactileStyle(stroke_width_mm=1.0)
WHISKER_STYLE = TactileStyle(stroke_width_mm=1.5)

_SWATCH_LEN = 20.0
_MIN_BAR_W = 4.0
_MIN_PLOT_SIDE = 40.0
_EDGE_GAP = 2.0  # labels may run into the margin but never off-canvas
_CAP_HALF = 2.0  # error-bar caps are 4 mm wide


class CanvasOverflow(TactiplotError):
    """Required braille text cannot fit the canvas at minimum spacing."""


class LabelCollision(TactiplotError):
    """Two label boxes would overlap after placement."""


@dataclass(frozen=True)
class CanvasConfig:
    width_mm: float = 297.0
    height_mm: float = 210.0
    margin_mm: float = 15.0
    min_gap_mm: float = 2.0
    tick_length_mm: float = 5.0
    bbox_padding_mm: float = 1.5

    def __post_init__(self):
        for name in ("width_mm", "height_mm", "margin_mm", "min_gap_mm",
                     "tick_length_mm", "bbox_padding_mm"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.width_mm <= 2 * self.margin_mm or self.height_mm <= 2 * self.margin_mm:
            raise ValueError("margins leave no plot area")

    @property
    def box_h(self) -> float:
        return BRAILLE_LINE_HEIGHT_MM + 2 * self.bbox_padding_mm


def _run_w(cells: str) -> float:
    return len(cells) * BRAILLE_CELL_ADVANCE_MM


def _box_w(cells: str, cfg: CanvasConfig) -> float:
    return _run_w(cells) + 2 * cfg.bbox_padding_mm


def _tick_position_value(tick: TickLabel, axis: AxisSpec) -> float:
    if axis.encoding is Encoding.TEXT:
        return float(axis.categories.index(tick.value))
    return float(tick.value)  # type: ignore[arg-type]


@dataclass(frozen=True)
class PlotGeometry:
    """The plot rectangle plus the data-space to mm mapping."""

    left: float
    top: float
    right: float
    bottom: float
    x_label_rows: int
    x_tick_pos: tuple[float, ...]
    y_tick_pos: tuple[float, ...]
    x_slots: int  # number of category slots; 0 for numeric axes
    x_span: tuple[float, float]
    y_span: tuple[float, float]

    def x_pos(self, v: float) -> float:
        if self.x_slots:
            slot = (self.right - self.left) / self.x_slots
            return self.left + (v + 0.5) * slot
        t0, t1 = self.x_span
        return self.left + (v - t0) / (t1 - t0) * (self.right - self.left)

    def y_pos(self, v: float) -> float:
        t0, t1 = self.y_span
        return self.bottom - (v - t0) / (t1 - t0) * (self.bottom - self.top)

    def to_mm(self, x: float, y: float) -> tuple[float, float]:
        return (self.x_pos(x), self.y_pos(y))


def plot_geometry(spec: ChartSpec, x_ticks: list[TickLabel], y_ticks: list[TickLabel],
                  cfg: CanvasConfig) -> PlotGeometry:
    """Compute the plot rectangle and tick positions for this chart.

    Pure function of its inputs; the decimation pass uses the mapping
    before the full scene is assembled.
    """
    w, h = cfg.width_mm, cfg.height_mm
    gap, pad = cfg.min_gap_mm, cfg.bbox_padding_mm
    box_h = cfg.box_h

    x_widths = [_box_w(t.braille_text, cfg) for t in x_ticks]
    y_widths = [_box_w(t.braille_text, cfg) for t in y_ticks]

    left = max(cfg.margin_mm + cfg.tick_length_mm + gap + max(y_widths),
               _EDGE_GAP + x_widths[0] / 2)
    right = min(w - cfg.margin_mm, w - _EDGE_GAP - x_widths[-1] / 2)
    top = cfg.margin_mm + 2 * (box_h + gap) + box_h / 2
    if right - left < _MIN_PLOT_SIDE:
        raise CanvasOverflow(
            f"plot width {right - left:.1f} mm is too small; axis labels need the room")

    categorical = spec.x_axis.encoding is Encoding.TEXT
    n_slots = len(spec.x_axis.domain) if categorical else 0
    xs0, xs1 = (0.0, 1.0)
    if not categorical:
        xs0 = float(x_ticks[0].value)  # type: ignore[arg-type]
        xs1 = float(x_ticks[-1].value)  # type: ignore[arg-type]

    def positions(lo: float, hi: float) -> tuple[float, ...]:
        if categorical:
            slot = (hi - lo) / n_slots
            return tuple(lo + (spec.x_axis.categories.index(t.value) + 0.5) * slot
                         for t in x_ticks)
        span = xs1 - xs0
        return tuple(lo + (float(t.value) - xs0) / span * (hi - lo) for t in x_ticks)

    x_pos = positions(left, right)

    def fits(stride: int) -> bool:
        seq = list(zip(x_pos, x_widths))
        return all(abs(b[0] - a[0]) >= (a[1] + b[1]) / 2 + gap
                   for a, b in zip(seq, seq[stride:]))

    if fits(1):
        rows = 1
    elif fits(2):
        rows = 2
    else:
        raise LabelCollision("x axis labels overlap even on two staggered rows")

    y_cursor = h - cfg.margin_mm
    if len(spec.series) > 1:
        y_cursor -= box_h + gap  # legend row
    y_cursor -= box_h + gap  # x axis title
    y_cursor -= rows * box_h + (rows - 1) * gap  # x tick labels
    bottom = y_cursor - gap - cfg.tick_length_mm
    if bottom - top < _MIN_PLOT_SIDE:
        raise CanvasOverflow(
            f"plot height {bottom - top:.1f} mm is too small on this canvas")

    ys0 = float(y_ticks[0].value)  # type: ignore[arg-type]
    ys1 = float(y_ticks[-1].value)  # type: ignore[arg-type]
    y_pos = tuple(bottom - (float(t.value) - ys0) / (ys1 - ys0) * (bottom - top)
                  for t in y_ticks)
    for a, b in zip(y_pos, y_pos[1:]):
        if abs(b - a) < box_h + gap:
            raise LabelCollision("y axis labels overlap at this plot height")

    return PlotGeometry(left=left, top=top, right=right, bottom=bottom,
                        x_label_rows=rows, x_tick_pos=x_pos, y_tick_pos=y_pos,
                        x_slots=n_slots, x_span=(xs0, xs1), y_span=(ys0, ys1))


def _desc_value(v: float, encoding: Encoding, axis: AxisSpec | None = None) -> str:
    """Human text for a data value in descriptions; always exact."""
    if encoding is Encoding.TEXT and axis is not None:
        return axis.categories[int(v)]
    if encoding is Encoding.DATETIME and v == int(v):
        return days_to_iso(v)
    if v == int(v) and abs(v) < 2 ** 53:
        return str(int(v))
    return repr(v)


class _SceneBuilder:
    def __init__(self, spec: ChartSpec, cfg: CanvasConfig, geo: PlotGeometry):
        self.spec = spec
        self.cfg = cfg
        self.geo = geo
        self.frame: list[SceneElement] = []
        self.ticks: list[SceneElement] = []
        self.data: list[SceneElement] = []
        self.boxes: list[SceneElement] = []
        self.runs: list[SceneElement] = []
        self.swatches: list[SceneElement] = []

    def add_run(self, x: float, y: float, cells: str, text: str, desc: str,
                classes: tuple[str, ...]) -> None:
        pad = self.cfg.bbox_padding_mm
        geom = BrailleRunGeom(x=x, y=y, cells=cells, text=text)
        x0, y0, x1, y1 = geom.bounds()
        box = Rect(x=x0 - pad, y=y0 - pad, width=x1 - x0 + 2 * pad, height=y1 - y0 + 2 * pad)
        self.boxes.append(SceneElement(
            role=Role.TEXT_BBOX, geometry=box, style=BOX_STYLE,
            description=f"Bounding box: {desc}", classes=classes + ("box",)))
        self.runs.append(SceneElement(
            role=Role.BRAILLE_TEXT, geometry=geom, style=TEXT_STYLE,
            description=desc, classes=classes))

    def centered_run(self, cx: float, top: float, text: str, desc: str,
                     classes: tuple[str, ...], what: str) -> None:
        cfg = self.cfg
        cells = transcribe(text).cells
        width = _box_w(cells, cfg)
        if width > cfg.width_mm - 2 * cfg.margin_mm:
            raise CanvasOverflow(
                f"{what} needs {width:.0f} mm of braille but only "
                f"{cfg.width_mm - 2 * cfg.margin_mm:.0f} mm fit this canvas")
        cx = min(max(cx, cfg.margin_mm + width / 2), cfg.width_mm - cfg.margin_mm - width / 2)
        self.add_run(cx - _run_w(cells) / 2, top + cfg.bbox_padding_mm, cells, text, desc, classes)


def layout_scene(spec: ChartSpec, x_ticks: list[TickLabel], y_ticks: list[TickLabel],
                 styles: list[TactileStyle], selected: dict[str, list[int]] | None,
                 cfg: CanvasConfig, smoothing_iterations: int = 0) -> TactileScene:
    """Place every tactile element of the chart on the canvas.

    ``selected`` maps scatter series names to the kept point indices;
    other chart types ignore it.  Raises :class:`CanvasOverflow` or
    :class:`LabelCollision` when the text cannot be placed.
    """
    geo = plot_geometry(spec, x_ticks, y_ticks, cfg)
    b = _SceneBuilder(spec, cfg, geo)
    gap, pad, box_h = cfg.min_gap_mm, cfg.bbox_padding_mm, cfg.box_h
    tick_len = cfg.tick_length_mm

    b.frame.append(SceneElement(
        role=Role.FRAME,
        geometry=Polyline(((geo.left, geo.top), (geo.left, geo.bottom), (geo.right, geo.bottom))),
        style=FRAME_STYLE,
        description=(f"Axes frame: {spec.x_axis.title} along the bottom, "
                     f"{spec.y_axis.title} up the left side"),
        classes=("frame",)))

    # Tick marks and their labels.
    labels_top = geo.bottom + tick_len + gap
    for i, (tick, pos) in enumerate(zip(x_ticks, geo.x_tick_pos)):
        b.ticks.append(SceneElement(
            role=Role.TICK, geometry=Polyline(((pos, geo.bottom), (pos, geo.bottom + tick_len))),
            style=TICK_STYLE, description=f"X axis tick at {tick.label_text}",
            classes=("axes", "xtick")))
        row_top = labels_top + (i % geo.x_label_rows) * (box_h + gap)
        b.add_run(pos - _run_w(tick.braille_text) / 2, row_top + pad,
                  tick.braille_text, tick.label_text,
                  f"X axis label: {tick.label_text}", ("labels", "xlabel"))
    for tick, pos in zip(y_ticks, geo.y_tick_pos):
        b.ticks.append(SceneElement(
            role=Role.TICK, geometry=Polyline(((geo.left - tick_len, pos), (geo.left, pos))),
            style=TICK_STYLE, description=f"Y axis tick at {tick.label_text}",
            classes=("axes", "ytick")))
        run_x = geo.left - tick_len - gap - pad - _run_w(tick.braille_text)
        b.add_run(run_x, pos - BRAILLE_LINE_HEIGHT_MM / 2,
                  tick.braille_text, tick.label_text,
                  f"Y axis label: {tick.label_text}", ("labels", "ylabel"))

    # Titles: chart title, value-axis title (horizontal, above the
    # axis), x-axis title under the tick labels.
    b.centered_run(cfg.width_mm / 2, cfg.margin_mm, spec.title,
                   f"Chart title: {spec.title}", ("labels", "title"), "the chart title")
    ytitle_cells = transcribe(spec.y_axis.title).cells
    if _box_w(ytitle_cells, cfg) > cfg.width_mm - 2 * cfg.margin_mm:
        raise CanvasOverflow(f"y axis title {spec.y_axis.title!r} does not fit the canvas")
    b.add_run(cfg.margin_mm + pad, cfg.margin_mm + box_h + gap + pad,
              ytitle_cells, spec.y_axis.title,
              f"Y axis title: {spec.y_axis.title}", ("labels", "ytitle"))
    xtitle_top = labels_top + geo.x_label_rows * box_h + (geo.x_label_rows - 1) * gap + gap
    b.centered_run((geo.left + geo.right) / 2, xtitle_top, spec.x_axis.title,
                   f"X axis title: {spec.x_axis.title}", ("labels", "xtitle"), "the x axis title")

    _layout_data(b, styles, selected, smoothing_iterations)
    if len(spec.series) > 1:
        _layout_legend(b, styles)

    elements = b.frame + b.ticks + b.data + b.boxes + b.runs + b.swatches
    return TactileScene(width_mm=cfg.width_mm, height_mm=cfg.height_mm,
                        elements=tuple(elements), title=spec.title,
                        spec_json=serialize_spec(spec, indent=None))


def _layout_data(b: _SceneBuilder, styles: list[TactileStyle],
                 selected: dict[str, list[int]] | None, smoothing: int) -> None:
    spec, geo = b.spec, b.geo
    x_enc, y_enc = spec.x_axis.encoding, spec.y_axis.encoding
    for k, (series, style) in enumerate(zip(spec.series, styles)):
        tag = ("data", f"series-{k}")
        if spec.chart_type is ChartType.LINE:
            _layout_line(b, k, series, style, tag, smoothing)
        elif spec.chart_type is ChartType.SCATTER:
            keep = selected.get(series.name, list(range(len(series.points)))) if selected \
                else list(range(len(series.points)))
            for idx in keep:
                x, y = series.points[idx]
                b.data.append(SceneElement(
                    role=Role.DATA_MARK,
                    geometry=MarkerGeom(*geo.to_mm(x, y), style.marker_diameter_mm),
                    style=style,
                    description=(f"Point ({_desc_value(x, x_enc, spec.x_axis)}, "
                                 f"{_desc_value(y, y_enc)}) of series {series.name}"),
                    source_ref=SourceRef(series.name, idx), classes=tag + ("mark",)))
        elif spec.chart_type is ChartType.BAR:
            _layout_bars(b, k, series, style, tag)
        else:
            _layout_errorbars(b, k, series, style, tag)


def _layout_line(b: _SceneBuilder, k: int, series: Series, style: TactileStyle,
                 tag: tuple[str, ...], smoothing: int) -> None:
    spec, geo = b.spec, b.geo
    pts = [geo.to_mm(x, y) for x, y in series.points]
    x_enc, y_enc = spec.x_axis.encoding, spec.y_axis.encoding
    first, last = series.points[0], series.points[-1]
    desc = (f"Line for series {series.name}: {len(pts)} points from "
            f"({_desc_value(first[0], x_enc, spec.x_axis)}, {_desc_value(first[1], y_enc)}) to "
            f"({_desc_value(last[0], x_enc, spec.x_axis)}, {_desc_value(last[1], y_enc)})")
    if len(pts) == 1:
        b.data.append(SceneElement(
            role=Role.DATA_MARK, geometry=MarkerGeom(pts[0][0], pts[0][1], 5.0),
            style=style, description=desc, source_ref=SourceRef(series.name, 0),
            classes=tag + ("mark",)))
        return
    if smoothing:
        pts = list(smooth_polyline(pts, smoothing))
    b.data.append(SceneElement(
        role=Role.DATA_PATH, geometry=Polyline(tuple(pts)), style=style,
        description=desc, source_ref=SourceRef(series.name), classes=tag + ("path",)))


def _layout_bars(b: _SceneBuilder, k: int, series: Series, style: TactileStyle,
                 tag: tuple[str, ...]) -> None:
    spec, geo, cfg = b.spec, b.geo, b.cfg
    n_series = len(spec.series)
    slot = (geo.right - geo.left) / geo.x_slots
    group_w = slot - 2 * cfg.min_gap_mm
    bar_w = (group_w - (n_series - 1) * cfg.min_gap_mm) / n_series
    if bar_w < _MIN_BAR_W:
        raise CanvasOverflow(
            f"{n_series} bar series across {geo.x_slots} categories leave "
            f"{bar_w:.1f} mm per bar; {_MIN_BAR_W} mm is the touch minimum")
    y_lo = spec.y_axis.numeric_domain[0]
    base = geo.y_pos(max(0.0, y_lo))
    for j, (x, y) in enumerate(series.points):
        centre = geo.x_pos(x)
        left = centre - group_w / 2 + k * (bar_w + cfg.min_gap_mm)
        top = min(base, geo.y_pos(y))
        b.data.append(SceneElement(
            role=Role.BAR,
            geometry=Rect(x=left, y=top, width=bar_w, height=abs(geo.y_pos(y) - base)),
            style=style,
            description=(f"Bar {spec.x_axis.categories[int(x)]}: "
                         f"{_desc_value(y, spec.y_axis.encoding)} for series {series.name}"),
            source_ref=SourceRef(series.name, j), classes=tag + ("bar",)))


def _layout_errorbars(b: _SceneBuilder, k: int, series: Series, style: TactileStyle,
                      tag: tuple[str, ...]) -> None:
    spec, geo = b.spec, b.geo
    x_enc, y_enc = spec.x_axis.encoding, spec.y_axis.encoding
    assert series.y_err is not None
    for j, ((x, y), err) in enumerate(zip(series.points, series.y_err)):
        cx, cy = geo.to_mm(x, y)
        at = _desc_value(x, x_enc, spec.x_axis)
        if err > 0:
            y_lo_mm, y_hi_mm = geo.y_pos(y - err), geo.y_pos(y + err)
            for geom, what in (
                    (Polyline(((cx, y_hi_mm), (cx, y_lo_mm))), "Spread"),
                    (Polyline(((cx - _CAP_HALF, y_hi_mm), (cx + _CAP_HALF, y_hi_mm))), "Upper cap"),
                    (Polyline(((cx - _CAP_HALF, y_lo_mm), (cx + _CAP_HALF, y_lo_mm))), "Lower cap")):
                b.data.append(SceneElement(
                    role=Role.WHISKER, geometry=geom, style=WHISKER_STYLE,
                    description=(f"{what} of error bar at {at}: "
                                 f"{_desc_value(y, y_enc)} plus or minus {_desc_value(err, y_enc)}"
                                 f" for series {series.name}"),
                    source_ref=SourceRef(series.name, j), classes=tag + ("whisker",)))
        b.data.append(SceneElement(
            role=Role.DATA_MARK, geometry=MarkerGeom(cx, cy, style.marker_diameter_mm),
            style=style,
            description=(f"Point ({at}, {_desc_value(y, y_enc)}) with error "
                         f"{_desc_value(err, y_enc)} of series {series.name}"),
            source_ref=SourceRef(series.name, j), classes=tag + ("mark",)))


def _layout_legend(b: _SceneBuilder, styles: list[TactileStyle]) -> None:
    spec, cfg = b.spec, b.cfg
    gap, pad, box_h = cfg.min_gap_mm, cfg.bbox_padding_mm, cfg.box_h
    row_top = cfg.height_mm - cfg.margin_mm - box_h
    avail = cfg.width_mm - 2 * cfg.margin_mm
    assert spec.legend_title is not None
    title_cells = transcribe(spec.legend_title).cells
    n = len(spec.series)
    fixed = _box_w(title_cells, cfg) + n * (2 * gap + _SWATCH_LEN + gap + 2 * pad)
    budget = int((avail - fixed) / BRAILLE_CELL_ADVANCE_MM / n)
    if budget < 2:
        raise CanvasOverflow("legend does not fit: series names have no room")

    shown: list[tuple[str, str]] = []  # (cells, shown text) per series
    for series in spec.series:
        cells = transcribe(series.name).cells
        if len(cells) <= budget:
            shown.append((cells, series.name))
            continue
        text = series.name
        while text and len(transcribe(text).cells) > budget - 1:
            text = text[:-1].rstrip()
        if not text:
            raise CanvasOverflow(f"series name {series.name!r} cannot fit the legend")
        shown.append((transcribe(text).cells + ELLIPSIS_CELL, text))

    total = fixed + sum(_run_w(c) for c, _ in shown)
    x = (cfg.width_mm - total) / 2
    b.add_run(x + pad, row_top + pad, title_cells, spec.legend_title,
              f"Legend title: {spec.legend_title}", ("legend", "legendtitle"))
    x += _box_w(title_cells, cfg)
    mid = row_top + box_h / 2
    for k, (series, style, (cells, text)) in enumerate(zip(spec.series, styles, shown)):
        x += 2 * gap
        geom = _swatch_geometry(spec.chart_type, style, x, mid)
        b.swatches.append(SceneElement(
            role=Role.LEGEND_ITEM, geometry=geom, style=style,
            description=f"Legend sample of the style for series {series.name}",
            source_ref=SourceRef(series.name), classes=("legend", "swatch", f"series-{k}")))
        x += _SWATCH_LEN + gap
        b.add_run(x + pad, row_top + pad, cells, text,
                  f"Legend label: {series.name}", ("legend", "legend-name"))
        x += _run_w(cells) + 2 * pad


def _swatch_geometry(chart_type: ChartType, style: TactileStyle, x: float, mid: float):
    if chart_type is ChartType.LINE:
        return Polyline(((x, mid), (x + _SWATCH_LEN, mid)))
    if chart_type is ChartType.BAR:
        return Rect(x=x, y=mid - 4.0, width=_SWATCH_LEN, height=8.0)
    return MarkerGeom(x + _SWATCH_LEN / 2, mid, style.marker_diameter_mm or 5.0)
