"""Lowering passes from a faithful chart spec to a touch-presentable one.

* axis-label reduction to 3 or 4 ticks on nice steps,
* encoding-aware label formatting,
* scatter decimation with overlap separation,
* per-series tactile style allocation,
* optional corner-cutting polyline smoothing.

All passes are pure: identical inputs and configuration give identical
outputs, which the dataset generator relies on for byte determinism.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .braille import transcribe
from .model import (
    ChartType,
    Encoding,
    Hatch,
    Marker,
    TactileStyle,
    TactiplotError,
    TickLabel,
    days_to_iso,
)


class DegenerateDomain(TactiplotError):
    """A numeric axis domain with zero extent cannot be labeled."""


class PaletteExhausted(TactiplotError):
    """More series were requested than the palette can distinguish."""


DEFAULT_PALETTES: dict[ChartType, tuple[TactileStyle, ...]] = {
    # Lines vary dash pattern first, then width; every gap stays >= 2 mm.
    ChartType.LINE: (
        TactileStyle(stroke_width_mm=1.5),
        TactileStyle(stroke_width_mm=1.5, dash_pattern=((4.0, 3.0),)),
        TactileStyle(stroke_width_mm=1.5, dash_pattern=((1.5, 3.0),)),
        TactileStyle(stroke_width_mm=1.5, dash_pattern=((4.0, 3.0), (1.5, 3.0))),
        TactileStyle(stroke_width_mm=2.5),
        TactileStyle(stroke_width_mm=2.5, dash_pattern=((7.0, 3.0),)),
    ),
    ChartType.SCATTER: tuple(
        TactileStyle(stroke_width_mm=1.5, marker=m, marker_diameter_mm=5.0)
        for m in (Marker.CIRCLE, Marker.SQUARE, Marker.TRIANGLE,
                  Marker.CROSS, Marker.DIAMOND, Marker.PLUS)
    ),
    ChartType.BAR: tuple(
        TactileStyle(stroke_width_mm=1.5, hatch=h)
        for h in (Hatch.SOLID, Hatch.DIAGONAL, Hatch.HORIZONTAL,
                  Hatch.DOTS, Hatch.VERTICAL, Hatch.CROSSHATCH)
    ),
    # Error bars pair a fillable marker shape with a hatch so both the
    # outline and the fill texture separate the series.
    ChartType.ERROR_BAR: tuple(
        TactileStyle(stroke_width_mm=1.5, marker=m, marker_diameter_mm=5.0, hatch=h)
        for m, h in ((Marker.CIRCLE, Hatch.SOLID), (Marker.SQUARE, Hatch.DIAGONAL),
                     (Marker.TRIANGLE, Hatch.HORIZONTAL), (Marker.DIAMOND, Hatch.DOTS),
                     (Marker.CIRCLE, Hatch.VERTICAL), (Marker.SQUARE, Hatch.CROSSHATCH))
    ),
}


@dataclass(frozen=True)
class SimplifyConfig:
    """Tunables for the lowering passes.

    ``smoothing_iterations`` 0 disables smoothing (the default: the
    corner-cutting pass is opt-in); 1..3 apply that many rounds.
    """

    points_per_label_unit: int = 10
    min_mark_gap_mm: float = 2.0
    palettes: dict[ChartType, tuple[TactileStyle, ...]] | None = None
    smoothing_iterations: int = 0

    def __post_init__(self):
        if self.points_per_label_unit < 1:
            raise ValueError("points_per_label_unit must be >= 1")
        if self.min_mark_gap_mm <= 0:
            raise ValueError("min_mark_gap_mm must be positive")
        if not 0 <= self.smoothing_iterations <= 3:
            raise ValueError("smoothing_iterations must be in 0..3")
        for chart_type, palette in (self.palettes or {}).items():
            if len(set(palette)) != len(palette):
                raise ValueError(f"palette for {chart_type.value} has duplicate styles")

    def palette_for(self, chart_type: ChartType) -> tuple[TactileStyle, ...]:
        if self.palettes and chart_type in self.palettes:
            return self.palettes[chart_type]
        return DEFAULT_PALETTES[chart_type]


_MANTISSAS = (Fraction(1), Fraction(2), Fraction(5, 2), Fraction(5))


def _step_allowed(step: Fraction, encoding: Encoding) -> bool:
    # Integer-labeled axes only take integral steps; float labels are
    # capped at two fraction digits; fraction labels need q <= 16.
    if encoding in (Encoding.INT, Encoding.DATETIME):
        return step.denominator == 1
    if encoding is Encoding.FLOAT:
        return (step * 100).denominator == 1
    if encoding is Encoding.FRACTION:
        return step.denominator <= 16
    return True


def format_label(value: float | str, encoding: Encoding) -> str:
    """Render one tick value as label text for its encoding."""
    if encoding is Encoding.TEXT:
        if not isinstance(value, str):
            raise ValueError("text encoding labels category names")
        return value
    if isinstance(value, str):
        raise ValueError(f"{encoding.value} encoding labels numbers")
    if value == 0:
        value = 0.0  # normalize -0.0
    if encoding is Encoding.INT:
        if value != int(value):
            raise ValueError(f"int encoding needs integral values, got {value}")
        return str(int(value))
    if encoding is Encoding.DATETIME:
        return days_to_iso(value)
    if encoding is Encoding.FRACTION:
        frac = Fraction(value).limit_denominator(16)
        if abs(float(frac) - value) <= 1e-9:
            sign = "-" if frac < 0 else ""
            whole, rem = divmod(abs(frac), 1)
            if rem == 0:
                return f"{sign}{whole}"
            if whole == 0:
                return f"{sign}{rem.numerator}/{rem.denominator}"
            return f"{sign}{whole} {rem.numerator}/{rem.denominator}"
        warnings.warn(f"no fraction with denominator <= 16 matches {value}; "
                      "falling back to decimal formatting")
    # FLOAT (and the fraction fallback): shortest decimal, at most two
    # fraction digits, that round-trips; shortest repr otherwise.
    for digits in (0, 1, 2):
        text = f"{value:.{digits}f}"
        if float(text) == value:
            return text
    return repr(value)


def _make_tick(value: float | str, encoding: Encoding) -> TickLabel:
    text = format_label(value, encoding)
    return TickLabel(value=value, label_text=text, braille_text=transcribe(text).cells)


def reduce_axis_labels(domain: tuple[float, float] | Sequence[str],
                       encoding: Encoding) -> list[TickLabel]:
    """Choose 3 or 4 axis labels whose span contains the domain.

    Numeric: ticks are ``first + k*step`` for a nice step (mantissa 1,
    2, 2.5, or 5 times a power of ten) with ``first`` aligned at a step
    multiple at or below the domain; among valid choices the one with
    the least span overshoot wins, ties broken toward 4 ticks, then the
    smaller mantissa.  Categories: up to 4 pass through; larger sets
    keep 4 evenly spaced ones including the first and last.
    """
    if encoding is Encoding.TEXT:
        cats = list(domain)
        if not all(isinstance(c, str) for c in cats):
            raise ValueError("text axes are labeled by category names")
        if len(cats) <= 4:
            return [_make_tick(c, encoding) for c in cats]
        picked = sorted({int(i * (len(cats) - 1) / 3 + 0.5) for i in range(4)})
        return [_make_tick(cats[i], encoding) for i in picked]

    lo_f, hi_f = float(domain[0]), float(domain[1])
    if not (math.isfinite(lo_f) and math.isfinite(hi_f)) or lo_f >= hi_f:
        raise DegenerateDomain(f"cannot label domain [{lo_f}, {hi_f}]")
    lo, hi = Fraction(lo_f), Fraction(hi_f)
    span = hi - lo
    e0 = math.floor(math.log10(float(span)))
    best: tuple | None = None
    for exponent in range(e0 - 3, max(e0 + 2, 1) + 1):
        scale = Fraction(10) ** exponent
        for mantissa in _MANTISSAS:
            step = mantissa * scale
            if not _step_allowed(step, encoding):
                continue
            first = (lo // step) * step
            for count in (3, 4):
                last = first + (count - 1) * step
                if last < hi:
                    continue
                overshoot = (lo - first) + (last - hi)
                key = (overshoot, count != 4, mantissa, exponent)
                if best is None or key < best[0]:
                    best = (key, first, step, count)
    if best is None:  # unreachable for finite non-degenerate domains
        raise DegenerateDomain(f"no nice step covers [{lo_f}, {hi_f}]")
    _, first, step, count = best
    return [_make_tick(float(first + k * step), encoding) for k in range(count)]


def decimate_scatter(points: Sequence[tuple[float, float]],
                     x_ticks: Sequence[TickLabel],
                     cfg: SimplifyConfig,
                     marker_diameter_mm: float,
                     transform: Callable[[float, float], tuple[float, float]]) -> list[int]:
    """Pick a touch-readable subset of scatter points.

    Each interval between adjacent x labels is split into
    ``points_per_label_unit`` equal bins; the point nearest each bin
    centre is the candidate (ties to the lower index), and candidates
    closer than ``marker_diameter_mm + min_mark_gap_mm`` in physical
    space to an already-accepted one are dropped.  Points are only ever
    dropped, never moved or invented.  Returns ascending indices.
    """
    if len(x_ticks) < 2:
        raise ValueError("decimation needs at least 2 x labels")
    ticks = [t.value for t in x_ticks]
    if not all(isinstance(v, (int, float)) for v in ticks):
        raise TypeError("decimation needs numeric tick values")
    ppl = cfg.points_per_label_unit
    min_dist = marker_diameter_mm + cfg.min_mark_gap_mm - 1e-9

    by_bin: dict[tuple[int, int], list[int]] = {}
    for idx, (x, _) in enumerate(points):
        iv = len(ticks) - 2
        for j in range(len(ticks) - 1):
            if x < ticks[j + 1]:
                iv = j
                break
        width = (ticks[iv + 1] - ticks[iv]) / ppl
        b = min(int((x - ticks[iv]) / width), ppl - 1) if width > 0 else 0
        by_bin.setdefault((iv, max(b, 0)), []).append(idx)

    accepted: list[int] = []
    accepted_mm: list[tuple[float, float]] = []
    for iv in range(len(ticks) - 1):
        for b in range(ppl):
            members = by_bin.get((iv, b))
            if not members:
                continue
            centre = ticks[iv] + (b + 0.5) * (ticks[iv + 1] - ticks[iv]) / ppl
            cand = min(members, key=lambda i: (abs(points[i][0] - centre), i))
            mm = transform(*points[cand])
            if all(math.dist(mm, other) >= min_dist for other in accepted_mm):
                accepted.append(cand)
                accepted_mm.append(mm)
    return sorted(accepted)


def assign_styles(n_series: int, chart_type: ChartType,
                  cfg: SimplifyConfig) -> list[TactileStyle]:
    """First ``n_series`` entries of the chart type's palette."""
    if n_series < 1:
        raise ValueError("n_series must be >= 1")
    palette = cfg.palette_for(chart_type)
    if n_series > len(palette):
        raise PaletteExhausted(
            f"{n_series} series requested but only {len(palette)} "
            f"touch-distinguishable {chart_type.value} styles exist")
    return list(palette[:n_series])


def smooth_polyline(points: Iterable[tuple[float, float]],
                    iterations: int) -> tuple[tuple[float, float], ...]:
    """Corner-cutting subdivision; endpoints are preserved exactly.

    Each round replaces every segment with its 1/4 and 3/4 points,
    then restores the two endpoints, growing n vertices to 2(n-1).
    Polylines with fewer than 3 vertices pass through unchanged.
    """
    if not 1 <= iterations <= 3:
        raise ValueError("iterations must be in 1..3")
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 3:
        return tuple(pts)
    for _ in range(iterations):
        out: list[tuple[float, float]] = []
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            out.append((0.75 * x0 + 0.25 * x1, 0.75 * y0 + 0.25 * y1))
            out.append((0.25 * x0 + 0.75 * x1, 0.25 * y0 + 0.75 * y1))
        out[0] = pts[0]
        out[-1] = pts[-1]
        pts = out
    return tuple(pts)
