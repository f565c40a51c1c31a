"""Domain model for tactile chart compilation.

Every type here is an immutable dataclass validated on construction, so
the rest of the pipeline can assume any instance it holds is internally
consistent.  Validation failures raise :class:`SpecError` (for chart
specifications) or :class:`SceneError` (for laid-out scenes) with a
stable machine-readable ``code``.

Coordinates and sizes are always millimetres.  The scene coordinate
system has its origin at the top-left corner of the canvas with y
growing downwards, matching SVG user space.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from datetime import date

# Physical braille cell geometry (Marburg Medium sizing).  These live
# here rather than in the transcription module because scene geometry
# needs them to compute text extents.
BRAILLE_CELL_ADVANCE_MM = 6.0
BRAILLE_LINE_HEIGHT_MM = 10.0
BRAILLE_DOT_DIAMETER_MM = 1.5

#: Hard cap on series per chart: the default style palettes carry six
#: touch-distinguishable entries and we refuse to go past them.
MAX_SERIES = 6

_EPS = 1e-6


class TactiplotError(Exception):
    """Base class for every error raised by this package."""


class SpecError(TactiplotError):
    """A chart specification violates a model invariant."""

    def __init__(self, code: str, path: str, message: str):
        super().__init__(f"{path}: {message} [{code}]")
        self.code = code
        self.path = path
        self.message = message

    def at(self, prefix: str) -> SpecError:
        """Return a copy of this error re-rooted under ``prefix``."""
        path = f"{prefix}.{self.path}" if self.path else prefix
        return SpecError(self.code, path, self.message)


class SceneError(TactiplotError):
    """A laid-out scene violates a tactile invariant."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{message} [{code}]")
        self.code = code
        self.message = message


class ChartType(str, enum.Enum):
    LINE = "line"
    BAR = "bar"
    SCATTER = "scatter"
    ERROR_BAR = "error_bar"


# Date-encoded axis values are days since the Unix epoch; the pair of
# helpers below is the single source of that convention.
_EPOCH_ORDINAL = date(1970, 1, 1).toordinal()


def iso_to_days(text: str) -> float:
    """Parse a ``YYYY-MM-DD`` date into days since 1970-01-01."""
    return float(date.fromisoformat(text).toordinal() - _EPOCH_ORDINAL)


def days_to_iso(days: float) -> str:
    """Format integral days since 1970-01-01 as ``YYYY-MM-DD``."""
    if days != int(days):
        raise ValueError(f"date values must be whole days, got {days}")
    return date.fromordinal(int(days) + _EPOCH_ORDINAL).isoformat()


class Encoding(str, enum.Enum):
    """How values on one axis are rendered into label text."""

    INT = "int"
    FLOAT = "float"
    FRACTION = "fraction"
    DATETIME = "datetime"
    TEXT = "text"


class Marker(str, enum.Enum):
    CIRCLE = "circle"
    SQUARE = "square"
    TRIANGLE = "triangle"
    CROSS = "cross"
    DIAMOND = "diamond"
    PLUS = "plus"


class Hatch(str, enum.Enum):
    SOLID = "solid-fill"
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    DIAGONAL = "diagonal"
    DOTS = "dots"
    CROSSHATCH = "crosshatch"


@dataclass(frozen=True)
class AxisSpec:
    """One axis: a human-readable title, a value encoding and a domain.

    The domain is a ``(lo, hi)`` pair for every encoding except TEXT,
    where it is the ordered tuple of category names.  DATETIME domains
    are expressed in days since the Unix epoch.
    """

    title: str
    encoding: Encoding
    domain: tuple[float, float] | tuple[str, ...]

    def __post_init__(self):
        if not self.title.strip():
            raise SpecError("axis-title-empty", "title", "axis title must be non-empty")
        if self.encoding is Encoding.TEXT:
            cats = self.domain
            if not cats:
                raise SpecError("axis-domain-empty", "domain", "a text axis needs at least one category")
            if not all(isinstance(c, str) and c.strip() for c in cats):
                raise SpecError("axis-domain-category", "domain", "categories must be non-empty strings")
            if len(set(cats)) != len(cats):
                raise SpecError("axis-domain-duplicate", "domain", "categories must be distinct")
            object.__setattr__(self, "domain", tuple(cats))
            return
        if len(self.domain) != 2 or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in self.domain):
            raise SpecError("axis-domain-shape", "domain", "numeric domains are a (lo, hi) pair")
        lo, hi = float(self.domain[0]), float(self.domain[1])
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise SpecError("axis-domain-finite", "domain", "domain bounds must be finite")
        if lo >= hi:
            raise SpecError("axis-domain-order", "domain", f"domain lo must be < hi, got ({lo}, {hi})")
        if self.encoding in (Encoding.INT, Encoding.DATETIME) and (lo != int(lo) or hi != int(hi)):
            raise SpecError("axis-domain-integral", "domain",
                            f"{self.encoding.value} domains must have integral bounds")
        object.__setattr__(self, "domain", (lo, hi))

    @property
    def numeric_domain(self) -> tuple[float, float]:
        if self.encoding is Encoding.TEXT:
            # Categories sit at integer positions 0..n-1; a single
            # category still spans a unit slot.
            n = len(self.domain)
            return (0.0, float(n - 1)) if n > 1 else (0.0, 1.0)
        return self.domain  # type: ignore[return-value]

    @property
    def categories(self) -> tuple[str, ...]:
        if self.encoding is not Encoding.TEXT:
            raise TypeError("only text axes have categories")
        return self.domain  # type: ignore[return-value]


@dataclass(frozen=True)
class Series:
    """One named data series.

    Points are ``(x, y)`` pairs in axis value space.  For a text x axis
    the x coordinate is the category index.  ``y_err`` is a per-point
    symmetric error half-width, only meaningful on error-bar charts.
    """

    name: str
    points: tuple[tuple[float, float], ...]
    y_err: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.name.strip():
            raise SpecError("series-name-empty", "name", "series name must be non-empty")
        if not self.points:
            raise SpecError("series-points-empty", "points", "a series needs at least one point")
        norm = []
        for i, pt in enumerate(self.points):
            if len(pt) != 2:
                raise SpecError("series-point-shape", f"points[{i}]", "points are (x, y) pairs")
            x, y = float(pt[0]), float(pt[1])
            if not (math.isfinite(x) and math.isfinite(y)):
                raise SpecError("series-point-finite", f"points[{i}]", "point coordinates must be finite")
            norm.append((x, y))
        object.__setattr__(self, "points", tuple(norm))
        if self.y_err is not None:
            if len(self.y_err) != len(self.points):
                raise SpecError("series-yerr-length", "y_err", "y_err must have one entry per point")
            errs = []
            for i, e in enumerate(self.y_err):
                e = float(e)
                if not math.isfinite(e) or e < 0:
                    raise SpecError("series-yerr-negative", f"y_err[{i}]",
                                    "error half-widths must be finite and >= 0")
                errs.append(e)
            object.__setattr__(self, "y_err", tuple(errs))


@dataclass(frozen=True)
class ChartSpec:
    """A complete declarative chart description."""

    chart_type: ChartType
    title: str
    x_axis: AxisSpec
    y_axis: AxisSpec
    series: tuple[Series, ...]
    legend_title: str | None = None

    def __post_init__(self):
        if not self.title.strip():
            raise SpecError("chart-title-empty", "title", "chart title must be non-empty")
        object.__setattr__(self, "series", tuple(self.series))
        if not self.series:
            raise SpecError("series-empty", "series", "a chart needs at least one series")
        if len(self.series) > MAX_SERIES:
            raise SpecError("series-overflow", "series",
                            f"at most {MAX_SERIES} series are touch-distinguishable, got {len(self.series)}")
        names = [s.name for s in self.series]
        if len(set(names)) != len(names):
            raise SpecError("series-name-duplicate", "series", "series names must be distinct")
        if len(self.series) > 1 and not (self.legend_title and self.legend_title.strip()):
            raise SpecError("legend-title-missing", "legend_title", "multi-series charts need a legend title")
        if len(self.series) == 1 and self.legend_title is not None:
            raise SpecError("legend-title-unexpected", "legend_title", "single-series charts carry no legend")
        if self.y_axis.encoding is Encoding.TEXT:
            raise SpecError("y-axis-text", "y_axis.encoding", "the value axis cannot be text-encoded")
        if self.chart_type is ChartType.BAR and self.x_axis.encoding is not Encoding.TEXT:
            raise SpecError("bar-x-not-text", "x_axis.encoding", "bar charts need a categorical x axis")
        for si, s in enumerate(self.series):
            if self.chart_type is ChartType.ERROR_BAR:
                if s.y_err is None:
                    raise SpecError("yerr-missing", f"series[{si}].y_err",
                                    "error-bar charts need y_err on every series")
            elif s.y_err is not None:
                raise SpecError("yerr-unexpected", f"series[{si}].y_err",
                                "y_err is only valid on error-bar charts")
            self._check_points(si, s)

    def _check_points(self, si: int, s: Series) -> None:
        x_lo, x_hi = self.x_axis.numeric_domain
        y_lo, y_hi = self.y_axis.numeric_domain
        categorical = self.x_axis.encoding is Encoding.TEXT
        n_cat = len(self.x_axis.domain) if categorical else 0
        for i, (x, y) in enumerate(s.points):
            if categorical:
                if x != int(x) or not 0 <= x < n_cat:
                    raise SpecError("point-category-index", f"series[{si}].points[{i}]",
                                    f"x must be a category index in [0, {n_cat}), got {x}")
            elif not x_lo - _EPS <= x <= x_hi + _EPS:
                raise SpecError("point-outside-domain", f"series[{si}].points[{i}]",
                                f"x={x} outside domain [{x_lo}, {x_hi}]")
            err = s.y_err[i] if s.y_err else 0.0
            if not (y_lo - _EPS <= y - err and y + err <= y_hi + _EPS):
                raise SpecError("point-outside-domain", f"series[{si}].points[{i}]",
                                f"y range [{y - err}, {y + err}] outside domain [{y_lo}, {y_hi}]")


@dataclass(frozen=True)
class TactileStyle:
    """Touch-level appearance of one scene element.

    Strokes below 1.0 mm are not reliably palpable, so the model
    refuses them outright.  Dash segments must keep at least 1.0 mm of
    raised line and 2.0 mm of gap, or the pattern reads as a rough
    solid line under a finger.
    """

    stroke_width_mm: float = 1.0
    dash_pattern: tuple[tuple[float, float], ...] = ()
    marker: Marker | None = None
    marker_diameter_mm: float = 0.0
    hatch: Hatch | None = None

    def __post_init__(self):
        if self.stroke_width_mm < 1.0 - _EPS:
            raise SpecError("style-thin-stroke", "stroke_width_mm",
                            f"strokes below 1.0 mm are not palpable, got {self.stroke_width_mm}")
        pairs = []
        for k, pair in enumerate(self.dash_pattern):
            if len(pair) != 2:
                raise SpecError("style-dash-shape", f"dash_pattern[{k}]", "dash entries are (on, off) pairs")
            on, off = float(pair[0]), float(pair[1])
            if on < 1.0 - _EPS:
                raise SpecError("style-dash-on", f"dash_pattern[{k}]",
                                f"dash segments must be >= 1.0 mm on, got {on}")
            if off < 2.0 - _EPS:
                raise SpecError("style-dash-off", f"dash_pattern[{k}]",
                                f"dash gaps must be >= 2.0 mm off, got {off}")
            pairs.append((on, off))
        object.__setattr__(self, "dash_pattern", tuple(pairs))
        if self.marker is not None and self.marker_diameter_mm < 1.0:
            raise SpecError("style-marker-size", "marker_diameter_mm",
                            "markers need a diameter >= 1.0 mm")

    @property
    def solid(self) -> bool:
        return not self.dash_pattern


@dataclass(frozen=True)
class TickLabel:
    """One axis label: the tick's value, its text and its braille form.

    Built by the label-reduction pass, which guarantees ``label_text``
    is the encoding-aware rendering of ``value`` and ``braille_text``
    its transcription.
    """

    value: float | str
    label_text: str
    braille_text: str


class Role(str, enum.Enum):
    """What a scene element is, from the reader's point of view."""

    FRAME = "frame"
    TICK = "tick"
    GRID_OMITTED = "grid-omitted"
    DATA_MARK = "data-mark"
    DATA_PATH = "data-path"
    BAR = "bar"
    WHISKER = "errorbar-whisker"
    BRAILLE_TEXT = "braille-text"
    TEXT_BBOX = "text-bbox"
    LEGEND_ITEM = "legend-item"


#: Paint order, back to front.  Text and its bounding boxes sit above
#: data ink so labels stay readable under a finger; legend swatches are
#: placed last, clear of everything else.
Z_ORDER: dict[Role, int] = {
    Role.FRAME: 0,
    Role.TICK: 1,
    Role.GRID_OMITTED: 1,
    Role.DATA_MARK: 2,
    Role.DATA_PATH: 2,
    Role.BAR: 2,
    Role.WHISKER: 2,
    Role.TEXT_BBOX: 3,
    Role.BRAILLE_TEXT: 4,
    Role.LEGEND_ITEM: 5,
}


@dataclass(frozen=True)
class Polyline:
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise SceneError("geom-degenerate", "a polyline needs at least two points")
        object.__setattr__(self, "points", tuple((float(x), float(y)) for x, y in self.points))

    def bounds(self) -> tuple[float, float, float, float]:
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return (min(xs), min(ys), max(xs), max(ys))


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    width: float
    height: float

    def __post_init__(self):
        if self.width < 0 or self.height < 0:
            raise SceneError("geom-degenerate", "rect sides must be >= 0")

    def bounds(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.x + self.width, self.y + self.height)

    def contains(self, other: tuple[float, float, float, float], slack: float = 1e-9) -> bool:
        x0, y0, x1, y1 = self.bounds()
        return (x0 - slack <= other[0] and y0 - slack <= other[1]
                and other[2] <= x1 + slack and other[3] <= y1 + slack)


@dataclass(frozen=True)
class MarkerGeom:
    """A point mark, drawn as an explicit shape of the style's marker
    kind centred on (x, y)."""

    x: float
    y: float
    diameter_mm: float

    def __post_init__(self):
        if self.diameter_mm <= 0:
            raise SceneError("geom-degenerate", "marker diameter must be > 0")

    def bounds(self) -> tuple[float, float, float, float]:
        r = self.diameter_mm / 2.0
        return (self.x - r, self.y - r, self.x + r, self.y + r)


@dataclass(frozen=True)
class BrailleRunGeom:
    """A single horizontal line of braille cells placed on the canvas.

    ``(x, y)`` is the top-left corner of the first cell; cells advance
    right by the fixed cell pitch.  ``cells`` holds Unicode braille
    characters, one per cell.  ``text`` is the print text the run
    shows, kept so a sighted rendering does not have to reverse the
    transcription (it may be shorter than the source when truncated).
    """

    x: float
    y: float
    cells: str
    text: str = ""

    def __post_init__(self):
        if not self.cells:
            raise SceneError("geom-degenerate", "a braille run needs at least one cell")
        for ch in self.cells:
            if not 0x2800 <= ord(ch) <= 0x283F:
                raise SceneError("braille-non-cell", f"braille runs hold 6-dot cells only, got {ch!r}")

    def bounds(self) -> tuple[float, float, float, float]:
        return (self.x, self.y,
                self.x + len(self.cells) * BRAILLE_CELL_ADVANCE_MM,
                self.y + BRAILLE_LINE_HEIGHT_MM)


Geometry = Polyline | Rect | MarkerGeom | BrailleRunGeom


@dataclass(frozen=True)
class SourceRef:
    """Back-reference from a scene element to the data it renders."""

    series: str
    point: int | None = None


@dataclass(frozen=True)
class SceneElement:
    """One drawable item with its tactile style and description.

    ``description`` feeds the per-element accessible text in the output
    document.  ``classes`` are stable machine-readable tags consumed by
    the output emitter (group placement, stable ids), e.g. ``xlabel``
    or ``series-0``.
    """

    role: Role
    geometry: Geometry
    style: TactileStyle
    description: str
    source_ref: SourceRef | None = None
    classes: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.description.strip():
            raise SceneError("element-description-empty", f"{self.role.value} element has no description")
        object.__setattr__(self, "classes", tuple(self.classes))

    def bounds(self) -> tuple[float, float, float, float]:
        return self.geometry.bounds()


@dataclass(frozen=True)
class TactileScene:
    """Laid-out chart ready for output emission.

    Construction enforces the scene-level tactile invariants: the
    canvas is positive, every element lies inside it, elements appear
    in paint order, and every braille run is covered by exactly one
    text bounding box.
    """

    width_mm: float
    height_mm: float
    elements: tuple[SceneElement, ...]
    title: str
    spec_json: str  # canonical source spec, embedded in output metadata

    def __post_init__(self):
        if self.width_mm <= 0 or self.height_mm <= 0:
            raise SceneError("canvas-degenerate", "canvas sides must be > 0")
        object.__setattr__(self, "elements", tuple(self.elements))
        last_z = -1
        for el in self.elements:
            z = Z_ORDER[el.role]
            if z < last_z:
                raise SceneError("paint-order", f"{el.role.value} element appears above later layers")
            last_z = z
            x0, y0, x1, y1 = el.bounds()
            if x0 < -_EPS or y0 < -_EPS or x1 > self.width_mm + _EPS or y1 > self.height_mm + _EPS:
                raise SceneError(
                    "canvas-overflow",
                    f"{el.role.value} element spills off the canvas: "
                    f"({x0:.2f}, {y0:.2f}, {x1:.2f}, {y1:.2f}) vs {self.width_mm} x {self.height_mm} mm")
        boxes = [el.geometry for el in self.elements if el.role is Role.TEXT_BBOX]
        for el in self.elements:
            if el.role is not Role.BRAILLE_TEXT:
                continue
            covering = sum(1 for b in boxes if isinstance(b, Rect) and b.contains(el.bounds()))
            if covering != 1:
                raise SceneError(
                    "text-bbox-pairing",
                    f"braille run {el.description!r} is covered by {covering} text boxes, want exactly 1")

    def by_role(self, role: Role) -> tuple[SceneElement, ...]:
        return tuple(el for el in self.elements if el.role is role)


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    """One guideline violation found in a document."""

    rule_id: str
    severity: Severity
    locus: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    def __post_init__(self):
        object.__setattr__(self, "findings", tuple(self.findings))

    @property
    def clean(self) -> bool:
        return not self.findings

    @property
    def has_errors(self) -> bool:
        return any(f.severity is Severity.ERROR for f in self.findings)

    @property
    def fatal(self) -> bool:
        return any(f.rule_id == "R-XML" for f in self.findings)

    def by_rule(self, rule_id: str) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.rule_id == rule_id)
