"""SVG serialization of a TactileScene.

Two variants share one scene walk.  The tactile variant renders
braille runs as explicit dot circles, hatches as pattern fills and
markers as plain shapes, so nothing depends on fonts or CSS; the
visual variant is the sighted sibling used as the input side of a
dataset pair, with Latin text and per-series colors.

Output is byte-deterministic for a given scene and config: attribute
order is fixed, ids are assigned by stable counters and numbers are
formatted through one helper.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .braille import DOT_OFFSETS_MM, dots_of_cell
from .model import (
    BRAILLE_CELL_ADVANCE_MM,
    BRAILLE_DOT_DIAMETER_MM,
    BrailleRunGeom,
    Hatch,
    Marker,
    MarkerGeom,
    Polyline,
    Rect,
    Role,
    SceneElement,
    TactileScene,
    TactiplotError,
)
from .version import VERSION

_ID_START = re.compile(r"^[A-Za-z_][A-Za-z0-9_.-]*$")

_VISUAL_COLORS = ("#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860")

_ROLE_TITLES = {
    Role.FRAME: "Axes frame",
    Role.TICK: "Tick mark",
    Role.GRID_OMITTED: "Grid line",
    Role.DATA_MARK: "Data point",
    Role.DATA_PATH: "Data line",
    Role.BAR: "Bar",
    Role.WHISKER: "Error bar part",
    Role.BRAILLE_TEXT: "Label",
    Role.TEXT_BBOX: "Label box",
    Role.LEGEND_ITEM: "Legend sample",
}


class EmitError(TactiplotError):
    pass


@dataclass(frozen=True)
class EmitConfig:
    variant: str = "tactile"
    pretty: bool = True
    id_prefix: str = "tc"

    def __post_init__(self):
        if self.variant not in ("tactile", "visual"):
            raise ValueError(f"variant must be 'tactile' or 'visual', not {self.variant!r}")
        if not _ID_START.match(self.id_prefix):
            raise ValueError(f"id_prefix {self.id_prefix!r} is not a valid XML name")


def fmt(x: float) -> str:
    """Millimetre value as a minimal decimal string (3 places max)."""
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


class _El:
    __slots__ = ("tag", "attrs", "children", "text")

    def __init__(self, tag: str, attrs: list[tuple[str, str]] | None = None,
                 text: str | None = None):
        self.tag = tag
        self.attrs = attrs or []
        self.children: list[_El] = []
        self.text = text

    def add(self, child: "_El") -> "_El":
        self.children.append(child)
        return child

    def render(self, out: list[str], indent: int, pretty: bool) -> None:
        pad = "  " * indent if pretty else ""
        attrs = "".join(f' {k}="{escape(v)}"' for k, v in self.attrs)
        if self.text is not None:
            out.append(f"{pad}<{self.tag}{attrs}>{escape(self.text)}</{self.tag}>")
        elif self.children:
            out.append(f"{pad}<{self.tag}{attrs}>")
            for child in self.children:
                child.render(out, indent + 1, pretty)
            out.append(f"{pad}</{self.tag}>")
        else:
            out.append(f"{pad}<{self.tag}{attrs}/>")


def _series_index(el: SceneElement) -> int:
    for c in el.classes:
        if c.startswith("series-"):
            return int(c.split("-", 1)[1])
    return 0


def _dasharray(pairs: tuple[tuple[float, float], ...], scale: float = 1.0) -> str:
    return " ".join(f"{fmt(on * scale)} {fmt(off * scale)}" for on, off in pairs)


def _marker_paths(marker: Marker | None, cx: float, cy: float, r: float) -> tuple[str, str, bool]:
    """Return (tag, d-or-r, closed) for a marker shape."""
    m = marker or Marker.CIRCLE
    if m is Marker.CIRCLE:
        return ("circle", "", True)
    if m is Marker.SQUARE:
        s = r * 0.8862  # side half-length of the equal-area square
        d = (f"M {fmt(cx - s)},{fmt(cy - s)} L {fmt(cx + s)},{fmt(cy - s)} "
             f"L {fmt(cx + s)},{fmt(cy + s)} L {fmt(cx - s)},{fmt(cy + s)} Z")
        return ("path", d, True)
    if m is Marker.TRIANGLE:
        h = r * 0.866
        d = (f"M {fmt(cx)},{fmt(cy - r)} L {fmt(cx + h)},{fmt(cy + r / 2)} "
             f"L {fmt(cx - h)},{fmt(cy + r / 2)} Z")
        return ("path", d, True)
    if m is Marker.DIAMOND:
        d = (f"M {fmt(cx)},{fmt(cy - r)} L {fmt(cx + r)},{fmt(cy)} "
             f"L {fmt(cx)},{fmt(cy + r)} L {fmt(cx - r)},{fmt(cy)} Z")
        return ("path", d, True)
    if m is Marker.CROSS:
        a = r * 0.7071
        d = (f"M {fmt(cx - a)},{fmt(cy - a)} L {fmt(cx + a)},{fmt(cy + a)} "
             f"M {fmt(cx - a)},{fmt(cy + a)} L {fmt(cx + a)},{fmt(cy - a)}")
        return ("path", d, False)
    d = (f"M {fmt(cx - r)},{fmt(cy)} L {fmt(cx + r)},{fmt(cy)} "
         f"M {fmt(cx)},{fmt(cy - r)} L {fmt(cx)},{fmt(cy + r)}")
    return ("path", d, False)


def _hatch_fill(hatch: Hatch | None, prefix: str) -> str:
    if hatch is None:
        return "none"
    if hatch is Hatch.SOLID:
        return "black"
    return f"url(#{prefix}-hatch-{hatch.value})"


_HATCH_LINES = {
    Hatch.HORIZONTAL: ("M 0,2 L 4,2",),
    Hatch.VERTICAL: ("M 2,0 L 2,4",),
    Hatch.DIAGONAL: ("M -1,1 L 1,-1 M -1,5 L 5,-1 M 3,5 L 5,3",),
    Hatch.CROSSHATCH: ("M -1,1 L 1,-1 M -1,5 L 5,-1 M 3,5 L 5,3",
                       "M -1,3 L 1,5 M -1,-1 L 5,5 M 3,-1 L 5,1"),
}


def _pattern_def(hatch: Hatch, prefix: str) -> _El:
    pat = _El("pattern", [("id", f"{prefix}-hatch-{hatch.value}"), ("width", "4"),
                          ("height", "4"), ("patternUnits", "userSpaceOnUse")])
    if hatch is Hatch.DOTS:
        pat.add(_El("circle", [("cx", "2"), ("cy", "2"), ("r", "0.75"), ("fill", "black")]))
    else:
        for d in _HATCH_LINES[hatch]:
            pat.add(_El("path", [("d", d), ("fill", "none"), ("stroke", "black"),
                                 ("stroke-width", "1")]))
    return pat


class _Emitter:
    def __init__(self, scene: TactileScene, cfg: EmitConfig):
        self.scene = scene
        self.cfg = cfg
        self.visual = cfg.variant == "visual"
        self.p = cfg.id_prefix
        self.counters: dict[str, int] = {}

    def next_id(self, kind: str) -> str:
        n = self.counters.get(kind, 0)
        self.counters[kind] = n + 1
        return f"{self.p}-{kind}-{n}"

    def element_id(self, el: SceneElement) -> str:
        cls = el.classes
        if el.role is Role.FRAME:
            return self.next_id("frame")
        if el.role is Role.TICK:
            return self.next_id(cls[1] if len(cls) > 1 else "tick")
        if el.role is Role.LEGEND_ITEM:
            return self.next_id("legend-swatch")
        if el.role in (Role.BRAILLE_TEXT, Role.TEXT_BBOX):
            kind = cls[1] if len(cls) > 1 else "text"
            if el.role is Role.TEXT_BBOX:
                kind += "-box"
            return self.next_id(kind)
        k = _series_index(el)
        sub = cls[-1] if cls else "data"
        return self.next_id(f"series-{k}-{sub}")

    def color(self, el: SceneElement) -> str:
        return _VISUAL_COLORS[_series_index(el) % len(_VISUAL_COLORS)]

    def emit(self) -> str:
        scene, cfg = self.scene, self.cfg
        root = _El("svg", [("xmlns", "http://www.w3.org/2000/svg"),
                           ("viewBox", f"0 0 {fmt(scene.width_mm)} {fmt(scene.height_mm)}")])
        root.add(_El("title", text=scene.title))
        kind = "Tactile chart" if not self.visual else "Chart"
        root.add(_El("desc", text=f"{kind}: {scene.title}. Millimetre units via viewBox."))
        meta = {"units": "mm", "generator": f"tactiplot/{VERSION}",
                "variant": cfg.variant, "spec": json.loads(scene.spec_json)}
        root.add(_El("metadata", text=json.dumps(meta, separators=(",", ":"))))

        frame: list[SceneElement] = []
        axes: list[SceneElement] = []
        series: dict[int, list[SceneElement]] = {}
        labels: list[SceneElement] = []
        legend: list[SceneElement] = []
        for el in scene.elements:
            if el.role is Role.FRAME:
                frame.append(el)
            elif el.role in (Role.TICK, Role.GRID_OMITTED):
                axes.append(el)
            elif el.role in (Role.DATA_MARK, Role.DATA_PATH, Role.BAR, Role.WHISKER):
                series.setdefault(_series_index(el), []).append(el)
            elif el.role is Role.LEGEND_ITEM or (el.classes and el.classes[0] == "legend"):
                legend.append(el)
            else:
                labels.append(el)

        if not self.visual:
            used = sorted({el.style.hatch for el in scene.elements
                           if el.style.hatch not in (None, Hatch.SOLID)},
                          key=lambda h: h.value)
            if used:
                defs = root.add(_El("defs"))
                for hatch in used:
                    defs.add(_pattern_def(hatch, self.p))

        for group_id, members in (("frame", frame), ("axes", axes)):
            if members:
                g = root.add(_El("g", [("id", f"{self.p}-{group_id}")]))
                for el in members:
                    g.add(self.render_element(el))
        if series:
            data = root.add(_El("g", [("id", f"{self.p}-data")]))
            for k in sorted(series):
                g = data.add(_El("g", [("id", f"{self.p}-series-{k}")]))
                for el in series[k]:
                    g.add(self.render_element(el))
        for group_id, members in (("labels", labels), ("legend", legend)):
            if members:
                g = root.add(_El("g", [("id", f"{self.p}-{group_id}")]))
                for el in members:
                    rendered = self.render_element(el)
                    if rendered is not None:
                        g.add(rendered)

        out: list[str] = []
        root.render(out, 0, cfg.pretty)
        return ("\n" if cfg.pretty else "").join(out) + "\n"

    def render_element(self, el: SceneElement) -> _El | None:
        if self.visual and el.role is Role.TEXT_BBOX:
            self.next_id((el.classes[1] if len(el.classes) > 1 else "text") + "-box")
            return None  # boxes are a tactile affordance only
        g = _El("g", [("id", self.element_id(el))])
        g.add(_El("title", text=_ROLE_TITLES[el.role]))
        g.add(_El("desc", text=el.description))
        geom = el.geometry
        if isinstance(geom, Polyline):
            g.add(self.polyline_shape(el, geom))
        elif isinstance(geom, Rect):
            g.add(self.rect_shape(el, geom))
        elif isinstance(geom, MarkerGeom):
            g.add(self.marker_shape(el, geom))
        else:
            assert isinstance(geom, BrailleRunGeom)
            self.braille_shapes(el, geom, g)
        return g

    def polyline_shape(self, el: SceneElement, geom: Polyline) -> _El:
        pts = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in geom.points)
        attrs = [("points", pts), ("fill", "none")]
        if self.visual:
            if el.role in (Role.DATA_PATH, Role.LEGEND_ITEM):
                attrs += [("stroke", self.color(el)), ("stroke-width", "1")]
                if el.style.dash_pattern:
                    attrs.append(("stroke-dasharray", _dasharray(el.style.dash_pattern, 0.5)))
            elif el.role is Role.WHISKER:
                attrs += [("stroke", "#444444"), ("stroke-width", "0.8")]
            else:
                attrs += [("stroke", "#444444"), ("stroke-width", "0.5")]
        else:
            attrs += [("stroke", "black"), ("stroke-width", fmt(el.style.stroke_width_mm))]
            if el.style.dash_pattern:
                attrs.append(("stroke-dasharray", _dasharray(el.style.dash_pattern)))
        attrs += [("stroke-linecap", "round"), ("stroke-linejoin", "round")]
        return _El("polyline", attrs)

    def rect_shape(self, el: SceneElement, geom: Rect) -> _El:
        attrs = [("x", fmt(geom.x)), ("y", fmt(geom.y)),
                 ("width", fmt(geom.width)), ("height", fmt(geom.height))]
        if el.role is Role.TEXT_BBOX:
            attrs += [("fill", "none"), ("stroke", "black"),
                      ("stroke-width", fmt(el.style.stroke_width_mm))]
        elif self.visual:
            attrs += [("fill", self.color(el)), ("stroke", "none")]
        else:
            attrs += [("fill", _hatch_fill(el.style.hatch, self.p)), ("stroke", "black"),
                      ("stroke-width", fmt(el.style.stroke_width_mm))]
        return _El("rect", attrs)

    def marker_shape(self, el: SceneElement, geom: MarkerGeom) -> _El:
        r = geom.diameter_mm / 2
        tag, d, closed = _marker_paths(el.style.marker, geom.x, geom.y, r)
        if self.visual:
            color = self.color(el)
            if tag == "circle":
                return _El("circle", [("cx", fmt(geom.x)), ("cy", fmt(geom.y)), ("r", fmt(r)),
                                      ("fill", color), ("stroke", "none")])
            fill = color if closed else "none"
            stroke = "none" if closed else color
            attrs = [("d", d), ("fill", fill)]
            if stroke != "none":
                attrs += [("stroke", stroke), ("stroke-width", "1")]
            else:
                attrs.append(("stroke", "none"))
            return _El("path", attrs)
        fill = _hatch_fill(el.style.hatch, self.p) if closed else "none"
        dash = ([("stroke-dasharray", _dasharray(el.style.dash_pattern))]
                if el.style.dash_pattern else [])
        sw = fmt(el.style.stroke_width_mm)
        if tag == "circle":
            return _El("circle", [("cx", fmt(geom.x)), ("cy", fmt(geom.y)), ("r", fmt(r)),
                                  ("fill", fill), ("stroke", "black"),
                                  ("stroke-width", sw)] + dash)
        return _El("path", [("d", d), ("fill", fill), ("stroke", "black"),
                            ("stroke-width", sw)] + dash + [("stroke-linecap", "round")])

    def braille_shapes(self, el: SceneElement, geom: BrailleRunGeom, g: _El) -> None:
        if self.visual:
            cx = geom.x + len(geom.cells) * BRAILLE_CELL_ADVANCE_MM / 2
            baseline = geom.y + 7.0
            g.add(_El("text", [("x", fmt(cx)), ("y", fmt(baseline)),
                               ("font-family", "sans-serif"), ("font-size", "6"),
                               ("text-anchor", "middle"), ("fill", "#333333")],
                      text=geom.text))
            return
        r = fmt(BRAILLE_DOT_DIAMETER_MM / 2)
        for i, cell in enumerate(geom.cells):
            cell_x = geom.x + i * BRAILLE_CELL_ADVANCE_MM
            for dot in dots_of_cell(cell):
                dx, dy = DOT_OFFSETS_MM[dot]
                g.add(_El("circle", [("cx", fmt(cell_x + dx)), ("cy", fmt(geom.y + dy)),
                                     ("r", r), ("fill", "black"), ("stroke", "none")]))


def emit_svg(scene: TactileScene, cfg: EmitConfig = EmitConfig()) -> str:
    """Serialize a scene to an SVG document string."""
    return _Emitter(scene, cfg).emit()
