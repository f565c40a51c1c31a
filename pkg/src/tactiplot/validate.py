"""Tactile-accessibility lint for SVG documents.

The checker parses any SVG text and reports guideline violations as
findings rather than exceptions; only non-XML input produces the
fatal R-XML finding.  Documents written by this package carry
semantic ids (``...-series-0``, ``...-xlabel-1``); a few structural
rules key off those conventions and stay silent on foreign documents
that lack them, while the physical rules (stroke width, braille text,
rotation, bounding boxes) apply to any document.

All measurements assume viewBox user units are millimetres; a
document that does not declare mm units gets the R-UNITS warning and
is measured in raw user units.
"""

from __future__ import annotations

import json
import math
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .model import Finding, Severity, TactiplotError, ValidationReport

_EPS = 1e-6

_SHAPE_TAGS = frozenset(
    {"circle", "ellipse", "rect", "line", "polyline", "polygon", "path"})
_RUN_ID = re.compile(
    r"-(?:xlabel|ylabel|title|xtitle|ytitle|legendtitle|legend-name)-\d+$")
_BOX_ID = re.compile(r"-box-\d+$")
_DATA_ID = re.compile(r"-(?:mark|path|bar|whisker|legend-swatch)-\d+$")
_SERIES_ID = re.compile(r"-series-(\d+)$")
_MARK_ID = re.compile(r"-mark-\d+$")
_XLABEL_ID = re.compile(r"-xlabel-(\d+)$")
_YLABEL_ID = re.compile(r"-ylabel-(\d+)$")
_HATCH_URL = re.compile(r"url\(#[^)]*hatch-([a-z-]+)\)")
_NUMBER = re.compile(r"-?\d*\.?\d+(?:[eE][-+]?\d+)?")
_TRANSFORM = re.compile(r"(matrix|translate|scale|rotate|skewX|skewY)\s*\(([^)]*)\)")

_INHERITED = ("stroke", "stroke-width", "stroke-dasharray", "fill",
              "font-size", "text-anchor")


class UnknownRule(TactiplotError):
    pass


@dataclass(frozen=True)
class Rule:
    rule_id: str
    severity: Severity
    parameters: tuple[tuple[str, float], ...] = ()

    def param(self, key: str, default: float) -> float:
        for k, v in self.parameters:
            if k == key:
                return v
        return default


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        ids = [r.rule_id for r in self.rules]
        if len(set(ids)) != len(ids):
            raise ValueError("rule ids must be unique")

    def rule(self, rule_id: str) -> Rule | None:
        for r in self.rules:
            if r.rule_id == rule_id:
                return r
        return None

    @staticmethod
    def default() -> "RuleSet":
        e = Severity.ERROR
        return RuleSet(rules=(
            Rule("R-THIN", e, (("min_stroke_mm", 1.0),)),
            Rule("R-BRAILLE", e),
            Rule("R-HORIZ", e),
            Rule("R-BBOX", e),
            Rule("R-DESC", e),
            Rule("R-LABELCOUNT", e, (("min_labels", 3.0), ("max_labels", 4.0))),
            Rule("R-OVERLAP", e, (("min_gap_mm", 2.0),)),
            Rule("R-STYLEDUP", e),
        ))


DEFAULT_RULES = RuleSet.default()

# Guideline statements the rules enforce; explain_rule cites these.
GUIDELINES = {
    "guideline 1": "chart elements must be distinguishable by touch, using "
                   "varying thicknesses or symbol types such as dotted or "
                   "dashed patterns",
    "guideline 2": "thin elements should be avoided; every stroke and dash "
                   "segment needs an embossable minimum width",
    "guideline 3": "all text should be in braille and oriented horizontally",
    "recommendation 1": "enclose text content with a bounding box",
    "recommendation 2": "scatter points must stay non-overlapping with a "
                        "minimum clear gap between marks",
    "recommendation 3": "embed description tags so each element carries a "
                        "textual alternative",
    "label budget": "an axis carries 3 or 4 labels covering the whole range",
}

_RULE_DOCS = {
    "R-THIN": ("strokes, dash segments and filled slivers must be at least "
               "the minimum embossable width (default 1.0 mm)", "guideline 2"),
    "R-BRAILLE": ("text elements must contain braille cells only; Latin "
                  "print text is unreadable by touch", "guideline 3"),
    "R-HORIZ": ("text and braille runs must not be rotated or sheared",
                "guideline 3"),
    "R-BBOX": ("every text or braille run must sit inside an enclosing "
               "bounding-box rectangle", "recommendation 1"),
    "R-DESC": ("every data, text and box element must carry a non-empty "
               "desc child", "recommendation 3"),
    "R-LABELCOUNT": ("each axis shows 3 or 4 tick labels", "label budget"),
    "R-OVERLAP": ("data marks within one series must keep a minimum clear "
                  "gap, measured between disk extents", "recommendation 2"),
    "R-STYLEDUP": ("no two series may render with an identical style "
                   "signature (stroke width, dash, marker shape, fill)",
                   "guideline 1"),
    "R-UNITS": ("the document does not declare millimetre units, so "
                "physical checks ran on raw user units", "guideline 2"),
    "R-XML": ("the input is not a well-formed SVG document; nothing else "
              "can be checked", "guideline 3"),
}


def explain_rule(rule_id: str) -> str:
    if rule_id not in _RULE_DOCS:
        raise UnknownRule(f"unknown rule id {rule_id!r}")
    summary, key = _RULE_DOCS[rule_id]
    return f"{rule_id}: {summary}. Basis: {key}, {GUIDELINES[key]}."


# --- geometry helpers -------------------------------------------------

_ID_MAT = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)


def _mat_mul(m, n):
    a1, b1, c1, d1, e1, f1 = m
    a2, b2, c2, d2, e2, f2 = n
    return (a1 * a2 + c1 * b2, b1 * a2 + d1 * b2,
            a1 * c2 + c1 * d2, b1 * c2 + d1 * d2,
            a1 * e2 + c1 * f2 + e1, b1 * e2 + d1 * f2 + f1)


def _apply(m, x, y):
    a, b, c, d, e, f = m
    return (a * x + c * y + e, b * x + d * y + f)


def _scale_of(m) -> float:
    return math.sqrt(abs(m[0] * m[3] - m[1] * m[2]))


def _parse_transform(text: str):
    m = _ID_MAT
    for name, raw in _TRANSFORM.findall(text):
        args = [float(t) for t in re.split(r"[\s,]+", raw.strip()) if t]
        if name == "matrix" and len(args) == 6:
            t = tuple(args)
        elif name == "translate":
            tx = args[0] if args else 0.0
            ty = args[1] if len(args) > 1 else 0.0
            t = (1.0, 0.0, 0.0, 1.0, tx, ty)
        elif name == "scale":
            sx = args[0] if args else 1.0
            sy = args[1] if len(args) > 1 else sx
            t = (sx, 0.0, 0.0, sy, 0.0, 0.0)
        elif name == "rotate":
            a = math.radians(args[0]) if args else 0.0
            cos, sin = math.cos(a), math.sin(a)
            t = (cos, sin, -sin, cos, 0.0, 0.0)
            if len(args) == 3:
                cx, cy = args[1], args[2]
                t = _mat_mul(_mat_mul((1, 0, 0, 1, cx, cy), t), (1, 0, 0, 1, -cx, -cy))
        elif name == "skewX" and args:
            t = (1.0, 0.0, math.tan(math.radians(args[0])), 1.0, 0.0, 0.0)
        elif name == "skewY" and args:
            t = (1.0, math.tan(math.radians(args[0])), 0.0, 1.0, 0.0, 0.0)
        else:
            continue
        m = _mat_mul(m, t)
    return m


def _local(tag) -> str:
    return tag.split("}")[-1] if isinstance(tag, str) else ""


def _floats(text: str) -> list[float]:
    return [float(t) for t in _NUMBER.findall(text)]


def _path_points(d: str) -> list[tuple[float, float]]:
    """All coordinates a path touches (control points included)."""
    pts: list[tuple[float, float]] = []
    cur = (0.0, 0.0)
    start = (0.0, 0.0)
    for cmd, raw in re.findall(r"([MmLlHhVvZzCcSsQqTtAa])([^MmLlHhVvZzCcSsQqTtAa]*)", d):
        nums = _floats(raw)
        rel = cmd.islower()
        op = cmd.upper()
        if op == "Z":
            cur = start
            continue
        if op == "H":
            for x in nums:
                cur = (cur[0] + x if rel else x, cur[1])
                pts.append(cur)
            continue
        if op == "V":
            for y in nums:
                cur = (cur[0], cur[1] + y if rel else y)
                pts.append(cur)
            continue
        if op == "A":
            for i in range(0, len(nums) - 6, 7):
                x, y = nums[i + 5], nums[i + 6]
                cur = (cur[0] + x, cur[1] + y) if rel else (x, y)
                pts.append(cur)
            continue
        pairs = [(nums[i], nums[i + 1]) for i in range(0, len(nums) - 1, 2)]
        for j, (x, y) in enumerate(pairs):
            p = (cur[0] + x, cur[1] + y) if rel else (x, y)
            pts.append(p)
            last_of_group = {
                "M": True, "L": True, "T": True,
                "C": j % 3 == 2, "S": j % 2 == 1, "Q": j % 2 == 1,
            }[op]
            if last_of_group:
                cur = p
                if op == "M" and j == 0:
                    start = p
    return pts


def _local_points(tag: str, el: ET.Element) -> list[tuple[float, float]]:
    get = el.get
    if tag == "circle" or tag == "ellipse":
        cx, cy = float(get("cx", "0")), float(get("cy", "0"))
        rx = float(get("r", get("rx", "0")))
        ry = float(get("r", get("ry", "0")))
        return [(cx - rx, cy - ry), (cx + rx, cy + ry)]
    if tag == "rect":
        x, y = float(get("x", "0")), float(get("y", "0"))
        w, h = float(get("width", "0")), float(get("height", "0"))
        return [(x, y), (x + w, y + h)]
    if tag == "line":
        return [(float(get("x1", "0")), float(get("y1", "0"))),
                (float(get("x2", "0")), float(get("y2", "0")))]
    if tag in ("polyline", "polygon"):
        nums = _floats(get("points", ""))
        return [(nums[i], nums[i + 1]) for i in range(0, len(nums) - 1, 2)]
    if tag == "path":
        return _path_points(get("d", ""))
    return []


@dataclass
class _Node:
    tag: str
    el: ET.Element
    pos: int
    matrix: tuple
    style: dict[str, str]
    ancestors: tuple[str, ...]  # enclosing element ids, outermost first
    node_id: str
    bounds: tuple[float, float, float, float] | None

    @property
    def locus(self) -> str:
        return self.node_id or f"{self.tag}[{self.pos}]"

    def stroke(self) -> str:
        return self.style.get("stroke", "none")

    def fill(self) -> str:
        return self.style.get("fill", "black")

    def stroke_width(self) -> float:
        try:
            w = float(_NUMBER.search(self.style.get("stroke-width", "1")).group())
        except (AttributeError, ValueError):
            w = 1.0
        return w * _scale_of(self.matrix)

    def dashes(self) -> list[float]:
        raw = self.style.get("stroke-dasharray", "")
        if not raw or raw == "none":
            return []
        return [v * _scale_of(self.matrix) for v in _floats(raw)]


class _Doc:
    def __init__(self, root: ET.Element):
        self.nodes: list[_Node] = []
        self.shapes: list[_Node] = []
        self.texts: list[_Node] = []
        self.groups: list[_Node] = []
        self.mm_calibrated = self._check_units(root)
        self._walk(root, _ID_MAT, {}, (), iter(range(10 ** 9)).__next__)

    @staticmethod
    def _check_units(root: ET.Element) -> bool:
        for unit_attr in (root.get("width", ""), root.get("height", "")):
            if unit_attr.strip().endswith("mm"):
                return True
        for child in root.iter():
            if _local(child.tag) == "metadata" and child.text:
                try:
                    meta = json.loads(child.text)
                except ValueError:
                    continue
                if isinstance(meta, dict) and meta.get("units") == "mm":
                    return True
        return False

    def _walk(self, el: ET.Element, matrix, style: dict, ancestors, tick) -> None:
        tag = _local(el.tag)
        if el.get("transform"):
            matrix = _mat_mul(matrix, _parse_transform(el.get("transform")))
        style = {**style, **{k: el.get(k) for k in _INHERITED if el.get(k) is not None}}
        bounds = None
        if tag in _SHAPE_TAGS:
            pts = [_apply(matrix, x, y) for x, y in _local_points(tag, el)]
            if pts:
                xs, ys = [p[0] for p in pts], [p[1] for p in pts]
                bounds = (min(xs), min(ys), max(xs), max(ys))
        node = _Node(tag=tag, el=el, pos=tick(), matrix=matrix, style=style,
                     ancestors=ancestors, node_id=el.get("id", ""), bounds=bounds)
        self.nodes.append(node)
        if tag in _SHAPE_TAGS:
            self.shapes.append(node)
        elif tag == "text":
            self.texts.append(node)
        elif tag in ("g", "svg", "defs", "pattern"):
            self.groups.append(node)
        child_ancestors = ancestors + ((node.node_id,) if node.node_id else ())
        for child in el:
            self._walk(child, matrix, style, child_ancestors, tick)

    def descendants(self, group: _Node) -> list[_Node]:
        gid = group.node_id
        return [n for n in self.shapes if gid in n.ancestors]

    def group_bounds(self, group: _Node) -> tuple[float, float, float, float] | None:
        boxes = [n.bounds for n in self.descendants(group) if n.bounds]
        if not boxes:
            return None
        return (min(b[0] for b in boxes), min(b[1] for b in boxes),
                max(b[2] for b in boxes), max(b[3] for b in boxes))

    def has_desc(self, el: ET.Element) -> bool:
        for child in el:
            if _local(child.tag) == "desc" and (child.text or "").strip():
                return True
        return False


# --- the checks -------------------------------------------------------


def _check_thin(doc: _Doc, rule: Rule, out: list) -> None:
    floor = rule.param("min_stroke_mm", 1.0)
    for n in doc.shapes:
        stroked = n.stroke() != "none"
        if stroked:
            w = n.stroke_width()
            if w < floor - _EPS:
                out.append((n.pos, "R-THIN", n.locus,
                            f"stroke width {w:g} mm is under the {floor:g} mm floor"))
            short = [d for d in n.dashes()[::2] if d < floor - _EPS]
            if short:
                out.append((n.pos, "R-THIN", n.locus,
                            f"dash segment {min(short):g} mm is under the "
                            f"{floor:g} mm floor"))
        elif n.fill() != "none" and n.bounds is not None:
            x0, y0, x1, y1 = n.bounds
            thin = min(x1 - x0, y1 - y0)
            if thin < floor - _EPS:
                out.append((n.pos, "R-THIN", n.locus,
                            f"filled element is only {thin:g} mm across, under "
                            f"the {floor:g} mm floor"))


def _check_braille(doc: _Doc, rule: Rule, out: list) -> None:
    for n in doc.texts:
        content = "".join(n.el.itertext())
        bad = [ch for ch in content if not ch.isspace() and not 0x2800 <= ord(ch) <= 0x28FF]
        if bad:
            out.append((n.pos, "R-BRAILLE", n.locus,
                        f"text contains non-braille characters, e.g. {bad[0]!r}"))


def _run_groups(doc: _Doc) -> list[_Node]:
    return [g for g in doc.groups if _RUN_ID.search(g.node_id)]


def _check_horiz(doc: _Doc, rule: Rule, out: list) -> None:
    for n in doc.texts + _run_groups(doc):
        a, b, c, d, e, f = n.matrix
        if abs(b) > _EPS or abs(c) > _EPS:
            out.append((n.pos, "R-HORIZ", n.locus,
                        "text is rotated or sheared; tactile text must stay "
                        "horizontal"))


def _boxes(doc: _Doc) -> list[_Node]:
    return [n for n in doc.shapes
            if n.tag == "rect" and n.fill() == "none" and n.stroke() != "none"]


def _contained(inner, outer, slack: float) -> bool:
    return (inner[0] >= outer[0] - slack and inner[1] >= outer[1] - slack
            and inner[2] <= outer[2] + slack and inner[3] <= outer[3] + slack)


def _check_bbox(doc: _Doc, rule: Rule, out: list) -> None:
    boxes = [b.bounds for b in _boxes(doc) if b.bounds]
    for g in _run_groups(doc):
        bounds = doc.group_bounds(g)
        if bounds is None:
            continue
        if not any(_contained(bounds, box, 0.05) for box in boxes):
            out.append((g.pos, "R-BBOX", g.locus,
                        "braille run has no enclosing bounding-box rectangle"))
    for n in doc.texts:
        x = float(n.el.get("x", "0"))
        y = float(n.el.get("y", "0"))
        px, py = _apply(n.matrix, x, y)
        if not any(b[0] - 0.05 <= px <= b[2] + 0.05 and b[1] - 0.05 <= py <= b[3] + 0.05
                   for b in boxes):
            out.append((n.pos, "R-BBOX", n.locus,
                        "text element has no enclosing bounding-box rectangle"))


def _check_desc(doc: _Doc, rule: Rule, out: list) -> None:
    inside_g = {id(g.el) for g in doc.groups}
    for g in doc.groups:
        gid = g.node_id
        if not (_DATA_ID.search(gid) or _RUN_ID.search(gid) or _BOX_ID.search(gid)):
            continue
        if not doc.has_desc(g.el):
            out.append((g.pos, "R-DESC", g.locus,
                        "element lacks a non-empty desc tag"))
    group_by_id = {g.node_id: g for g in doc.groups if g.node_id}
    for n in doc.texts:
        if doc.has_desc(n.el):
            continue
        parent = group_by_id.get(n.ancestors[-1]) if n.ancestors else None
        if parent is not None and doc.has_desc(parent.el):
            continue
        out.append((n.pos, "R-DESC", n.locus,
                    "text element lacks a desc tag on itself or its group"))


def _check_labelcount(doc: _Doc, rule: Rule, out: list) -> None:
    lo = int(rule.param("min_labels", 3))
    hi = int(rule.param("max_labels", 4))
    for axis, pattern in (("x", _XLABEL_ID), ("y", _YLABEL_ID)):
        labelled = [n for n in doc.groups + doc.texts if pattern.search(n.node_id)]
        if not labelled:
            continue
        count = len(labelled)
        if not lo <= count <= hi:
            first = min(n.pos for n in labelled)
            out.append((first, "R-LABELCOUNT", f"{axis} axis labels",
                        f"{count} tick labels on the {axis} axis; expected "
                        f"{lo} to {hi}"))


def _check_overlap(doc: _Doc, rule: Rule, out: list) -> None:
    gap_floor = rule.param("min_gap_mm", 2.0)
    for series in doc.groups:
        if not _SERIES_ID.search(series.node_id):
            continue
        marks = [g for g in doc.groups
                 if _MARK_ID.search(g.node_id) and series.node_id in g.ancestors]
        disks = []
        for mark in marks:
            bounds = doc.group_bounds(mark)
            if bounds is None:
                continue
            grow = max((s.stroke_width() for s in doc.descendants(mark)
                        if s.stroke() != "none"), default=0.0) / 2
            cx, cy = (bounds[0] + bounds[2]) / 2, (bounds[1] + bounds[3]) / 2
            r = max(bounds[2] - bounds[0], bounds[3] - bounds[1]) / 2 + grow
            disks.append((mark, cx, cy, r))
        for i in range(len(disks)):
            for j in range(i + 1, len(disks)):
                a, b = disks[i], disks[j]
                gap = math.dist((a[1], a[2]), (b[1], b[2])) - a[3] - b[3]
                if gap < gap_floor - _EPS:
                    out.append((b[0].pos, "R-OVERLAP", b[0].locus,
                                f"marks {a[0].locus} and {b[0].locus} are "
                                f"{max(gap, 0):.2f} mm apart; {gap_floor:g} mm "
                                f"is the minimum"))


def _style_signature(doc: _Doc, series: _Node) -> frozenset:
    sigs = set()
    for n in doc.descendants(series):
        stroked = n.stroke() != "none"
        fill = n.fill()
        hatch = _HATCH_URL.search(fill)
        fill_norm = f"hatch:{hatch.group(1)}" if hatch else fill
        token: object = n.tag
        if n.tag == "circle":
            token = ("circle", round(float(n.el.get("r", "0")), 2))
        elif n.tag == "path":
            pts = _path_points(n.el.get("d", ""))
            if pts:
                x0, y0 = pts[0]
                token = ("path", tuple((round(x - x0, 2), round(y - y0, 2))
                                       for x, y in pts))
        sigs.add((token,
                  round(n.stroke_width(), 3) if stroked else None,
                  tuple(round(d, 3) for d in n.dashes()),
                  fill_norm))
    return frozenset(sigs)


def _check_styledup(doc: _Doc, rule: Rule, out: list) -> None:
    seen: dict[frozenset, _Node] = {}
    series = [g for g in doc.groups if _SERIES_ID.search(g.node_id)]
    for g in sorted(series, key=lambda n: n.pos):
        sig = _style_signature(doc, g)
        if not sig:
            continue
        if sig in seen:
            out.append((g.pos, "R-STYLEDUP", g.locus,
                        f"series {g.locus} renders with the same style "
                        f"signature as {seen[sig].locus}"))
        else:
            seen[sig] = g
    return


_CHECKS = {
    "R-THIN": _check_thin,
    "R-BRAILLE": _check_braille,
    "R-HORIZ": _check_horiz,
    "R-BBOX": _check_bbox,
    "R-DESC": _check_desc,
    "R-LABELCOUNT": _check_labelcount,
    "R-OVERLAP": _check_overlap,
    "R-STYLEDUP": _check_styledup,
}


def validate_svg(document: str | bytes, rules: RuleSet = DEFAULT_RULES) -> ValidationReport:
    """Check one SVG document against the tactile guideline rules."""
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            return ValidationReport(findings=(
                Finding("R-XML", Severity.ERROR, "document",
                        f"input is not UTF-8 text: {exc}"),))
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        return ValidationReport(findings=(
            Finding("R-XML", Severity.ERROR, "document",
                    f"input is not well-formed XML: {exc}"),))
    if _local(root.tag) != "svg":
        return ValidationReport(findings=(
            Finding("R-XML", Severity.ERROR, "document",
                    f"root element is <{_local(root.tag)}>, not <svg>"),))

    doc = _Doc(root)
    raw: list[tuple[int, str, str, str]] = []
    if not doc.mm_calibrated:
        raw.append((-1, "R-UNITS", "document",
                    "no millimetre calibration found (metadata units or mm "
                    "width/height); physical checks used raw user units"))
    for rule_id, check in _CHECKS.items():
        rule = rules.rule(rule_id)
        if rule is not None:
            check(doc, rule, raw)

    raw.sort(key=lambda item: (item[0], item[1]))
    findings = tuple(
        Finding(rule_id,
                Severity.WARNING if rule_id == "R-UNITS"
                else rules.rule(rule_id).severity if rules.rule(rule_id)
                else Severity.ERROR,
                locus, message)
        for pos, rule_id, locus, message in raw)
    return ValidationReport(findings=findings)


def report_text(report: ValidationReport) -> str:
    """Human-readable one-finding-per-line rendering."""
    if report.clean:
        return "clean: no findings\n"
    lines = [f"{f.rule_id} {f.severity.value} {f.locus}: {f.message}"
             for f in report.findings]
    return "\n".join(lines) + "\n"


def report_json(report: ValidationReport) -> str:
    doc = {"clean": report.clean,
           "findings": [{"rule_id": f.rule_id, "severity": f.severity.value,
                         "locus": f.locus, "message": f.message}
                        for f in report.findings]}
    return json.dumps(doc, indent=2) + "\n"
