"""Front end: parse chart-spec documents and CSV tables into ChartSpec.

The spec document is strict UTF-8 JSON whose fields mirror the model
types one to one.  Unknown fields are rejected so the same schema can
serve as a tight response contract for extraction endpoints.  Parsing
is total: any byte sequence either yields a valid :class:`ChartSpec`
or raises :class:`SpecParseError` — nothing else escapes.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any

from .model import (
    AxisSpec,
    ChartSpec,
    ChartType,
    Encoding,
    Series,
    SpecError,
    TactiplotError,
    days_to_iso,
    iso_to_days,
)

_SPEC_FIELDS = {"chart_type", "title", "x_axis", "y_axis", "legend_title", "series"}
_AXIS_FIELDS = {"title", "encoding", "domain"}
_SERIES_FIELDS = {"name", "points", "y_err"}


class SpecParseError(TactiplotError):
    """A spec or CSV document failed to parse.

    ``kind`` is one of ``syntax``, ``missing-field``, ``bad-enum``,
    ``domain-violation``; ``path`` locates the offending field.
    """

    def __init__(self, kind: str, path: str, message: str):
        super().__init__(f"{kind} at {path or '<document>'}: {message}")
        self.kind = kind
        self.path = path
        self.message = message


def _syntax(path: str, message: str) -> SpecParseError:
    return SpecParseError("syntax", path, message)


def _text(obj: dict, key: str, path: str) -> str:
    if key not in obj:
        raise SpecParseError("missing-field", path, f"required field {key!r} is missing")
    value = obj[key]
    if not isinstance(value, str):
        raise _syntax(f"{path}.{key}" if path else key, "expected a string")
    return value


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _syntax(path, "expected a number")
    try:
        return float(value)
    except OverflowError:
        raise _syntax(path, "number too large") from None


def _object(value: Any, path: str, allowed: set[str]) -> dict:
    if not isinstance(value, dict):
        raise _syntax(path, "expected an object")
    unknown = sorted(set(value) - allowed)
    if unknown:
        raise _syntax(path, f"unknown fields: {', '.join(unknown)}")
    return value


def _days(value: Any, path: str) -> float:
    if not isinstance(value, str):
        raise _syntax(path, "expected an ISO-8601 date string")
    try:
        return iso_to_days(value)
    except ValueError:
        raise _syntax(path, f"not a YYYY-MM-DD date: {value!r}") from None


def _parse_axis(value: Any, path: str) -> AxisSpec:
    obj = _object(value, path, _AXIS_FIELDS)
    title = _text(obj, "title", path)
    enc_text = _text(obj, "encoding", path)
    try:
        encoding = Encoding(enc_text)
    except ValueError:
        raise SpecParseError("bad-enum", f"{path}.encoding",
                             f"unknown encoding {enc_text!r}") from None
    if "domain" not in obj:
        raise SpecParseError("missing-field", path, "required field 'domain' is missing")
    raw = obj["domain"]
    if not isinstance(raw, list):
        raise _syntax(f"{path}.domain", "expected an array")
    domain: tuple
    if encoding is Encoding.TEXT:
        for i, c in enumerate(raw):
            if not isinstance(c, str):
                raise _syntax(f"{path}.domain[{i}]", "categories must be strings")
        domain = tuple(raw)
    elif encoding is Encoding.DATETIME:
        if len(raw) != 2:
            raise _syntax(f"{path}.domain", "expected [start, end] dates")
        domain = tuple(_days(v, f"{path}.domain[{i}]") for i, v in enumerate(raw))
    else:
        if len(raw) != 2:
            raise _syntax(f"{path}.domain", "expected [lo, hi]")
        domain = tuple(_number(v, f"{path}.domain[{i}]") for i, v in enumerate(raw))
    try:
        return AxisSpec(title=title, encoding=encoding, domain=domain)
    except SpecError as e:
        raise SpecParseError("domain-violation", e.at(path).path, e.message) from None


def _parse_value(value: Any, encoding: Encoding, categories: tuple[str, ...] | None, path: str) -> float:
    if encoding is Encoding.TEXT:
        if not isinstance(value, str):
            raise _syntax(path, "expected a category name")
        assert categories is not None
        try:
            return float(categories.index(value))
        except ValueError:
            raise SpecParseError("domain-violation", path,
                                 f"{value!r} is not a declared category") from None
    if encoding is Encoding.DATETIME:
        return _days(value, path)
    return _number(value, path)


def _parse_series(value: Any, path: str, x_axis: AxisSpec, y_axis: AxisSpec) -> Series:
    obj = _object(value, path, _SERIES_FIELDS)
    name = _text(obj, "name", path)
    if "points" not in obj:
        raise SpecParseError("missing-field", path, "required field 'points' is missing")
    raw_points = obj["points"]
    if not isinstance(raw_points, list):
        raise _syntax(f"{path}.points", "expected an array of [x, y] pairs")
    x_cats = x_axis.domain if x_axis.encoding is Encoding.TEXT else None
    points = []
    for i, pt in enumerate(raw_points):
        ppath = f"{path}.points[{i}]"
        if not isinstance(pt, list) or len(pt) != 2:
            raise _syntax(ppath, "expected an [x, y] pair")
        x = _parse_value(pt[0], x_axis.encoding, x_cats, f"{ppath}[0]")
        y = _parse_value(pt[1], y_axis.encoding, None, f"{ppath}[1]")
        points.append((x, y))
    y_err = None
    if "y_err" in obj:
        raw_err = obj["y_err"]
        if not isinstance(raw_err, list):
            raise _syntax(f"{path}.y_err", "expected an array of numbers")
        y_err = tuple(_number(v, f"{path}.y_err[{i}]") for i, v in enumerate(raw_err))
    try:
        return Series(name=name, points=tuple(points), y_err=y_err)
    except SpecError as e:
        raise SpecParseError("domain-violation", e.at(path).path, e.message) from None


def spec_from_document(doc: Any) -> ChartSpec:
    """Build a validated ChartSpec from already-decoded JSON data."""
    obj = _object(doc, "", _SPEC_FIELDS)
    type_text = _text(obj, "chart_type", "")
    try:
        chart_type = ChartType(type_text)
    except ValueError:
        raise SpecParseError("bad-enum", "chart_type",
                             f"unknown chart type {type_text!r}") from None
    title = _text(obj, "title", "")
    if "x_axis" not in obj:
        raise SpecParseError("missing-field", "", "required field 'x_axis' is missing")
    if "y_axis" not in obj:
        raise SpecParseError("missing-field", "", "required field 'y_axis' is missing")
    x_axis = _parse_axis(obj["x_axis"], "x_axis")
    y_axis = _parse_axis(obj["y_axis"], "y_axis")
    legend_title = None
    if "legend_title" in obj:
        legend_title = obj["legend_title"]
        if not isinstance(legend_title, str):
            raise _syntax("legend_title", "expected a string")
    if "series" not in obj:
        raise SpecParseError("missing-field", "", "required field 'series' is missing")
    raw_series = obj["series"]
    if not isinstance(raw_series, list):
        raise _syntax("series", "expected an array")
    series = tuple(_parse_series(s, f"series[{i}]", x_axis, y_axis)
                   for i, s in enumerate(raw_series))
    try:
        return ChartSpec(chart_type=chart_type, title=title, x_axis=x_axis,
                         y_axis=y_axis, series=series, legend_title=legend_title)
    except SpecError as e:
        raise SpecParseError("domain-violation", e.path, e.message) from None


def parse_spec(data: bytes) -> ChartSpec:
    """Parse a UTF-8 JSON spec document into a validated ChartSpec."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise _syntax("", f"not UTF-8: {e}") from None
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, RecursionError) as e:
        raise _syntax("", f"not valid JSON: {e}") from None
    return spec_from_document(doc)


def _unparse_value(v: float, encoding: Encoding, categories: tuple[str, ...] | None):
    if encoding is Encoding.TEXT:
        assert categories is not None
        return categories[int(v)]
    if encoding is Encoding.DATETIME:
        return days_to_iso(v)
    return int(v) if v == int(v) and abs(v) < 2 ** 53 else v


def spec_to_document(spec: ChartSpec) -> dict:
    """Canonical JSON-ready form of a spec; inverse of parsing."""
    x_enc, y_enc = spec.x_axis.encoding, spec.y_axis.encoding
    x_cats = spec.x_axis.domain if x_enc is Encoding.TEXT else None

    def axis_doc(axis: AxisSpec) -> dict:
        if axis.encoding is Encoding.TEXT:
            domain = list(axis.domain)
        else:
            domain = [_unparse_value(v, axis.encoding, None) for v in axis.domain]
        return {"title": axis.title, "encoding": axis.encoding.value, "domain": domain}

    doc: dict = {
        "chart_type": spec.chart_type.value,
        "title": spec.title,
        "x_axis": axis_doc(spec.x_axis),
        "y_axis": axis_doc(spec.y_axis),
    }
    if spec.legend_title is not None:
        doc["legend_title"] = spec.legend_title
    doc["series"] = [
        {
            "name": s.name,
            "points": [[_unparse_value(x, x_enc, x_cats), _unparse_value(y, y_enc, None)]
                       for x, y in s.points],
            **({"y_err": [_unparse_value(e, Encoding.FLOAT, None) for e in s.y_err]}
               if s.y_err is not None else {}),
        }
        for s in spec.series
    ]
    return doc


def serialize_spec(spec: ChartSpec, indent: int | None = 2) -> str:
    """Serialize to the canonical spec document text."""
    return json.dumps(spec_to_document(spec), indent=indent) + ("\n" if indent else "")


def _parse_cell(cell: str, encoding: Encoding, where: str) -> float:
    cell = cell.strip()
    if not cell:
        raise _syntax(where, "empty cell")
    try:
        if encoding is Encoding.INT:
            return float(int(cell))
        if encoding is Encoding.DATETIME:
            return iso_to_days(cell)
        return float(cell)  # FLOAT and FRACTION both take decimals
    except ValueError:
        raise _syntax(where, f"not a valid {encoding.value} value: {cell!r}") from None


def _read_table(data: bytes) -> list[list[str]]:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise _syntax("", f"not UTF-8: {e}") from None
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise _syntax("", "empty CSV document")
    header = rows[0]
    if len(header) < 2:
        raise _syntax("line 1", "need an x column plus at least one series column")
    if any(not h.strip() for h in header):
        raise _syntax("line 1", "blank column header")
    if len(set(header)) != len(header):
        raise _syntax("line 1", "duplicate column headers")
    for i, row in enumerate(rows[1:], 2):
        if len(row) != len(header):
            raise _syntax(f"line {i}", f"expected {len(header)} cells, got {len(row)}")
    if len(rows) < 2:
        raise _syntax("", "no data rows")
    return rows


def parse_csv_series(data: bytes, x_encoding: Encoding, y_encoding: Encoding) -> list[Series]:
    """Parse an RFC-4180 table: first column is x, every other column
    is one series named by its header.  Row order is preserved."""
    rows = _read_table(data)
    header = rows[0]
    categories: list[str] = []
    xs: list[float] = []
    for i, row in enumerate(rows[1:], 2):
        cell = row[0].strip()
        if x_encoding is Encoding.TEXT:
            if not cell:
                raise _syntax(f"line {i}", "empty cell")
            if cell not in categories:
                categories.append(cell)
            xs.append(float(categories.index(cell)))
        else:
            xs.append(_parse_cell(cell, x_encoding, f"line {i}, column 1"))
    out = []
    for col, name in enumerate(header[1:], 1):
        points = tuple(
            (xs[r], _parse_cell(row[col], y_encoding, f"line {r + 2}, column {col + 1}"))
            for r, row in enumerate(rows[1:]))
        try:
            out.append(Series(name=name, points=points))
        except SpecError as e:
            raise SpecParseError("domain-violation", e.at(f"series[{col - 1}]").path,
                                 e.message) from None
    return out


def csv_categories(data: bytes) -> tuple[str, ...]:
    """Distinct first-column values in order of first appearance, for
    building a text-encoded axis around :func:`parse_csv_series`."""
    rows = _read_table(data)
    cats: list[str] = []
    for row in rows[1:]:
        cell = row[0].strip()
        if cell and cell not in cats:
            cats.append(cell)
    return tuple(cats)


def spec_from_csv(data: bytes, chart_type: ChartType, title: str,
                  x_title: str, y_title: str,
                  x_encoding: Encoding, y_encoding: Encoding,
                  legend_title: str | None = None) -> ChartSpec:
    """Assemble a full ChartSpec around CSV data, inferring domains."""
    series = parse_csv_series(data, x_encoding, y_encoding)
    if x_encoding is Encoding.TEXT:
        x_domain: tuple = csv_categories(data)
    else:
        xs = [x for s in series for x, _ in s.points]
        x_domain = _spread(min(xs), max(xs), x_encoding)
    ys = [y for s in series for _, y in s.points]
    y_domain = _spread(min(ys), max(ys), y_encoding)
    if legend_title is None and len(series) > 1:
        legend_title = "Series"
    try:
        return ChartSpec(
            chart_type=chart_type, title=title,
            x_axis=AxisSpec(title=x_title, encoding=x_encoding, domain=x_domain),
            y_axis=AxisSpec(title=y_title, encoding=y_encoding, domain=y_domain),
            series=tuple(series), legend_title=legend_title)
    except SpecError as e:
        raise SpecParseError("domain-violation", e.path, e.message) from None


def _spread(lo: float, hi: float, encoding: Encoding) -> tuple[float, float]:
    # A flat column still needs a non-degenerate axis interval.
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0
    return (lo, hi)
