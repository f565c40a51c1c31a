"""Seeded synthetic chart corpus.

Every sample is fully determined by (root seed, category, index): the
per-sample seed is the first 8 bytes of a SHA-256 over those three, so
any single sample can be regenerated in isolation.  Values are rounded
to 4 decimal places before they enter a ChartSpec, which keeps the
serialized corpus byte-identical across platforms.  Each tactile
output is linted before it is written; a finding means a generator bug
and aborts the run.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from random import Random

from .ingest import serialize_spec
from .model import AxisSpec, ChartSpec, ChartType, Encoding, Series, TactiplotError
from .pipeline import PipelineConfig, emit_dataset_pair
from .validate import DEFAULT_RULES, validate_svg
from .version import VERSION

VALUE_MODELS = ("linear-trend", "random-walk", "seasonal", "piecewise")


class GenerationError(TactiplotError):
    """A generated sample failed its own validation; this is a bug."""


@dataclass(frozen=True)
class GenConfig:
    n_per_category: int = 10
    seed: int = 0
    categories: tuple[ChartType, ...] = (ChartType.LINE, ChartType.BAR,
                                         ChartType.SCATTER, ChartType.ERROR_BAR)
    series_count_range: tuple[int, int] = (1, 4)
    points_range: tuple[int, int] = (5, 60)
    scatter_points_range: tuple[int, int] = (50, 500)
    value_models: tuple[str, ...] = VALUE_MODELS

    def __post_init__(self):
        if self.n_per_category < 1:
            raise ValueError("n_per_category must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if not self.categories or len(set(self.categories)) != len(self.categories):
            raise ValueError("categories must be a non-empty set of chart types")
        for name, rng in (("series_count_range", self.series_count_range),
                          ("points_range", self.points_range),
                          ("scatter_points_range", self.scatter_points_range)):
            if rng[0] < 1 or rng[0] > rng[1]:
                raise ValueError(f"{name} must be an ordered positive range")
        if not self.value_models or any(m not in VALUE_MODELS for m in self.value_models):
            raise ValueError(f"value_models must be a subset of {VALUE_MODELS}")


def sample_seed(root_seed: int, category: ChartType, index: int) -> int:
    """Stable 64-bit per-sample seed."""
    digest = hashlib.sha256(f"{root_seed}:{category.value}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


# --- vocabulary (every character must be transcribable) ---------------

_SUBJECTS = ("Revenue", "Rainfall", "Latency", "Throughput", "Demand",
             "Pressure", "Attendance", "Yield", "Traffic", "Savings")
_QUALIFIERS = ("Monthly", "Daily", "Observed", "Projected", "Regional",
               "Baseline", "Adjusted", "Sampled")
_Y_UNITS = ("mm", "units", "points", "percent", "score", "index")
_X_TITLES = {
    Encoding.INT: ("Week", "Trial", "Batch", "Cycle", "Round"),
    Encoding.FLOAT: ("Load factor", "Dose", "Scale", "Input level"),
    Encoding.DATETIME: ("Date", "Day", "Reading date"),
    Encoding.FRACTION: ("Share", "Split", "Portion"),
    Encoding.TEXT: ("Region", "Team", "Product", "Site"),
}
_CATEGORY_POOLS = (
    ("North", "South", "East", "West", "Central", "Coast", "Upland", "Metro"),
    ("Alpha", "Bravo", "Delta", "Echo", "Kilo", "Sierra", "Tango", "Victor"),
    ("Anvil", "Bolt", "Crate", "Dynamo", "Easel", "Flint", "Gable", "Hollis"),
)
_SERIES_POOLS = (
    ("Alpha", "Bravo", "Charlie", "Delta"),
    ("North", "South", "East", "West"),
    ("Control", "Trial A", "Trial B", "Pilot"),
    ("Store 1", "Store 2", "Store 3", "Store 4"),
)
_LEGEND_TITLES = ("Series", "Group", "Cohort", "Source")


def _triangle(u: float) -> float:
    """Periodic triangle wave of ``u`` in cycles, range 0..1."""
    frac = u - math.floor(u)
    return 1.0 - abs(2.0 * frac - 1.0)


def _values(rng: Random, model: str, n: int) -> list[float]:
    base = rng.uniform(10.0, 500.0)
    spread = base * rng.uniform(0.2, 0.8)
    if model == "linear-trend":
        slope = rng.uniform(-1.0, 1.0) * spread / max(n - 1, 1)
        return [base + slope * i + rng.uniform(-0.1, 0.1) * spread for i in range(n)]
    if model == "random-walk":
        vals = [base]
        for _ in range(n - 1):
            vals.append(vals[-1] + rng.uniform(-1.0, 1.0) * spread / 8)
        return vals
    if model == "seasonal":
        period = rng.uniform(max(n / 6, 2.0), max(n / 2, 3.0))
        phase = rng.random()
        return [base + spread * _triangle(i / period + phase)
                + rng.uniform(-0.05, 0.05) * spread for i in range(n)]
    # piecewise: 2 or 3 linear segments with independent slopes
    cuts = sorted(rng.sample(range(1, max(n - 1, 2)), k=min(rng.randint(1, 2), n - 2))
                  if n > 3 else [])
    vals, level = [], base
    slope = rng.uniform(-1.0, 1.0) * spread / max(n - 1, 1)
    for i in range(n):
        if i in cuts:
            slope = rng.uniform(-1.0, 1.0) * spread / max(n - 1, 1)
        vals.append(level)
        level += slope
    return vals


def _round4(vals: list[float]) -> list[float]:
    return [round(v, 4) for v in vals]


def _x_grid(rng: Random, encoding: Encoding, n: int) -> list[float]:
    if encoding is Encoding.INT:
        start = rng.randint(0, 50)
        stride = rng.randint(1, 5)
        return [float(start + stride * i) for i in range(n)]
    if encoding is Encoding.DATETIME:
        first = date(rng.randint(2015, 2024), rng.randint(1, 12), rng.randint(1, 28))
        start = (first - date(1970, 1, 1)).days
        stride = rng.choice((1, 7, 30))
        return [float(start + stride * i) for i in range(n)]
    if encoding is Encoding.FRACTION:
        q = rng.choice((2, 4, 8))
        first = rng.randint(0, 4)
        return [round((first + i) / q, 4) for i in range(n)]
    dx = round(rng.uniform(0.5, 5.0), 2)
    start = round(rng.uniform(0.0, 20.0), 2)
    return [round(start + dx * i, 4) for i in range(n)]


def _y_axis(rng: Random, all_values: list[float], encoding: Encoding,
            lo_zero: bool = False) -> tuple[AxisSpec, str]:
    title = f"{rng.choice(_SUBJECTS)} ({rng.choice(_Y_UNITS)})"
    mn, mx = min(all_values), max(all_values)
    if encoding is Encoding.INT:
        pad = max(1, round((mx - mn) * 0.1))
        lo = 0.0 if lo_zero else float(math.floor(mn) - pad)
        hi = float(math.ceil(mx) + pad)
    else:
        pad = max((mx - mn) * 0.1, 0.5)
        lo = 0.0 if lo_zero else round(mn - pad, 4)
        hi = round(mx + pad, 4)
    return AxisSpec(title=title, encoding=encoding, domain=(lo, hi)), title


def _series_names(rng: Random, count: int) -> list[str]:
    return list(rng.choice(_SERIES_POOLS)[:count])


def _title(rng: Random, x_title: str) -> str:
    kind = rng.randint(0, 2)
    subject = rng.choice(_SUBJECTS)
    if kind == 0:
        return f"{rng.choice(_QUALIFIERS)} {subject.lower()}"
    if kind == 1:
        return f"{subject} by {x_title.lower()}"
    return f"{rng.choice(_QUALIFIERS)} {subject.lower()} by {x_title.lower()}"


def _gen_line(rng: Random, cfg: GenConfig) -> ChartSpec:
    n = rng.randint(*cfg.points_range)
    x_enc = rng.choice((Encoding.INT, Encoding.FLOAT, Encoding.DATETIME,
                        Encoding.FRACTION))
    y_enc = rng.choice((Encoding.FLOAT, Encoding.FLOAT, Encoding.INT))
    xs = _x_grid(rng, x_enc, n)
    count = rng.randint(cfg.series_count_range[0], min(cfg.series_count_range[1], 4))
    names = _series_names(rng, count)
    rows = []
    for name in names:
        ys = _values(rng, rng.choice(cfg.value_models), n)
        ys = [float(round(v)) for v in ys] if y_enc is Encoding.INT else _round4(ys)
        rows.append(Series(name=name, points=tuple(zip(xs, ys))))
    y_axis, _ = _y_axis(rng, [y for s in rows for _, y in s.points], y_enc)
    x_title = rng.choice(_X_TITLES[x_enc])
    return ChartSpec(
        chart_type=ChartType.LINE, title=_title(rng, x_title),
        x_axis=AxisSpec(title=x_title, encoding=x_enc, domain=(xs[0], xs[-1])),
        y_axis=y_axis, series=tuple(rows),
        legend_title=rng.choice(_LEGEND_TITLES) if count > 1 else None)


def _gen_bar(rng: Random, cfg: GenConfig) -> ChartSpec:
    n_cat = rng.randint(3, 8)
    cats = tuple(rng.choice(_CATEGORY_POOLS)[:n_cat])
    count = rng.randint(cfg.series_count_range[0], min(cfg.series_count_range[1], 3))
    y_enc = rng.choice((Encoding.FLOAT, Encoding.INT))
    top = rng.uniform(20.0, 1000.0)
    rows = []
    for name in _series_names(rng, count):
        ys = [rng.uniform(top / 8, top) for _ in range(n_cat)]
        ys = [float(round(v)) for v in ys] if y_enc is Encoding.INT else _round4(ys)
        rows.append(Series(name=name, points=tuple((float(i), y) for i, y in enumerate(ys))))
    all_y = [y for s in rows for _, y in s.points]
    if y_enc is Encoding.INT:
        hi = float(math.ceil(max(all_y) * 1.15))
    else:
        hi = round(max(all_y) * 1.15, 4)
    x_title = rng.choice(_X_TITLES[Encoding.TEXT])
    return ChartSpec(
        chart_type=ChartType.BAR, title=_title(rng, x_title),
        x_axis=AxisSpec(title=x_title, encoding=Encoding.TEXT, domain=cats),
        y_axis=AxisSpec(title=f"{rng.choice(_SUBJECTS)} ({rng.choice(_Y_UNITS)})",
                        encoding=y_enc, domain=(0.0, hi)),
        series=tuple(rows),
        legend_title=rng.choice(_LEGEND_TITLES) if count > 1 else None)


def _gen_scatter(rng: Random, cfg: GenConfig) -> ChartSpec:
    n = rng.randint(*cfg.scatter_points_range)
    x_enc = rng.choice((Encoding.FLOAT, Encoding.FLOAT, Encoding.INT))
    count = rng.randint(cfg.series_count_range[0], min(cfg.series_count_range[1], 3))
    if x_enc is Encoding.INT:
        x_lo = float(rng.randint(-50, 50))
        x_hi = x_lo + rng.randint(20, 200)
    else:
        x_lo = round(rng.uniform(-50.0, 50.0), 2)
        x_hi = round(x_lo + rng.uniform(10.0, 200.0), 2)
    rows = []
    for name in _series_names(rng, count):
        slope = rng.uniform(-2.0, 2.0)
        base = rng.uniform(10.0, 200.0)
        noise = rng.uniform(5.0, 60.0)
        pts = []
        for _ in range(n):
            x = float(rng.randint(int(x_lo), int(x_hi))) if x_enc is Encoding.INT \
                else round(rng.uniform(x_lo, x_hi), 4)
            y = round(base + slope * (x - x_lo) + rng.uniform(-noise, noise), 4)
            pts.append((x, y))
        rows.append(Series(name=name, points=tuple(pts)))
    y_axis, _ = _y_axis(rng, [y for s in rows for _, y in s.points], Encoding.FLOAT)
    x_title = rng.choice(_X_TITLES[x_enc])
    return ChartSpec(
        chart_type=ChartType.SCATTER, title=_title(rng, x_title),
        x_axis=AxisSpec(title=x_title, encoding=x_enc, domain=(x_lo, x_hi)),
        y_axis=y_axis, series=tuple(rows),
        legend_title=rng.choice(_LEGEND_TITLES) if count > 1 else None)


# Nice steps whose fifth is still exact: s/5 stays integral (or two-decimal).
_ERRORBAR_STEPS = {
    Encoding.INT: (5.0, 10.0, 25.0, 50.0, 100.0, 250.0, 500.0),
    Encoding.DATETIME: (5.0, 10.0, 25.0, 50.0, 100.0, 250.0, 500.0),
    Encoding.FLOAT: (0.25, 0.5, 1.0, 2.5, 5.0, 10.0),
}


def _errorbar_grid(rng: Random, encoding: Encoding,
                   n_lo: int, n_hi: int) -> tuple[list[float], float, float]:
    """X grid plus a domain whose tick frame the grid can never overflow.

    An arbitrary domain may force the axis labeler onto a step that
    overshoots the data span by up to 3x, cramming the per-point marks
    below the minimum touch gap.  Anchoring the domain to [k*s, k*s + 3*s]
    pins the four ticks exactly on s, and placing points on fifths of s
    keeps neighboring marks at least a fifteenth of the plot width apart.
    """
    s = rng.choice(_ERRORBAR_STEPS[encoding])
    if encoding is Encoding.DATETIME:
        # keep the frame inside 2010..2026 so labels stay plausible dates
        k_lo = math.ceil(14610 / s)
        k_hi = math.floor((20454 - 3 * s) / s)
        k = rng.randint(k_lo, k_hi)
    else:
        k = rng.randint(0, 20)
    t0 = round(k * s, 4)
    unit = s / 5.0
    stride = rng.choice((1, 1, 2, 3))
    n = rng.randint(n_lo, min(n_hi, 1 + 15 // stride))
    offset = rng.randint(0, 15 - (n - 1) * stride)
    xs = [round(t0 + (offset + i * stride) * unit, 4) for i in range(n)]
    return xs, t0, round(t0 + 3 * s, 4)


def _gen_errorbar(rng: Random, cfg: GenConfig) -> ChartSpec:
    n_lo = max(cfg.points_range[0], 5)
    n_hi = min(cfg.points_range[1], 16)
    x_enc = rng.choice((Encoding.INT, Encoding.FLOAT, Encoding.DATETIME))
    count = rng.randint(cfg.series_count_range[0], min(cfg.series_count_range[1], 2))
    xs, x_lo, x_hi = _errorbar_grid(rng, x_enc, n_lo, n_hi)
    n = len(xs)
    rows = []
    for name in _series_names(rng, count):
        ys = _round4(_values(rng, rng.choice(cfg.value_models), n))
        spread = max(ys) - min(ys) or abs(ys[0]) or 1.0
        errs = tuple(round(rng.uniform(0.02, 0.1) * spread, 4) for _ in range(n))
        rows.append(Series(name=name, points=tuple(zip(xs, ys)),
                           y_err=tuple(max(e, 0.0001) for e in errs)))
    reach = [y + e for s in rows for (_, y), e in zip(s.points, s.y_err)]
    reach += [y - e for s in rows for (_, y), e in zip(s.points, s.y_err)]
    y_axis, _ = _y_axis(rng, reach, Encoding.FLOAT)
    x_title = rng.choice(_X_TITLES[x_enc])
    return ChartSpec(
        chart_type=ChartType.ERROR_BAR, title=_title(rng, x_title),
        x_axis=AxisSpec(title=x_title, encoding=x_enc, domain=(x_lo, x_hi)),
        y_axis=y_axis, series=tuple(rows),
        legend_title=rng.choice(_LEGEND_TITLES) if count > 1 else None)


_GENERATORS = {
    ChartType.LINE: _gen_line,
    ChartType.BAR: _gen_bar,
    ChartType.SCATTER: _gen_scatter,
    ChartType.ERROR_BAR: _gen_errorbar,
}


def gen_spec(category: ChartType, seed: int, cfg: GenConfig = GenConfig()) -> ChartSpec:
    """One random valid ChartSpec, fully determined by (category, seed)."""
    return _GENERATORS[category](Random(seed), cfg)


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    category: str
    seed_used: int
    spec_path: str
    tactile_path: str
    visual_path: str
    checksums: tuple[tuple[str, str], ...]  # (file kind, sha256)


@dataclass(frozen=True)
class DatasetManifest:
    generator_version: str
    root_seed: int
    entries: tuple[ManifestEntry, ...]

    def __post_init__(self):
        ids = [e.id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("manifest ids must be unique")

    def to_document(self) -> dict:
        return {
            "generator_version": self.generator_version,
            "root_seed": self.root_seed,
            "entries": [
                {"id": e.id, "category": e.category, "seed_used": e.seed_used,
                 "spec_path": e.spec_path, "tactile_path": e.tactile_path,
                 "visual_path": e.visual_path, "checksums": dict(e.checksums)}
                for e in self.entries],
        }


def _sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def gen_dataset(cfg: GenConfig, out_dir: str | Path,
                pipeline: PipelineConfig = PipelineConfig()) -> DatasetManifest:
    """Write the full corpus and its manifest; returns the manifest.

    Every tactile document is linted before anything is written for
    that sample; an error finding aborts the whole run with the sample
    id and the findings, because a dirty sample means a generator bug.
    """
    root = Path(out_dir)
    entries = []
    for category in cfg.categories:
        cat_dir = root / category.value
        cat_dir.mkdir(parents=True, exist_ok=True)
        for i in range(cfg.n_per_category):
            seed = sample_seed(cfg.seed, category, i)
            sample_id = f"{category.value}-{i:04d}"
            spec = gen_spec(category, seed, cfg)
            tactile, visual, _ = emit_dataset_pair(spec, pipeline)
            report = validate_svg(tactile, DEFAULT_RULES)
            if report.has_errors:
                details = "; ".join(f"{f.rule_id} {f.locus}: {f.message}"
                                    for f in report.findings)
                raise GenerationError(
                    f"sample {sample_id} (seed {seed}) failed validation: {details}")
            spec_doc = serialize_spec(spec, indent=2)
            files = {"spec": (f"{sample_id}.spec.json", spec_doc),
                     "tactile": (f"{sample_id}.tactile.svg", tactile),
                     "visual": (f"{sample_id}.visual.svg", visual)}
            checksums = []
            paths = {}
            for kind, (name, text) in files.items():
                (cat_dir / name).write_text(text, encoding="utf-8")
                paths[kind] = f"{category.value}/{name}"
                checksums.append((kind, _sha256_text(text)))
            entries.append(ManifestEntry(
                id=sample_id, category=category.value, seed_used=seed,
                spec_path=paths["spec"], tactile_path=paths["tactile"],
                visual_path=paths["visual"], checksums=tuple(checksums)))
    manifest = DatasetManifest(generator_version=VERSION, root_seed=cfg.seed,
                               entries=tuple(entries))
    (root / "manifest.json").write_text(
        json.dumps(manifest.to_document(), indent=2) + "\n", encoding="utf-8")
    return manifest
