"""Domain type invariants: every violation has a distinct error code."""

import dataclasses
from datetime import date

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tactiplot.model import (
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
    SceneError,
    Series,
    SpecError,
    TactileScene,
    TactileStyle,
    Z_ORDER,
    days_to_iso,
    iso_to_days,
)

X = AxisSpec(title="Hour", encoding=Encoding.INT, domain=(0.0, 10.0))
Y = AxisSpec(title="Load", encoding=Encoding.FLOAT, domain=(0.0, 100.0))
PTS = tuple((float(i), 10.0 * i) for i in range(5))


def chart(**overrides):
    base = dict(chart_type=ChartType.LINE, title="Load by hour",
                x_axis=X, y_axis=Y,
                series=(Series(name="a", points=PTS),), legend_title=None)
    base.update(overrides)
    return ChartSpec(**base)


def err_code(fn):
    with pytest.raises(SpecError) as err:
        fn()
    return err.value.code


def test_valid_chart_constructs():
    assert chart().chart_type is ChartType.LINE


def test_chart_and_axis_error_codes():
    assert err_code(lambda: chart(title="")) == "chart-title-empty"
    assert err_code(lambda: chart(series=())) == "series-empty"
    assert err_code(lambda: AxisSpec(title="", encoding=Encoding.INT,
                                     domain=(0.0, 1.0))) == "axis-title-empty"
    assert err_code(lambda: AxisSpec(title="x", encoding=Encoding.TEXT,
                                     domain=())) == "axis-domain-empty"
    assert err_code(lambda: AxisSpec(title="x", encoding=Encoding.TEXT,
                                     domain=("a", "a"))) == "axis-domain-duplicate"
    assert err_code(lambda: AxisSpec(title="x", encoding=Encoding.INT,
                                     domain=(3.0, 3.0))) == "axis-domain-order"
    assert err_code(lambda: AxisSpec(title="x", encoding=Encoding.INT,
                                     domain=(float("nan"), 1.0))) == "axis-domain-finite"
    assert err_code(lambda: AxisSpec(title="x", encoding=Encoding.INT,
                                     domain=(0.5, 2.0))) == "axis-domain-integral"


def test_series_error_codes():
    assert err_code(lambda: Series(name="", points=PTS)) == "series-name-empty"
    assert err_code(lambda: Series(name="a", points=())) == "series-points-empty"
    assert err_code(lambda: Series(name="a", points=((0.0, float("inf")),))
                    ) == "series-point-finite"
    assert err_code(lambda: Series(name="a", points=PTS, y_err=(1.0,))
                    ) == "series-yerr-length"
    assert err_code(lambda: Series(name="a", points=((0.0, 1.0),),
                                   y_err=(-0.5,))) == "series-yerr-negative"


def test_cross_field_error_codes():
    two = (Series(name="a", points=PTS), Series(name="b", points=PTS))
    assert err_code(lambda: chart(series=two)) == "legend-title-missing"
    assert err_code(lambda: chart(legend_title="Key")) == "legend-title-unexpected"
    dup = (Series(name="a", points=PTS), Series(name="a", points=PTS))
    assert err_code(lambda: chart(series=dup, legend_title="Key")
                    ) == "series-name-duplicate"
    assert err_code(lambda: chart(y_axis=AxisSpec(
        title="y", encoding=Encoding.TEXT, domain=("l", "h")))) == "y-axis-text"
    assert err_code(lambda: chart(chart_type=ChartType.BAR)) == "bar-x-not-text"
    assert err_code(lambda: chart(chart_type=ChartType.ERROR_BAR)) == "yerr-missing"
    bad = (Series(name="a", points=PTS, y_err=tuple(1.0 for _ in PTS)),)
    assert err_code(lambda: chart(series=bad)) == "yerr-unexpected"
    out = (Series(name="a", points=((99.0, 1.0),)),)
    assert err_code(lambda: chart(series=out)) == "point-outside-domain"


def test_six_series_maximum():
    many = tuple(Series(name=f"s{i}", points=PTS) for i in range(7))
    assert err_code(lambda: chart(series=many, legend_title="Key")
                    ) == "series-overflow"


def test_style_error_codes():
    assert err_code(lambda: TactileStyle(stroke_width_mm=0.5)) == "style-thin-stroke"
    assert err_code(lambda: TactileStyle(stroke_width_mm=1.5,
                                         dash_pattern=((0.5, 2.0),))) == "style-dash-on"
    assert err_code(lambda: TactileStyle(stroke_width_mm=1.5,
                                         dash_pattern=((1.0, 1.0),))) == "style-dash-off"


def test_types_are_immutable():
    spec = chart()
    with pytest.raises(dataclasses.FrozenInstanceError):
        spec.title = "other"
    with pytest.raises(dataclasses.FrozenInstanceError):
        spec.x_axis.title = "other"


DAY_EXAMPLES = [
    (19723, "2024-01-01"),
    (0, "1970-01-01"),
    (-1, "1969-12-31"),
    (18262, "2020-01-01"),
]


@pytest.mark.parametrize("days,iso", DAY_EXAMPLES)
def test_day_conversion_against_civil_dates(days, iso):
    assert days_to_iso(days) == iso
    assert iso_to_days(iso) == days


@given(st.integers(min_value=-20000, max_value=40000))
def test_day_conversion_matches_datetime(days):
    expected = date(1970, 1, 1).toordinal() + days
    assert date.fromisoformat(days_to_iso(days)).toordinal() == expected
    assert iso_to_days(days_to_iso(days)) == days


STYLE = TactileStyle(stroke_width_mm=1.5)


def element(role, geometry, classes=("data",), description="something"):
    return SceneElement(role=role, geometry=geometry, style=STYLE,
                        description=description, source_ref=None,
                        classes=classes)


def scene_code(elements):
    with pytest.raises(SceneError) as err:
        TactileScene(width_mm=297.0, height_mm=210.0, elements=elements,
                     title="t", spec_json="{}")
    return err.value.code


def test_scene_rejects_out_of_bounds_geometry():
    bad = element(Role.FRAME, Polyline(points=((0.0, 0.0), (400.0, 0.0))))
    assert scene_code((bad,)) == "canvas-overflow"


def test_scene_rejects_z_order_regressions():
    late = element(Role.BRAILLE_TEXT,
                   BrailleRunGeom(x=20.0, y=20.0, cells="⠁", text="a"))
    early = element(Role.FRAME, Polyline(points=((10.0, 10.0), (20.0, 10.0))))
    box = element(Role.TEXT_BBOX, Rect(x=18.0, y=18.0, width=10.0, height=13.0))
    assert scene_code((late, box, early)) == "paint-order"


def test_scene_requires_bbox_around_braille():
    run = element(Role.BRAILLE_TEXT,
                  BrailleRunGeom(x=20.0, y=20.0, cells="⠁", text="a"))
    assert scene_code((run,)) == "text-bbox-pairing"


def test_scene_requires_descriptions():
    with pytest.raises(SceneError) as err:
        element(Role.DATA_MARK, MarkerGeom(x=50.0, y=50.0, diameter_mm=5.0),
                description="")
    assert err.value.code == "element-description-empty"


def test_z_order_covers_every_role():
    assert set(Z_ORDER) == set(Role)
    assert Z_ORDER[Role.FRAME] < Z_ORDER[Role.TICK] < Z_ORDER[Role.DATA_MARK]
    assert Z_ORDER[Role.TEXT_BBOX] < Z_ORDER[Role.BRAILLE_TEXT] < Z_ORDER[Role.LEGEND_ITEM]


def test_enums_are_exhaustive():
    assert {c.value for c in ChartType} == {"line", "bar", "scatter", "error_bar"}
    assert {e.value for e in Encoding} == {"int", "float", "fraction", "datetime", "text"}
