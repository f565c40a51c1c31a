"""SVG emission: structure, determinism, ids, variants."""

import json
import xml.etree.ElementTree as ET

import pytest

from tactiplot.model import (
    AxisSpec,
    ChartSpec,
    ChartType,
    Encoding,
    Series,
)
from tactiplot.pipeline import compile_scene, convert_spec
from tactiplot.svg import EmitConfig, emit_svg, fmt

SVG_NS = "{http://www.w3.org/2000/svg}"


def line_spec(title="Load by hour"):
    return ChartSpec(
        chart_type=ChartType.LINE, title=title,
        x_axis=AxisSpec(title="Hour", encoding=Encoding.INT, domain=(0.0, 100.0)),
        y_axis=AxisSpec(title="Load", encoding=Encoding.FLOAT, domain=(0.0, 75.0)),
        series=(Series(name="alpha", points=((0.0, 10.0), (50.0, 40.0), (100.0, 25.0))),
                Series(name="beta", points=((0.0, 60.0), (100.0, 5.0)))),
        legend_title="Key")


def bar_spec():
    return ChartSpec(
        chart_type=ChartType.BAR, title="Output by group",
        x_axis=AxisSpec(title="Group", encoding=Encoding.TEXT,
                        domain=("g0", "g1", "g2")),
        y_axis=AxisSpec(title="Output", encoding=Encoding.INT, domain=(0.0, 30.0)),
        series=(Series(name="a", points=((0.0, 10.0), (1.0, 20.0), (2.0, 15.0))),
                Series(name="b", points=((0.0, 5.0), (1.0, 25.0), (2.0, 8.0))),
                Series(name="c", points=((0.0, 12.0), (1.0, 3.0), (2.0, 22.0)))),
        legend_title="Key")


def parse(document):
    return ET.fromstring(document)


def all_ids(root):
    return [el.get("id") for el in root.iter() if el.get("id") is not None]


def test_fmt_is_minimal_three_place_decimal():
    assert fmt(1.0) == "1"
    assert fmt(0.5) == "0.5"
    assert fmt(10.100) == "10.1"
    assert fmt(1.2345) == "1.234"
    assert fmt(-0.0001) == "0"
    assert fmt(-3.25) == "-3.25"


def test_emit_config_rejects_bad_values():
    with pytest.raises(ValueError):
        EmitConfig(variant="print")
    with pytest.raises(ValueError):
        EmitConfig(id_prefix="9up")
    with pytest.raises(ValueError):
        EmitConfig(id_prefix="")


def test_root_uses_viewbox_not_pixels():
    root = parse(convert_spec(line_spec()))
    assert root.tag == f"{SVG_NS}svg"
    assert root.get("viewBox") == "0 0 297 210"
    assert root.get("width") is None
    assert root.get("height") is None


def test_document_head_has_title_desc_metadata():
    spec = line_spec()
    root = parse(convert_spec(spec))
    children = list(root)
    assert children[0].tag == f"{SVG_NS}title"
    assert children[0].text == "Load by hour"
    assert children[1].tag == f"{SVG_NS}desc"
    assert "Load by hour" in children[1].text
    meta = json.loads(root.find(f"{SVG_NS}metadata").text)
    assert meta["units"] == "mm"
    assert meta["variant"] == "tactile"
    assert meta["spec"]["title"] == "Load by hour"
    assert [s["name"] for s in meta["spec"]["series"]] == ["alpha", "beta"]


def test_emission_is_byte_stable():
    spec = line_spec()
    scene = compile_scene(spec)
    assert emit_svg(scene) == emit_svg(scene)
    assert convert_spec(spec) == convert_spec(spec)


def test_top_level_groups_in_paint_order():
    root = parse(convert_spec(line_spec()))
    groups = [el.get("id") for el in root.findall(f"{SVG_NS}g")]
    assert groups == ["tc-frame", "tc-axes", "tc-data", "tc-labels", "tc-legend"]
    data = root.find(f"{SVG_NS}g[@id='tc-data']")
    series = [el.get("id") for el in data.findall(f"{SVG_NS}g")]
    assert series == ["tc-series-0", "tc-series-1"]


def test_ids_are_unique_and_prefixed():
    root = parse(convert_spec(line_spec()))
    ids = all_ids(root)
    assert len(ids) == len(set(ids))
    assert all(i.startswith("tc-") for i in ids)


def test_custom_id_prefix_applies_everywhere():
    scene = compile_scene(line_spec())
    document = emit_svg(scene, EmitConfig(id_prefix="fig1"))
    ids = all_ids(parse(document))
    assert ids and all(i.startswith("fig1-") for i in ids)
    assert "tc-" not in document


def test_every_rendered_group_carries_title_and_desc():
    root = parse(convert_spec(line_spec()))
    for g in root.iter(f"{SVG_NS}g"):
        kids = list(g)
        if any(k.tag == f"{SVG_NS}g" for k in kids):
            continue  # structural containers hold groups, not prose
        assert kids[0].tag == f"{SVG_NS}title"
        assert kids[1].tag == f"{SVG_NS}desc"
        assert kids[1].text


def test_braille_runs_become_dot_circles():
    root = parse(convert_spec(line_spec()))
    labels = root.find(f"{SVG_NS}g[@id='tc-labels']")
    title_g = labels.find(f"{SVG_NS}g[@id='tc-title-0']")
    circles = title_g.findall(f"{SVG_NS}circle")
    assert circles
    for c in circles:
        assert c.get("r") == "0.75"
        assert c.get("fill") == "black"
    # no text glyphs anywhere in the tactile variant
    assert root.find(f".//{SVG_NS}text") is None


def test_hatch_patterns_emitted_only_when_used():
    line_doc = convert_spec(line_spec())
    assert "<defs>" not in line_doc and "url(#" not in line_doc

    bar_doc = convert_spec(bar_spec())
    bar_root = parse(bar_doc)
    defs = bar_root.find(f"{SVG_NS}defs")
    assert defs is not None
    pattern_ids = {p.get("id") for p in defs.findall(f"{SVG_NS}pattern")}
    assert pattern_ids
    used = {v[5:-1] for el in bar_root.iter()
            for v in [el.get("fill", "")] if v.startswith("url(#")}
    assert used == pattern_ids


def test_strokes_are_black_in_tactile_variant():
    root = parse(convert_spec(line_spec()))
    strokes = {el.get("stroke") for el in root.iter()
               if el.get("stroke") not in (None, "none")}
    assert strokes == {"black"}


def test_visual_variant_swaps_dots_for_text_and_color():
    scene = compile_scene(line_spec())
    document = emit_svg(scene, EmitConfig(variant="visual"))
    root = parse(document)
    meta = json.loads(root.find(f"{SVG_NS}metadata").text)
    assert meta["variant"] == "visual"
    texts = [t.text for t in root.iter(f"{SVG_NS}text")]
    assert "Load by hour" in texts and "alpha" in texts
    assert root.find(f".//{SVG_NS}circle") is None  # no braille dots
    assert not [i for i in all_ids(root) if i.endswith("-box-0")]
    colors = {el.get("stroke") for el in root.iter(f"{SVG_NS}polyline")}
    assert len(colors - {"#444444", None}) == 2  # one color per series


def test_variants_share_element_ids():
    scene = compile_scene(line_spec())
    tactile_ids = set(all_ids(parse(emit_svg(scene))))
    visual_ids = set(all_ids(parse(emit_svg(scene, EmitConfig(variant="visual")))))
    assert visual_ids <= tactile_ids
    assert all("-box-" in i for i in tactile_ids - visual_ids)


def test_compact_mode_is_single_line():
    scene = compile_scene(line_spec())
    document = emit_svg(scene, EmitConfig(pretty=False))
    assert document.endswith("\n") and document.count("\n") == 1
    assert parse(document).get("viewBox") == "0 0 297 210"


def test_markup_characters_in_descriptions_are_escaped():
    import dataclasses

    scene = compile_scene(line_spec())
    patched = [dataclasses.replace(scene.elements[0], description="a & b < c")]
    patched.extend(scene.elements[1:])
    scene = dataclasses.replace(scene, elements=tuple(patched))
    document = emit_svg(scene)
    assert "a &amp; b &lt; c" in document
    descs = [d.text for d in parse(document).iter(f"{SVG_NS}desc")]
    assert "a & b < c" in descs


def test_dash_patterns_serialize_in_millimetres():
    root = parse(convert_spec(line_spec()))
    data = root.find(f"{SVG_NS}g[@id='tc-data']")
    dashes = [el.get("stroke-dasharray") for el in data.iter(f"{SVG_NS}polyline")
              if el.get("stroke-dasharray")]
    assert dashes  # second line series is dashed
    for d in dashes:
        parts = [float(p) for p in d.split()]
        assert parts and all(p > 0 for p in parts)
