"""Guideline lint: one fixture per rule, fatal paths, reports."""

import json

import pytest

from lint_fixtures import (
    VIOLATION_BUILDERS,
    corner_scatter_doc,
    thin_dash_doc,
    two_series_line_doc,
)
from tactiplot.model import Severity
from tactiplot.validate import (
    DEFAULT_RULES,
    Rule,
    RuleSet,
    UnknownRule,
    explain_rule,
    report_json,
    report_text,
    validate_svg,
)

SVG_OPEN = '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">'
MM_META = '<metadata>{"units": "mm"}</metadata>'


def mini(body):
    return f"{SVG_OPEN}{MM_META}{body}</svg>"


def test_emitted_documents_validate_clean():
    for document in (two_series_line_doc(), corner_scatter_doc()):
        assert validate_svg(document).clean


def test_fixture_surgery_alone_changes_nothing():
    # re-serialising through ElementTree must not introduce findings
    import xml.etree.ElementTree as ET

    root = ET.fromstring(two_series_line_doc())
    assert validate_svg(ET.tostring(root, encoding="unicode")).clean


@pytest.mark.parametrize("rule_id", sorted(VIOLATION_BUILDERS))
def test_each_violation_trips_exactly_its_rule(rule_id):
    report = validate_svg(VIOLATION_BUILDERS[rule_id]())
    assert [f.rule_id for f in report.findings] == [rule_id]
    finding = report.findings[0]
    assert finding.severity is Severity.ERROR
    assert finding.locus and finding.message


def test_thin_dash_segments_are_flagged_too():
    report = validate_svg(thin_dash_doc())
    assert [f.rule_id for f in report.findings] == ["R-THIN"]
    assert "dash" in report.findings[0].message


def test_non_xml_input_is_fatal():
    report = validate_svg("this is not markup")
    assert [f.rule_id for f in report.findings] == ["R-XML"]
    assert report.has_errors


def test_non_svg_root_is_fatal():
    report = validate_svg("<html><p>chart</p></html>")
    assert [f.rule_id for f in report.findings] == ["R-XML"]
    assert "html" in report.findings[0].message


def test_non_utf8_bytes_are_fatal():
    report = validate_svg(b"\xff\xfe<svg/>")
    assert [f.rule_id for f in report.findings] == ["R-XML"]


def test_missing_mm_calibration_warns():
    document = (f'{SVG_OPEN}<rect x="10" y="10" width="20" height="20" '
                'fill="none" stroke="black" stroke-width="2"/></svg>')
    report = validate_svg(document)
    assert [f.rule_id for f in report.findings] == ["R-UNITS"]
    assert report.findings[0].severity is Severity.WARNING
    assert not report.has_errors


def test_mm_width_attribute_also_calibrates():
    document = ('<svg xmlns="http://www.w3.org/2000/svg" width="100mm" '
                'height="100mm" viewBox="0 0 100 100"><rect x="1" y="1" '
                'width="20" height="20" fill="none" stroke="black" '
                'stroke-width="2"/></svg>')
    assert validate_svg(document).clean


def test_scale_transform_shrinks_effective_stroke():
    document = mini('<g transform="scale(0.5)"><polyline points="0,0 40,40" '
                    'fill="none" stroke="black" stroke-width="1.5"/></g>')
    report = validate_svg(document)
    assert [f.rule_id for f in report.findings] == ["R-THIN"]
    assert "0.75" in report.findings[0].message


def test_stroke_width_is_inherited_from_groups():
    document = mini('<g stroke="black" stroke-width="0.3"><polyline '
                    'points="0,0 40,40" fill="none"/></g>')
    report = validate_svg(document)
    assert [f.rule_id for f in report.findings] == ["R-THIN"]


def test_filled_sliver_is_thin():
    document = mini('<rect x="5" y="5" width="60" height="0.4" fill="black" '
                    'stroke="none"/>')
    report = validate_svg(document)
    assert [f.rule_id for f in report.findings] == ["R-THIN"]
    assert "filled" in report.findings[0].message


def test_unlisted_rules_do_not_run():
    only_desc = RuleSet(rules=(Rule("R-DESC", Severity.ERROR),))
    report = validate_svg(VIOLATION_BUILDERS["R-THIN"](), rules=only_desc)
    assert report.clean


def test_rule_parameters_are_respected():
    strict = RuleSet(rules=(
        Rule("R-THIN", Severity.ERROR, (("min_stroke_mm", 3.0),)),))
    report = validate_svg(two_series_line_doc(), rules=strict)
    assert report.findings
    assert {f.rule_id for f in report.findings} == {"R-THIN"}


def test_overlap_gap_parameter_widens_the_check():
    generous = RuleSet(rules=(
        Rule("R-OVERLAP", Severity.ERROR, (("min_gap_mm", 500.0),)),))
    report = validate_svg(corner_scatter_doc(), rules=generous)
    assert report.findings
    assert {f.rule_id for f in report.findings} == {"R-OVERLAP"}


def test_duplicate_rule_ids_rejected():
    with pytest.raises(ValueError):
        RuleSet(rules=(Rule("R-THIN", Severity.ERROR),
                       Rule("R-THIN", Severity.WARNING),))


def test_default_ruleset_contents():
    ids = [r.rule_id for r in DEFAULT_RULES.rules]
    assert ids == ["R-THIN", "R-BRAILLE", "R-HORIZ", "R-BBOX", "R-DESC",
                   "R-LABELCOUNT", "R-OVERLAP", "R-STYLEDUP"]
    assert DEFAULT_RULES.rule("R-THIN").param("min_stroke_mm", 0.0) == 1.0
    assert DEFAULT_RULES.rule("R-OVERLAP").param("min_gap_mm", 0.0) == 2.0
    assert DEFAULT_RULES.rule("R-NOPE") is None


def test_explain_rule_cites_a_guideline():
    text = explain_rule("R-OVERLAP")
    assert text.startswith("R-OVERLAP:")
    assert "Basis:" in text
    for rule in DEFAULT_RULES.rules:
        assert explain_rule(rule.rule_id)
    assert explain_rule("R-XML") and explain_rule("R-UNITS")
    with pytest.raises(UnknownRule):
        explain_rule("R-BOGUS")


def test_findings_are_ordered_by_document_position():
    import xml.etree.ElementTree as ET

    root = ET.fromstring(two_series_line_doc())
    for el in root.iter():
        if el.get("id") in ("tc-frame-0", "tc-series-1-path-0"):
            el.find("{http://www.w3.org/2000/svg}polyline").set(
                "stroke-width", "0.2")
    report = validate_svg(ET.tostring(root, encoding="unicode"))
    assert [f.rule_id for f in report.findings] == ["R-THIN", "R-THIN"]
    positions = [int(f.locus.split("[")[1].rstrip("]"))
                 for f in report.findings]
    assert positions == sorted(positions) and len(set(positions)) == 2


def test_report_text_formats():
    assert report_text(validate_svg(two_series_line_doc())) == "clean: no findings\n"
    dirty = report_text(validate_svg(VIOLATION_BUILDERS["R-DESC"]()))
    assert dirty.startswith("R-DESC error tc-series-0-path-0:")


def test_report_json_round_trips():
    payload = json.loads(report_json(validate_svg(VIOLATION_BUILDERS["R-BBOX"]())))
    assert payload["clean"] is False
    assert payload["findings"][0]["rule_id"] == "R-BBOX"
    assert payload["findings"][0]["severity"] == "error"
    clean = json.loads(report_json(validate_svg(two_series_line_doc())))
    assert clean == {"clean": True, "findings": []}
