"""tactiplot: compile chart specs into tactile-accessible SVG.

The pipeline is ingest -> simplify -> braille -> layout -> emit, with
a guideline validator closing the loop: every document the pipeline
produces passes the package's own lint.
"""

from .braille import BrailleRun, back_transcribe, load_table, transcribe
from .client import EndpointConfig, ExtractionResult, extract_metadata
from .datagen import DatasetManifest, GenConfig, gen_dataset, gen_spec
from .ingest import (
    SpecParseError,
    parse_csv_series,
    parse_spec,
    serialize_spec,
    spec_from_csv,
    spec_from_document,
    spec_to_document,
)
from .layout import CanvasConfig, layout_scene
from .model import (
    AxisSpec,
    ChartSpec,
    ChartType,
    Encoding,
    Finding,
    Hatch,
    Marker,
    Series,
    Severity,
    TactileScene,
    TactileStyle,
    TactiplotError,
    TickLabel,
    ValidationReport,
)
from .pipeline import (
    PipelineConfig,
    compile_scene,
    compile_visual_scene,
    convert_spec,
    emit_dataset_pair,
)
from .simplify import (
    SimplifyConfig,
    assign_styles,
    decimate_scatter,
    format_label,
    reduce_axis_labels,
    smooth_polyline,
)
from .svg import EmitConfig, emit_svg
from .validate import DEFAULT_RULES, RuleSet, explain_rule, validate_svg
from .version import VERSION

__version__ = VERSION

__all__ = [
    "AxisSpec",
    "BrailleRun",
    "CanvasConfig",
    "ChartSpec",
    "ChartType",
    "DatasetManifest",
    "DEFAULT_RULES",
    "EmitConfig",
    "Encoding",
    "EndpointConfig",
    "ExtractionResult",
    "Finding",
    "GenConfig",
    "Hatch",
    "Marker",
    "PipelineConfig",
    "RuleSet",
    "Series",
    "Severity",
    "SimplifyConfig",
    "SpecParseError",
    "TactileScene",
    "TactileStyle",
    "TactiplotError",
    "TickLabel",
    "ValidationReport",
    "VERSION",
    "assign_styles",
    "back_transcribe",
    "compile_scene",
    "compile_visual_scene",
    "convert_spec",
    "decimate_scatter",
    "emit_dataset_pair",
    "emit_svg",
    "explain_rule",
    "extract_metadata",
    "format_label",
    "gen_dataset",
    "gen_spec",
    "layout_scene",
    "load_table",
    "parse_csv_series",
    "parse_spec",
    "reduce_axis_labels",
    "serialize_spec",
    "smooth_polyline",
    "spec_from_csv",
    "spec_from_document",
    "spec_to_document",
    "transcribe",
    "validate_svg",
]
