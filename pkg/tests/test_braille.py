"""Grade-1 transcription: frozen oracle, round-trips, table rules."""

from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tactiplot.braille import (
    BadTable,
    BrailleMetrics,
    BrailleRun,
    MalformedBraille,
    Table,
    UnsupportedCharacter,
    back_transcribe,
    cell_from_dots,
    dots_of_cell,
    load_table,
    transcribe,
)

ORACLE_PATH = Path(__file__).parent / "data" / "braille_oracle.txt"

SUPPORTED = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
             "0123456789 .,:;-/()%",
    max_size=40,
)


def oracle_lines():
    for line in ORACLE_PATH.read_text(encoding="utf-8").splitlines():
        text, cells = line.split("\t")
        yield text, cells


def test_oracle_file_is_big_enough():
    assert sum(1 for _ in oracle_lines()) >= 100


@pytest.mark.parametrize("text,cells", list(oracle_lines()),
                         ids=lambda v: repr(v)[:24])
def test_matches_reference_transcription(text, cells):
    assert transcribe(text).cells == cells


def test_letters_example():
    assert transcribe("abc").cells == "⠁⠃⠉"


def test_digit_run_gets_one_numeric_indicator():
    assert transcribe("12").cells == "⠼⠁⠃"


def test_empty_text_gives_empty_run():
    run = transcribe("")
    assert run.cells == "" and run.source_text == ""


def test_unsupported_character_reports_position():
    with pytest.raises(UnsupportedCharacter) as err:
        transcribe("café")
    assert err.value.char == "é"
    assert err.value.position == 3


def test_back_transcribe_digits():
    assert back_transcribe("⠼⠁⠃") == "12"


def test_trailing_capital_indicator_is_malformed():
    cells = transcribe("ab").cells + "⠠"
    with pytest.raises(MalformedBraille):
        back_transcribe(cells)


def test_lone_numeric_indicator_is_malformed():
    with pytest.raises(MalformedBraille):
        back_transcribe("⠼")


@given(SUPPORTED)
@settings(max_examples=300)
def test_round_trip_identity(text):
    run = transcribe(text)
    assert back_transcribe(run) == text


@given(SUPPORTED)
def test_cells_stay_in_six_dot_range(text):
    for cell in transcribe(text).cells:
        assert 0x2800 <= ord(cell) <= 0x283F


@given(SUPPORTED)
def test_indicators_only_add_cells(text):
    letters = sum(1 for ch in text if not ch.isspace())
    run = transcribe(text)
    assert len(run) >= letters
    assert run.width_mm == len(run.cells) * 6.0


def test_metrics_are_the_layout_constants():
    metrics = BrailleMetrics()
    assert metrics.cell_width_mm == 6.0
    assert metrics.cell_height_mm == 10.0
    assert metrics.inter_cell_advance_mm == 6.0
    assert metrics.dot_diameter_mm == 1.5


def test_run_rejects_non_braille_scalars():
    with pytest.raises(ValueError):
        BrailleRun(cells="x", source_text="x")


def test_dot_helpers_invert():
    for dots in ("1", "135", "3456", "123456"):
        assert "".join(str(d) for d in dots_of_cell(cell_from_dots(dots))) == dots


def test_hyphen_ends_digit_run():
    # the second group needs its own numeric indicator
    cells = transcribe("2024-01").cells
    assert cells.count("⠼") == 2


def test_decimal_point_keeps_digit_run():
    cells = transcribe("12.5").cells
    assert cells.count("⠼") == 1


def test_letter_after_digits_takes_letter_indicator():
    with_indicator = transcribe("12a").cells
    assert "⠰" in with_indicator  # dots 5-6
    # k is outside a..j, no indicator needed
    assert "⠰" not in transcribe("12k").cells


def test_fraction_slash_inside_digits_is_one_cell():
    assert len(transcribe("1/2").cells) == 4  # indicator, 1, line, 2
    # outside a digit run the solidus is the two-cell sign
    assert len(transcribe("a/b").cells) == 4  # a, 456, 34, b


def test_space_resets_numeric_state():
    cells = transcribe("12 34").cells
    assert cells.count("⠼") == 2


CUSTOM_TABLE = "\n".join(
    f"{ch}\t{dots}" for ch, dots in [
        ("a", "1"), ("b", "12"), ("c", "14"), ("d", "145"), ("e", "15"),
        ("f", "124"), ("g", "1245"), ("h", "125"), ("i", "24"), ("j", "245"),
        ("k", "13"), ("l", "123"), ("m", "134"), ("n", "1345"), ("o", "135"),
        ("p", "1234"), ("q", "12345"), ("r", "1235"), ("s", "234"), ("t", "2345"),
        ("u", "136"), ("v", "1236"), ("w", "2456"), ("x", "1346"), ("y", "13456"),
        ("z", "1356"), (".", "46"),
    ]
)


def test_custom_table_swaps_punctuation():
    table = load_table(CUSTOM_TABLE)
    assert transcribe("a.", table).cells == "⠁" + cell_from_dots("46")
    assert back_transcribe(transcribe("Ab 12.5c", table), table) == "Ab 12.5c"


def test_table_requires_all_letters():
    with pytest.raises(BadTable, match="missing letters"):
        load_table("a\t1")


def test_table_rejects_reserved_first_cell():
    with pytest.raises(BadTable, match="reserved"):
        Table({**load_table(CUSTOM_TABLE).entries, ",": ("⠼",)})


def test_table_rejects_duplicate_cell_sequences():
    with pytest.raises(BadTable, match="share"):
        Table({**load_table(CUSTOM_TABLE).entries, ",": ("⠁",)})


def test_table_rejects_garbled_lines():
    with pytest.raises(BadTable, match="expected"):
        load_table("a 1")
    with pytest.raises(BadTable, match="invalid dot"):
        load_table("a\t19")
