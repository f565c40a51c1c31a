"""Uncontracted (Grade 1) six-dot braille transcription.

Text is transcribed letter by letter into Unicode braille patterns
(U+2800..U+283F).  Digit sequences are prefixed with the numeric
indicator (dots 3456) and written with the a..j cells; capitals take
the capital indicator (dot 6); a lowercase a..j letter directly after
a digit run takes the letter indicator (dots 56) so the run stays
unambiguous and :func:`back_transcribe` can invert it exactly.

The character table is data, not code: :data:`DEFAULT_TABLE_TEXT` below
is in the same two-column ``char<TAB>dot-numbers`` format accepted from
user-supplied table files (multi-cell signs separate cells with
spaces), so alternative national tables can be dropped in via
:func:`load_table`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    BRAILLE_CELL_ADVANCE_MM,
    BRAILLE_DOT_DIAMETER_MM,
    BRAILLE_LINE_HEIGHT_MM,
    TactiplotError,
)

_DOT_BITS = {"1": 0x01, "2": 0x02, "3": 0x04, "4": 0x08, "5": 0x10, "6": 0x20}

#: Dot centre offsets (mm) within a cell, keyed by dot number.  Columns
#: sit 2.5 mm apart centred in the 6 mm advance; rows 2.5 mm apart.
DOT_OFFSETS_MM = {
    1: (1.75, 2.5), 2: (1.75, 5.0), 3: (1.75, 7.5),
    4: (4.25, 2.5), 5: (4.25, 5.0), 6: (4.25, 7.5),
}

SPACE_CELL = "⠀"


def cell_from_dots(dots: str) -> str:
    """Map a dot-number string like ``"345"`` to its Unicode cell."""
    bits = 0
    for d in dots:
        if d not in _DOT_BITS:
            raise ValueError(f"invalid dot number {d!r}")
        bits |= _DOT_BITS[d]
    return chr(0x2800 + bits)


def dots_of_cell(cell: str) -> tuple[int, ...]:
    """Inverse of :func:`cell_from_dots`, as sorted dot numbers."""
    bits = ord(cell) - 0x2800
    if not 0 <= bits <= 0x3F:
        raise ValueError(f"not a 6-dot braille cell: {cell!r}")
    return tuple(d for d in range(1, 7) if bits & _DOT_BITS[str(d)])


# Structural cells fixed by the transcription rules (not table-driven).
NUMERIC_INDICATOR = cell_from_dots("3456")
CAPITAL_INDICATOR = cell_from_dots("6")
LETTER_INDICATOR = cell_from_dots("56")
FRACTION_LINE = cell_from_dots("34")

DEFAULT_TABLE_TEXT = """\
# Grade-1 letter cells: the first decade a..j uses the upper four dots,
# k..t adds dot 3, u..z adds dots 3 and 6 (w is the historic exception).
a	1
b	12
c	14
d	145
e	15
f	124
g	1245
h	125
i	24
j	245
k	13
l	123
m	134
n	1345
o	135
p	1234
q	12345
r	1235
s	234
t	2345
u	136
v	1236
w	2456
x	1346
y	13456
z	1356
,	2
;	23
:	25
.	256
-	36
(	5 126
)	5 345
%	46 356
/	456 34
"""

_DIGIT_LETTERS = {"1": "a", "2": "b", "3": "c", "4": "d", "5": "e",
                  "6": "f", "7": "g", "8": "h", "9": "i", "0": "j"}


class UnsupportedCharacter(TactiplotError):
    """Raised when input text contains a character the table cannot
    transcribe.  Silent text loss in an accessibility tool would be
    worse than an error."""

    def __init__(self, char: str, position: int):
        super().__init__(f"unsupported character {char!r} at position {position}")
        self.char = char
        self.position = position


class MalformedBraille(TactiplotError):
    """Raised by back-transcription on indicator sequences no valid
    transcription produces (e.g. a trailing capital indicator)."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at cell {position}")
        self.position = position


class BadTable(TactiplotError):
    """Raised when a translation table file violates the table rules."""


@dataclass(frozen=True)
class BrailleRun:
    """A transcribed run: Unicode cells plus the text they came from."""

    cells: str
    source_text: str

    def __post_init__(self):
        for ch in self.cells:
            if not 0x2800 <= ord(ch) <= 0x283F:
                raise ValueError(f"cell outside 6-dot range: {ch!r}")

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def width_mm(self) -> float:
        return len(self.cells) * BRAILLE_CELL_ADVANCE_MM


@dataclass(frozen=True)
class BrailleMetrics:
    """Physical cell sizing used by layout.  Fixed constants."""

    cell_width_mm: float = BRAILLE_CELL_ADVANCE_MM
    cell_height_mm: float = BRAILLE_LINE_HEIGHT_MM
    inter_cell_advance_mm: float = BRAILLE_CELL_ADVANCE_MM
    dot_diameter_mm: float = BRAILLE_DOT_DIAMETER_MM


class Table:
    """A validated, invertible character table."""

    def __init__(self, entries: dict[str, tuple[str, ...]]):
        reserved = {NUMERIC_INDICATOR, CAPITAL_INDICATOR, LETTER_INDICATOR, FRACTION_LINE, SPACE_CELL}
        seen: dict[tuple[str, ...], str] = {}
        for char, cells in entries.items():
            if len(char) != 1 or char.isspace() or char.isdigit() or char.isupper():
                raise BadTable(f"table entries must be single lowercase non-digit characters, got {char!r}")
            if not cells:
                raise BadTable(f"entry for {char!r} has no cells")
            if cells[0] in reserved:
                raise BadTable(f"entry for {char!r} starts with a reserved cell")
            if cells in seen:
                raise BadTable(f"entries for {seen[cells]!r} and {char!r} share cell sequence")
            seen[cells] = char
        missing = sorted(set("abcdefghijklmnopqrstuvwxyz") - set(entries))
        if missing:
            raise BadTable(f"table is missing letters: {''.join(missing)}")
        for c in "abcdefghij":
            if len(entries[c]) != 1:
                raise BadTable(f"letter {c!r} must be a single cell (digits reuse the a..j cells)")
        if "." in entries and len(entries["."]) != 1:
            raise BadTable("the '.' entry must be a single cell (it extends digit runs)")
        self.entries = dict(entries)
        self.letter_cells = {entries[c][0]: c for c in "abcdefghijklmnopqrstuvwxyz"
                             if len(entries[c]) == 1}
        self.digit_cells = {entries[_DIGIT_LETTERS[d]][0]: d for d in "1234567890"}
        self.period_cell = entries["."][0] if "." in entries else None
        # Single-cell and prefix-keyed multi-cell decode maps.
        self.single: dict[str, str] = {}
        self.multi: dict[str, dict[tuple[str, ...], str]] = {}
        for char, cells in entries.items():
            if char in "abcdefghijklmnopqrstuvwxyz" and len(cells) == 1:
                continue  # letters decode via letter_cells
            if len(cells) == 1:
                self.single[cells[0]] = char
            else:
                self.multi.setdefault(cells[0], {})[cells[1:]] = char
        # Back-transcription resolves a cell by its first map hit, so a
        # multi-cell prefix shared with a letter or a single-cell sign
        # would shadow it; all tails under one prefix must align too.
        for prefix, tails in self.multi.items():
            if prefix in self.letter_cells or prefix in self.single:
                raise BadTable("a multi-cell prefix collides with a single-cell entry")
            if len({len(t) for t in tails}) != 1:
                raise BadTable("all sequences sharing a prefix cell must have equal length")

    def supports(self, char: str) -> bool:
        return char == " " or char.isdigit() or char.lower() in self.entries


def load_table(text: str) -> Table:
    """Parse a two-column ``char<TAB>dot-numbers`` table document."""
    entries: dict[str, tuple[str, ...]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            char, dots = line.split("\t", 1)
        except ValueError:
            raise BadTable(f"line {lineno}: expected char<TAB>dot-numbers") from None
        if char in entries:
            raise BadTable(f"line {lineno}: duplicate entry for {char!r}")
        try:
            entries[char] = tuple(cell_from_dots(group) for group in dots.split())
        except ValueError as e:
            raise BadTable(f"line {lineno}: {e}") from None
    return Table(entries)


DEFAULT_TABLE = load_table(DEFAULT_TABLE_TEXT)


def transcribe(text: str, table: Table = DEFAULT_TABLE) -> BrailleRun:
    """Transcribe ``text`` to Grade-1 braille cells.

    Raises :class:`UnsupportedCharacter` for anything outside the
    table's character set (plus digits and space).
    """
    cells: list[str] = []
    numeric = False
    for i, ch in enumerate(text):
        if ch == " ":
            cells.append(SPACE_CELL)
            numeric = False
        elif ch.isascii() and ch.isdigit():
            if not numeric:
                cells.append(NUMERIC_INDICATOR)
                numeric = True
            cells.append(table.entries[_DIGIT_LETTERS[ch]][0])
        elif ch == "." and "." in table.entries:
            # The decimal point extends a digit run, so numeric state
            # survives it; the letter indicator below disambiguates.
            cells.append(table.period_cell)  # type: ignore[arg-type]
        elif ch == "/" and numeric and i + 1 < len(text) and text[i + 1].isdigit():
            cells.append(FRACTION_LINE)
        elif ch.isascii() and ch.isalpha():
            lower = ch.lower()
            if lower not in table.entries:
                raise UnsupportedCharacter(ch, i)
            if ch.isupper():
                cells.append(CAPITAL_INDICATOR)
            elif numeric and table.entries[lower][0] in table.digit_cells:
                cells.append(LETTER_INDICATOR)
            cells.extend(table.entries[lower])
            numeric = False
        elif ch in table.entries:
            cells.extend(table.entries[ch])
            numeric = False
        else:
            raise UnsupportedCharacter(ch, i)
    return BrailleRun(cells="".join(cells), source_text=text)


def back_transcribe(run: BrailleRun | str, table: Table = DEFAULT_TABLE) -> str:
    """Invert :func:`transcribe`.  Raises :class:`MalformedBraille` on
    indicator sequences no transcription produces."""
    cells = run.cells if isinstance(run, BrailleRun) else run
    out: list[str] = []
    numeric = False
    i = 0
    n = len(cells)
    while i < n:
        c = cells[i]
        if not 0x2800 <= ord(c) <= 0x283F:
            raise MalformedBraille(f"not a 6-dot cell: {c!r}", i)
        if c == SPACE_CELL:
            out.append(" ")
            numeric = False
            i += 1
        elif c == NUMERIC_INDICATOR:
            if i + 1 >= n or cells[i + 1] not in table.digit_cells:
                raise MalformedBraille("numeric indicator not followed by a digit cell", i)
            numeric = True
            i += 1
        elif c == CAPITAL_INDICATOR:
            if i + 1 >= n or cells[i + 1] not in table.letter_cells:
                raise MalformedBraille("capital indicator not followed by a letter cell", i)
            out.append(table.letter_cells[cells[i + 1]].upper())
            numeric = False
            i += 2
        elif c == LETTER_INDICATOR:
            if i + 1 >= n or cells[i + 1] not in table.letter_cells:
                raise MalformedBraille("letter indicator not followed by a letter cell", i)
            out.append(table.letter_cells[cells[i + 1]])
            numeric = False
            i += 2
        elif numeric and c in table.digit_cells:
            out.append(table.digit_cells[c])
            i += 1
        elif numeric and c == table.period_cell:
            out.append(".")
            i += 1
        elif numeric and c == FRACTION_LINE:
            if i + 1 >= n or cells[i + 1] not in table.digit_cells:
                raise MalformedBraille("fraction line not followed by a digit cell", i)
            out.append("/")
            i += 1
        elif c in table.multi:
            tails = table.multi[c]
            width = len(next(iter(tails)))
            tail = tuple(cells[i + 1:i + 1 + width])
            if tail not in tails:
                raise MalformedBraille(f"unknown cell sequence starting {c!r}", i)
            out.append(tails[tail])
            numeric = False
            i += 1 + width
        elif c in table.letter_cells:
            out.append(table.letter_cells[c])
            numeric = False
            i += 1
        elif c in table.single:
            out.append(table.single[c])
            numeric = False
            i += 1
        else:
            raise MalformedBraille(f"cell {c!r} has no meaning here", i)
    return "".join(out)
