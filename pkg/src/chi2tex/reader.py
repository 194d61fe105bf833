"""Reader for ChiWriter 3.x files: escape lexer, glyph grid builder, document split.

The input is a raw 8-bit byte stream.  No text decoding happens here; bytes
become glyph codes and the font tables decide what they mean later.  Lexing is
lossless: concatenating the ``raw`` spans of the produced tokens always
reproduces the input bytes exactly.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from enum import Enum

from .errors import ChiError

# A physical line consisting of exactly this marks a logical-line boundary.
LINE_DELIMITER = b"\\+"

# Glyph rows are clamped to this offset unless the caller overrides it.
DEFAULT_MAX_ROW = 4

# Font state at the very start of a document, before any font escape.
DEFAULT_INITIAL_FONT = 0


class TruncatedEscape(ChiError):
    """A lone backslash ended the content with no escape byte following."""

    def __init__(self, offset: int):
        self.offset = offset
        super().__init__(f"truncated escape at offset {offset}")


class RowOutOfRange(ChiError):
    """A row escape moved the cursor beyond the configured offset limit."""

    def __init__(self, row: int, max_row: int):
        self.row = row
        self.max_row = max_row
        super().__init__(f"row {row} exceeds maximum offset {max_row}")


class TokenKind(Enum):
    FONT_SELECT = "font-select"
    ROW_UP = "row-up"
    ROW_DOWN = "row-down"
    HARD_SPACE = "hard-space"
    SOFT_WRAP = "soft-wrap"
    UNKNOWN_ESCAPE = "unknown-escape"
    GLYPH = "glyph"
    PLAIN_SPACE = "plain-space"


@dataclass(frozen=True)
class Token:
    """One lexed unit.  ``raw`` holds the exact source bytes of the token."""

    kind: TokenKind
    raw: bytes
    offset: int
    value: int | None = None


@dataclass(frozen=True)
class Cell:
    """One glyph placed on the logical-line grid.

    Row 0 is the baseline; negative rows sit above it.  ``code`` is the raw
    glyph byte, interpreted only by the font tables.
    """

    row: int
    col: int
    font: int
    code: int


@dataclass(frozen=True)
class LogicalLine:
    index: int
    raw: bytes
    tokens: tuple[Token, ...]
    cells: frozenset[Cell]
    crc: int
    # Extreme rows the cursor reached, even where no glyph was kept.  Wider
    # than the cell envelope on damaged lines; classification uses this so
    # dropped out-of-range glyphs cannot hide.
    row_span: tuple[int, int] = (0, 0)

    def baseline(self) -> list[Cell]:
        return sorted((c for c in self.cells if c.row == 0), key=lambda c: c.col)

    def rows(self) -> list[int]:
        return sorted({c.row for c in self.cells})


@dataclass
class ChiDocument:
    source_path: str
    lines: list[LogicalLine]
    # (line index, message); index -1 flags material before the first delimiter
    warnings: list[tuple[int, str]]


# Escape table: byte after the backslash -> token kind.  Digits select fonts;
# anything not listed lexes as UNKNOWN_ESCAPE and is preserved, not dropped.
_ESCAPE_KINDS = {
    ord("^"): TokenKind.ROW_UP,
    ord(","): TokenKind.ROW_DOWN,
    ord(" "): TokenKind.HARD_SPACE,
    ord("&"): TokenKind.SOFT_WRAP,
}

_WHITESPACE = frozenset(b" \t\r\n")


def lex_content(content: bytes, *, tolerant: bool = False) -> list[Token]:
    """Lex one logical line's bytes into tokens.

    A trailing lone backslash raises TruncatedEscape unless ``tolerant`` is
    set, in which case it becomes an UNKNOWN_ESCAPE token so the surrounding
    document parse can keep going.
    """
    tokens: list[Token] = []
    i = 0
    n = len(content)
    while i < n:
        b = content[i]
        if b == 0x5C:  # backslash
            if i + 1 >= n:
                if not tolerant:
                    raise TruncatedEscape(i)
                tokens.append(Token(TokenKind.UNKNOWN_ESCAPE, b"\\", i, None))
                i += 1
                continue
            e = content[i + 1]
            raw = content[i : i + 2]
            if 0x30 <= e <= 0x39:
                tokens.append(Token(TokenKind.FONT_SELECT, raw, i, e - 0x30))
            elif e in _ESCAPE_KINDS:
                tokens.append(Token(_ESCAPE_KINDS[e], raw, i, None))
            else:
                tokens.append(Token(TokenKind.UNKNOWN_ESCAPE, raw, i, e))
            i += 2
        elif b in _WHITESPACE:
            tokens.append(Token(TokenKind.PLAIN_SPACE, content[i : i + 1], i, b))
            i += 1
        else:
            tokens.append(Token(TokenKind.GLYPH, content[i : i + 1], i, b))
            i += 1
    return tokens


def serialize_tokens(tokens: list[Token]) -> bytes:
    """Inverse of lex_content."""
    return b"".join(t.raw for t in tokens)


def grid_walk(
    tokens: list[Token],
    *,
    initial_font: int = DEFAULT_INITIAL_FONT,
    max_row: int = DEFAULT_MAX_ROW,
    tolerant: bool = False,
) -> tuple[frozenset[Cell], int, tuple[int, int]]:
    """Replay tokens against a 2-D cursor.

    Returns (cells, font after the line, (lowest row, highest row) reached).
    The cursor starts at (row=0, col=0).  Glyphs and both space kinds advance
    the column; row escapes move the row and raise RowOutOfRange past the
    limit.  Font selection persists beyond the line, hence the returned font.
    In tolerant mode out-of-range rows drop their glyphs instead of raising,
    so a damaged line still yields a partial grid and correct font state.
    """
    row = 0
    col = 0
    font = initial_font
    span = (0, 0)
    cells: set[Cell] = set()
    for tok in tokens:
        if tok.kind is TokenKind.GLYPH:
            if abs(row) <= max_row:
                cells.add(Cell(row, col, font, tok.value))
            col += 1
        elif tok.kind in (TokenKind.PLAIN_SPACE, TokenKind.HARD_SPACE):
            col += 1
        elif tok.kind is TokenKind.FONT_SELECT:
            font = tok.value
        elif tok.kind in (TokenKind.ROW_UP, TokenKind.ROW_DOWN):
            row += 1 if tok.kind is TokenKind.ROW_DOWN else -1
            span = (min(span[0], row), max(span[1], row))
            if abs(row) > max_row and not tolerant:
                raise RowOutOfRange(row, max_row)
        # SOFT_WRAP and UNKNOWN_ESCAPE are layout no-ops.
    return frozenset(cells), font, span


def build_grid(
    tokens: list[Token],
    *,
    initial_font: int = DEFAULT_INITIAL_FONT,
    max_row: int = DEFAULT_MAX_ROW,
) -> frozenset[Cell]:
    return grid_walk(tokens, initial_font=initial_font, max_row=max_row)[0]


def line_preview(line: LogicalLine) -> str:
    """Short ASCII-ish sketch of the baseline for listings and logs."""
    out: list[str] = []
    prev_col: int | None = None
    for cell in line.baseline():
        if prev_col is not None and cell.col > prev_col + 1:
            out.append(" ")
        out.append(chr(cell.code) if 0x20 <= cell.code < 0x7F else "?")
        prev_col = cell.col
    return "".join(out)


def line_crc(raw: bytes) -> int:
    """CRC-32 (reflected, poly 0xEDB88320, init/xorout 0xFFFFFFFF) of the raw bytes."""
    return zlib.crc32(raw) & 0xFFFFFFFF


def _split_chunks(data: bytes) -> tuple[bytes, list[bytes]]:
    """Split on delimiter lines; returns (header bytes, logical chunks)."""
    header_parts: list[bytes] = []
    chunks: list[list[bytes]] = []
    seen_delim = False
    for phys in data.split(b"\n"):
        stripped = phys[:-1] if phys.endswith(b"\r") else phys
        if stripped == LINE_DELIMITER:
            seen_delim = True
            chunks.append([])
        elif seen_delim:
            chunks[-1].append(phys)
        else:
            header_parts.append(phys)
    header = b"\n".join(header_parts)
    raw_chunks = [b"\n".join(parts) for parts in chunks]
    # A file ending in a delimiter leaves one empty trailing chunk: that is the
    # terminator idiom, not an empty logical line.
    if raw_chunks and raw_chunks[-1] == b"":
        raw_chunks.pop()
    return header, raw_chunks


def parse_document(
    data: bytes,
    source_path: str = "<bytes>",
    *,
    initial_font: int = DEFAULT_INITIAL_FONT,
    max_row: int = DEFAULT_MAX_ROW,
) -> ChiDocument:
    """Split a file into logical lines and build each line's grid.

    Nothing here is fatal: malformed regions (stray header bytes, truncated
    escapes, rows out of range) turn into warnings and partial grids so the
    classifier can route the affected lines to manual review.
    """
    header, raw_chunks = _split_chunks(data)
    warnings: list[tuple[int, str]] = []
    if header.strip():
        warnings.append((-1, f"{len(header)} bytes before first line delimiter"))

    lines: list[LogicalLine] = []
    font = initial_font
    for index, raw in enumerate(raw_chunks):
        try:
            tokens = lex_content(raw)
        except TruncatedEscape as exc:
            warnings.append((index, str(exc)))
            tokens = lex_content(raw, tolerant=True)
        try:
            cells, font, span = grid_walk(tokens, initial_font=font, max_row=max_row)
        except RowOutOfRange as exc:
            warnings.append((index, str(exc)))
            cells, font, span = grid_walk(
                tokens, initial_font=font, max_row=max_row, tolerant=True
            )
        lines.append(
            LogicalLine(index, raw, tuple(tokens), cells, line_crc(raw), span)
        )
    return ChiDocument(source_path, lines, warnings)
