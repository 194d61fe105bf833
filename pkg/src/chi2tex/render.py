"""Human-readable views of a glyph grid for the review workflow."""

from __future__ import annotations

import html
import json

from .fonts import FontTables, SymbolClass
from .reader import LogicalLine

_ANSI = {
    SymbolClass.MATH_LATIN: "34",
    SymbolClass.GREEK: "32",
    SymbolClass.OPERATOR: "33",
    SymbolClass.ACCENT_PIECE: "33",
    SymbolClass.UNKNOWN: "31",
}

FORMATS = ("ansi", "html", "json")


def _grid_rows(line: LogicalLine, tables: FontTables):
    """Yield (row, [(col, symbol_class, display_char)]) top row first."""
    by_row: dict[int, list] = {}
    for cell in sorted(line.cells, key=lambda c: (c.row, c.col)):
        sym = tables.map_cell(cell)
        char = sym.unicode[0] if sym.unicode else "?"
        if sym.klass is SymbolClass.UNKNOWN:
            char = "?"
        by_row.setdefault(cell.row, []).append((cell.col, sym.klass, char))
    rows = sorted(by_row) or [0]
    if 0 not in by_row:
        by_row[0] = []
        rows = sorted(set(rows) | {0})
    return [(row, by_row.get(row, [])) for row in rows]


def render_grid(line: LogicalLine, tables: FontTables, format: str = "ansi") -> str:
    if format == "json":
        cells = [
            {
                "row": cell.row,
                "col": cell.col,
                "font": cell.font,
                "class": tables.map_cell(cell).klass.value,
                "unicode": tables.map_cell(cell).unicode,
            }
            for cell in sorted(line.cells, key=lambda c: (c.row, c.col))
        ]
        return json.dumps({"cells": cells}, ensure_ascii=False, separators=(",", ":"))
    if format == "ansi":
        return _render_text(line, tables, color=True)
    if format == "html":
        return _render_html(line, tables)
    raise ValueError(f"unknown grid format: {format!r}")


def _render_text(line: LogicalLine, tables: FontTables, *, color: bool) -> str:
    out = []
    for row, cells in _grid_rows(line, tables):
        width = max((col for col, _, _ in cells), default=-1) + 1
        chars = [" "] * width
        codes = [""] * width
        for col, klass, char in cells:
            chars[col] = char
            codes[col] = _ANSI.get(klass, "")
        if color:
            body = "".join(
                f"\x1b[{code}m{ch}\x1b[0m" if code else ch
                for ch, code in zip(chars, codes)
            )
        else:
            body = "".join(chars)
        out.append(f"{row:>3} |{body}")
    return "\n".join(out)


def _render_html(line: LogicalLine, tables: FontTables) -> str:
    rows_out = []
    for row, cells in _grid_rows(line, tables):
        width = max((col for col, _, _ in cells), default=-1) + 1
        spans = [" "] * width
        for col, klass, char in cells:
            spans[col] = (
                f'<span class="sym-{klass.value}">{html.escape(char)}</span>'
            )
        rows_out.append(f"{row:>3} |" + "".join(spans))
    return '<pre class="chi-grid">' + "\n".join(rows_out) + "</pre>"
