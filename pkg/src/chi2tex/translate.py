"""Glyph-grid to LaTeX translation.

The automatic path only ever sees lines the classifier accepted, so the
errors raised here are defensive.  The attachment rule that decides which
baseline glyph owns an off-baseline run lives here and is shared with the
classifier: a run claims the unique baseline glyph whose column falls inside
the run's span extended one column to the left (scripts trail their base).
Zero or several candidates make the run ambiguous.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ChiError
from .fonts import MATH_CLASSES, FontTables, Symbol, SymbolClass
from .reader import Cell, LogicalLine

# A line is a display equation when it ends with a parenthesized integer in
# the math-latin font and at least this share of its mode-bearing baseline
# glyphs (math vs cyrillic; neutral punctuation does not vote) is math.
DISPLAY_MATH_RATIO = 0.6

MANUAL_PLACEHOLDER = "% chi2tex: UNRESOLVED line {index}"

DEFAULT_DOCUMENTCLASS = "article"
DEFAULT_PACKAGES = [
    "[T2A]{fontenc}",
    "[utf8]{inputenc}",
    "[russian]{babel}",
    "amsmath",
    "amssymb",
]


class NotAuto(ChiError):
    """translate_line was called on a line classified for manual review."""

    def __init__(self, reasons: tuple[str, ...]):
        self.reasons = reasons
        super().__init__(f"line needs manual review: {', '.join(reasons)}")


class UnknownSymbol(ChiError):
    def __init__(self, cell: Cell):
        self.cell = cell
        super().__init__(
            f"no mapping for byte 0x{cell.code:02X} in font {cell.font} "
            f"at row {cell.row}, col {cell.col}"
        )


class AmbiguousAttachment(ChiError):
    def __init__(self, row: int, start: int, end: int, candidates: int):
        super().__init__(
            f"run at row {row}, cols {start}-{end} has {candidates} anchor candidates"
        )


@dataclass
class Node:
    """One baseline glyph with whatever attached above and below it."""

    cell: Cell
    symbol: Symbol
    above: list[tuple[Cell, Symbol]] = field(default_factory=list)
    below: list[tuple[Cell, Symbol]] = field(default_factory=list)
    vec: bool = False

    @property
    def col(self) -> int:
        return self.cell.col

    def needs_math(self) -> bool:
        return (
            self.symbol.klass in MATH_CLASSES
            or self.vec
            or bool(self.above)
            or bool(self.below)
        )


@dataclass
class TokenTree:
    """Baseline nodes in column order plus layout diagnostics."""

    nodes: list[Node]
    occupied_cols: frozenset[int]
    ambiguous_runs: int = 0
    unrecognized_composites: int = 0
    unknown_cells: int = 0


def _runs_by_row(cells: frozenset[Cell]) -> list[list[Cell]]:
    """Contiguous off-baseline runs, split at column gaps within each row."""
    rows: dict[int, list[Cell]] = {}
    for cell in cells:
        if cell.row != 0:
            rows.setdefault(cell.row, []).append(cell)
    runs: list[list[Cell]] = []
    for row in sorted(rows):
        chunk: list[Cell] = []
        for cell in sorted(rows[row], key=lambda c: c.col):
            if chunk and cell.col > chunk[-1].col + 1:
                runs.append(chunk)
                chunk = []
            chunk.append(cell)
        if chunk:
            runs.append(chunk)
    return runs


def attach_scripts(
    cells: frozenset[Cell], tables: FontTables, *, lenient: bool = False
) -> TokenTree:
    """Anchor every off-baseline run to its baseline glyph.

    In lenient mode layout defects are counted instead of raised, unknown
    bytes map to a placeholder symbol, and orphan runs are dropped; that mode
    feeds the classifier and the best-effort preview for reviewers.
    """
    unknown_cells = 0

    def lookup(cell: Cell) -> Symbol:
        nonlocal unknown_cells
        sym = tables.map_cell(cell)
        if sym.klass is SymbolClass.UNKNOWN:
            unknown_cells += 1
            if not lenient:
                raise UnknownSymbol(cell)
            return Symbol(SymbolClass.DIGIT_PUNCT, "?", "?")
        return sym

    baseline = sorted((c for c in cells if c.row == 0), key=lambda c: c.col)
    nodes = [Node(cell, lookup(cell)) for cell in baseline]
    by_col = {node.col: node for node in nodes}
    tree = TokenTree(
        nodes=nodes,
        occupied_cols=frozenset(c.col for c in cells),
        unknown_cells=unknown_cells,
    )

    for run in _runs_by_row(cells):
        start, end = run[0].col, run[-1].col
        row = run[0].row
        candidates = [by_col[c] for c in range(start - 1, end + 1) if c in by_col]
        if len(candidates) != 1:
            tree.ambiguous_runs += 1
            if not lenient:
                raise AmbiguousAttachment(row, start, end, len(candidates))
            continue
        anchor = candidates[0]
        pairs = [(cell, lookup(cell)) for cell in run]
        side_taken = bool(anchor.above if row < 0 else anchor.below)
        accent = row == -1 and not side_taken and _is_accent_run(pairs, anchor)
        has_piece = any(s.klass is SymbolClass.ACCENT_PIECE for _, s in pairs)
        if abs(row) != 1 or side_taken or (has_piece and not accent):
            tree.unrecognized_composites += 1
            if not lenient:
                raise AmbiguousAttachment(row, start, end, 1)
            if side_taken or has_piece:
                continue
        if accent:
            anchor.vec = True
        elif row < 0:
            anchor.above = pairs
        else:
            anchor.below = pairs

    # Accent pieces make sense only above a base; on the baseline they are
    # halves of some larger construction we do not model.
    for node in nodes:
        if node.symbol.klass is SymbolClass.ACCENT_PIECE:
            tree.unrecognized_composites += 1

    # Script lookups above ran after the tree was built; sync the count.
    tree.unknown_cells = unknown_cells
    return tree


def _is_accent_run(pairs: list[tuple[Cell, Symbol]], anchor: Node) -> bool:
    return (
        len(pairs) == 1
        and pairs[0][1].klass is SymbolClass.ACCENT_PIECE
        and anchor.symbol.klass in (SymbolClass.MATH_LATIN, SymbolClass.GREEK)
    )


def _find_tag(
    baseline: list[Cell], occupied_cols: frozenset[int]
) -> tuple[str, frozenset[int]] | None:
    """Trailing font-1 "(N)" group, set off from the content by a gap.

    The column before the opener must be empty on every row, not just the
    baseline, or a trailing "^2(7)" would read as equation number 7.
    """
    if len(baseline) < 3:
        return None
    last = baseline[-1]
    if last.font != 1 or last.code != ord(")"):
        return None
    i = len(baseline) - 2
    digits: list[str] = []
    while (
        i >= 0
        and baseline[i].font == 1
        and chr(baseline[i].code).isdigit()
        and baseline[i].col == baseline[i + 1].col - 1
    ):
        digits.append(chr(baseline[i].code))
        i -= 1
    if not digits or i < 0:
        return None
    opener = baseline[i]
    if (
        opener.font != 1
        or opener.code != ord("(")
        or opener.col != baseline[i + 1].col - 1
    ):
        return None
    if opener.col - 1 in occupied_cols:
        return None
    cols = frozenset(c.col for c in baseline[i:])
    return "".join(reversed(digits)), cols


def detect_display(line: LogicalLine, tables: FontTables) -> str | None:
    """Tag string when the line is a numbered display equation, else None."""
    baseline = line.baseline()
    occupied = frozenset(c.col for c in line.cells)
    found = _find_tag(baseline, occupied)
    if found is None:
        return None
    tag, tag_cols = found
    math = cyr = 0
    for cell in baseline:
        if cell.col in tag_cols:
            continue
        klass = tables.map_cell(cell).klass
        if klass in MATH_CLASSES or klass is SymbolClass.ACCENT_PIECE:
            math += 1
        elif klass is SymbolClass.CYRILLIC:
            cyr += 1
    if math == 0 or math / (math + cyr) < DISPLAY_MATH_RATIO:
        return None
    return tag


def strip_tag_cells(line: LogicalLine, tables: FontTables) -> frozenset[Cell]:
    """Grid minus the display tag group, when one is present."""
    if detect_display(line, tables) is None:
        return line.cells
    occupied = frozenset(c.col for c in line.cells)
    _, tag_cols = _find_tag(line.baseline(), occupied)  # type: ignore[misc]
    return frozenset(c for c in line.cells if not (c.row == 0 and c.col in tag_cols))


# Emission helpers ----------------------------------------------------------

_LATEX_SPECIALS = {
    "#": r"\#",
    "$": r"\$",
    "%": r"\%",
    "&": r"\&",
    "_": r"\_",
    "{": r"\{",
    "}": r"\}",
    "~": r"\textasciitilde{}",
    "^": r"\textasciicircum{}",
}

_TRAILING_CONTROL_WORD = re.compile(r"\\[A-Za-z]+$")


def _escape_plain(text: str) -> str:
    return "".join(_LATEX_SPECIALS.get(ch, ch) for ch in text)


def _join_latex(parts: list[str]) -> str:
    """Concatenate, inserting a space only where a control word would swallow
    the following letter or digit."""
    out = ""
    for part in parts:
        if out and part and _TRAILING_CONTROL_WORD.search(out) and part[0].isalnum():
            out += " "
        out += part
    return out


def _script_text(pairs: list[tuple[Cell, Symbol]]) -> str:
    """Script run content: Cyrillic stretches become \\text{...} islands."""
    parts: list[str] = []
    buf: list[str] = []
    for _, sym in pairs:
        if sym.klass is SymbolClass.CYRILLIC:
            buf.append(sym.unicode)
            continue
        if buf:
            parts.append(r"\text{" + "".join(buf) + "}")
            buf = []
        if sym.klass is SymbolClass.DIGIT_PUNCT:
            parts.append(_escape_plain(sym.latex))
        else:
            parts.append(sym.latex)
    if buf:
        parts.append(r"\text{" + "".join(buf) + "}")
    return _join_latex(parts)


def _wrap_script(mark: str, body: str) -> str:
    if len(body) == 1:
        return mark + body
    return mark + "{" + body + "}"


def _math_atom(node: Node) -> str:
    sym = node.symbol
    if sym.klass is SymbolClass.CYRILLIC:
        base = r"\text{" + sym.unicode + "}"
    elif sym.klass is SymbolClass.DIGIT_PUNCT:
        base = _escape_plain(sym.latex)
    else:
        base = sym.latex
    if node.vec:
        base = r"\vec{" + base + "}"
    if node.below:
        base += _wrap_script("_", _script_text(node.below))
    if node.above:
        base += _wrap_script("^", _script_text(node.above))
    return base


_BRACKET_DELTA = {"(": 1, "[": 1, ")": -1, "]": -1}


def _math_spans(nodes: list[Node]) -> list[tuple[int, int]]:
    """Maximal inline-math spans over the baseline.

    A span runs from a math-bearing node to the last math-bearing node before
    the next Cyrillic one.  Trailing neutral glyphs stay outside the span
    (sentence punctuation after a formula belongs to the text) except while a
    bracket opened inside the span is still unclosed.
    """
    spans: list[tuple[int, int]] = []
    n = len(nodes)
    i = 0
    while i < n:
        if not nodes[i].needs_math():
            i += 1
            continue
        k = i
        last = i
        while k < n and nodes[k].symbol.klass is not SymbolClass.CYRILLIC:
            if nodes[k].needs_math():
                last = k
            k += 1
        depth = 0
        for m in range(i, last + 1):
            depth += _BRACKET_DELTA.get(nodes[m].symbol.unicode, 0)
        end = last
        m = last + 1
        while m < k and depth > 0:
            depth += _BRACKET_DELTA.get(nodes[m].symbol.unicode, 0)
            end = m
            m += 1
        spans.append((i, end))
        i = max(end + 1, k)
    return spans


def _has_gap(tree: TokenTree, left: Node, right: Node) -> bool:
    return any(
        col not in tree.occupied_cols for col in range(left.col + 1, right.col)
    )


def _emit_inline(tree: TokenTree) -> str:
    spans = dict(_math_spans(tree.nodes))
    out: list[str] = []
    math_parts: list[str] = []
    end = -1
    for idx, node in enumerate(tree.nodes):
        gap = idx > 0 and _has_gap(tree, tree.nodes[idx - 1], node)
        if idx in spans:
            out.append(" $")
            math_parts = []
            end = spans[idx]
            gap = False
        if idx <= end:
            if gap:
                math_parts.append(" ")
            math_parts.append(_math_atom(node))
            if idx == end:
                out.append(_join_latex(math_parts))
                out.append("$ ")
                end = -1
        else:
            if gap:
                out.append(" ")
            if node.symbol.klass is SymbolClass.CYRILLIC:
                out.append(node.symbol.unicode)
            else:
                out.append(_escape_plain(node.symbol.unicode))
    return re.sub("  +", " ", "".join(out)).strip()


def _emit_display(tree: TokenTree) -> str:
    parts: list[str] = []
    nodes = tree.nodes
    i = 0
    n = len(nodes)
    while i < n:
        node = nodes[i]
        gap = i > 0 and _has_gap(tree, nodes[i - 1], node)
        if node.symbol.klass is SymbolClass.CYRILLIC and not node.needs_math():
            buf: list[str] = []
            j = i
            while (
                j < n
                and nodes[j].symbol.klass is SymbolClass.CYRILLIC
                and not nodes[j].needs_math()
            ):
                if j > i and _has_gap(tree, nodes[j - 1], nodes[j]):
                    buf.append(" ")
                buf.append(nodes[j].symbol.unicode)
                j += 1
            if gap:
                parts.append(" ")
            parts.append(r"\text{" + "".join(buf) + "}")
            i = j
            continue
        if gap:
            parts.append(" ")
        parts.append(_math_atom(node))
        i += 1
    return _join_latex(parts).strip()


@dataclass(frozen=True)
class LatexFragment:
    mode: str  # "text" | "display"
    content: str
    tag: str | None = None


def translate_line(
    line: LogicalLine,
    tables: FontTables,
    thresholds=None,
) -> LatexFragment:
    """Translate one line the classifier would accept; NotAuto otherwise."""
    from .classify import classify, extract_features

    verdict = classify(extract_features(line, tables), thresholds)
    if not verdict.auto:
        raise NotAuto(verdict.reasons)

    tag = detect_display(line, tables)
    cells = strip_tag_cells(line, tables) if tag else line.cells
    tree = attach_scripts(cells, tables)
    if tag is not None:
        return LatexFragment("display", _emit_display(tree), tag)
    return LatexFragment("text", _emit_inline(tree))


def attempt_translate(line: LogicalLine, tables: FontTables) -> str | None:
    """Best-effort rendering of any line, as a hint for the reviewer."""
    try:
        tag = detect_display(line, tables)
        cells = strip_tag_cells(line, tables) if tag else line.cells
        tree = attach_scripts(cells, tables, lenient=True)
        body = _emit_display(tree) if tag else _emit_inline(tree)
        return body if body else None
    except ChiError:
        return None


def check_balance(text: str) -> str | None:
    """Error message when braces or math delimiters do not balance, else None."""
    depth = 0
    inline = False
    display = False
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\\":
            i += 2
            continue
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                return f"unmatched '}}' at offset {i}"
        elif ch == "$":
            if i + 1 < n and text[i + 1] == "$" and not inline:
                display = not display
                i += 2
                continue
            inline = not inline
        i += 1
    if depth != 0:
        return f"{depth} unclosed '{{'"
    if inline:
        return "unclosed '$'"
    if display:
        return "unclosed '$$'"
    return None


@dataclass
class AssembleOptions:
    documentclass: str = DEFAULT_DOCUMENTCLASS
    packages: list[str] = field(default_factory=lambda: list(DEFAULT_PACKAGES))
    display_fence: str = "%%"


def _render_package(spec: str) -> str:
    if spec.startswith("[") or spec.startswith("{"):
        return "\\usepackage" + spec
    return "\\usepackage{" + spec + "}"


def render_fragment(fragment: LatexFragment, options: AssembleOptions) -> list[str]:
    if fragment.mode != "display":
        return [fragment.content]
    lines: list[str] = []
    if options.display_fence:
        lines.append(options.display_fence)
    if fragment.tag is not None:
        lines.append("\\begin{equation*}\\label{" + fragment.tag + "}")
        lines.append(fragment.content)
        lines.append("\\tag{" + fragment.tag + "}")
        lines.append("\\end{equation*}")
    else:
        lines.append("\\[ " + fragment.content + " \\]")
    if options.display_fence:
        lines.append(options.display_fence)
    return lines


def assemble_document(
    fragments: list[LatexFragment], options: AssembleOptions | None = None
) -> str:
    """Preamble plus body; text lines keep their order, a fragment with empty
    content marks a paragraph break, display blocks pass through verbatim."""
    options = options or AssembleOptions()
    head = ["\\documentclass{" + options.documentclass + "}"]
    head.extend(_render_package(p) for p in options.packages)

    body: list[str] = []
    for fragment in fragments:
        if fragment.mode == "text" and fragment.content == "":
            if body and body[-1] != "":
                body.append("")
            continue
        body.extend(render_fragment(fragment, options))
    while body and body[-1] == "":
        body.pop()

    parts = head + ["", "\\begin{document}", ""]
    parts.extend(body)
    parts.extend(["", "\\end{document}"])
    return "\n".join(parts) + "\n"
