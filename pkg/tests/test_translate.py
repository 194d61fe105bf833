"""Script attachment, math emission, display detection, and assembly."""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chi2tex.reader import Cell, parse_document
from chi2tex.translate import (
    AmbiguousAttachment,
    AssembleOptions,
    LatexFragment,
    NotAuto,
    UnknownSymbol,
    assemble_document,
    attach_scripts,
    attempt_translate,
    check_balance,
    detect_display,
    render_fragment,
    strip_tag_cells,
    translate_line,
)


def grid(*cells):
    return frozenset(Cell(*c) for c in cells)


def line_of(content: bytes):
    doc = parse_document(b"\\+\n" + content + b"\n\\+\n")
    assert len(doc.lines) == 1
    return doc.lines[0]


class TestAttachScripts:
    def test_sub_and_super_attach_to_nearest_base(self, tables):
        cells = grid(
            (0, 0, 1, ord("J")),
            (1, 1, 7, ord("a")),
            (0, 3, 1, ord("A")),
            (-1, 4, 7, ord("a")),
        )
        tree = attach_scripts(cells, tables)
        nodes = sorted(tree.nodes, key=lambda n: n.cell.col)
        assert [n.symbol.unicode for n in nodes] == ["J", "A"]
        assert [(c.col, s.latex) for c, s in nodes[0].below] == [(1, "\\alpha")]
        assert nodes[0].above == []
        assert [(c.col, s.latex) for c, s in nodes[1].above] == [(4, "\\alpha")]

    def test_run_overlapping_two_bases_is_ambiguous(self, tables):
        cells = grid(
            (0, 0, 1, ord("J")),
            (0, 1, 1, ord("A")),
            (-1, 0, 0, ord("2")),
            (-1, 1, 0, ord("3")),
        )
        with pytest.raises(AmbiguousAttachment):
            attach_scripts(cells, tables)
        tree = attach_scripts(cells, tables, lenient=True)
        assert tree.ambiguous_runs == 1

    def test_orphan_run_is_ambiguous(self, tables):
        cells = grid((-1, 4, 0, ord("2")))
        with pytest.raises(AmbiguousAttachment):
            attach_scripts(cells, tables)
        tree = attach_scripts(cells, tables, lenient=True)
        assert tree.ambiguous_runs == 1
        assert tree.nodes == []

    def test_anchor_window_is_one_column_wide(self, tables):
        # A base one column before the run attaches; two columns is an orphan.
        near = grid((0, 0, 1, ord("x")), (-1, 1, 0, ord("2")))
        (node,) = attach_scripts(near, tables).nodes
        assert [s.unicode for _, s in node.above] == ["2"]
        far = grid((0, 0, 1, ord("x")), (-1, 2, 0, ord("2")))
        assert attach_scripts(far, tables, lenient=True).ambiguous_runs == 1

    def test_accent_piece_above_base_sets_vec(self, tables):
        cells = grid((0, 0, 1, ord("x")), (-1, 0, 3, ord(">")))
        tree = attach_scripts(cells, tables)
        (node,) = tree.nodes
        assert node.vec
        assert node.above == []

    def test_accent_piece_in_long_run_is_composite(self, tables):
        cells = grid(
            (0, 0, 1, ord("x")),
            (-1, 0, 3, ord(">")),
            (-1, 1, 0, ord("2")),
        )
        with pytest.raises(AmbiguousAttachment):
            attach_scripts(cells, tables)
        tree = attach_scripts(cells, tables, lenient=True)
        assert tree.unrecognized_composites == 1

    def test_deep_row_is_composite(self, tables):
        cells = grid((0, 0, 1, ord("x")), (-2, 0, 0, ord("2")))
        tree = attach_scripts(cells, tables, lenient=True)
        assert tree.unrecognized_composites == 1

    def test_unknown_cell_strict_raises(self, tables):
        cells = grid((0, 0, 9, ord("x")))
        with pytest.raises(UnknownSymbol):
            attach_scripts(cells, tables)
        tree = attach_scripts(cells, tables, lenient=True)
        assert tree.unknown_cells == 1

    def test_unknown_cell_inside_script_run_counted(self, tables):
        # Regression: unknowns discovered while attaching a run must land
        # in the tree's count, not just the local tally.
        cells = grid((0, 0, 1, ord("x")), (-1, 0, 9, 0xE8))
        tree = attach_scripts(cells, tables, lenient=True)
        assert tree.unknown_cells == 1

    def test_empty_grid(self, tables):
        tree = attach_scripts(frozenset(), tables)
        assert tree.nodes == []


class TestEmission:
    def test_pure_math_line(self, tables):
        assert attempt_translate(line_of(b"\\1J\\,\\7a\\^\\1 A\\^\\7a\\,"), tables) == (
            "$J_{\\alpha} A^{\\alpha}$"
        )

    def test_cyrillic_sentence(self, tables):
        assert attempt_translate(line_of(b"\\5Pltcm"), tables) == "Здесь"

    def test_accented_letter(self, tables):
        assert attempt_translate(line_of(b"\\1x\\^\\3>\\,"), tables) == "$\\vec{x}$"

    def test_single_char_script_unbraced(self, tables):
        assert attempt_translate(line_of(b"\\1d\\^3\\,x"), tables) == "$d^3x$"

    def test_multi_char_script_braced(self, tables):
        assert attempt_translate(line_of(b"\\1c\\^-1\\,"), tables) == "$c^{-1}$"

    def test_cyrillic_subscript_becomes_text(self, tables):
        out = attempt_translate(line_of(b"\\1L\\,\\5dp\\^"), tables)
        assert out == "$L_{\\text{вз}}$"

    def test_mixed_prose_and_math(self, tables):
        out = attempt_translate(line_of(b"\\5jn \\1x = t"), tables)
        assert out == "от $x = t$"

    def test_trailing_punct_stays_outside_math(self, tables):
        out = attempt_translate(line_of(b"\\5jn \\1x = t, \\5f"), tables)
        assert out == "от $x = t$ , а"

    def test_close_paren_stays_inside_math(self, tables):
        out = attempt_translate(line_of(b"\\7r\\1(x) \\5b"), tables)
        assert out == "$\\rho(x)$ и"

    def test_column_gap_becomes_space(self, tables):
        assert attempt_translate(line_of(b"\\1a b"), tables) == "$a b$"
        assert attempt_translate(line_of(b"\\1ab"), tables) == "$ab$"

    def test_script_column_does_not_force_space(self, tables):
        # The superscript occupies the column between d and x.
        assert attempt_translate(line_of(b"\\1d\\^3\\,x"), tables) == "$d^3x$"

    def test_operators(self, tables):
        assert attempt_translate(line_of(b"\\3I \\1d"), tables) == "$\\int d$"
        assert attempt_translate(line_of(b"\\3L"), tables) == "$\\mathcal{L}$"

    def test_digit_punct_line_is_plain_text(self, tables):
        out = attempt_translate(line_of(b"(76), (86)"), tables)
        assert out == "(76), (86)"

    def test_latex_specials_escaped_in_text(self, tables):
        assert attempt_translate(line_of(b"100%"), tables) == "100\\%"
        assert attempt_translate(line_of(b"#1"), tables) == "\\#1"


class TestDetectDisplay:
    def test_tagged_equation_line(self, eq142_doc, tables):
        assert detect_display(eq142_doc.lines[4], tables) == "142"

    def test_prose_lines_are_not_display(self, eq142_doc, tables):
        for idx in (0, 2, 3, 5, 6):
            assert detect_display(eq142_doc.lines[idx], tables) is None

    def test_inline_math_line_is_not_display(self, eq142_doc, tables):
        # Carries math and even a parenthesised reference, but no tag.
        assert detect_display(eq142_doc.lines[1], tables) is None

    def test_trailing_ref_on_prose_is_not_display(self, tables):
        line = line_of(b"\\5ckjdf ckjdf \\1(99)")
        assert detect_display(line, tables) is None

    def test_math_line_with_tag(self, tables):
        line = line_of(b"\\1E = mc\\^2\\,  (7)")
        assert detect_display(line, tables) == "7"

    def test_tag_needs_gap_before_paren(self, tables):
        line = line_of(b"\\1E = mc\\^2\\,(7)")
        assert detect_display(line, tables) is None

    def test_strip_tag_cells_removes_group(self, eq142_doc, tables):
        line = eq142_doc.lines[4]
        kept = strip_tag_cells(line, tables)
        dropped = line.cells - kept
        text = "".join(chr(c.code) for c in sorted(dropped, key=lambda c: c.col))
        assert text == "(142)"


class TestTranslateLine:
    def test_display_fragment(self, eq142_doc, tables):
        frag = translate_line(eq142_doc.lines[4], tables)
        assert frag.mode == "display"
        assert frag.tag == "142"
        assert frag.content.startswith("L_{\\text{вз}} = -c^{-1}")
        assert "(142)" not in frag.content

    def test_text_fragment(self, eq142_doc, tables):
        frag = translate_line(eq142_doc.lines[0], tables)
        assert frag.mode == "text"
        assert frag.tag is None
        assert frag.content.startswith("лагранжианом")

    def test_manual_line_raises_not_auto(self, review_doc, tables):
        with pytest.raises(NotAuto) as err:
            translate_line(review_doc.lines[1], tables)
        assert "UNKNOWN_ESCAPE" in err.value.reasons

    def test_attempt_gives_best_effort_for_manual(self, review_doc, tables):
        assert attempt_translate(review_doc.lines[1], tables) == "$L = L^2 + M$"

    def test_every_auto_output_is_balanced(self, eq142_doc, tables):
        for line in eq142_doc.lines:
            frag = translate_line(line, tables)
            assert check_balance(frag.content) is None


class TestCheckBalance:
    def test_shared_vectors(self, fixtures_dir):
        vectors = json.loads(
            (fixtures_dir / "balance_vectors.json").read_text(encoding="utf-8")
        )["vectors"]
        assert len(vectors) >= 20
        for vec in vectors:
            err = check_balance(vec["input"])
            assert (err is None) == vec["ok"], vec
            if "message" in vec:
                assert err == vec["message"]

    @given(st.text(alphabet="{}$ab\\ ", max_size=30))
    def test_never_crashes(self, text):
        result = check_balance(text)
        assert result is None or isinstance(result, str)


class TestAssemble:
    def test_display_fragment_rendering(self):
        opts = AssembleOptions()
        lines = render_fragment(LatexFragment("display", "E = mc^2", tag="7"), opts)
        assert lines == [
            "%%",
            "\\begin{equation*}\\label{7}",
            "E = mc^2",
            "\\tag{7}",
            "\\end{equation*}",
            "%%",
        ]

    def test_untagged_display_uses_brackets(self):
        opts = AssembleOptions()
        lines = render_fragment(LatexFragment("display", "E = mc^2", tag=None), opts)
        assert lines == ["%%", "\\[ E = mc^2 \\]", "%%"]

    def test_custom_fence(self):
        opts = AssembleOptions(display_fence="% ---")
        lines = render_fragment(LatexFragment("display", "x", tag="1"), opts)
        assert lines[0] == "% ---"
        assert lines[-1] == "% ---"

    def test_document_shape(self):
        text = assemble_document([LatexFragment("text", "привет")])
        assert text.startswith("\\documentclass{article}\n")
        assert "\\usepackage[T2A]{fontenc}" in text
        assert "\\usepackage[russian]{babel}" in text
        assert "\\begin{document}" in text
        assert text.rstrip().endswith("\\end{document}")
        assert "привет" in text

    def test_empty_fragment_is_paragraph_break(self):
        text = assemble_document(
            [
                LatexFragment("text", "один"),
                LatexFragment("text", ""),
                LatexFragment("text", "два"),
            ]
        )
        assert "один\n\nдва" in text

    def test_custom_documentclass(self):
        opts = AssembleOptions(documentclass="report", packages=["amsmath"])
        text = assemble_document([LatexFragment("text", "x")], opts)
        assert text.startswith("\\documentclass{report}\n")
        assert "\\usepackage{amsmath}" in text
        assert "fontenc" not in text

    def test_assembled_document_is_balanced(self, eq142_doc, tables):
        frags = [translate_line(line, tables) for line in eq142_doc.lines]
        assert check_balance(assemble_document(frags)) is None
