"""Rewrite rules: parsing, scope segmentation, builtin typography."""

import pytest

from chi2tex.postprocess import (
    BadPattern,
    RuleSyntax,
    apply_rules,
    default_rules,
    parse_rules,
    segment,
)


class TestParseRules:
    def test_basic_rule(self):
        (rule,) = parse_rules("text ; / - / ; \" --- \"")
        assert rule.scope == "text"
        assert rule.pattern.pattern == " - "
        assert rule.replacement == " --- "

    def test_unquoted_replacement(self):
        (rule,) = parse_rules("everywhere ; /foo/ ; bar")
        assert rule.replacement == "bar"

    def test_escaped_slash_in_pattern(self):
        (rule,) = parse_rules("text ; /a\\/b/ ; c")
        assert rule.pattern.pattern == "a/b"

    def test_comments_and_blanks_skipped(self):
        rules = parse_rules("# heading\n\ntext ; /a/ ; b\n")
        assert len(rules) == 1

    def test_bad_scope(self):
        with pytest.raises(RuleSyntax):
            parse_rules("sometimes ; /a/ ; b")

    def test_unterminated_pattern(self):
        with pytest.raises(RuleSyntax):
            parse_rules("text ; /abc ; d")

    def test_missing_fields(self):
        with pytest.raises(RuleSyntax):
            parse_rules("text ; /a/")

    def test_bad_regex_reports_line(self):
        with pytest.raises(BadPattern) as err:
            parse_rules("# one\ntext ; /(/ ; x")
        assert err.value.lineno == 2

    def test_default_rules_parse(self):
        assert len(default_rules()) >= 3


class TestSegment:
    def test_plain_text_single_segment(self):
        segs = segment("привет мир")
        assert [(k, t) for k, t in segs] == [("text", "привет мир")]

    def test_inline_math_extracted(self):
        segs = segment("а $x$ б")
        assert [k for k, _ in segs] == ["text", "math", "text"]
        assert segs[1][1] == "$x$"

    def test_display_brackets(self):
        segs = segment("до \\[x\\] после")
        assert [k for k, _ in segs] == ["text", "math", "text"]

    def test_equation_environment(self):
        text = "до\n\\begin{equation*}\nx\n\\end{equation*}\nпосле"
        segs = segment(text)
        kinds = [k for k, _ in segs]
        assert kinds == ["text", "math", "text"]
        assert "\\begin{equation*}" in segs[1][1]

    def test_escaped_dollar_is_not_a_fence(self):
        segs = segment("цена \\$5")
        assert [k for k, _ in segs] == [("text")]

    def test_segments_reassemble_exactly(self):
        text = "а $x$ б \\[y\\] в \\begin{align}z\\end{align} г"
        assert "".join(t for _, t in segment(text)) == text


class TestApplyRules:
    def test_dash_promoted_in_text(self):
        out = apply_rules("поля - некоторые", default_rules())
        assert out == "поля --- некоторые"

    def test_dash_inside_math_untouched(self):
        out = apply_rules("$a - b$", default_rules())
        assert out == "$a - b$"

    def test_dash_in_text_around_math(self):
        out = apply_rules("поля - некоторые $a - b$ функции - вот", default_rules())
        assert out == "поля --- некоторые $a - b$ функции --- вот"

    def test_double_spaces_collapsed_in_text(self):
        assert apply_rules("а  б", default_rules()) == "а б"

    def test_trailing_whitespace_stripped_everywhere(self):
        assert apply_rules("x \n$y$ \n", default_rules()) == "x\n$y$\n"

    def test_everywhere_scope_hits_math(self):
        rules = parse_rules("everywhere ; /x/ ; y")
        assert apply_rules("$x$ x", rules) == "$y$ y"

    def test_builtins_idempotent_on_golden(self, golden_tex):
        once = apply_rules(golden_tex, default_rules())
        assert apply_rules(once, default_rules()) == once

    def test_math_segments_unchanged_by_text_rules(self, golden_tex):
        rules = [r for r in default_rules() if r.scope == "text"]
        before = [t for k, t in segment(golden_tex) if k == "math"]
        after = [t for k, t in segment(apply_rules(golden_tex, rules)) if k == "math"]
        assert before == after

    def test_rule_order_is_file_order(self):
        rules = parse_rules("text ; /a/ ; b\ntext ; /b/ ; c")
        assert apply_rules("a", rules) == "c"

    def test_multiline_anchors(self):
        rules = parse_rules("text ; /^x$/ ; y")
        assert apply_rules("x\nx\n", rules) == "y\ny\n"
