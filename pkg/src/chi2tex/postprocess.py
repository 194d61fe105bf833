"""Ordered text cleanup rules applied after assembly.

Rules scoped to ``text`` never touch math: the document is re-segmented into
text and math stretches before each rule runs, so a rule that creates or
moves a ``$`` cannot leak later rules into formulas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ChiError

SCOPES = ("text", "everywhere")

_MATH_ENVS = (
    "equation*",
    "equation",
    "align*",
    "align",
    "displaymath",
    "eqnarray*",
    "eqnarray",
)

DEFAULT_RULES_TEXT = """\
# built-in cleanup
text ; / - / ; " --- "
text ; /  +/ ; " "
everywhere ; /[ \\t]+$/ ; ""
"""


class RuleSyntax(ChiError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"rule line {lineno}: {message}")


class BadPattern(ChiError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"rule line {lineno}: bad pattern: {message}")


@dataclass(frozen=True)
class Rule:
    scope: str
    pattern: re.Pattern
    replacement: str
    line: int


def _take_pattern(text: str, lineno: int) -> tuple[str, str]:
    """Split '/pattern/ ; rest', honoring backslash escapes in the pattern.

    ``\\/`` belongs to the file syntax, not the regex, so it is unescaped
    here; every other backslash pair passes through untouched.
    """
    text = text.lstrip()
    if not text.startswith("/"):
        raise RuleSyntax(lineno, "expected /pattern/ after scope")
    out: list[str] = []
    i = 1
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            out.append(nxt if nxt == "/" else ch + nxt)
            i += 2
            continue
        if ch == "/":
            return "".join(out), text[i + 1 :]
        out.append(ch)
        i += 1
    raise RuleSyntax(lineno, "unterminated /pattern/")


def parse_rules(text: str) -> list[Rule]:
    rules: list[Rule] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        scope, sep, rest = line.partition(";")
        scope = scope.strip()
        if not sep:
            raise RuleSyntax(lineno, "expected 'scope ; /pattern/ ; replacement'")
        if scope not in SCOPES:
            raise RuleSyntax(lineno, f"unknown scope {scope!r}")
        pattern_src, rest = _take_pattern(rest, lineno)
        rest = rest.lstrip()
        if not rest.startswith(";"):
            raise RuleSyntax(lineno, "expected ';' after /pattern/")
        replacement = rest[1:].strip()
        if len(replacement) >= 2 and replacement[0] == '"' and replacement[-1] == '"':
            replacement = replacement[1:-1]
        try:
            pattern = re.compile(pattern_src, re.MULTILINE)
        except re.error as exc:
            raise BadPattern(lineno, str(exc)) from exc
        rules.append(Rule(scope, pattern, replacement, lineno))
    return rules


def load_rules(path) -> list[Rule]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_rules(fh.read())


def default_rules() -> list[Rule]:
    return parse_rules(DEFAULT_RULES_TEXT)


def _find_unescaped(text: str, target: str, start: int) -> int:
    i = start
    while i < len(text):
        if text[i] == "\\":
            i += 2
            continue
        if text.startswith(target, i):
            return i
        i += 1
    return -1


def segment(text: str) -> list[tuple[str, str]]:
    """Split into ("text", chunk) and ("math", chunk) pieces, in order."""
    parts: list[tuple[str, str]] = []
    n = len(text)
    start = 0
    i = 0

    def flush(until: int) -> None:
        if until > start:
            parts.append(("text", text[start:until]))

    while i < n:
        ch = text[i]
        if ch == "\\":
            if text.startswith("\\[", i):
                end = text.find("\\]", i + 2)
                j = n if end == -1 else end + 2
            elif text.startswith("\\(", i):
                end = text.find("\\)", i + 2)
                j = n if end == -1 else end + 2
            elif text.startswith("\\begin{", i):
                close = text.find("}", i + 7)
                env = text[i + 7 : close] if close != -1 else ""
                if env in _MATH_ENVS:
                    marker = f"\\end{{{env}}}"
                    end = text.find(marker, i)
                    j = n if end == -1 else end + len(marker)
                else:
                    i += 2
                    continue
            else:
                i += 2
                continue
            flush(i)
            parts.append(("math", text[i:j]))
            start = i = j
            continue
        if ch == "$":
            if text.startswith("$$", i):
                end = _find_unescaped(text, "$$", i + 2)
                j = n if end == -1 else end + 2
            else:
                end = _find_unescaped(text, "$", i + 1)
                j = n if end == -1 else end + 1
            flush(i)
            parts.append(("math", text[i:j]))
            start = i = j
            continue
        i += 1
    flush(n)
    return parts


def apply_rules(text: str, rules: list[Rule]) -> str:
    for rule in rules:
        if rule.scope == "everywhere":
            text = rule.pattern.sub(rule.replacement, text)
            continue
        pieces = []
        for kind, chunk in segment(text):
            if kind == "text":
                pieces.append(rule.pattern.sub(rule.replacement, chunk))
            else:
                pieces.append(chunk)
        text = "".join(pieces)
    return text
