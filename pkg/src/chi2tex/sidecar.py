"""Resolutions sidecar: the on-disk queue of lines awaiting manual LaTeX.

The format is line oriented so it diffs well under version control.  Every
block carries the CRC of the source line it resolves; merge refuses to apply
a resolution whose CRC no longer matches, which catches edits to the
manuscript made after the line was flagged.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field

from .errors import ChiError, CrcMismatch
from .translate import check_balance

HEADER = "# chi2tex resolutions v1"
STATUSES = ("pending", "resolved")

_KNOWN_KEYS = ("file", "index", "crc", "status", "override", "latex")


class SidecarSyntax(ChiError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"sidecar line {lineno}: {message}")


class DuplicateKey(ChiError):
    def __init__(self, file: str, index: int):
        self.key = (file, index)
        super().__init__(f"duplicate resolution block for {file}:{index}")


@dataclass
class Resolution:
    file: str
    index: int
    crc: int
    status: str = "pending"
    latex: str = ""
    override: bool = False
    comments: list[str] = field(default_factory=list)

    @property
    def key(self) -> tuple[str, int]:
        return (self.file, self.index)

    @property
    def resolved(self) -> bool:
        return self.status == "resolved"


def parse_sidecar(text: str) -> dict[tuple[str, int], Resolution]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise SidecarSyntax(1, f"expected header {HEADER!r}")

    resolutions: dict[tuple[str, int], Resolution] = {}
    block: dict[str, str] | None = None
    comments: list[str] = []
    block_line = 0

    def close_block(end_line: int) -> None:
        nonlocal block, comments
        if block is None:
            return
        for key in ("file", "index", "crc", "status"):
            if key not in block:
                raise SidecarSyntax(block_line, f"block is missing {key!r}")
        try:
            index = int(block["index"])
            crc = int(block["crc"], 0)
        except ValueError as exc:
            raise SidecarSyntax(block_line, str(exc)) from exc
        status = block["status"]
        if status not in STATUSES:
            raise SidecarSyntax(block_line, f"unknown status {status!r}")
        latex = block.get("latex", "")
        if status == "resolved":
            if not latex.strip():
                raise SidecarSyntax(block_line, "resolved block has empty latex")
            problem = check_balance(latex)
            if problem:
                raise SidecarSyntax(block_line, f"resolved latex: {problem}")
        res = Resolution(
            file=block["file"],
            index=index,
            crc=crc & 0xFFFFFFFF,
            status=status,
            latex=latex,
            override=block.get("override", "").strip().lower() == "true",
            comments=comments,
        )
        if res.key in resolutions:
            raise DuplicateKey(*res.key)
        resolutions[res.key] = res
        block = None
        comments = []

    i = 1
    n = len(lines)
    while i < n:
        raw = lines[i]
        line = raw.strip()
        lineno = i + 1
        if not line:
            i += 1
            continue
        if line == "[line]":
            close_block(lineno)
            block = {}
            comments = []
            block_line = lineno
            i += 1
            continue
        if line.startswith("#"):
            if block is not None:
                comments.append(line)
            i += 1
            continue
        if block is None:
            raise SidecarSyntax(lineno, "content before first [line] block")
        key, sep, value = line.partition("=")
        if not sep:
            raise SidecarSyntax(lineno, f"expected 'key = value', got {line!r}")
        key = key.strip()
        value = value.strip()
        if key == "latex":
            if value != "<<<":
                raise SidecarSyntax(lineno, "latex value must be a <<< heredoc")
            body: list[str] = []
            i += 1
            while i < n and lines[i].rstrip() != ">>>":
                body.append(lines[i])
                i += 1
            if i >= n:
                raise SidecarSyntax(lineno, "unterminated latex heredoc")
            block["latex"] = "\n".join(body)
            i += 1
            continue
        if key in _KNOWN_KEYS:
            if key in block:
                raise SidecarSyntax(lineno, f"duplicate key {key!r} in block")
            block[key] = value
        else:
            # Unknown keys survive as comments so newer files stay mergeable.
            comments.append(f"# {key} = {value}")
        i += 1
    close_block(n)
    return resolutions


def serialize_sidecar(resolutions) -> str:
    if isinstance(resolutions, dict):
        items = list(resolutions.values())
    else:
        items = list(resolutions)
    items.sort(key=lambda r: (r.file, r.index))
    out = [HEADER, ""]
    for res in items:
        out.append("[line]")
        out.append(f"file = {res.file}")
        out.append(f"index = {res.index}")
        out.append(f"crc = 0x{res.crc:08X}")
        out.append(f"status = {res.status}")
        if res.override:
            out.append("override = true")
        out.extend(res.comments)
        out.append("latex = <<<")
        if res.latex:
            out.append(res.latex)
        out.append(">>>")
        out.append("")
    return "\n".join(out)


def export_flags(flagged) -> str:
    """Sidecar text for freshly flagged lines (all blocks pending)."""
    return serialize_sidecar(flagged)


def load_sidecar(path) -> dict[tuple[str, int], Resolution]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_sidecar(fh.read())


def save_sidecar(path, resolutions) -> None:
    """Serialize and replace atomically so readers never see a torn file."""
    text = serialize_sidecar(resolutions)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".resolutions-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def flag_record(
    file: str,
    index: int,
    crc: int,
    reasons: tuple[str, ...],
    auto_attempt: str | None = None,
    preview: str | None = None,
) -> Resolution:
    """Pending block for a line the classifier sent to review."""
    comments = []
    if reasons:
        comments.append("# reasons: " + ", ".join(reasons))
    if preview:
        comments.append("# source: " + preview)
    if auto_attempt:
        comments.append("# auto: " + auto_attempt.replace("\n", " "))
    return Resolution(file=file, index=index, crc=crc, comments=comments)


def match_resolution(
    resolutions: dict[tuple[str, int], Resolution],
    file: str,
    index: int,
    crc: int,
) -> Resolution | None:
    """Resolution for a line, or None; stale CRCs are an error."""
    res = resolutions.get((file, index))
    if res is None:
        return None
    if res.crc != crc:
        raise CrcMismatch(file, index, expected=res.crc, found=crc)
    return res
