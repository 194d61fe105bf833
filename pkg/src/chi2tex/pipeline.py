"""Batch orchestration: parse, classify, translate, merge, assemble, clean.

Everything here is a pure function of its input bytes and config files, so
converting the same inputs twice yields byte-identical output.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field, replace

from .classify import Thresholds, Verdict
from .errors import UnresolvedManualLine
from .fonts import ConfigParseError, FontTables, load_tables
from .postprocess import Rule, apply_rules, default_rules, load_rules
from .reader import (
    DEFAULT_MAX_ROW,
    ChiDocument,
    line_preview,
    parse_document,
)
from .sidecar import (
    Resolution,
    export_flags,
    flag_record,
    load_sidecar,
    match_resolution,
    save_sidecar,
)
from .translate import (
    AssembleOptions,
    LatexFragment,
    MANUAL_PLACEHOLDER,
    NotAuto,
    assemble_document,
    attempt_translate,
    translate_line,
)

CONFIG_DIR_ENV = "CHI2TEX_CONFIG_DIR"
CONFIG_FILE_NAMES = {
    "fonts": "fonts.conf",
    "rules": "rules.conf",
    "preamble": "preamble.conf",
}
DEFAULT_RESOLUTIONS = "resolutions.txt"


@dataclass
class RunConfig:
    inputs: list[str] = field(default_factory=list)
    fonts_path: str | None = None
    rules_path: str | None = None
    preamble_path: str | None = None
    resolutions_path: str | None = None
    strict: bool = False
    max_rows: int = DEFAULT_MAX_ROW
    thresholds: Thresholds = field(default_factory=Thresholds)


def _config_default(kind: str) -> str | None:
    """Fall back to $CHI2TEX_CONFIG_DIR/<kind>.conf when no flag was given."""
    directory = os.environ.get(CONFIG_DIR_ENV)
    if not directory:
        return None
    path = os.path.join(directory, CONFIG_FILE_NAMES[kind])
    return path if os.path.exists(path) else None


def load_fonts_config(cfg: RunConfig) -> FontTables:
    return load_tables(cfg.fonts_path or _config_default("fonts"))


def load_rules_config(cfg: RunConfig) -> list[Rule]:
    path = cfg.rules_path or _config_default("rules")
    return load_rules(path) if path else default_rules()


def load_preamble_config(cfg: RunConfig) -> AssembleOptions:
    path = cfg.preamble_path or _config_default("preamble")
    if not path:
        return AssembleOptions()
    with open(path, "r", encoding="utf-8") as fh:
        return parse_preamble(fh.read())


def parse_preamble(text: str) -> AssembleOptions:
    """Preamble config: ``documentclass =``, repeatable ``package =``, and an
    optional ``display_fence =`` (empty value removes the fence lines)."""
    options = AssembleOptions()
    packages: list[str] = []
    saw_package = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigParseError(lineno, f"expected key = value, got {line!r}")
        key = key.strip()
        value = value.strip()
        if key == "documentclass":
            if not value:
                raise ConfigParseError(lineno, "empty documentclass")
            options.documentclass = value
        elif key == "package":
            if not value:
                raise ConfigParseError(lineno, "empty package")
            saw_package = True
            packages.append(value)
        elif key == "display_fence":
            options.display_fence = value
        else:
            raise ConfigParseError(lineno, f"unknown key {key!r}")
    if saw_package:
        options.packages = packages
    return options


@dataclass
class LineRecord:
    file: str
    index: int
    line: object  # LogicalLine
    verdict: Verdict
    fragment: LatexFragment | None  # None when the line needs manual review


def effective_thresholds(cfg: RunConfig, tables: FontTables) -> Thresholds:
    # A slot someone bothered to configure is a slot their corpus uses.
    return replace(cfg.thresholds, allowed_fonts=tables.known_slots())


def analyze_path(
    path: str, tables: FontTables, cfg: RunConfig
) -> tuple[ChiDocument, list[LineRecord]]:
    with open(path, "rb") as fh:
        data = fh.read()
    doc = parse_document(data, source_path=path, max_row=cfg.max_rows)
    thresholds = effective_thresholds(cfg, tables)
    records = []
    for line in doc.lines:
        try:
            fragment = translate_line(line, tables, thresholds)
            verdict = Verdict(auto=True)
        except NotAuto as exc:
            fragment = None
            verdict = Verdict(auto=False, reasons=exc.reasons)
        records.append(LineRecord(path, line.index, line, verdict, fragment))
    return doc, records


def analyze_inputs(cfg: RunConfig, tables: FontTables) -> list[LineRecord]:
    records: list[LineRecord] = []
    seen: set[str] = set()
    for path in cfg.inputs:
        if path in seen:
            continue
        seen.add(path)
        _, file_records = analyze_path(path, tables, cfg)
        records.extend(file_records)
    return records


def merge_records(
    records: list[LineRecord],
    resolutions: dict[tuple[str, int], Resolution],
    *,
    strict: bool,
) -> tuple[list[LatexFragment], list[tuple[str, int]]]:
    """Substitute human resolutions into the fragment stream.

    Raises CrcMismatch for stale resolutions; in strict mode raises
    UnresolvedManualLine listing every manual line still unresolved.
    """
    fragments: list[LatexFragment] = []
    unresolved: list[tuple[str, int]] = []
    for rec in records:
        res = match_resolution(resolutions, rec.file, rec.index, rec.line.crc)
        if rec.fragment is not None:
            if res is not None and res.resolved and res.override:
                fragments.append(LatexFragment("text", res.latex))
            else:
                fragments.append(rec.fragment)
            continue
        if res is not None and res.resolved:
            fragments.append(LatexFragment("text", res.latex))
        else:
            unresolved.append((rec.file, rec.index))
            fragments.append(
                LatexFragment("text", MANUAL_PLACEHOLDER.format(index=rec.index))
            )
    if strict and unresolved:
        raise UnresolvedManualLine(unresolved)
    return fragments, unresolved


def convert(cfg: RunConfig, tables: FontTables | None = None) -> tuple[str, dict]:
    """Full pipeline; returns (final document text, summary counts)."""
    tables = tables or load_fonts_config(cfg)
    rules = load_rules_config(cfg)
    preamble = load_preamble_config(cfg)
    records = analyze_inputs(cfg, tables)
    resolutions = {}
    if cfg.resolutions_path and os.path.exists(cfg.resolutions_path):
        resolutions = load_sidecar(cfg.resolutions_path)
    fragments, unresolved = merge_records(records, resolutions, strict=cfg.strict)
    text = assemble_document(fragments, preamble)
    text = apply_rules(text, rules)
    manual = sum(1 for r in records if r.fragment is None)
    summary = {
        "lines": len(records),
        "auto": len(records) - manual,
        "manual": manual,
        "unresolved": len(unresolved),
    }
    return text, summary


def _flag_records(cfg: RunConfig, tables: FontTables) -> list[Resolution]:
    records = analyze_inputs(cfg, tables)
    return [
        flag_record(
            rec.file,
            rec.index,
            rec.line.crc,
            rec.verdict.reasons,
            auto_attempt=attempt_translate(rec.line, tables),
            preview=line_preview(rec.line),
        )
        for rec in records
        if rec.fragment is None
    ]


def flag(cfg: RunConfig, tables: FontTables | None = None) -> tuple[str, int]:
    """Sidecar text for every manual line; returns (text, flagged count)."""
    tables = tables or load_fonts_config(cfg)
    flagged = _flag_records(cfg, tables)
    return export_flags(flagged), len(flagged)


def write_flags(cfg: RunConfig) -> int:
    """Flag manual lines into the sidecar, merging with what is there.

    Existing records whose CRC still matches are kept untouched, so
    re-flagging never discards resolved work.  A changed source line
    resets its record to a fresh pending block.
    """
    tables = load_fonts_config(cfg)
    flagged = _flag_records(cfg, tables)
    path = cfg.resolutions_path or DEFAULT_RESOLUTIONS
    store = load_sidecar(path) if os.path.exists(path) else {}
    for rec in flagged:
        old = store.get(rec.key)
        if old is not None and old.crc == rec.crc:
            continue
        store[rec.key] = rec
    save_sidecar(path, store)
    return len(flagged)


def print_summary(summary: dict, stream=None) -> None:
    stream = stream or sys.stderr
    print(
        f"{summary['lines']} lines: {summary['auto']} auto, "
        f"{summary['manual']} manual, {summary['unresolved']} unresolved",
        file=stream,
    )
