"""AUTO/MANUAL triage.

A line goes to the automatic translator only when every measured feature
stays inside the configured thresholds.  Features are measured on the same
view of the grid the translator uses (display tag stripped), except the row
excursion, which comes from the cursor walk so that glyphs dropped during
tolerant parsing still count against the line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ChiError
from .fonts import FontTables
from .reader import LogicalLine

REASON_ROWS_ABOVE = "ROWS_ABOVE"
REASON_ROWS_BELOW = "ROWS_BELOW"
REASON_UNKNOWN_CELL = "UNKNOWN_CELL"
REASON_UNKNOWN_ESCAPE = "UNKNOWN_ESCAPE"
REASON_AMBIGUOUS_ATTACHMENT = "AMBIGUOUS_ATTACHMENT"
REASON_UNRECOGNIZED_COMPOSITE = "UNRECOGNIZED_COMPOSITE"
REASON_FONT_NOT_ALLOWED = "FONT_NOT_ALLOWED"


class EmptyCorpus(ChiError):
    def __init__(self) -> None:
        super().__init__("no logical lines in corpus")


@dataclass(frozen=True)
class Features:
    rows_above: int
    rows_below: int
    unknown_cells: int
    unknown_escapes: int
    ambiguous_attachments: int
    composite_glyphs_unrecognized: int
    fonts_used: frozenset[int]


@dataclass(frozen=True)
class Thresholds:
    max_rows_above: int = 1
    max_rows_below: int = 1
    allow_unknown: bool = False
    allowed_fonts: frozenset[int] = frozenset({0, 1, 3, 5, 7})


DEFAULT_THRESHOLDS = Thresholds()


@dataclass(frozen=True)
class Verdict:
    auto: bool
    reasons: tuple[str, ...] = ()


def extract_features(line: LogicalLine, tables: FontTables) -> Features:
    from .reader import TokenKind
    from .translate import attach_scripts, strip_tag_cells

    tree = attach_scripts(strip_tag_cells(line, tables), tables, lenient=True)
    min_row, max_row = line.row_span
    return Features(
        rows_above=max(0, -min_row),
        rows_below=max(0, max_row),
        unknown_cells=tree.unknown_cells,
        unknown_escapes=sum(
            1 for t in line.tokens if t.kind is TokenKind.UNKNOWN_ESCAPE
        ),
        ambiguous_attachments=tree.ambiguous_runs,
        composite_glyphs_unrecognized=tree.unrecognized_composites,
        fonts_used=frozenset(c.font for c in line.cells),
    )


def classify(features: Features, thresholds: Thresholds | None = None) -> Verdict:
    t = thresholds or DEFAULT_THRESHOLDS
    reasons: list[str] = []
    if features.rows_above > t.max_rows_above:
        reasons.append(REASON_ROWS_ABOVE)
    if features.rows_below > t.max_rows_below:
        reasons.append(REASON_ROWS_BELOW)
    if features.unknown_cells and not t.allow_unknown:
        reasons.append(REASON_UNKNOWN_CELL)
    if features.unknown_escapes and not t.allow_unknown:
        reasons.append(REASON_UNKNOWN_ESCAPE)
    if features.ambiguous_attachments:
        reasons.append(REASON_AMBIGUOUS_ATTACHMENT)
    if features.composite_glyphs_unrecognized:
        reasons.append(REASON_UNRECOGNIZED_COMPOSITE)
    if not features.fonts_used <= t.allowed_fonts:
        reasons.append(REASON_FONT_NOT_ALLOWED)
    return Verdict(auto=not reasons, reasons=tuple(reasons))


@dataclass
class StatsReport:
    total_lines: int
    auto: int
    manual: int
    manual_pct: float
    reasons: dict[str, int]
    per_file: dict[str, dict[str, int]] = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "total_lines": self.total_lines,
            "auto": self.auto,
            "manual": self.manual,
            "manual_pct": self.manual_pct,
            "reasons": dict(sorted(self.reasons.items())),
            "per_file": {
                name: self.per_file[name] for name in sorted(self.per_file)
            },
        }
        return json.dumps(payload, indent=2, ensure_ascii=False)

    def format_table(self) -> str:
        width = max([len("TOTAL")] + [len(n) for n in self.per_file])
        rows = [f"{'file':<{width}}  {'lines':>6}  {'auto':>6}  {'manual':>6}"]
        rows.append("-" * len(rows[0]))
        for name in sorted(self.per_file):
            s = self.per_file[name]
            rows.append(
                f"{name:<{width}}  {s['total']:>6}  {s['auto']:>6}  {s['manual']:>6}"
            )
        rows.append("-" * len(rows[0]))
        rows.append(
            f"{'TOTAL':<{width}}  {self.total_lines:>6}  {self.auto:>6}"
            f"  {self.manual:>6}  ({self.manual_pct:.2f}% manual)"
        )
        if self.reasons:
            rows.append("")
            rows.append("manual reasons:")
            ordered = sorted(self.reasons.items(), key=lambda kv: (-kv[1], kv[0]))
            for code, count in ordered:
                rows.append(f"  {code:<24}  {count:>6}")
        return "\n".join(rows)


def corpus_stats(
    corpus: Mapping[str, Sequence[LogicalLine]] | Iterable[tuple[str, Sequence[LogicalLine]]],
    tables: FontTables,
    thresholds: Thresholds | None = None,
) -> StatsReport:
    """Classification census over a set of parsed files."""
    items = corpus.items() if isinstance(corpus, Mapping) else corpus
    total = auto = 0
    reasons: dict[str, int] = {}
    per_file: dict[str, dict[str, int]] = {}
    for name, lines in items:
        stats = {"total": 0, "auto": 0, "manual": 0}
        per_file[name] = stats
        for line in lines:
            verdict = classify(extract_features(line, tables), thresholds)
            stats["total"] += 1
            total += 1
            if verdict.auto:
                stats["auto"] += 1
                auto += 1
            else:
                stats["manual"] += 1
                for code in verdict.reasons:
                    reasons[code] = reasons.get(code, 0) + 1
    if total == 0:
        raise EmptyCorpus()
    manual = total - auto
    return StatsReport(
        total_lines=total,
        auto=auto,
        manual=manual,
        manual_pct=round(100.0 * manual / total, 2),
        reasons=reasons,
        per_file=per_file,
    )
