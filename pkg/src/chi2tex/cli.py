"""Command-line entry points.

Exit codes: 0 success, 1 I/O or config failure, 2 unresolved manual lines in
strict mode, 3 stale resolution CRC, 64 usage errors.
"""

from __future__ import annotations

import sys

import click

from .classify import corpus_stats
from .errors import ChiError, CrcMismatch, UnresolvedManualLine
from .pipeline import (
    DEFAULT_RESOLUTIONS,
    RunConfig,
    convert,
    effective_thresholds,
    load_fonts_config,
    print_summary,
    write_flags,
)
from .reader import DEFAULT_MAX_ROW, parse_document

EXIT_OK = 0
EXIT_IO = 1
EXIT_UNRESOLVED = 2
EXIT_CRC = 3
EXIT_USAGE = 64


def _common_options(f):
    f = click.option(
        "--fonts", "fonts_path", type=click.Path(), default=None,
        help="Font table config file.",
    )(f)
    f = click.option(
        "--max-rows", "max_rows", type=int, default=DEFAULT_MAX_ROW,
        show_default=True, help="Row offset limit before a line counts as corrupt.",
    )(f)
    return f


def _run_config(inputs, **kwargs) -> RunConfig:
    return RunConfig(inputs=list(inputs), **kwargs)


@click.group()
def cli() -> None:
    """Semi-automatic ChiWriter to LaTeX converter."""


@cli.command(name="convert")
@click.argument("inputs", nargs=-1, required=True, type=click.Path())
@click.option("-o", "--output", type=click.Path(), default=None,
              help="Output .tex path (stdout when omitted).")
@click.option("--rules", "rules_path", type=click.Path(), default=None,
              help="Postprocess rules file.")
@click.option("--preamble", "preamble_path", type=click.Path(), default=None,
              help="Preamble config file.")
@click.option("--resolutions", "resolutions_path", type=click.Path(), default=None,
              help="Resolutions sidecar to merge.")
@click.option("--strict", is_flag=True, help="Fail on unresolved manual lines.")
@_common_options
def cmd_convert(inputs, output, rules_path, preamble_path, resolutions_path,
                strict, fonts_path, max_rows):
    """Convert .chi files into one LaTeX document."""
    cfg = _run_config(
        inputs,
        fonts_path=fonts_path,
        rules_path=rules_path,
        preamble_path=preamble_path,
        resolutions_path=resolutions_path,
        strict=strict,
        max_rows=max_rows,
    )
    text, summary = convert(cfg)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print_summary(summary)


@cli.command(name="merge")
@click.argument("inputs", nargs=-1, required=True, type=click.Path())
@click.option("-o", "--output", type=click.Path(), default=None)
@click.option("--rules", "rules_path", type=click.Path(), default=None)
@click.option("--preamble", "preamble_path", type=click.Path(), default=None)
@click.option("--resolutions", "resolutions_path", required=True,
              type=click.Path(exists=True), help="Resolutions sidecar to merge.")
@click.option("--strict", is_flag=True, help="Fail on unresolved manual lines.")
@_common_options
def cmd_merge(inputs, output, rules_path, preamble_path, resolutions_path,
              strict, fonts_path, max_rows):
    """Convert with a required resolutions sidecar."""
    cfg = _run_config(
        inputs,
        fonts_path=fonts_path,
        rules_path=rules_path,
        preamble_path=preamble_path,
        resolutions_path=resolutions_path,
        strict=strict,
        max_rows=max_rows,
    )
    text, summary = convert(cfg)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print_summary(summary)


@cli.command(name="stats")
@click.argument("inputs", nargs=-1, required=True, type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of a table.")
@_common_options
def cmd_stats(inputs, as_json, fonts_path, max_rows):
    """Classification statistics over a corpus."""
    cfg = _run_config(inputs, fonts_path=fonts_path, max_rows=max_rows)
    tables = load_fonts_config(cfg)
    corpus = []
    for path in cfg.inputs:
        with open(path, "rb") as fh:
            doc = parse_document(fh.read(), source_path=path, max_row=max_rows)
        corpus.append((path, doc.lines))
    report = corpus_stats(corpus, tables, effective_thresholds(cfg, tables))
    click.echo(report.to_json() if as_json else report.format_table())


@cli.command(name="flag")
@click.argument("inputs", nargs=-1, required=True, type=click.Path())
@click.option("--resolutions", "resolutions_path", type=click.Path(),
              default=DEFAULT_RESOLUTIONS, show_default=True,
              help="Sidecar file to write.")
@_common_options
def cmd_flag(inputs, resolutions_path, fonts_path, max_rows):
    """Export manual lines to a resolutions sidecar."""
    cfg = _run_config(
        inputs,
        fonts_path=fonts_path,
        resolutions_path=resolutions_path,
        max_rows=max_rows,
    )
    count = write_flags(cfg)
    click.echo(f"{count} lines flagged to {resolutions_path}", err=True)


@cli.command(name="synth")
@click.option("-n", "--lines", type=int, default=11000, show_default=True)
@click.option("--rate", type=float, default=0.02, show_default=True,
              help="Fraction of lines carrying an injected defect.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", type=click.Path(), required=True)
def cmd_synth(lines, rate, seed, output):
    """Generate a synthetic .chi corpus."""
    from .synth import generate_corpus

    data = generate_corpus(lines, rate, seed)
    with open(output, "wb") as fh:
        fh.write(data)
    click.echo(f"wrote {lines} lines to {output}", err=True)


@cli.command(name="review")
@click.argument("inputs", nargs=-1, required=True, type=click.Path())
@click.option("--resolutions", "resolutions_path", type=click.Path(),
              default=DEFAULT_RESOLUTIONS, show_default=True,
              help="Sidecar file backing the review session.")
@click.option("--serve", "serve", default="127.0.0.1:8077", show_default=True,
              metavar="ADDR:PORT", help="Bind address for the review server.")
@_common_options
def cmd_review(inputs, resolutions_path, serve, fonts_path, max_rows):
    """Serve the browser review UI for the manual queue."""
    # Imported lazily: batch commands must not pay the server stack's cost.
    from .server import serve_review

    cfg = _run_config(
        inputs,
        fonts_path=fonts_path,
        resolutions_path=resolutions_path,
        max_rows=max_rows,
    )
    addr, _, port = serve.rpartition(":")
    if not addr or not port.isdigit():
        raise click.UsageError(f"--serve expects ADDR:PORT, got {serve!r}")
    serve_review(cfg, host=addr, port=int(port))


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return EXIT_OK
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_IO
    except click.exceptions.Abort:
        return 130
    except UnresolvedManualLine as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except CrcMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CRC
    except (ChiError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
