"""Shared fixtures: builtin font tables and the bundled sample files."""

from pathlib import Path

import pytest

from chi2tex.fonts import builtin_tables
from chi2tex.reader import parse_document

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def tables():
    return builtin_tables()


@pytest.fixture(scope="session")
def eq142_doc():
    return parse_document((FIXTURES / "eq142.chi").read_bytes(), "eq142.chi")


@pytest.fixture(scope="session")
def review_doc():
    return parse_document(
        (FIXTURES / "review_sample.chi").read_bytes(), "review_sample.chi"
    )


@pytest.fixture(scope="session")
def golden_tex():
    return (FIXTURES / "eq142_golden.tex").read_text(encoding="utf-8")
