"""Exceptions shared across modules and mapped to CLI exit codes."""

from __future__ import annotations


class ChiError(Exception):
    """Base class for all conversion errors."""


class CrcMismatch(ChiError):
    """A resolution's recorded CRC does not match the current line bytes."""

    def __init__(self, file: str, index: int, expected: int, found: int):
        self.file = file
        self.index = index
        self.expected = expected
        self.found = found
        super().__init__(
            f"{file}:{index}: resolution crc 0x{expected:08X} "
            f"does not match line crc 0x{found:08X}"
        )


class UnresolvedManualLine(ChiError):
    """Strict conversion hit manual lines without resolved entries."""

    def __init__(self, keys: list[tuple[str, int]]):
        self.keys = keys
        listing = ", ".join(f"{f}:{i}" for f, i in keys)
        super().__init__(f"unresolved manual lines: {listing}")
