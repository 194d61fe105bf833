"""Synthetic manuscript generator for benchmarks and fuzzing.

Two generators share a seeded RNG: clean lines that the classifier must
accept, and spiked lines carrying exactly one kind of defect each, so a
corpus can be built with a precise manual-review rate.
"""

from __future__ import annotations

import random

# JCUKEN-encoded Russian vocabulary; decodes to real words.
_WORDS = [
    b"gjkt",
    b"pfhzlf",
    b"njrf",
    b"aeyrwbb",
    b"ehfdytybt",
    b"dshf;tybz",
    b"cbcntvs",
    b"xfcnbws",
    b"gjntywbfk",
    b"dytiytuj",
    b"ytrjnjhst",
    b"pflfyyst",
    b"gkjnyjcnb",
    b"j,]tvyst",
    b"yf[jlbv",
    b"gjkexftv",
    b"hfccvjnhbv",
    b"ckexft",
    b"lkz",
    b"ghb",
    b"c",
    b"b",
    b"yt",
    b"njulf",
]

_MATH_LETTERS = b"ABEFGHJKLMPQRTUVWXYabcdfghjkmnpqrstuvwxyz"
_GREEK_LETTERS = b"abgdezhiklmnprstuvfcw"
_SCRIPT_CHARS = b"0123456789ikn"
_OPERATORS = (b"I", b"S", b"N")

INJECTION_KINDS = (
    "deep_script",
    "unknown_escape",
    "unknown_cell",
    "bad_font",
    "orphan_run",
)


def _words(rng: random.Random, low: int, high: int) -> bytes:
    return b" ".join(rng.choice(_WORDS) for _ in range(rng.randint(low, high)))


def _script(rng: random.Random, mark: bytes) -> bytes:
    """One script excursion: mark is the row escape toward the script row."""
    back = b"\\," if mark == b"\\^" else b"\\^"
    body = bytes([rng.choice(_SCRIPT_CHARS)])
    if rng.random() < 0.2:
        body = b"-" + body
    return mark + body + back


def _math_atom(rng: random.Random) -> bytes:
    roll = rng.random()
    if roll < 0.45:
        atom = bytes([rng.choice(_MATH_LETTERS)])
        if rng.random() < 0.5:
            atom += _script(rng, rng.choice((b"\\^", b"\\,")))
        return atom
    if roll < 0.6:
        return b"\\7" + bytes([rng.choice(_GREEK_LETTERS)]) + b"\\1"
    if roll < 0.7:
        return b"\\3" + rng.choice(_OPERATORS) + b" \\1"
    if roll < 0.85:
        return bytes([rng.choice(b"0123456789")])
    return rng.choice((b" = ", b" + ", b" - ", b"/"))


def _math_run(rng: random.Random, atoms: int) -> bytes:
    return b"".join(_math_atom(rng) for _ in range(atoms))


def clean_line(rng: random.Random) -> bytes:
    """Content chunk that classifies AUTO under default thresholds."""
    roll = rng.random()
    if roll < 0.55:
        return b"\\5" + _words(rng, 3, 7)
    if roll < 0.9:
        return (
            b"\\5"
            + _words(rng, 1, 3)
            + b" \\1"
            + _math_run(rng, rng.randint(2, 5))
            + b" \\5"
            + _words(rng, 1, 3)
        )
    tag = str(rng.randint(1, 400)).encode()
    return b"\\1" + _math_run(rng, rng.randint(4, 9)) + b"  (" + tag + b")"


def spiked_line(rng: random.Random, kind: str | None = None) -> bytes:
    """Content chunk guaranteed to classify MANUAL, carrying one defect."""
    kind = kind or rng.choice(INJECTION_KINDS)
    base = b"\\5" + _words(rng, 2, 4) + b" \\1x"
    if kind == "deep_script":
        return base + b"\\^\\^2\\,\\, + y"
    if kind == "unknown_escape":
        return base + b" \\! y"
    if kind == "unknown_cell":
        return base + b" \\9Q\\1 y"
    if kind == "bad_font":
        return base + b" \\2abc\\1 y"
    if kind == "orphan_run":
        return base + b"    \\^2\\,"
    raise ValueError(f"unknown injection kind: {kind!r}")


def chaos_line(rng: random.Random) -> bytes:
    """Arbitrary token soup; exercises tolerant parsing and classification."""
    out = bytearray()
    for _ in range(rng.randint(1, 40)):
        roll = rng.random()
        if roll < 0.5:
            out.append(rng.randint(0x20, 0x7E))
        elif roll < 0.6:
            out += b"\\" + str(rng.randint(0, 9)).encode()
        elif roll < 0.75:
            out += rng.choice((b"\\^", b"\\,", b"\\ ", b"\\&"))
        elif roll < 0.85:
            out += b"\\" + bytes([rng.choice(b"!?*=xyz")])
        elif roll < 0.95:
            out.append(rng.randint(0x7F, 0xFF))
        else:
            out += b" "
    return bytes(out)


def generate_corpus(lines: int, manual_rate: float, seed: int) -> bytes:
    """Whole .chi file with round(lines * manual_rate) spiked lines."""
    rng = random.Random(seed)
    spiked = round(lines * manual_rate)
    spiked_at = frozenset(rng.sample(range(lines), spiked)) if spiked else frozenset()
    chunks = []
    for i in range(lines):
        chunk = spiked_line(rng) if i in spiked_at else clean_line(rng)
        chunks.append(chunk)
    body = b"".join(b"\\+\n" + chunk + b"\n" for chunk in chunks)
    return body + b"\\+\n"
