"""Font slot tables: map (font, glyph byte) pairs to symbols with LaTeX forms.

The manuscripts carry no encoding of their own; each font slot is a private
byte-to-glyph mapping.  Slot 5 follows the JCUKEN typewriter convention
(Latin keycaps standing for the Cyrillic letters on the same keys), slot 1 is
italic math Latin, slot 7 Greek, slot 3 a small operator set, slot 0 plain
digits and punctuation.  Everything else is unknown until configured.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import ChiError
from .reader import Cell


class ConfigParseError(ChiError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class DuplicateOverride(ChiError):
    def __init__(self, lineno: int, font: int, code: int):
        self.lineno = lineno
        self.font = font
        self.code = code
        super().__init__(f"line {lineno}: byte 0x{code:02X} mapped twice in [font.{font}]")


class SymbolClass(Enum):
    CYRILLIC = "cyrillic"
    MATH_LATIN = "math-latin"
    GREEK = "greek"
    OPERATOR = "operator"
    DIGIT_PUNCT = "digit-punct"
    ACCENT_PIECE = "accent-piece"
    UNKNOWN = "unknown"


# Classes that force math mode around their symbols.
MATH_CLASSES = frozenset(
    {SymbolClass.MATH_LATIN, SymbolClass.GREEK, SymbolClass.OPERATOR}
)


@dataclass(frozen=True)
class Symbol:
    klass: SymbolClass
    unicode: str
    latex: str


UNKNOWN = Symbol(SymbolClass.UNKNOWN, "", "")


# Keycap-to-Cyrillic table for the JCUKEN convention.  Punctuation keys that
# carry letters on the Cyrillic layer are included; everything else maps to
# itself.
_JCUKEN_LOWER = {
    "q": "й", "w": "ц", "e": "у", "r": "к", "t": "е", "y": "н", "u": "г",
    "i": "ш", "o": "щ", "p": "з", "[": "х", "]": "ъ",
    "a": "ф", "s": "ы", "d": "в", "f": "а", "g": "п", "h": "р", "j": "о",
    "k": "л", "l": "д", ";": "ж", "'": "э",
    "z": "я", "x": "ч", "c": "с", "v": "м", "b": "и", "n": "т", "m": "ь",
    ",": "б", ".": "ю", "`": "ё",
}
_JCUKEN_UPPER = {
    "Q": "Й", "W": "Ц", "E": "У", "R": "К", "T": "Е", "Y": "Н", "U": "Г",
    "I": "Ш", "O": "Щ", "P": "З", "{": "Х", "}": "Ъ",
    "A": "Ф", "S": "Ы", "D": "В", "F": "А", "G": "П", "H": "Р", "J": "О",
    "K": "Л", "L": "Д", ":": "Ж", '"': "Э",
    "Z": "Я", "X": "Ч", "C": "С", "V": "М", "B": "И", "N": "Т", "M": "Ь",
    "<": "Б", ">": "Ю", "~": "Ё",
}
JCUKEN_TABLE = {**_JCUKEN_LOWER, **_JCUKEN_UPPER}
JCUKEN_INVERSE = {v: k for k, v in JCUKEN_TABLE.items()}


def jcuken_decode(ch: str) -> str:
    """Decode one keycap character; characters off the table map to themselves."""
    return JCUKEN_TABLE.get(ch, ch)


def jcuken_encode(ch: str) -> str:
    """Inverse of jcuken_decode on the Cyrillic letters."""
    return JCUKEN_INVERSE.get(ch, ch)


# Conventional phonetic Latin-to-Greek assignment.  'v' renders the script
# phi seen in the source manuscripts; 'f' keeps the upright variant.
_GREEK_LOWER = {
    "a": ("α", r"\alpha"), "b": ("β", r"\beta"), "g": ("γ", r"\gamma"),
    "d": ("δ", r"\delta"), "e": ("ε", r"\varepsilon"), "z": ("ζ", r"\zeta"),
    "h": ("η", r"\eta"), "q": ("θ", r"\theta"), "i": ("ι", r"\iota"),
    "k": ("κ", r"\kappa"), "l": ("λ", r"\lambda"), "m": ("μ", r"\mu"),
    "n": ("ν", r"\nu"), "x": ("ξ", r"\xi"), "o": ("ο", "o"),
    "p": ("π", r"\pi"), "r": ("ρ", r"\rho"), "s": ("σ", r"\sigma"),
    "t": ("τ", r"\tau"), "u": ("υ", r"\upsilon"), "v": ("φ", r"\varphi"),
    "f": ("ϕ", r"\phi"), "c": ("χ", r"\chi"), "y": ("ψ", r"\psi"),
    "w": ("ω", r"\omega"),
}
_GREEK_UPPER = {
    "G": ("Γ", r"\Gamma"), "D": ("Δ", r"\Delta"), "Q": ("Θ", r"\Theta"),
    "L": ("Λ", r"\Lambda"), "X": ("Ξ", r"\Xi"), "P": ("Π", r"\Pi"),
    "S": ("Σ", r"\Sigma"), "U": ("Υ", r"\Upsilon"), "F": ("Φ", r"\Phi"),
    "Y": ("Ψ", r"\Psi"), "W": ("Ω", r"\Omega"),
}
GREEK_TABLE = {**_GREEK_LOWER, **_GREEK_UPPER}

# Default operator slot contents; byte choices are mnemonic and overridable.
_OPERATOR_DEFAULTS = {
    ord("I"): Symbol(SymbolClass.OPERATOR, "∫", r"\int"),
    ord("N"): Symbol(SymbolClass.OPERATOR, "∇", r"\nabla"),
    ord("S"): Symbol(SymbolClass.OPERATOR, "Σ", r"\sum"),
    ord("."): Symbol(SymbolClass.OPERATOR, "⋅", r"\cdot"),
    ord(">"): Symbol(SymbolClass.ACCENT_PIECE, "→", r"\vec"),
    ord("L"): Symbol(SymbolClass.MATH_LATIN, "ℒ", r"\mathcal{L}"),
}

_CLASS_NAMES = {c.value: c for c in SymbolClass}


def _ascii(code: int) -> str | None:
    return chr(code) if 0x20 <= code < 0x7F else None


def _resolve_cyrillic(code: int) -> Symbol:
    ch = _ascii(code)
    if ch is None:
        return UNKNOWN
    decoded = jcuken_decode(ch)
    if decoded != ch:
        return Symbol(SymbolClass.CYRILLIC, decoded, decoded)
    # Digits and shared punctuation live on the same keycaps in both layers.
    return Symbol(SymbolClass.DIGIT_PUNCT, ch, ch)


def _resolve_math_latin(code: int) -> Symbol:
    ch = _ascii(code)
    if ch is None:
        return UNKNOWN
    if ch.isalpha():
        return Symbol(SymbolClass.MATH_LATIN, ch, ch)
    return Symbol(SymbolClass.DIGIT_PUNCT, ch, ch)


def _resolve_greek(code: int) -> Symbol:
    ch = _ascii(code)
    if ch is None:
        return UNKNOWN
    if ch in GREEK_TABLE:
        uni, latex = GREEK_TABLE[ch]
        return Symbol(SymbolClass.GREEK, uni, latex)
    if not ch.isalpha():
        return Symbol(SymbolClass.DIGIT_PUNCT, ch, ch)
    return UNKNOWN


def _resolve_digit_punct(code: int) -> Symbol:
    ch = _ascii(code)
    if ch is None:
        return UNKNOWN
    return Symbol(SymbolClass.DIGIT_PUNCT, ch, ch)


def _resolve_operator(code: int) -> Symbol:
    return _OPERATOR_DEFAULTS.get(code, UNKNOWN)


def _resolve_unknown(code: int) -> Symbol:
    return UNKNOWN


_CLASS_RESOLVERS = {
    SymbolClass.CYRILLIC: _resolve_cyrillic,
    SymbolClass.MATH_LATIN: _resolve_math_latin,
    SymbolClass.GREEK: _resolve_greek,
    SymbolClass.OPERATOR: _resolve_operator,
    SymbolClass.DIGIT_PUNCT: _resolve_digit_punct,
    SymbolClass.ACCENT_PIECE: _resolve_unknown,
    SymbolClass.UNKNOWN: _resolve_unknown,
}


@dataclass
class FontTable:
    klass: SymbolClass
    overrides: dict[int, Symbol] = field(default_factory=dict)

    def resolve(self, code: int) -> Symbol:
        sym = self.overrides.get(code)
        if sym is None:
            sym = _CLASS_RESOLVERS[self.klass](code)
        return sym


@dataclass
class FontTables:
    slots: dict[int, FontTable]

    def map_cell(self, cell: Cell) -> Symbol:
        table = self.slots.get(cell.font)
        if table is None:
            return UNKNOWN
        return table.resolve(cell.code)

    def slot_class(self, font: int) -> SymbolClass:
        table = self.slots.get(font)
        return table.klass if table else SymbolClass.UNKNOWN

    def known_slots(self) -> frozenset[int]:
        """Slots that can resolve at least some byte to a known symbol."""
        return frozenset(
            font
            for font, table in self.slots.items()
            if table.klass is not SymbolClass.UNKNOWN or table.overrides
        )


def builtin_tables() -> FontTables:
    slots = {n: FontTable(SymbolClass.UNKNOWN) for n in range(10)}
    slots[0] = FontTable(SymbolClass.DIGIT_PUNCT)
    slots[1] = FontTable(SymbolClass.MATH_LATIN)
    slots[3] = FontTable(SymbolClass.OPERATOR)
    slots[5] = FontTable(SymbolClass.CYRILLIC)
    slots[7] = FontTable(SymbolClass.GREEK)
    return FontTables(slots)


def map_cell(cell: Cell, tables: FontTables) -> Symbol:
    """Total on bytes 0x20-0xFF: anything unconfigured resolves to unknown."""
    return tables.map_cell(cell)


def _check_latex(sym: Symbol, lineno: int) -> None:
    if sym.klass is SymbolClass.UNKNOWN:
        return
    if not sym.latex:
        raise ConfigParseError(lineno, "empty latex for a known symbol")
    if sym.klass in MATH_CLASSES or sym.klass is SymbolClass.ACCENT_PIECE:
        if sym.latex.count("{") != sym.latex.count("}"):
            raise ConfigParseError(lineno, f"unbalanced braces in {sym.latex!r}")
        if not (sym.latex.startswith("\\") or len(sym.latex) == 1):
            raise ConfigParseError(
                lineno, f"{sym.latex!r} is neither a control sequence nor a single char"
            )


def load_tables(path: str | None = None, text: str | None = None) -> FontTables:
    """Builtin tables overlaid with a config file.

    Sections are ``[font.N]`` for N in 0..9.  Inside a section, ``class``
    resets the slot's default resolver and ``map.<hex byte>`` adds per-byte
    overrides written as ``<unicode> <latex...>``.
    """
    tables = builtin_tables()
    if text is None:
        if path is None:
            return tables
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()

    current: int | None = None
    seen: set[tuple[int, int]] = set()
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if not (line.startswith("[font.") and line.endswith("]")):
                raise ConfigParseError(lineno, f"bad section {line!r}")
            body = line[len("[font.") : -1]
            if not body.isdigit() or not 0 <= int(body) <= 9:
                raise ConfigParseError(lineno, f"font slot must be 0-9, got {body!r}")
            current = int(body)
            continue
        if "=" not in line:
            raise ConfigParseError(lineno, f"expected key = value, got {line!r}")
        if current is None:
            raise ConfigParseError(lineno, "key outside a [font.N] section")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "class":
            if value not in _CLASS_NAMES:
                raise ConfigParseError(lineno, f"unknown class {value!r}")
            # Replacing the class drops stale overrides from the builtin layer.
            tables.slots[current] = FontTable(_CLASS_NAMES[value])
        elif key.startswith("map."):
            hexbyte = key[len("map.") :]
            try:
                code = int(hexbyte, 16)
            except ValueError:
                raise ConfigParseError(lineno, f"bad byte {hexbyte!r}") from None
            if not 0x20 <= code <= 0xFF:
                raise ConfigParseError(lineno, f"byte 0x{code:02X} outside 0x20-0xFF")
            if (current, code) in seen:
                raise DuplicateOverride(lineno, current, code)
            seen.add((current, code))
            # Overrides inherit the section class; an optional leading class
            # word pins a different one (needed e.g. for accent pieces).
            klass = tables.slots[current].klass
            parts = value.split(None, 1)
            if parts and parts[0] in _CLASS_NAMES:
                sub = value.split(None, 2)
                if len(sub) != 3:
                    raise ConfigParseError(
                        lineno, "expected '[class] <unicode> <latex...>'"
                    )
                klass = _CLASS_NAMES[sub[0]]
                uni, latex = sub[1], sub[2]
            elif len(parts) == 2:
                uni, latex = parts
            else:
                raise ConfigParseError(lineno, "expected '<unicode> <latex...>'")
            sym = Symbol(klass, uni, latex)
            _check_latex(sym, lineno)
            tables.slots[current].overrides[code] = sym
        else:
            raise ConfigParseError(lineno, f"unknown key {key!r}")
    return tables
