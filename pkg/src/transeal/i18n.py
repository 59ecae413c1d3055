"""Language tags, transliteration standards and calendar-year conversions.

Language tags follow the classic registry grammar: a primary subtag of one
to eight ASCII letters, optionally followed by ``-``-separated subtags of
one to eight ASCII letters or digits.  Both two-letter and three-letter
primary subtags are valid ("en" and "eng" name the same language; we do not
canonicalize between them, we only validate).

Transliteration lookups map a source script to the list of applicable
romanization standards.  Calendar conversions are fixed-offset year maps
(for example the Thai Buddhist calendar runs 543 years ahead of the
Gregorian one).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, Literal

from .errors import InvalidLanguageTag, OutOfDomain, ParseError
from .xmlutil import format_timestamp

__all__ = [
    "LanguageTag",
    "validate_language_tag",
    "TransliterationRegistry",
    "DEFAULT_TRANSLITERATIONS",
    "CalendarConversion",
    "THAI_BUDDHIST_GREGORIAN",
    "CALENDAR_CONVERSIONS",
    "convert_year",
    "format_utc",
]

_LETTERS = re.compile(r"[A-Za-z]\Z")
_ALNUM = re.compile(r"[A-Za-z0-9]\Z")


@dataclass(frozen=True)
class LanguageTag:
    raw: str
    primary_subtag: str
    subtags: tuple[str, ...]


def validate_language_tag(raw: str) -> LanguageTag:
    """Validate ``raw`` against the tag grammar.

    Returns the parsed tag or raises :class:`InvalidLanguageTag` whose
    ``position`` points at the first offending character.
    """
    if raw == "":
        raise InvalidLanguageTag("empty language tag", position=0)
    offset = 0
    parts = raw.split("-")
    for index, part in enumerate(parts):
        charset = _LETTERS if index == 0 else _ALNUM
        kind = "primary subtag" if index == 0 else "subtag"
        if part == "":
            raise InvalidLanguageTag(f"empty {kind}", position=offset)
        if len(part) > 8:
            raise InvalidLanguageTag(
                f"{kind} longer than 8 characters", position=offset + 8
            )
        for i, ch in enumerate(part):
            if not charset.match(ch):
                raise InvalidLanguageTag(
                    f"invalid character {ch!r} in {kind}", position=offset + i
                )
        offset += len(part) + 1
    return LanguageTag(raw=raw, primary_subtag=parts[0], subtags=tuple(parts[1:]))


# --- transliteration --------------------------------------------------------

# script -> romanization standards, in preference order
DEFAULT_TRANSLITERATIONS: dict[str, tuple[str, ...]] = {
    "Arabic": ("ISO 233", "DIN 31635"),
    "Greek": ("ISO 843", "DIN 31634"),
    "Hebrew": ("ISO 259", "DIN 31636"),
    "Cyrillic": ("ISO 9", "DIN 1460"),
}


class TransliterationRegistry:
    """Maps source scripts to their applicable transliteration standards."""

    def __init__(self, rows: dict[str, Iterable[str]] | None = None):
        source = rows if rows is not None else DEFAULT_TRANSLITERATIONS
        self._rows: dict[str, tuple[str, ...]] = {
            script: tuple(standards) for script, standards in source.items()
        }

    def lookup(self, script: str) -> tuple[str, ...]:
        return self._rows.get(script, ())

    def scripts(self) -> tuple[str, ...]:
        return tuple(self._rows)

    def knows(self, script: str, standard: str) -> bool:
        return standard in self._rows.get(script, ())

    @classmethod
    def from_config(cls, text: str) -> "TransliterationRegistry":
        """Load from a text config: one ``script<TAB>standard`` row per line.

        Blank lines and ``#`` comments are skipped; repeated script rows
        accumulate standards in file order.
        """
        rows: dict[str, list[str]] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "\t" not in stripped:
                raise ParseError(
                    f"transliteration config line {lineno}: expected script<TAB>standard"
                )
            script, standard = stripped.split("\t", 1)
            script, standard = script.strip(), standard.strip()
            if not script or not standard:
                raise ParseError(
                    f"transliteration config line {lineno}: empty script or standard"
                )
            rows.setdefault(script, []).append(standard)
        return cls({script: tuple(vals) for script, vals in rows.items()})

    def to_config(self) -> str:
        lines = [
            f"{script}\t{standard}"
            for script, standards in self._rows.items()
            for standard in standards
        ]
        return "\n".join(lines) + "\n"


# --- calendar conversion ----------------------------------------------------

Direction = Literal["to_gregorian", "from_gregorian"]


@dataclass(frozen=True)
class CalendarConversion:
    """Fixed-offset year conversion between a calendar and the Gregorian one.

    ``offset_years`` is how far the source calendar runs ahead of the
    Gregorian calendar; the conversion is a bijection on its domain.
    """

    method_label: str
    offset_years: int


THAI_BUDDHIST_GREGORIAN = CalendarConversion("buddhist-gregorian-th", 543)

CALENDAR_CONVERSIONS: dict[str, CalendarConversion] = {
    THAI_BUDDHIST_GREGORIAN.method_label: THAI_BUDDHIST_GREGORIAN,
}


def convert_year(
    conversion: CalendarConversion, year: int, direction: Direction
) -> int:
    """Convert a calendar year; Gregorian years must stay >= 1."""
    if direction == "to_gregorian":
        result = year - conversion.offset_years
        if result < 1:
            raise OutOfDomain(
                f"{conversion.method_label}: year {year} maps below Gregorian year 1"
            )
        return result
    if direction == "from_gregorian":
        if year < 1:
            raise OutOfDomain(
                f"{conversion.method_label}: Gregorian year {year} out of domain"
            )
        return year + conversion.offset_years
    raise ValueError(f"unknown conversion direction {direction!r}")


def format_utc(value: datetime | int | float) -> str:
    """Canonical UTC rendering; accepts datetimes or epoch seconds."""
    if isinstance(value, (int, float)):
        value = datetime.fromtimestamp(value, tz=timezone.utc)
    return format_timestamp(value)
