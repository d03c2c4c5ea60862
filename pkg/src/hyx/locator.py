"""
Content Locators

Parses RFC 5147 style locator documents (``char=``, ``line=`` and the
``byte=`` extension), decides whether a locator applies to a document
and applies it to select a segment.

Positions are interstitial: 0 is before the first unit, N after the last of
N units. ``char=11,15`` therefore selects the four units 11, 12, 13 and 14.
Optional RFC 5147 integrity checks ``;length=N`` and ``;md5=<hex>`` restrict
a locator to documents with that byte length and MD5 digest.

Usage:
    from hyx.locator import Locator, select

    loc = Locator.parse("char=11,16")
    select(loc, Document(b"My name is Alice")).segment_bytes  # b"Alice"
"""

from __future__ import annotations

import codecs
import hashlib
import itertools
import re
import sys
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Sequence, Union

from .core import LOCATOR_FORMAT, Document, DocumentId, Resolver, Segment
from .exceptions import (
    EmptyLocatorError,
    InvalidPositionError,
    InvertedRangeError,
    LocatorKindError,
    MalformedLocatorError,
    UnknownSchemeError,
    UnselectableError,
)

# at most 18 digits, so every position fits in 64 bits
_POSITION_RE = re.compile(r"[0-9]{1,18}")
_MD5_RE = re.compile(r"[0-9a-fA-F]{32}")
_ASCII_COMPATIBLE = frozenset({"utf-8", "utf8", "us-ascii", "ascii"})
# codecs that write a byte order mark: (mark, codec writing none) pairs
_SIGNATURE_CODECS = {
    "utf-8-sig": ((codecs.BOM_UTF8, "utf-8"),),
    "utf-16": ((codecs.BOM_UTF16_LE, "utf-16-le"), (codecs.BOM_UTF16_BE, "utf-16-be")),
    "utf-32": ((codecs.BOM_UTF32_LE, "utf-32-le"), (codecs.BOM_UTF32_BE, "utf-32-be")),
}


class Scheme(str, Enum):
    CHAR = "char"
    LINE = "line"
    BYTE = "byte"


class LocatorKind(str, Enum):
    POINT = "point"
    RANGE = "range"


@dataclass(frozen=True)
class Locator:
    scheme: Scheme
    kind: LocatorKind
    start: int
    end: Optional[int] = None
    length: Optional[int] = None
    md5: Optional[str] = None

    def __post_init__(self) -> None:
        if self.start < 0 or (self.end is not None and self.end < 0):
            raise InvalidPositionError("Locator positions must be non-negative")
        if self.kind is LocatorKind.POINT and self.end is not None:
            raise InvalidPositionError("A point locator has no end position")
        if self.kind is LocatorKind.RANGE:
            if self.end is None:
                raise InvalidPositionError("A range locator needs an end position")
            if self.end < self.start:
                raise InvertedRangeError(
                    f"Range end {self.end} lies before its start {self.start}"
                )

    @classmethod
    def point(cls, scheme: Scheme, position: int) -> "Locator":
        return cls(scheme, LocatorKind.POINT, position)

    @classmethod
    def span(cls, scheme: Scheme, start: int, end: int) -> "Locator":
        return cls(scheme, LocatorKind.RANGE, start, end)

    @classmethod
    def parse(cls, text: str) -> "Locator":
        return _parse(text)

    @property
    def is_range(self) -> bool:
        return self.kind is LocatorKind.RANGE

    def render(self) -> str:
        text = f"{self.scheme.value}={self.start}"
        if self.end is not None:
            text += f",{self.end}"
        if self.length is not None:
            text += f";length={self.length}"
        if self.md5 is not None:
            text += f";md5={self.md5}"
        return text

    def __str__(self) -> str:
        return self.render()

    def to_document(self) -> Document:
        """Locators are documents too."""
        return Document(self.render().encode("ascii"), LOCATOR_FORMAT)


class Selection(NamedTuple):
    segment_bytes: bytes
    unit_span: tuple[int, int]


def parse_locator(doc: Union[Document, str]) -> Locator:
    """Parses a locator document."""
    if isinstance(doc, Document):
        try:
            text = doc.data.decode("ascii")
        except UnicodeDecodeError:
            raise MalformedLocatorError("Locator documents must be ASCII") from None
    else:
        text = doc
    return _parse(text)


def _parse(text: str) -> Locator:
    # surrounding whitespace (a trailing newline from an editor) is tolerated
    text = text.strip()
    if not text:
        raise EmptyLocatorError("Empty locator")
    if not text.isascii():
        raise MalformedLocatorError(f"Locator '{text}' is not ASCII")
    if any(ch.isspace() for ch in text):
        raise MalformedLocatorError(f"Whitespace inside locator '{text}'")
    scheme_name, sep, body = text.partition("=")
    if not sep:
        raise MalformedLocatorError(f"Locator '{text}' has no '=' after its scheme")
    try:
        scheme = Scheme(scheme_name)
    except ValueError:
        raise UnknownSchemeError(f"Unknown locator scheme '{scheme_name}'") from None

    positions, *checks = body.split(";")
    parts = positions.split(",")
    if len(parts) > 2 or not all(_POSITION_RE.fullmatch(part) for part in parts):
        raise InvalidPositionError(f"Invalid positions '{positions}' in locator '{text}'")
    start = int(parts[0])
    end = int(parts[1]) if len(parts) == 2 else None
    if end is not None and end < start:
        raise InvertedRangeError(f"Range end {end} lies before its start {start} in '{text}'")

    length: Optional[int] = None
    md5: Optional[str] = None
    for check in checks:
        key, _, value = check.partition("=")
        if key == "length" and length is None and _POSITION_RE.fullmatch(value):
            length = int(value)
        elif key == "md5" and md5 is None and _MD5_RE.fullmatch(value):
            md5 = value.lower()
        else:
            raise MalformedLocatorError(f"Invalid integrity check '{check}' in '{text}'")

    kind = LocatorKind.POINT if end is None else LocatorKind.RANGE
    return Locator(scheme, kind, start, end, length, md5)


def _decode(doc: Document) -> Optional[str]:
    if not doc.is_textual:
        return None
    try:
        return doc.data.decode(doc.charset)
    except (LookupError, UnicodeDecodeError):
        return None


def mark_free_codec(doc: Document) -> tuple[int, str]:
    """Length of the byte order mark ``doc`` starts with, and a codec that writes none."""
    try:
        name = codecs.lookup(doc.charset).name
    except LookupError:
        return 0, doc.charset
    marks = _SIGNATURE_CODECS.get(name)
    if marks is None:
        return 0, doc.charset
    for mark, codec in marks:
        if doc.data.startswith(mark):
            return len(mark), codec
    if name == "utf-8-sig":
        return 0, "utf-8"
    # no mark: the decoder read native byte order
    return 0, f"{name}-{'le' if sys.byteorder == 'little' else 'be'}"


def _char_offsets(doc: Document, text: str) -> Sequence[int]:
    if doc.data.isascii() and doc.charset in _ASCII_COMPATIBLE:
        return range(len(doc.data) + 1)
    mark_length, codec = mark_free_codec(doc)
    encoder = codecs.getincrementalencoder(codec)()
    return list(itertools.accumulate((len(encoder.encode(ch)) for ch in text), initial=mark_length))


def _byte_offsets(scheme: Scheme, doc: Document) -> Optional[Sequence[int]]:
    """Byte offset of every interstitial position, or None if the scheme does not apply."""
    if scheme is Scheme.BYTE:
        return range(len(doc.data) + 1)
    text = _decode(doc)
    if text is None:
        return None
    char_offsets = _char_offsets(doc, text)
    if scheme is Scheme.CHAR:
        return char_offsets
    # LF-terminated lines; an unterminated tail is a line of its own
    line_offsets = [char_offsets[0]]
    line_offsets.extend(char_offsets[i + 1] for i, ch in enumerate(text) if ch == "\n")
    if text and not text.endswith("\n"):
        line_offsets.append(char_offsets[-1])
    return line_offsets


def unit_count(scheme: Scheme, doc: Document) -> Optional[int]:
    """Number of units of ``doc`` under ``scheme``; None when the scheme does not apply."""
    offsets = _byte_offsets(scheme, doc)
    return None if offsets is None else len(offsets) - 1


def _passes_integrity(loc: Locator, doc: Document) -> bool:
    if loc.length is not None and loc.length != len(doc.data):
        return False
    if loc.md5 is not None:
        return hashlib.md5(doc.data, usedforsecurity=False).hexdigest() == loc.md5
    return True


def _checked_offsets(loc: Locator, doc: Document) -> Optional[Sequence[int]]:
    if not _passes_integrity(loc, doc):
        return None
    offsets = _byte_offsets(loc.scheme, doc)
    if offsets is None:
        return None
    last = loc.end if loc.end is not None else loc.start
    return offsets if last < len(offsets) else None


def selectable(loc: Locator, doc: Document) -> bool:
    """Whether ⟨loc, doc⟩ is a segment: the scheme applies and positions are in range."""
    return _checked_offsets(loc, doc) is not None


def _require_offsets(loc: Locator, doc: Document) -> Sequence[int]:
    offsets = _checked_offsets(loc, doc)
    if offsets is None:
        raise UnselectableError(f"Locator '{loc}' does not apply to a document of {len(doc)} bytes")
    return offsets


def resolve_point(loc: Locator, doc: Document) -> int:
    """Byte offset in ``doc.data`` of a point locator."""
    if loc.kind is not LocatorKind.POINT:
        raise LocatorKindError(f"Expected a point locator, got range '{loc}'")
    return _require_offsets(loc, doc)[loc.start]


def resolve_range(loc: Locator, doc: Document) -> tuple[int, int]:
    """Byte span ``[start, end)`` in ``doc.data`` of a range locator."""
    if loc.kind is not LocatorKind.RANGE or loc.end is None:
        raise LocatorKindError(f"Expected a range locator, got point '{loc}'")
    offsets = _require_offsets(loc, doc)
    return offsets[loc.start], offsets[loc.end]


def select(loc: Locator, doc: Document) -> Selection:
    start, end = resolve_range(loc, doc)
    assert loc.end is not None
    return Selection(doc.data[start:end], (loc.start, loc.end))


def transclude(seg: Segment, resolver: Resolver) -> Selection:
    """The units of the segment's document covered by its range locator."""
    return select(seg.locator, resolver(seg.document))


def make_segment(loc: Locator, document_id: DocumentId, doc: Document) -> Segment:
    if not selectable(loc, doc):
        raise UnselectableError(f"Locator '{loc}' is not selectable on {document_id}")
    return Segment(loc, document_id)
