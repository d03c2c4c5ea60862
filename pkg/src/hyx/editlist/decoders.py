"""
Edit list format: types, line grammar, parser and canonical renderer.

Grammar (one statement per line, surrounding whitespace ignored, blank
lines and ``#`` comments skipped):

    %hyx-edl 1                  optional magic line, first statement only
    take <ref>
    insert at <ref>             followed by ``from <ref>`` and ``segment <ref>``
    delete <ref>
    replace <ref>               followed by ``from <ref>`` and ``segment <ref>``

A ``<ref>`` is a canonical id (``sha1:…``), a bare 40-digit hex SHA-1, or a
double-quoted inline literal with ``\\"``, ``\\\\``, ``\\n`` and ``\\t``
escapes. Edit lists without the magic line and with bare-hex ids parse too.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from ..core import EDL_FORMAT, Document, DocumentId, parse_id
from ..exceptions import (
    DanglingOperationError,
    EditListSyntaxError,
    IdentifierError,
    InlineTooLargeError,
    MalformedRefError,
    TakeCountError,
    UnknownKeywordError,
    UnsupportedVersionError,
)

MAGIC = "%hyx-edl"
VERSION = 1
MAX_INLINE_BYTES = 64 * 1024

_STATEMENT_RE = re.compile(
    r"(?P<keyword>take|insert\s+at|from|segment|delete|replace)(?:\s+(?P<ref>.*))?"
)
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}
_UNESCAPES = {value: f"\\{key}" for key, value in _ESCAPES.items()}


@dataclass(frozen=True)
class IdRef:
    id: DocumentId

    def render(self) -> str:
        return str(self.id)


@dataclass(frozen=True)
class InlineRef:
    data: bytes

    def render(self) -> str:
        try:
            text = self.data.decode("utf-8")
        except UnicodeDecodeError:
            raise MalformedRefError("Inline literals must be valid UTF-8") from None
        return '"' + "".join(_UNESCAPES.get(ch, ch) for ch in text) + '"'


Ref = Union[IdRef, InlineRef]


@dataclass(frozen=True)
class Take:
    base: Ref


@dataclass(frozen=True)
class Insert:
    at: Ref
    source: Ref
    segment: Ref


@dataclass(frozen=True)
class Delete:
    segment: Ref


@dataclass(frozen=True)
class Replace:
    at: Ref
    source: Ref
    segment: Ref


EditOp = Union[Take, Insert, Delete, Replace]


@dataclass(frozen=True)
class EditList:
    ops: tuple[EditOp, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.ops, tuple):
            object.__setattr__(self, "ops", tuple(self.ops))
        takes = sum(isinstance(op, Take) for op in self.ops)
        if not self.ops or not isinstance(self.ops[0], Take) or takes != 1:
            raise TakeCountError("An edit list starts with exactly one 'take'")

    @property
    def base(self) -> Ref:
        take = self.ops[0]
        assert isinstance(take, Take)
        return take.base

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[EditOp]:
        return iter(self.ops)

    def refs(self) -> Iterator[tuple[int, str, Ref]]:
        """Yields ``(op_index, role, ref)`` for every reference, in order."""
        for index, op in enumerate(self.ops):
            if isinstance(op, Take):
                yield index, "take", op.base
            elif isinstance(op, Delete):
                yield index, "delete", op.segment
            else:
                yield index, "at", op.at
                yield index, "from", op.source
                yield index, "segment", op.segment

    def to_document(self) -> Document:
        """Edit lists are documents too."""
        return Document(render_edit_list(self).encode("utf-8"), EDL_FORMAT)


def render_edit_list(edit_list: EditList) -> str:
    lines = [f"{MAGIC} {VERSION}"]
    for op in edit_list.ops:
        if isinstance(op, Take):
            lines.append(f"take {op.base.render()}")
        elif isinstance(op, Delete):
            lines.append(f"delete {op.segment.render()}")
        else:
            keyword = "insert at" if isinstance(op, Insert) else "replace"
            lines.append(f"{keyword} {op.at.render()}")
            lines.append(f"  from {op.source.render()}")
            lines.append(f"  segment {op.segment.render()}")
    return "\n".join(lines) + "\n"


class EditListDecoder:
    """Decodes the text of an edit list document statement by statement."""

    def __init__(self, text: str, max_inline: int = MAX_INLINE_BYTES) -> None:
        self.max_inline = max_inline
        self.statements = list(self.read_statements(text))
        self.position = 0

    @staticmethod
    def read_statements(text: str) -> Iterator[tuple[int, str]]:
        # only LF separates lines so a CR inside a quoted literal survives
        for lineno, line in enumerate(text.split("\n"), start=1):
            line = line.strip()
            if line and not line.startswith("#"):
                yield lineno, line

    def decode(self) -> EditList:
        if self.statements and self.statements[0][1].startswith("%"):
            self.read_magic(*self.statements[0])
            self.position = 1
        ops: list[EditOp] = []
        while self.position < len(self.statements):
            ops.append(self.read_op())
        if not ops:
            raise TakeCountError("Edit list has no 'take' operation")
        takes = [i for i, op in enumerate(ops) if isinstance(op, Take)]
        if takes != [0]:
            raise TakeCountError(
                "An edit list needs exactly one 'take' as its first operation,"
                f" found {len(takes)}"
            )
        return EditList(tuple(ops))

    def read_magic(self, lineno: int, line: str) -> None:
        magic, _, version = line.partition(" ")
        if magic != MAGIC:
            raise UnknownKeywordError(f"Unknown header '{magic}'", lineno)
        if version.strip() != str(VERSION):
            raise UnsupportedVersionError(
                f"Unsupported edit list version '{version.strip()}'", lineno
            )

    def read_statement(self) -> tuple[int, str, Optional[str]]:
        lineno, line = self.statements[self.position]
        self.position += 1
        match = _STATEMENT_RE.fullmatch(line)
        if match is None:
            keyword = line.split(None, 1)[0]
            raise UnknownKeywordError(f"Unknown keyword '{keyword}'", lineno)
        keyword = " ".join(match["keyword"].split())
        return lineno, keyword, match["ref"]

    def read_op(self) -> EditOp:
        lineno, keyword, ref_text = self.read_statement()
        if keyword in ("from", "segment"):
            raise DanglingOperationError(
                f"'{keyword}' without a preceding 'insert at' or 'replace'", lineno
            )
        ref = self.read_ref(ref_text, lineno)
        if keyword == "take":
            return Take(ref)
        if keyword == "delete":
            return Delete(ref)
        source = self.read_continuation("from", keyword, lineno)
        segment = self.read_continuation("segment", keyword, lineno)
        if keyword == "insert at":
            return Insert(ref, source, segment)
        return Replace(ref, source, segment)

    def read_continuation(self, expected: str, owner: str, owner_line: int) -> Ref:
        if self.position >= len(self.statements):
            raise DanglingOperationError(f"'{owner}' is missing its '{expected}' line", owner_line)
        lineno, line = self.statements[self.position]
        if not _STATEMENT_RE.fullmatch(line) or line.split(None, 1)[0] != expected:
            raise DanglingOperationError(f"'{owner}' is missing its '{expected}' line", lineno)
        _, _, ref_text = self.read_statement()
        return self.read_ref(ref_text, lineno)

    def read_ref(self, text: Optional[str], lineno: int) -> Ref:
        if not text:
            raise MalformedRefError("Missing reference", lineno)
        if text.startswith('"'):
            return InlineRef(self.read_literal(text, lineno))
        try:
            return IdRef(parse_id(text))
        except IdentifierError as err:
            raise MalformedRefError(f"Invalid reference '{text}': {err}", lineno) from err

    def read_literal(self, text: str, lineno: int) -> bytes:
        chars: list[str] = []
        index = 1
        while index < len(text):
            ch = text[index]
            if ch == '"':
                if index != len(text) - 1:
                    raise MalformedRefError("Unexpected text after inline literal", lineno)
                data = "".join(chars).encode("utf-8")
                if len(data) > self.max_inline:
                    raise InlineTooLargeError(
                        f"Inline literal of {len(data)} bytes exceeds {self.max_inline}", lineno
                    )
                return data
            if ch == "\\":
                escaped = text[index + 1 : index + 2]
                if escaped not in _ESCAPES:
                    raise MalformedRefError(f"Unknown escape '\\{escaped}'", lineno)
                chars.append(_ESCAPES[escaped])
                index += 2
                continue
            chars.append(ch)
            index += 1
        raise MalformedRefError("Unterminated inline literal", lineno)


def parse_edit_list(doc: Document, max_inline: int = MAX_INLINE_BYTES) -> EditList:
    """Parses an edit list document (E ⊂ D)."""
    try:
        text = doc.data.decode("utf-8")
    except UnicodeDecodeError as err:
        raise EditListSyntaxError(f"Edit list is not valid UTF-8: {err}") from None
    return EditListDecoder(text, max_inline).decode()
