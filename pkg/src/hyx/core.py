"""
Core Domain Types

Documents, content-based identifiers and the segment/link vocabulary shared
by the locator, edit list, store and network modules.

A document is an immutable byte sequence with an optional format tag. Its
identifier is a digest over the bytes only; the tag never takes part in
hashing. Identifiers have one canonical text form, ``<algo>:<hex>``, used in
edit lists, CLI output and HTTP paths alike.

Usage:
    from hyx.core import Document, compute_id, parse_id

    doc = Document(b"Hello, !")
    doc_id = compute_id(doc, HashAlgorithm.SHA1)
    assert parse_id(str(doc_id)) == doc_id
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Callable, Iterable, Iterator, Optional

from .exceptions import (
    DigestLengthError,
    DocumentNotFoundError,
    InvalidDocumentError,
    MalformedIdError,
    UnknownAlgorithmError,
)

if TYPE_CHECKING:
    from .locator import Locator


EDL_FORMAT = "application/prs.hyx-edl"
LOCATOR_FORMAT = "application/prs.hyx-locator"
ID_FORMAT = "application/prs.hyx-id"

_TEXTUAL_FORMATS = frozenset({EDL_FORMAT, LOCATOR_FORMAT, ID_FORMAT})
_MAX_FORMAT_TAG = 255
_HEX_RE = re.compile(r"[0-9a-fA-F]*")


class HashAlgorithm(str, Enum):
    SHA1 = "sha1"
    SHA256 = "sha256"

    @property
    def digest_size(self) -> int:
        return hashlib.new(self.value).digest_size

    def new(self) -> "hashlib._Hash":
        return hashlib.new(self.value)

    @classmethod
    def parse(cls, name: str) -> "HashAlgorithm":
        try:
            return cls(name.lower())
        except ValueError:
            raise UnknownAlgorithmError(f"Unknown hash algorithm '{name}'") from None


DEFAULT_ALGORITHM = HashAlgorithm.SHA256


@dataclass(frozen=True)
class Document:
    """A finite, immutable byte sequence, optionally tagged with a data format."""

    data: bytes
    format_tag: Optional[str] = None

    def __post_init__(self) -> None:
        if not isinstance(self.data, bytes):
            # bytearray/memoryview are copied so later mutation cannot leak in
            object.__setattr__(self, "data", bytes(self.data))
        tag = self.format_tag
        if tag is not None:
            if not tag or len(tag) > _MAX_FORMAT_TAG or not tag.isascii():
                raise InvalidDocumentError(
                    f"Format tag must be 1-{_MAX_FORMAT_TAG} ASCII characters, got {tag!r}"
                )

    @classmethod
    def from_text(
        cls, text: str, format_tag: Optional[str] = None, encoding: str = "utf-8"
    ) -> "Document":
        return cls(text.encode(encoding), format_tag)

    def __len__(self) -> int:
        return len(self.data)

    @property
    def media_type(self) -> Optional[str]:
        if self.format_tag is None:
            return None
        return self.format_tag.split(";", 1)[0].strip().lower()

    @property
    def charset(self) -> str:
        """Text encoding declared by the tag's ``charset=`` parameter, UTF-8 otherwise."""
        if self.format_tag is not None:
            for param in self.format_tag.split(";")[1:]:
                key, _, value = param.partition("=")
                if key.strip().lower() == "charset" and value.strip():
                    return value.strip().strip('"').lower()
        return "utf-8"

    @property
    def is_textual(self) -> bool:
        if self.format_tag is None:
            return True
        media_type = self.media_type or ""
        return (
            media_type.startswith("text/")
            or media_type in _TEXTUAL_FORMATS
            or "charset=" in self.format_tag.lower()
        )


@dataclass(frozen=True)
class DocumentId:
    """Content-based identifier: hash algorithm plus digest of a document's bytes."""

    algorithm: HashAlgorithm
    digest: bytes

    def __post_init__(self) -> None:
        expected = self.algorithm.digest_size
        if len(self.digest) != expected:
            raise DigestLengthError(
                f"{self.algorithm.value} digest must be {expected} bytes, got {len(self.digest)}"
            )

    @property
    def hex(self) -> str:
        return self.digest.hex()

    def __str__(self) -> str:
        return f"{self.algorithm.value}:{self.hex}"

    def to_document(self) -> Document:
        """Identifiers are documents too."""
        return Document(str(self).encode("ascii"), ID_FORMAT)


def compute_id(doc: Document, algorithm: HashAlgorithm = DEFAULT_ALGORITHM) -> DocumentId:
    """Digest of exactly ``doc.data``; the format tag is metadata and is not hashed."""
    hasher = algorithm.new()
    hasher.update(doc.data)
    return DocumentId(algorithm, hasher.digest())


def parse_id(text: str) -> DocumentId:
    """Parses ``<algo>:<hex>``, or a bare 40-character hex string read as SHA-1."""
    text = text.strip()
    if not text:
        raise MalformedIdError("Empty identifier")
    algo_name, sep, hex_digest = text.partition(":")
    if not sep:
        if len(text) == 2 * HashAlgorithm.SHA1.digest_size and _HEX_RE.fullmatch(text):
            return DocumentId(HashAlgorithm.SHA1, bytes.fromhex(text))
        raise MalformedIdError(f"Identifier '{text}' has no algorithm prefix")
    if not algo_name:
        raise MalformedIdError(f"Identifier '{text}' has an empty algorithm prefix")
    algorithm = HashAlgorithm.parse(algo_name)
    if not hex_digest or not _HEX_RE.fullmatch(hex_digest) or len(hex_digest) % 2:
        raise MalformedIdError(f"Malformed digest in identifier '{text}'")
    return DocumentId(algorithm, bytes.fromhex(hex_digest))


Resolver = Callable[[DocumentId], Document]
"""Maps an identifier to its document."""


def resolver_from(
    documents: Iterable[Document], algorithm: HashAlgorithm = DEFAULT_ALGORITHM
) -> Resolver:
    """Builds an in-memory resolver over the given documents."""
    table = {compute_id(doc, algorithm): doc for doc in documents}

    def resolve(doc_id: DocumentId) -> Document:
        try:
            return table[doc_id]
        except KeyError:
            raise DocumentNotFoundError(f"Document {doc_id} not found") from None

    return resolve


@dataclass(frozen=True)
class Segment:
    """A locator paired with the document it was checked to be selectable on.

    Built through ``hyx.locator.make_segment``.
    """

    locator: "Locator"
    document: DocumentId

    def __str__(self) -> str:
        return f"{self.locator} {self.document}"


class LinkKind(str, Enum):
    TRANSCLUSION = "transclusion"
    VERSIONING = "versioning"


@dataclass(frozen=True)
class Link:
    segment: Segment
    kind: Optional[LinkKind] = None
    result: Optional[DocumentId] = None

    def __str__(self) -> str:
        line = str(self.segment)
        if self.kind is not None:
            line = f"{self.kind.value} {line}"
        if self.result is not None:
            line = f"{line} -> {self.result}"
        return line


@dataclass
class LinkSet:
    """Finite set of segments, each optionally annotated.

    Set semantics hold on the segment: adding a segment that is already
    present keeps the first annotation.
    """

    _links: dict[Segment, Link] = field(default_factory=dict)

    @classmethod
    def of(cls, links: Iterable[Link | Segment]) -> "LinkSet":
        link_set = cls()
        for link in links:
            link_set.add(link)
        return link_set

    def add(self, link: Link | Segment) -> None:
        if isinstance(link, Segment):
            link = Link(link)
        self._links.setdefault(link.segment, link)

    @property
    def segments(self) -> frozenset[Segment]:
        return frozenset(self._links)

    def kind_of(self, segment: Segment) -> Optional[LinkKind]:
        return self._links[segment].kind

    def __iter__(self) -> Iterator[Link]:
        return iter(self._links.values())

    def __len__(self) -> int:
        return len(self._links)

    def __contains__(self, item: object) -> bool:
        if isinstance(item, Link):
            return self._links.get(item.segment) == item
        return item in self._links

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinkSet):
            return NotImplemented
        return set(self._links.values()) == set(other._links.values())
