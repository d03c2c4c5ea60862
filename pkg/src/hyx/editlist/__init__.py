"""Edit lists: parsing, assembly (A), segment usage (U) and link derivation."""

from typing import Optional

from ..core import (
    DEFAULT_ALGORITHM,
    Document,
    DocumentId,
    HashAlgorithm,
    Link,
    LinkKind,
    LinkSet,
    Resolver,
    Segment,
    compute_id,
)
from .decoders import (
    MAX_INLINE_BYTES,
    Delete,
    EditList,
    EditOp,
    IdRef,
    InlineRef,
    Insert,
    Ref,
    Replace,
    Take,
    parse_edit_list,
    render_edit_list,
)
from .helpers import Assembler, LocatorCheck, RefCheck, VerificationReport, Verifier

__all__ = [
    "MAX_INLINE_BYTES",
    "Assembler",
    "Delete",
    "EditList",
    "EditOp",
    "IdRef",
    "InlineRef",
    "Insert",
    "LocatorCheck",
    "Ref",
    "RefCheck",
    "Replace",
    "Take",
    "VerificationReport",
    "assemble",
    "derive_links",
    "parse_edit_list",
    "render_edit_list",
    "usage",
    "verify",
]


def assemble(
    edit_list: EditList,
    resolver: Resolver,
    algorithm: HashAlgorithm = DEFAULT_ALGORITHM,
) -> Document:
    """Builds the document an edit list describes.

    The output depends only on the edit list and the bytes the resolver
    returns. Any failing operation aborts with an ``AssemblyError`` that
    carries the operation's index.

    Args:
        edit_list (EditList): Parsed edit list.
        resolver (Resolver): Retrieval function for referenced documents.
          Must return the same bytes for the same id during the call.
        algorithm (HashAlgorithm): Algorithm used to identify inline literals
          and intermediate working documents.

    Returns:
        The assembled document, carrying the format tag of the ``take`` base.
    """
    return Assembler(resolver, algorithm).run(edit_list)


def _collect(
    edit_list: EditList, resolver: Resolver, algorithm: HashAlgorithm
) -> tuple[Document, list[tuple[Segment, LinkKind]]]:
    consumed: list[tuple[Segment, LinkKind]] = []
    assembler = Assembler(resolver, algorithm, on_segment=lambda s, k: consumed.append((s, k)))
    return assembler.run(edit_list), consumed


def usage(
    edit_list: EditList,
    resolver: Resolver,
    algorithm: HashAlgorithm = DEFAULT_ALGORITHM,
) -> LinkSet:
    """U: the set of segments the edit list consumes when assembled.

    Point locators are included. A ``take`` alone consumes no segment.
    """
    _, consumed = _collect(edit_list, resolver, algorithm)
    return LinkSet.of(segment for segment, _ in consumed)


def derive_links(
    edit_list: EditList,
    resolver: Resolver,
    result: Optional[DocumentId] = None,
    algorithm: HashAlgorithm = DEFAULT_ALGORITHM,
) -> LinkSet:
    """Annotates ``usage`` as hyperlinks into the assembled document.

    Segments of the working document are ``versioning`` links, segments of
    ``from`` documents are ``transclusion`` links. Each link records
    ``result``, the id of the assembled document, computed when omitted.
    """
    output, consumed = _collect(edit_list, resolver, algorithm)
    if result is None:
        result = compute_id(output, algorithm)
    return LinkSet.of(Link(segment, kind, result) for segment, kind in consumed)


def verify(
    edit_list: EditList,
    resolver: Resolver,
    algorithm: HashAlgorithm = DEFAULT_ALGORITHM,
) -> VerificationReport:
    """Checks every reference and locator of an edit list without producing output."""
    return Verifier(resolver, algorithm).run(edit_list)
