from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from typing_extensions import assert_never

from ..core import (
    DEFAULT_ALGORITHM,
    Document,
    DocumentId,
    HashAlgorithm,
    LinkKind,
    Resolver,
    Segment,
    compute_id,
)
from ..exceptions import AssemblyError, HyxError, SelectionError
from ..locator import (
    Locator,
    LocatorKind,
    make_segment,
    mark_free_codec,
    parse_locator,
    resolve_point,
    resolve_range,
    select,
    selectable,
)
from ..utils.logger import setup_logger
from .decoders import Delete, EditList, EditOp, IdRef, Insert, Ref, Replace, Take

logger = setup_logger(__name__)

SegmentHook = Callable[[Segment, LinkKind], None]


def resolve_ref(
    ref: Ref, resolver: Resolver, algorithm: HashAlgorithm
) -> tuple[DocumentId, Document]:
    """Resolves a reference; an inline literal stands for the id of its bytes."""
    if isinstance(ref, IdRef):
        return ref.id, resolver(ref.id)
    doc = Document(ref.data)
    return compute_id(doc, algorithm), doc


def _transcode(data: bytes, source: Document, target: Document) -> bytes:
    if not (source.is_textual and target.is_textual):
        return data
    source_codec = mark_free_codec(source)[1]
    target_codec = mark_free_codec(target)[1]
    if source_codec == target_codec:
        return data
    try:
        return data.decode(source_codec).encode(target_codec)
    except (LookupError, UnicodeError) as err:
        raise SelectionError(
            f"Segment cannot be re-encoded from {source.charset} to {target.charset}: {err}"
        ) from err


class Assembler:
    """Applies edit operations left to right to a working document.

    Later operations address the working document as left by earlier ones.
    Every ⟨locator, document⟩ pair an operation consumes is reported to
    ``on_segment`` together with its link kind: pairs over the working
    document are versioning links, pairs over a ``from`` document are
    transclusion links.
    """

    def __init__(
        self,
        resolver: Resolver,
        algorithm: HashAlgorithm = DEFAULT_ALGORITHM,
        on_segment: Optional[SegmentHook] = None,
    ) -> None:
        self.resolver = resolver
        self.algorithm = algorithm
        self.on_segment = on_segment

        self.working: Optional[Document] = None
        # id of the working document as referenced while it is unmodified
        self._working_id: Optional[DocumentId] = None

    def run(self, edit_list: EditList) -> Document:
        for index, op in enumerate(edit_list.ops):
            try:
                self.process_op(op)
            except HyxError as err:
                raise AssemblyError(index, err) from err
        assert self.working is not None
        return self.working

    def process_op(self, op: EditOp) -> None:
        if isinstance(op, Take):
            self.process_take(op)
        elif isinstance(op, Insert):
            self.process_insert(op)
        elif isinstance(op, Delete):
            self.process_delete(op)
        elif isinstance(op, Replace):
            self.process_replace(op)
        else:
            assert_never(op)

    @property
    def working_id(self) -> DocumentId:
        if self._working_id is None:
            assert self.working is not None
            self._working_id = compute_id(self.working, self.algorithm)
        return self._working_id

    def resolve(self, ref: Ref) -> tuple[DocumentId, Document]:
        return resolve_ref(ref, self.resolver, self.algorithm)

    def read_locator(self, ref: Ref) -> Locator:
        return parse_locator(self.resolve(ref)[1])

    def record(self, loc: Locator, doc_id: DocumentId, doc: Document, kind: LinkKind) -> None:
        segment = make_segment(loc, doc_id, doc)
        if self.on_segment is not None:
            self.on_segment(segment, kind)

    def splice(self, start: int, end: int, data: bytes) -> None:
        assert self.working is not None
        working = self.working.data
        self.working = Document(working[:start] + data + working[end:], self.working.format_tag)
        self._working_id = None

    def read_source(self, source_ref: Ref, segment_ref: Ref) -> bytes:
        source_id, source = self.resolve(source_ref)
        loc = self.read_locator(segment_ref)
        selection = select(loc, source)
        self.record(loc, source_id, source, LinkKind.TRANSCLUSION)
        assert self.working is not None
        return _transcode(selection.segment_bytes, source, self.working)

    def process_take(self, op: Take) -> None:
        self._working_id, self.working = self.resolve(op.base)
        logger.debug(f"take {self._working_id} ({len(self.working)} bytes)")

    def process_insert(self, op: Insert) -> None:
        assert self.working is not None
        at = self.read_locator(op.at)
        offset = resolve_point(at, self.working)
        self.record(at, self.working_id, self.working, LinkKind.VERSIONING)
        data = self.read_source(op.source, op.segment)
        self.splice(offset, offset, data)

    def process_delete(self, op: Delete) -> None:
        assert self.working is not None
        loc = self.read_locator(op.segment)
        start, end = resolve_range(loc, self.working)
        self.record(loc, self.working_id, self.working, LinkKind.VERSIONING)
        self.splice(start, end, b"")

    def process_replace(self, op: Replace) -> None:
        assert self.working is not None
        at = self.read_locator(op.at)
        start, end = resolve_range(at, self.working)
        self.record(at, self.working_id, self.working, LinkKind.VERSIONING)
        data = self.read_source(op.source, op.segment)
        self.splice(start, end, data)


@dataclass(frozen=True)
class RefCheck:
    op_index: int
    role: str
    ref: Ref
    resolved: bool
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.resolved

    def describe(self) -> str:
        name = str(self.ref.id) if isinstance(self.ref, IdRef) else self.ref.render()
        status = "resolved" if self.resolved else "unresolved"
        return f"op {self.op_index} {self.role} {name} {status}" + (
            f" ({self.detail})" if self.detail else ""
        )


@dataclass(frozen=True)
class LocatorCheck:
    op_index: int
    role: str
    locator: Optional[str]
    document: Optional[DocumentId]
    selectable: bool
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.selectable

    def describe(self) -> str:
        status = "selectable" if self.selectable else "unselectable"
        target = f" on {self.document}" if self.document is not None else ""
        return f"op {self.op_index} {self.role} {self.locator or '?'}{target} {status}" + (
            f" ({self.detail})" if self.detail else ""
        )


@dataclass
class VerificationReport:
    refs: list[RefCheck] = field(default_factory=list)
    locators: list[LocatorCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.refs) and all(
            check.ok for check in self.locators
        )

    @property
    def failures(self) -> list[RefCheck | LocatorCheck]:
        return [check for check in [*self.refs, *self.locators] if not check.ok]

    def lines(self) -> list[str]:
        return [
            f"{'ok' if check.ok else 'FAIL'} {check.describe()}"
            for check in [*self.refs, *self.locators]
        ]


class Verifier:
    """Dry run of an edit list that records every check instead of stopping at the first failure.

    A failing operation is skipped, so later operations are checked against
    the working document as left by the operations that succeeded.
    """

    def __init__(self, resolver: Resolver, algorithm: HashAlgorithm = DEFAULT_ALGORITHM) -> None:
        self.resolver = resolver
        self.algorithm = algorithm
        self.report = VerificationReport()
        self.assembler = Assembler(resolver, algorithm)

    def run(self, edit_list: EditList) -> VerificationReport:
        resolved: dict[tuple[int, str], Document] = {}
        for index, role, ref in edit_list.refs():
            try:
                _, doc = resolve_ref(ref, self.resolver, self.algorithm)
            except HyxError as err:
                self.report.refs.append(RefCheck(index, role, ref, False, str(err)))
            else:
                resolved[(index, role)] = doc
                self.report.refs.append(RefCheck(index, role, ref, True))

        for index, op in enumerate(edit_list.ops):
            if isinstance(op, Take):
                if (index, "take") in resolved:
                    self.assembler.process_take(op)
                continue
            ok = self.check_op(index, op, resolved)
            if ok and self.assembler.working is not None:
                try:
                    self.assembler.process_op(op)
                except HyxError as err:
                    logger.debug(f"op {index} skipped during verification: {err}")
        return self.report

    def check_locator(
        self,
        index: int,
        role: str,
        resolved: dict[tuple[int, str], Document],
        target: Optional[Document],
        target_id: Optional[DocumentId],
        expected: LocatorKind,
    ) -> bool:
        loc_doc = resolved.get((index, role))
        if loc_doc is None:
            self.report.locators.append(
                LocatorCheck(index, role, None, target_id, False, "unresolved reference")
            )
            return False
        try:
            loc = parse_locator(loc_doc)
        except HyxError as err:
            self.report.locators.append(
                LocatorCheck(index, role, None, target_id, False, str(err))
            )
            return False
        if target is None:
            self.report.locators.append(
                LocatorCheck(index, role, str(loc), target_id, False, "unresolved reference")
            )
            return False
        if loc.kind is not expected:
            self.report.locators.append(
                LocatorCheck(index, role, str(loc), target_id, False, f"expected a {expected.value}")
            )
            return False
        ok = selectable(loc, target)
        self.report.locators.append(LocatorCheck(index, role, str(loc), target_id, ok))
        return ok

    def check_op(self, index: int, op: EditOp, resolved: dict[tuple[int, str], Document]) -> bool:
        working = self.assembler.working
        working_id = self.assembler.working_id if working is not None else None
        if isinstance(op, Delete):
            return self.check_locator(
                index, "delete", resolved, working, working_id, LocatorKind.RANGE
            )
        assert isinstance(op, (Insert, Replace))
        at_kind = LocatorKind.POINT if isinstance(op, Insert) else LocatorKind.RANGE
        at_ok = self.check_locator(index, "at", resolved, working, working_id, at_kind)
        source = resolved.get((index, "from"))
        source_id = None
        if source is not None:
            source_id = resolve_ref(op.source, self.resolver, self.algorithm)[0]
        segment_ok = self.check_locator(
            index, "segment", resolved, source, source_id, LocatorKind.RANGE
        )
        return at_ok and segment_ok
