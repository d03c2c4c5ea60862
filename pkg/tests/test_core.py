import hashlib

import pytest
from hypothesis import given, strategies as st

from hyx.core import (
    DEFAULT_ALGORITHM,
    ID_FORMAT,
    Document,
    DocumentId,
    HashAlgorithm,
    Link,
    LinkKind,
    LinkSet,
    Segment,
    compute_id,
    parse_id,
    resolver_from,
)
from hyx.exceptions import (
    DigestLengthError,
    DocumentNotFoundError,
    IdentifierError,
    InvalidDocumentError,
    MalformedIdError,
    UnknownAlgorithmError,
)
from hyx.locator import Locator

from conftest import C1, C1_SHA1, C2, C2_SHA1, D1, D1_SHA1, D3, D3_SHA1


@pytest.mark.parametrize(
    "data, expected",
    [
        (D3, D3_SHA1),
        (C2, C2_SHA1),
        (D1, D1_SHA1),
        (C1, C1_SHA1),
        (b"", "da39a3ee5e6b4b0d3255bfef95601890afd80709"),
    ],
)
def test_sha1_ids_of_example_documents(data, expected):
    doc_id = compute_id(Document(data), HashAlgorithm.SHA1)

    assert str(doc_id) == f"sha1:{expected}"
    # independent oracle
    assert doc_id.hex == hashlib.sha1(data).hexdigest()


def test_default_algorithm_is_sha256():
    doc_id = compute_id(Document(D3))

    assert DEFAULT_ALGORITHM is HashAlgorithm.SHA256
    assert str(doc_id) == "sha256:" + hashlib.sha256(D3).hexdigest()
    assert len(doc_id.digest) == 32


def test_format_tag_is_not_hashed():
    plain = Document(D1)
    tagged = Document(D1, "text/plain;charset=utf-8")

    assert compute_id(plain) == compute_id(tagged)


@pytest.mark.parametrize("tag", ["", "x" * 256, "text/plain;title=é"])
def test_invalid_format_tags_are_rejected(tag):
    with pytest.raises(InvalidDocumentError):
        Document(b"abc", tag)


def test_document_copies_mutable_buffers():
    buffer = bytearray(b"abc")
    doc = Document(buffer)
    buffer[0] = ord("z")

    assert doc.data == b"abc"


@pytest.mark.parametrize(
    "tag, charset, textual",
    [
        (None, "utf-8", True),
        ("text/plain", "utf-8", True),
        ("text/plain; charset=ISO-8859-1", "iso-8859-1", True),
        ("application/prs.hyx-edl", "utf-8", True),
        ("image/png", "utf-8", False),
    ],
)
def test_document_text_interpretation(tag, charset, textual):
    doc = Document(b"", tag)

    assert doc.charset == charset
    assert doc.is_textual is textual


def test_parse_canonical_id():
    doc_id = parse_id(f"sha1:{D3_SHA1}")

    assert doc_id.algorithm is HashAlgorithm.SHA1
    assert len(doc_id.digest) == 20


def test_parse_bare_hex_as_sha1():
    assert parse_id(C2_SHA1) == compute_id(Document(C2), HashAlgorithm.SHA1)


def test_parse_is_case_insensitive_and_renders_lowercase():
    doc_id = parse_id(f"SHA1:{D3_SHA1.upper()}")

    assert str(doc_id) == f"sha1:{D3_SHA1}"


@pytest.mark.parametrize(
    "text, error",
    [
        ("sha1:zz", MalformedIdError),
        ("", MalformedIdError),
        ("sha1:", MalformedIdError),
        (":abcd", MalformedIdError),
        ("sha1:abc", MalformedIdError),
        ("deadbeef", MalformedIdError),
        ("md5:" + "0" * 32, UnknownAlgorithmError),
        ("sha1:" + "0" * 38, DigestLengthError),
        ("sha256:" + D3_SHA1, DigestLengthError),
    ],
)
def test_parse_id_errors_are_distinct(text, error):
    with pytest.raises(error) as excinfo:
        parse_id(text)

    assert isinstance(excinfo.value, IdentifierError)
    assert isinstance(excinfo.value, ValueError)


def test_digest_length_checked_on_construction():
    with pytest.raises(DigestLengthError):
        DocumentId(HashAlgorithm.SHA256, bytes(20))


def test_id_is_a_document():
    doc_id = compute_id(Document(D1), HashAlgorithm.SHA1)
    as_doc = doc_id.to_document()

    assert as_doc.data == f"sha1:{D1_SHA1}".encode("ascii")
    assert as_doc.format_tag == ID_FORMAT
    assert parse_id(as_doc.data.decode("ascii")) == doc_id
    compute_id(as_doc)


@given(data=st.binary(max_size=512), algorithm=st.sampled_from(list(HashAlgorithm)))
def test_id_round_trip(data, algorithm):
    doc_id = compute_id(Document(data), algorithm)

    assert parse_id(str(doc_id)) == doc_id
    assert compute_id(Document(data), algorithm) == doc_id


@given(data=st.binary(min_size=1, max_size=512), position=st.integers(min_value=0), flip=st.integers(1, 255))
def test_one_byte_mutation_changes_id(data, position, flip):
    index = position % len(data)
    mutated = bytearray(data)
    mutated[index] ^= flip

    for algorithm in HashAlgorithm:
        assert compute_id(Document(data), algorithm) != compute_id(Document(bytes(mutated)), algorithm)


def test_resolver_from():
    resolve = resolver_from([Document(D1), Document(D3)], HashAlgorithm.SHA1)

    assert resolve(parse_id(D1_SHA1)).data == D1
    with pytest.raises(DocumentNotFoundError):
        resolve(parse_id(C1_SHA1))


def _segment(loc: str, data: bytes) -> Segment:
    return Segment(Locator.parse(loc), compute_id(Document(data), HashAlgorithm.SHA1))


def test_link_set_has_set_semantics_on_segments():
    first = Link(_segment("char=7", D3), LinkKind.VERSIONING)
    again = Link(_segment("char=7", D3), LinkKind.TRANSCLUSION)

    links = LinkSet.of([first, again, _segment("char=11,16", D1)])

    assert len(links) == 2
    assert links.kind_of(first.segment) is LinkKind.VERSIONING
    assert first in links
    assert again not in links
    assert _segment("char=11,16", D1) in links


def test_link_rendering():
    result = compute_id(Document(b"Hello, Alice!"), HashAlgorithm.SHA1)
    link = Link(_segment("char=7", D3), LinkKind.VERSIONING, result)

    assert str(link) == f"versioning char=7 sha1:{D3_SHA1} -> {result}"
    assert str(Link(_segment("char=7", D3))) == f"char=7 sha1:{D3_SHA1}"


def test_link_sets_compare_by_content():
    a = LinkSet.of([_segment("char=7", D3), _segment("char=0,1", D1)])
    b = LinkSet.of([_segment("char=0,1", D1), _segment("char=7", D3)])

    assert a == b
    assert a != LinkSet()
