"""
Content-Addressed Object Store

Persists documents under their content-based identifiers and implements the
retrieval with digest verification on every read.

Disk layout:
    <root>/config                           key=value lines (algorithm, normalization)
    <root>/objects/<algo>/<2 hex>/<rest>    raw document bytes, no framing
    <root>/tags/<algo>/<2 hex>/<rest>       format tag of the object, if any

Objects are written to a temporary file in the destination directory and
renamed into place, so readers never observe a partial object. An existing
object is never rewritten.

Usage:
    store = ObjectStore.open(".hyx", create=True, algorithm=HashAlgorithm.SHA1)
    doc_id = store.put(Document(b"Hello, !"))
    store.get(doc_id).data  # b"Hello, !"

Environment Variables:
    HYX_STORE: store root used by the CLI when --store is not given (default: ./.hyx)
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from tempfile import NamedTemporaryFile
from typing import Iterator, Optional, Union

from .core import DEFAULT_ALGORITHM, Document, DocumentId, HashAlgorithm, compute_id, parse_id
from .exceptions import (
    CorruptObjectError,
    DocumentNotFoundError,
    HyxError,
    InvalidDocumentError,
    StorageFailureError,
    StoreConfigError,
)
from .utils.logger import setup_logger

logger = setup_logger(__name__)

STORE_ENV_VAR = "HYX_STORE"
DEFAULT_STORE_PATH = ".hyx"
CONFIG_FILE = "config"
OBJECTS_DIR = "objects"
TAGS_DIR = "tags"
_TMP_PREFIX = ".tmp-"
_FILE_MODE = 0o644


class Normalization(str, Enum):
    NONE = "none"
    NEWLINE_LF = "newline-lf"


def normalize(doc: Document, policy: Normalization) -> Document:
    """Rewrites a document to its canonical form under ``policy``.

    ``newline-lf`` turns CRLF and lone CR into LF in textual documents with an
    ASCII-compatible encoding; anything else is returned unchanged.
    """
    if policy is Normalization.NONE or not doc.is_textual:
        return doc
    if doc.charset.startswith(("utf-16", "utf-32", "utf16", "utf32")):
        return doc
    data = doc.data.replace(b"\r\n", b"\n").replace(b"\r", b"\n")
    return doc if data == doc.data else Document(data, doc.format_tag)


@dataclass(frozen=True)
class StoreConfig:
    root_path: Path
    default_algorithm: HashAlgorithm = DEFAULT_ALGORITHM
    normalization: Normalization = Normalization.NONE

    @property
    def config_path(self) -> Path:
        return self.root_path / CONFIG_FILE

    @classmethod
    def load(cls, root_path: Union[str, Path]) -> "StoreConfig":
        root_path = Path(root_path)
        try:
            text = (root_path / CONFIG_FILE).read_text(encoding="ascii")
        except FileNotFoundError:
            raise StoreConfigError(f"No store configuration at {root_path}") from None
        except (OSError, UnicodeDecodeError) as err:
            raise StoreConfigError(f"Cannot read store configuration: {err}") from err
        return cls.parse(root_path, text)

    @classmethod
    def parse(cls, root_path: Path, text: str) -> "StoreConfig":
        config = cls(root_path)
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = (part.strip() for part in line.partition("="))
            try:
                if not sep:
                    raise ValueError(f"expected key=value, got '{line}'")
                if key == "algorithm":
                    config = dataclasses.replace(
                        config, default_algorithm=HashAlgorithm.parse(value)
                    )
                elif key == "normalization":
                    config = dataclasses.replace(config, normalization=Normalization(value))
                else:
                    raise ValueError(f"unknown key '{key}'")
            except ValueError as err:
                raise StoreConfigError(f"{root_path / CONFIG_FILE}:{lineno}: {err}") from None
        return config

    def render(self) -> str:
        return (
            f"algorithm={self.default_algorithm.value}\n"
            f"normalization={self.normalization.value}\n"
        )


class ObjectStore:
    """Persistent content-addressed store: ``put`` registers, ``get`` retrieves."""

    def __init__(self, config: StoreConfig) -> None:
        self.config = config
        self.root = config.root_path

    @classmethod
    def init(cls, config: StoreConfig) -> "ObjectStore":
        """Creates the store directories and configuration if they do not exist yet."""
        try:
            (config.root_path / OBJECTS_DIR).mkdir(parents=True, exist_ok=True)
            if config.config_path.is_file():
                existing = StoreConfig.load(config.root_path)
                logger.debug(f"Store at [cyan]{config.root_path}[/cyan] already initialised")
                return cls(existing)
            config.config_path.write_text(config.render(), encoding="ascii")
        except OSError as err:
            raise StorageFailureError(f"Cannot initialise store at {config.root_path}: {err}") from err
        logger.info(
            f"Initialised store at [cyan]{config.root_path}[/cyan]"
            f" ({config.default_algorithm.value}, normalization={config.normalization.value})"
        )
        return cls(config)

    @classmethod
    def open(
        cls,
        root: Union[str, Path],
        create: bool = False,
        algorithm: Optional[HashAlgorithm] = None,
        normalization: Optional[Normalization] = None,
    ) -> "ObjectStore":
        """Opens the store at ``root``.

        Args:
            root: Store root directory.
            create: Initialise the store if it does not exist. Without it a
              missing store opens as an empty, read-only view.
            algorithm: Algorithm for new objects; overrides the configured one
              for this handle and seeds the configuration of a new store.
            normalization: Normalization policy of a newly created store.
        """
        root = Path(root)
        if (root / CONFIG_FILE).is_file():
            store = cls(StoreConfig.load(root))
        else:
            config = StoreConfig(
                root,
                algorithm or DEFAULT_ALGORITHM,
                normalization or Normalization.NONE,
            )
            store = cls.init(config) if create else cls(config)
        if algorithm is not None and algorithm is not store.config.default_algorithm:
            store.config = dataclasses.replace(store.config, default_algorithm=algorithm)
        return store

    def _shard(self, tree: str, doc_id: DocumentId) -> Path:
        digest = doc_id.hex
        return self.root / tree / doc_id.algorithm.value / digest[:2] / digest[2:]

    def object_path(self, doc_id: DocumentId) -> Path:
        return self._shard(OBJECTS_DIR, doc_id)

    def tag_path(self, doc_id: DocumentId) -> Path:
        return self._shard(TAGS_DIR, doc_id)

    def contains(self, doc_id: DocumentId) -> bool:
        return self.object_path(doc_id).is_file()

    def __contains__(self, doc_id: object) -> bool:
        return isinstance(doc_id, DocumentId) and self.contains(doc_id)

    def put(
        self,
        doc: Document,
        algorithm: Optional[HashAlgorithm] = None,
        raw: bool = False,
    ) -> DocumentId:
        """Stores a document and returns its id.

        The configured normalization is applied first unless ``raw`` is set,
        in which case the bytes are stored exactly as given. Putting content
        that is already stored changes nothing on disk.
        """
        if not raw:
            doc = normalize(doc, self.config.normalization)
        doc_id = compute_id(doc, algorithm or self.config.default_algorithm)
        path = self.object_path(doc_id)
        # tag before object: a visible object already carries its tag
        if doc.format_tag is not None and not self.tag_path(doc_id).is_file():
            self._write_atomic(self.tag_path(doc_id), doc.format_tag.encode("ascii") + b"\n")
        if path.is_file():
            logger.debug(f"Object {doc_id} already stored")
        else:
            self._write_atomic(path, doc.data)
            logger.debug(f"Stored object {doc_id} ({len(doc)} bytes)")
        return doc_id

    def _write_atomic(self, path: Path, data: bytes) -> None:
        tmp_name: Optional[str] = None
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with NamedTemporaryFile(dir=path.parent, prefix=_TMP_PREFIX, delete=False) as tmp:
                tmp_name = tmp.name
                tmp.write(data)
                tmp.flush()
                os.fsync(tmp.fileno())
            os.chmod(tmp_name, _FILE_MODE)
            os.replace(tmp_name, path)
            tmp_name = None
        except OSError as err:
            raise StorageFailureError(f"Cannot write {path}: {err}") from err
        finally:
            if tmp_name is not None and os.path.exists(tmp_name):
                os.remove(tmp_name)

    def _read_tag(self, doc_id: DocumentId) -> Optional[str]:
        try:
            tag = self.tag_path(doc_id).read_text(encoding="ascii").strip()
            return Document(b"", tag).format_tag
        except FileNotFoundError:
            return None
        except (OSError, UnicodeDecodeError, InvalidDocumentError) as err:
            logger.warning(f"Ignoring unreadable format tag of {doc_id}: {err}")
            return None

    def get(self, doc_id: DocumentId) -> Document:
        """Returns the stored document after verifying its digest."""
        path = self.object_path(doc_id)
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            raise DocumentNotFoundError(f"Document {doc_id} not found") from None
        except OSError as err:
            raise StorageFailureError(f"Cannot read {path}: {err}") from err
        if compute_id(Document(data), doc_id.algorithm) != doc_id:
            raise CorruptObjectError(f"Object {doc_id} failed digest verification at {path}")
        return Document(data, self._read_tag(doc_id))

    def iter_ids(self) -> Iterator[DocumentId]:
        """Yields the id of every stored object, sorted by path."""
        objects = self.root / OBJECTS_DIR
        if not objects.is_dir():
            return
        for path in sorted(objects.glob("*/*/*")):
            if path.name.startswith(_TMP_PREFIX) or not path.is_file():
                continue
            algo, prefix = path.parent.parent.name, path.parent.name
            try:
                yield parse_id(f"{algo}:{prefix}{path.name}")
            except HyxError:
                logger.warning(f"Skipping foreign file in object tree: {path}")

    def resolver_view(self) -> "StoreResolver":
        return StoreResolver(self)


class StoreResolver:
    """Read-only resolver over a store.

    Memoises what it reads so one assembly sees stable bytes for each id.
    Meant for a single assembly; not shared between threads.
    """

    def __init__(self, store: ObjectStore) -> None:
        self.store = store
        self._cache: dict[DocumentId, Document] = {}

    def __call__(self, doc_id: DocumentId) -> Document:
        doc = self._cache.get(doc_id)
        if doc is None:
            doc = self._cache[doc_id] = self.store.get(doc_id)
        return doc


def resolver_view(store: ObjectStore) -> StoreResolver:
    return store.resolver_view()


def default_store_path() -> Path:
    return Path(os.getenv(STORE_ENV_VAR) or DEFAULT_STORE_PATH)
