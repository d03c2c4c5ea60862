"""
HTTP Retrieval

Makes identifiers actionable over HTTP: a client that fetches remote
documents and only admits them to the local store when their digest matches
the requested id, and a read-only endpoint serving a store.

Wire convention:
    GET /docs/<algo>:<hex>   200 raw bytes | 400 malformed id | 404 unknown id

Content is trusted, not transport: a server can at worst fail a fetch, it
can never place a wrong document in the store.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional
from urllib.parse import unquote, urlsplit

import requests

from .core import Document, DocumentId, compute_id, parse_id
from .exceptions import (
    DigestMismatchError,
    DocumentNotFoundError,
    HyxError,
    NetworkError,
    RemoteNotFoundError,
    RemoteConfigError,
    RemoteStatusError,
    ServeError,
    SizeLimitError,
)
from .store import ObjectStore
from .utils.logger import setup_logger

logger = setup_logger(__name__)

DOCS_PATH = "/docs/"
DEFAULT_TIMEOUT = 30.0
DEFAULT_MAX_SIZE = 64 * 1024 * 1024
OCTET_STREAM = "application/octet-stream"
_CHUNK_SIZE = 64 * 1024
_PORT_RE = re.compile(r"[0-9]{1,5}")
_LENGTH_RE = re.compile(r"[0-9]{1,19}")


@dataclass(frozen=True)
class RemoteSource:
    base_url: str
    timeout: float = DEFAULT_TIMEOUT
    max_size: int = DEFAULT_MAX_SIZE

    def __post_init__(self) -> None:
        if urlsplit(self.base_url).scheme not in ("http", "https"):
            raise RemoteConfigError(f"Remote source must be an HTTP(S) URL, got '{self.base_url}'")
        if self.max_size <= 0:
            raise RemoteConfigError("max_size must be positive")
        if self.timeout <= 0:
            raise RemoteConfigError("timeout must be positive")

    def document_url(self, doc_id: DocumentId) -> str:
        return f"{self.base_url.rstrip('/')}{DOCS_PATH}{doc_id}"


def _read_capped(response: requests.Response, max_size: int, url: str) -> bytes:
    declared = response.headers.get("Content-Length")
    if declared is not None and _LENGTH_RE.fullmatch(declared) and int(declared) > max_size:
        raise SizeLimitError(f"{url} declares {declared} bytes, limit is {max_size}")
    body = bytearray()
    for chunk in response.iter_content(chunk_size=_CHUNK_SIZE):
        body.extend(chunk)
        if len(body) > max_size:
            raise SizeLimitError(f"{url} sent more than {max_size} bytes")
    return bytes(body)


def fetch_verified(
    source: RemoteSource,
    doc_id: DocumentId,
    store: ObjectStore,
    session: Optional[requests.Session] = None,
) -> Document:
    """
    Fetches a document from a remote source and stores it if its digest matches.

    Args:
        source (RemoteSource): Remote endpoint, timeout and size cap.
        doc_id (DocumentId): Identifier to fetch; the body must hash to it.
        store (ObjectStore): Local store receiving the verified bytes unchanged.
        session (Optional[requests.Session]): Session to reuse across fetches.

    Returns:
        The verified document.

    Raises:
        NetworkError, RemoteNotFoundError, RemoteStatusError, SizeLimitError,
        DigestMismatchError. On any of them the store is left unchanged.
    """
    url = source.document_url(doc_id)
    http = session or requests
    try:
        with http.get(url, stream=True, timeout=source.timeout) as response:
            if response.status_code == HTTPStatus.NOT_FOUND:
                raise RemoteNotFoundError(f"Document {doc_id} not found at {source.base_url}")
            if response.status_code != HTTPStatus.OK:
                raise RemoteStatusError(response.status_code, url)
            data = _read_capped(response, source.max_size, url)
            content_type = response.headers.get("Content-Type")
    except requests.RequestException as err:
        raise NetworkError(f"Fetching {url} failed: {err}") from err

    if compute_id(Document(data), doc_id.algorithm) != doc_id:
        logger.warning(f"Discarding {len(data)} bytes from {url}: digest mismatch")
        raise DigestMismatchError(f"Body served for {doc_id} by {source.base_url} has another digest")

    format_tag = None
    if content_type and content_type.split(";", 1)[0].strip().lower() != OCTET_STREAM:
        format_tag = content_type.strip()
    try:
        doc = Document(data, format_tag)
    except HyxError:
        doc = Document(data)
    store.put(doc, algorithm=doc_id.algorithm, raw=True)
    logger.info(f"Fetched [cyan]{doc_id}[/cyan] ({len(data)} bytes) from {source.base_url}")
    return doc


class DocumentRequestHandler(BaseHTTPRequestHandler):
    """Serves ``GET``/``HEAD /docs/<id>`` from the server's store; nothing else."""

    server: "DocumentServer"
    protocol_version = "HTTP/1.1"

    def do_GET(self) -> None:
        self.respond(send_body=True)

    def do_HEAD(self) -> None:
        self.respond(send_body=False)

    def reject_method(self) -> None:
        # the request body is never read, so the connection cannot be reused
        self.send_plain(
            HTTPStatus.METHOD_NOT_ALLOWED,
            "read-only endpoint\n",
            {"Allow": "GET, HEAD", "Connection": "close"},
        )

    do_PUT = do_POST = do_DELETE = do_PATCH = reject_method

    def respond(self, send_body: bool) -> None:
        path = urlsplit(self.path).path
        if not path.startswith(DOCS_PATH):
            self.send_plain(HTTPStatus.NOT_FOUND, "not found\n", send_body=send_body)
            return
        try:
            doc_id = parse_id(unquote(path[len(DOCS_PATH) :]))
        except HyxError as err:
            self.send_plain(HTTPStatus.BAD_REQUEST, f"{err}\n", send_body=send_body)
            return
        try:
            doc = self.server.store.get(doc_id)
        except DocumentNotFoundError:
            self.send_plain(HTTPStatus.NOT_FOUND, f"{doc_id} not found\n", send_body=send_body)
            return
        except HyxError as err:
            logger.error(f"Cannot serve {doc_id}: {err}")
            self.send_plain(HTTPStatus.INTERNAL_SERVER_ERROR, "object unavailable\n", send_body=send_body)
            return
        self.send_response(HTTPStatus.OK)
        self.send_header("Content-Type", doc.format_tag or OCTET_STREAM)
        self.send_header("Content-Length", str(len(doc.data)))
        self.end_headers()
        if send_body:
            self.wfile.write(doc.data)

    def send_plain(
        self,
        status: HTTPStatus,
        message: str,
        headers: Optional[dict[str, str]] = None,
        send_body: bool = True,
    ) -> None:
        body = message.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "text/plain; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        for name, value in (headers or {}).items():
            self.send_header(name, value)
        self.end_headers()
        if send_body:
            self.wfile.write(body)

    def log_message(self, format: str, *args: object) -> None:
        logger.debug(f"{self.address_string()} {format % args}")


class DocumentServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, bind_address: tuple[str, int], store: ObjectStore) -> None:
        self.store = store
        super().__init__(bind_address, DocumentRequestHandler)

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"


def parse_bind_address(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not _PORT_RE.fullmatch(port) or int(port) > 65535:
        raise ServeError(f"Bind address must be host:port, got '{text}'")
    return host.strip("[]") or "127.0.0.1", int(port)


def make_server(store: ObjectStore, bind_address: str) -> DocumentServer:
    """Binds the read-only endpoint without starting it."""
    address = parse_bind_address(bind_address)
    try:
        return DocumentServer(address, store)
    except OSError as err:
        raise ServeError(f"Cannot bind {bind_address}: {err}") from err


def serve(store: ObjectStore, bind_address: str) -> None:
    """Runs the read-only endpoint until interrupted."""
    with make_server(store, bind_address) as server:
        logger.info(f"Serving [cyan]{store.root}[/cyan] at [bold]{server.url}{DOCS_PATH}[/bold]")
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            logger.info("Shutting down")
