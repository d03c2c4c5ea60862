"""
Command Implementations

One ``run_*`` function per ``hyx`` subcommand. ``hyx.main`` parses the
command line, opens the store and routes here.

Standard output carries only the command's product: raw document bytes
(never followed by an added newline), or ids, link lines and report lines
(one per line). Panels and log records go to standard error.
"""

import sys
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.panel import Panel

from .core import Document, DocumentId, compute_id, parse_id
from .editlist import EditList, assemble, derive_links, parse_edit_list, verify
from .exceptions import IdentifierError, InputReadError, StorageFailureError
from .locator import make_segment, parse_locator, transclude
from .net import DOCS_PATH, RemoteSource, fetch_verified, serve
from .store import ObjectStore, normalize
from .utils.logger import setup_logger

logger = setup_logger(__name__)
console = Console(stderr=True)

STDIN = "-"


def write_bytes(data: bytes) -> None:
    sys.stdout.buffer.write(data)
    sys.stdout.buffer.flush()


def write_line(text: str) -> None:
    write_bytes(f"{text}\n".encode("utf-8"))


def read_input(source: str) -> bytes:
    """Reads a file, or standard input when ``source`` is ``-``."""
    if source == STDIN:
        return sys.stdin.buffer.read()
    try:
        return Path(source).read_bytes()
    except OSError as err:
        raise InputReadError(f"Cannot read {source}: {err.strerror or err}") from err


def load_edit_list(store: ObjectStore, source: str) -> EditList:
    """Loads an edit list from a file, standard input or the store.

    A path that exists wins over an id of the same spelling.
    """
    if source == STDIN or Path(source).exists():
        return parse_edit_list(Document(read_input(source)))
    try:
        doc_id = parse_id(source)
    except IdentifierError:
        raise InputReadError(f"{source} is neither a file nor a document id") from None
    return parse_edit_list(store.get(doc_id))


def run_add(store: ObjectStore, source: str, format_tag: Optional[str] = None) -> DocumentId:
    doc_id = store.put(Document(read_input(source), format_tag))
    logger.debug(f"Added {source} as [cyan]{doc_id}[/cyan]")
    write_line(str(doc_id))
    return doc_id


def run_cat(store: ObjectStore, id_text: str) -> None:
    write_bytes(store.get(parse_id(id_text)).data)


def run_id(store: ObjectStore, source: str, format_tag: Optional[str] = None) -> DocumentId:
    """Prints the id ``add`` would assign, without storing anything."""
    doc = normalize(Document(read_input(source), format_tag), store.config.normalization)
    doc_id = compute_id(doc, store.config.default_algorithm)
    write_line(str(doc_id))
    return doc_id


def run_select(store: ObjectStore, id_text: str, locator_text: str) -> None:
    doc_id = parse_id(id_text)
    segment = make_segment(parse_locator(locator_text), doc_id, store.get(doc_id))
    write_bytes(transclude(segment, store.resolver_view()).segment_bytes)


def run_assemble(
    store: ObjectStore,
    source: str,
    out: Optional[Path] = None,
    put: bool = False,
) -> Document:
    """
    Assembles an edit list against the store.

    Args:
        store (ObjectStore): Store resolving every referenced id.
        source (str): Edit list file, ``-``, or id of a stored edit list.
        out (Optional[Path]): Write the result to this file instead of standard output.
        put (bool): Store the result and print its id instead of its bytes.

    Returns:
        The assembled document.
    """
    edit_list = load_edit_list(store, source)
    result = assemble(edit_list, store.resolver_view(), store.config.default_algorithm)
    logger.debug(f"Assembled {len(edit_list)} operations into {len(result)} bytes")
    if out is not None:
        try:
            out.write_bytes(result.data)
        except OSError as err:
            raise StorageFailureError(f"Cannot write {out}: {err.strerror or err}") from err
        logger.info(f"Wrote {len(result)} bytes to [cyan]{out}[/cyan]")
    if put:
        write_line(str(store.put(result)))
    elif out is None:
        write_bytes(result.data)
    return result


def run_links(store: ObjectStore, source: str, put: bool = False) -> None:
    edit_list = load_edit_list(store, source)
    resolver = store.resolver_view()
    algorithm = store.config.default_algorithm
    if not put:
        for link in derive_links(edit_list, resolver, algorithm=algorithm):
            assert link.kind is not None
            write_line(f"{link.kind.value} {link.segment}")
        return
    result_id = store.put(assemble(edit_list, resolver, algorithm))
    for link in derive_links(edit_list, resolver, result=result_id, algorithm=algorithm):
        write_line(str(link))


def run_verify(store: ObjectStore, source: str) -> int:
    """Prints one ``ok``/``FAIL`` line per check; returns 1 when any check fails."""
    report = verify(load_edit_list(store, source), store.resolver_view(), store.config.default_algorithm)
    for line in report.lines():
        write_line(line)

    checks = len(report.refs) + len(report.locators)
    if report.ok:
        console.print(Panel.fit(
            f"[bold green]✓ EDIT LIST VERIFIED[/bold green]\n{checks} checks passed",
            border_style="green",
        ))
        return 0
    console.print(Panel.fit(
        f"[bold red]✗ VERIFICATION FAILED[/bold red]\n"
        f"{len(report.failures)} of {checks} checks failed",
        border_style="red",
    ))
    return 1


def run_serve(store: ObjectStore, bind_address: str) -> None:
    console.print(Panel.fit(
        f"[bold cyan]HYX DOCUMENT ENDPOINT[/bold cyan]\n"
        f"Store: [cyan]{store.root}[/cyan]\n"
        f"Route: [bold]GET {DOCS_PATH}<algo>:<hex>[/bold] on {bind_address}",
        border_style="cyan",
    ))
    serve(store, bind_address)


def run_fetch(
    store: ObjectStore,
    base_url: str,
    id_text: str,
    timeout: Optional[float] = None,
) -> DocumentId:
    doc_id = parse_id(id_text)
    source = RemoteSource(base_url) if timeout is None else RemoteSource(base_url, timeout=timeout)
    fetch_verified(source, doc_id, store)
    write_line(str(doc_id))
    return doc_id
