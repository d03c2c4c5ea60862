"""
hyx - Command Line Entry Point

Parses the command line, opens the object store and routes execution to the
matching ``run_*`` function in ``hyx.commands``.

Usage:
    hyx add d1.txt                     # store a document, print its id
    hyx cat sha1:995f37f2...           # raw bytes of a stored document
    hyx select <id> char=11,16         # bytes of a segment
    hyx assemble e1.edl                # assembled document to stdout
    hyx assemble e1.edl --put          # store the result, print its id
    hyx links e1.edl                   # links implied by an edit list
    hyx verify e1.edl                  # dry-run check, exit 1 on failure
    hyx serve --bind 127.0.0.1:8080    # read-only GET /docs/<id>
    hyx fetch http://peer:8080 <id>    # verified fetch into the store

    python -m hyx --store /tmp/store --algo sha1 add -

Environment Variables:
    HYX_STORE: Store root when --store is not given (default: ./.hyx)
    LOG_LEVEL: Logging level (DEBUG, INFO, WARNING, ERROR) - defaults to INFO

Exit codes:
    0 success, 1 domain error (not found, parse failure, failed verification),
    2 usage error.
"""

import argparse
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .commands import (
    run_add,
    run_assemble,
    run_cat,
    run_fetch,
    run_id,
    run_links,
    run_select,
    run_serve,
    run_verify,
)
from .core import HashAlgorithm
from .exceptions import HyxError
from .store import ObjectStore, default_store_path
from .utils.logger import set_level, setup_logger

logger = setup_logger(__name__)

WRITE_COMMANDS = frozenset({"add", "fetch"})
DEFAULT_BIND = "127.0.0.1:8080"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyx",
        description="Content-addressed hypertext: store documents, assemble edit lists, derive links",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--store",
        type=Path,
        help="Store root directory (overrides HYX_STORE, default ./.hyx)",
    )
    parser.add_argument(
        "--algo",
        choices=[algorithm.value for algorithm in HashAlgorithm],
        help="Hash algorithm for new ids (default: the store's, sha256 for new stores)",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Log warnings and errors only")

    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    add = commands.add_parser("add", help="Store a document and print its id")
    add.add_argument("file", help="File to add, or - for standard input")
    add.add_argument("--format", dest="format_tag", help="Format tag, e.g. 'text/plain;charset=utf-8'")

    cat = commands.add_parser("cat", help="Write a stored document to standard output")
    cat.add_argument("id")

    ident = commands.add_parser("id", help="Print the id a document would get, without storing it")
    ident.add_argument("file", help="File to hash, or - for standard input")
    ident.add_argument("--format", dest="format_tag", help="Format tag of the document")

    select = commands.add_parser("select", help="Write the segment a locator selects")
    select.add_argument("id", help="Document id")
    select.add_argument("locator", help="Locator, e.g. char=11,16")

    assemble = commands.add_parser("assemble", help="Assemble an edit list")
    assemble.add_argument("edit_list", help="Edit list file, - or stored edit list id")
    assemble.add_argument("--out", type=Path, help="Write the result to this file")
    assemble.add_argument("--put", action="store_true", help="Store the result and print its id")

    links = commands.add_parser("links", help="Print the links an edit list implies")
    links.add_argument("edit_list", help="Edit list file, - or stored edit list id")
    links.add_argument("--put", action="store_true", help="Store the result and add it to each link")

    verify = commands.add_parser("verify", help="Check every reference and locator of an edit list")
    verify.add_argument("edit_list", help="Edit list file, - or stored edit list id")

    serve = commands.add_parser("serve", help="Serve the store read-only over HTTP")
    serve.add_argument("--bind", default=DEFAULT_BIND, help=f"host:port (default {DEFAULT_BIND})")

    fetch = commands.add_parser("fetch", help="Fetch a document from a peer, verifying its digest")
    fetch.add_argument("base_url", help="Peer base URL, e.g. http://peer:8080")
    fetch.add_argument("id", help="Document id to fetch")
    fetch.add_argument("--timeout", type=float, help="Request timeout in seconds")

    return parser


def creates_store(args: argparse.Namespace) -> bool:
    return args.command in WRITE_COMMANDS or bool(getattr(args, "put", False))


def open_store(args: argparse.Namespace) -> ObjectStore:
    root = args.store or default_store_path()
    algorithm = HashAlgorithm.parse(args.algo) if args.algo else None
    return ObjectStore.open(root, create=creates_store(args), algorithm=algorithm)


def dispatch(args: argparse.Namespace, store: ObjectStore) -> int:
    match args.command:
        case "add":
            run_add(store, args.file, args.format_tag)
        case "cat":
            run_cat(store, args.id)
        case "id":
            run_id(store, args.file, args.format_tag)
        case "select":
            run_select(store, args.id, args.locator)
        case "assemble":
            run_assemble(store, args.edit_list, args.out, args.put)
        case "links":
            run_links(store, args.edit_list, args.put)
        case "verify":
            return run_verify(store, args.edit_list)
        case "serve":
            run_serve(store, args.bind)
        case "fetch":
            run_fetch(store, args.base_url, args.id, args.timeout)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs one hyx command.

    Domain errors are logged to standard error and turned into exit code 1;
    argparse exits with 2 on usage errors before anything runs.
    """
    args = build_parser().parse_args(argv)

    if args.verbose:
        set_level("DEBUG")
    elif args.quiet:
        set_level("WARNING")

    try:
        store = open_store(args)
        logger.debug(f"Store [cyan]{store.root}[/cyan] ({store.config.default_algorithm.value})")
        return dispatch(args, store)
    except HyxError as err:
        logger.error(str(err), extra={"markup": False})
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
