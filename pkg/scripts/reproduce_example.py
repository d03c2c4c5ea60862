"""
Worked Example Reproduction

Loads the documents of the "Hello, Alice!" example into a SHA-1
store, writes its edit list, assembles it and shows the derived links.

The shorter segment locator ``char=11,15`` selects "Alic" under interstitial
positions; the edit list uses ``char=11,16`` so the result reads
"Hello, Alice!". Both locators are stored and listed.

Usage:
    uv run scripts/reproduce_example.py [store-root]    # default: a temporary directory
"""

import os
import sys
import tempfile
from pathlib import Path

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

# Add src directory to path to import hyx
sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src"))
from hyx.core import Document, HashAlgorithm  # noqa: E402
from hyx.editlist import assemble, derive_links, parse_edit_list  # noqa: E402
from hyx.store import ObjectStore  # noqa: E402
from hyx.utils.logger import setup_logger  # noqa: E402

logger = setup_logger(__name__)
console = Console()

DOCUMENTS = {
    "d1": b"My name is Alice",
    "d3": b"Hello, !",
    "c1": b"char=11,15",
    "c1'": b"char=11,16",
    "c2": b"char=7",
}
EXPECTED = b"Hello, Alice!"


def reproduce(root: Path) -> bool:
    console.print(Panel.fit(
        "[bold cyan]EDIT LIST EXAMPLE[/bold cyan]\n"
        f"[italic]SHA-1 store at {root}[/italic]",
        border_style="cyan"
    ))

    store = ObjectStore.open(root, create=True, algorithm=HashAlgorithm.SHA1)
    ids = {name: store.put(Document(data)) for name, data in DOCUMENTS.items()}

    documents = Table(title="Documents", show_header=True)
    documents.add_column("Name", style="cyan")
    documents.add_column("Content", style="green")
    documents.add_column("Id", style="yellow")
    for name, data in DOCUMENTS.items():
        documents.add_row(name, repr(data.decode("ascii")), str(ids[name]))
    console.print(documents)

    segment_id = ids["c1'"]
    edl_text = (
        f"take {ids['d3'].hex}\n"
        f"insert at {ids['c2'].hex}\n"
        f"from {ids['d1'].hex}\n"
        f"segment {segment_id.hex}\n"
    )
    edl_id = store.put(Document(edl_text.encode("ascii")))
    logger.info(f"Edit list stored as [cyan]{edl_id}[/cyan]")
    console.print(Panel(edl_text.rstrip(), title="e1", border_style="blue"))

    edit_list = parse_edit_list(store.get(edl_id))
    resolver = store.resolver_view()
    result = assemble(edit_list, resolver, HashAlgorithm.SHA1)
    result_id = store.put(result)

    links = Table(title=f"Links into {result_id}", show_header=True)
    links.add_column("Kind", style="magenta")
    links.add_column("Locator", style="cyan")
    links.add_column("Document", style="yellow")
    for link in derive_links(edit_list, resolver, result=result_id, algorithm=HashAlgorithm.SHA1):
        assert link.kind is not None
        links.add_row(link.kind.value, str(link.segment.locator), str(link.segment.document))
    console.print(links)

    if result.data != EXPECTED:
        console.print(Panel.fit(
            f"[bold red]✗ UNEXPECTED RESULT[/bold red]\n{result.data!r}",
            border_style="red"
        ))
        return False
    console.print(Panel.fit(
        f"[bold green]✓ A(e1) = {result.data.decode('ascii')!r}[/bold green]",
        border_style="green"
    ))
    return True


if __name__ == "__main__":
    if len(sys.argv) > 1:
        ok = reproduce(Path(sys.argv[1]))
    else:
        with tempfile.TemporaryDirectory() as tmp:
            ok = reproduce(Path(tmp) / "store")
    sys.exit(0 if ok else 1)
