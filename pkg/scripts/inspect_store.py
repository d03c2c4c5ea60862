"""
Object Store Inspection Script

Lists every object of a hyx store with its size and format tag, re-verifying
each digest on the way, and summarises the store configuration.

Usage:
    uv run scripts/inspect_store.py [store-root]    # default: $HYX_STORE or ./.hyx
"""

import os
import sys
from pathlib import Path

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

# Add src directory to path to import hyx
sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src"))
from hyx.exceptions import HyxError  # noqa: E402
from hyx.store import ObjectStore, default_store_path  # noqa: E402
from hyx.utils.logger import setup_logger  # noqa: E402

logger = setup_logger(__name__)
console = Console()


def inspect(root: Path) -> bool:
    console.print(Panel.fit(
        f"[bold cyan]STORE INSPECTION: {root}[/bold cyan]",
        border_style="cyan"
    ))

    if not (root / "config").is_file():
        logger.error(f"No hyx store at {root}")
        return False

    try:
        store = ObjectStore.open(root)
    except HyxError as e:
        logger.error(f"Failed to open store: {e}")
        return False

    console.print(
        f"Algorithm: [bold]{store.config.default_algorithm.value}[/bold]  "
        f"Normalization: [bold]{store.config.normalization.value}[/bold]"
    )

    objects = Table(title="Objects", show_header=True)
    objects.add_column("Id", style="cyan", no_wrap=True)
    objects.add_column("Bytes", justify="right")
    objects.add_column("Format", style="yellow")
    objects.add_column("Digest", style="green")

    total = corrupt = 0
    for doc_id in store.iter_ids():
        total += 1
        try:
            doc = store.get(doc_id)
        except HyxError as e:
            corrupt += 1
            size = store.object_path(doc_id).stat().st_size
            objects.add_row(str(doc_id), str(size), "", f"[bold red]{type(e).__name__}[/bold red]")
            continue
        objects.add_row(str(doc_id), str(len(doc)), doc.format_tag or "-", "ok")

    console.print(objects)

    if corrupt:
        console.print(Panel.fit(
            f"[bold red]✗ {corrupt} of {total} objects failed verification[/bold red]",
            border_style="red"
        ))
        return False
    console.print(Panel.fit(
        f"[bold green]✓ {total} objects verified[/bold green]",
        border_style="green"
    ))
    return True


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else default_store_path()
    sys.exit(0 if inspect(target) else 1)
