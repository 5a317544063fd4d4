"""On-disk cache for the matching-count tables.

File layout (text, LF line endings)::

    STACKDIST1 <k> <max_pairs>
    <count for 0 pairs>
    <count for 1 pair>
    ...

Counts are decimal big integers, one per line.  A file whose magic string,
header shape or body length does not match is treated as absent so the
caller rebuilds; there are no partial reads.  Writes go through a temporary
file in the same directory followed by an atomic rename.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

MAGIC = "STACKDIST1"


def table_path(cache_dir: str | Path, k: int) -> Path:
    return Path(cache_dir) / f"matchings_k{k}.cache"


def save_table(cache_dir: str | Path, k: int, counts: list[int]) -> Path:
    """Atomically write the perfect-matching counts for crossing bound k."""
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = table_path(cache_dir, k)
    body = "\n".join([f"{MAGIC} {k} {len(counts) - 1}"] + [str(c) for c in counts])
    fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=".tmp-", suffix=".cache")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(body + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load_table(cache_dir: str | Path, k: int) -> list[int] | None:
    """Load the cached counts for k, or None if missing/stale/corrupt."""
    path = table_path(cache_dir, k)
    try:
        text = path.read_text()
    except OSError:
        return None
    lines = text.splitlines()
    if not lines:
        return None
    header = lines[0].split()
    if len(header) != 3 or header[0] != MAGIC:
        return None
    try:
        file_k = int(header[1])
        max_pairs = int(header[2])
        counts = [int(line) for line in lines[1:] if line]
    except ValueError:
        return None
    if file_k != k or len(counts) != max_pairs + 1:
        return None
    return counts


def cache_info(cache_dir: str | Path) -> list[dict]:
    """Describe every valid cache file under cache_dir."""
    cache_dir = Path(cache_dir)
    out = []
    if not cache_dir.is_dir():
        return out
    for path in sorted(cache_dir.glob("matchings_k*.cache")):
        try:
            header = path.read_text().splitlines()[0].split()
        except (OSError, IndexError):
            continue
        if len(header) != 3 or header[0] != MAGIC:
            continue
        out.append(
            {
                "path": str(path),
                "k": int(header[1]),
                "max_pairs": int(header[2]),
                "bytes": path.stat().st_size,
            }
        )
    return out


def cache_clear(cache_dir: str | Path) -> int:
    """Remove all cache files; returns how many were deleted."""
    cache_dir = Path(cache_dir)
    removed = 0
    if not cache_dir.is_dir():
        return removed
    for path in cache_dir.glob("matchings_k*.cache"):
        path.unlink()
        removed += 1
    return removed
