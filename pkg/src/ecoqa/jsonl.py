"""Small JSONL helpers used by every pipeline stage."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator, Mapping


def read_jsonl(path: str | Path) -> Iterator[dict]:
    """Yield one parsed object per non-empty line."""
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                yield json.loads(line)


def write_jsonl(path: str | Path, records: Iterable[Mapping]) -> int:
    """Write records one per line; returns the number written."""
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
            count += 1
    return count
