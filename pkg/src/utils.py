# Common utility functions used across the project

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable


def read_json(path: Path) -> Dict[str, Any]:
    """Read a JSON file and return it as a Python dictionary."""
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def dumps_json(data: Dict[str, Any]) -> str:
    """Stable JSON text: sorted keys, pretty, trailing newline."""
    return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def write_json(path: Path, data: Dict[str, Any]) -> None:
    """Write a dictionary to a JSON file (pretty formatted, atomically)."""
    atomic_write_text(path, dumps_json(data))


def write_jsonl(path: Path, rows: Iterable[Dict[str, Any]]) -> None:
    """
    Write an iterable of dictionaries to a JSONL file.
    JSONL = one JSON object per line.
    """
    text = "".join(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n" for row in rows)
    atomic_write_text(path, text)


def read_jsonl(path: Path):
    """Read a JSONL file and yield one dictionary per line."""
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                yield json.loads(line)


def count_jsonl(path: Path) -> int:
    """Count lines in a JSONL file."""
    if not path.exists():
        return 0
    with open(path) as f:
        return sum(1 for line in f if line.strip())


def atomic_write_bytes(path: Path, data: bytes) -> None:
    """Write to a temp file next to `path`, then rename over it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))
