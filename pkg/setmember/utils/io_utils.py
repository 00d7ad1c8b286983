import contextlib
import csv
import io
import json
import os
from pathlib import Path
from typing import Any, Iterable, Sequence

from pydantic import BaseModel

from setmember.core.errors import OutputError


def write_atomic(path: Path, text: str) -> Path:
    """
    Write `text` to `path` through a temporary file in the same directory,
    renamed into place once complete. The target is either fully written or
    left untouched.
    """
    path = Path(path)
    tmp_path = path.with_name(f".{path.name}.tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp_path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except OSError as e:
        with contextlib.suppress(OSError):
            tmp_path.unlink()
        raise OutputError(f"could not write {path}: {e.strerror or e}", path=str(path)) from e
    return path


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return write_atomic(path, buffer.getvalue())


def _plain(record: Any) -> Any:
    if isinstance(record, BaseModel):
        return record.model_dump(mode="json")
    return record


def write_jsonl(path: Path, records: Iterable[Any]) -> Path:
    """One compact JSON document per line."""
    lines = [json.dumps(_plain(record), separators=(",", ":")) for record in records]
    return write_atomic(path, "".join(line + "\n" for line in lines))


def write_json(path: Path, document: Any) -> Path:
    return write_atomic(path, json.dumps(_plain(document), indent=2) + "\n")
