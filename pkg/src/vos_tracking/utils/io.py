from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from vos_tracking.utils.errors import InputFormatError, format_location

__all__ = [
    "atomic_write_bytes",
    "atomic_write_text",
    "write_json",
    "read_json",
    "validate_json",
    "sha256_file",
]

_CHUNK = 1 << 20


def atomic_write_bytes(path: str | Path, data: bytes) -> Path:
    """Write ``data`` to a temporary sibling file and move it into place."""
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
    return path


def atomic_write_text(path: str | Path, text: str) -> Path:
    return atomic_write_bytes(path, text.encode("utf-8"))


def write_json(path: str | Path, obj: Any) -> Path:
    """Sorted keys, two-space indent, shortest round-trip floats, trailing newline."""
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"
    return atomic_write_text(path, text)


def read_json(path: str | Path) -> Any:
    path = Path(path)
    if not path.exists():
        raise InputFormatError("file not found", path=path)
    try:
        with path.open("r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"invalid JSON ({e.msg})", path=path, location=f"line {e.lineno} col {e.colno}") from e


def validate_json(instance: Any, schema: Mapping[str, Any], *, path: str | Path | None = None) -> None:
    """Raise InputFormatError naming the JSON path of the first schema violation."""
    validator = jsonschema.Draft202012Validator(schema)
    error = jsonschema.exceptions.best_match(validator.iter_errors(instance))
    if error is not None:
        raise InputFormatError(error.message, path=path, location=format_location(error.absolute_path))


def sha256_file(path: str | Path) -> str:
    """Hex SHA-256 of a file, streamed; recorded in run metadata for provenance."""
    h = hashlib.sha256()
    with Path(path).open("rb") as f:
        while chunk := f.read(_CHUNK):
            h.update(chunk)
    return h.hexdigest()
