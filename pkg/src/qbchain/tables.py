"""Delimited output with embedded metadata, written atomically.

CSV files carry `# key = value` comment lines before the header; JSON files
carry a sibling metadata object next to the row array.  Floats are
serialized with 17 significant digits so a write/read round trip reproduces
every bit.
"""

from __future__ import annotations

import json
import os
import tempfile


def _format_value(value):
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _metadata_lines(metadata: dict):
    for key in metadata:
        yield f"# {key} = {_format_value(metadata[key])}"


def _atomic_write(path: str, text: str):
    """Write via a sibling temp file and rename, so readers never see partials."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    handle = tempfile.NamedTemporaryFile(
        mode="w", encoding="utf-8", newline="\n", dir=directory,
        prefix=".tmp-", suffix=os.path.basename(path), delete=False,
    )
    try:
        with handle as fh:
            fh.write(text)
        os.replace(handle.name, path)
    except BaseException:
        try:
            os.unlink(handle.name)
        except OSError:
            pass
        raise


def write_table(path: str, columns: list, rows, metadata: dict,
                fmt: str = "csv"):
    """Write rows (sequences matching `columns`) with metadata, atomically."""
    if fmt == "csv":
        lines = list(_metadata_lines(metadata))
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_format_value(v) for v in row))
        _atomic_write(path, "\n".join(lines) + "\n")
    elif fmt == "json":
        payload = {
            "metadata": dict(metadata),
            "columns": list(columns),
            "rows": [list(row) for row in rows],
        }
        _atomic_write(path, json.dumps(payload, indent=1) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'json'")


def _parse_scalar(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def read_table(path: str):
    """Read a table written by write_table; returns (metadata, columns, rows)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        payload = json.loads(text)
        return payload["metadata"], payload["columns"], [
            list(row) for row in payload["rows"]
        ]
    metadata: dict = {}
    columns: list = []
    rows: list = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            metadata[key.strip()] = _parse_scalar(value.strip())
        elif not columns:
            columns = line.split(",")
        else:
            rows.append([_parse_scalar(cell) for cell in line.split(",")])
    return metadata, columns, rows
