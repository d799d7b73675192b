"""Matrix CSV ingestion/persistence and atomic file writes.

The CSV dialect is a plain numeric RFC-4180 subset: comma separator, '.'
decimal point, one row per line, optional single header row. Rows are the
shared samples, columns the per-view features.
"""

from __future__ import annotations

import csv
import os
import tempfile

import numpy as np

from .exceptions import InvalidInput, ParseError


def read_matrix_csv(path, has_header: bool = False) -> np.ndarray:
    """Read a rectangular numeric CSV into a float matrix."""
    rows = []
    width = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, fields in enumerate(reader, start=1):
            if has_header and lineno == 1:
                continue
            if width is None:
                width = len(fields)
            if len(fields) != width:
                raise ParseError(
                    f"{path}: line {lineno} has {len(fields)} fields, expected {width}",
                    line=lineno)
            parsed = []
            for col, cell in enumerate(fields, start=1):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"{path}: non-numeric cell {cell!r} at line {lineno}, column {col}",
                        line=lineno, col=col) from None
            rows.append(parsed)
    if not rows or width == 0:
        raise InvalidInput(f"{path}: no data rows")
    return np.asarray(rows, dtype=float)


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the same directory plus rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_matrix_csv(path, matrix, header=None) -> None:
    """Write a matrix as CSV; floats use their shortest exact representation."""
    matrix = np.asarray(matrix, dtype=float)
    lines = []
    if header is not None:
        lines.append(",".join(header))
    for row in matrix:
        lines.append(",".join(repr(float(v)) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")
