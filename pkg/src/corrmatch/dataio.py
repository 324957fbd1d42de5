"""CSV ingestion and emission for multi-million-row feature tables.

Reads stream through fixed-size chunks into a preallocated array, so peak
memory stays at the output matrix plus one chunk.  Values are written with
the shortest decimal representation that round-trips, so write -> read is
bit-exact.  The decimal separator is always ``.``; output files use LF line
endings and always carry a header row, while reads accept LF or CRLF.
"""

from __future__ import annotations

import csv
import itertools
import math
import os
import tempfile
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, MissingColumn, ParseError
from .stats import FeatureMatrix

__all__ = ["CsvSchema", "read_csv", "write_csv", "atomic_text_file"]

CHUNK_LINES = 65536


@dataclass
class CsvSchema:
    """How to interpret a CSV file.

    ``selected_columns`` picks (and orders) a subset of columns by name;
    with ``has_header=False`` columns are auto-named ``c1``..``cm``.
    ``missing_policy`` decides what happens to rows with unparseable,
    non-finite, or missing cells: ``"error"`` raises :class:`ParseError`,
    ``"drop_row"`` silently skips the row.
    """

    delimiter: str = ","
    has_header: bool = True
    selected_columns: tuple | None = None
    missing_policy: str = "error"

    def __post_init__(self):
        if len(self.delimiter) != 1 or self.delimiter in "+-.0123456789eE\n\r":
            raise InvalidInput(f"unusable delimiter {self.delimiter!r}")
        if self.missing_policy not in ("error", "drop_row"):
            raise InvalidInput(f"unknown missing policy {self.missing_policy!r}")
        if self.selected_columns is not None:
            self.selected_columns = tuple(str(c) for c in self.selected_columns)
            if len(set(self.selected_columns)) != len(self.selected_columns):
                raise InvalidInput("selected columns must be unique")
            if not self.selected_columns:
                raise InvalidInput("selected columns must not be empty")


@contextmanager
def atomic_text_file(path):
    """Open a temporary file next to ``path`` and rename it over ``path`` on
    success; on error the temporary is removed and ``path`` never appears
    truncated or half-written."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".part")
    fh = os.fdopen(fd, "w", encoding="utf-8", newline="")
    try:
        yield fh
        fh.close()
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp_path, 0o666 & ~umask)  # mkstemp defaults to 0600
        os.replace(tmp_path, path)
    except BaseException:
        fh.close()
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


def _count_data_lines(path, has_header):
    lines = 0
    last = b"\n"
    with open(path, "rb") as fh:
        while True:
            block = fh.read(1 << 20)
            if not block:
                break
            lines += block.count(b"\n")
            last = block[-1:]
    if last != b"\n":
        lines += 1  # final line without trailing newline
    return lines - 1 if has_header else lines


def _parse_header(line, schema):
    fields = next(csv.reader([line], delimiter=schema.delimiter))
    if schema.has_header:
        names = [f.strip() for f in fields]
        if len(set(names)) != len(names):
            raise ParseError(1, None, "duplicate column names in header")
        return names
    return [f"c{j + 1}" for j in range(len(fields))]


def _diagnose_chunk(lines, first_line_no, width, use, names, schema, out, cursor):
    """Per-row fallback for chunks the fast path rejected.

    Under ``missing_policy="error"`` pinpoints the offending cell; under
    ``"drop_row"`` keeps whatever parses.  Returns the new write cursor.
    """
    drop = schema.missing_policy == "drop_row"
    for offset, line in enumerate(lines):
        line_no = first_line_no + offset
        if cursor >= out.shape[0]:
            raise ParseError(
                line_no, None,
                "file yielded more rows than its newline count (unsupported "
                "line endings, or the file changed while being read)",
            )
        fields = line.rstrip("\r\n").split(schema.delimiter)
        if len(fields) != width:
            if drop:
                continue
            raise ParseError(
                line_no, None,
                f"line {line_no}: expected {width} fields, found {len(fields)}",
            )
        ok = True
        for k, j in enumerate(use):
            try:
                value = float(fields[j])
            except ValueError:
                value = math.nan
            if not math.isfinite(value):
                if drop:
                    ok = False
                    break
                raise ParseError(
                    line_no, names[j],
                    f"line {line_no}, column {names[j]!r}: "
                    f"cannot parse {fields[j]!r} as a finite number",
                )
            out[cursor, k] = value
        if ok:
            cursor += 1
    return cursor


def read_csv(path, schema: CsvSchema | None = None) -> FeatureMatrix:
    """Read a delimited numeric file into a FeatureMatrix.

    Two passes: the first counts rows so the output can be preallocated
    exactly, the second parses chunks of ``CHUNK_LINES`` lines through
    numpy's C reader, falling back to a per-cell diagnosis only for chunks
    containing a defect.  Cells must parse as finite numbers; ``NaN`` and
    ``inf`` are rejected (or dropped, per ``missing_policy``).
    """
    schema = schema if schema is not None else CsvSchema()
    total = _count_data_lines(path, schema.has_header)
    if total < 1:
        raise InvalidInput(f"{path}: no data rows")

    with open(path, "r", encoding="utf-8-sig", newline=None) as fh:
        first_line = fh.readline()
        if not first_line:
            raise InvalidInput(f"{path}: empty file")
        names = _parse_header(first_line, schema)
        width = len(names)
        if schema.selected_columns is not None:
            index = {name: j for j, name in enumerate(names)}
            missing = [c for c in schema.selected_columns if c not in index]
            if missing:
                raise MissingColumn(
                    f"{path}: no column named {missing[0]!r} "
                    f"(available: {', '.join(names)})"
                )
            use = [index[c] for c in schema.selected_columns]
            out_names = list(schema.selected_columns)
        else:
            use = list(range(width))
            out_names = names

        out = np.empty((total, len(use)), order="F")
        cursor = 0
        line_no = 2 if schema.has_header else 1
        pending = [] if schema.has_header else [first_line]
        while True:
            lines = pending + list(itertools.islice(fh, CHUNK_LINES - len(pending)))
            pending = []
            if not lines:
                break
            counts_ok = all(ln.count(schema.delimiter) == width - 1 for ln in lines)
            arr = None
            if counts_ok:
                try:
                    arr = np.loadtxt(
                        lines, delimiter=schema.delimiter, usecols=use,
                        dtype=np.float64, ndmin=2, comments=None,
                    )
                except ValueError:
                    arr = None
            if (
                arr is not None
                and arr.shape[0] == len(lines)
                and cursor + arr.shape[0] <= out.shape[0]
                and np.isfinite(arr).all()
            ):
                out[cursor:cursor + arr.shape[0], :] = arr
                cursor += arr.shape[0]
            else:
                cursor = _diagnose_chunk(
                    lines, line_no, width, use, names, schema, out, cursor
                )
            line_no += len(lines)

    if cursor < total:
        out = np.array(out[:cursor, :], order="F")
    out.flags.writeable = False
    return FeatureMatrix(out, out_names)


def write_csv(matrix: FeatureMatrix, path, schema: CsvSchema | None = None) -> None:
    """Write a FeatureMatrix as delimited text.

    The header row is always written.  Every number is serialized with
    ``repr(float(x))``, the shortest decimal form that parses back to the
    identical double, so ``read_csv(write_csv(F))`` is bit-exact.  The file
    is written to a temporary sibling and renamed into place on success.
    """
    schema = schema if schema is not None else CsvSchema()
    if schema.selected_columns is not None:
        columns = [matrix.names.index(c) if c in matrix.names else None
                   for c in schema.selected_columns]
        if None in columns:
            bad = schema.selected_columns[columns.index(None)]
            raise MissingColumn(f"matrix has no column named {bad!r}")
        names = schema.selected_columns
    else:
        columns = range(matrix.m)
        names = matrix.names
    values = matrix.values
    with atomic_text_file(path) as fh:
        writer = csv.writer(fh, delimiter=schema.delimiter, lineterminator="\n")
        writer.writerow(names)
        writer.writerows(
            [repr(float(values[i, j])) for j in columns] for i in range(matrix.n)
        )
