"""Text readers for algorithm inputs.

Every reader rejects malformed lines with a :class:`ParseError` that names
the line.  Blank lines at the end of a file are ignored; anywhere else they
are errors.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from ..errors import ParseError


def _lines(text):
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    return enumerate(lines, start=1)


def _rows(text, source):
    for lineno, line in _lines(text):
        if not line.strip():
            raise ParseError("blank line", lineno, source)
        row = next(csv.reader(io.StringIO(line)))
        yield lineno, [c.strip() for c in row]


def _float(cell, lineno, source):
    try:
        v = float(cell)
    except ValueError:
        raise ParseError(f"not a number: {cell!r}", lineno, source) from None
    if not math.isfinite(v):
        raise ParseError(f"non-finite value: {cell!r}", lineno, source)
    return v


def parse_transactions(text: str, source=None) -> list[list[str]]:
    """One transaction per line, items separated by whitespace."""
    out = []
    for lineno, line in _lines(text):
        items = line.split()
        if not items:
            raise ParseError("empty transaction", lineno, source)
        out.append(items)
    if not out:
        raise ParseError("no transactions", None, source)
    return out


def parse_labeled_points(text: str, source=None) -> list[tuple[tuple[float, ...], str]]:
    """CSV rows of numeric features followed by a label column."""
    out, dim = [], None
    for lineno, row in _rows(text, source):
        if len(row) < 2:
            raise ParseError("need at least one feature and a label", lineno, source)
        *feats, label = row
        if not label:
            raise ParseError("empty label", lineno, source)
        if dim is None:
            dim = len(feats)
        elif len(feats) != dim:
            raise ParseError(f"expected {dim} features, got {len(feats)}", lineno, source)
        out.append((tuple(_float(c, lineno, source) for c in feats), label))
    if not out:
        raise ParseError("no data rows", None, source)
    return out


def parse_categorical(text: str, source=None) -> list[tuple[tuple[str, ...], str]]:
    """CSV rows of categorical features followed by a label column."""
    out, dim = [], None
    for lineno, row in _rows(text, source):
        if len(row) < 2:
            raise ParseError("need at least one feature and a label", lineno, source)
        if any(not c for c in row):
            raise ParseError("empty field", lineno, source)
        *feats, label = row
        if dim is None:
            dim = len(feats)
        elif len(feats) != dim:
            raise ParseError(f"expected {dim} features, got {len(feats)}", lineno, source)
        out.append((tuple(feats), label))
    if not out:
        raise ParseError("no data rows", None, source)
    return out


def parse_signal(text: str, source=None, complex_values=False) -> np.ndarray:
    """One sample per line: ``real`` or ``real,imag`` (the latter only if ``complex_values``)."""
    vals = []
    widest = 2 if complex_values else 1
    for lineno, row in _rows(text, source):
        if not 1 <= len(row) <= widest:
            raise ParseError(f"expected 1 to {widest} columns, got {len(row)}", lineno, source)
        re = _float(row[0], lineno, source)
        im = _float(row[1], lineno, source) if len(row) == 2 else 0.0
        vals.append(complex(re, im) if complex_values else re)
    if not vals:
        raise ParseError("no samples", None, source)
    return np.asarray(vals, dtype=np.complex128 if complex_values else np.float64)


def _read(path):
    path = Path(path)
    return path.read_text(encoding="utf-8"), str(path)


def read_transactions(path):
    return parse_transactions(*_read(path))


def read_labeled_points(path):
    return parse_labeled_points(*_read(path))


def read_categorical(path):
    return parse_categorical(*_read(path))


def read_signal(path, complex_values=False):
    text, source = _read(path)
    return parse_signal(text, source, complex_values=complex_values)
