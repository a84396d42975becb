"""CSV readers and writers for curve data.

Two layouts are supported.

Labelled (one file, both groups)::

    label,<v_1>,...,<v_p>      one curve per row; an optional first row
                               whose first cell is "label" is skipped

Paired (one file per group)::

    <t_1>,...,<t_p>            header row: grid time points
    <v_1>,...,<v_p>            one curve per row

A labelled file carries no time points: they come from a separate grid file
(numbers separated by commas or whitespace), or default to ``0, 1, ...,
p-1``.
"""

import csv
import math

import numpy as np

from .classify import LabeledSamples
from .exceptions import InvalidDataError
from .gaussian import SampleSet
from .grid import Grid


def _parse_float(cell, lineno, col):
    try:
        v = float(cell)
    except ValueError:
        raise InvalidDataError(f"line {lineno}, column {col}: cannot parse {cell!r} as a number") from None
    if not math.isfinite(v):
        raise InvalidDataError(f"line {lineno}, column {col}: non-finite value {cell!r}")
    return v


def _rows(path):
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            row = [c.strip() for c in row]
            if not row or all(c == "" for c in row):
                continue
            yield lineno, row


def read_grid(path, domain_length=None):
    """Time points from a text file of numbers."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            for col, cell in enumerate(line.replace(",", " ").split(), start=1):
                values.append(_parse_float(cell, lineno, col))
    if not values:
        raise InvalidDataError(f"{path}: no time points")
    return Grid(np.array(values), domain_length)


def read_labeled_csv(path, grid=None, x_label=None):
    """Read a labelled CSV into :class:`LabeledSamples`."""
    labels, data, width = [], [], None
    for lineno, row in _rows(path):
        if not data and not labels and row[0].lower() == "label":
            continue
        if width is None:
            width = len(row)
            if width < 2:
                raise InvalidDataError(f"line {lineno}: need a label and at least one value")
        elif len(row) != width:
            raise InvalidDataError(f"line {lineno}: expected {width} fields, found {len(row)}")
        labels.append(row[0])
        data.append([_parse_float(c, lineno, j) for j, c in enumerate(row[1:], start=2)])
    if not data:
        raise InvalidDataError(f"{path}: no data rows")
    rows = np.array(data)
    if grid is None:
        grid = Grid.indices(rows.shape[1])
    elif grid.p != rows.shape[1]:
        raise InvalidDataError(f"{path}: rows have {rows.shape[1]} values, grid has {grid.p} points")
    return LabeledSamples(grid, rows, labels, x_label)


def read_sample_csv(path, domain_length=None, grid=None):
    """Read a paired-layout CSV (time header, then curves) into a :class:`SampleSet`."""
    header, data = None, []
    for lineno, row in _rows(path):
        if header is None:
            header = [_parse_float(c, lineno, j) for j, c in enumerate(row, start=1)]
            continue
        if len(row) != len(header):
            raise InvalidDataError(f"line {lineno}: expected {len(header)} fields, found {len(row)}")
        data.append([_parse_float(c, lineno, j) for j, c in enumerate(row, start=1)])
    if not data:
        raise InvalidDataError(f"{path}: no data rows")
    if grid is None:
        try:
            grid = Grid(np.array(header), domain_length)
        except InvalidDataError as err:
            raise InvalidDataError(f"{path}, line 1: bad time header: {err}") from None
    return SampleSet(grid, np.array(data))


def _fmt(v):
    return repr(float(v))


def write_sample_csv(path, samples):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([_fmt(t) for t in samples.grid.points])
        for row in samples.rows:
            w.writerow([_fmt(v) for v in row])


def write_labeled_csv(path, data):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["label"] + [f"v{j + 1}" for j in range(data.grid.p)])
        for label, row in zip(data.labels, data.rows):
            w.writerow([label] + [_fmt(v) for v in row])


def write_grid(path, grid):
    with open(path, "w") as fh:
        for t in grid.points:
            fh.write(_fmt(t) + "\n")
