"""Categorical datasets and their CSV form."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Dataset:
    """Rows of category indices, one column per variable.

    ``rows[i, j]`` is the category of variable ``j`` in record ``i`` and must
    lie in ``0..arities[j]-1``.
    """

    names: tuple[str, ...]
    arities: tuple[int, ...]
    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows)
        if rows.ndim != 2 or rows.shape[1] != len(self.names):
            raise ValueError(f"rows must be 2-D with {len(self.names)} columns")
        if len(self.arities) != len(self.names):
            raise ValueError("one arity per variable required")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be unique")
        if not np.issubdtype(rows.dtype, np.integer):
            raise ValueError("cells must be integer category indices")
        if rows.size:
            if rows.min() < 0:
                raise ValueError("negative category index")
            over = rows.max(axis=0) >= np.asarray(self.arities)
            if over.any():
                j = int(np.flatnonzero(over)[0])
                raise ValueError(f"column {self.names[j]!r} has a value >= its arity {self.arities[j]}")
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n_vars(self) -> int:
        return len(self.names)

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    def __eq__(self, other):
        return (
            isinstance(other, Dataset)
            and self.names == other.names
            and self.arities == other.arities
            and np.array_equal(self.rows, other.rows)
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.names)
        w.writerows(self.rows.tolist())
        return buf.getvalue()

    def save_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())


def parse_csv(text: str, arities=None) -> Dataset:
    """Read a header row of names followed by integer rows.

    Arities default to ``max + 1`` per column (at least 1).
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty CSV: missing header row") from None
    names = tuple(h.strip() for h in header)
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec or all(not c.strip() for c in rec):
            continue
        if len(rec) != len(names):
            raise ValueError(f"line {lineno}: expected {len(names)} fields, got {len(rec)}")
        try:
            rows.append([int(c) for c in rec])
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer cell") from None
    arr = np.asarray(rows, dtype=np.int64).reshape(len(rows), len(names))
    if arities is None:
        arities = tuple(int(c) + 1 for c in arr.max(axis=0)) if len(rows) else (1,) * len(names)
    return Dataset(names, tuple(int(a) for a in arities), arr)


def load_csv(path, arities=None) -> Dataset:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_csv(fh.read(), arities)
