"""CSV loading with explicit column validation."""

import csv

import numpy as np


class MissingColumnError(Exception):
    def __init__(self, column: str, path: str):
        super().__init__(f"missing column {column!r} in {path}")
        self.column = column


def load_columns(path: str, required: list[str]) -> dict[str, np.ndarray]:
    """Read the named columns as float arrays; empty files give empty arrays."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumnError(required[0], path) from None
        for col in required:
            if col not in header:
                raise MissingColumnError(col, path)
        idx = {col: header.index(col) for col in required}
        data = {col: [] for col in required}
        for row in reader:
            if not row:
                continue
            for col in required:
                cell = row[idx[col]]
                data[col].append(float(cell) if cell else np.nan)
    return {col: np.array(vals, dtype=float) for col, vals in data.items()}
