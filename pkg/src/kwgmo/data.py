"""Built-in lifetime datasets and plain-text data ingestion."""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

__all__ = [
    "Dataset",
    "DataError",
    "BUILTIN_IDS",
    "builtin_dataset",
    "load_dataset",
    "save_dataset",
    "resolve_data",
]

BUILTIN_IDS = ("nicotine", "carbon100", "carbon66", "turbocharger")
_STATED = re.compile(r"#\s*stated_n:\s*(\d+)")


class DataError(ValueError):
    """Raised for unreadable, empty or invalid data."""


@dataclass(frozen=True)
class Dataset:
    """An immutable sample of positive observations.

    Attributes:
        name: builtin id or file path.
        values: read-only float array, input order, duplicates kept.
        source: ``builtin`` or ``file``.
        stated_n: sample size claimed by the data's documentation, if any.
    """

    name: str
    values: np.ndarray
    source: str
    stated_n: int | None = None

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n


def builtin_dataset(dataset_id: str) -> Dataset:
    """One of the bundled datasets, by id.

    Raises:
        DataError: for an unknown id.
    """
    if dataset_id not in BUILTIN_IDS:
        raise DataError(f"unknown builtin dataset {dataset_id!r}; expected one of {', '.join(BUILTIN_IDS)}")
    text = resources.files("kwgmo").joinpath(f"datasets/{dataset_id}.txt").read_text(encoding="utf-8")
    stated = _STATED.search(text)
    values = _parse(text, column=0, delimiter=None, origin=dataset_id)
    return Dataset(dataset_id, values, "builtin", int(stated.group(1)) if stated else None)


def _split(line: str, delimiter: str | None) -> list[str]:
    if delimiter is None:
        delimiter = "," if "," in line else None
    if delimiter is None:
        return line.split()
    return [cell.strip() for cell in next(csv.reader(io.StringIO(line), delimiter=delimiter))]


def _parse(text: str, *, column: int, delimiter: str | None, origin: str) -> np.ndarray:
    values: list[float] = []
    first_data = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = _split(line, delimiter)
        if column >= len(cells):
            raise DataError(f"{origin}: line {lineno}: no column {column} in {line!r}")
        cell = cells[column]
        try:
            value = float(cell)
        except ValueError:
            if first_data:
                # A non-numeric first row is a header.
                first_data = False
                continue
            raise DataError(f"{origin}: line {lineno}: cannot parse {cell!r} as a number") from None
        first_data = False
        if not math.isfinite(value) or value <= 0:
            raise DataError(f"{origin}: line {lineno}: value {cell} is not a positive number")
        values.append(value)
    if not values:
        raise DataError(f"{origin}: no data values found")
    return np.array(values)


def load_dataset(path: str | Path, *, column: int = 0, delimiter: str | None = None) -> Dataset:
    """Read positive values from a whitespace- or comma-delimited text file.

    Blank lines and lines starting with ``#`` are skipped, and a non-numeric
    first row is treated as a header.

    Args:
        path: file to read.
        column: zero-based column index.
        delimiter: explicit delimiter; by default commas are used when
            present and whitespace otherwise.

    Raises:
        DataError: with the offending line number on bad input, or when the
            file holds no values.
        OSError: if the file cannot be read.
    """
    if column < 0:
        raise DataError("column index must be nonnegative")
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return Dataset(str(path), _parse(text, column=column, delimiter=delimiter, origin=str(path)), "file")


def save_dataset(dataset: Dataset | np.ndarray, path: str | Path) -> None:
    """Write one value per line using the shortest round-tripping decimal."""
    values = dataset.values if isinstance(dataset, Dataset) else np.asarray(dataset, dtype=float)
    Path(path).write_text("".join(f"{float(v)!r}\n" for v in values), encoding="utf-8")


def resolve_data(source: str, *, column: int = 0) -> Dataset:
    """``builtin:<id>`` or a file path."""
    if source.startswith("builtin:"):
        return builtin_dataset(source.split(":", 1)[1])
    return load_dataset(source, column=column)
