"""CSV ingestion of user-supplied series (simulated output or price data)."""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .errors import IngestError
from .stats import SampledSeries


@dataclass(frozen=True)
class IngestSpec:
    """Which column of which delimited file, with an optional log transform."""

    path: str
    column: str | int
    transform: str = "identity"  # identity | log
    delimiter: str = ","


def load_series(spec: IngestSpec) -> SampledSeries:
    """Read one numeric column; row numbers in errors are 1-based file lines."""
    try:
        with open(spec.path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh, delimiter=spec.delimiter)
            try:
                header = next(reader)
            except StopIteration:
                raise IngestError(f"{spec.path}: file is empty") from None
            index = _column_index(header, spec.column, spec.path)
            values = []
            for line_no, row in enumerate(reader, start=2):
                if not row or (len(row) == 1 and row[0].strip() == ""):
                    continue
                if index >= len(row):
                    raise IngestError(
                        f"{spec.path}:{line_no}: row has {len(row)} fields, "
                        f"column {index} missing"
                    )
                cell = row[index].strip()
                try:
                    values.append(float(cell))
                except ValueError:
                    raise IngestError(
                        f"{spec.path}:{line_no}: non-numeric cell {cell!r}"
                    ) from None
    except OSError as exc:
        raise IngestError(f"cannot read {spec.path}: {exc}") from exc
    if not values:
        raise IngestError(f"{spec.path}: no data rows")
    label = header[index] if index < len(header) else str(spec.column)
    return SampledSeries.from_raw(values, label=label, transform=spec.transform)


def _column_index(header, column, path) -> int:
    if isinstance(column, int):
        index = column
    else:
        stripped = [h.strip() for h in header]
        if column in stripped:
            return stripped.index(column)
        try:
            index = int(column)
        except ValueError:
            raise IngestError(
                f"{path}: column {column!r} not found in header {stripped}"
            ) from None
    if not (0 <= index < len(header)):
        raise IngestError(
            f"{path}: column index {index} out of range for {len(header)} columns"
        )
    return index
