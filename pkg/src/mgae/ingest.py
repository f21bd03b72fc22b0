"""Loading, cleaning, and period-splitting of asset return panels.

The on-disk format is a UTF-8, comma-delimited CSV with header
``date,ASSET1,ASSET2,...``, ISO-8601 dates, decimal-point numbers, and empty
strings for missing cells.  All functions here are pure: they never mutate
their inputs and are safe to call concurrently.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from datetime import date as _date
from pathlib import Path

import numpy as np

from .errors import (
    CellError,
    ConfigError,
    FormatError,
    InsufficientDataError,
    OrderingError,
    SchemaError,
)


def _validate_iso_date(text: str, context: str) -> str:
    """Return `text` if it is a valid YYYY-MM-DD date, else raise CellError."""
    try:
        parsed = _date.fromisoformat(text)
    except ValueError as exc:
        raise CellError(f"{context}: invalid ISO-8601 date {text!r}") from exc
    # Normalised form so later comparisons can stay lexicographic.
    return parsed.isoformat()


@dataclass(frozen=True)
class ReturnsMatrix:
    """A T x k panel of simple returns with a date index and asset labels.

    `values` may contain NaN before cleaning; after :func:`clean_panel` the
    panel is rectangular with no gaps.  Dates are ISO strings and strictly
    increasing; assets are unique and keep file column order.
    """

    dates: tuple[str, ...]
    assets: tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 2 or vals.shape != (len(self.dates), len(self.assets)):
            raise SchemaError(
                f"values shape {vals.shape} does not match "
                f"{len(self.dates)} dates x {len(self.assets)} assets"
            )
        if len(set(self.assets)) != len(self.assets):
            dupes = sorted({a for a in self.assets if self.assets.count(a) > 1})
            raise SchemaError(f"duplicate asset identifiers: {dupes}")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur <= prev:
                raise OrderingError(f"dates not strictly increasing at {cur!r} (after {prev!r})")

    @property
    def n_obs(self) -> int:
        return len(self.dates)

    @property
    def n_assets(self) -> int:
        return len(self.assets)

    def has_missing(self) -> bool:
        return bool(np.isnan(self.values).any())


@dataclass(frozen=True)
class PeriodSpec:
    """A named, inclusive [start, end] date window."""

    name: str
    start: str
    end: str

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "start", _validate_iso_date(self.start, f"period {self.name!r} start"))
            object.__setattr__(self, "end", _validate_iso_date(self.end, f"period {self.name!r} end"))
        except CellError as exc:
            # a bad period date is a configuration mistake, not a data defect
            raise ConfigError(str(exc)) from None
        if self.start > self.end:
            raise ConfigError(f"period {self.name!r}: start {self.start} after end {self.end}")


def load_returns_csv(path: str | Path) -> ReturnsMatrix:
    """Read a return panel from CSV.

    Column order is preserved; empty cells become NaN (the pre-clean missing
    marker).  Raises FormatError for a bad header, SchemaError for duplicate
    asset columns, CellError (with row/column coordinates) for unparsable
    cells, and OrderingError for out-of-order dates.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        if not header or header[0] != "date":
            raise FormatError(f"{path}: first header column must be 'date', got {header[:1]!r}")
        assets = [h.strip() for h in header[1:]]
        if not assets:
            raise FormatError(f"{path}: no asset columns")
        if any(a == "" for a in assets):
            raise FormatError(f"{path}: blank asset column name in header")
        if len(set(assets)) != len(assets):
            dupes = sorted({a for a in assets if assets.count(a) > 1})
            raise SchemaError(f"{path}: duplicate asset identifiers: {dupes}")

        dates: list[str] = []
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(assets) + 1:
                raise FormatError(
                    f"{path}: line {lineno} has {len(row)} fields, expected {len(assets) + 1}"
                )
            day = _validate_iso_date(row[0].strip(), f"{path}: line {lineno}, column 'date'")
            parsed: list[float] = []
            for col, cell in enumerate(row[1:]):
                text = cell.strip()
                if text == "":
                    parsed.append(math.nan)
                    continue
                try:
                    parsed.append(float(text))
                except ValueError:
                    raise CellError(
                        f"{path}: line {lineno}, column {assets[col]!r}: "
                        f"cannot parse {cell!r} as a number"
                    ) from None
            dates.append(day)
            rows.append(parsed)

    if not rows:
        raise InsufficientDataError(f"{path}: no data rows")
    values = np.array(rows, dtype=float)
    return ReturnsMatrix(dates=tuple(dates), assets=tuple(assets), values=values)


def write_returns_csv(panel: ReturnsMatrix, path: str | Path) -> Path:
    """Write `panel` in the exact schema :func:`load_returns_csv` reads.

    Values use repr round-tripping, so load(write(p)) reproduces p bit for bit.
    NaN cells are written as empty strings.
    """
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", *panel.assets])
        for day, row in zip(panel.dates, panel.values):
            cells = ["" if math.isnan(v) else repr(float(v)) for v in row]
            writer.writerow([day, *cells])
    return path


def clean_panel(raw: ReturnsMatrix) -> ReturnsMatrix:
    """Drop every row containing at least one missing cell.

    The asset set is unchanged.  Raises InsufficientDataError when fewer than
    2 complete rows remain.
    """
    keep = ~np.isnan(raw.values).any(axis=1)
    n_kept = int(keep.sum())
    if n_kept < 2:
        raise InsufficientDataError(
            f"cleaning left {n_kept} complete rows of {raw.n_obs}; need at least 2"
        )
    if n_kept == raw.n_obs:
        return raw
    dates = tuple(d for d, k in zip(raw.dates, keep) if k)
    return ReturnsMatrix(dates=dates, assets=raw.assets, values=raw.values[keep])


def split_periods(
    panel: ReturnsMatrix, specs: list[PeriodSpec]
) -> list[tuple[PeriodSpec, ReturnsMatrix]]:
    """Slice a cleaned panel into one sub-panel per period spec.

    Rows outside every spec are excluded.  Specs must not overlap; a spec
    capturing fewer than 2 rows raises InsufficientDataError naming it.
    """
    ordered = sorted(specs, key=lambda s: s.start)
    for a, b in zip(ordered, ordered[1:]):
        if b.start <= a.end:
            raise ConfigError(f"periods {a.name!r} and {b.name!r} overlap")

    out: list[tuple[PeriodSpec, ReturnsMatrix]] = []
    for spec in specs:
        mask = np.array([spec.start <= d <= spec.end for d in panel.dates], dtype=bool)
        n_rows = int(mask.sum())
        if n_rows < 2:
            raise InsufficientDataError(
                f"period {spec.name!r} [{spec.start}..{spec.end}] captures "
                f"{n_rows} rows; need at least 2"
            )
        dates = tuple(d for d, m in zip(panel.dates, mask) if m)
        out.append((spec, ReturnsMatrix(dates=dates, assets=panel.assets, values=panel.values[mask])))
    return out
