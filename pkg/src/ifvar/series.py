"""Annual time series: data model, CSV ingestion, alignment and transforms."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, InsufficientDataError, ValidationError

MIN_PAIR_LENGTH = 10
CO2_FORCING_COEF = 5.35  # W/m^2 per unit log concentration ratio


def _frozen(a, dtype):
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """An annual series with consecutive integer years.

    Arrays are copied and made read-only on construction.
    """

    name: str
    years: np.ndarray
    values: np.ndarray
    unit: str = ""

    def __post_init__(self):
        years = np.asarray(self.years)
        if years.size and not np.all(np.equal(np.mod(years, 1), 0)):
            raise ValidationError(f"{self.name}: years must be integers")
        years = _frozen(years, np.int64)
        values = _frozen(self.values, np.float64)
        if years.ndim != 1 or values.shape != years.shape:
            raise ValidationError(
                f"{self.name}: years and values must be 1-d of equal length, "
                f"got {years.shape} and {values.shape}"
            )
        if years.size < 2:
            raise ValidationError(f"{self.name}: need at least 2 observations")
        steps = np.diff(years)
        if np.any(steps <= 0):
            raise ValidationError(f"{self.name}: years must be strictly increasing")
        if np.any(steps != 1):
            gap = int(years[:-1][steps != 1][0])
            raise ValidationError(f"{self.name}: years not consecutive after {gap}")
        if not np.all(np.isfinite(values)):
            raise ValidationError(f"{self.name}: non-finite values")
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.years.size

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.name == other.name
            and self.unit == other.unit
            and np.array_equal(self.years, other.years)
            and np.array_equal(self.values, other.values)
        )

    @property
    def start(self) -> int:
        return int(self.years[0])

    @property
    def end(self) -> int:
        return int(self.years[-1])

    def between(self, start=None, end=None) -> "TimeSeries":
        """Restrict to ``start <= year <= end`` (either bound may be None)."""
        lo = self.start if start is None else start
        hi = self.end if end is None else end
        mask = (self.years >= lo) & (self.years <= hi)
        return self.replace(years=self.years[mask], values=self.values[mask])

    def replace(self, **changes) -> "TimeSeries":
        fields = dict(name=self.name, years=self.years, values=self.values, unit=self.unit)
        fields.update(changes)
        return TimeSeries(**fields)

    def to_csv(self, path) -> None:
        """Write the canonical ``year,value`` exchange format."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["year", "value"])
            for y, v in zip(self.years, self.values):
                writer.writerow([int(y), repr(float(v))])


@dataclass(frozen=True, eq=False)
class PairedSample:
    """Two series on an identical run of years.

    ``x`` is the candidate cause, ``y`` the response.
    """

    x: TimeSeries
    y: TimeSeries

    def __post_init__(self):
        if not np.array_equal(self.x.years, self.y.years):
            raise ValidationError("paired series must share the identical year set")
        if len(self.x) < MIN_PAIR_LENGTH:
            raise InsufficientDataError(
                f"paired sample has {len(self.x)} points, need at least {MIN_PAIR_LENGTH}"
            )

    def __len__(self):
        return len(self.x)

    def __eq__(self, other):
        if not isinstance(other, PairedSample):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    @property
    def years(self) -> np.ndarray:
        return self.x.years

    @property
    def names(self) -> tuple:
        return (self.x.name, self.y.name)

    def matrix(self) -> np.ndarray:
        """Observations as an ``n x 2`` array with columns ``(x, y)``."""
        return np.column_stack([self.x.values, self.y.values])

    def between(self, start=None, end=None) -> "PairedSample":
        return PairedSample(self.x.between(start, end), self.y.between(start, end))


@dataclass(frozen=True)
class CsvSchema:
    """Column mapping for :func:`load_csv`."""

    year_column: str
    value_column: str
    delimiter: str = ","
    name: str | None = None
    unit: str = ""
    # fraction of data rows allowed to be unparseable before giving up
    max_malformed_fraction: float = 0.05


_MISSING = {"", "na", "nan", "null", "none", "-", "--", "-999", "-999.0", "-99.99"}


def load_csv(path, schema: CsvSchema) -> TimeSeries:
    """Read one annual series from a delimited text file with a header row.

    Lines starting with ``#`` are skipped.  Rows whose value is missing are
    dropped and counted in a single warning.
    Rows that cannot be parsed at all count as malformed; if more than
    ``schema.max_malformed_fraction`` of the rows are malformed a
    :class:`DataError` is raised.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8-sig") as fh:
        lines = (line for line in fh if not line.startswith("#"))
        reader = csv.DictReader(lines, delimiter=schema.delimiter)
        header = reader.fieldnames or []
        for col in (schema.year_column, schema.value_column):
            if col not in header:
                raise DataError(f"{path.name}: column {col!r} not in header {header}")
        years, values = [], []
        missing = malformed = total = 0
        for row in reader:
            total += 1
            raw_year = (row.get(schema.year_column) or "").strip()
            raw_value = (row.get(schema.value_column) or "").strip()
            try:
                year = float(raw_year)
                if not year.is_integer():
                    raise ValueError(raw_year)
            except ValueError:
                malformed += 1
                continue
            if raw_value.lower() in _MISSING:
                missing += 1
                continue
            try:
                value = float(raw_value)
            except ValueError:
                malformed += 1
                continue
            if not math.isfinite(value):
                missing += 1
                continue
            years.append(int(year))
            values.append(value)
    if total and malformed / total > schema.max_malformed_fraction:
        raise DataError(f"{path.name}: {malformed} of {total} rows malformed")
    if missing:
        warnings.warn(f"{path.name}: dropped {missing} rows with missing values", stacklevel=2)
    name = schema.name or schema.value_column
    return TimeSeries(name, years, values, schema.unit)


def align_pair(a: TimeSeries, b: TimeSeries) -> PairedSample:
    """Restrict two series to their common years.

    The intersection of two consecutive runs of years is itself consecutive,
    so the result is always a valid pair as long as it is long enough.
    """
    lo, hi = max(a.start, b.start), min(a.end, b.end)
    overlap = hi - lo + 1
    if overlap < MIN_PAIR_LENGTH:
        raise InsufficientDataError(
            f"{a.name}/{b.name}: {max(overlap, 0)} common years, need {MIN_PAIR_LENGTH}"
        )
    return PairedSample(a.between(lo, hi), b.between(lo, hi))


def ppm_to_rf(co2: TimeSeries, base_year: int = 1850) -> TimeSeries:
    """Radiative forcing of CO2 relative to ``base_year``: ``5.35 ln(C_t / C_base)``."""
    idx = np.flatnonzero(co2.years == base_year)
    if idx.size == 0:
        raise ValidationError(f"base year {base_year} not in {co2.start}-{co2.end}")
    if np.any(co2.values <= 0):
        raise ValidationError("CO2 concentrations must be positive")
    rf = CO2_FORCING_COEF * np.log(co2.values / co2.values[idx[0]])
    rf[idx[0]] = 0.0
    return co2.replace(name=f"{co2.name}_rf", values=rf, unit="W/m^2")


def first_difference(s: TimeSeries, k: int = 1, dt: float = 1.0) -> TimeSeries:
    """Forward difference ``(X[t+k] - X[t]) / (k dt)`` dated at year ``t``."""
    if k <= 0:
        raise ValidationError(f"difference order must be positive, got {k}")
    if len(s) <= k + 1:
        raise InsufficientDataError(f"{s.name}: {len(s)} points too short for k={k}")
    diff = (s.values[k:] - s.values[:-k]) / (k * dt)
    return s.replace(name=f"d{s.name}", years=s.years[:-k], values=diff)
