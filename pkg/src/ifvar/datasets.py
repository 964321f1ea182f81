"""Bundled annual series and the forcing/temperature pairs built from them.

Two sample periods are available.  ``1850-2005`` uses the IPCC AR5 Annex II
forcing reconstruction, ``1850-2017`` the RCMIP historical+ssp245 forcing.
Temperature is HadCRUT5 in both.  Provenance is documented in
``data/README.md``; set ``IFVAR_DATA_DIR`` to read the same file names from
another directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import DataError, ValidationError
from .series import CsvSchema, PairedSample, TimeSeries, align_pair, load_csv, ppm_to_rf

DATA_ENV = "IFVAR_DATA_DIR"
TEMPERATURE = "gmta_hadcrut5"


@dataclass(frozen=True)
class Period:
    start: int
    end: int
    forcing_prefix: str
    # the bundled reconstructions are not the vintages used for the published tables
    matches_reference_vintage: bool = False


PERIODS = {
    "1850-2005": Period(1850, 2005, "ar5"),
    "1850-2017": Period(1850, 2017, "rcmip"),
}


@dataclass(frozen=True)
class PairSource:
    key: str
    label: str
    series: str | None  # file stem; "{forcing}" expands to the period prefix
    unit: str
    transform: str | None = None


PAIRS = {
    p.key: p
    for p in (
        PairSource("total", "Total Forcing", "{forcing}_total_erf", "W/m^2"),
        PairSource("anthropogenic", "Anthropogenic", "{forcing}_anthropogenic_erf", "W/m^2"),
        PairSource("co2_erf", "CO2 - ERF (W/m^2)", "{forcing}_co2_erf", "W/m^2"),
        PairSource("aerosol", "Aerosol", "{forcing}_aerosol_erf", "W/m^2"),
        PairSource("solar", "Solar", "{forcing}_solar_erf", "W/m^2"),
        PairSource("volcanic", "Volcanic", "{forcing}_volcanic_erf", "W/m^2"),
        PairSource("pdo", "PDO", None, "index"),
        PairSource("co2_emissions", "CO2 (Mt/yr)", "co2_emissions_mt", "Mt CO2/yr"),
        PairSource("co2_rf", "CO2 (W/m^2)", "co2_ppm", "W/m^2", transform="ppm_to_rf"),
    )
}
# the seven forcings of the reference information-flow study
REFERENCE_FORCINGS = ("total", "anthropogenic", "co2_erf", "aerosol", "solar", "volcanic", "pdo")


def data_dir(override=None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("ifvar") / "data"))


def get_period(name: str) -> Period:
    try:
        return PERIODS[name]
    except KeyError:
        raise ValidationError(f"unknown period {name!r}; choose from {sorted(PERIODS)}") from None


def get_pair_source(key: str) -> PairSource:
    try:
        return PAIRS[key]
    except KeyError:
        raise ValidationError(f"unknown pair {key!r}; choose from {sorted(PAIRS)}") from None


def load_series(name: str, directory=None, unit: str = "") -> TimeSeries:
    path = data_dir(directory) / f"{name}.csv"
    return load_csv(path, CsvSchema("year", "value", name=name, unit=unit))


def load_pair(key: str, period: str = "1850-2005", directory=None) -> PairedSample:
    """Forcing ``x`` and temperature ``y`` on the period's years (or their overlap)."""
    src = get_pair_source(key)
    per = get_period(period)
    if src.series is None:
        raise DataError(f"no bundled series for {src.label}")
    x = load_series(src.series.format(forcing=per.forcing_prefix), directory, src.unit)
    if src.transform == "ppm_to_rf":
        x = ppm_to_rf(x, base_year=1850)
    x = x.replace(name=key)
    y = load_series(TEMPERATURE, directory, "K").replace(name="gmta")
    return align_pair(x.between(per.start, per.end), y.between(per.start, per.end))
