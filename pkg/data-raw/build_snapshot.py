"""Rebuild the bundled annual series under src/ifvar/data/ from the raw files here.

Raw inputs (copied verbatim from packages on PyPI, no network needed):

* ``HadCRUT.5.0.1.0.analysis.summary_series.global.annual.csv`` -- HadCRUT5 global
  annual anomaly, shipped in pyleoclim 1.1.0 (``pyleoclim/data``).
* ``cmip5_annex2_forcing.csv`` -- IPCC AR5 WG1 Annex II historical ERF (1750-2011),
  shipped in fair 1.6.4 (``fair/ancil``).
* ``rcmip_ssp245_world_subset.csv`` -- World / ssp245 rows of the RCMIP v5.1.0 annual
  means (historical through 2014, ssp245 afterwards), shipped in fair 1.6.4
  (``fair/SSPs/data``).

Run from the repository root::

    python data-raw/build_snapshot.py
"""

from pathlib import Path

import pandas as pd

RAW = Path(__file__).resolve().parent
OUT = RAW.parent / "src" / "ifvar" / "data"


def write(name, years, values, digits=6):
    frame = pd.DataFrame({"year": years.astype(int), "value": values.round(digits)})
    frame = frame.dropna()
    frame.to_csv(OUT / f"{name}.csv", index=False, lineterminator="\n")
    print(f"{name}: {frame.year.iloc[0]}-{frame.year.iloc[-1]} ({len(frame)} rows)")


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    had = pd.read_csv(RAW / "HadCRUT.5.0.1.0.analysis.summary_series.global.annual.csv")
    write("gmta_hadcrut5", had["Time"], had["Anomaly (deg C)"])

    ar5 = pd.read_csv(RAW / "cmip5_annex2_forcing.csv")
    ar5 = ar5[ar5.Year >= 1850]
    components = [c for c in ar5.columns if c != "Year"]
    natural = ["Solar", "Volcano"]
    anthro = [c for c in components if c not in natural]
    write("ar5_total_erf", ar5.Year, ar5[components].sum(axis=1), 3)
    write("ar5_anthropogenic_erf", ar5.Year, ar5[anthro].sum(axis=1), 3)
    write("ar5_co2_erf", ar5.Year, ar5["CO2"], 3)
    write("ar5_aerosol_erf", ar5.Year, ar5["Aerosol (Total)"], 3)
    write("ar5_solar_erf", ar5.Year, ar5["Solar"], 3)
    write("ar5_volcanic_erf", ar5.Year, ar5["Volcano"], 3)

    rc = pd.read_csv(RAW / "rcmip_ssp245_world_subset.csv").set_index("Variable")
    years = pd.Series(range(1850, 2021))
    cols = [str(y) for y in years]

    def row(variable):
        return rc.loc[variable, cols].astype(float).reset_index(drop=True)

    erf = "Effective Radiative Forcing"
    write("rcmip_total_erf", years, row(erf))
    write("rcmip_anthropogenic_erf", years, row(f"{erf}|Anthropogenic"))
    write("rcmip_co2_erf", years, row(f"{erf}|Anthropogenic|CO2"))
    write("rcmip_aerosol_erf", years, row(f"{erf}|Anthropogenic|Aerosols"))
    write("rcmip_solar_erf", years, row(f"{erf}|Natural|Solar"))
    write("rcmip_volcanic_erf", years, row(f"{erf}|Natural|Volcanic"))
    write("co2_ppm", years, row("Atmospheric Concentrations|CO2"), 3)
    # annual means stop at 2015 (2016-2019 are gaps), keep the consecutive stretch
    emis = row("Emissions|CO2|MAGICC Fossil and Industrial")
    write("co2_emissions_mt", years[years <= 2015], emis[years <= 2015], 3)


if __name__ == "__main__":
    main()
