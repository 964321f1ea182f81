"""Acceptance criteria, each checked at its stated tolerance.

Every test records a one-line verdict that is printed in the pytest terminal
summary (and directly when this file is run as a script).  Empirical
reference values below are the published figures for the 1850-2005 sample;
the bundled data are a different vintage, so mismatches are expected and
reported rather than hidden.
"""

import json

import numpy as np
import pytest

import conftest
from oracles import fevd_direct, fevd_monte_carlo, lyapunov
from ifvar import datasets
from ifvar.analysis import FORCING_FIRST, TEMP_FIRST, analyze_pair
from ifvar.bayes import MinnesotaPrior, posterior_mean_ols_gap
from ifvar.cli import main
from ifvar.errors import DataError
from ifvar.liang import MomentSet, info_flow, sample_moments
from ifvar.sim import ATTRIBUTIONS, DGPS, DgpSpec, analytic_moments, build_b, fevd_shares, simulate_path, sweep
from ifvar.svar import Ordering, cholesky_identify, fevd
from ifvar.var import VarSpec, fit_ols

PERIOD = "1850-2005"

# P=1 rows: rho_u, then FEVD shares i->g, g->i (i first), i->g, g->i (gmta first)
P1_ROWS = {
    "total": (0.29, 51.4, 9.6, 27.6, 28.7),
    "anthropogenic": (-0.19, 5.0, 5.8, 2.2, 17.1),
    "co2_erf": (-0.15, 2.8, 4.7, 1.1, 12.8),
    "aerosol": (-0.10, 3.5, 4.0, 1.8, 1.2),
    "solar": (0.08, 16.6, 4.2, 12.3, 6.8),
    "volcanic": (0.20, 7.1, 1.4, 0.6, 3.7),
    "pdo": (0.34, 9.1, 0.5, 0.2, 10.7),
    "co2_emissions": (-0.05, 4.2, 0.0, 4.4, 0.4),
    "co2_rf": (0.07, 1.6, 4.1, 0.9, 1.8),
}
BIC_LAGS = {
    "total": 4, "anthropogenic": 4, "co2_erf": 4, "aerosol": 4, "solar": 8,
    "volcanic": 4, "pdo": 4, "co2_emissions": 2, "co2_rf": 4,
}
# raw IF x 100 for the pairs whose flows were reproduced
IF_VALUES = {
    "anthropogenic": (35.7, -0.6),
    "co2_erf": (35.1, -0.4),
    "aerosol": (24.3, -0.4),
    "volcanic": (0.2, -0.4),
    "pdo": (-0.2, -0.5),
}
# normalized IF x 100 where the flows were not reproduced
NIF_LOOSE = {"total": (30.6, 20.8), "solar": (13.5, 6.7)}

RHO_TOL, SHARE_TOL, IF_TOL, NIF_TOL = 0.02, 1.5, 0.5, 5.0
TCR20, TCR70, TCR_TOL = 1.99, 2.06, 0.25


def record(number, ok, detail):
    conftest.ACCEPTANCE[number] = (ok, detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def reports():
    out = {}
    for key in datasets.PAIRS:
        try:
            out[key] = analyze_pair(datasets.load_pair(key, PERIOD), h=15)
        except DataError:
            out[key] = None
    return out


def _fevd_row(row):
    return (row.fevd_i_to_g_ifirst, row.fevd_g_to_i_ifirst, row.fevd_i_to_g_gfirst, row.fevd_g_to_i_gfirst)


def test_criterion_1_white_points_with_strict_flow_ranking():
    counts = {n: sweep(n, h=10).summary()["white_with_strict_nif"] for n in sorted(DGPS)}
    record(1, all(c >= 1 for c in counts.values()),
           f"white grid points with a strict flow ranking at h=10, per DGP: {counts}")


def test_criterion_2_colored_regions_shrink_at_short_horizon():
    detail, subset, strict = {}, True, False
    for n in sorted(DGPS):
        short, long_ = sweep(n, h=2).colored, sweep(n, h=10).colored
        subset &= bool(np.all(long_[short]))
        strict |= int(short.sum()) < int(long_.sum())
        detail[n] = f"{int(short.sum())}/{int(long_.sum())}"
    record(2, subset and strict, f"colored points h=2/h=10 {detail}, subset={subset}, strictly fewer somewhere={strict}")


MOMENT_FIELDS = ("sigma_ii", "sigma_jj", "sigma_ij", "sigma_i_di", "sigma_j_di",
                 "sigma_i_dj", "sigma_j_dj", "sigma_di_di", "sigma_dj_dj")


def test_criterion_3_analytic_matches_monte_carlo():
    n, h, worst = 1_000_000, 10, 0.0
    for number in (1, 2, 3):
        a = DGPS[number][0]
        for rho in (-0.6, 0.0, 0.6):
            for att in ATTRIBUTIONS:
                b = build_b(rho, att)
                y12, y21 = fevd_shares(a, b, h)
                analytic = np.array([[1 - y21, y21], [y12, 1 - y12]])
                mc = fevd_monte_carlo(a, b, h, n, seed=number)
                rel = np.linalg.norm(analytic - mc, axis=1) / np.linalg.norm(analytic, axis=1)
                worst = max(worst, float(rel.max()))
            dgp = DgpSpec.reference(number, rho)
            g0, g1 = lyapunov(a, dgp.sigma_u)
            x = simulate_path(dgp, n, seed=number).matrix()
            x = x - x.mean(axis=0)
            sg0 = x.T @ x / n
            sg1 = x[1:].T @ x[:-1] / (n - 1)
            for ana, mc in ((g0, sg0), (g1, sg1)):
                worst = max(worst, float(np.linalg.norm(ana - mc) / np.linalg.norm(ana)))
            ana = analytic_moments(dgp)
            emp = sample_moments(simulate_path(dgp, n, seed=number))
            va = np.array([getattr(ana, f) for f in MOMENT_FIELDS])
            ve = np.array([getattr(emp, f) for f in MOMENT_FIELDS])
            worst = max(worst, float(np.linalg.norm(va - ve) / np.linalg.norm(va)))
    record(3, worst < 0.01, f"worst relative error over FEVD rows and moments = {worst:.4f} (limit 0.01)")


def test_criterion_4_empirical_table(reports):
    misses = []
    for key, ref in P1_ROWS.items():
        rep = reports[key]
        if rep is None:
            misses.append(f"{key}: no data")
            continue
        p_star, p1 = rep.rows
        if abs(p1.rho_u - ref[0]) > RHO_TOL:
            misses.append(f"{key} rho_u {p1.rho_u:.2f} vs {ref[0]}")
        got = _fevd_row(p1)
        bad = [f"{g:.1f} vs {r}" for g, r in zip(got, ref[1:]) if abs(g - r) > SHARE_TOL]
        if bad:
            misses.append(f"{key} fevd {bad}")
        if p_star.lags != BIC_LAGS[key]:
            misses.append(f"{key} BIC lags {p_star.lags} vs {BIC_LAGS[key]}")
        if key in IF_VALUES:
            got = (rep.if_i_to_g, rep.if_g_to_i)
            if any(abs(g - r) > IF_TOL for g, r in zip(got, IF_VALUES[key])):
                misses.append(f"{key} IF {got[0]:.2f}/{got[1]:.2f} vs {IF_VALUES[key]}")
        if key in NIF_LOOSE:
            got = (rep.nif_i_to_g, rep.nif_g_to_i)
            if any(abs(g - r) > NIF_TOL for g, r in zip(got, NIF_LOOSE[key])):
                misses.append(f"{key} NIF {got[0]:.1f}/{got[1]:.1f} vs {NIF_LOOSE[key]}")
    record(4, not misses, "all rows within tolerance" if not misses else f"{len(misses)} mismatches: " + "; ".join(misses))


def test_criterion_5_residual_correlation_rejections(reports):
    reject_p1, reject_star = {}, {}
    for key in datasets.REFERENCE_FORCINGS:
        rep = reports[key]
        reject_p1[key] = rep is not None and rep.rows[1].p_value < 0.10
        reject_star[key] = rep is not None and rep.rows[0].p_value < 0.10
    n_p1 = sum(reject_p1.values())
    star_ok = all(reject_star[k] != (k == "solar") for k in reject_star)
    detail = (f"P=1 rejections {n_p1}/7 (need >=5); P* rejections "
              f"{sorted(k for k, v in reject_star.items() if v)} (need all but solar)")
    record(5, n_p1 >= 5 and star_ok, detail)


@pytest.fixture(scope="module")
def tcr_table(tmp_path_factory):
    out = tmp_path_factory.mktemp("tcr")
    assert main(["tcr", "--period", PERIOD, "--draws", "10000", "--seed", "0",
                 "--format", "json", "--threads", "2", "--out", str(out)]) == 0
    doc = json.loads((out / f"tcr_{PERIOD}.json").read_text())
    return {row["ordering"]: row for row in doc["rows"]}


def test_criterion_6_tcr_numeric_targets(tcr_table):
    row = tcr_table["co2, gmta"]
    t20, t70 = row["tcr20_no_trend"], row["tcr70_no_trend"]
    ok = abs(t20 - TCR20) <= TCR_TOL and abs(t70 - TCR70) <= TCR_TOL
    detail = f"(numeric) CO2-first no-trend TCR20 {t20:.2f} vs {TCR20}, TCR70 {t70:.2f} vs {TCR70} (+-{TCR_TOL})"
    conftest.ACCEPTANCE["6a"] = (ok, detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion 6a: {detail}")
    assert ok, detail


def test_criterion_6_tcr_ordering_and_trend(tcr_table):
    co2, gmta = tcr_table["co2, gmta"], tcr_table["gmta, co2"]
    ordering = co2["tcr20_no_trend"] > gmta["tcr20_no_trend"]
    trend = co2["tcr70_trend"] > co2["tcr70_no_trend"] and gmta["tcr70_trend"] > gmta["tcr70_no_trend"]
    detail = (f"(binding) TCR20 CO2-first {co2['tcr20_no_trend']:.2f} > GMTA-first {gmta['tcr20_no_trend']:.2f}: "
              f"{ordering}; trend raises TCR70 in both orderings: {trend}")
    conftest.ACCEPTANCE["6b"] = (ordering and trend, detail)
    print(f"{'PASS' if ordering and trend else 'FAIL'} criterion 6b: {detail}")
    assert ordering and trend, detail


def _invariants():
    checks = {}
    rng = np.random.default_rng(11)
    pair = datasets.load_pair("total", PERIOD)
    fit = fit_ols(pair, VarSpec(p=2))
    worst_sum = worst_chol = 0.0
    zero_exact = True
    for order in ((0, 1), (1, 0)):
        factor = cholesky_identify(fit.sigma_u, Ordering(order))
        b = factor.b
        worst_chol = max(worst_chol, float(np.abs(b @ b.T - fit.sigma_u).max()))
        zero_exact &= b[order[0], order[1]] == 0.0
        dec = fevd(fit, factor, 15)
        worst_sum = max(worst_sum, float(np.abs(dec.shares.sum(axis=-1) - 1).max()))
    for number in sorted(DGPS):
        a = DGPS[number][0]
        for att in ATTRIBUTIONS:
            b = build_b(rng.uniform(-0.9, 0.9), att)
            worst_sum = max(worst_sum, float(np.abs(fevd_direct(a, b, 10).sum(axis=1) - 1).max()))
    checks["FEVD shares sum to 1"] = worst_sum <= 1e-10
    checks["Cholesky reconstruction"] = worst_chol <= 1e-10
    checks["zero-impact restriction exact"] = bool(zero_exact)

    diag = np.diag([0.7, 1.3])
    a = DGPS[3][0]
    s1 = fevd_direct(a, cholesky_identify(diag, Ordering((0, 1))).b, 10)
    s2 = fevd_direct(a, cholesky_identify(diag, Ordering((1, 0))).b, 10)
    checks["ordering irrelevant under diagonal covariance"] = np.allclose(s1, s2, atol=1e-12, rtol=0)

    m = MomentSet(sigma_ii=1.2, sigma_jj=0.8, sigma_ij=0.0, sigma_i_di=-0.3,
                  sigma_j_di=0.4, sigma_i_dj=0.1, sigma_j_dj=-0.2,
                  sigma_di_di=0.9, sigma_dj_dj=0.5)
    checks["flow vanishes at zero covariance"] = info_flow(m) == 0.0

    gap = posterior_mean_ols_gap(pair, VarSpec(p=2), MinnesotaPrior(lambda_overall=1e8))
    checks["flat prior equals OLS"] = gap <= 1e-6

    checks["CLI outputs byte-identical on rerun"] = _cli_deterministic()
    return checks


def _cli_deterministic():
    import tempfile
    from pathlib import Path

    commands = (
        ["simulate", "--dgp", "2", "--h", "2"],
        ["analyze", "--pair", "total", "--pair", "solar"],
        ["irf", "--lags", "2", "--horizon", "5", "--draws", "200", "--seed", "3"],
        ["tcr", "--draws", "200", "--seed", "3", "--format", "json"],
    )
    with tempfile.TemporaryDirectory() as tmp:
        for i, cmd in enumerate(commands):
            blobs = []
            for threads in ("1", "3"):
                out = Path(tmp) / f"{i}_{threads}"
                if main([*cmd, "--threads", threads, "--out", str(out)]) != 0:
                    return False
                blobs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
            if blobs[0] != blobs[1]:
                return False
    return True


def test_criterion_7_invariant_suite():
    checks = _invariants()
    failed = [k for k, v in checks.items() if not v]
    record(7, not failed, f"{len(checks) - len(failed)}/{len(checks)} invariants hold" + (f"; failed: {failed}" if failed else ""))


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
