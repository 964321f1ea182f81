"""Optional static SVG charts (requires matplotlib)."""

from __future__ import annotations

from .errors import ValidationError

REGION_COLORS = {"blue": "#cfe3f7", "green": "#d5f0d0"}


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:
        raise ValidationError("SVG output needs matplotlib (pip install ifvar[plot])") from exc
    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "ifvar"
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})


def sweep_svg(result, path):
    """Flows and FEVD shares against innovation correlation, colored by region."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    step = result.rho[1] - result.rho[0] if len(result.rho) > 1 else 0.01
    for rho, region in zip(result.rho, result.region):
        if region in REGION_COLORS:
            ax.axvspan(rho - step / 2, rho + step / 2, color=REGION_COLORS[region], lw=0)
    ax.plot(result.rho, result.tau_12, "k-", label="tau 1->2")
    ax.plot(result.rho, result.tau_21, "k--", label="tau 2->1")
    ax.plot(result.rho, result.fevd12_ord1, "C0-", label="FEVD 1->2 (X1 first)")
    ax.plot(result.rho, result.fevd21_ord1, "C0--", label="FEVD 2->1 (X1 first)")
    ax.plot(result.rho, result.fevd12_ord2, "C3-", label="FEVD 1->2 (X2 first)")
    ax.plot(result.rho, result.fevd21_ord2, "C3--", label="FEVD 2->1 (X2 first)")
    ax.set_xlabel("innovation correlation")
    ax.set_title(f"{result.label}, h = {result.h}")
    ax.legend(fontsize=7, ncol=2)
    _save(fig, path)
    plt.close(fig)


def irf_svg(bands, names, path):
    """Grid of response panels with shaded credible bands."""
    plt = _pyplot()
    m = bands.median.shape[1]
    fig, axes = plt.subplots(m, m, figsize=(8, 6), squeeze=False)
    h = range(bands.median.shape[0])
    for r in range(m):
        for s in range(m):
            ax = axes[r][s]
            ax.fill_between(h, bands.lower[:, r, s], bands.upper[:, r, s], color="0.85")
            ax.plot(h, bands.median[:, r, s], "k-")
            ax.axhline(0, color="0.5", lw=0.5)
            ax.set_title(f"{names[s]} -> {names[r]}", fontsize=9)
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)
