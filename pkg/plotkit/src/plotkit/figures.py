"""Figure renderers for the simulator's CSV products.

Four kinds are supported: charge/backflow time series, survival heatmaps
with the analytic detuning ridge overlay, the scaling/paradox/advantage
panel, and the coupling-ratio validity plot.  Rendering never mutates its
inputs, and identical inputs with identical style produce identical bytes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import SchemaError, Table, read_table

_DEFAULT_STYLE = {
    "dpi": 120,
    "cmap": "viridis",
    "figsize_single": (6.0, 4.0),
    "figsize_panel": (12.0, 4.0),
}


def _style(overrides: dict | None) -> dict:
    out = dict(_DEFAULT_STYLE)
    out.update(overrides or {})
    return out


def _save(fig, out_path: str | Path, style: dict) -> str:
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=style["dpi"])
    plt.close(fig)
    return str(out)


def render_timeseries(timeseries: Table, out_path: str | Path,
                      style: dict | None = None) -> str:
    """Ergotropy over time; the trace-distance series rides a twin axis when
    its column is present."""
    st = _style(style)
    fig, ax = plt.subplots(figsize=st["figsize_single"])
    t = np.asarray(timeseries["t"])
    ax.plot(t, timeseries["ergotropy"], color="tab:red", label="ergotropy")
    ax.set_xlabel("t")
    ax.set_ylabel("ergotropy")
    if "trace_distance" in timeseries.columns:
        twin = ax.twinx()
        twin.plot(t, timeseries["trace_distance"], color="tab:blue",
                  linestyle="--", label="trace distance")
        twin.set_ylabel("trace distance")
        twin.set_ylim(bottom=0.0)
    ax.set_title("Charge decay and distinguishability")
    fig.tight_layout()
    return _save(fig, out_path, st)


def render_heatmap(survival: Table, out_path: str | Path,
                   curve: Table | None = None,
                   style: dict | None = None) -> str:
    """Residual ergotropy over the (detuning, decay-rate) plane with the
    analytic optimal-detuning curve dashed on top."""
    st = _style(style)
    deltas = np.unique(np.asarray(survival["delta"]))
    gammas = np.unique(np.asarray(survival["gamma0"]))
    grid = np.full((gammas.size, deltas.size), np.nan)
    d_idx = {v: i for i, v in enumerate(deltas)}
    g_idx = {v: i for i, v in enumerate(gammas)}
    for d, g0, e in zip(survival["delta"], survival["gamma0"],
                        survival["e_res"]):
        grid[g_idx[g0], d_idx[d]] = e
    if np.any(np.isnan(grid)):
        raise SchemaError(survival.path, "e_res",
                          "rows do not form a complete delta x gamma0 grid")
    fig, ax = plt.subplots(figsize=st["figsize_single"])
    mesh = ax.pcolormesh(deltas, gammas, grid, cmap=st["cmap"],
                         shading="nearest")
    fig.colorbar(mesh, ax=ax, label="residual ergotropy")
    if curve is not None:
        g0 = np.asarray(curve["gamma0"])
        ds = np.asarray(curve["delta_star"])
        inside = (ds >= deltas.min()) & (ds <= deltas.max())
        ax.plot(ds[inside], g0[inside], "w--", linewidth=1.5,
                label="analytic optimum")
        ax.legend(loc="upper right")
    ax.set_xlabel("detuning")
    ax.set_ylabel("base decay rate")
    ax.set_title("Ergotropy survival map")
    fig.tight_layout()
    return _save(fig, out_path, st)


def render_scaling_panel(scaling: Table, advantage: Table,
                         out_path: str | Path,
                         paradox: Table | None = None,
                         style: dict | None = None) -> str:
    """Log-log detuning scaling with the sqrt(N) reference, the optional
    ergotropy/backflow trade-off panel, and the collective advantage with
    the superextensive region shaded."""
    st = _style(style)
    n_panels = 3 if paradox is not None else 2
    fig, axes = plt.subplots(1, n_panels, figsize=st["figsize_panel"])
    ax = axes[0]
    n = np.asarray(scaling["n"])
    d_opt = np.asarray(scaling["delta_opt"])
    flags = (np.asarray(scaling["boundary_flag"]) > 0.5
             if "boundary_flag" in scaling.columns
             else np.zeros_like(n, dtype=bool))
    ax.loglog(n[~flags], d_opt[~flags], "o", color="tab:red",
              label="interior optimum")
    if flags.any():
        ax.loglog(n[flags], d_opt[flags], "o", mfc="none", color="tab:red",
                  label="window-capped")
    ref = d_opt[0] * np.sqrt(n / n[0])
    ax.loglog(n, ref, "k--", label=r"$N^{0.5}$ reference")
    ax.set_xlabel("N")
    ax.set_ylabel("optimal detuning")
    ax.set_title("Detuning scaling")
    ax.legend(fontsize=8)

    if paradox is not None:
        axp = axes[1]
        axp.plot(paradox["delta"], paradox["e_res"], "o-", color="tab:red",
                 label="ergotropy")
        axp.set_xlabel("detuning")
        axp.set_ylabel("residual ergotropy", color="tab:red")
        twin = axp.twinx()
        twin.plot(paradox["delta"], paradox["blp"], "s--", color="tab:blue",
                  label="backflow")
        twin.set_ylabel("backflow measure", color="tab:blue")
        axp.set_title("Memory versus retention")

    axa = axes[-1]
    n_adv = np.asarray(advantage["n"])
    a_n = np.asarray(advantage["a_n"])
    axa.plot(n_adv, a_n, "o-", color="tab:purple")
    axa.axhline(1.0, color="k", linewidth=0.8)
    top = max(float(a_n.max()) * 1.1, 1.05)
    axa.axhspan(1.0, top, color="tab:green", alpha=0.15,
                label="superextensive")
    axa.set_ylim(min(float(a_n.min()) * 0.95, 0.95), top)
    axa.set_xlabel("N")
    axa.set_ylabel("collective advantage")
    axa.set_title("Collective advantage")
    axa.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, out_path, st)


def usc_shade_start(rwa: Table) -> int | None:
    """First array size flagged beyond the validity threshold, or None."""
    for n, flag in zip(rwa["n"], rwa["usc_flag"]):
        if flag > 0.5:
            return int(n)
    return None


def render_rwa(rwa: Table, out_path: str | Path,
               threshold: float = 0.1, style: dict | None = None) -> str:
    """Coupling ratio versus array size; the region above the threshold is
    shaded as the regime where the excitation-conserving model fails."""
    st = _style(style)
    fig, ax = plt.subplots(figsize=st["figsize_single"])
    n = np.asarray(rwa["n"])
    ratio = np.asarray(rwa["ratio"])
    flags = np.asarray(rwa["usc_flag"]) > 0.5
    ax.plot(n[~flags], ratio[~flags], "o-", color="tab:blue", label="valid")
    if flags.any():
        ax.plot(n[flags], ratio[flags], "o", color="tab:red",
                label="beyond threshold")
    top = max(float(ratio.max()) * 1.1, threshold * 1.5)
    ax.axhline(threshold, color="k", linestyle="--", linewidth=1.0)
    ax.axhspan(threshold, top, color="tab:red", alpha=0.15)
    ax.set_ylim(0.0, top)
    ax.set_xlabel("N")
    ax.set_ylabel("coupling ratio")
    ax.set_title("Validity ceiling of the exchange model")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, out_path, st)


def render(spec: dict) -> str:
    """Dispatch one figure specification: kind, inputs, output, style."""
    kind = spec.get("kind")
    inputs = spec.get("inputs", {})
    output = spec.get("output")
    style = spec.get("style")
    if not output:
        raise ValueError("figure spec needs an 'output' path")
    if kind == "timeseries":
        return render_timeseries(read_table(inputs["timeseries"], "timeseries"),
                                 output, style)
    if kind == "heatmap":
        curve = (read_table(inputs["analytic_curve"], "analytic_curve")
                 if "analytic_curve" in inputs else None)
        return render_heatmap(read_table(inputs["survival"], "survival"),
                              output, curve, style)
    if kind == "scaling_panel":
        paradox = (read_table(inputs["paradox"], "paradox")
                   if "paradox" in inputs else None)
        return render_scaling_panel(
            read_table(inputs["scaling"], "scaling"),
            read_table(inputs["advantage"], "advantage"),
            output, paradox, style)
    if kind == "rwa":
        threshold = float((style or {}).get("threshold", 0.1))
        return render_rwa(read_table(inputs["rwa"], "rwa"), output,
                          threshold, style)
    raise ValueError(f"unknown figure kind {kind!r}")
