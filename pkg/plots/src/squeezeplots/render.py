"""Figure assembly: Wigner-slice panels and squeezing-curve overlays."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import DataFile, SchemaError, curve_style, read_datafile, slice_grid  # noqa: E402


def render_wigner_panels(slice_paths, out_path, fmt: str | None = None):
    """One surface + one contour panel per slice, diverging scale centered at 0.

    Returns the Figure (also written to out_path).
    """
    frames = [read_datafile(p) for p in slice_paths]
    if not frames:
        raise SchemaError("no input slices")
    grids = [slice_grid(df) for df in frames]
    vmax = max(float(np.max(np.abs(g[2]))) for g in grids)
    fig = plt.figure(figsize=(9.0, 3.6 * len(frames)))
    for row, (df, (a2, b2, w)) in enumerate(zip(frames, grids)):
        t_label = df.config.get("t", "?")
        aa, bb = np.meshgrid(a2, b2, indexing="ij")
        ax3 = fig.add_subplot(len(frames), 2, 2 * row + 1, projection="3d")
        ax3.plot_surface(aa, bb, w, cmap="RdBu_r", vmin=-vmax, vmax=vmax,
                         rcount=60, ccount=60, linewidth=0)
        ax3.set_xlabel(r"$\alpha_2$")
        ax3.set_ylabel(r"$\beta_2$")
        ax3.set_title(f"{df.config.get('evolution', df.command)}  t = {t_label}")
        axc = fig.add_subplot(len(frames), 2, 2 * row + 2)
        cs = axc.contourf(aa, bb, w, levels=41, cmap="RdBu_r",
                          vmin=-vmax, vmax=vmax)
        axc.set_xlabel(r"$\alpha_2$")
        axc.set_ylabel(r"$\beta_2$")
        axc.set_title(f"min = {w.min():.3g}, max = {w.max():.3g}")
        fig.colorbar(cs, ax=axc)
    fig.tight_layout()
    fig.savefig(out_path, format=fmt)
    return fig


def render_squeezing_overlay(curve_paths, out_path, fmt: str | None = None):
    """Overlay of squeezing curves with the threshold line at lambda.

    Returns the Figure (also written to out_path).
    """
    frames = [read_datafile(p) for p in curve_paths]
    if not frames:
        raise SchemaError("no input curves")
    lams = set()
    fig, ax = plt.subplots(figsize=(7.2, 4.8))
    for df in frames:
        if "t" not in df.columns or "min_variance" not in df.columns:
            raise SchemaError(f"{df.path}: expected t and min_variance columns "
                              f"(found {df.columns})")
        label, style = curve_style(df)
        ax.plot(df.column("t"), df.column("min_variance"), label=label, **style)
        if "lambda" in df.config:
            lams.add(float(df.config["lambda"]))
    if len(lams) > 1:
        raise SchemaError(f"curves carry different lambda values: {sorted(lams)}")
    if lams:
        lam = lams.pop()
        ax.axhline(lam, color="gray", linewidth=0.9, label=f"threshold = {lam:g}")
    ax.set_xlabel("t")
    ax.set_ylabel("smallest variance of the observable family")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(out_path, format=fmt)
    return fig
