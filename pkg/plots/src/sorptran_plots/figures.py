"""Figure builders over the artifact schemas.

Rendering is pinned for byte-reproducibility: Agg backend, fixed dpi,
fixed Software metadata tag. Re-running a builder over unchanged inputs
rewrites an identical file.
"""

from __future__ import annotations

import math
import pathlib
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvin import PlotInputError, read_convergence, read_grid, read_profile

ROLES = ("numerical", "exact", "ic")
SCALES = ("linear", "loglog")
MARKERS = ("o", "s", "^", "v", "D", "p")
SAVE_KW = {"dpi": 120, "metadata": {"Software": "sorptran-plots"}}


@dataclass(frozen=True)
class Series:
    """One labeled input file of a figure."""

    path: pathlib.Path
    label: str
    role: str = "numerical"


@dataclass(frozen=True)
class FigureSpec:
    """Inputs, panel layout and axis scales of one figure."""

    inputs: tuple[Series, ...]
    out_path: pathlib.Path
    panels: str = "qu"
    ncols: int = 3
    scale: str = "linear"
    title: str = ""

    def __post_init__(self):
        if not self.inputs:
            raise PlotInputError("no input series")
        for s in self.inputs:
            if s.role not in ROLES:
                raise PlotInputError(f"{s.label}: unknown role {s.role!r}")
            if not pathlib.Path(s.path).is_file():
                raise PlotInputError(f"{s.path}: no such file")
        if self.scale not in SCALES:
            raise PlotInputError(f"unknown scale {self.scale!r}")
        if not set(self.panels) <= {"u", "q"} or not self.panels:
            raise PlotInputError(f"unknown panel layout {self.panels!r}")
        if self.ncols < 1:
            raise PlotInputError("ncols must be positive")


def _style(series: Series, k: int, markevery=None) -> dict:
    if series.role == "exact":
        return {"color": "black", "linestyle": "-", "linewidth": 1.0,
                "zorder": 1}
    if series.role == "ic":
        return {"color": "0.45", "linestyle": ":", "linewidth": 1.0,
                "zorder": 1}
    style = {"marker": MARKERS[k % len(MARKERS)], "markersize": 3,
             "linewidth": 0.8, "zorder": 2}
    if markevery is not None:
        style["markevery"] = markevery
    return style


def _finish(fig, spec: FigureSpec) -> pathlib.Path:
    out = pathlib.Path(spec.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, **SAVE_KW)
    plt.close(fig)
    return out


def plot_profiles(spec: FigureSpec) -> pathlib.Path:
    """Render 1D solution panels, one per requested variable."""
    profiles = [(s, read_profile(s.path)) for s in spec.inputs]
    names = list(spec.panels)
    fig, axes = plt.subplots(1, len(names),
                             figsize=(4.2 * len(names), 3.4), squeeze=False)
    k = 0
    for series, data in profiles:
        style = _style(series, k, markevery=0.03)
        k += series.role == "numerical"
        for ax, name in zip(axes[0], names):
            ax.plot(data["x"], data[name], label=series.label, **style)
    for ax, name in zip(axes[0], names):
        ax.set_xlabel("x")
        ax.set_ylabel(name)
        if spec.scale == "loglog":
            ax.set_xscale("log")
            ax.set_yscale("log")
    axes[0][0].legend(fontsize=8)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    return _finish(fig, spec)


def plot_cpu_vs_error(spec: FigureSpec) -> pathlib.Path:
    """Render cost against accuracy, one curve per convergence table."""
    fig, ax = plt.subplots(figsize=(4.6, 3.6))
    for k, series in enumerate(spec.inputs):
        data = read_convergence(series.path)
        keep = np.isfinite(data["E"]) & np.isfinite(data["cpu_seconds"])
        if not np.any(keep):
            raise PlotInputError(
                f"{series.path}: no rows with both E and cpu_seconds")
        ax.plot(data["E"][keep], data["cpu_seconds"][keep],
                label=series.label, **_style(series, k))
    if spec.scale == "loglog":
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.invert_xaxis()        # refinement progresses left to right
    ax.set_xlabel("L1 error")
    ax.set_ylabel("cpu seconds")
    ax.legend(fontsize=8)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    return _finish(fig, spec)


def plot_contours(spec: FigureSpec) -> pathlib.Path:
    """Render one contour panel per 2D field, shared levels."""
    grids = [(s, read_grid(s.path)) for s in spec.inputs]
    lo = min(float(np.min(g["u"])) for _, g in grids)
    hi = max(float(np.max(g["u"])) for _, g in grids)
    levels = np.linspace(lo, hi, 11) if hi - lo > 1e-12 else [lo]
    ncols = min(spec.ncols, len(grids))
    nrows = math.ceil(len(grids) / ncols)
    fig, axes = plt.subplots(nrows, ncols,
                             figsize=(3.4 * ncols, 3.2 * nrows),
                             squeeze=False)
    for ax in axes.ravel():
        ax.set_axis_off()
    for ax, (series, g) in zip(axes.ravel(), grids):
        ax.set_axis_on()
        ax.contour(g["x"], g["y"], g["u"], levels=levels, linewidths=0.8)
        ax.set_aspect("equal")
        ax.set_title(series.label, fontsize=9)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    return _finish(fig, spec)
