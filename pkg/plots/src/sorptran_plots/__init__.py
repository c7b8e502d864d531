"""Figure generation from solver CSV artifacts.

Reads the documented profile, grid and convergence CSV schemas and
renders publication-style figures. The solver itself is never imported;
the file system is the interface.
"""

from .csvin import PlotInputError, read_convergence, read_grid, read_profile
from .figures import (FigureSpec, Series, plot_contours, plot_cpu_vs_error,
                      plot_profiles)

__all__ = [
    "FigureSpec",
    "PlotInputError",
    "Series",
    "plot_contours",
    "plot_cpu_vs_error",
    "plot_profiles",
    "read_convergence",
    "read_grid",
    "read_profile",
]
