"""Figure rendering for benchmark trace CSVs.

Consumes the trace CSV schema of the solver harness; contains no solver
logic of its own.
"""

__version__ = "0.1.0"

from .figures import (  # noqa: F401
    CSV_COLUMNS, FigureSpec, build_figure, discover_cells, load_cell,
    mean_iteration_curve, mean_loo_curve, render_figures, sample_step,
)
