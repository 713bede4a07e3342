"""Accelerated Frank-Wolfe solvers over polytopes and trace-bounded matrix domains."""

__version__ = "0.1.0"

from .sets import (  # noqa: F401
    Simplex, L1Ball, VPolytope, Spectrahedron, NuclearBall,
    CapabilityError, project_simplex, project_l1_ball, CountingSet,
)
from .objective import (  # noqa: F401
    SmoothObjective, QuadraticObjective, QuadraticInstance,
    generate_instance, exact_line_search, golden_section, finite_diff_check,
    save_instance, load_instance,
)
from .accel import (  # noqa: F401
    Schedule, lambda_of, nu_of, y_update, horizon_for_accuracy,
    InnerSubproblem, omega_gap, inner_dual_gap, RunTrace, TraceRow, afista_run,
)
from .inner import (  # noqa: F401
    InnerResult, InnerSolverAbort, afw_solve, spfw_solve,
    afw_solver, spfw_solver, exact_projection_solver, recompute_certificate,
    vanilla_fw_run, cgs_run,
)
from .harness import (  # noqa: F401
    ExperimentConfig, ALGORITHMS, CSV_COLUMNS, run_experiment, run_algorithm,
    run_cell, emit_csv, write_manifest, aggregate_runs, loo_axis_average,
    sample_step,
)
