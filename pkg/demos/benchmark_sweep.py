"""Run a small benchmark grid and emit the per-cell trace CSVs.

This is a desk-scale version of the full sweep (``fwaccel sweep --defaults``).
The emitted CSVs feed the companion plotting package in ``frontend/``.
"""

from fwaccel import ExperimentConfig, emit_csv, run_experiment, write_manifest


def main():
    config = ExperimentConfig(
        n=100, r_values=(5, 10), delta_values=(0.0, 1.0), beta=100.0,
        T=400, seeds=(0, 1, 2),
        algorithms=("afista-afw", "afista-sp-afw", "cgs", "fw"))
    traces = run_experiment(config, log=print)
    out_dir = "results-demo"
    paths = emit_csv(traces, out_dir)
    write_manifest(config, out_dir)
    print(f"\nwrote {len(paths)} trace CSVs and manifest.json to {out_dir}/")
    print("render figures with:  fwaccel-plots --results-dir results-demo")


if __name__ == "__main__":
    main()
