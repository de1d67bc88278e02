"""Persisted experiment traces and sweep summaries.

The CLI (`rqcd run|scan-d|compare-d1|ground-energy`) drives the same
runners used here and writes one CSV per run plus a JSON summary; the
plotgen package turns those files into figures.  This script runs a
miniature sweep into a temporary directory and inspects the outputs.
"""
import json
import os
import tempfile

from rqcd.experiment import compare_d1, read_trace

out_dir = os.path.join(tempfile.mkdtemp(), "mini_d1")

summary = compare_d1(
    n_values=(2, 3),
    runs=3,
    algorithms=("rrsgp-fixed", "rrsn-d1"),
    error_tol=1e-5,
    max_iters=20000,
    warm_start_vqa=200,
    out_dir=out_dir,
)

print(f"wrote {len(os.listdir(out_dir)) - 1} trace files + summary.json to {out_dir}\n")
for entry in summary["results"]:
    print(
        f"  {entry['algorithm']:>12} N={entry['n_qubits']}: "
        f"mean {entry['mean_iterations']:7.1f} iterations to reach 1e-5"
    )

######################################################################
# Each trace is a flat CSV with a fixed schema; floats are written with
# shortest round-trip precision so reruns are byte-comparable.

sample = os.path.join(out_dir, summary["results"][0]["files"][0])
cols = read_trace(sample)
print(f"\nfirst trace: {os.path.basename(sample)}")
print("columns:", ", ".join(cols))
print("final row: iter", cols["iter"][-1], "energy_error", cols["energy_error"][-1])

with open(os.path.join(out_dir, "summary.json")) as fh:
    assert json.load(fh) == summary
print("summary.json round-trips")
