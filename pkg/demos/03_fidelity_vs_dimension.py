"""
Reconstruction fidelity versus dimension
========================================

Noisy simulation for three dark-count levels.  The full published setup
uses 2000 states per point; 200 keeps this script under a minute.  The
same sweep is available as ``puretomo fid-vs-dim``.
"""

from puretomo.experiments import default_config, run_fidelity_vs_dimension

cfg = default_config("fidelity-vs-dim", dims=(2, 4, 8, 16), trials=200)
res = run_fidelity_vs_dimension(cfg, write=False)

print(f"{'d':>3} {'dark/pulse':>11} {'mean F':>10} {'std F':>10}")
for d, dark, n, mean, std in res.summary:
    print(f"{d:>3} {dark:>11.1e} {mean:>10.6f} {std:>10.2e}")

# Writing the table for a plotting tool:
# run_fidelity_vs_dimension(replace(cfg, output_path="fid_vs_dim.csv"))
