"""
Transmissions and energy as terminal density grows
==================================================
"""

import sys

from dcmulticast.experiments import ExperimentConfig, run_sweep, summarize, write_csv

# 100 nodes in a 1000 m square, 300 m radio range, K=20, each node awake
# in a quarter of the slots.  Fewer trials than the full experiment keep
# this under a few seconds.

cfg = ExperimentConfig(seed=0, trials=5, terminal_fractions=(0.2, 0.5, 0.9))
records = run_sweep(cfg)
summary = summarize(records)

print(f"{'|M|':>4} {'alg':>5} {'tx':>7} {'energy':>9}")
for row in summary.rows:
    print(f"{row.n_terminals:>4} {row.algorithm:>5} {row.transmissions_mean:>7.1f} {row.energy_mean:>9.1f}")

# Reduction of TCS against the strongest baseline at each density.

for red in summary.reductions:
    print(f"|M|={red.n_terminals}: {red.transmissions_pct:+.1f}% transmissions, "
          f"{red.energy_pct:+.1f}% energy vs best baseline ({red.best_baseline})")

# The raw per-trial records are plain CSV.

if "--csv" in sys.argv:
    write_csv(records, sys.stdout)
