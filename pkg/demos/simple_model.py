# One particle in a box with a demon.
#
# Basis |rh>, |rc>, |lh>, |lc>: right/left, hot/cold. The demon moves a hot
# particle from the right to the left and does nothing otherwise. The object
# entropy drops by p log 2, but the demon memory more than makes up for it.

import sys

from maxwell_demon.scenarios import parse_grid, run_figure2_sweep, run_simple_qmd

rep = run_simple_qmd(0.3)
for c in rep.checks:
    print(f"{c.name:<30} {c.residual: .2e}")
print({k: round(v, 7) for k, v in rep.entropies.items()})

# the sweep behind the S0 / S1 / S1+S2 plot, as CSV on stdout
table, sweep = run_figure2_sweep(parse_grid("0.05:0.95:0.05"))
sys.stdout.write(table.to_csv())
print("all rows satisfy S1 < S0 < S1 + S2:", sweep.passed)
