"""AFC memory efficiency modulation by the bias field.

Burning a frequency comb in a Zeeman-split four-level system creates side
holes and anti-holes shifted by the excited and ground splittings.  When
a satellite period matches the comb period the damage is benign; midway
between matching fields the satellites erode the teeth and the echo
efficiency dips.  Writes afc_ratio_I.csv and afc_ratio_III.csv next to
this script.
"""

import csv
from pathlib import Path

import numpy as np

import quadspin.afc as afc
import quadspin.levels as lv
from quadspin.fixture import builtin_fixture
from quadspin.spin_algebra import SpinQuantum

DAFC = 40.0


def run(direction, g_label_ground, g_label_excited, B_grid):
    fx = builtin_fixture()
    spin = SpinQuantum(3)
    stg = lv.solve_levels(fx.ground, fx.field(direction, 1.0), spin)
    ste = lv.solve_levels(fx.excited, fx.field(direction, 1.0), spin)
    g_g = float(stg.g[stg.doublet_index(g_label_ground)])
    g_e = float(ste.g[ste.doublet_index(g_label_excited)])
    row = afc.efficiency_ratio_map(g_g, g_e, B_grid, [DAFC],
                                   finesse=2.0, cycles=4000)[0]
    out = Path(__file__).with_name(f"afc_ratio_{direction}.csv")
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["b_mt", "ratio"])
        w.writerows(zip(B_grid, row))
    print(f"direction {direction}: g_g = {g_g:.2f}, g_e = {g_e:.2f} kHz/mT")
    print(f"  expected dip spacing {DAFC / g_e:.2f} mT (side holes)")
    print(f"  deepest dip at B = {B_grid[int(np.argmin(row))]:.2f} mT,"
          f" ratio {row.min():.3f}")
    print(f"wrote {out}")


def main():
    run("I", 5, 5, np.arange(0.25, 10.01, 0.25))
    run("III", 1, 5, np.arange(0.25, 4.01, 0.2))


if __name__ == "__main__":
    main()
